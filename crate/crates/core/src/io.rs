//! File ingestion and report serialization.
//!
//! Readers reject malformed numerics with the offending line number rather
//! than coercing them. Writers are atomic (temp file + rename) and print
//! floats in shortest round-trip form, so a read-back reproduces every
//! value bit-exactly. CSV dialect: comma separator, `.` decimal, required
//! header row, UTF-8.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::decomposition::GroupedSample;
use crate::error::{Error, Result};
use crate::lab::ExperimentResult;
use crate::numeric::fsum;
use crate::report::IndexReport;
use crate::sample::Sample;

/// A CSV column picked by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl ColumnSelector {
    fn resolve(&self, headers: &csv::StringRecord) -> Result<usize> {
        match self {
            ColumnSelector::Index(i) => {
                if *i < headers.len() {
                    Ok(*i)
                } else {
                    Err(Error::MissingColumn {
                        column: format!("#{i}"),
                    })
                }
            }
            ColumnSelector::Name(name) => headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn {
                    column: name.clone(),
                }),
        }
    }

    fn label(&self) -> String {
        match self {
            ColumnSelector::Index(i) => format!("#{i}"),
            ColumnSelector::Name(name) => name.clone(),
        }
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound {
                path: path.display().to_string(),
            }
        } else {
            Error::Io(e)
        }
    })?;
    Ok(csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(file))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn parse_finite(field: &str, line: u64, what: &str) -> Result<f64> {
    let trimmed = field.trim();
    if trimmed.is_empty() {
        return Err(Error::ParseError {
            line,
            message: format!("{what} is blank"),
        });
    }
    let value: f64 = trimmed.parse().map_err(|_| Error::ParseError {
        line,
        message: format!("{what} {trimmed:?} is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::ParseError {
            line,
            message: format!("{what} {trimmed:?} is not finite"),
        });
    }
    Ok(value)
}

/// Reads one numeric column of a CSV file into a [`Sample`], preserving
/// row order.
pub fn read_sample_csv(path: &Path, column: &ColumnSelector) -> Result<Sample> {
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let idx = column.resolve(&headers)?;
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let field = record.get(idx).ok_or_else(|| Error::ParseError {
            line,
            message: format!("row has no field for column {}", column.label()),
        })?;
        values.push(parse_finite(field, line, "value")?);
    }
    if values.is_empty() {
        return Err(Error::EmptyColumn {
            column: column.label(),
        });
    }
    Sample::new(values)
}

/// Reads a value column and a group-label column into a [`GroupedSample`].
pub fn read_labeled_csv(
    path: &Path,
    value_column: &ColumnSelector,
    group_column: &ColumnSelector,
) -> Result<GroupedSample> {
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let value_idx = value_column.resolve(&headers)?;
    let group_idx = group_column.resolve(&headers)?;
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let field = record.get(value_idx).ok_or_else(|| Error::ParseError {
            line,
            message: format!("row has no field for column {}", value_column.label()),
        })?;
        values.push(parse_finite(field, line, "value")?);
        let label = record.get(group_idx).ok_or_else(|| Error::ParseError {
            line,
            message: format!("row has no field for column {}", group_column.label()),
        })?;
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::ParseError {
                line,
                message: "group label is blank".into(),
            });
        }
        labels.push(label.to_string());
    }
    if values.is_empty() {
        return Err(Error::EmptyColumn {
            column: value_column.label(),
        });
    }
    GroupedSample::new(values, labels)
}

/// One bin of census-style grouped data. `upper = None` marks the open
/// top bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub lower: f64,
    pub upper: Option<f64>,
    pub count: u64,
    pub bin_mean: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct GroupedMetadata {
    pub source: Option<String>,
    pub year: Option<i64>,
}

/// Binned (census-style) income data: ordered, non-overlapping bins with
/// counts and optional bin means.
#[derive(Debug, Clone)]
pub struct GroupedDistribution {
    pub bins: Vec<Bin>,
    pub metadata: GroupedMetadata,
}

impl GroupedDistribution {
    pub fn total_count(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }
}

/// Reads grouped data from a CSV with columns `lower`, `upper` (a number
/// or `open`), `count`, and optionally `mean`.
pub fn read_grouped_csv(path: &Path) -> Result<GroupedDistribution> {
    let mut reader = open_reader(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingColumn {
                column: name.to_string(),
            })
    };
    let lower_idx = col("lower")?;
    let upper_idx = col("upper")?;
    let count_idx = col("count")?;
    let mean_idx = headers.iter().position(|h| h.eq_ignore_ascii_case("mean"));

    let mut bins = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record_line(&record);
        let get = |idx: usize, what: &str| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::ParseError {
                line,
                message: format!("row has no {what} field"),
            })
        };
        let lower = parse_finite(get(lower_idx, "lower")?, line, "lower bound")?;
        let upper_field = get(upper_idx, "upper")?.trim();
        let upper = if upper_field.eq_ignore_ascii_case("open") {
            None
        } else {
            Some(parse_finite(upper_field, line, "upper bound")?)
        };
        let count_field = get(count_idx, "count")?.trim();
        if count_field.starts_with('-') {
            return Err(Error::NegativeCount { line });
        }
        let count: u64 = count_field.parse().map_err(|_| Error::ParseError {
            line,
            message: format!("count {count_field:?} is not a nonnegative integer"),
        })?;
        let bin_mean = match mean_idx {
            Some(idx) => {
                let field = record.get(idx).unwrap_or("").trim();
                if field.is_empty() {
                    None
                } else {
                    Some(parse_finite(field, line, "bin mean")?)
                }
            }
            None => None,
        };
        if let Some(u) = upper {
            if u <= lower {
                return Err(Error::ParseError {
                    line,
                    message: format!("bin [{lower}, {u}) is empty or inverted"),
                });
            }
        }
        if let Some(m) = bin_mean {
            let inside = m >= lower && upper.map_or(true, |u| m <= u);
            if !inside {
                return Err(Error::ParseError {
                    line,
                    message: format!("bin mean {m} lies outside the bin bounds"),
                });
            }
        }
        bins.push(Bin {
            lower,
            upper,
            count,
            bin_mean,
        });
    }
    if bins.is_empty() {
        return Err(Error::EmptyColumn {
            column: "lower".into(),
        });
    }

    for (i, bin) in bins.iter().enumerate() {
        match bin.upper {
            None => {
                if i + 1 != bins.len() {
                    return Err(Error::OpenBinNotLast { row: i + 1 });
                }
            }
            Some(upper) => {
                if let Some(next) = bins.get(i + 1) {
                    if next.lower < upper {
                        return Err(Error::OverlappingBins {
                            first: i + 1,
                            second: i + 2,
                        });
                    }
                }
            }
        }
    }
    if bins.iter().map(|b| b.count).sum::<u64>() == 0 {
        return Err(Error::NonPositiveSum);
    }
    Ok(GroupedDistribution {
        bins,
        metadata: GroupedMetadata {
            source: Some(path.display().to_string()),
            year: None,
        },
    })
}

fn representative(bin: &Bin, top_mean: Option<f64>) -> Result<f64> {
    if let Some(mean) = bin.bin_mean {
        return Ok(mean);
    }
    match bin.upper {
        Some(upper) => Ok(0.5 * (bin.lower + upper)),
        None => {
            let t = top_mean.ok_or(Error::MissingTopMean)?;
            if t < bin.lower {
                return Err(Error::OutOfRange {
                    what: format!(
                        "top mean {t} lies below the open bin's lower bound {}",
                        bin.lower
                    ),
                });
            }
            Ok(t)
        }
    }
}

/// Expands grouped data into a sample: `count` copies of each bin's
/// representative value (its mean when given, the midpoint for closed
/// bins, `top_mean` for an open bin without a mean).
pub fn grouped_to_sample(grouped: &GroupedDistribution, top_mean: Option<f64>) -> Result<Sample> {
    let mut values = Vec::with_capacity(grouped.total_count() as usize);
    for bin in &grouped.bins {
        if bin.count == 0 {
            continue;
        }
        let rep = representative(bin, top_mean)?;
        values.extend(std::iter::repeat(rep).take(bin.count as usize));
    }
    Sample::new(values)
}

/// Solves for the open bin's representative value so the reconstructed
/// sample mean hits `target_mean`. The map from top mean to reconstructed
/// mean is affine, so this is a one-step root.
pub fn fit_top_mean(grouped: &GroupedDistribution, target_mean: f64) -> Result<f64> {
    let open = grouped
        .bins
        .iter()
        .find(|b| b.upper.is_none() && b.bin_mean.is_none() && b.count > 0)
        .ok_or_else(|| {
            Error::TargetMeanUnreachable(
                "no open bin without a mean to adjust; the reconstructed mean is fixed".into(),
            )
        })?;
    let total = grouped.total_count() as f64;
    let fixed_sum = fsum(grouped.bins.iter().filter_map(|bin| {
        if bin.count == 0 || (bin.upper.is_none() && bin.bin_mean.is_none()) {
            None
        } else {
            representative(bin, None).ok().map(|rep| rep * bin.count as f64)
        }
    }));
    let top = (target_mean * total - fixed_sum) / open.count as f64;
    if !top.is_finite() || top < open.lower {
        return Err(Error::TargetMeanUnreachable(format!(
            "hitting mean {target_mean} needs a top value of {top}, below the open bin's lower bound {}",
            open.lower
        )));
    }
    Ok(top)
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(match path.extension() {
        Some(ext) => format!("{}.tmp", ext.to_string_lossy()),
        None => "tmp".to_string(),
    });
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Serializes any report type to pretty JSON, atomically. Every report
/// carries a `schema` field; floats round-trip bit-exactly.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound {
                path: path.display().to_string(),
            }
        } else {
            Error::Io(e)
        }
    })?;
    Ok(serde_json::from_slice(&bytes)?)
}

/// Writes an [`IndexReport`] as `field,value` rows in schema order.
pub fn write_report_csv(report: &IndexReport, path: &Path) -> Result<()> {
    let mut out = String::from("field,value\n");
    out.push_str(&format!("schema,{}\n", report.schema));
    for (field, value) in report.rows() {
        out.push_str(&format!("{field},{value}\n"));
    }
    atomic_write(path, out.as_bytes())
}

/// Writes experiment rows in long format with the fixed header
/// `experiment,family,alpha,n,replication,estimator,value`.
///
/// The `alpha` column carries the Pareto tail exponent when the spec has
/// one and is empty otherwise.
pub fn write_experiment_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    use crate::distributions::DistributionSpec;
    let spec: DistributionSpec = result.spec.parse()?;
    let alpha = spec
        .pareto_alpha()
        .map(|a| a.to_string())
        .unwrap_or_default();
    let family = spec.family();
    let mut out = String::from("experiment,family,alpha,n,replication,estimator,value\n");
    for row in &result.rows {
        for (estimator, value) in &row.values {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                result.experiment, family, alpha, row.n, row.replication, estimator, value
            ));
        }
    }
    atomic_write(path, out.as_bytes())
}

/// Writes a one-column CSV of sample values.
pub fn write_sample_csv(sample: &Sample, column: &str, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(sample.n() * 8 + column.len() + 1);
    out.push_str(column);
    out.push('\n');
    for v in sample.values() {
        out.push_str(&format!("{v}\n"));
    }
    atomic_write(path, out.as_bytes())
}
