//! Monte Carlo experiment harness for the stability, convergence and
//! one-big-jump behavior of the two estimators.
//!
//! Replications are independent: replication `r` of grid point `g` draws
//! its sample from `stream_seed(stream_seed(master, g), r)` (single-size
//! experiments use grid point 0), so results do not depend on execution
//! order and replications run in parallel. Rows are merged by replication
//! id; the summary is a single pass over the merged table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{sample, DistributionSpec, GENERATOR_NAME};
use crate::error::{Error, Result};
use crate::indices::{gini_sorted, index_i};
use crate::numeric::{fsum, linear_fit, quantile_sorted};
use crate::sample::Sample;
use crate::seeding::stream_seed;

pub const EXPERIMENT_SCHEMA: &str = "ineq.experiment.v1";

/// Bootstrap resamples behind a slope confidence band.
const BOOTSTRAP_ROUNDS: usize = 200;
/// Seed stream reserved for the bootstrap (grid streams are 0..grid len).
const BOOTSTRAP_STREAM: u64 = 0xB00_757A9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub spec: DistributionSpec,
    pub sample_size: usize,
    pub replications: usize,
    pub master_seed: u64,
    /// Ascending sample sizes for convergence experiments.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_grid: Option<Vec<usize>>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.sample_size < 2 {
            return Err(Error::InvalidConfig(
                "sample size must be at least 2".into(),
            ));
        }
        if self.replications < 1 {
            return Err(Error::InvalidConfig(
                "at least one replication is required".into(),
            ));
        }
        if let Some(grid) = &self.size_grid {
            if grid.len() < 2 {
                return Err(Error::InvalidConfig(
                    "the size grid needs at least two points".into(),
                ));
            }
            if grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig(
                    "the size grid must be strictly increasing".into(),
                ));
            }
            if grid[0] < 2 {
                return Err(Error::InvalidConfig(
                    "grid sample sizes must be at least 2".into(),
                ));
            }
        }
        Ok(())
    }
}

/// One replication's estimator values, keyed by estimator name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRow {
    pub replication: usize,
    pub seed: u64,
    pub n: usize,
    pub values: Vec<(String, f64)>,
}

/// Five-number-plus summary of one estimator at one sample size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub estimator: String,
    pub n: usize,
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (n−1), 0 for a single replication.
    pub sd: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Least-squares slope of `ln median(1−I_N)` against `ln N`, with a
/// replication-bootstrap confidence band.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// 2.5% / 97.5% percentile band of the bootstrap slope distribution.
    pub ci_low: f64,
    pub ci_high: f64,
    pub bootstrap_sd: f64,
    /// The fitted points as `(ln n, ln median(1−I_N))`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema: String,
    pub experiment: String,
    pub spec: String,
    pub generator: String,
    pub master_seed: u64,
    pub replications: usize,
    pub rows: Vec<ReplicationRow>,
    pub summaries: Vec<EstimatorSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slopes: Option<SlopeFit>,
}

impl ExperimentResult {
    fn new(experiment: &str, spec: &DistributionSpec, master_seed: u64, replications: usize) -> Self {
        ExperimentResult {
            schema: EXPERIMENT_SCHEMA.to_string(),
            experiment: experiment.to_string(),
            spec: spec.to_string(),
            generator: GENERATOR_NAME.to_string(),
            master_seed,
            replications,
            rows: Vec::new(),
            summaries: Vec::new(),
            slopes: None,
        }
    }

    /// Recomputes the per-(estimator, n) summaries from the rows.
    pub fn summarize(&mut self) {
        let mut keys: Vec<(String, usize)> = Vec::new();
        for row in &self.rows {
            for (name, _) in &row.values {
                let key = (name.clone(), row.n);
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
        self.summaries = keys
            .into_iter()
            .map(|(estimator, n)| {
                let mut values: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|row| row.n == n)
                    .flat_map(|row| {
                        row.values
                            .iter()
                            .filter(|(name, _)| *name == estimator)
                            .map(|&(_, v)| v)
                    })
                    .collect();
                values.sort_by(f64::total_cmp);
                summarize_sorted(&estimator, n, &values)
            })
            .collect();
    }

    /// Summary row for one estimator at one n, if present.
    pub fn summary(&self, estimator: &str, n: usize) -> Option<&EstimatorSummary> {
        self.summaries
            .iter()
            .find(|s| s.estimator == estimator && s.n == n)
    }

    /// The grid medians of `1 − I_N`, as `(n, median)` pairs.
    pub fn one_minus_index_medians(&self) -> Vec<(usize, f64)> {
        self.summaries
            .iter()
            .filter(|s| s.estimator == "index_i")
            .map(|s| (s.n, 1.0 - s.median))
            .collect()
    }
}

fn summarize_sorted(estimator: &str, n: usize, sorted: &[f64]) -> EstimatorSummary {
    let count = sorted.len();
    let mean = fsum(sorted.iter().copied()) / count as f64;
    let sd = if count < 2 {
        0.0
    } else {
        (fsum(sorted.iter().map(|&v| (v - mean) * (v - mean))) / (count as f64 - 1.0)).sqrt()
    };
    EstimatorSummary {
        estimator: estimator.to_string(),
        n,
        count,
        mean,
        sd,
        min: sorted[0],
        q1: quantile_sorted(sorted, 0.25),
        median: quantile_sorted(sorted, 0.5),
        q3: quantile_sorted(sorted, 0.75),
        max: sorted[count - 1],
    }
}

/// Runs replications in parallel; each worker returns one row and errors
/// carry the replication id.
fn run_rows<F>(grid: &[usize], replications: usize, master_seed: u64, f: F) -> Result<Vec<ReplicationRow>>
where
    F: Fn(u64, usize) -> Result<Vec<(String, f64)>> + Sync,
{
    let jobs: Vec<(usize, usize, u64)> = grid
        .iter()
        .enumerate()
        .flat_map(|(g, &n)| {
            let grid_master = stream_seed(master_seed, g as u64);
            (0..replications).map(move |r| (n, r, stream_seed(grid_master, r as u64)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(n, replication, seed)| {
            let values = f(seed, n).map_err(|e| e.in_replication(replication))?;
            Ok(ReplicationRow {
                replication,
                seed,
                n,
                values,
            })
        })
        .collect()
}

/// Dispersion of `G_N` and `I_N` across replications at a fixed sample
/// size: one fresh sample per replication, both estimators per sample.
pub fn run_stability(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let mut result = ExperimentResult::new("stability", &config.spec, config.master_seed, config.replications);
    result.rows = run_rows(
        &[config.sample_size],
        config.replications,
        config.master_seed,
        |seed, n| {
            let s = sample(&config.spec, n, seed)?;
            Ok(vec![
                ("gini".to_string(), gini_sorted(&s)?),
                ("index_i".to_string(), index_i(&s)),
            ])
        },
    )?;
    result.summarize();
    Ok(result)
}

/// Decay of `1 − I_N` along a size grid, with a log-log slope fit.
///
/// Only Pareto tails in (0, 2) have a convergence claim to measure, and a
/// meaningful fit needs a grid spanning at least 1.5 decades.
pub fn run_convergence(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let grid = config
        .size_grid
        .clone()
        .ok_or_else(|| Error::InvalidConfig("convergence needs a size grid".into()))?;
    let span = grid[grid.len() - 1] as f64 / grid[0] as f64;
    if span.log10() < 1.5 - 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "the size grid must span at least 1.5 decades, got {:.2}",
            span.log10()
        )));
    }
    let alpha = match config.spec {
        DistributionSpec::Pareto { alpha, .. } => alpha,
        _ => {
            return Err(Error::InvalidConfig(
                "convergence experiments are defined for Pareto specs".into(),
            ))
        }
    };
    if alpha >= 2.0 {
        return Err(Error::InvalidAlpha(format!(
            "1 − I_N converges to 0 only for alpha in (0, 2), got {alpha}"
        )));
    }

    let mut result = ExperimentResult::new("convergence", &config.spec, config.master_seed, config.replications);
    result.rows = run_rows(&grid, config.replications, config.master_seed, |seed, n| {
        let s = sample(&config.spec, n, seed)?;
        Ok(vec![("index_i".to_string(), index_i(&s))])
    })?;
    result.summarize();
    result.slopes = Some(fit_slope(&result, &grid, config));
    Ok(result)
}

fn fit_slope(result: &ExperimentResult, grid: &[usize], config: &ExperimentConfig) -> SlopeFit {
    // Medians of 1−I per grid point; the replication distributions are
    // themselves heavy-tailed, so the median is the stable center.
    let per_n: Vec<Vec<f64>> = grid
        .iter()
        .map(|&n| {
            let mut v: Vec<f64> = result
                .rows
                .iter()
                .filter(|row| row.n == n)
                .flat_map(|row| row.values.iter().map(|&(_, value)| 1.0 - value))
                .collect();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();

    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = per_n
        .iter()
        .map(|v| quantile_sorted(v, 0.5).max(f64::MIN_POSITIVE).ln())
        .collect();
    let (slope, intercept, r_squared) = linear_fit(&xs, &ys);
    let points = xs.iter().copied().zip(ys.iter().copied()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(config.master_seed, BOOTSTRAP_STREAM));
    let mut slopes = Vec::with_capacity(BOOTSTRAP_ROUNDS);
    for _ in 0..BOOTSTRAP_ROUNDS {
        let ys_b: Vec<f64> = per_n
            .iter()
            .map(|v| {
                let mut draw: Vec<f64> = (0..v.len())
                    .map(|_| v[rng.random_range(0..v.len())])
                    .collect();
                draw.sort_by(f64::total_cmp);
                quantile_sorted(&draw, 0.5).max(f64::MIN_POSITIVE).ln()
            })
            .collect();
        slopes.push(linear_fit(&xs, &ys_b).0);
    }
    slopes.sort_by(f64::total_cmp);
    let mean_b = fsum(slopes.iter().copied()) / slopes.len() as f64;
    let bootstrap_sd = (fsum(slopes.iter().map(|&s| (s - mean_b) * (s - mean_b)))
        / (slopes.len() as f64 - 1.0))
        .sqrt();
    SlopeFit {
        slope,
        intercept,
        r_squared,
        ci_low: quantile_sorted(&slopes, 0.025),
        ci_high: quantile_sorted(&slopes, 0.975),
        bootstrap_sd,
        points,
    }
}

/// Result of the one-big-jump experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BigJumpReport {
    /// Mean over replications of `ΣX / max X`.
    pub mean_ratio: f64,
    /// The asymptotic value `1/(1−α)`.
    pub theory: f64,
    /// Mean over replications of the per-sample `max X / ΣX`.
    /// Converges to the mean largest component of the limiting share
    /// distribution (≈ 0.62 at α = 0.5), not to `1 − α`.
    pub mean_max_share: f64,
    /// The share implied by the ratio, `1 / mean_ratio`; this is the
    /// quantity that converges to `1 − α`.
    pub implied_share: f64,
    pub result: ExperimentResult,
}

/// Measures `ΣX/max X` for Pareto samples with tail exponent in (0, 1),
/// where the sum is dominated by its largest term.
pub fn run_big_jump(alpha: f64, n: usize, replications: usize, seed: u64) -> Result<BigJumpReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(format!(
            "the one-big-jump regime needs alpha in (0, 1), got {alpha}"
        )));
    }
    let spec = DistributionSpec::Pareto { alpha, x_min: 1.0 };
    let config = ExperimentConfig {
        spec,
        sample_size: n,
        replications,
        master_seed: seed,
        size_grid: None,
    };
    config.validate()?;

    let mut result = ExperimentResult::new("bigjump", &spec, seed, replications);
    result.rows = run_rows(&[n], replications, seed, |seed, n| {
        let s = sample(&spec, n, seed)?;
        let total = s.total();
        let max = s.max();
        Ok(vec![
            ("sum_over_max".to_string(), total / max),
            ("max_share".to_string(), max / total),
        ])
    })?;
    result.summarize();

    let mean_ratio = result.summary("sum_over_max", n).expect("summary").mean;
    let mean_max_share = result.summary("max_share", n).expect("summary").mean;
    Ok(BigJumpReport {
        mean_ratio,
        theory: 1.0 / (1.0 - alpha),
        mean_max_share,
        implied_share: 1.0 / mean_ratio,
        result,
    })
}

/// The headline demonstration: Z exponential with mean 2/3 and exp(Z)
/// (a Pareto with α = 1.5) share the Gini value 0.5, while I separates
/// them — `I_N(exp Z)` drifts toward 1 with N.
///
/// Each replication draws one Z sample and transforms it elementwise, so
/// the two estimator pairs see identical draws.
pub fn run_prop1_check(replications: usize, n: usize, seed: u64) -> Result<ExperimentResult> {
    let spec = DistributionSpec::Exponential { mean: 2.0 / 3.0 };
    let config = ExperimentConfig {
        spec,
        sample_size: n,
        replications,
        master_seed: seed,
        size_grid: None,
    };
    config.validate()?;

    let mut result = ExperimentResult::new("prop1", &spec, seed, replications);
    result.rows = run_rows(&[n], replications, seed, |seed, n| {
        let z = sample(&spec, n, seed)?;
        let exp_z = Sample::new(z.values().iter().map(|&v| v.exp()).collect())?;
        Ok(vec![
            ("gini_z".to_string(), gini_sorted(&z)?),
            ("gini_exp_z".to_string(), gini_sorted(&exp_z)?),
            ("index_i_z".to_string(), index_i(&z)),
            ("index_i_exp_z".to_string(), index_i(&exp_z)),
        ])
    })?;
    result.summarize();
    Ok(result)
}

/// Atkinson's top-share reconstruction `G ≈ G*·(1−S) + S`, where `G*` is
/// the Gini of the population below the top group and `S` the top group's
/// income share.
pub fn atkinson_approx(gini_rest: f64, top_share: f64) -> Result<f64> {
    for (name, v) in [("gini_rest", gini_rest), ("top_share", top_share)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                what: format!("{name} must lie in [0, 1], got {v}"),
            });
        }
    }
    Ok(gini_rest * (1.0 - top_share) + top_share)
}
