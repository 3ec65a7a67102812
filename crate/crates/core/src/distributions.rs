//! Reference distributions: seeded samplers and closed-form index values.
//!
//! Samplers are deterministic functions of `(spec, n, seed)`. The generator
//! is ChaCha8 (see [`GENERATOR_NAME`]), seeded directly; uniform draws are
//! taken from the open interval (0, 1) so inverse-CDF transforms can never
//! produce an infinite value.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Name of the pseudo-random generator, recorded in experiment metadata.
pub const GENERATOR_NAME: &str = "chacha8";

/// A parametric family plus its parameters, the unit of configuration for
/// sampling, closed forms and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum DistributionSpec {
    Pareto { alpha: f64, x_min: f64 },
    Exponential { mean: f64 },
    ShiftedExponential { mean: f64, shift: f64 },
    Bernoulli { p: f64 },
    Gaussian { mu: f64, sigma: f64 },
    ExpOfExponential { mean: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            DistributionSpec::Pareto { alpha, x_min } => {
                if !(alpha > 0.0 && alpha.is_finite()) {
                    return fail(format!("pareto needs alpha > 0, got {alpha}"));
                }
                if !(x_min > 0.0 && x_min.is_finite()) {
                    return fail(format!("pareto needs xmin > 0, got {x_min}"));
                }
            }
            DistributionSpec::Exponential { mean } | DistributionSpec::ExpOfExponential { mean } => {
                if !(mean > 0.0 && mean.is_finite()) {
                    return fail(format!("the exponential mean must be > 0, got {mean}"));
                }
            }
            DistributionSpec::ShiftedExponential { mean, shift } => {
                if !(mean > 0.0 && mean.is_finite()) {
                    return fail(format!("the exponential mean must be > 0, got {mean}"));
                }
                if !(shift >= 0.0 && shift.is_finite()) {
                    return fail(format!("the shift must be >= 0, got {shift}"));
                }
            }
            DistributionSpec::Bernoulli { p } => {
                if !(p > 0.0 && p < 1.0) {
                    return fail(format!("bernoulli needs p in (0, 1), got {p}"));
                }
            }
            DistributionSpec::Gaussian { mu, sigma } => {
                if !mu.is_finite() {
                    return fail(format!("gaussian mu must be finite, got {mu}"));
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return fail(format!("gaussian needs sigma > 0, got {sigma}"));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> &'static str {
        match self {
            DistributionSpec::Pareto { .. } => "pareto",
            DistributionSpec::Exponential { .. } => "exponential",
            DistributionSpec::ShiftedExponential { .. } => "shifted-exponential",
            DistributionSpec::Bernoulli { .. } => "bernoulli",
            DistributionSpec::Gaussian { .. } => "gaussian",
            DistributionSpec::ExpOfExponential { .. } => "exp-of-exponential",
        }
    }

    /// The Pareto tail exponent this spec corresponds to, when there is one
    /// (`exp-of-exponential` with mean m is Pareto with alpha = 1/m).
    pub fn pareto_alpha(&self) -> Option<f64> {
        match *self {
            DistributionSpec::Pareto { alpha, .. } => Some(alpha),
            DistributionSpec::ExpOfExponential { mean } => Some(1.0 / mean),
            _ => None,
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::Pareto { alpha, x_min } => {
                write!(f, "pareto:alpha={alpha},xmin={x_min}")
            }
            DistributionSpec::Exponential { mean } => write!(f, "exponential:mean={mean}"),
            DistributionSpec::ShiftedExponential { mean, shift } => {
                write!(f, "shifted-exponential:mean={mean},shift={shift}")
            }
            DistributionSpec::Bernoulli { p } => write!(f, "bernoulli:p={p}"),
            DistributionSpec::Gaussian { mu, sigma } => {
                write!(f, "gaussian:mu={mu},sigma={sigma}")
            }
            DistributionSpec::ExpOfExponential { mean } => {
                write!(f, "exp-of-exponential:mean={mean}")
            }
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Parses the canonical text form, e.g. `pareto:alpha=1.5,xmin=1`.
    /// Omitted parameters take their documented defaults
    /// (`xmin=1`, `shift=0`, `mu=0`, `sigma=1`).
    fn from_str(s: &str) -> Result<Self> {
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (s.trim(), ""),
        };
        let mut params: Vec<(String, f64)> = Vec::new();
        if !rest.is_empty() {
            for piece in rest.split(',') {
                let (k, v) = piece.split_once('=').ok_or_else(|| {
                    Error::InvalidSpec(format!("expected key=value, got {piece:?}"))
                })?;
                let value: f64 = v.trim().parse().map_err(|_| {
                    Error::InvalidSpec(format!("parameter {k:?} has non-numeric value {v:?}"))
                })?;
                params.push((k.trim().to_ascii_lowercase(), value));
            }
        }
        let mut take = |name: &str| -> Option<f64> {
            params
                .iter()
                .position(|(k, _)| k == name)
                .map(|i| params.remove(i).1)
        };
        let spec = match family.to_ascii_lowercase().as_str() {
            "pareto" => DistributionSpec::Pareto {
                alpha: take("alpha")
                    .ok_or_else(|| Error::InvalidSpec("pareto needs alpha".into()))?,
                x_min: take("xmin").unwrap_or(1.0),
            },
            "exponential" => DistributionSpec::Exponential {
                mean: take("mean")
                    .ok_or_else(|| Error::InvalidSpec("exponential needs mean".into()))?,
            },
            "shifted-exponential" => DistributionSpec::ShiftedExponential {
                mean: take("mean")
                    .ok_or_else(|| Error::InvalidSpec("shifted-exponential needs mean".into()))?,
                shift: take("shift").unwrap_or(0.0),
            },
            "bernoulli" => DistributionSpec::Bernoulli {
                p: take("p").ok_or_else(|| Error::InvalidSpec("bernoulli needs p".into()))?,
            },
            "gaussian" => DistributionSpec::Gaussian {
                mu: take("mu").unwrap_or(0.0),
                sigma: take("sigma").unwrap_or(1.0),
            },
            "exp-of-exponential" => DistributionSpec::ExpOfExponential {
                mean: take("mean")
                    .ok_or_else(|| Error::InvalidSpec("exp-of-exponential needs mean".into()))?,
            },
            other => return Err(Error::InvalidSpec(format!("unknown family {other:?}"))),
        };
        if let Some((k, _)) = params.first() {
            return Err(Error::InvalidSpec(format!(
                "unknown parameter {k:?} for family {family:?}"
            )));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// A uniform draw from the open interval (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// The Pareto quantile map `x_min · u^(−1/α)` for `u ∈ (0, 1)`.
pub fn pareto_quantile(alpha: f64, x_min: f64, u: f64) -> f64 {
    x_min * u.powf(-1.0 / alpha)
}

/// Draws a deterministic sample of size `n` from `spec` under `seed`.
pub fn sample(spec: &DistributionSpec, n: usize, seed: u64) -> Result<Sample> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::InvalidSpec("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = match *spec {
        DistributionSpec::Pareto { alpha, x_min } => (0..n)
            .map(|_| pareto_quantile(alpha, x_min, open_unit(&mut rng)))
            .collect(),
        DistributionSpec::Exponential { mean } => {
            (0..n).map(|_| -mean * open_unit(&mut rng).ln()).collect()
        }
        DistributionSpec::ShiftedExponential { mean, shift } => (0..n)
            .map(|_| shift + -mean * open_unit(&mut rng).ln())
            .collect(),
        DistributionSpec::Bernoulli { p } => (0..n)
            .map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
            .collect(),
        DistributionSpec::Gaussian { mu, sigma } => (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                mu + sigma * z
            })
            .collect(),
        DistributionSpec::ExpOfExponential { mean } => (0..n)
            .map(|_| (-mean * open_unit(&mut rng).ln()).exp())
            .collect(),
    };
    Sample::new(values)
}

/// A closed-form index value together with its qualification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TheoreticalValue {
    /// Plain closed form.
    Exact { value: f64 },
    /// The N → ∞ limit of the empirical estimator; no finite closed form
    /// applies (e.g. Pareto Gini for α ≤ 1, the index I for α ∈ (0, 2)).
    LimitOnly { value: f64 },
    /// A boundary parameter the source formulas do not cover; the reported
    /// value extends the adjacent regime by continuity.
    BoundaryCase { value: f64 },
    /// The defining moment diverges.
    Divergent,
}

impl TheoreticalValue {
    pub fn value(&self) -> Option<f64> {
        match *self {
            TheoreticalValue::Exact { value }
            | TheoreticalValue::LimitOnly { value }
            | TheoreticalValue::BoundaryCase { value } => Some(value),
            TheoreticalValue::Divergent => None,
        }
    }
}

/// Closed-form Gini and I values for a spec, with finiteness notes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoreticalIndices {
    pub spec: String,
    pub gini: TheoreticalValue,
    pub index_i: TheoreticalValue,
    pub notes: Vec<String>,
}

/// Closed-form index values for the supported families.
///
/// Pareto: `G = 1/(2α−1)` for α > 1 and `I = 1/(α−1)²` for α > 2; below
/// those thresholds the estimators converge to 1 and the limit is reported
/// with a marker. For the Gaussian the Gini value is the signed-definition
/// one, `1/√2`.
pub fn theoretical_indices(spec: &DistributionSpec) -> Result<TheoreticalIndices> {
    spec.validate()?;
    let mut notes = Vec::new();
    let (gini, index_i) = match *spec {
        DistributionSpec::Pareto { alpha, .. } => pareto_theory(alpha, &mut notes),
        DistributionSpec::ExpOfExponential { mean } => {
            notes.push(format!(
                "exp of an exponential with mean {mean} is Pareto with alpha = {}, xmin = 1",
                1.0 / mean
            ));
            pareto_theory(1.0 / mean, &mut notes)
        }
        DistributionSpec::Exponential { .. } => (
            TheoreticalValue::Exact { value: 0.5 },
            TheoreticalValue::Exact { value: 0.5 },
        ),
        DistributionSpec::ShiftedExponential { mean, shift } => {
            let total_mean = shift + mean;
            if shift > 0.0 {
                notes.push("shifting an exponential lowers its Gini below 0.5".into());
            }
            (
                TheoreticalValue::Exact {
                    value: 0.5 * mean / total_mean,
                },
                TheoreticalValue::Exact {
                    value: mean * mean / (mean * mean + total_mean * total_mean),
                },
            )
        }
        DistributionSpec::Bernoulli { p } => (
            TheoreticalValue::Exact { value: 1.0 - p },
            TheoreticalValue::Exact { value: 1.0 - p },
        ),
        DistributionSpec::Gaussian { mu, sigma } => {
            notes.push(
                "the Gaussian Gini value uses the signed definition (mean absolute value in the denominator)"
                    .into(),
            );
            (
                TheoreticalValue::Exact {
                    value: std::f64::consts::FRAC_1_SQRT_2,
                },
                TheoreticalValue::Exact {
                    value: sigma * sigma / (mu * mu + sigma * sigma),
                },
            )
        }
    };
    Ok(TheoreticalIndices {
        spec: spec.to_string(),
        gini,
        index_i,
        notes,
    })
}

fn pareto_theory(alpha: f64, notes: &mut Vec<String>) -> (TheoreticalValue, TheoreticalValue) {
    let gini = if alpha > 1.0 {
        TheoreticalValue::Exact {
            value: 1.0 / (2.0 * alpha - 1.0),
        }
    } else {
        notes.push(format!(
            "the mean diverges for alpha = {alpha} <= 1; the empirical Gini converges to 1"
        ));
        TheoreticalValue::LimitOnly { value: 1.0 }
    };
    let index_i = if alpha > 2.0 {
        TheoreticalValue::Exact {
            value: 1.0 / ((alpha - 1.0) * (alpha - 1.0)),
        }
    } else if alpha == 2.0 {
        notes.push(
            "alpha = 2 sits on the Gaussian-domain boundary the limit statements do not cover; \
             1 is reported by continuity from alpha < 2"
                .into(),
        );
        TheoreticalValue::BoundaryCase { value: 1.0 }
    } else {
        notes.push(format!(
            "the variance diverges for alpha = {alpha} < 2; the empirical index converges to 1"
        ));
        TheoreticalValue::LimitOnly { value: 1.0 }
    };
    (gini, index_i)
}

/// A possibly divergent moment value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MomentValue {
    Finite { value: f64 },
    Divergent,
}

/// The Pareto raw moment `E(X^μ) = α·x_min^μ/(α − μ)` for `0 < μ < α`,
/// divergent for `μ ≥ α`.
pub fn pareto_moment(alpha: f64, x_min: f64, mu: f64) -> Result<MomentValue> {
    DistributionSpec::Pareto { alpha, x_min }.validate()?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidSpec(format!(
            "the moment order must be > 0, got {mu}"
        )));
    }
    if mu >= alpha {
        Ok(MomentValue::Divergent)
    } else {
        Ok(MomentValue::Finite {
            value: alpha * x_min.powf(mu) / (alpha - mu),
        })
    }
}

/// The tail exponent where the theoretical I(α) and G(α) curves cross:
/// `2 + √2`, the root of `(α−1)² = 2α−1` above 2.
pub fn crossover_alpha() -> f64 {
    2.0 + std::f64::consts::SQRT_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text_form_round_trips() {
        let specs = [
            "pareto:alpha=1.5,xmin=1",
            "exponential:mean=0.6666666666666666",
            "shifted-exponential:mean=1,shift=2.5",
            "bernoulli:p=0.3",
            "gaussian:mu=0,sigma=1",
            "exp-of-exponential:mean=0.5",
        ];
        for text in specs {
            let spec: DistributionSpec = text.parse().unwrap();
            let round: DistributionSpec = spec.to_string().parse().unwrap();
            assert_eq!(spec, round, "{text}");
        }
    }

    #[test]
    fn parse_rejects_nonsense() {
        assert!("weibull:k=2".parse::<DistributionSpec>().is_err());
        assert!("pareto:alpha=0".parse::<DistributionSpec>().is_err());
        assert!("pareto:xmin=1".parse::<DistributionSpec>().is_err());
        assert!("bernoulli:p=1".parse::<DistributionSpec>().is_err());
        assert!("pareto:alpha=1,foo=2".parse::<DistributionSpec>().is_err());
        assert!("gaussian:sigma=-1".parse::<DistributionSpec>().is_err());
    }

    #[test]
    fn pareto_quantile_example() {
        assert!((pareto_quantile(2.0, 1.0, 0.25) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = DistributionSpec::Pareto {
            alpha: 1.5,
            x_min: 1.0,
        };
        let a = sample(&spec, 1000, 7).unwrap();
        let b = sample(&spec, 1000, 7).unwrap();
        assert_eq!(a.values(), b.values());
        let c = sample(&spec, 1000, 8).unwrap();
        assert_ne!(a.values(), c.values());
    }

    #[test]
    fn pareto_draws_respect_support() {
        let spec = DistributionSpec::Pareto {
            alpha: 0.5,
            x_min: 2.0,
        };
        let s = sample(&spec, 5000, 3).unwrap();
        assert!(s.values().iter().all(|&x| x >= 2.0 && x.is_finite()));
    }

    #[test]
    fn bernoulli_draws_are_zero_one() {
        let spec = DistributionSpec::Bernoulli { p: 0.3 };
        let s = sample(&spec, 2000, 11).unwrap();
        assert!(s.values().iter().all(|&x| x == 0.0 || x == 1.0));
        let frac = s.values().iter().sum::<f64>() / 2000.0;
        assert!((frac - 0.3).abs() < 0.05);
    }

    #[test]
    fn theoretical_pareto_values() {
        let t = theoretical_indices(&"pareto:alpha=1.5".parse().unwrap()).unwrap();
        assert_eq!(t.gini, TheoreticalValue::Exact { value: 0.5 });
        assert_eq!(t.index_i, TheoreticalValue::LimitOnly { value: 1.0 });

        let t = theoretical_indices(&"pareto:alpha=3".parse().unwrap()).unwrap();
        assert_eq!(t.gini, TheoreticalValue::Exact { value: 0.2 });
        assert_eq!(t.index_i, TheoreticalValue::Exact { value: 0.25 });

        let t = theoretical_indices(&"pareto:alpha=0.8".parse().unwrap()).unwrap();
        assert_eq!(t.gini, TheoreticalValue::LimitOnly { value: 1.0 });

        let t = theoretical_indices(&"pareto:alpha=2".parse().unwrap()).unwrap();
        assert_eq!(t.index_i, TheoreticalValue::BoundaryCase { value: 1.0 });
    }

    #[test]
    fn theoretical_bernoulli_and_exponential() {
        let t = theoretical_indices(&"bernoulli:p=0.9".parse().unwrap()).unwrap();
        assert!((t.gini.value().unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(t.gini, t.index_i);

        let t = theoretical_indices(&"exponential:mean=5".parse().unwrap()).unwrap();
        assert_eq!(t.gini.value(), Some(0.5));
        assert_eq!(t.index_i.value(), Some(0.5));
    }

    #[test]
    fn theoretical_gaussian() {
        let t = theoretical_indices(&"gaussian:mu=0,sigma=1".parse().unwrap()).unwrap();
        assert!((t.gini.value().unwrap() - 0.7071067811865476).abs() < 1e-15);
        assert_eq!(t.index_i.value(), Some(1.0));

        let t = theoretical_indices(&"gaussian:mu=2,sigma=1".parse().unwrap()).unwrap();
        assert!((t.index_i.value().unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn pareto_moments() {
        assert_eq!(
            pareto_moment(3.0, 1.0, 1.0).unwrap(),
            MomentValue::Finite { value: 1.5 }
        );
        assert_eq!(
            pareto_moment(3.0, 1.0, 2.0).unwrap(),
            MomentValue::Finite { value: 3.0 }
        );
        assert_eq!(pareto_moment(1.5, 1.0, 2.0).unwrap(), MomentValue::Divergent);
        assert_eq!(pareto_moment(1.5, 1.0, 1.5).unwrap(), MomentValue::Divergent);
        assert!(pareto_moment(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn crossover_sits_where_the_curves_meet() {
        let a = crossover_alpha();
        let i = 1.0 / ((a - 1.0) * (a - 1.0));
        let g = 1.0 / (2.0 * a - 1.0);
        assert!((i - g).abs() < 1e-12);
        assert!((a - 3.414213562373095).abs() < 1e-12);

        // I > G at 3, I < G at 4.
        assert!(1.0 / 4.0 > 1.0 / 5.0);
        assert!(1.0 / 9.0 < 1.0 / 7.0);
    }
}
