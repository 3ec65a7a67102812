//! Inequality and concentration statistics of a [`Sample`].
//!
//! Two computation routes exist on purpose. The sorted O(N log N) formulas
//! are the defaults; the quadratic pairwise forms are kept as independent
//! oracles and are capped by [`PAIRWISE_CAP`] unless the `_uncapped`
//! variant is called explicitly. The general index `I_p` has no sorted
//! shortcut for p ∉ {1, 2}, so it is always the double loop, capped at
//! [`GENERAL_INDEX_CAP`].
//!
//! Conventions fixed across the crate: population variance (divide by N),
//! natural logarithms, and a single observation counts as perfect equality
//! (every dispersion index is 0, not an error).

use crate::error::{Error, Result};
use crate::numeric::fsum;
use crate::sample::Sample;

/// Cap on the quadratic oracle forms (`gini_pairwise`, `gmd_pairwise`).
pub const PAIRWISE_CAP: usize = 20_000;

/// Cap on the general `i_p_index` double loop.
pub const GENERAL_INDEX_CAP: usize = 100_000;

/// Classic Gini index via the ascending-order formula
/// `(2/N)·Σ i·x₍ᵢ₎ / Σ x − (N+1)/N`. This is the default route.
pub fn gini_sorted(sample: &Sample) -> Result<f64> {
    let total = sample.total();
    if total <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    let n = sample.n() as f64;
    let weighted = fsum(
        sample
            .sorted()
            .iter()
            .enumerate()
            .map(|(k, &x)| (k as f64 + 1.0) * x),
    );
    Ok(((2.0 / n) * (weighted / total) - (n + 1.0) / n).max(0.0))
}

/// Classic Gini index via the quadratic mean-difference definition
/// `[ΣᵢΣⱼ|xᵢ−xⱼ| / 2N²] / mean`. Kept as the independent oracle for
/// [`gini_sorted`]; refuses samples larger than [`PAIRWISE_CAP`].
pub fn gini_pairwise(sample: &Sample) -> Result<f64> {
    if sample.n() > PAIRWISE_CAP {
        return Err(Error::SampleTooLarge {
            n: sample.n(),
            cap: PAIRWISE_CAP,
        });
    }
    gini_pairwise_uncapped(sample)
}

/// [`gini_pairwise`] without the size cap. Quadratic cost.
pub fn gini_pairwise_uncapped(sample: &Sample) -> Result<f64> {
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    Ok(gmd_pairwise_uncapped(sample) / mean)
}

/// Sign-agnostic Gini index: half the mean absolute difference over the
/// mean absolute value. Coincides with the classic index on nonnegative
/// samples and satisfies `gini_signed(X) = gini_signed(−X)`.
pub fn gini_signed(sample: &Sample) -> f64 {
    (gmd(sample) / sample.mean_abs()).clamp(0.0, 1.0)
}

/// Gini mean difference `ΣᵢΣⱼ|xᵢ−xⱼ| / 2N²` via the sorted form
/// `(2/N²)·Σ i·x₍ᵢ₎ − (N+1)/N · mean`.
pub fn gmd(sample: &Sample) -> f64 {
    let n = sample.n() as f64;
    let weighted = fsum(
        sample
            .sorted()
            .iter()
            .enumerate()
            .map(|(k, &x)| (k as f64 + 1.0) * x),
    );
    ((2.0 / (n * n)) * weighted - (n + 1.0) / n * sample.mean()).max(0.0)
}

/// Pairwise oracle for [`gmd`]; refuses samples larger than [`PAIRWISE_CAP`].
pub fn gmd_pairwise(sample: &Sample) -> Result<f64> {
    if sample.n() > PAIRWISE_CAP {
        return Err(Error::SampleTooLarge {
            n: sample.n(),
            cap: PAIRWISE_CAP,
        });
    }
    Ok(gmd_pairwise_uncapped(sample))
}

/// [`gmd_pairwise`] without the size cap. Quadratic cost.
pub fn gmd_pairwise_uncapped(sample: &Sample) -> f64 {
    let v = sample.values();
    let n = v.len() as f64;
    // Σ over unordered pairs counts each |xᵢ−xⱼ| once; the full double sum
    // is twice that, and the definition divides it by 2N².
    let pair_sum = fsum(
        (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (v[i] - v[j]).abs())),
    );
    pair_sum / (n * n)
}

/// The variance/second-moment inequality index
/// `I(X) = var(X)/mean(X²) = 1 − (ΣX)²/(N·ΣX²)`.
///
/// Equals exactly 1 when the mean is zero; always in `[0, 1]`.
pub fn index_i(sample: &Sample) -> f64 {
    let mean = sample.mean();
    let second = sample.second_moment();
    (1.0 - (mean * mean) / second).clamp(0.0, 1.0)
}

/// Herfindahl–Hirschman concentration index `ΣX² / (ΣX)²`.
pub fn herfindahl(sample: &Sample) -> Result<f64> {
    let total = sample.total();
    if total <= 0.0 {
        return Err(Error::NonPositiveSum);
    }
    let sum_sq = fsum(sample.values().iter().map(|&x| x * x));
    Ok(sum_sq / (total * total))
}

/// The "rich-get-richer" share probabilities `qᵢ = xᵢ / Σx`.
pub fn shares(sample: &Sample) -> Result<Vec<f64>> {
    let total = sample.total();
    if total <= 0.0 {
        return Err(Error::NonPositiveSum);
    }
    Ok(sample.values().iter().map(|&x| x / total).collect())
}

/// Squared coefficient of variation `var / mean²` (population variance).
pub fn cv_squared(sample: &Sample) -> Result<f64> {
    let mean = sample.mean();
    if mean == 0.0 {
        return Err(Error::ZeroMean);
    }
    Ok((sample.variance() / (mean * mean)).max(0.0))
}

/// Rényi entropy `(1/(1−λ))·ln Σ pᵢ^λ` of a probability vector, natural log.
///
/// The vector must be nonnegative and sum to 1 within 1e-9. Order 1 is
/// rejected rather than silently replaced by the Shannon limit.
pub fn renyi_entropy(probabilities: &[f64], lambda: f64) -> Result<f64> {
    if probabilities.is_empty() {
        return Err(Error::InvalidProbabilities {
            reason: "empty probability vector".into(),
        });
    }
    for (i, &p) in probabilities.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidProbabilities {
                reason: format!("entry {i} is {p}, not a probability"),
            });
        }
    }
    let total = fsum(probabilities.iter().copied());
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities {
            reason: format!("probabilities sum to {total}, not 1"),
        });
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidOrder {
            reason: format!("Renyi order must be a finite real >= 0, got {lambda}"),
        });
    }
    if lambda == 1.0 {
        return Err(Error::LambdaOne);
    }
    // Zero entries carry no mass at any order; skipping them also makes the
    // order-0 case count the support rather than the vector length.
    let power_sum = fsum(
        probabilities
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p.powf(lambda)),
    );
    let r = power_sum.ln() / (1.0 - lambda);
    Ok(if r == 0.0 { 0.0 } else { r })
}

/// Generalized entropy `E_θ = [ (1/N)·Σ (xᵢ/μ)^θ − 1 ] / (θ(θ−1))`, with the
/// Theil limit at θ = 1 and the mean-log-deviation limit at θ = 0.
///
/// Values must be strictly positive when θ ≤ 0 (logs and negative powers),
/// and nonnegative otherwise.
pub fn generalized_entropy(sample: &Sample, theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::InvalidOrder {
            reason: format!("theta must be a finite real, got {theta}"),
        });
    }
    let v = sample.values();
    if theta <= 0.0 {
        if let Some(position) = v.iter().position(|&x| x <= 0.0) {
            return Err(Error::NonPositiveValue { position });
        }
    } else if let Some(position) = v.iter().position(|&x| x < 0.0) {
        return Err(Error::NegativeValue { position });
    }
    let mean = sample.mean();
    if mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    let n = sample.n() as f64;
    let value = if theta == 1.0 {
        // Theil: (1/N)·Σ (x/μ)·ln(x/μ), with 0·ln 0 = 0.
        fsum(v.iter().map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                let r = x / mean;
                r * r.ln()
            }
        })) / n
    } else if theta == 0.0 {
        // Mean log deviation: (1/N)·Σ ln(μ/x).
        fsum(v.iter().map(|&x| (mean / x).ln())) / n
    } else {
        let power_mean = fsum(v.iter().map(|&x| (x / mean).powf(theta))) / n;
        (power_mean - 1.0) / (theta * (theta - 1.0))
    };
    Ok(value.max(0.0))
}

/// The general inequality index
/// `I_p(X) = [½·(1/N²)·ΣᵢΣⱼ|xᵢ−xⱼ|^p] / [(1/N)·Σ|xᵢ|^p]`, p ≥ 1.
///
/// `I_1` is the signed Gini index and `I_2` is [`index_i`]; both identities
/// are exercised as cross-route tests rather than special-cased here.
/// Quadratic cost for every p; capped at [`GENERAL_INDEX_CAP`].
pub fn i_p_index(sample: &Sample, p: f64) -> Result<f64> {
    if sample.n() > GENERAL_INDEX_CAP {
        return Err(Error::SampleTooLarge {
            n: sample.n(),
            cap: GENERAL_INDEX_CAP,
        });
    }
    i_p_index_uncapped(sample, p)
}

/// [`i_p_index`] without the size cap. Quadratic cost.
pub fn i_p_index_uncapped(sample: &Sample, p: f64) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidOrder {
            reason: format!("the I_p order must be a finite real >= 1, got {p}"),
        });
    }
    let v = sample.values();
    let n = v.len() as f64;
    let pow = |d: f64| -> f64 {
        if p == 1.0 {
            d
        } else if p == 2.0 {
            d * d
        } else {
            d.powf(p)
        }
    };
    let pair_sum = fsum(
        (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| pow((v[i] - v[j]).abs()))),
    );
    let numerator = pair_sum / (n * n);
    let denominator = fsum(v.iter().map(|&x| pow(x.abs()))) / n;
    Ok((numerator / denominator).clamp(0.0, 1.0))
}

/// Outcome of the second-moment-method check `prob{X = 0} ≤ I(X)`.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    pub prob_zero: f64,
    pub index_i: f64,
    pub holds: bool,
}

/// Checks the Cauchy–Schwarz bound `prob{X = 0} ≤ I(X)` on a nonnegative
/// sample. The bound is a theorem, so `holds` is a perpetual assertion
/// surface rather than something a caller should ever see fail.
pub fn second_moment_bound_check(sample: &Sample) -> Result<BoundCheck> {
    if let Some(position) = sample.values().iter().position(|&x| x < 0.0) {
        return Err(Error::NegativeValue { position });
    }
    let zeros = sample.values().iter().filter(|&&x| x == 0.0).count();
    let prob_zero = zeros as f64 / sample.n() as f64;
    let index_i = index_i(sample);
    Ok(BoundCheck {
        prob_zero,
        index_i,
        holds: prob_zero <= index_i + 1e-12,
    })
}

/// Quantities derived from `I` by the conversion identities.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Conversions {
    /// `N·H = 1/(1−I)`, the reciprocal effective-number fraction.
    pub nh: f64,
    /// `CV² = I/(1−I)`.
    pub cv2: f64,
    /// `E₂ = I/(2(1−I))`.
    pub e2: f64,
    /// `R₂ = ln(N(1−I))`.
    pub r2: f64,
}

/// Converts an index value `I ∈ [0, 1)` into `N·H`, `CV²`, `E₂` and `R₂`.
pub fn convert_from_i(index_i: f64, n: usize) -> Result<Conversions> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "n must be at least 1".into(),
        });
    }
    if !(0.0..=1.0).contains(&index_i) {
        return Err(Error::OutOfRange {
            what: format!("index must lie in [0, 1], got {index_i}"),
        });
    }
    if index_i == 1.0 {
        return Err(Error::DegenerateIndex);
    }
    let complement = 1.0 - index_i;
    Ok(Conversions {
        nh: 1.0 / complement,
        cv2: index_i / complement,
        e2: 0.5 * index_i / complement,
        r2: (n as f64 * complement).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn gini_of_constant_sample_is_zero() {
        for &c in &[1.0, 0.25, 3.5e7] {
            let sample = s(&[c; 7]);
            assert!(gini_pairwise(&sample).unwrap() < 1e-12);
            assert!(gini_sorted(&sample).unwrap() < 1e-12);
        }
    }

    #[test]
    fn gini_of_two_point_sample() {
        let sample = s(&[1.0, 0.0]);
        assert!((gini_pairwise(&sample).unwrap() - 0.5).abs() < 1e-15);
        assert!((gini_sorted(&sample).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gini_of_one_two_three() {
        let sample = s(&[1.0, 2.0, 3.0]);
        assert!((gini_sorted(&sample).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((gini_pairwise(&sample).unwrap() - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn gini_of_single_observation_is_zero() {
        assert_eq!(gini_sorted(&s(&[5.0])).unwrap(), 0.0);
    }

    #[test]
    fn gini_rejects_non_positive_mean() {
        let sample = s(&[-2.0, 1.0]);
        assert!(matches!(gini_sorted(&sample), Err(Error::NonPositiveMean)));
        assert!(matches!(gini_pairwise(&sample), Err(Error::NonPositiveMean)));
    }

    #[test]
    fn pairwise_cap_is_enforced_and_bypassable() {
        let sample = Sample::new((0..PAIRWISE_CAP + 1).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(
            gini_pairwise(&sample),
            Err(Error::SampleTooLarge { .. })
        ));
        assert!(gini_sorted(&sample).is_ok());
    }

    #[test]
    fn signed_gini_on_symmetric_pair() {
        // Brute force: Σ|xᵢ−xⱼ| = 4 over the 2×2 grid, so ½·4/4 = 0.5 and
        // mean|X| = 1.
        let sample = s(&[-1.0, 1.0]);
        assert!((gini_signed(&sample) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn signed_gini_is_sign_symmetric() {
        let sample = s(&[3.0, -1.5, 2.0, 0.5]);
        let negated = s(&[-3.0, 1.5, -2.0, -0.5]);
        assert_eq!(gini_signed(&sample), gini_signed(&negated));
    }

    #[test]
    fn signed_gini_coincides_with_classic_on_nonnegatives() {
        let sample = s(&[1.0, 2.0, 3.0]);
        assert!((gini_signed(&sample) - gini_sorted(&sample).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn gmd_worked_examples() {
        assert!(gmd(&s(&[4.0, 4.0, 4.0])) < 1e-15);
        assert!((gmd(&s(&[0.0, 1.0])) - 0.25).abs() < 1e-15);
        assert!((gmd(&s(&[1.0, 2.0, 3.0])) - 4.0 / 9.0).abs() < 1e-15);
        assert!((gmd_pairwise(&s(&[1.0, 2.0, 3.0])).unwrap() - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn index_i_worked_examples() {
        assert!(index_i(&s(&[2.5, 2.5, 2.5])) < 1e-12);
        assert_eq!(index_i(&s(&[-1.0, 1.0])), 1.0);
        assert!((index_i(&s(&[1.0, 0.0])) - 0.5).abs() < 1e-15);
        assert!((index_i(&s(&[1.0, 2.0, 3.0])) - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn herfindahl_worked_examples() {
        let equal = s(&[3.0; 5]);
        assert!((herfindahl(&equal).unwrap() - 0.2).abs() < 1e-15);

        let concentrated = s(&[1.0, 0.0, 0.0, 0.0]);
        assert!((herfindahl(&concentrated).unwrap() - 1.0).abs() < 1e-15);

        // 1/H of [1,2,1,90,110] is 41616/20206 ≈ 2.0596 (the paper quotes 2.05).
        let mixed = s(&[1.0, 2.0, 1.0, 90.0, 110.0]);
        let h = herfindahl(&mixed).unwrap();
        assert!((h - 20206.0 / 41616.0).abs() < 1e-15);
        assert!((1.0 / h - 2.0595863).abs() < 1e-6);
    }

    #[test]
    fn herfindahl_rejects_non_positive_total() {
        assert!(matches!(
            herfindahl(&s(&[-1.0, 0.5])),
            Err(Error::NonPositiveSum)
        ));
    }

    #[test]
    fn index_vs_herfindahl_identity() {
        let sample = s(&[1.0, 2.0, 1.0, 90.0, 110.0]);
        let h = herfindahl(&sample).unwrap();
        let i = index_i(&sample);
        assert!((i - (1.0 - 1.0 / (5.0 * h))).abs() < 1e-12);
    }

    #[test]
    fn cv_squared_worked_examples() {
        assert!(cv_squared(&s(&[2.0; 4])).unwrap() < 1e-15);
        assert!((cv_squared(&s(&[1.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
        assert!((cv_squared(&s(&[1.0, 2.0, 3.0])).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(matches!(cv_squared(&s(&[-1.0, 1.0])), Err(Error::ZeroMean)));
    }

    #[test]
    fn renyi_on_uniform_and_degenerate_vectors() {
        let n = 8;
        let uniform = vec![1.0 / n as f64; n];
        for &lambda in &[0.0, 0.5, 2.0, 5.0] {
            let r = renyi_entropy(&uniform, lambda).unwrap();
            assert!((r - (n as f64).ln()).abs() < 1e-12, "lambda={lambda}");
        }
        let degenerate = vec![1.0, 0.0, 0.0];
        assert_eq!(renyi_entropy(&degenerate, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn renyi_rejects_bad_input() {
        assert!(matches!(
            renyi_entropy(&[0.5, 0.5], 1.0),
            Err(Error::LambdaOne)
        ));
        assert!(renyi_entropy(&[0.5, 0.4], 2.0).is_err());
        assert!(renyi_entropy(&[-0.1, 1.1], 2.0).is_err());
        assert!(renyi_entropy(&[0.5, 0.5], -1.0).is_err());
    }

    #[test]
    fn renyi_two_of_shares_is_minus_log_herfindahl() {
        let sample = s(&[1.0, 2.0, 1.0, 90.0, 110.0]);
        let q = shares(&sample).unwrap();
        let r2 = renyi_entropy(&q, 2.0).unwrap();
        let h = herfindahl(&sample).unwrap();
        assert!((r2 + h.ln()).abs() < 1e-12);
    }

    #[test]
    fn generalized_entropy_worked_examples() {
        assert!(generalized_entropy(&s(&[3.0; 5]), 2.0).unwrap() < 1e-15);
        assert!(generalized_entropy(&s(&[3.0; 5]), 0.0).unwrap() < 1e-15);
        assert!(generalized_entropy(&s(&[3.0; 5]), 1.0).unwrap() < 1e-15);
        assert!((generalized_entropy(&s(&[1.0, 0.0]), 2.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(
            (generalized_entropy(&s(&[1.0, 2.0, 3.0]), 2.0).unwrap() - 1.0 / 12.0).abs() < 1e-15
        );
    }

    #[test]
    fn generalized_entropy_theta_two_links_to_index() {
        let sample = s(&[1.0, 2.0, 3.0]);
        let e2 = generalized_entropy(&sample, 2.0).unwrap();
        let i = index_i(&sample);
        assert!((i - 2.0 * e2 / (2.0 * e2 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn generalized_entropy_rejects_bad_domains() {
        assert!(matches!(
            generalized_entropy(&s(&[1.0, 0.0]), 0.0),
            Err(Error::NonPositiveValue { position: 1 })
        ));
        assert!(matches!(
            generalized_entropy(&s(&[1.0, -1.0, 3.0]), 2.0),
            Err(Error::NegativeValue { position: 1 })
        ));
    }

    #[test]
    fn i_p_reduces_to_signed_gini_and_index_i() {
        let sample = s(&[1.0, 2.0, 3.0]);
        assert!((i_p_index(&sample, 1.0).unwrap() - 2.0 / 9.0).abs() < 1e-12);
        assert!((i_p_index(&sample, 2.0).unwrap() - index_i(&sample)).abs() < 1e-12);
        assert!(i_p_index(&s(&[5.0; 6]), 3.5).unwrap() < 1e-12);
    }

    #[test]
    fn i_p_rejects_order_below_one() {
        assert!(matches!(
            i_p_index(&s(&[1.0, 2.0]), 0.5),
            Err(Error::InvalidOrder { .. })
        ));
    }

    #[test]
    fn second_moment_bound_examples() {
        let b = second_moment_bound_check(&s(&[0.0, 0.0, 1.0])).unwrap();
        assert!((b.prob_zero - 2.0 / 3.0).abs() < 1e-15);
        assert!((b.index_i - 2.0 / 3.0).abs() < 1e-12);
        assert!(b.holds);

        let b = second_moment_bound_check(&s(&[0.5, 1.0, 2.0])).unwrap();
        assert_eq!(b.prob_zero, 0.0);
        assert!(b.holds);

        let b = second_moment_bound_check(&s(&[0.0, 1.0, 2.0])).unwrap();
        assert!((b.prob_zero - 1.0 / 3.0).abs() < 1e-15);
        assert!((b.index_i - 0.4).abs() < 1e-12);
        assert!(b.holds);

        assert!(second_moment_bound_check(&s(&[-1.0, 1.0])).is_err());
    }

    #[test]
    fn conversions_worked_examples() {
        let c = convert_from_i(0.0, 10).unwrap();
        assert_eq!(c.nh, 1.0);
        assert_eq!(c.cv2, 0.0);
        assert_eq!(c.e2, 0.0);
        assert!((c.r2 - 10f64.ln()).abs() < 1e-15);

        let c = convert_from_i(0.5, 4).unwrap();
        assert_eq!(c.nh, 2.0);
        assert_eq!(c.cv2, 1.0);
        assert_eq!(c.e2, 0.5);

        // I = 0.9 gives CV² = 9, the geometric-series limit Σ_{k≥1} 0.9^k.
        let c = convert_from_i(0.9, 100).unwrap();
        assert!((c.cv2 - 9.0).abs() < 1e-12);

        assert!(matches!(convert_from_i(1.0, 5), Err(Error::DegenerateIndex)));
        assert!(convert_from_i(-0.1, 5).is_err());
        assert!(convert_from_i(0.5, 0).is_err());
    }
}
