//! Marginal sensitivities of the two dispersion concepts.
//!
//! The GMD responds to an observation only through its rank, the variance
//! through its size; these vectors make that contrast computable.

use crate::error::{Error, Result};
use crate::sample::Sample;

/// How the entries of a [`SensitivityVector`] are indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    /// Entry k is the partial with respect to the k-th order statistic
    /// (ascending, k = 1..N).
    Rank,
    /// Entry i is the partial with respect to the i-th observation in
    /// input order.
    Position,
}

#[derive(Debug, Clone)]
pub struct SensitivityVector {
    pub partials: Vec<f64>,
    pub indexing: Indexing,
}

/// Partials of the GMD with respect to each order statistic:
/// `∂GMD/∂x₍ₖ₎ = (2/N²)·[k − (N+1)/2]`.
///
/// Rank-preserving variation is only well defined when the sorted values
/// are strictly increasing, so tied samples are refused; the caller may
/// jitter or accept one-sided validity instead.
pub fn gmd_sensitivity(sample: &Sample) -> Result<SensitivityVector> {
    let sorted = sample.sorted();
    if let Some(rank) = sorted.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::TiedValues { rank: rank + 1 });
    }
    let n = sample.n() as f64;
    let partials = (1..=sample.n())
        .map(|k| (2.0 / (n * n)) * (k as f64 - (n + 1.0) / 2.0))
        .collect();
    Ok(SensitivityVector {
        partials,
        indexing: Indexing::Rank,
    })
}

/// Partials of the population variance with respect to each observation:
/// `∂var/∂xᵢ = (2/N)·[xᵢ − mean]`.
pub fn variance_sensitivity(sample: &Sample) -> SensitivityVector {
    let n = sample.n() as f64;
    let mean = sample.mean();
    let partials = sample
        .values()
        .iter()
        .map(|&x| (2.0 / n) * (x - mean))
        .collect();
    SensitivityVector {
        partials,
        indexing: Indexing::Position,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::fsum;

    #[test]
    fn gmd_partials_match_closed_form() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let v = gmd_sensitivity(&s).unwrap();
        assert_eq!(v.indexing, Indexing::Rank);
        assert!(v.partials[1].abs() < 1e-15); // median rank has no effect
        assert!((v.partials[2] - 2.0 / 9.0).abs() < 1e-15);

        let s = Sample::new(vec![7.0, 3.0]).unwrap();
        let v = gmd_sensitivity(&s).unwrap();
        assert!((v.partials[0] + 0.25).abs() < 1e-15);
    }

    #[test]
    fn gmd_partials_sum_to_zero() {
        let s = Sample::new(vec![0.5, 1.5, 4.0, 9.0, 16.5]).unwrap();
        let v = gmd_sensitivity(&s).unwrap();
        assert_eq!(fsum(v.partials.iter().copied()), 0.0);
    }

    #[test]
    fn gmd_sensitivity_refuses_ties() {
        let s = Sample::new(vec![1.0, 2.0, 2.0]).unwrap();
        assert!(matches!(
            gmd_sensitivity(&s),
            Err(Error::TiedValues { rank: 2 })
        ));
    }

    #[test]
    fn variance_partials_match_closed_form() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let v = variance_sensitivity(&s);
        assert_eq!(v.indexing, Indexing::Position);
        assert!((v.partials[2] - 2.0 / 3.0).abs() < 1e-15);

        let s = Sample::new(vec![0.0, 4.0]).unwrap();
        let v = variance_sensitivity(&s);
        assert!((v.partials[0] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn variance_partials_of_constant_sample_vanish() {
        let s = Sample::new(vec![3.0; 6]).unwrap();
        assert!(variance_sensitivity(&s).partials.iter().all(|&p| p == 0.0));
    }
}
