use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::numeric::fsum;

/// A finite sequence of real observations, the universal input of every
/// index in this crate.
///
/// Construction enforces the invariants the index definitions assume:
/// at least one value, every value finite, and not all values zero (the
/// degenerate case every ratio is undefined for). Negative zeros are
/// canonicalized to `+0.0` so equal values are bitwise equal.
///
/// The ascending copy used by the sorted formulas is built lazily and
/// cached; a `Sample` is therefore cheap to pass around and safe to share
/// across threads read-only.
#[derive(Debug, Clone)]
pub struct Sample {
    values: Vec<f64>,
    sorted: OnceLock<Vec<f64>>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { position });
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(Error::AllZero);
        }
        let values = values
            .into_iter()
            .map(|v| if v == 0.0 { 0.0 } else { v })
            .collect();
        Ok(Self {
            values,
            sorted: OnceLock::new(),
        })
    }

    /// Number of observations (always ≥ 1).
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ascending stable-sorted copy of the values, built on first use.
    pub fn sorted(&self) -> &[f64] {
        self.sorted.get_or_init(|| {
            let mut v = self.values.clone();
            v.sort_by(f64::total_cmp);
            v
        })
    }

    /// Exactly rounded total of the values.
    pub fn total(&self) -> f64 {
        fsum(self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.n() as f64
    }

    /// Mean of the squared values, `mean(X²)`.
    pub fn second_moment(&self) -> f64 {
        fsum(self.values.iter().map(|&x| x * x)) / self.n() as f64
    }

    /// Population variance (divide-by-N), computed from centered squares.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        fsum(self.values.iter().map(|&x| (x - m) * (x - m))) / self.n() as f64
    }

    /// Mean of absolute values, the denominator of the signed Gini ratio.
    /// Strictly positive by the not-all-zero invariant.
    pub fn mean_abs(&self) -> f64 {
        fsum(self.values.iter().map(|&x| x.abs())) / self.n() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(matches!(Sample::new(vec![]), Err(Error::EmptySample)));
    }

    #[test]
    fn rejects_non_finite() {
        let err = Sample::new(vec![1.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::NonFiniteValue { position: 1 }));
        assert!(Sample::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_all_zero() {
        assert!(matches!(Sample::new(vec![0.0, -0.0, 0.0]), Err(Error::AllZero)));
    }

    #[test]
    fn single_observation_is_valid() {
        let s = Sample::new(vec![5.0]).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.mean(), 5.0);
    }

    #[test]
    fn sorted_cache_is_ascending_permutation() {
        let s = Sample::new(vec![3.0, 1.0, 2.0, 1.0]).unwrap();
        assert_eq!(s.sorted(), &[1.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.values(), &[3.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn negative_zero_is_canonicalized() {
        let s = Sample::new(vec![-0.0, 1.0]).unwrap();
        assert!(s.values()[0].is_sign_positive());
    }

    #[test]
    fn moments_on_small_sample() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.mean(), 2.0);
        assert!((s.second_moment() - 14.0 / 3.0).abs() < 1e-15);
        assert!((s.variance() - 2.0 / 3.0).abs() < 1e-15);
    }
}
