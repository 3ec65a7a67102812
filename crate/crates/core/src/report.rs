//! The all-in-one index report for a sample.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices;
use crate::sample::Sample;

pub const REPORT_SCHEMA: &str = "ineq.report.v1";

/// Selectable statistics of an [`IndexReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKey {
    Gini,
    GiniSigned,
    Gmd,
    IndexI,
    Herfindahl,
    CvSquared,
    E2,
    Renyi2,
}

impl IndexKey {
    pub const ALL: [IndexKey; 8] = [
        IndexKey::Gini,
        IndexKey::GiniSigned,
        IndexKey::Gmd,
        IndexKey::IndexI,
        IndexKey::Herfindahl,
        IndexKey::CvSquared,
        IndexKey::E2,
        IndexKey::Renyi2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKey::Gini => "gini",
            IndexKey::GiniSigned => "gini_signed",
            IndexKey::Gmd => "gmd",
            IndexKey::IndexI => "index_i",
            IndexKey::Herfindahl => "herfindahl",
            IndexKey::CvSquared => "cv_squared",
            IndexKey::E2 => "e2",
            IndexKey::Renyi2 => "renyi2",
        }
    }
}

impl FromStr for IndexKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gini" | "g" => Ok(IndexKey::Gini),
            "gini_signed" | "gini-signed" | "signed" => Ok(IndexKey::GiniSigned),
            "gmd" => Ok(IndexKey::Gmd),
            "index_i" | "i" => Ok(IndexKey::IndexI),
            "herfindahl" | "h" => Ok(IndexKey::Herfindahl),
            "cv_squared" | "cv2" => Ok(IndexKey::CvSquared),
            "e2" => Ok(IndexKey::E2),
            "renyi2" | "r2" => Ok(IndexKey::Renyi2),
            other => Err(Error::InvalidConfig(format!("unknown index {other:?}"))),
        }
    }
}

/// Every computed statistic for one sample, plus the sample's basic
/// moments. Fields that were not requested (or were skipped leniently)
/// are absent from the serialized form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexReport {
    pub schema: String,
    pub n: usize,
    pub mean: f64,
    pub second_moment: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gini: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gini_signed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gmd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_i: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub herfindahl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cv_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renyi2: Option<f64>,
}

impl IndexReport {
    /// Computes the requested statistics. Every key in `required` must
    /// succeed; keys in `lenient` are silently omitted when their
    /// definition does not apply to the data.
    pub fn compute(sample: &Sample, required: &[IndexKey], lenient: &[IndexKey]) -> Result<Self> {
        let mut report = IndexReport {
            schema: REPORT_SCHEMA.to_string(),
            n: sample.n(),
            mean: sample.mean(),
            second_moment: sample.second_moment(),
            gini: None,
            gini_signed: None,
            gmd: None,
            index_i: None,
            herfindahl: None,
            cv_squared: None,
            e2: None,
            renyi2: None,
        };
        for &key in required {
            let value = Self::evaluate(sample, key)?;
            report.set(key, value);
        }
        for &key in lenient {
            if let Ok(value) = Self::evaluate(sample, key) {
                report.set(key, value);
            }
        }
        Ok(report)
    }

    /// Report with every statistic, for samples where all are defined.
    pub fn compute_all(sample: &Sample) -> Result<Self> {
        Self::compute(sample, &IndexKey::ALL, &[])
    }

    fn evaluate(sample: &Sample, key: IndexKey) -> Result<f64> {
        match key {
            IndexKey::Gini => indices::gini_sorted(sample),
            IndexKey::GiniSigned => Ok(indices::gini_signed(sample)),
            IndexKey::Gmd => Ok(indices::gmd(sample)),
            IndexKey::IndexI => Ok(indices::index_i(sample)),
            IndexKey::Herfindahl => indices::herfindahl(sample),
            IndexKey::CvSquared => indices::cv_squared(sample),
            IndexKey::E2 => indices::generalized_entropy(sample, 2.0),
            IndexKey::Renyi2 => {
                let q = indices::shares(sample)?;
                indices::renyi_entropy(&q, 2.0)
            }
        }
    }

    fn set(&mut self, key: IndexKey, value: f64) {
        match key {
            IndexKey::Gini => self.gini = Some(value),
            IndexKey::GiniSigned => self.gini_signed = Some(value),
            IndexKey::Gmd => self.gmd = Some(value),
            IndexKey::IndexI => self.index_i = Some(value),
            IndexKey::Herfindahl => self.herfindahl = Some(value),
            IndexKey::CvSquared => self.cv_squared = Some(value),
            IndexKey::E2 => self.e2 = Some(value),
            IndexKey::Renyi2 => self.renyi2 = Some(value),
        }
    }

    /// `(field, value)` rows in schema order, for the CSV form.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        let mut rows = vec![
            ("n", self.n as f64),
            ("mean", self.mean),
            ("second_moment", self.second_moment),
        ];
        let optional = [
            ("gini", self.gini),
            ("gini_signed", self.gini_signed),
            ("gmd", self.gmd),
            ("index_i", self.index_i),
            ("herfindahl", self.herfindahl),
            ("cv_squared", self.cv_squared),
            ("e2", self.e2),
            ("renyi2", self.renyi2),
        ];
        for (name, value) in optional {
            if let Some(v) = value {
                rows.push((name, v));
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_report_on_positive_sample_is_internally_consistent() {
        let s = Sample::new(vec![1.0, 2.0, 1.0, 90.0, 110.0]).unwrap();
        let r = IndexReport::compute_all(&s).unwrap();
        let n = r.n as f64;
        let i = r.index_i.unwrap();
        let h = r.herfindahl.unwrap();
        let cv2 = r.cv_squared.unwrap();
        let e2 = r.e2.unwrap();
        let r2 = r.renyi2.unwrap();

        assert!((i - (1.0 - 1.0 / (n * h))).abs() < 1e-12);
        assert!((cv2 - i / (1.0 - i)).abs() < 1e-9 * cv2.abs());
        assert!((e2 - cv2 / 2.0).abs() < 1e-9 * e2.abs());
        assert!((r2 - (n * (1.0 - i)).ln()).abs() < 1e-9);
    }

    #[test]
    fn required_failure_propagates() {
        let s = Sample::new(vec![-1.0, 1.0]).unwrap();
        assert!(IndexReport::compute(&s, &[IndexKey::Gini], &[]).is_err());
    }

    #[test]
    fn lenient_failure_is_omitted() {
        let s = Sample::new(vec![-1.0, 1.0]).unwrap();
        let r = IndexReport::compute(
            &s,
            &[IndexKey::GiniSigned, IndexKey::IndexI],
            &[IndexKey::CvSquared],
        )
        .unwrap();
        assert!(r.gini_signed.is_some());
        assert_eq!(r.index_i, Some(1.0));
        assert!(r.cv_squared.is_none()); // zero mean
        assert!(r.gini.is_none());
    }

    #[test]
    fn key_parsing_accepts_short_names() {
        assert_eq!("i".parse::<IndexKey>().unwrap(), IndexKey::IndexI);
        assert_eq!("h".parse::<IndexKey>().unwrap(), IndexKey::Herfindahl);
        assert_eq!("cv2".parse::<IndexKey>().unwrap(), IndexKey::CvSquared);
        assert!("nope".parse::<IndexKey>().is_err());
    }
}
