//! Subgroup decomposition of E₂ (and therefore of I).
//!
//! E₂ is additively decomposable: the pooled value splits exactly into a
//! within-group part `Σ_g w_g·E₂(g)` with weights `w_g = (n_g/N)(μ_g/μ)²`
//! and a between-group part, the E₂ of the sample with every value
//! replaced by its group mean. I itself is a monotone transform of E₂ and
//! is not additively decomposable, so shares are reported on the E₂ scale
//! and only the total is mapped to I.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::{generalized_entropy, index_i};
use crate::numeric::fsum;
use crate::sample::Sample;

pub const DECOMPOSITION_SCHEMA: &str = "ineq.decomposition.v1";

/// Observations with group labels, in input order.
#[derive(Debug, Clone)]
pub struct GroupedSample {
    values: Vec<f64>,
    labels: Vec<String>,
    /// Unique labels in first-appearance order, with member positions.
    groups: Vec<(String, Vec<usize>)>,
}

impl GroupedSample {
    pub fn new(values: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if values.len() != labels.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                labels: labels.len(),
            });
        }
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(position) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { position });
        }
        if let Some(position) = labels.iter().position(|l| l.is_empty()) {
            return Err(Error::EmptyGroup {
                id: format!("(blank label at position {position})"),
            });
        }
        let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            match groups.iter_mut().find(|(id, _)| id == label) {
                Some((_, members)) => members.push(i),
                None => groups.push((label.clone(), vec![i])),
            }
        }
        Ok(Self {
            values,
            labels,
            groups,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn groups(&self) -> &[(String, Vec<usize>)] {
        &self.groups
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupRow {
    pub id: String,
    pub size: usize,
    pub mean: f64,
    pub e2: f64,
    /// `w_g = (n_g/N)·(μ_g/μ)²`.
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub schema: String,
    pub n: usize,
    pub total_e2: f64,
    pub within_e2: f64,
    pub between_e2: f64,
    /// `2·total_e2 / (2·total_e2 + 1)`, the pooled index I.
    pub total_i: f64,
    /// Share of E₂ from within groups; absent when total E₂ is zero
    /// (perfect equality leaves the split undefined).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_share: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub between_share: Option<f64>,
    pub per_group: Vec<GroupRow>,
}

/// Decomposes the pooled E₂ into within- and between-group components.
///
/// Values must be nonnegative with a positive overall mean. A group whose
/// values are all zero has weight zero and contributes nothing within.
pub fn decompose_e2(grouped: &GroupedSample) -> Result<DecompositionResult> {
    if let Some(position) = grouped.values().iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeValue { position });
    }
    let pooled = Sample::new(grouped.values().to_vec())?;
    let overall_mean = pooled.mean();
    if overall_mean <= 0.0 {
        return Err(Error::NonPositiveMean);
    }
    let n = pooled.n() as f64;
    let total_e2 = generalized_entropy(&pooled, 2.0)?;

    let mut per_group = Vec::with_capacity(grouped.groups().len());
    for (id, members) in grouped.groups() {
        let values: Vec<f64> = members.iter().map(|&i| grouped.values()[i]).collect();
        let size = values.len();
        let group_total = fsum(values.iter().copied());
        let mean = group_total / size as f64;
        let (e2, weight) = if group_total == 0.0 {
            // All-zero group: zero mean, zero weight, no within contribution.
            (0.0, 0.0)
        } else {
            let group_sample = Sample::new(values)?;
            let ratio = mean / overall_mean;
            (
                generalized_entropy(&group_sample, 2.0)?,
                (size as f64 / n) * ratio * ratio,
            )
        };
        per_group.push(GroupRow {
            id: id.clone(),
            size,
            mean,
            e2,
            weight,
        });
    }

    let within_e2 = fsum(per_group.iter().map(|g| g.weight * g.e2));
    let mean_replaced: Vec<f64> = grouped
        .groups()
        .iter()
        .zip(&per_group)
        .flat_map(|((_, members), row)| members.iter().map(move |_| row.mean))
        .collect();
    let between_e2 = generalized_entropy(&Sample::new(mean_replaced)?, 2.0)?;

    let total_i = 2.0 * total_e2 / (2.0 * total_e2 + 1.0);
    let (within_share, between_share) = if total_e2 > 0.0 {
        (Some(within_e2 / total_e2), Some(between_e2 / total_e2))
    } else {
        (None, None)
    };
    Ok(DecompositionResult {
        schema: DECOMPOSITION_SCHEMA.to_string(),
        n: grouped.n(),
        total_e2,
        within_e2,
        between_e2,
        total_i,
        within_share,
        between_share,
        per_group,
    })
}

/// [`decompose_e2`] with the total read on the I scale. The components and
/// shares stay on the E₂ scale, where addition is exact; I is a monotone
/// transform of E₂ and has no additive split of its own.
pub fn decompose_i(grouped: &GroupedSample) -> Result<DecompositionResult> {
    let result = decompose_e2(grouped)?;
    debug_assert!({
        let pooled = Sample::new(grouped.values().to_vec()).unwrap();
        (result.total_i - index_i(&pooled)).abs() <= 1e-10
    });
    Ok(result)
}
