//! Minimization-sense Pareto dominance and non-dominated filtering.
//!
//! Used twice by the multi-objective assembler: once over per-requirement
//! candidate costs and once over the five team objectives. Scores are
//! non-negative; `+inf` marks a requirement the candidate does not hold and
//! compares equal to itself.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::InvalidScore(bad));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ScoreVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// `a` is no worse than `b` everywhere and strictly better somewhere.
pub fn dominates(a: &ScoreVector, b: &ScoreVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(dominates_unchecked(a.values(), b.values()))
}

fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices of the non-dominated vectors, in input order.
pub fn non_dominated(vectors: &[ScoreVector]) -> Result<Vec<usize>> {
    let first = vectors.first().ok_or(Error::EmptyPopulation)?;
    if let Some(v) = vectors.iter().find(|v| v.len() != first.len()) {
        return Err(Error::LengthMismatch(first.len(), v.len()));
    }
    Ok((0..vectors.len())
        .filter(|&i| {
            !vectors
                .iter()
                .any(|other| dominates_unchecked(other.values(), vectors[i].values()))
        })
        .collect())
}

/// Ids of the non-dominated items, preserving input order. Items with
/// identical vectors are all kept.
pub fn pareto_front<I: Clone>(items: &[(I, ScoreVector)]) -> Result<Vec<I>> {
    let vectors: Vec<ScoreVector> = items.iter().map(|(_, v)| v.clone()).collect();
    Ok(non_dominated(&vectors)?
        .into_iter()
        .map(|i| items[i].0.clone())
        .collect())
}
