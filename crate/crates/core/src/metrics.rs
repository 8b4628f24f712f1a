//! Cyclic Adjacency Preservation (CAP).
//!
//! For a matched index sequence `k_1..k_m` (with `k_{m+1} = k_1`) CAP is the
//! fraction of consecutive pairs that respect cyclic order. Two successor
//! relations are scored:
//!
//! * strict: `k_{t+1} = (k_t mod n) + 1`, the original successor;
//! * order: `k_{t+1}` is the next index after `k_t` among the indices present
//!   in the sequence, so vertices removed by clipping are not penalized but
//!   reordering is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Point2, RingPolygon};
use crate::transform::AffinePlan;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapReport {
    pub cap_strict: f64,
    pub cap_order: f64,
    pub n: usize,
    pub m: usize,
    pub unmatched_new_vertices: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapField {
    Strict,
    Order,
}

impl CapReport {
    pub fn field(&self, field: CapField) -> f64 {
        match field {
            CapField::Strict => self.cap_strict,
            CapField::Order => self.cap_order,
        }
    }
}

fn check_sequence(n: usize, seq: &[usize]) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::UndefinedMetric("CAP of an empty sequence"));
    }
    if let Some(&k) = seq.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(())
}

pub fn cap_strict(n: usize, seq: &[usize]) -> Result<f64> {
    check_sequence(n, seq)?;
    let m = seq.len();
    let hits = (0..m)
        .filter(|&t| seq[(t + 1) % m] == seq[t] % n + 1)
        .count();
    Ok(hits as f64 / m as f64)
}

pub fn cap_order(n: usize, seq: &[usize]) -> Result<f64> {
    check_sequence(n, seq)?;
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidSequence(format!("index {} appears twice", w[0])));
    }
    let m = seq.len();
    let next = |k: usize| {
        let pos = sorted.partition_point(|&x| x <= k);
        sorted[pos % m]
    };
    let hits = (0..m).filter(|&t| seq[(t + 1) % m] == next(seq[t])).count();
    Ok(hits as f64 / m as f64)
}

/// Both CAP variants for one instance.
pub fn score(n: usize, seq: &[usize], unmatched: usize) -> Result<CapReport> {
    Ok(CapReport {
        cap_strict: cap_strict(n, seq)?,
        cap_order: cap_order(n, seq)?,
        n,
        m: seq.len(),
        unmatched_new_vertices: unmatched,
    })
}

pub fn mean_cap(reports: &[CapReport], field: CapField) -> Result<f64> {
    if reports.is_empty() {
        return Err(Error::UndefinedMetric("mean CAP over no instances"));
    }
    Ok(reports.iter().map(|r| r.field(field)).sum::<f64>() / reports.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexMatch {
    /// Matched original indices, in augmented traversal order.
    pub seq: Vec<usize>,
    pub unmatched: usize,
}

/// Recovers original indices for an augmented vertex list that carries none.
///
/// Candidate pairs (augmented vertex, transformed original) within `tol` are
/// accepted greedily in ascending distance, each side used at most once.
/// Distance ties go to the earlier augmented vertex, then the lower original
/// index.
pub fn match_indices(
    original: &RingPolygon,
    plan: &AffinePlan,
    augmented: &[Point2],
    tol: f64,
) -> IndexMatch {
    let targets: Vec<Point2> = original
        .vertices()
        .iter()
        .map(|p| plan.apply_point(*p))
        .collect();
    let limit = tol * tol;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (a, p) in augmented.iter().enumerate() {
        for (i, q) in targets.iter().enumerate() {
            let d2 = p.distance_sq(*q);
            if d2 <= limit {
                pairs.push((d2, a, i));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut by_aug: Vec<Option<usize>> = vec![None; augmented.len()];
    let mut taken = vec![false; targets.len()];
    for (_, a, i) in pairs {
        if by_aug[a].is_none() && !taken[i] {
            by_aug[a] = Some(i + 1);
            taken[i] = true;
        }
    }
    let seq: Vec<usize> = by_aug.iter().flatten().copied().collect();
    IndexMatch {
        unmatched: augmented.len() - seq.len(),
        seq,
    }
}
