//! Order-preserving connectivity repair.
//!
//! Survivors `J = (k_1..k_m)` are chained in their original cyclic order and
//! every consecutive pair `(k_t, k_{(t mod m)+1})` becomes a directed edge of
//! the repaired polygon, whether or not the original successor relation held.
//! Clip vertices, when supplied, are spliced into the gap they fill.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Point2, RingPolygon};
use crate::project::{ClipVertex, SurvivorSequence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainEntry {
    Original {
        index: usize,
        position: Point2,
    },
    Clip {
        position: Point2,
        source_edge: usize,
        edge_param: f64,
    },
}

impl ChainEntry {
    pub fn position(&self) -> Point2 {
        match self {
            ChainEntry::Original { position, .. } | ChainEntry::Clip { position, .. } => *position,
        }
    }

    pub fn original_index(&self) -> Option<usize> {
        match self {
            ChainEntry::Original { index, .. } => Some(*index),
            ChainEntry::Clip { .. } => None,
        }
    }
}

/// A closed chain rebuilt from survivors. The edge from the last entry back
/// to the first is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairedPolygon {
    entries: Vec<ChainEntry>,
    source_n: usize,
    partition: Option<usize>,
}

impl RepairedPolygon {
    pub fn entries(&self) -> &[ChainEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        true
    }

    pub fn source_len(&self) -> usize {
        self.source_n
    }

    /// Recomputed partition: the number of leading entries that belong to
    /// the outer boundary, present only when both sides keep three or more
    /// vertices.
    pub fn partition(&self) -> Option<usize> {
        self.partition
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.entries.iter().map(ChainEntry::position).collect()
    }

    pub fn original_indices(&self) -> Vec<usize> {
        self.entries.iter().filter_map(ChainEntry::original_index).collect()
    }

    /// Directed edges as pairs of entry positions (0-based), closing edge
    /// included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.entries.len();
        (0..len).map(move |t| (t, (t + 1) % len))
    }

    /// Directed edges between originals that were not adjacent in the
    /// source, as original index pairs.
    pub fn gap_edges(&self) -> Vec<(usize, usize)> {
        let idx = self.original_indices();
        let m = idx.len();
        (0..m)
            .map(|t| (idx[t], idx[(t + 1) % m]))
            .filter(|&(a, b)| b != a % self.source_n + 1)
            .collect()
    }

    pub fn to_polygon(&self, label: impl Into<String>) -> Result<RingPolygon> {
        RingPolygon::new(self.positions(), self.partition, label)
    }
}

fn check_usable(m: usize) -> Result<()> {
    match m {
        0 => Err(Error::EmptyPolygon),
        1 | 2 => Err(Error::DegeneratePolygon { m }),
        _ => Ok(()),
    }
}

/// Reconnects survivors into a single closed chain in original order.
pub fn repair(survivors: &SurvivorSequence) -> Result<RepairedPolygon> {
    let mut out = RepairedPolygon {
        entries: Vec::new(),
        source_n: 0,
        partition: None,
    };
    repair_into(survivors, &mut out)?;
    Ok(out)
}

/// As [`repair`], reusing the entry buffer of `out`. On error `out` is left
/// untouched.
pub fn repair_into(survivors: &SurvivorSequence, out: &mut RepairedPolygon) -> Result<()> {
    check_usable(survivors.len())?;
    let mut entries = std::mem::take(&mut out.entries);
    entries.clear();
    entries.extend(survivors.survivors().iter().map(|v| ChainEntry::Original {
        index: v.original_index,
        position: v.position,
    }));
    *out = finish(entries, survivors);
    Ok(())
}

/// As [`repair`], additionally splicing each clip vertex into the survivor gap
/// named by its `between` pair. Clips sharing a gap are ordered by source edge
/// (cyclically from the gap start) and then by edge parameter.
pub fn repair_with_clips(survivors: &SurvivorSequence, clips: &[ClipVertex]) -> Result<RepairedPolygon> {
    check_usable(survivors.len())?;
    let n = survivors.source_len();
    let m = survivors.len();
    let sv = survivors.survivors();

    // gap t runs from survivor t to survivor t+1 (cyclic)
    let mut per_gap: Vec<Vec<&ClipVertex>> = vec![Vec::new(); m];
    for clip in clips {
        let t = sv
            .binary_search_by_key(&clip.between.0, |v| v.original_index)
            .map_err(|_| Error::ClipInconsistency(clip.between))?;
        let next = sv[(t + 1) % m].original_index;
        if next != clip.between.1 || survivors.gap_for_edge(clip.source_edge) != Some(clip.between) {
            return Err(Error::ClipInconsistency(clip.between));
        }
        per_gap[t].push(clip);
    }

    // Clips on edges before k_1 sit in the wrap gap but precede k_1 along
    // the source chain, so they open the chain.
    let first = sv[0].original_index;
    let wrap = &mut per_gap[m - 1];
    let split = {
        let last = sv[m - 1].original_index;
        sort_gap(wrap, last, n);
        wrap.partition_point(|c| c.source_edge >= last)
    };
    let wrapped: Vec<&ClipVertex> = wrap.split_off(split);
    debug_assert!(wrapped.iter().all(|c| c.source_edge < first));

    let mut entries = Vec::with_capacity(m + clips.len());
    entries.extend(wrapped.iter().map(|c| clip_entry(c)));
    for (t, v) in sv.iter().enumerate() {
        entries.push(ChainEntry::Original {
            index: v.original_index,
            position: v.position,
        });
        let gap = &mut per_gap[t];
        if t + 1 < m {
            sort_gap(gap, v.original_index, n);
        }
        entries.extend(gap.iter().map(|c| clip_entry(c)));
    }
    Ok(finish(entries, survivors))
}

fn sort_gap(gap: &mut [&ClipVertex], start: usize, n: usize) {
    gap.sort_by(|a, b| {
        let oa = (a.source_edge + n - start) % n;
        let ob = (b.source_edge + n - start) % n;
        oa.cmp(&ob).then(a.edge_param.total_cmp(&b.edge_param))
    });
}

fn clip_entry(c: &ClipVertex) -> ChainEntry {
    ChainEntry::Clip {
        position: c.position,
        source_edge: c.source_edge,
        edge_param: c.edge_param,
    }
}

/// Position along the source chain; strictly increasing over a repaired
/// chain.
fn chain_key(e: &ChainEntry) -> f64 {
    match e {
        ChainEntry::Original { index, .. } => (*index - 1) as f64,
        ChainEntry::Clip {
            source_edge,
            edge_param,
            ..
        } => (*source_edge - 1) as f64 + edge_param,
    }
}

/// Recomputes the partition for a chain already in source order.
fn finish(entries: Vec<ChainEntry>, survivors: &SurvivorSequence) -> RepairedPolygon {
    let partition = survivors.source_partition().and_then(|l| {
        let outer = entries.partition_point(|e| chain_key(e) < l as f64);
        (outer >= 3 && entries.len() - outer >= 3).then_some(outer)
    });
    RepairedPolygon {
        entries,
        source_n: survivors.source_len(),
        partition,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::project::IndexedVertex;

    fn seq(indices: &[usize], n: usize, partition: Option<usize>) -> SurvivorSequence {
        let v = indices
            .iter()
            .map(|&i| IndexedVertex {
                original_index: i,
                position: Point2::new(i as f64, 0.0),
            })
            .collect();
        SurvivorSequence::new(v, n, partition).unwrap()
    }

    #[test]
    fn full_survival_is_unchanged() {
        let s = seq(&[1, 2, 3, 4, 5, 6, 7, 8], 8, Some(4));
        let r = repair(&s).unwrap();
        assert_eq!(r.original_indices(), (1..=8).collect::<Vec<_>>());
        assert!(r.gap_edges().is_empty());
        assert_eq!(r.partition(), Some(4));
    }

    #[test]
    fn gap_is_bridged_in_order() {
        // Hand-run of the loop for J = (1,2,3,6,7,8), n = 8.
        let r = repair(&seq(&[1, 2, 3, 6, 7, 8], 8, None)).unwrap();
        let idx = r.original_indices();
        let edges: Vec<_> = r.edges().map(|(a, b)| (idx[a], idx[b])).collect();
        assert_eq!(edges, vec![(1, 2), (2, 3), (3, 6), (6, 7), (7, 8), (8, 1)]);
        assert_eq!(r.gap_edges(), vec![(3, 6)]);
    }

    #[test]
    fn too_few_survivors() {
        assert!(matches!(repair(&seq(&[], 8, None)), Err(Error::EmptyPolygon)));
        assert!(matches!(
            repair(&seq(&[5], 8, None)),
            Err(Error::DegeneratePolygon { m: 1 })
        ));
        assert!(matches!(
            repair(&seq(&[5, 6], 8, None)),
            Err(Error::DegeneratePolygon { m: 2 })
        ));
    }

    #[test]
    fn partition_collapses_when_inner_side_is_lost() {
        let r = repair(&seq(&[1, 2, 3, 4, 5], 8, Some(4))).unwrap();
        assert_eq!(r.partition(), None);
        let r = repair(&seq(&[1, 2, 4, 5, 6, 8], 8, Some(4))).unwrap();
        assert_eq!(r.partition(), Some(3));
    }

    fn clip(between: (usize, usize), edge: usize, t: f64, x: f64) -> ClipVertex {
        ClipVertex {
            position: Point2::new(x, 5.0),
            between,
            source_edge: edge,
            edge_param: t,
        }
    }

    #[test]
    fn no_clips_matches_plain_repair() {
        let s = seq(&[1, 2, 3, 6, 7, 8], 8, None);
        assert_eq!(repair_with_clips(&s, &[]).unwrap(), repair(&s).unwrap());
    }

    #[test]
    fn single_clip_lands_in_its_gap() {
        let s = seq(&[1, 2, 3, 6, 7, 8], 8, None);
        let r = repair_with_clips(&s, &[clip((3, 6), 3, 0.5, 0.0)]).unwrap();
        let p = r.positions();
        assert_eq!(r.len(), 7);
        assert_eq!(p[2], Point2::new(3.0, 0.0));
        assert_eq!(p[3], Point2::new(0.0, 5.0));
        assert_eq!(p[4], Point2::new(6.0, 0.0));
    }

    #[test]
    fn clips_in_one_gap_follow_edge_then_param() {
        let s = seq(&[1, 2, 3, 6, 7, 8], 8, None);
        let clips = [
            clip((3, 6), 4, 0.1, 40.0),
            clip((3, 6), 3, 0.8, 38.0),
            clip((3, 6), 3, 0.2, 32.0),
        ];
        let r = repair_with_clips(&s, &clips).unwrap();
        let xs: Vec<f64> = r.positions()[3..6].iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![32.0, 38.0, 40.0]);
    }

    #[test]
    fn wrap_gap_clips_keep_source_order() {
        // Gap (6, 2) wraps through the closure edge 8 -> 1.
        let s = seq(&[2, 3, 6], 8, None);
        let clips = [clip((6, 2), 1, 0.5, 100.0), clip((6, 2), 7, 0.5, 70.0)];
        let r = repair_with_clips(&s, &clips).unwrap();
        // Chain reads in source order starting from edge 1.
        let kinds: Vec<Option<usize>> = r.entries().iter().map(|e| e.original_index()).collect();
        assert_eq!(kinds, vec![None, Some(2), Some(3), Some(6), None]);
        assert_eq!(r.positions()[0].x, 100.0);
        assert_eq!(r.positions()[4].x, 70.0);
    }

    #[test]
    fn clip_outside_a_gap_is_inconsistent() {
        let s = seq(&[1, 2, 3, 6, 7, 8], 8, None);
        assert!(matches!(
            repair_with_clips(&s, &[clip((2, 6), 3, 0.5, 0.0)]),
            Err(Error::ClipInconsistency(_))
        ));
        assert!(matches!(
            repair_with_clips(&s, &[clip((3, 6), 7, 0.5, 0.0)]),
            Err(Error::ClipInconsistency(_))
        ));
    }

    #[test]
    fn repair_into_reuses_and_matches() {
        let big = seq(&[1, 2, 3, 5, 6, 7, 8], 8, Some(4));
        let small = seq(&[2, 4, 6], 8, None);
        let mut out = repair(&big).unwrap();
        repair_into(&small, &mut out).unwrap();
        assert_eq!(out, repair(&small).unwrap());

        let before = out.clone();
        let degenerate = seq(&[1, 5], 8, Some(4));
        assert!(matches!(repair_into(&degenerate, &mut out), Err(Error::DegeneratePolygon { m: 2 })));
        assert_eq!(out, before);
    }
}
