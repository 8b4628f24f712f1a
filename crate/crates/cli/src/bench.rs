use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use ringaug::project::{IndexedVertex, SurvivorSequence};
use ringaug::repair::{repair, repair_into};
use ringaug::Point2;

use crate::CliError;

/// Flag threshold for max/min ns-per-vertex across sizes.
pub const LINEARITY_LIMIT: f64 = 2.0;

/// Vertices repaired per timed batch, so small sizes get many repetitions.
const BATCH_VERTICES: usize = 4_000_000;
const BATCHES: usize = 15;
/// Small sizes cycle through distinct inputs and output slots totalling this
/// many survivors, so every size reads and writes main memory instead of one
/// size running entirely out of cache.
const POOL_VERTICES: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub reps: usize,
    pub ns_per_vertex: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// max/min ns-per-vertex; absent for a single size.
    pub ratio: Option<f64>,
    pub total_seconds: f64,
}

impl BenchReport {
    pub fn is_linear(&self) -> Option<bool> {
        self.ratio.map(|r| r <= LINEARITY_LIMIT)
    }

    pub fn table(&self) -> String {
        let mut s = String::from("       m      reps   ns/vertex\n");
        for r in &self.rows {
            let _ = writeln!(s, "{:>8} {:>9} {:>11.3}", r.m, r.reps, r.ns_per_vertex);
        }
        match self.ratio {
            Some(r) if r > LINEARITY_LIMIT => {
                let _ = writeln!(s, "ratio max/min = {r:.3} (exceeds {LINEARITY_LIMIT}: not linear)");
            }
            Some(r) => {
                let _ = writeln!(s, "ratio max/min = {r:.3}");
            }
            None => {}
        }
        let _ = writeln!(s, "total {:.2} s", self.total_seconds);
        s
    }
}

/// Every other index of a `2m`-vertex ring survives, so each survivor gap
/// is a real bridge.
fn synthetic(m: usize) -> SurvivorSequence {
    let n = 2 * m;
    let v = (0..m)
        .map(|k| IndexedVertex {
            original_index: 2 * k + 1,
            position: Point2::new(k as f64, (k % 7) as f64),
        })
        .collect();
    SurvivorSequence::new(v, n, Some(m)).expect("indices are distinct and in range")
}

/// Times `repair` for each survivor count. Each size runs several batches of
/// about the same total vertex count and keeps the fastest.
pub fn run_bench(sizes: &[usize]) -> Result<BenchReport, CliError> {
    if sizes.is_empty() {
        return Err(CliError::Usage("bench needs at least one size".into()));
    }
    if sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("sizes must be positive and strictly ascending".into()));
    }
    let start = Instant::now();
    let mut cases = Vec::with_capacity(sizes.len());
    for &m in sizes {
        let pool: Vec<SurvivorSequence> = (0..(POOL_VERTICES / m).max(1)).map(|_| synthetic(m.max(3))).collect();
        let slots = pool.iter().map(repair).collect::<Result<Vec<_>, _>>()?;
        cases.push((m, (BATCH_VERTICES / m).max(1), pool, slots, f64::INFINITY));
    }
    // Rounds visit every size in turn, so a slow stretch on a shared machine
    // does not land on a single row.
    for _ in 0..BATCHES {
        for (_, reps, pool, slots, best) in &mut cases {
            let t = Instant::now();
            for r in 0..*reps {
                let i = r % pool.len();
                repair_into(black_box(&pool[i]), &mut slots[i])?;
            }
            *best = best.min(t.elapsed().as_nanos() as f64);
            black_box(&slots);
        }
    }
    let rows: Vec<BenchRow> = cases
        .iter()
        .map(|&(m, reps, _, _, best)| BenchRow {
            m,
            reps,
            ns_per_vertex: best / (reps * m) as f64,
        })
        .collect();
    let ratio = (rows.len() > 1).then(|| {
        let v = rows.iter().map(|r| r.ns_per_vertex);
        v.clone().fold(f64::MIN, f64::max) / v.fold(f64::MAX, f64::min)
    });
    Ok(BenchReport {
        rows,
        ratio,
        total_seconds: start.elapsed().as_secs_f64(),
    })
}
