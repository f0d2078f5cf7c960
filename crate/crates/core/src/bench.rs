//! Timing harness for single-path support on the full (all vertices on) path,
//! which has the largest number of internal-vertex assignments.

use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fast::spt_star;
use crate::graph::{CompletePath, EvidenceGraph};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    /// Best observed wall time of one evaluation.
    pub seconds: f64,
    pub spt_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub points: Vec<BenchPoint>,
    /// Least-squares slope of `log2(seconds)` against `n`.
    pub log2_slope: f64,
}

/// Times `spt_star` on the full path of a random `n`-vertex graph.
///
/// Each sample repeats the call until at least `min_batch` has elapsed; the
/// fastest of `samples` per-call averages is kept.
pub fn time_full_path(
    n: usize,
    rng: &mut ChaCha8Rng,
    min_batch: Duration,
    samples: usize,
) -> Result<BenchPoint> {
    let g = EvidenceGraph::random(n, 0.05, 0.95, rng)?;
    let full = CompletePath::full(n);
    let value = spt_star(&g, &full);
    let mut best = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let start = Instant::now();
        let mut calls = 0u32;
        while start.elapsed() < min_batch || calls == 0 {
            black_box(spt_star(black_box(&g), black_box(&full)));
            calls += 1;
        }
        best = best.min(start.elapsed().as_secs_f64() / f64::from(calls));
    }
    Ok(BenchPoint {
        n,
        seconds: best,
        spt_star: value,
    })
}

pub fn log2_slope(points: &[BenchPoint]) -> f64 {
    let len = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points
        .iter()
        .map(|p| (p.n as f64, p.seconds.log2()))
        .unzip();
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn run(n_min: usize, n_max: usize, seed: u64) -> Result<BenchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (n_min..=n_max)
        .map(|n| time_full_path(n, &mut rng, Duration::from_millis(40), 3))
        .collect::<Result<Vec<_>>>()?;
    let log2_slope = if points.len() >= 2 {
        log2_slope(&points)
    } else {
        f64::NAN
    };
    Ok(BenchReport { points, log2_slope })
}
