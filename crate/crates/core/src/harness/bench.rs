//! Runtime scaling measurements.

use std::time::Instant;

use serde::Serialize;

use super::generators::WeightRange;
use super::sweep::Generator;
use crate::driver::{approximate_diameter, RunConfig};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub generator: &'static str,
    pub n: usize,
    /// Best wall time over the repeats, in milliseconds.
    pub millis: f64,
    /// `millis` divided by the previous row's, when there is one.
    pub growth: Option<f64>,
    pub d_prime: f64,
    pub node_count: usize,
    pub max_depth: usize,
    pub guard_count: usize,
}

/// Times the approximation on one generated instance per size. Generation
/// is excluded from the timing.
pub fn bench_sizes(
    generator: Generator,
    sizes: &[usize],
    weights: WeightRange,
    seed: u64,
    config: &RunConfig,
    repeats: usize,
) -> Result<Vec<BenchRow>> {
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in sizes {
        let g = generator.generate(n, weights, seed);
        let mut best = f64::INFINITY;
        let mut report = None;
        for _ in 0..repeats.max(1) {
            let t = Instant::now();
            let r = approximate_diameter(&g, config)?;
            best = best.min(t.elapsed().as_secs_f64() * 1e3);
            report = Some(r);
        }
        let r = report.expect("at least one repeat");
        let growth = rows.last().map(|p| best / p.millis);
        rows.push(BenchRow {
            generator: generator.name(),
            n: g.vertex_count(),
            millis: best,
            growth,
            d_prime: r.d_prime,
            node_count: r.node_count,
            max_depth: r.max_depth,
            guard_count: r.guard_count,
        });
    }
    Ok(rows)
}
