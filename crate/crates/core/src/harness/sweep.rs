//! Oracle sweeps: generate instances, run the approximation and the exact
//! oracle, and compare.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::generators::{gen_face_split, gen_grid_n, WeightRange};
use crate::driver::{approximate_diameter, RunConfig};
use crate::error::Result;
use crate::graph::EmbeddedGraph;
use crate::oracle::exact_diameter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    Grid,
    FaceSplit,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Grid => "grid",
            Generator::FaceSplit => "face-split",
        }
    }

    /// An instance with about `n` vertices (grids round up to full rows).
    pub fn generate(self, n: usize, weights: WeightRange, seed: u64) -> EmbeddedGraph {
        match self {
            Generator::Grid => gen_grid_n(n, weights, seed),
            Generator::FaceSplit => gen_face_split(n, weights, seed),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub generator: Generator,
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub weights: WeightRange,
    pub seed: u64,
    pub config: RunConfig,
    /// Worker threads; 0 uses the available parallelism.
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub generator: &'static str,
    pub n: usize,
    pub seed: u64,
    pub eps: f64,
    pub d_exact: f64,
    pub d_prime: f64,
    pub ratio: f64,
    pub x: f64,
    pub approx_ms: f64,
    pub exact_ms: f64,
    pub node_count: usize,
    pub max_depth: usize,
    pub leaf_apsp_count: usize,
    pub guard_count: usize,
}

impl SweepRecord {
    /// `d <= d' <= (1 + eps) d`, with a relative tolerance of `1e-9` for
    /// floating-point summation order.
    pub fn within_bounds(&self) -> bool {
        let tol = 1e-9 * self.d_exact.max(1.0);
        self.d_prime >= self.d_exact - tol && self.d_prime <= (1.0 + self.eps) * self.d_exact + tol
    }
}

/// Instance `i` of a sweep uses seed `seed + i`; its size is drawn uniformly
/// from `[min_n, max_n]` with that seed.
pub fn instance(spec: &SweepSpec, i: usize) -> (usize, u64, EmbeddedGraph) {
    let seed = spec.seed.wrapping_add(i as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(spec.min_n..=spec.max_n.max(spec.min_n));
    (n, seed, spec.generator.generate(n, spec.weights, seed))
}

pub fn run_one(spec: &SweepSpec, i: usize) -> Result<SweepRecord> {
    let (_, seed, g) = instance(spec, i);
    let t = Instant::now();
    let report = approximate_diameter(&g, &spec.config)?;
    let approx_ms = t.elapsed().as_secs_f64() * 1e3;
    let t = Instant::now();
    let d_exact = exact_diameter(&g)?;
    let exact_ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(SweepRecord {
        generator: spec.generator.name(),
        n: g.vertex_count(),
        seed,
        eps: spec.config.eps_user,
        d_exact,
        d_prime: report.d_prime,
        ratio: if d_exact > 0.0 { report.d_prime / d_exact } else { 1.0 },
        x: report.x,
        approx_ms,
        exact_ms,
        node_count: report.node_count,
        max_depth: report.max_depth,
        leaf_apsp_count: report.leaf_apsp_count,
        guard_count: report.guard_count,
    })
}

/// Runs all instances, spread over worker threads. Records come back in
/// instance order; the first error (by instance index) wins.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    let jobs = match spec.jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        j => j,
    }
    .min(spec.count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<SweepRecord>>>> = Mutex::new(vec![None; spec.count]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= spec.count {
                    break;
                }
                let r = run_one(spec, i);
                slots.lock().expect("sweep worker panicked")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("sweep worker panicked")
        .into_iter()
        .map(|r| r.expect("every instance ran"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_within_bounds() {
        let spec = SweepSpec {
            generator: Generator::FaceSplit,
            count: 6,
            min_n: 60,
            max_n: 200,
            weights: (1, 100),
            seed: 3,
            config: RunConfig {
                halt_size: 16,
                ..RunConfig::new(0.7)
            },
            jobs: 3,
        };
        let recs = run_sweep(&spec).unwrap();
        assert_eq!(recs.len(), 6);
        for r in &recs {
            assert!(r.within_bounds(), "{r:?}");
            assert!((60..=200).contains(&r.n));
        }
        assert_eq!(instance(&spec, 2).1, 5);
        let serial = run_sweep(&SweepSpec { jobs: 1, ..spec.clone() }).unwrap();
        let key = |r: &SweepRecord| (r.n, r.seed, r.d_prime.to_bits(), r.d_exact.to_bits());
        assert_eq!(
            serial.iter().map(key).collect::<Vec<_>>(),
            recs.iter().map(key).collect::<Vec<_>>()
        );
    }
}
