//! The top-level recursion.
//!
//! ```text
//! x = bootstrap(G)
//! solve(G):
//!     if fewer than two marked vertices: 0
//!     if G is small or the depth budget is spent: exact APSP over marked pairs
//!     split G with a separator C rooted at the lowest marked vertex
//!     d1 = portal estimate of pairs crossing C
//!     unmark C; reduce each side; d2, d3 = solve(each reduced side)
//!     max(d1, d2, d3)
//! ```
//!
//! Every value produced is the length of a real walk between two originally
//! marked vertices, so the answer never undershoots the diameter; the portal
//! and skeleton errors bound the overshoot.

use std::time::Instant;

use serde::Serialize;

use crate::cross_diameter::cross_diameter;
use crate::error::{Error, Result};
use crate::graph::{simplify, triangulate, EmbeddedGraph, VertexId};
use crate::oracle::DistanceMatrix;
use crate::portals::{log2_n, prefix_cap, Epsilon, PortalSet};
use crate::reducer::{reduce_side, shrink_separator, Which};
use crate::separator::{find_separator, Side};
use crate::shortest_paths::{bootstrap_x, marked_diameter_with_witness, perturb_lengths};

/// Knobs for [`approximate_diameter`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// Target accuracy, in `(0, 0.7]`.
    pub eps_user: f64,
    /// Graphs with at most this many vertices are solved exactly.
    pub halt_size: usize,
    /// Recursion depth budget; `None` means `ceil(1.8 log2 n)`.
    pub depth_cap: Option<usize>,
    /// A child larger than this fraction of its parent is solved exactly.
    pub progress_ratio: f64,
    pub seed: u64,
    /// Multiply lengths by `1 + u * 1e-12` (seeded) before solving.
    pub perturbation: bool,
    /// Use the halting size `(256 log2 n / eps)^4` instead of `halt_size`.
    pub paper_halt_rule: bool,
    /// Check the distance invariant against exact distances at every node.
    /// Quadratic in the input size; for small instances only.
    pub audit: bool,
    /// Record wall-clock times per phase in the report.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(eps_user: f64) -> Self {
        Self {
            eps_user,
            halt_size: 64,
            depth_cap: None,
            progress_ratio: 0.95,
            seed: 0,
            perturbation: false,
            paper_halt_rule: false,
            audit: false,
            timings: false,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::new(0.5)
    }
}

/// Parameters fixed at the top level and shared by all recursive calls.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Params {
    pub n: usize,
    pub log2_n: f64,
    pub eps_internal: f64,
    pub k: u32,
    pub eps_eff: f64,
    pub halt_size: f64,
    pub depth_cap: usize,
    pub regular_spacing: f64,
    pub dense_spacing: f64,
    pub prefix_cap: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelStats {
    pub depth: usize,
    pub nodes: usize,
    pub vertices_total: usize,
    pub vertices_max: usize,
}

/// Where the final value came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Winner {
    /// `"cross"` for a portal estimate, `"leaf"` for an exact leaf.
    pub kind: &'static str,
    pub depth: usize,
    pub value: f64,
    /// Original vertex ids of the pair behind the value.
    pub pair: Option<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TopLevel {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: f64,
    pub separator_ms: f64,
    pub cross_ms: f64,
    pub reduce_ms: f64,
    pub leaf_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditSummary {
    pub nodes_checked: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Largest ratio of a node distance to the original distance.
    pub max_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub d_prime: f64,
    pub x: f64,
    pub node_count: usize,
    pub max_depth: usize,
    pub leaf_apsp_count: usize,
    pub guard_count: usize,
    pub depth_cap_hits: usize,
    pub max_regular_portals_per_path: usize,
    pub max_dense_portals_per_path: usize,
    pub max_distinct_tuples: usize,
    pub levels: Vec<LevelStats>,
    pub top: Option<TopLevel>,
    pub winner: Option<Winner>,
    pub config: RunConfig,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

/// Estimates the diameter over marked vertices: `d <= d' <= (1 + eps) d`.
pub fn approximate_diameter(g: &EmbeddedGraph, cfg: &RunConfig) -> Result<RunReport> {
    let eps = Epsilon::new(cfg.eps_user)?;
    if cfg.progress_ratio.is_nan() || cfg.progress_ratio <= 0.0 {
        return Err(Error::InvalidConfig("progress_ratio must be positive".into()));
    }
    let n = g.vertex_count();
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let start = Instant::now();
    let g = if cfg.perturbation {
        perturb_lengths(g, cfg.seed)
    } else {
        g.clone()
    };
    let log2 = log2_n(n);
    let x = if g.marked_count() == 0 { 0.0 } else { bootstrap_x(&g)? };
    let depth_cap = cfg.depth_cap.unwrap_or((1.8 * log2).ceil() as usize);
    let halt_size = if cfg.paper_halt_rule {
        (256.0 * log2 / eps.eff).powi(4)
    } else {
        cfg.halt_size as f64
    };
    let params = Params {
        n,
        log2_n: log2,
        eps_internal: eps.internal,
        k: eps.k,
        eps_eff: eps.eff,
        halt_size,
        depth_cap,
        regular_spacing: eps.regular_spacing(x),
        dense_spacing: eps.dense_spacing(x, log2),
        prefix_cap: prefix_cap(x),
    };
    let mut run = Run {
        cfg,
        eps,
        x,
        params: params.clone(),
        stats: Stats::default(),
        audit: cfg.audit.then(|| Audit {
            truth: DistanceMatrix::new(&g),
            bound: 1.0 + cfg.eps_user,
            summary: AuditSummary::default(),
        }),
    };
    let d_prime = if x == 0.0 || g.marked_count() < 2 {
        0.0
    } else {
        let ids: Vec<VertexId> = (0..n).collect();
        run.solve(&g, &ids, 0)?
    };
    let mut timings = run.stats.timings.take();
    if let Some(t) = timings.as_mut() {
        t.total_ms = start.elapsed().as_secs_f64() * 1e3;
    }
    let s = run.stats;
    Ok(RunReport {
        d_prime,
        x,
        node_count: s.nodes,
        max_depth: s.max_depth,
        leaf_apsp_count: s.leaves,
        guard_count: s.guards,
        depth_cap_hits: s.cap_hits,
        max_regular_portals_per_path: s.max_regular,
        max_dense_portals_per_path: s.max_dense,
        max_distinct_tuples: s.max_distinct,
        levels: s.levels,
        top: s.top,
        winner: s.winner,
        config: cfg.clone(),
        params,
        audit: run.audit.map(|a| a.summary),
        timings,
    })
}

#[derive(Default)]
struct Stats {
    nodes: usize,
    max_depth: usize,
    leaves: usize,
    guards: usize,
    cap_hits: usize,
    max_regular: usize,
    max_dense: usize,
    max_distinct: usize,
    levels: Vec<LevelStats>,
    top: Option<TopLevel>,
    winner: Option<Winner>,
    timings: Option<Timings>,
}

struct Audit {
    truth: DistanceMatrix,
    bound: f64,
    summary: AuditSummary,
}

struct Run<'a> {
    cfg: &'a RunConfig,
    eps: Epsilon,
    x: f64,
    params: Params,
    stats: Stats,
    audit: Option<Audit>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

impl Run<'_> {
    fn offer(&mut self, kind: &'static str, depth: usize, value: f64, pair: Option<(VertexId, VertexId)>) {
        let better = match &self.stats.winner {
            None => true,
            Some(w) => value > w.value,
        };
        if better && value > 0.0 {
            self.stats.winner = Some(Winner {
                kind,
                depth,
                value,
                pair,
            });
        }
    }

    fn time(&mut self) -> Option<Instant> {
        if self.cfg.timings {
            self.stats.timings.get_or_insert_with(Timings::default);
            Some(Instant::now())
        } else {
            None
        }
    }

    fn record_level(&mut self, depth: usize, size: usize) {
        let s = &mut self.stats;
        s.nodes += 1;
        s.max_depth = s.max_depth.max(depth);
        if s.levels.len() <= depth {
            s.levels.resize_with(depth + 1, LevelStats::default);
            s.levels[depth].depth = depth;
        }
        let l = &mut s.levels[depth];
        l.nodes += 1;
        l.vertices_total += size;
        l.vertices_max = l.vertices_max.max(size);
    }

    fn check_invariant(&mut self, g: &EmbeddedGraph, ids: &[VertexId]) {
        let Some(audit) = self.audit.as_mut() else {
            return;
        };
        let here = DistanceMatrix::new(g);
        let marked = g.marked_vertices();
        audit.summary.nodes_checked += 1;
        for &a in &marked {
            for &b in &marked {
                if a >= b {
                    continue;
                }
                let truth = audit.truth.get(ids[a], ids[b]);
                let d = here.get(a, b);
                audit.summary.pairs_checked += 1;
                let tol = 1e-9 * truth.max(1.0);
                if d < truth - tol || d > audit.bound * truth + tol {
                    audit.summary.violations += 1;
                }
                if truth > 0.0 {
                    audit.summary.max_ratio = audit.summary.max_ratio.max(d / truth);
                }
            }
        }
    }

    fn leaf(&mut self, g: &EmbeddedGraph, ids: &[VertexId], depth: usize) -> f64 {
        let t = self.time();
        self.stats.leaves += 1;
        let (value, pair) = marked_diameter_with_witness(g);
        self.offer("leaf", depth, value, pair.map(|(a, b)| (ids[a], ids[b])));
        if let (Some(t), Some(tm)) = (t, self.stats.timings.as_mut()) {
            tm.leaf_ms += ms(t);
        }
        value
    }

    fn solve(&mut self, g: &EmbeddedGraph, ids: &[VertexId], depth: usize) -> Result<f64> {
        let n = g.vertex_count();
        self.record_level(depth, n);
        self.check_invariant(g, ids);
        if g.marked_count() < 2 {
            return Ok(0.0);
        }
        if depth >= self.params.depth_cap {
            self.stats.cap_hits += 1;
            return Ok(self.leaf(g, ids, depth));
        }
        if n as f64 <= self.params.halt_size || n <= 3 {
            return Ok(self.leaf(g, ids, depth));
        }

        let t0 = self.time();
        let g = simplify(g);
        let tri = triangulate(&g)?.graph;
        let root = (0..n).find(|&v| g.is_marked(v)).expect("two marked vertices");
        let dec = find_separator(&tri, root)?;
        if let (Some(t), Some(tm)) = (t0, self.stats.timings.as_mut()) {
            tm.separator_ms += ms(t);
        }

        let t1 = self.time();
        let regular = PortalSet::for_separator(&dec, self.params.regular_spacing, self.params.prefix_cap)?;
        self.stats.max_regular = self
            .stats
            .max_regular
            .max(regular.p.len())
            .max(regular.q.len());
        let inside: Vec<bool> = dec.side.iter().map(|&s| s != Side::Outside).collect();
        let outside: Vec<bool> = dec.side.iter().map(|&s| s != Side::Inside).collect();
        let cross = cross_diameter(&g, &regular, &inside, &outside, self.x, self.eps.k)?;
        self.stats.max_distinct = self
            .stats
            .max_distinct
            .max(cross.distinct_left)
            .max(cross.distinct_right);
        let d1 = cross.d1;
        self.offer("cross", depth, d1, cross.witness.map(|(a, b)| (ids[a], ids[b])));
        if let (Some(t), Some(tm)) = (t1, self.stats.timings.as_mut()) {
            tm.cross_ms += ms(t);
        }

        let t2 = self.time();
        let marks: Vec<bool> = (0..n)
            .map(|v| g.is_marked(v) && dec.side[v] != Side::Separator)
            .collect();
        let g = g.with_marks(marks);
        let dense = PortalSet::for_separator(&dec, self.params.dense_spacing, self.params.prefix_cap)?;
        self.stats.max_dense = self.stats.max_dense.max(dense.p.len()).max(dense.q.len());
        let shrunk = shrink_separator(&g, &dec, &dense)?;
        let children = [Which::In, Which::Out].map(|w| reduce_side(&shrunk, w));
        if let (Some(t), Some(tm)) = (t2, self.stats.timings.as_mut()) {
            tm.reduce_ms += ms(t);
        }

        let mut values = [0.0; 2];
        for (slot, red) in values.iter_mut().zip(children) {
            let child_ids: Vec<VertexId> = red.vertex_map.iter().map(|&v| ids[v]).collect();
            let size = red.result.vertex_count();
            if size as f64 > self.cfg.progress_ratio * n as f64 && red.result.marked_count() >= 2 {
                self.stats.guards += 1;
                self.record_level(depth + 1, size);
                self.check_invariant(&red.result, &child_ids);
                *slot = self.leaf(&red.result, &child_ids, depth + 1);
            } else {
                *slot = self.solve(&red.result, &child_ids, depth + 1)?;
            }
        }
        if depth == 0 {
            self.stats.top = Some(TopLevel {
                d1,
                d2: values[0],
                d3: values[1],
            });
        }
        Ok(d1.max(values[0]).max(values[1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{gen_face_split, gen_grid, gen_star};
    use crate::oracle::exact_diameter;
    use proptest::prelude::*;

    fn small(eps: f64) -> RunConfig {
        RunConfig {
            halt_size: 8,
            ..RunConfig::new(eps)
        }
    }

    #[test]
    fn single_vertex() {
        let g = gen_grid(1, 1, (1, 1), 0);
        assert_eq!(approximate_diameter(&g, &small(0.7)).unwrap().d_prime, 0.0);
    }

    #[test]
    fn unit_path() {
        let g = gen_grid(40, 1, (1, 1), 0);
        let r = approximate_diameter(&g, &small(0.35)).unwrap();
        assert!(r.d_prime >= 39.0 && r.d_prime <= 39.0 * 1.35, "{}", r.d_prime);
    }

    #[test]
    fn star_bootstrap() {
        let g = gen_star(9, 1.0);
        let r = approximate_diameter(&g, &small(0.7)).unwrap();
        assert_eq!(r.x, 1.0);
        assert_eq!(r.d_prime, 2.0);
    }

    #[test]
    fn small_graphs_are_exact_at_the_leaf() {
        let g = gen_face_split(40, (1, 50), 3);
        let r = approximate_diameter(&g, &RunConfig::new(0.7)).unwrap();
        assert_eq!(r.d_prime, exact_diameter(&g).unwrap());
        assert_eq!(r.node_count, 1);
        assert_eq!(r.leaf_apsp_count, 1);
    }

    #[test]
    fn bad_inputs() {
        let g = gen_grid(3, 3, (1, 1), 0);
        assert!(matches!(
            approximate_diameter(&g, &RunConfig::new(0.0)),
            Err(Error::BadEpsilon(_))
        ));
        assert!(matches!(
            approximate_diameter(&g, &RunConfig::new(0.9)),
            Err(Error::BadEpsilon(_))
        ));
        let split = EmbeddedGraph::build(2, &[], &[vec![], vec![]]).unwrap();
        assert!(matches!(
            approximate_diameter(&split, &RunConfig::new(0.5)),
            Err(Error::NotConnected)
        ));
    }

    #[test]
    fn audit_holds_on_grid() {
        let g = gen_grid(12, 10, (1, 100), 9);
        let cfg = RunConfig {
            audit: true,
            ..small(0.7)
        };
        let r = approximate_diameter(&g, &cfg).unwrap();
        let a = r.audit.unwrap();
        assert!(a.nodes_checked > 1);
        assert_eq!(a.violations, 0);
        let d = exact_diameter(&g).unwrap();
        assert!(d <= r.d_prime && r.d_prime <= 1.7 * d);
    }

    #[test]
    fn deterministic() {
        let g = gen_face_split(300, (1, 100), 1);
        let a = approximate_diameter(&g, &small(0.35)).unwrap();
        let b = approximate_diameter(&g, &small(0.35)).unwrap();
        assert_eq!(a, b);
        assert!(a.timings.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sandwich(n in 10usize..250, seed in any::<u64>(), grid in any::<bool>(), eps in prop::sample::select(vec![0.7, 0.35, 0.1])) {
            let g = if grid {
                let w = (n as f64).sqrt() as usize + 1;
                gen_grid(w, n / w + 1, (1, 100), seed)
            } else {
                gen_face_split(n, (1, 100), seed)
            };
            let d = exact_diameter(&g).unwrap();
            let r = approximate_diameter(&g, &small(eps)).unwrap();
            prop_assert!(d <= r.d_prime + 1e-9 * d, "{} < {}", r.d_prime, d);
            prop_assert!(r.d_prime <= (1.0 + eps) * d + 1e-9 * d);
            prop_assert!(r.x <= d && d <= 2.0 * r.x);
            prop_assert!(r.max_depth <= r.params.depth_cap);
        }
    }
}
