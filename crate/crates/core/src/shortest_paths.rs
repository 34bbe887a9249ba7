//! Single-source shortest paths over real darts.
//!
//! Dijkstra with a binary heap. When several darts reach a vertex with the
//! same distance, the parent is the one with the smallest predecessor id and
//! then the smallest dart id, so trees are reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DartId, EmbeddedGraph, VertexId, NONE};

/// Distance of a vertex the search never reached.
pub const UNREACHED: f64 = f64::INFINITY;

#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPathTree {
    pub source: VertexId,
    pub dist: Vec<f64>,
    /// Dart entering each reached vertex from its parent (`NONE` at the
    /// source and at unreached vertices).
    pub parent_dart: Vec<DartId>,
}

impl ShortestPathTree {
    pub fn is_reached(&self, v: VertexId) -> bool {
        self.dist[v] < UNREACHED
    }

    /// Vertices from the source to `v` along parent darts.
    pub fn path_to(&self, g: &EmbeddedGraph, v: VertexId) -> Result<Vec<VertexId>> {
        if !self.is_reached(v) {
            return Err(Error::Unreached(v));
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.source {
            cur = g.origin(self.parent_dart[cur]);
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    pub fn max_dist_over(&self, vertices: impl IntoIterator<Item = VertexId>) -> f64 {
        vertices
            .into_iter()
            .map(|v| self.dist[v])
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    vertex: VertexId,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap.
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable buffers for repeated searches on graphs of similar size.
#[derive(Default)]
pub struct SsspWorkspace {
    dist: Vec<f64>,
    parent: Vec<DartId>,
    pred: Vec<VertexId>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Entry>,
}

impl SsspWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() != n {
            self.dist = vec![UNREACHED; n];
            self.parent = vec![NONE; n];
            self.pred = vec![NONE; n];
            self.settled = vec![false; n];
        } else {
            for &v in &self.touched {
                self.dist[v] = UNREACHED;
                self.parent[v] = NONE;
                self.pred[v] = NONE;
                self.settled[v] = false;
            }
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs Dijkstra from `source`. Vertices with `allowed[v] == false` are
    /// never entered. The results stay valid until the next run.
    pub fn run(&mut self, g: &EmbeddedGraph, source: VertexId, allowed: Option<&[bool]>) {
        self.run_until(g, source, allowed, |_| false);
    }

    /// Like [`run`](Self::run) but stops right after settling a vertex for
    /// which `stop` returns true.
    pub fn run_until(
        &mut self,
        g: &EmbeddedGraph,
        source: VertexId,
        allowed: Option<&[bool]>,
        mut stop: impl FnMut(VertexId) -> bool,
    ) {
        let n = g.vertex_count();
        self.reset(n);
        let (start, head, len, dart) = g.adjacency();
        self.dist[source] = 0.0;
        self.touched.push(source);
        self.heap.push(Entry {
            dist: 0.0,
            vertex: source,
        });
        while let Some(Entry { dist, vertex: u }) = self.heap.pop() {
            if self.settled[u] || dist > self.dist[u] {
                continue;
            }
            self.settled[u] = true;
            if stop(u) {
                break;
            }
            for i in start[u]..start[u + 1] {
                let v = head[i];
                if self.settled[v] || allowed.is_some_and(|a| !a[v]) {
                    continue;
                }
                let nd = dist + len[i];
                let dv = self.dist[v];
                let better = nd < dv
                    || (nd == dv
                        && (u < self.pred[v] || (u == self.pred[v] && dart[i] < self.parent[v])));
                if better {
                    if dv == UNREACHED {
                        self.touched.push(v);
                    }
                    let improved = nd < dv;
                    self.dist[v] = nd;
                    self.pred[v] = u;
                    self.parent[v] = dart[i];
                    if improved {
                        self.heap.push(Entry {
                            dist: nd,
                            vertex: v,
                        });
                    }
                }
            }
        }
    }

    pub fn dist(&self) -> &[f64] {
        &self.dist
    }

    pub fn parent_darts(&self) -> &[DartId] {
        &self.parent
    }

    /// Vertices whose distance was set by the last run.
    pub fn touched(&self) -> &[VertexId] {
        &self.touched
    }

    pub fn to_tree(&self, source: VertexId) -> ShortestPathTree {
        ShortestPathTree {
            source,
            dist: self.dist.clone(),
            parent_dart: self.parent.clone(),
        }
    }
}

pub fn sssp(g: &EmbeddedGraph, source: VertexId) -> ShortestPathTree {
    let mut ws = SsspWorkspace::new();
    ws.run(g, source, None);
    ws.to_tree(source)
}

/// Shortest paths restricted to the vertices flagged in `allowed`.
pub fn sssp_within(g: &EmbeddedGraph, source: VertexId, allowed: &[bool]) -> ShortestPathTree {
    let mut ws = SsspWorkspace::new();
    ws.run(g, source, Some(allowed));
    ws.to_tree(source)
}

/// Source-to-`v` vertex sequence of `t`.
pub fn tree_path(g: &EmbeddedGraph, t: &ShortestPathTree, v: VertexId) -> Result<Vec<VertexId>> {
    t.path_to(g, v)
}

/// Distance from the lowest-id marked vertex to the farthest marked vertex.
/// For the marked diameter `d` this gives `x <= d <= 2x`.
pub fn bootstrap_x(g: &EmbeddedGraph) -> Result<f64> {
    let Some(s) = (0..g.vertex_count()).find(|&v| g.is_marked(v)) else {
        return Err(Error::NoMarkedVertices);
    };
    let t = sssp(g, s);
    let mut x: f64 = 0.0;
    for v in 0..g.vertex_count() {
        if !t.is_reached(v) {
            return Err(Error::NotConnected);
        }
        if g.is_marked(v) {
            x = x.max(t.dist[v]);
        }
    }
    Ok(x)
}

/// Largest distance between two marked vertices (0 with fewer than two).
/// Returns [`UNREACHED`] if some marked pair is disconnected.
pub fn apsp_marked(g: &EmbeddedGraph) -> f64 {
    apsp_marked_with_witness(g).0
}

/// [`apsp_marked`] together with a pair attaining the value.
pub fn apsp_marked_with_witness(g: &EmbeddedGraph) -> (f64, Option<(VertexId, VertexId)>) {
    let marked = g.marked_vertices();
    if marked.len() < 2 {
        return (0.0, None);
    }
    let mut ws = SsspWorkspace::new();
    let mut best = 0.0;
    let mut witness = Some((marked[0], marked[0]));
    for (i, &s) in marked.iter().enumerate() {
        ws.run(g, s, None);
        let dist = ws.dist();
        // Distances are symmetric, so only later marked vertices matter.
        for &t in &marked[i + 1..] {
            if dist[t] > best {
                best = dist[t];
                witness = Some((s, t));
            }
        }
    }
    (best, witness)
}

/// Same value as [`apsp_marked_with_witness`], usually from far fewer
/// searches. Each search from a marked vertex `u` with marked eccentricity
/// `e` bounds every other marked eccentricity by `e + d(u, v)` from above
/// and `max(d(u, v), e - d(u, v))` from below; vertices whose upper bound
/// cannot beat the best distance seen are dropped. Searches alternate
/// between the largest upper bound and the smallest lower bound (ties to the
/// lowest id).
pub fn marked_diameter_with_witness(g: &EmbeddedGraph) -> (f64, Option<(VertexId, VertexId)>) {
    let marked = g.marked_vertices();
    if marked.len() < 2 {
        return (0.0, None);
    }
    let m = marked.len();
    let mut lo = vec![0.0f64; m];
    let mut hi = vec![f64::INFINITY; m];
    let mut alive = vec![true; m];
    let mut left = m;
    let mut best = 0.0;
    let mut witness = Some((marked[0], marked[0]));
    let mut ws = SsspWorkspace::new();
    let mut next = 0;
    let mut by_upper = true;
    while left > 0 {
        let u = marked[next];
        ws.run(g, u, None);
        let dist = ws.dist();
        let mut e = 0.0;
        let mut far = u;
        for &v in &marked {
            if dist[v] > e {
                e = dist[v];
                far = v;
            }
        }
        if e == UNREACHED {
            return (UNREACHED, Some((u.min(far), u.max(far))));
        }
        if e > best {
            best = e;
            witness = Some((u.min(far), u.max(far)));
        }
        alive[next] = false;
        left -= 1;
        for (i, &v) in marked.iter().enumerate() {
            if !alive[i] {
                continue;
            }
            let d = dist[v];
            lo[i] = lo[i].max(d).max(e - d);
            hi[i] = hi[i].min(e + d);
            if hi[i] <= best {
                alive[i] = false;
                left -= 1;
            }
        }
        let pick = |key: &dyn Fn(usize) -> f64| {
            (0..m)
                .filter(|&i| alive[i])
                .min_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)))
        };
        let choice = if by_upper {
            pick(&|i| -hi[i])
        } else {
            pick(&|i| lo[i])
        };
        by_upper = !by_upper;
        match choice {
            Some(i) => next = i,
            None => break,
        }
    }
    (best, witness)
}

/// Multiplies every edge length by `1 + u * 1e-12` with `u` uniform in
/// `[0, 1)`, drawn per edge from a seeded generator. Makes shortest paths
/// unique with high probability while moving distances by a negligible
/// relative amount (never downward).
pub fn perturb_lengths(g: &EmbeddedGraph, seed: u64) -> EmbeddedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut length = vec![0.0; g.dart_count()];
    for e in 0..g.edge_count() {
        let u: f64 = rng.gen();
        let l = g.length(2 * e) * (1.0 + u * 1e-12);
        length[2 * e] = l;
        length[2 * e + 1] = l;
    }
    g.with_lengths(length)
}
