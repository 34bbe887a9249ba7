//! Exact distances for verification.
//!
//! Deliberately simple and independent of [`crate::shortest_paths`]: a FIFO
//! label-correcting search that walks each vertex's rotation through the
//! `next` permutation instead of the precomputed adjacency arrays.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EmbeddedGraph, VertexId, NONE};

/// Symmetric matrix of exact pairwise distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(g: &EmbeddedGraph) -> Self {
        let n = g.vertex_count();
        let mut d = Vec::with_capacity(n * n);
        for s in 0..n {
            d.extend(distances_from(g, s));
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: VertexId) -> &[f64] {
        &self.d[u * self.n..(u + 1) * self.n]
    }
}

/// Exact distances from `source`; `f64::INFINITY` where unreachable.
pub fn distances_from(g: &EmbeddedGraph, source: VertexId) -> Vec<f64> {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    dist[source] = 0.0;
    queue.push_back(source);
    queued[source] = true;
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        let first = g.first_dart(u);
        if first == NONE {
            continue;
        }
        let mut d = first;
        loop {
            if !g.is_artificial(d) {
                let v = g.origin(g.twin(d));
                let nd = dist[u] + g.length(d);
                if nd < dist[v] {
                    dist[v] = nd;
                    if !queued[v] {
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            d = g.next(d);
            if d == first {
                break;
            }
        }
    }
    dist
}

/// Largest distance over all vertex pairs.
pub fn exact_diameter(g: &EmbeddedGraph) -> Result<f64> {
    let all: Vec<VertexId> = (0..g.vertex_count()).collect();
    if all.is_empty() {
        return Ok(0.0);
    }
    exact_set_diameter(g, &all, &all)
}

/// Largest distance between a vertex of `s` and a vertex of `t`.
pub fn exact_set_diameter(g: &EmbeddedGraph, s: &[VertexId], t: &[VertexId]) -> Result<f64> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best: f64 = 0.0;
    for &u in s {
        let dist = distances_from(g, u);
        for &v in t {
            if dist[v].is_infinite() {
                return Err(Error::NotConnected);
            }
            best = best.max(dist[v]);
        }
    }
    Ok(best)
}

/// Largest distance between two marked vertices (0 with fewer than two).
pub fn exact_marked_diameter(g: &EmbeddedGraph) -> Result<f64> {
    let m = g.marked_vertices();
    if m.len() < 2 {
        return Ok(0.0);
    }
    exact_set_diameter(g, &m, &m)
}
