//! Mutable dart workspace used by the graph transformations.
//!
//! A `Surgery` copies a graph into editable arrays (with an explicit `prev`
//! permutation), lets callers add, remove and relink darts, and compacts the
//! result back into an immutable [`EmbeddedGraph`] with canonical numbering.

use super::{DartId, EmbeddedGraph, VertexId, NONE};

pub(crate) struct Surgery {
    pub n: usize,
    pub origin: Vec<VertexId>,
    pub twin: Vec<DartId>,
    pub next: Vec<DartId>,
    pub prev: Vec<DartId>,
    pub length: Vec<f64>,
    pub artificial: Vec<bool>,
    pub alive: Vec<bool>,
    pub marked: Vec<bool>,
    pub vertex_alive: Vec<bool>,
    /// Some live dart at each vertex, or `NONE`.
    pub first: Vec<DartId>,
}

/// Compacted output of a surgery session.
pub(crate) struct Finished {
    pub graph: EmbeddedGraph,
    /// New vertex id to the vertex id inside the surgery.
    pub vertex_map: Vec<VertexId>,
}

impl Surgery {
    pub fn new(g: &EmbeddedGraph) -> Self {
        let dc = g.dart_count();
        let mut prev = vec![NONE; dc];
        for d in 0..dc {
            prev[g.next[d]] = d;
        }
        Self {
            n: g.n,
            origin: g.origin.clone(),
            twin: g.twin.clone(),
            next: g.next.clone(),
            prev,
            length: g.length.clone(),
            artificial: g.artificial.clone(),
            alive: vec![true; dc],
            marked: g.marked.clone(),
            vertex_alive: vec![true; g.n],
            first: g.first.clone(),
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let f = self.first[v];
        if f == NONE {
            return 0;
        }
        let mut d = self.next[f];
        let mut k = 1;
        while d != f {
            k += 1;
            d = self.next[d];
        }
        k
    }

    pub fn darts_at(&self, v: VertexId) -> Vec<DartId> {
        let f = self.first[v];
        let mut out = Vec::new();
        if f == NONE {
            return out;
        }
        let mut d = f;
        loop {
            out.push(d);
            d = self.next[d];
            if d == f {
                break;
            }
        }
        out
    }

    #[inline]
    pub fn head(&self, d: DartId) -> VertexId {
        self.origin[self.twin[d]]
    }

    /// Places dart `d` (already owned by `v`) into `v`'s rotation right after
    /// `after`, or as the only dart when `after` is `NONE`.
    fn link_after(&mut self, v: VertexId, after: DartId, d: DartId) {
        if after == NONE {
            self.next[d] = d;
            self.prev[d] = d;
            self.first[v] = d;
        } else {
            let b = self.next[after];
            self.next[after] = d;
            self.prev[d] = after;
            self.next[d] = b;
            self.prev[b] = d;
        }
    }

    /// Adds an edge `u -> v`. The new dart at `u` goes right after `after_u`
    /// in `u`'s rotation and the twin right after `after_v` at `v` (`NONE`
    /// for an isolated endpoint). Returns the dart leaving `u`.
    pub fn add_edge(
        &mut self,
        u: VertexId,
        after_u: DartId,
        v: VertexId,
        after_v: DartId,
        length: f64,
        artificial: bool,
    ) -> DartId {
        let x = self.origin.len();
        let y = x + 1;
        self.origin.extend([u, v]);
        self.twin.extend([y, x]);
        self.next.extend([NONE, NONE]);
        self.prev.extend([NONE, NONE]);
        self.length.extend([length, length]);
        self.artificial.extend([artificial, artificial]);
        self.alive.extend([true, true]);
        self.link_after(u, after_u, x);
        self.link_after(v, after_v, y);
        x
    }

    /// Removes dart `d` from its vertex's rotation (the twin is untouched).
    fn unlink(&mut self, d: DartId) {
        let v = self.origin[d];
        let p = self.prev[d];
        let nx = self.next[d];
        if nx == d {
            self.first[v] = NONE;
        } else {
            self.next[p] = nx;
            self.prev[nx] = p;
            if self.first[v] == d {
                self.first[v] = nx;
            }
        }
        self.alive[d] = false;
    }

    pub fn remove_edge(&mut self, d: DartId) {
        let t = self.twin[d];
        self.unlink(d);
        self.unlink(t);
    }

    /// Suppresses a vertex of degree two whose darts `a` and `b` lead to
    /// distinct neighbours: the two incident edges become a single edge.
    pub fn smooth(&mut self, v: VertexId, a: DartId, b: DartId) {
        let ta = self.twin[a];
        let tb = self.twin[b];
        self.twin[ta] = tb;
        self.twin[tb] = ta;
        let len = self.length[a] + self.length[b];
        self.length[ta] = len;
        self.length[tb] = len;
        let art = self.artificial[a] || self.artificial[b];
        self.artificial[ta] = art;
        self.artificial[tb] = art;
        self.alive[a] = false;
        self.alive[b] = false;
        self.first[v] = NONE;
        self.vertex_alive[v] = false;
    }

    /// Contracts the edge of dart `d` (`u -> v`), merging `v` into `u`.
    /// `v`'s darts take the place of `d` in `u`'s rotation.
    pub fn contract(&mut self, d: DartId) {
        let t = self.twin[d];
        let u = self.origin[d];
        let v = self.origin[t];
        debug_assert_ne!(u, v);
        for x in self.darts_at(v) {
            self.origin[x] = u;
        }
        let a = self.prev[d];
        let b = self.next[d];
        let c = self.prev[t];
        let f = self.next[t];
        let d_alone = a == d;
        let t_alone = c == t;
        match (d_alone, t_alone) {
            (true, true) => self.first[u] = NONE,
            (true, false) => {
                self.next[c] = f;
                self.prev[f] = c;
                self.first[u] = f;
            }
            (false, true) => {
                self.next[a] = b;
                self.prev[b] = a;
                self.first[u] = a;
            }
            (false, false) => {
                self.next[a] = f;
                self.prev[f] = a;
                self.next[c] = b;
                self.prev[b] = c;
                self.first[u] = a;
            }
        }
        self.alive[d] = false;
        self.alive[t] = false;
        self.first[v] = NONE;
        self.vertex_alive[v] = false;
        self.marked[u] |= self.marked[v];
    }

    /// Compacts live vertices and darts. Vertices keep their relative order;
    /// edges are ordered by their lower live dart id, and that dart becomes
    /// the even dart of the new edge.
    pub fn finish(self) -> Finished {
        let mut vmap_new = vec![NONE; self.n];
        let mut vertex_map = Vec::new();
        for v in 0..self.n {
            if self.vertex_alive[v] {
                vmap_new[v] = vertex_map.len();
                vertex_map.push(v);
            }
        }
        let dc = self.origin.len();
        let mut dmap = vec![NONE; dc];
        let mut next_id = 0;
        for d in 0..dc {
            if self.alive[d] && dmap[d] == NONE {
                let t = self.twin[d];
                dmap[d] = next_id;
                dmap[t] = next_id + 1;
                next_id += 2;
            }
        }
        let mut origin = vec![NONE; next_id];
        let mut twin = vec![NONE; next_id];
        let mut next = vec![NONE; next_id];
        let mut length = vec![0.0; next_id];
        let mut artificial = vec![false; next_id];
        for d in 0..dc {
            let nd = dmap[d];
            if nd == NONE {
                continue;
            }
            origin[nd] = vmap_new[self.origin[d]];
            twin[nd] = dmap[self.twin[d]];
            next[nd] = dmap[self.next[d]];
            length[nd] = self.length[d];
            artificial[nd] = self.artificial[d];
        }
        let marked = vertex_map.iter().map(|&v| self.marked[v]).collect();
        let graph = EmbeddedGraph::from_parts(
            vertex_map.len(),
            origin,
            twin,
            next,
            length,
            artificial,
            marked,
        );
        Finished { graph, vertex_map }
    }
}
