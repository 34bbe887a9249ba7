//! Fundamental-cycle separators built from a shortest-path tree.
//!
//! For a triangulated graph and the shortest-path tree `T` from a marked
//! root, every non-tree edge `e` closes a cycle in `T + e`. The cycle's two
//! tree paths `P` and `Q` (including their shared prefix) form the separator
//! `C`; the remaining vertices split into the strict interior `A` and strict
//! exterior `B`. The edges not in `T` form a spanning tree of the dual; rooted
//! at the outer face, the dual subtree below `e` is exactly the set of faces
//! enclosed by the cycle, so one bottom-up pass yields every candidate's
//! interior size through Euler's formula: a disk bounded by a cycle of `L`
//! vertices and tiled by `f` triangles has `(f - L + 2) / 2` interior
//! vertices.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{DartId, EmbeddedGraph, VertexId, NONE};
use crate::shortest_paths::{SsspWorkspace, ShortestPathTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Inside,
    Outside,
    Separator,
}

#[derive(Clone, Debug)]
pub struct SeparatorDecomposition {
    pub root: VertexId,
    /// Dart of the non-tree edge closing the cycle (may be artificial).
    /// `NONE` only for graphs without a non-tree edge.
    pub cycle_edge: DartId,
    /// Tree path from the root to `origin(cycle_edge)`.
    pub p: Vec<VertexId>,
    /// Tree path from the root to `head(cycle_edge)`.
    pub q: Vec<VertexId>,
    pub side: Vec<Side>,
    /// Shortest-path tree from the root.
    pub tree: ShortestPathTree,
}

impl SeparatorDecomposition {
    fn collect(&self, s: Side) -> Vec<VertexId> {
        (0..self.side.len()).filter(|&v| self.side[v] == s).collect()
    }

    /// Strict interior `A`.
    pub fn inside(&self) -> Vec<VertexId> {
        self.collect(Side::Inside)
    }

    /// Strict exterior `B`.
    pub fn outside(&self) -> Vec<VertexId> {
        self.collect(Side::Outside)
    }

    /// `C`, the vertices of `P` and `Q`.
    pub fn separator(&self) -> Vec<VertexId> {
        self.collect(Side::Separator)
    }

    pub fn count(&self, s: Side) -> usize {
        self.side.iter().filter(|&&x| x == s).count()
    }
}

/// Counts for one candidate edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub edge: usize,
    pub inside: usize,
    pub outside: usize,
}

/// Balance bound `ceil(2n / 3)`.
pub fn balance_bound(n: usize) -> usize {
    (2 * n).div_ceil(3)
}

/// Finds the balanced fundamental-cycle separator of a triangulated graph.
/// Among balanced non-tree edges the one minimizing `max(|A|, |B|)` wins,
/// ties going to the lowest edge id.
pub fn find_separator(g: &EmbeddedGraph, root: VertexId) -> Result<SeparatorDecomposition> {
    let ctx = Context::new(g, root)?;
    let candidates = ctx.candidates_by_cotree();
    ctx.choose(candidates)
}

/// Same contract as [`find_separator`], but every candidate's sides are
/// counted by flood-filling the faces outside its cycle. Quadratic; used to
/// cross-check the cotree counting.
pub fn find_separator_naive(g: &EmbeddedGraph, root: VertexId) -> Result<SeparatorDecomposition> {
    let ctx = Context::new(g, root)?;
    let candidates = ctx.candidates_by_flood_fill();
    ctx.choose(candidates)
}

/// Side counts of every non-tree edge, by cotree accumulation.
pub fn candidate_counts(g: &EmbeddedGraph, root: VertexId) -> Result<Vec<Candidate>> {
    Ok(Context::new(g, root)?.candidates_by_cotree())
}

/// Side counts of every non-tree edge, by flood fill.
pub fn candidate_counts_naive(g: &EmbeddedGraph, root: VertexId) -> Result<Vec<Candidate>> {
    Ok(Context::new(g, root)?.candidates_by_flood_fill())
}

struct Context<'a> {
    g: &'a EmbeddedGraph,
    root: VertexId,
    tree: ShortestPathTree,
    is_tree_edge: Vec<bool>,
    depth: Vec<usize>,
    up: Vec<Vec<VertexId>>,
    face: Vec<usize>,
    face_count: usize,
    outer: usize,
}

impl<'a> Context<'a> {
    fn new(g: &'a EmbeddedGraph, root: VertexId) -> Result<Self> {
        let n = g.vertex_count();
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        if !g.is_marked(root) {
            return Err(Error::RootUnmarked(root));
        }
        let mut ws = SsspWorkspace::new();
        ws.run(g, root, None);
        let tree = ws.to_tree(root);
        if (0..n).any(|v| !tree.is_reached(v)) {
            return Err(Error::NotConnected);
        }
        let (face, face_count) = g.face_labels();
        if n >= 3 {
            let mut size = vec![0usize; face_count];
            for &f in &face {
                size[f] += 1;
            }
            if let Some(f) = size.iter().position(|&s| s != 3) {
                let d = face.iter().position(|&x| x == f).unwrap_or(0);
                return Err(Error::Untriangulable(d));
            }
        }
        let mut is_tree_edge = vec![false; g.edge_count()];
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for v in 0..n {
            let d = tree.parent_dart[v];
            if d != NONE {
                is_tree_edge[d / 2] = true;
                children[g.origin(d)].push(v);
            }
        }
        let mut depth = vec![0usize; n];
        let mut parent = vec![root; n];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                parent[c] = v;
                queue.push_back(c);
            }
        }
        let levels = usize::BITS as usize - n.max(1).leading_zeros() as usize;
        let mut up = vec![parent];
        for k in 1..levels.max(1) {
            let prev = &up[k - 1];
            let next: Vec<VertexId> = (0..n).map(|v| prev[prev[v]]).collect();
            up.push(next);
        }
        let outer = if g.dart_count() > 0 { face[0] } else { 0 };
        Ok(Self {
            g,
            root,
            tree,
            is_tree_edge,
            depth,
            up,
            face,
            face_count,
            outer,
        })
    }

    fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        if self.depth[a] < self.depth[b] {
            std::mem::swap(&mut a, &mut b);
        }
        let mut diff = self.depth[a] - self.depth[b];
        let mut k = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                a = self.up[k][a];
            }
            diff >>= 1;
            k += 1;
        }
        if a == b {
            return a;
        }
        for k in (0..self.up.len()).rev() {
            if self.up[k][a] != self.up[k][b] {
                a = self.up[k][a];
                b = self.up[k][b];
            }
        }
        self.up[0][a]
    }

    /// Cycle length in vertices, the branching vertex, and the stick length
    /// (shared prefix vertices not on the cycle) for non-tree edge `e`.
    fn cycle_shape(&self, e: usize) -> (usize, VertexId, usize) {
        let u = self.g.origin(2 * e);
        let v = self.g.head(2 * e);
        let w = self.lca(u, v);
        let len = self.depth[u] + self.depth[v] - 2 * self.depth[w] + 1;
        (len, w, self.depth[w])
    }

    fn candidates_by_cotree(&self) -> Vec<Candidate> {
        let g = self.g;
        let n = g.vertex_count();
        let fc = self.face_count;
        if fc == 0 {
            return Vec::new();
        }
        // Dual tree over non-tree edges, rooted at the outer face.
        let mut deg = vec![0usize; fc + 1];
        for e in 0..g.edge_count() {
            if !self.is_tree_edge[e] {
                deg[self.face[2 * e] + 1] += 1;
                deg[self.face[2 * e + 1] + 1] += 1;
            }
        }
        for f in 0..fc {
            deg[f + 1] += deg[f];
        }
        let start = deg;
        let mut fill = start.clone();
        let mut adj = vec![(0usize, 0usize); start[fc]];
        for e in 0..g.edge_count() {
            if !self.is_tree_edge[e] {
                let (f1, f2) = (self.face[2 * e], self.face[2 * e + 1]);
                adj[fill[f1]] = (f2, e);
                fill[f1] += 1;
                adj[fill[f2]] = (f1, e);
                fill[f2] += 1;
            }
        }
        let mut parent_edge = vec![NONE; fc];
        let mut visited = vec![false; fc];
        let mut tin = vec![0usize; fc];
        let mut size = vec![1usize; fc];
        let mut order = Vec::with_capacity(fc);
        let mut stack = vec![self.outer];
        visited[self.outer] = true;
        while let Some(f) = stack.pop() {
            tin[f] = order.len();
            order.push(f);
            for &(h, e) in &adj[start[f]..start[f + 1]] {
                if !visited[h] {
                    visited[h] = true;
                    parent_edge[h] = e;
                    stack.push(h);
                }
            }
        }
        // Faces are pushed once, by their dual parent, so every subtree is a
        // contiguous block of the preorder starting at its root.
        for &f in order.iter().rev() {
            let e = parent_edge[f];
            if e != NONE {
                let p = self.parent_face(f, e);
                size[p] += size[f];
            }
        }
        let mut out = Vec::new();
        for e in 0..g.edge_count() {
            if self.is_tree_edge[e] {
                continue;
            }
            let (f1, f2) = (self.face[2 * e], self.face[2 * e + 1]);
            let child = if parent_edge[f1] == e { f1 } else { f2 };
            debug_assert_eq!(parent_edge[child], e);
            let (len, w, stick) = self.cycle_shape(e);
            let enclosed = size[child];
            let inside_all = (enclosed + 2 - len) / 2;
            let outside_all = n - len - inside_all;
            let (inside, outside) = if stick == 0 {
                (inside_all, outside_all)
            } else {
                let s = g.twin(self.tree.parent_dart[w]);
                let fs = self.face[s];
                if tin[child] <= tin[fs] && tin[fs] < tin[child] + size[child] {
                    (inside_all - stick, outside_all)
                } else {
                    (inside_all, outside_all - stick)
                }
            };
            out.push(Candidate {
                edge: e,
                inside,
                outside,
            });
        }
        out
    }

    fn parent_face(&self, f: usize, e: usize) -> usize {
        let (f1, f2) = (self.face[2 * e], self.face[2 * e + 1]);
        if f1 == f {
            f2
        } else {
            f1
        }
    }

    fn cycle_vertices(&self, e: usize) -> (Vec<VertexId>, Vec<VertexId>) {
        let g = self.g;
        let p = self.tree.path_to(g, g.origin(2 * e)).expect("tree spans the graph");
        let q = self.tree.path_to(g, g.head(2 * e)).expect("tree spans the graph");
        (p, q)
    }

    /// Sides of every vertex for candidate `e`, by flood fill over faces from
    /// the outer face without crossing the cycle.
    fn sides_by_flood_fill(&self, e: usize) -> Vec<Side> {
        let g = self.g;
        let n = g.vertex_count();
        let (p, q) = self.cycle_vertices(e);
        let (_, w, _) = self.cycle_shape(e);
        let mut on_cycle_edge = vec![false; g.edge_count()];
        on_cycle_edge[e] = true;
        for path in [&p, &q] {
            // Only the part below the branching vertex lies on the cycle.
            let from = path.iter().position(|&v| v == w).unwrap_or(0);
            for &v in &path[from + 1..] {
                on_cycle_edge[self.tree.parent_dart[v] / 2] = true;
            }
        }
        let mut exterior = vec![false; self.face_count];
        let mut queue = VecDeque::new();
        if self.face_count > 0 {
            exterior[self.outer] = true;
            queue.push_back(self.outer);
        }
        let mut face_darts: Vec<Vec<DartId>> = vec![Vec::new(); self.face_count];
        for d in 0..g.dart_count() {
            face_darts[self.face[d]].push(d);
        }
        while let Some(f) = queue.pop_front() {
            for &d in &face_darts[f] {
                if on_cycle_edge[d / 2] {
                    continue;
                }
                let h = self.face[g.twin(d)];
                if !exterior[h] {
                    exterior[h] = true;
                    queue.push_back(h);
                }
            }
        }
        let mut side = vec![Side::Inside; n];
        for v in p.iter().chain(q.iter()) {
            side[*v] = Side::Separator;
        }
        for v in 0..n {
            if side[v] == Side::Separator {
                continue;
            }
            let d = g.first_dart(v);
            if d != NONE && exterior[self.face[d]] {
                side[v] = Side::Outside;
            }
        }
        side
    }

    fn candidates_by_flood_fill(&self) -> Vec<Candidate> {
        (0..self.g.edge_count())
            .filter(|&e| !self.is_tree_edge[e])
            .map(|e| {
                let side = self.sides_by_flood_fill(e);
                Candidate {
                    edge: e,
                    inside: side.iter().filter(|&&s| s == Side::Inside).count(),
                    outside: side.iter().filter(|&&s| s == Side::Outside).count(),
                }
            })
            .collect()
    }

    fn choose(self, candidates: Vec<Candidate>) -> Result<SeparatorDecomposition> {
        let g = self.g;
        let n = g.vertex_count();
        let bound = balance_bound(n);
        let Some(best) = candidates
            .iter()
            .filter(|c| c.inside.max(c.outside) <= bound)
            .min_by_key(|c| (c.inside.max(c.outside), c.edge))
            .copied()
        else {
            if candidates.is_empty() && n <= 2 {
                return Ok(self.trivial());
            }
            return Err(Error::NoBalancedEdge);
        };
        let e = best.edge;
        let (p, q) = self.cycle_vertices(e);
        let side = self.sides_for(e, &p, &q);
        debug_assert_eq!(
            side.iter().filter(|&&s| s == Side::Inside).count(),
            best.inside
        );
        Ok(SeparatorDecomposition {
            root: self.root,
            cycle_edge: 2 * e,
            p,
            q,
            side,
            tree: self.tree,
        })
    }

    fn sides_for(&self, e: usize, p: &[VertexId], q: &[VertexId]) -> Vec<Side> {
        let mut side = self.sides_by_flood_fill(e);
        for &v in p.iter().chain(q) {
            side[v] = Side::Separator;
        }
        side
    }

    fn trivial(self) -> SeparatorDecomposition {
        let n = self.g.vertex_count();
        let far = (0..n).max_by_key(|&v| (self.depth[v], v)).unwrap_or(self.root);
        let p = self.tree.path_to(self.g, far).expect("tree spans the graph");
        SeparatorDecomposition {
            root: self.root,
            cycle_edge: NONE,
            q: vec![self.root],
            side: vec![Side::Separator; n],
            p,
            tree: self.tree,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::triangulate;
    use crate::harness::{gen_face_split, gen_grid};
    use proptest::prelude::*;

    fn check_contract(g: &EmbeddedGraph, dec: &SeparatorDecomposition) {
        let n = g.vertex_count();
        let bound = balance_bound(n);
        assert!(dec.count(Side::Inside) <= bound);
        assert!(dec.count(Side::Outside) <= bound);
        assert_eq!(dec.p[0], dec.root);
        assert_eq!(dec.q[0], dec.root);
        for v in dec.p.iter().chain(&dec.q) {
            assert_eq!(dec.side[*v], Side::Separator);
        }
        assert_eq!(
            dec.count(Side::Separator),
            dec.p.iter().chain(&dec.q).collect::<std::collections::BTreeSet<_>>().len()
        );
        for (_, u, v, _, _) in g.edges() {
            let pair = (dec.side[u], dec.side[v]);
            assert!(pair != (Side::Inside, Side::Outside) && pair != (Side::Outside, Side::Inside));
        }
        let exact = crate::oracle::distances_from(g, dec.root);
        for path in [&dec.p, &dec.q] {
            let mut len = 0.0;
            for w in path.windows(2) {
                let d = g
                    .darts_at(w[0])
                    .filter(|&d| g.head(d) == w[1] && !g.is_artificial(d))
                    .map(|d| g.length(d))
                    .fold(f64::INFINITY, f64::min);
                len += d;
            }
            assert_eq!(len, exact[*path.last().unwrap()]);
        }
    }

    #[test]
    fn triangle_is_all_separator() {
        let g = gen_face_split(3, (1, 1), 0);
        let dec = find_separator(&g, 0).unwrap();
        assert_eq!(dec.count(Side::Separator), 3);
        assert!(dec.inside().is_empty() && dec.outside().is_empty());
    }

    #[test]
    fn square_with_chord() {
        let g = gen_grid(2, 2, (1, 1), 0);
        let t = triangulate(&g).unwrap().graph;
        for root in 0..4 {
            let dec = find_separator(&t, root).unwrap();
            check_contract(&t, &dec);
            assert!(dec.count(Side::Inside) <= 2 && dec.count(Side::Outside) <= 2);
        }
    }

    #[test]
    fn grid_five_by_five() {
        let g = triangulate(&gen_grid(5, 5, (1, 1), 0)).unwrap().graph;
        let dec = find_separator(&g, 0).unwrap();
        check_contract(&g, &dec);
        assert!(dec.count(Side::Inside) <= 17 && dec.count(Side::Outside) <= 17);
        let naive = find_separator_naive(&g, 0).unwrap();
        assert_eq!(naive.cycle_edge, dec.cycle_edge);
    }

    #[test]
    fn unmarked_root_is_rejected() {
        let g = gen_face_split(5, (1, 1), 0);
        let g = g.with_marks(vec![false, true, true, true, true]);
        assert!(matches!(find_separator(&g, 0), Err(Error::RootUnmarked(0))));
    }

    #[test]
    fn untriangulated_input_is_rejected() {
        let g = gen_grid(3, 3, (1, 1), 0);
        assert!(matches!(find_separator(&g, 0), Err(Error::Untriangulable(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cotree_counts_match_flood_fill(n in 3usize..45, seed in any::<u64>(), root in 0usize..45) {
            let g = gen_face_split(n, (1, 9), seed);
            let root = root % n;
            let mut a = candidate_counts(&g, root).unwrap();
            let mut b = candidate_counts_naive(&g, root).unwrap();
            a.sort_by_key(|c| c.edge);
            b.sort_by_key(|c| c.edge);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn grid_separators_hold(w in 2usize..9, h in 2usize..9, seed in any::<u64>()) {
            let g = triangulate(&gen_grid(w, h, (1, 50), seed)).unwrap().graph;
            let root = (seed % (w * h) as u64) as usize;
            let dec = find_separator(&g, root).unwrap();
            check_contract(&g, &dec);
            let naive = find_separator_naive(&g, root).unwrap();
            prop_assert_eq!(naive.cycle_edge, dec.cycle_edge);
            prop_assert_eq!(naive.side, dec.side);
        }

        #[test]
        fn removing_separator_disconnects_sides(n in 4usize..80, seed in any::<u64>()) {
            let g = gen_face_split(n, (1, 100), seed);
            let dec = find_separator(&g, 0).unwrap();
            check_contract(&g, &dec);
            // Flood from the inside without entering C never reaches B.
            let mut seen = vec![false; n];
            let mut stack: Vec<_> = dec.inside();
            for &v in &stack { seen[v] = true; }
            while let Some(v) = stack.pop() {
                for d in g.darts_at(v) {
                    let h = g.head(d);
                    if !seen[h] && dec.side[h] != Side::Separator {
                        prop_assert_eq!(dec.side[h], Side::Inside);
                        seen[h] = true;
                        stack.push(h);
                    }
                }
            }
        }
    }
}
