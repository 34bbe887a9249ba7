//! Replacing one side of the separator by a compact skeleton.
//!
//! For the inside reduction the result keeps the inside vertices, replaces
//! the separator by its dense portals, and replaces the outside by the union
//! of shortest paths between dense portals (the skeleton), with degree-two
//! skeleton vertices suppressed. The outside reduction is symmetric.
//!
//! The separator is shrunk first, on the whole graph: every separator vertex
//! `c` is contracted into `lambda(c)`, the last dense portal at or before it
//! on its path (vertices past the prefix cap go to the path's last portal).
//! An edge `(a, c)` thereby becomes `(a, lambda(c))` with length
//! `len(a, c) + d(lambda(c), c)`, where the second term is the path distance
//! between them; parallel edges keep their minimum and self-loops vanish.
//! Each resulting edge is a real walk in the input, so no distance shrinks.
//! Consecutive dense portals stay joined by an edge carrying their exact path
//! distance.
//!
//! A shortest path between two inside vertices meets `P` and `Q` in at most
//! one stretch each, and each stretch costs at most twice the dense spacing
//! after contraction. Excursions through the far side run between dense
//! portals and are realized exactly by the skeleton (pairs on the same path
//! are already joined along that path). Hence marked distances grow by at
//! most `4 * eps * x / (16 log2 n) = eps * x / (4 log2 n)`, inside the
//! allowed `eps * x / (2 log2 n)`.
//!
//! Because the construction only deletes and contracts edges of a planar
//! graph, every intermediate graph is planar with a valid rotation system.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::graph::{
    contract_degree2, contract_groups, extract_subgraph, simplify, EmbeddedGraph, VertexId, NONE,
};
use crate::portals::{PathPortals, PortalSet};
use crate::separator::{SeparatorDecomposition, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    In,
    Out,
}

impl Which {
    fn near(self) -> Side {
        match self {
            Which::In => Side::Inside,
            Which::Out => Side::Outside,
        }
    }
}

/// The graph with its separator contracted into the dense portals.
#[derive(Clone, Debug)]
pub struct Shrunk {
    pub graph: EmbeddedGraph,
    /// Shrunk vertex id to input vertex id.
    pub vertex_map: Vec<VertexId>,
    /// Side of each shrunk vertex; dense portals are `Separator`.
    pub side: Vec<Side>,
    /// Dense portals on `P` and on `Q`, as shrunk vertex ids.
    pub portals_p: Vec<VertexId>,
    pub portals_q: Vec<VertexId>,
}

impl Shrunk {
    pub fn dense_count(&self) -> usize {
        self.side.iter().filter(|&&s| s == Side::Separator).count()
    }
}

/// `lambda` and the offset `d(lambda(c), c)` for every vertex of one path.
fn assign_path(
    path: &[VertexId],
    frag: &PathPortals,
    dist: &[f64],
    rep: &mut [VertexId],
    offset: &mut [f64],
) {
    let last = path[*frag.indices.last().expect("root is always a portal")];
    for (pos, &c) in path.iter().enumerate() {
        let lambda = match frag.nearest_before(pos) {
            Ok(i) => path[frag.indices[i]],
            Err(_) => last,
        };
        debug_assert!(rep[c] == NONE || rep[c] == lambda);
        rep[c] = lambda;
        offset[c] = dist[c] - dist[lambda];
    }
}

/// Contracts every separator vertex into its dense portal and reduces
/// parallel edges. `g` is the untriangulated graph the separator was
/// computed for (same vertex ids), with separator vertices already unmarked.
pub fn shrink_separator(
    g: &EmbeddedGraph,
    dec: &SeparatorDecomposition,
    dense: &PortalSet,
) -> Result<Shrunk> {
    let n = g.vertex_count();
    let mut rep = vec![NONE; n];
    let mut offset = vec![0.0; n];
    assign_path(&dec.p, &dense.p, &dec.tree.dist, &mut rep, &mut offset);
    assign_path(&dec.q, &dense.q, &dec.tree.dist, &mut rep, &mut offset);
    for v in 0..n {
        if rep[v] == NONE {
            rep[v] = v;
        }
    }
    let contracted = contract_groups(g, &rep, &offset)?;
    let graph = simplify(&contracted.graph);
    let vertex_map = contracted.vertex_map;
    let mut index = vec![NONE; n];
    for (new, &old) in vertex_map.iter().enumerate() {
        index[old] = new;
    }
    let side = vertex_map.iter().map(|&v| dec.side[v]).collect();
    let ids = |path: &[VertexId], frag: &PathPortals| {
        frag.indices.iter().map(|&i| index[path[i]]).collect()
    };
    Ok(Shrunk {
        portals_p: ids(&dec.p, &dense.p),
        portals_q: ids(&dec.q, &dense.q),
        graph,
        vertex_map,
        side,
    })
}

/// Union of shortest paths between dense portals inside the far region.
#[derive(Clone, Debug)]
pub struct Skeleton {
    /// Edges of the shrunk graph that lie on some portal-to-portal path.
    pub edge_mask: Vec<bool>,
    /// Vertices of the shrunk graph on the skeleton, plus all dense portals.
    pub vertex_mask: Vec<bool>,
}

/// Marks, for every source, a shortest path to every target that runs
/// through `interior` vertices only (apart from its two ends).
pub fn skeleton_paths(
    g: &EmbeddedGraph,
    interior: &[bool],
    sources: &[VertexId],
    targets: &[VertexId],
) -> Skeleton {
    let mut edge_mask = vec![false; g.edge_count()];
    let mut vertex_mask = vec![false; g.vertex_count()];
    let mut region = interior.to_vec();
    for &v in sources.iter().chain(targets) {
        vertex_mask[v] = true;
        region[v] = true;
    }
    let local = RegionGraph::new(g, &region);
    let expand: Vec<bool> = local.vertex.iter().map(|&v| interior[v as usize]).collect();
    let mut is_target = vec![false; local.len()];
    for &t in targets {
        is_target[local.index[t] as usize] = true;
    }
    let mut search = RegionSearch::new(local.len());
    let mut stamp = vec![u32::MAX; local.len()];
    for (round, &s) in sources.iter().enumerate() {
        let src = local.index[s];
        let remaining = targets.iter().filter(|&&t| t != s).count();
        if remaining == 0 {
            continue;
        }
        search.run(&local, src, &expand, &is_target, remaining);
        let round = round as u32;
        stamp[src as usize] = round;
        for &t in targets {
            let mut v = local.index[t];
            if search.dist[v as usize] == f64::INFINITY {
                continue;
            }
            while stamp[v as usize] != round {
                stamp[v as usize] = round;
                vertex_mask[local.vertex[v as usize] as usize] = true;
                let i = search.parent[v as usize] as usize;
                edge_mask[local.arcs[i].dart as usize / 2] = true;
                v = local.arcs[i].tail;
            }
        }
    }
    Skeleton {
        edge_mask,
        vertex_mask,
    }
}

/// Real edges among region vertices, renumbered densely for repeated
/// searches.
struct RegionGraph {
    /// Graph vertex to local id (`u32::MAX` outside the region).
    index: Vec<u32>,
    vertex: Vec<u32>,
    start: Vec<u32>,
    arcs: Vec<Arc>,
}

#[derive(Clone, Copy)]
struct Arc {
    len: f64,
    head: u32,
    tail: u32,
    dart: u32,
}

impl RegionGraph {
    fn new(g: &EmbeddedGraph, region: &[bool]) -> Self {
        let mut index = vec![u32::MAX; g.vertex_count()];
        let mut vertex = Vec::new();
        for (v, &r) in region.iter().enumerate() {
            if r {
                index[v] = vertex.len() as u32;
                vertex.push(v as u32);
            }
        }
        let (gs, gh, gl, gd) = g.adjacency();
        let mut start = Vec::with_capacity(vertex.len() + 1);
        let mut arcs = Vec::new();
        start.push(0);
        for (lu, &u) in vertex.iter().enumerate() {
            let u = u as usize;
            for i in gs[u]..gs[u + 1] {
                let h = index[gh[i]];
                if h != u32::MAX {
                    arcs.push(Arc {
                        len: gl[i],
                        head: h,
                        tail: lu as u32,
                        dart: gd[i] as u32,
                    });
                }
            }
            start.push(arcs.len() as u32);
        }
        Self {
            index,
            vertex,
            start,
            arcs,
        }
    }

    fn len(&self) -> usize {
        self.vertex.len()
    }
}

/// Dijkstra on a [`RegionGraph`] that stops once every target is settled.
struct RegionSearch {
    dist: Vec<f64>,
    parent: Vec<u32>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32)>>,
}

impl RegionSearch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            parent: vec![u32::MAX; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn run(
        &mut self,
        g: &RegionGraph,
        source: u32,
        expand: &[bool],
        is_target: &[bool],
        mut remaining: usize,
    ) {
        for &v in &self.touched {
            self.dist[v as usize] = f64::INFINITY;
            self.parent[v as usize] = u32::MAX;
        }
        self.touched.clear();
        self.heap.clear();
        self.dist[source as usize] = 0.0;
        self.touched.push(source);
        self.heap.push(Reverse((0, source)));
        while let Some(Reverse((bits, u))) = self.heap.pop() {
            let ui = u as usize;
            let du = f64::from_bits(bits);
            if du > self.dist[ui] {
                continue;
            }
            if u != source && is_target[ui] {
                remaining -= 1;
                if remaining == 0 {
                    break;
                }
            }
            if u != source && !expand[ui] {
                continue;
            }
            for i in g.start[ui] as usize..g.start[ui + 1] as usize {
                let a = &g.arcs[i];
                let v = a.head as usize;
                let nd = du + a.len;
                if nd < self.dist[v] {
                    if self.dist[v] == f64::INFINITY {
                        self.touched.push(a.head);
                    }
                    self.dist[v] = nd;
                    self.parent[v] = i as u32;
                    self.heap.push(Reverse((nd.to_bits(), a.head)));
                }
            }
        }
    }
}

fn far_interior(shrunk: &Shrunk, which: Which) -> Vec<bool> {
    let near = which.near();
    shrunk
        .side
        .iter()
        .map(|&s| s != near && s != Side::Separator)
        .collect()
}

/// Skeleton sources and targets. A shortest path leaves the separator into
/// the far side and comes back at two dense portals. If both lie on one
/// path, that path (kept as a chain of portal edges) is no longer, so only
/// excursions from a `P` portal to a `Q` portal need the skeleton, and only
/// portals with a neighbour in the far interior can start or end one.
/// Portals on the shared prefix belong to both paths and are never needed.
/// The shorter list supplies the sources.
fn endpoints(shrunk: &Shrunk, interior: &[bool]) -> (Vec<VertexId>, Vec<VertexId>) {
    let g = &shrunk.graph;
    let on_q: std::collections::HashSet<VertexId> = shrunk.portals_q.iter().copied().collect();
    let on_p: std::collections::HashSet<VertexId> = shrunk.portals_p.iter().copied().collect();
    let touches = |v: VertexId| g.real_neighbors(v).any(|(_, h, _)| interior[h]);
    let p: Vec<VertexId> = shrunk
        .portals_p
        .iter()
        .copied()
        .filter(|v| !on_q.contains(v) && touches(*v))
        .collect();
    let q: Vec<VertexId> = shrunk
        .portals_q
        .iter()
        .copied()
        .filter(|v| !on_p.contains(v) && touches(*v))
        .collect();
    if p.len() <= q.len() {
        (p, q)
    } else {
        (q, p)
    }
}

/// The skeleton of the far side of `which` as a marked-free standalone graph
/// with degree-two vertices (other than dense portals) suppressed, and its
/// vertex map into the shrunk graph.
pub fn dense_skeleton(shrunk: &Shrunk, which: Which) -> (EmbeddedGraph, Vec<VertexId>) {
    let interior = far_interior(shrunk, which);
    let (sources, targets) = endpoints(shrunk, &interior);
    let sk = skeleton_paths(&shrunk.graph, &interior, &sources, &targets);
    let mut vmask = sk.vertex_mask.clone();
    let mut emask = sk.edge_mask.clone();
    // Portal-to-portal edges along the paths belong to the skeleton too.
    for (e, u, v, _, _) in shrunk.graph.edges() {
        if shrunk.side[u] == Side::Separator && shrunk.side[v] == Side::Separator {
            emask[e] = true;
        }
    }
    for v in 0..vmask.len() {
        vmask[v] |= shrunk.side[v] == Side::Separator;
    }
    let g = shrunk.graph.with_marks(vec![false; shrunk.graph.vertex_count()]);
    let ex = extract_subgraph(&g, &vmask, &emask);
    let keep: Vec<bool> = ex
        .vertex_map
        .iter()
        .map(|&v| shrunk.side[v] == Side::Separator)
        .collect();
    let c = contract_degree2(&ex.graph, &keep);
    let map = c.vertex_map.iter().map(|&v| ex.vertex_map[v]).collect();
    (c.graph, map)
}

/// One reduced side, ready for recursion.
#[derive(Clone, Debug)]
pub struct SideReduction {
    pub result: EmbeddedGraph,
    /// Result vertex id to the vertex id of the graph that was reduced.
    pub vertex_map: Vec<VertexId>,
    pub dense_count: usize,
    /// Skeleton vertices that survive in the result, dense portals excluded.
    pub skeleton_size: usize,
}

/// Near side plus dense portals plus the far-side skeleton, with degree-two
/// skeleton vertices suppressed and everything but near vertices unmarked.
pub fn glue_and_shrink(shrunk: &Shrunk, which: Which, skeleton: &Skeleton) -> SideReduction {
    let near = which.near();
    let g = &shrunk.graph;
    let n = g.vertex_count();
    let keep: Vec<bool> = shrunk
        .side
        .iter()
        .map(|&s| s == near || s == Side::Separator)
        .collect();
    let mut vmask = keep.clone();
    for v in 0..n {
        vmask[v] |= skeleton.vertex_mask[v];
    }
    let emask: Vec<bool> = g
        .edges()
        .map(|(e, u, v, _, _)| (keep[u] && keep[v]) || skeleton.edge_mask[e])
        .collect();
    let marks: Vec<bool> = (0..n)
        .map(|v| shrunk.side[v] == near && g.is_marked(v))
        .collect();
    let ex = extract_subgraph(&g.with_marks(marks), &vmask, &emask);
    let keep_ex: Vec<bool> = ex.vertex_map.iter().map(|&v| keep[v]).collect();
    let c = contract_degree2(&ex.graph, &keep_ex);
    let vertex_map: Vec<VertexId> = c
        .vertex_map
        .iter()
        .map(|&v| shrunk.vertex_map[ex.vertex_map[v]])
        .collect();
    let skeleton_size = c
        .vertex_map
        .iter()
        .filter(|&&v| !keep[ex.vertex_map[v]])
        .count();
    SideReduction {
        result: c.graph,
        vertex_map,
        dense_count: shrunk.dense_count(),
        skeleton_size,
    }
}

/// Builds the reduced graph for one side: skeleton of the far side, glued to
/// the near side at the dense portals.
pub fn reduce_side(shrunk: &Shrunk, which: Which) -> SideReduction {
    let interior = far_interior(shrunk, which);
    let (sources, targets) = endpoints(shrunk, &interior);
    let sk = skeleton_paths(&shrunk.graph, &interior, &sources, &targets);
    glue_and_shrink(shrunk, which, &sk)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn far_region(shrunk: &Shrunk, which: Which) -> Vec<bool> {
        let near = which.near();
        shrunk.side.iter().map(|&s| s != near).collect()
    }
    use crate::graph::triangulate;
    use crate::harness::{gen_face_split, gen_grid};
    use crate::oracle::DistanceMatrix;
    use crate::portals::{log2_n, prefix_cap, Epsilon};
    use crate::separator::find_separator;
    use crate::shortest_paths::bootstrap_x;
    use proptest::prelude::*;

    struct Case {
        g: EmbeddedGraph,
        dec: SeparatorDecomposition,
        shrunk: Shrunk,
        x: f64,
        slack: f64,
    }

    fn prepare(g: EmbeddedGraph, eps: f64) -> Case {
        let x = bootstrap_x(&g).unwrap();
        let e = Epsilon::new(eps).unwrap();
        let t = triangulate(&g).unwrap().graph;
        let dec = find_separator(&t, 0).unwrap();
        let log2 = log2_n(g.vertex_count());
        let dense = PortalSet::for_separator(&dec, e.dense_spacing(x, log2), prefix_cap(x)).unwrap();
        let marks: Vec<bool> = (0..g.vertex_count())
            .map(|v| g.is_marked(v) && dec.side[v] != Side::Separator)
            .collect();
        let g = g.with_marks(marks);
        let shrunk = shrink_separator(&g, &dec, &dense).unwrap();
        Case {
            g,
            dec,
            shrunk,
            x,
            slack: e.reduction_slack(x, log2),
        }
    }

    /// Checks the additive sandwich for every marked pair of the near side.
    fn check_side(case: &Case, which: Which) {
        let red = reduce_side(&case.shrunk, which);
        assert!(red.result.validate().is_valid());
        let near = which.near();
        let full = DistanceMatrix::new(&case.g);
        let reduced = DistanceMatrix::new(&red.result);
        let marked: Vec<usize> = (0..red.result.vertex_count())
            .filter(|&v| red.result.is_marked(v))
            .collect();
        let expected: Vec<usize> = (0..case.g.vertex_count())
            .filter(|&v| case.g.is_marked(v) && case.dec.side[v] == near)
            .collect();
        let mut got: Vec<usize> = marked.iter().map(|&v| red.vertex_map[v]).collect();
        got.sort_unstable();
        assert_eq!(got, expected);
        for &a in &marked {
            for &b in &marked {
                let (oa, ob) = (red.vertex_map[a], red.vertex_map[b]);
                let truth = full.get(oa, ob);
                let approx = reduced.get(a, b);
                assert!(approx >= truth - 1e-9 * truth.max(1.0), "{approx} < {truth}");
                assert!(approx <= truth + case.slack + 1e-9 * truth.max(1.0));
            }
        }
        for v in 0..red.result.vertex_count() {
            let o = red.vertex_map[v];
            let s = case.dec.side[o];
            if s == Side::Separator {
                assert!(case.shrunk.portals_p.iter().chain(&case.shrunk.portals_q)
                    .any(|&p| case.shrunk.vertex_map[p] == o));
            }
        }
    }

    #[test]
    fn grid_six_by_six() {
        let case = prepare(gen_grid(6, 6, (1, 1), 0), 0.7);
        check_side(&case, Which::In);
        check_side(&case, Which::Out);
        assert!(case.x > 0.0);
    }

    #[test]
    fn path_skeleton_is_single_edge() {
        // Far region = a path; portals at both ends.
        let g = gen_grid(5, 1, (2, 2), 0);
        let interior: Vec<bool> = (0..5).map(|v| v != 0 && v != 4).collect();
        let sk = skeleton_paths(&g, &interior, &[0], &[4]);
        assert!(sk.edge_mask.iter().all(|&e| e));
        let ex = extract_subgraph(&g, &sk.vertex_mask, &sk.edge_mask);
        let keep: Vec<bool> = (0..5).map(|v| v == 0 || v == 4).collect();
        let c = contract_degree2(&ex.graph, &keep);
        assert_eq!(c.graph.vertex_count(), 2);
        assert_eq!(c.graph.edge_count(), 1);
        assert_eq!(c.graph.length(0), 8.0);
        let keep3: Vec<bool> = (0..5).map(|v| v == 0 || v == 2 || v == 4).collect();
        let c = contract_degree2(&ex.graph, &keep3);
        assert_eq!(c.graph.edge_count(), 2);
    }

    #[test]
    fn skeleton_preserves_portal_distances() {
        let case = prepare(gen_grid(9, 9, (1, 30), 5), 0.7);
        for which in [Which::In, Which::Out] {
            let (sk, map) = dense_skeleton(&case.shrunk, which);
            assert!(sk.validate().is_valid());
            assert_eq!(sk.marked_count(), 0);
            let region = far_region(&case.shrunk, which);
            let portals: Vec<usize> = case.shrunk.portals_p.iter()
                .chain(&case.shrunk.portals_q).copied().collect();
            let sub = crate::graph::extract_induced(&case.shrunk.graph, &region);
            let dm_far = DistanceMatrix::new(&sub.graph);
            let dm_sk = DistanceMatrix::new(&sk);
            let index_sk = |v: usize| map.iter().position(|&m| m == v).unwrap();
            for &a in &portals {
                for &b in &portals {
                    assert_eq!(
                        dm_sk.get(index_sk(a), index_sk(b)),
                        dm_far.get(sub.index[a], sub.index[b])
                    );
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn face_split_sandwich(n in 20usize..120, seed in any::<u64>()) {
            let case = prepare(gen_face_split(n, (1, 100), seed), 0.7);
            check_side(&case, Which::In);
            check_side(&case, Which::Out);
        }

        #[test]
        fn grid_sandwich(w in 3usize..11, h in 3usize..11, seed in any::<u64>()) {
            let case = prepare(gen_grid(w, h, (1, 100), seed), 0.35);
            check_side(&case, Which::In);
            check_side(&case, Which::Out);
        }
    }
}
