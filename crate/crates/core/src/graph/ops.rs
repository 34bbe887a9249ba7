//! Structural transformations. Each returns a fresh graph and, where vertex
//! ids change, a map back to the input's vertex ids.

use std::collections::VecDeque;

use super::surgery::Surgery;
use super::{debug_validate, DartId, EmbeddedGraph, VertexId, NONE};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Triangulated {
    pub graph: EmbeddedGraph,
    /// Darts added by the triangulation (both darts of every new edge).
    pub artificial_darts: Vec<DartId>,
}

#[derive(Clone, Debug)]
pub struct Extracted {
    pub graph: EmbeddedGraph,
    /// New vertex id to input vertex id.
    pub vertex_map: Vec<VertexId>,
    /// Input vertex id to new vertex id (`NONE` if dropped).
    pub index: Vec<VertexId>,
}

#[derive(Clone, Debug)]
pub struct Contracted {
    pub graph: EmbeddedGraph,
    /// New vertex id to input vertex id.
    pub vertex_map: Vec<VertexId>,
}

/// Splits every face into triangles with artificial chords, fanning from
/// the face's lowest-id vertex. Original darts keep their ids; new edges are
/// appended. Graphs with at most two vertices are returned unchanged.
pub fn triangulate(g: &EmbeddedGraph) -> Result<Triangulated> {
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if g.vertex_count() <= 2 {
        return Ok(Triangulated {
            graph: g.clone(),
            artificial_darts: Vec::new(),
        });
    }
    let faces = g.faces();
    let mut s = Surgery::new(g);
    let mut added = Vec::new();
    for face in &faces {
        let len = face.darts.len();
        if len == 3 {
            continue;
        }
        if len < 3 {
            return Err(Error::Untriangulable(face.darts[0]));
        }
        let start = (0..len)
            .min_by_key(|&i| (g.origin(face.darts[i]), i))
            .unwrap_or(0);
        let mut out: Vec<DartId> = (0..len).map(|i| face.darts[(start + i) % len]).collect();
        let vert: Vec<VertexId> = out.iter().map(|&d| g.origin(d)).collect();
        let mut nx: Vec<usize> = (0..len).map(|i| (i + 1) % len).collect();
        let mut count = len;
        let mut a = 0;
        let mut stalled = 0;
        while count > 3 {
            let b = nx[a];
            let c = nx[b];
            if vert[a] == vert[c] {
                a = nx[a];
                stalled += 1;
                if stalled > count {
                    return Err(Error::Untriangulable(face.darts[0]));
                }
                continue;
            }
            let after_a = s.prev[out[a]];
            let after_c = s.twin[out[b]];
            let x = s.add_edge(vert[a], after_a, vert[c], after_c, 0.0, true);
            added.extend([x, x + 1]);
            out[a] = x;
            nx[a] = c;
            count -= 1;
            stalled = 0;
        }
    }
    let graph = s.finish().graph;
    debug_validate(&graph, "triangulate");
    Ok(Triangulated {
        graph,
        artificial_darts: added,
    })
}

/// Suppresses every vertex outside `keep` that has degree two, replacing its
/// two edges by one edge carrying the summed length. A component that is a
/// bare cycle shrinks until it is a triangle and stops there, so a triangle
/// comes back unchanged.
pub fn contract_degree2(g: &EmbeddedGraph, keep: &[bool]) -> Contracted {
    assert_eq!(keep.len(), g.vertex_count(), "keep mask length mismatch");
    let mut s = Surgery::new(g);
    for v in 0..g.vertex_count() {
        if keep[v] || s.degree(v) != 2 {
            continue;
        }
        let a = s.first[v];
        let b = s.next[a];
        let (x, y) = (s.head(a), s.head(b));
        if x == y {
            continue;
        }
        if s.degree(x) == 2 && s.degree(y) == 2 && s.darts_at(x).iter().any(|&d| s.head(d) == y) {
            continue;
        }
        s.smooth(v, a, b);
    }
    let done = s.finish();
    debug_validate(&done.graph, "contract_degree2");
    Contracted {
        graph: done.graph,
        vertex_map: done.vertex_map,
    }
}

/// Subgraph induced by the vertices flagged in `vertices`.
pub fn extract_induced(g: &EmbeddedGraph, vertices: &[bool]) -> Extracted {
    let all = vec![true; g.edge_count()];
    extract_subgraph(g, vertices, &all)
}

/// Subgraph on the flagged vertices containing the flagged edges whose
/// endpoints both survive. Rotations are inherited by deleting darts.
pub fn extract_subgraph(g: &EmbeddedGraph, vertices: &[bool], edges: &[bool]) -> Extracted {
    assert_eq!(vertices.len(), g.vertex_count(), "vertex mask length mismatch");
    assert_eq!(edges.len(), g.edge_count(), "edge mask length mismatch");
    let mut s = Surgery::new(g);
    for (e, &keep) in edges.iter().enumerate() {
        let d = 2 * e;
        if !keep || !vertices[g.origin(d)] || !vertices[g.head(d)] {
            s.remove_edge(d);
        }
    }
    for (v, &keep) in vertices.iter().enumerate() {
        if !keep {
            s.vertex_alive[v] = false;
        }
    }
    let done = s.finish();
    debug_validate(&done.graph, "extract_subgraph");
    let mut index = vec![NONE; g.vertex_count()];
    for (new, &old) in done.vertex_map.iter().enumerate() {
        index[old] = new;
    }
    Extracted {
        graph: done.graph,
        vertex_map: done.vertex_map,
        index,
    }
}

/// Merges each vertex `v` into `rep[v]` (`rep[v] == v` for representatives).
/// Every group must be connected through its own edges. An edge `(a, b)`
/// joining different groups gets length `len + offset[a] + offset[b]`; edges
/// inside a group disappear. Rotations follow edge contraction, so the result
/// is planar whenever the input is. Parallel edges are kept; see
/// [`simplify`]. A representative is marked if any member was.
pub fn contract_groups(g: &EmbeddedGraph, rep: &[VertexId], offset: &[f64]) -> Result<Contracted> {
    let n = g.vertex_count();
    assert_eq!(rep.len(), n, "rep length mismatch");
    assert_eq!(offset.len(), n, "offset length mismatch");
    for v in 0..n {
        if rep[v] >= n || rep[rep[v]] != rep[v] {
            return Err(Error::DisconnectedGroup(v));
        }
    }
    let mut s = Surgery::new(g);
    // Spanning trees of the groups, as parent-to-child darts in BFS order.
    let mut seen = vec![false; n];
    let mut tree = vec![false; g.dart_count()];
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    for r in 0..n {
        if rep[r] != r {
            continue;
        }
        seen[r] = true;
        queue.push_back(r);
        while let Some(v) = queue.pop_front() {
            for d in g.darts_at(v) {
                let h = g.head(d);
                if rep[h] == r && !seen[h] {
                    seen[h] = true;
                    tree[d] = true;
                    tree[g.twin(d)] = true;
                    order.push(d);
                    queue.push_back(h);
                }
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| !seen[v]) {
        return Err(Error::DisconnectedGroup(v));
    }
    for e in 0..g.edge_count() {
        let d = 2 * e;
        let (a, b) = (g.origin(d), g.head(d));
        if rep[a] == rep[b] {
            if !tree[d] {
                s.remove_edge(d);
            }
        } else {
            let len = g.length(d) + offset[a] + offset[b];
            s.length[d] = len;
            s.length[d + 1] = len;
        }
    }
    for d in order {
        s.contract(d);
    }
    let done = s.finish();
    debug_validate(&done.graph, "contract_groups");
    Ok(Contracted {
        graph: done.graph,
        vertex_map: done.vertex_map,
    })
}

/// Keeps one edge per adjacent vertex pair: a real edge over an artificial
/// one, then the shortest, then the lowest id. Vertex ids are unchanged.
pub fn simplify(g: &EmbeddedGraph) -> EmbeddedGraph {
    let mut keys: Vec<(VertexId, VertexId, bool, f64, usize)> = g
        .edges()
        .map(|(e, u, v, len, art)| (u.min(v), u.max(v), art, len, e))
        .collect();
    keys.sort_by(|a, b| {
        (a.0, a.1, a.2)
            .cmp(&(b.0, b.1, b.2))
            .then(a.3.total_cmp(&b.3))
            .then(a.4.cmp(&b.4))
    });
    let mut s = Surgery::new(g);
    let mut removed = false;
    for w in keys.windows(2) {
        if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
            s.remove_edge(2 * w[1].4);
            removed = true;
        }
    }
    if !removed {
        return g.clone();
    }
    let graph = s.finish().graph;
    debug_validate(&graph, "simplify");
    graph
}
