//! Embedded planar multigraphs stored as darts (half-edges).
//!
//! Every edge `e` owns two darts. After construction darts are numbered
//! canonically: dart `2e` runs from the edge's first endpoint to its second
//! and dart `2e + 1` is its twin. The embedding is a rotation system: `next`
//! maps each dart to the following dart counterclockwise around its origin.
//! Faces are traced by `d -> next(twin(d))`.
//!
//! Artificial darts (added by [`triangulate`]) take part in face structure
//! but never in distance computations.

mod ops;
pub(crate) mod surgery;

pub use ops::{
    contract_degree2, contract_groups, extract_induced, extract_subgraph, simplify,
    triangulate, Contracted, Extracted, Triangulated,
};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type DartId = usize;
pub type EdgeId = usize;

/// Sentinel for "no vertex" / "no dart".
pub const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    n: usize,
    origin: Vec<VertexId>,
    twin: Vec<DartId>,
    next: Vec<DartId>,
    length: Vec<f64>,
    artificial: Vec<bool>,
    marked: Vec<bool>,
    first: Vec<DartId>,
    // Real (non-artificial) darts grouped by origin, in rotation order.
    adj_start: Vec<usize>,
    adj_dart: Vec<DartId>,
    adj_head: Vec<VertexId>,
    adj_len: Vec<f64>,
}

/// One face boundary, as the cyclic sequence of darts that trace it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCycle {
    pub darts: Vec<DartId>,
}

impl FaceCycle {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

/// A single failed structural check.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    TwinOutOfRange { dart: DartId },
    TwinFixedPoint { dart: DartId },
    TwinNotInvolution { dart: DartId },
    TwinLengthMismatch { dart: DartId },
    TwinArtificialMismatch { dart: DartId },
    RotationNotPermutation { dart: DartId },
    RotationLeavesVertex { dart: DartId },
    RotationSplitsVertex { vertex: VertexId },
    NegativeLength { dart: DartId },
    Euler { vertices: usize, edges: usize, faces: usize },
}

/// Outcome of [`EmbeddedGraph::validate`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_twin_violation(&self) -> bool {
        self.violations.iter().any(|v| {
            matches!(
                v,
                Violation::TwinOutOfRange { .. }
                    | Violation::TwinFixedPoint { .. }
                    | Violation::TwinNotInvolution { .. }
                    | Violation::TwinLengthMismatch { .. }
                    | Violation::TwinArtificialMismatch { .. }
            )
        })
    }

    pub fn has_euler_violation(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Euler { .. }))
    }

    pub fn has_rotation_violation(&self) -> bool {
        self.violations.iter().any(|v| {
            matches!(
                v,
                Violation::RotationNotPermutation { .. }
                    | Violation::RotationLeavesVertex { .. }
                    | Violation::RotationSplitsVertex { .. }
            )
        })
    }
}

impl EmbeddedGraph {
    /// Builds and validates a graph from an edge list and, for each vertex,
    /// its outgoing darts in counterclockwise order. Edge `i` = `(u, v, len)`
    /// owns dart `2i` (u to v) and dart `2i + 1` (v to u). All vertices start
    /// marked.
    pub fn build(
        vertex_count: usize,
        edges: &[(VertexId, VertexId, f64)],
        rotations: &[Vec<DartId>],
    ) -> Result<Self> {
        let (origin, twin, length) = dart_arrays(vertex_count, edges)?;
        let dart_count = origin.len();
        if rotations.len() != vertex_count {
            return Err(Error::MalformedRotation {
                vertex: rotations.len().min(vertex_count),
                reason: format!(
                    "expected {vertex_count} rotation lists, got {}",
                    rotations.len()
                ),
            });
        }
        let mut next = vec![NONE; dart_count];
        let mut seen = vec![false; dart_count];
        for (v, rot) in rotations.iter().enumerate() {
            for &d in rot {
                if d >= dart_count {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("dart {d} does not exist"),
                    });
                }
                if origin[d] != v {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("dart {d} starts at vertex {}", origin[d]),
                    });
                }
                if std::mem::replace(&mut seen[d], true) {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("dart {d} listed twice"),
                    });
                }
            }
            for (i, &d) in rot.iter().enumerate() {
                next[d] = rot[(i + 1) % rot.len()];
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedRotation {
                vertex: origin[d],
                reason: format!("dart {d} missing from rotation"),
            });
        }
        let g = Self::from_parts(
            vertex_count,
            origin,
            twin,
            next,
            length,
            vec![false; dart_count],
            vec![true; vertex_count],
        );
        g.check_euler()?;
        Ok(g)
    }

    /// Like [`build`](Self::build) but each rotation lists edge indices
    /// instead of darts.
    pub fn build_from_edge_rotations(
        vertex_count: usize,
        edges: &[(VertexId, VertexId, f64)],
        rotations: &[Vec<EdgeId>],
    ) -> Result<Self> {
        let mut dart_rot = Vec::with_capacity(rotations.len());
        for (v, rot) in rotations.iter().enumerate() {
            let mut darts = Vec::with_capacity(rot.len());
            for &e in rot {
                let Some(&(a, b, _)) = edges.get(e) else {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("edge {e} does not exist"),
                    });
                };
                if a == v {
                    darts.push(2 * e);
                } else if b == v {
                    darts.push(2 * e + 1);
                } else {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("edge {e} is not incident"),
                    });
                }
            }
            dart_rot.push(darts);
        }
        Self::build(vertex_count, edges, &dart_rot)
    }

    /// Derives the rotation system from a straight-line drawing by sorting
    /// each vertex's darts by angle. A drawing with crossings fails the Euler
    /// check.
    pub fn from_coordinates(
        vertex_count: usize,
        edges: &[(VertexId, VertexId, f64)],
        coords: &[(f64, f64)],
    ) -> Result<Self> {
        if coords.len() != vertex_count {
            return Err(Error::MalformedRotation {
                vertex: coords.len().min(vertex_count),
                reason: format!(
                    "expected {vertex_count} coordinates, got {}",
                    coords.len()
                ),
            });
        }
        let (origin, _, _) = dart_arrays(vertex_count, edges)?;
        let mut rotations: Vec<Vec<DartId>> = vec![Vec::new(); vertex_count];
        for (d, &o) in origin.iter().enumerate() {
            rotations[o].push(d);
        }
        for (v, rot) in rotations.iter_mut().enumerate() {
            let (x0, y0) = coords[v];
            let angle = |d: DartId| {
                let (a, b, _) = edges[d / 2];
                let h = if d % 2 == 0 { b } else { a };
                let (x, y) = coords[h];
                (y - y0).atan2(x - x0)
            };
            rot.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)).then(a.cmp(&b)));
        }
        Self::build(vertex_count, edges, &rotations)
    }

    /// Assembles a graph from raw arrays without any validation. Intended for
    /// tests that need deliberately broken embeddings.
    #[doc(hidden)]
    pub fn from_raw_parts_unchecked(
        vertex_count: usize,
        origin: Vec<VertexId>,
        twin: Vec<DartId>,
        next: Vec<DartId>,
        length: Vec<f64>,
    ) -> Self {
        let dc = origin.len();
        Self::from_parts(
            vertex_count,
            origin,
            twin,
            next,
            length,
            vec![false; dc],
            vec![true; vertex_count],
        )
    }

    pub(crate) fn from_parts(
        n: usize,
        origin: Vec<VertexId>,
        twin: Vec<DartId>,
        next: Vec<DartId>,
        length: Vec<f64>,
        artificial: Vec<bool>,
        marked: Vec<bool>,
    ) -> Self {
        let mut first = vec![NONE; n];
        let mut deg = vec![0usize; n + 1];
        for (d, &o) in origin.iter().enumerate() {
            if o < n && first[o] == NONE {
                first[o] = d;
            }
            if o < n && !artificial[d] {
                deg[o + 1] += 1;
            }
        }
        for v in 0..n {
            deg[v + 1] += deg[v];
        }
        let adj_start = deg;
        let m = adj_start[n];
        let mut adj_dart = vec![NONE; m];
        let mut adj_head = vec![NONE; m];
        let mut adj_len = vec![0.0; m];
        // Fill in rotation order when the rotation is well formed; fall back
        // to dart order otherwise (broken inputs only reach validate()).
        let mut fill = adj_start.clone();
        let dc = origin.len();
        let well_formed = next.iter().all(|&d| d < dc) && twin.iter().all(|&t| t < dc);
        for v in 0..n {
            let f = first[v];
            if f == NONE {
                continue;
            }
            if well_formed {
                let mut d = f;
                let mut steps = 0;
                loop {
                    if !artificial[d] && origin[d] == v && fill[v] < adj_start[v + 1] {
                        let i = fill[v];
                        adj_dart[i] = d;
                        fill[v] += 1;
                    }
                    d = next[d];
                    steps += 1;
                    if d == f || steps > dc {
                        break;
                    }
                }
            }
        }
        for (d, &o) in origin.iter().enumerate() {
            // Anything the rotation walk missed (only possible for broken
            // rotations) is appended in dart order.
            if o < n && !artificial[d] && fill[o] < adj_start[o + 1] && !well_formed {
                adj_dart[fill[o]] = d;
                fill[o] += 1;
            }
        }
        for i in 0..m {
            let d = adj_dart[i];
            if d == NONE {
                continue;
            }
            adj_len[i] = length[d];
            adj_head[i] = twin.get(d).and_then(|&t| origin.get(t)).copied().unwrap_or(NONE);
        }
        Self {
            n,
            origin,
            twin,
            next,
            length,
            artificial,
            marked,
            first,
            adj_start,
            adj_dart,
            adj_head,
            adj_len,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn dart_count(&self) -> usize {
        self.origin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    /// Number of edges whose darts are not artificial.
    pub fn real_edge_count(&self) -> usize {
        self.artificial.iter().filter(|a| !**a).count() / 2
    }

    #[inline]
    pub fn origin(&self, d: DartId) -> VertexId {
        self.origin[d]
    }

    #[inline]
    pub fn head(&self, d: DartId) -> VertexId {
        self.origin[self.twin[d]]
    }

    #[inline]
    pub fn twin(&self, d: DartId) -> DartId {
        self.twin[d]
    }

    /// Next dart counterclockwise around `origin(d)`.
    #[inline]
    pub fn next(&self, d: DartId) -> DartId {
        self.next[d]
    }

    #[inline]
    pub fn length(&self, d: DartId) -> f64 {
        self.length[d]
    }

    #[inline]
    pub fn is_artificial(&self, d: DartId) -> bool {
        self.artificial[d]
    }

    /// Successor of `d` on its face.
    #[inline]
    pub fn face_next(&self, d: DartId) -> DartId {
        self.next[self.twin[d]]
    }

    #[inline]
    pub fn is_marked(&self, v: VertexId) -> bool {
        self.marked[v]
    }

    pub fn marks(&self) -> &[bool] {
        &self.marked
    }

    pub fn marked_vertices(&self) -> Vec<VertexId> {
        (0..self.n).filter(|&v| self.marked[v]).collect()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|m| **m).count()
    }

    /// A copy of this graph with the given marked flags.
    pub fn with_marks(&self, marked: Vec<bool>) -> Self {
        assert_eq!(marked.len(), self.n, "mark vector length mismatch");
        let mut g = self.clone();
        g.marked = marked;
        g
    }

    /// A copy of this graph with edge lengths replaced (twins must agree).
    pub fn with_lengths(&self, length: Vec<f64>) -> Self {
        assert_eq!(length.len(), self.dart_count(), "length vector mismatch");
        Self::from_parts(
            self.n,
            self.origin.clone(),
            self.twin.clone(),
            self.next.clone(),
            length,
            self.artificial.clone(),
            self.marked.clone(),
        )
    }

    /// Any dart leaving `v`, or [`NONE`] for isolated vertices.
    pub fn first_dart(&self, v: VertexId) -> DartId {
        self.first[v]
    }

    /// Darts leaving `v` in counterclockwise order, including artificial ones.
    pub fn darts_at(&self, v: VertexId) -> RotationIter<'_> {
        RotationIter {
            g: self,
            start: self.first[v],
            cur: self.first[v],
            done: self.first[v] == NONE,
        }
    }

    /// Number of darts (artificial included) leaving `v`.
    pub fn degree(&self, v: VertexId) -> usize {
        self.darts_at(v).count()
    }

    /// Real darts leaving `v` as `(dart, head, length)` triples.
    #[inline]
    pub fn real_neighbors(
        &self,
        v: VertexId,
    ) -> impl Iterator<Item = (DartId, VertexId, f64)> + '_ {
        let r = self.adj_start[v]..self.adj_start[v + 1];
        r.map(move |i| (self.adj_dart[i], self.adj_head[i], self.adj_len[i]))
    }

    #[inline]
    pub(crate) fn adjacency(&self) -> (&[usize], &[VertexId], &[f64], &[DartId]) {
        (&self.adj_start, &self.adj_head, &self.adj_len, &self.adj_dart)
    }

    /// Iterates edges as `(edge, u, v, length, artificial)` with `u` the
    /// origin of dart `2e`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId, f64, bool)> + '_ {
        (0..self.edge_count()).map(move |e| {
            let d = 2 * e;
            (e, self.origin[d], self.head(d), self.length[d], self.artificial[d])
        })
    }

    /// Face label for every dart plus the number of faces.
    pub fn face_labels(&self) -> (Vec<usize>, usize) {
        let dc = self.dart_count();
        let mut label = vec![NONE; dc];
        let mut count = 0;
        for start in 0..dc {
            if label[start] != NONE {
                continue;
            }
            let mut d = start;
            while label[d] == NONE {
                label[d] = count;
                d = self.face_next(d);
            }
            count += 1;
        }
        (label, count)
    }

    /// All face cycles. Isolated vertices contribute no cycle; see
    /// [`face_count`](Self::face_count).
    pub fn faces(&self) -> Vec<FaceCycle> {
        let dc = self.dart_count();
        let mut seen = vec![false; dc];
        let mut faces = Vec::new();
        for start in 0..dc {
            if seen[start] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                darts.push(d);
                d = self.face_next(d);
            }
            faces.push(FaceCycle { darts });
        }
        faces
    }

    /// Number of faces, counting each isolated vertex as one face.
    pub fn face_count(&self) -> usize {
        let isolated = (0..self.n).filter(|&v| self.first[v] == NONE).count();
        self.face_labels().1 + isolated
    }

    /// Connected component label per vertex (artificial edges included) and
    /// the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![NONE; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != NONE {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for d in self.darts_at(v) {
                    let h = self.head(d);
                    if comp[h] == NONE {
                        comp[h] = count;
                        stack.push(h);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().1 == 1
    }

    /// Runs every structural check and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let dc = self.dart_count();
        let mut twin_ok = true;
        for d in 0..dc {
            let t = self.twin[d];
            if t >= dc {
                violations.push(Violation::TwinOutOfRange { dart: d });
                twin_ok = false;
                continue;
            }
            if t == d {
                violations.push(Violation::TwinFixedPoint { dart: d });
                twin_ok = false;
            } else if self.twin[t] != d {
                violations.push(Violation::TwinNotInvolution { dart: d });
                twin_ok = false;
            } else {
                if self.length[t].to_bits() != self.length[d].to_bits() {
                    violations.push(Violation::TwinLengthMismatch { dart: d });
                }
                if self.artificial[t] != self.artificial[d] {
                    violations.push(Violation::TwinArtificialMismatch { dart: d });
                }
            }
            if !(self.length[d] >= 0.0) || !self.length[d].is_finite() {
                violations.push(Violation::NegativeLength { dart: d });
            }
        }
        let mut rotation_ok = true;
        let mut indeg = vec![0u32; dc];
        for d in 0..dc {
            let nx = self.next[d];
            if nx >= dc {
                violations.push(Violation::RotationNotPermutation { dart: d });
                rotation_ok = false;
                continue;
            }
            indeg[nx] += 1;
            if self.origin[nx] != self.origin[d] {
                violations.push(Violation::RotationLeavesVertex { dart: d });
                rotation_ok = false;
            }
        }
        for (d, &c) in indeg.iter().enumerate() {
            if c != 1 {
                violations.push(Violation::RotationNotPermutation { dart: d });
                rotation_ok = false;
            }
        }
        if rotation_ok {
            let mut deg = vec![0usize; self.n];
            for &o in &self.origin {
                if o < self.n {
                    deg[o] += 1;
                }
            }
            for v in 0..self.n {
                if self.first[v] != NONE && self.darts_at(v).count() != deg[v] {
                    violations.push(Violation::RotationSplitsVertex { vertex: v });
                    rotation_ok = false;
                }
            }
        }
        if twin_ok && rotation_ok {
            violations.extend(self.euler_violations());
        }
        ValidationReport { violations }
    }

    fn euler_violations(&self) -> Vec<Violation> {
        let (comp, count) = self.components();
        let mut v = vec![0usize; count];
        let mut e = vec![0usize; count];
        let mut f = vec![0usize; count];
        for x in 0..self.n {
            v[comp[x]] += 1;
            if self.first[x] == NONE {
                f[comp[x]] += 1;
            }
        }
        for d in 0..self.dart_count() {
            e[comp[self.origin[d]]] += 1;
        }
        let (labels, fc) = self.face_labels();
        let mut face_seen = vec![false; fc];
        for d in 0..self.dart_count() {
            if !std::mem::replace(&mut face_seen[labels[d]], true) {
                f[comp[self.origin[d]]] += 1;
            }
        }
        (0..count)
            .filter_map(|c| {
                let edges = e[c] / 2;
                if v[c] as i64 - edges as i64 + f[c] as i64 != 2 {
                    Some(Violation::Euler {
                        vertices: v[c],
                        edges,
                        faces: f[c],
                    })
                } else {
                    None
                }
            })
            .collect()
    }

    fn check_euler(&self) -> Result<()> {
        match self.euler_violations().into_iter().next() {
            None => Ok(()),
            Some(Violation::Euler {
                vertices,
                edges,
                faces,
            }) => Err(Error::NonPlanarEmbedding(format!(
                "component with V={vertices}, E={edges}, F={faces} has V-E+F != 2"
            ))),
            Some(other) => Err(Error::NonPlanarEmbedding(format!("{other:?}"))),
        }
    }

    /// The first edge between `u` and `v`, if any.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<DartId> {
        self.darts_at(u).find(|&d| self.head(d) == v)
    }
}

pub struct RotationIter<'a> {
    g: &'a EmbeddedGraph,
    start: DartId,
    cur: DartId,
    done: bool,
}

impl Iterator for RotationIter<'_> {
    type Item = DartId;

    fn next(&mut self) -> Option<DartId> {
        if self.done {
            return None;
        }
        let d = self.cur;
        let nx = self.g.next.get(d).copied().unwrap_or(self.start);
        self.cur = nx;
        if nx == self.start || nx >= self.g.dart_count() {
            self.done = true;
        }
        Some(d)
    }
}

fn dart_arrays(
    n: usize,
    edges: &[(VertexId, VertexId, f64)],
) -> Result<(Vec<VertexId>, Vec<DartId>, Vec<f64>)> {
    let mut origin = Vec::with_capacity(2 * edges.len());
    let mut twin = Vec::with_capacity(2 * edges.len());
    let mut length = Vec::with_capacity(2 * edges.len());
    for (i, &(u, v, len)) in edges.iter().enumerate() {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { edge: i });
        }
        if !(len >= 0.0) || !len.is_finite() {
            return Err(Error::NegativeLength { edge: i, length: len });
        }
        origin.extend([u, v]);
        twin.extend([2 * i + 1, 2 * i]);
        length.extend([len, len]);
    }
    Ok((origin, twin, length))
}

/// Asserts (in debug builds) that a freshly transformed graph is valid.
#[inline]
pub(crate) fn debug_validate(g: &EmbeddedGraph, what: &str) {
    if cfg!(debug_assertions) {
        let report = g.validate();
        assert!(
            report.is_valid(),
            "{what} produced an invalid embedding: {:?}",
            &report.violations[..report.violations.len().min(5)]
        );
    }
}
