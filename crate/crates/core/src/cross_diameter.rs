//! Distances that cross the separator, measured through portals.
//!
//! Every marked vertex on the inside is described by its tuple of distances
//! to the `j` portals, and likewise on the outside. The tripartite estimate
//! for a pair `(u, v)` is `min_p (u[p] + v[p])` and the cross diameter is the
//! maximum of that over all pairs. Rounding the tuples up to multiples of
//! `ell / k` leaves few distinct tuples per side, so the max-min is taken
//! over distinct tuples only.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{EmbeddedGraph, VertexId};
use crate::portals::PortalSet;
use crate::shortest_paths::SsspWorkspace;

/// Portal-distance tuples of the marked vertices on each side.
#[derive(Clone, Debug, PartialEq)]
pub struct TripartiteInstance {
    /// Number of portals (tuple width).
    pub j: usize,
    pub left_vertices: Vec<VertexId>,
    /// Row-major, `j` entries per left vertex.
    pub left: Vec<f64>,
    pub right_vertices: Vec<VertexId>,
    pub right: Vec<f64>,
    /// Largest entry over both sides.
    pub ell: f64,
}

impl TripartiteInstance {
    /// Assembles an instance from explicit tuples.
    pub fn from_tuples(left: &[(VertexId, Vec<f64>)], right: &[(VertexId, Vec<f64>)]) -> Self {
        let j = left
            .first()
            .or(right.first())
            .map(|(_, t)| t.len())
            .unwrap_or(0);
        let flat = |side: &[(VertexId, Vec<f64>)]| {
            let ids = side.iter().map(|(v, _)| *v).collect();
            let vals: Vec<f64> = side.iter().flat_map(|(_, t)| t.iter().copied()).collect();
            (ids, vals)
        };
        let (left_vertices, left) = flat(left);
        let (right_vertices, right) = flat(right);
        let ell = left.iter().chain(&right).copied().fold(0.0, f64::max);
        Self {
            j,
            left_vertices,
            left,
            right_vertices,
            right,
            ell,
        }
    }

    pub fn left_tuple(&self, i: usize) -> &[f64] {
        &self.left[i * self.j..(i + 1) * self.j]
    }

    pub fn right_tuple(&self, i: usize) -> &[f64] {
        &self.right[i * self.j..(i + 1) * self.j]
    }

    pub fn is_one_sided(&self) -> bool {
        self.left_vertices.is_empty() || self.right_vertices.is_empty()
    }

    /// Exact max-min over the unrounded tuples (quadratic).
    pub fn unrounded_value(&self) -> Result<f64> {
        if self.is_one_sided() {
            return Err(Error::EmptySide);
        }
        let mut best: f64 = 0.0;
        for a in 0..self.left_vertices.len() {
            let ta = self.left_tuple(a);
            for b in 0..self.right_vertices.len() {
                let tb = self.right_tuple(b);
                let m = ta
                    .iter()
                    .zip(tb)
                    .map(|(x, y)| x + y)
                    .fold(f64::INFINITY, f64::min);
                best = best.max(m);
            }
        }
        Ok(best)
    }
}

/// Tuples rounded up to integer multiples of `unit = ell / k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedInstance {
    pub j: usize,
    pub k: u32,
    pub unit: f64,
    pub ell: f64,
    pub left_vertices: Vec<VertexId>,
    pub left: Vec<u32>,
    pub right_vertices: Vec<VertexId>,
    pub right: Vec<u32>,
}

impl RoundedInstance {
    /// Builds an instance directly from integer tuples (unit 1).
    pub fn from_tuples(j: usize, k: u32, left: Vec<Vec<u32>>, right: Vec<Vec<u32>>) -> Self {
        Self {
            j,
            k,
            unit: 1.0,
            ell: f64::from(k),
            left_vertices: (0..left.len()).collect(),
            right_vertices: (0..right.len()).collect(),
            left: left.into_iter().flatten().collect(),
            right: right.into_iter().flatten().collect(),
        }
    }

    fn rows(&self, left: bool) -> usize {
        if left {
            self.left_vertices.len()
        } else {
            self.right_vertices.len()
        }
    }
}

/// Result of the max-min computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxMin {
    pub value: u32,
    /// A left and a right vertex attaining `value`.
    pub witness: (VertexId, VertexId),
    pub distinct_left: usize,
    pub distinct_right: usize,
}

/// Tuples of the marked vertices on each side, one search per portal over
/// the whole graph. `inside` and `outside` flag the two (overlapping) sides.
pub fn build_tripartite(
    g: &EmbeddedGraph,
    portals: &[VertexId],
    inside: &[bool],
    outside: &[bool],
) -> Result<TripartiteInstance> {
    if portals.is_empty() {
        return Err(Error::NoPortals);
    }
    let j = portals.len();
    let left_vertices: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| g.is_marked(v) && inside[v])
        .collect();
    let right_vertices: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| g.is_marked(v) && outside[v])
        .collect();
    let mut left = vec![0.0; left_vertices.len() * j];
    let mut right = vec![0.0; right_vertices.len() * j];
    let mut ws = SsspWorkspace::new();
    let mut ell: f64 = 0.0;
    for (p, &portal) in portals.iter().enumerate() {
        ws.run(g, portal, None);
        let dist = ws.dist();
        for (vertices, table) in [(&left_vertices, &mut left), (&right_vertices, &mut right)] {
            for (i, &v) in vertices.iter().enumerate() {
                let d = dist[v];
                if !d.is_finite() {
                    return Err(Error::NotConnected);
                }
                table[i * j + p] = d;
                ell = ell.max(d);
            }
        }
    }
    Ok(TripartiteInstance {
        j,
        left_vertices,
        left,
        right_vertices,
        right,
        ell,
    })
}

/// Rounds every entry up to a whole number of units `ell / k`, clamped to
/// `1..=k` (a zero entry becomes one unit).
pub fn round_instance(t: &TripartiteInstance, k: u32) -> Result<RoundedInstance> {
    if t.ell <= 0.0 || k == 0 {
        return Err(Error::ZeroScale);
    }
    let unit = t.ell / f64::from(k);
    let scale = f64::from(k) / t.ell;
    let round = |x: &f64| ((x * scale).ceil() as u32).clamp(1, k);
    Ok(RoundedInstance {
        j: t.j,
        k,
        unit,
        ell: t.ell,
        left_vertices: t.left_vertices.clone(),
        left: t.left.iter().map(round).collect(),
        right_vertices: t.right_vertices.clone(),
        right: t.right.iter().map(round).collect(),
    })
}

/// First row carrying each distinct tuple of one side, in row order.
fn distinct_rows(r: &RoundedInstance, left: bool) -> Vec<usize> {
    let table = if left { &r.left } else { &r.right };
    let mut seen: HashSet<&[u32]> = HashSet::new();
    let mut rows = Vec::new();
    for i in 0..r.rows(left) {
        let key = &table[i * r.j..(i + 1) * r.j];
        if seen.insert(key) {
            rows.push(i);
        }
    }
    rows
}

/// `max over pairs of min over portals` of the summed tuples, scanning
/// distinct tuples only.
pub fn maxmin_engine(r: &RoundedInstance) -> Result<MaxMin> {
    if r.left_vertices.is_empty() || r.right_vertices.is_empty() {
        return Err(Error::EmptySide);
    }
    let j = r.j;
    let ls = distinct_rows(r, true);
    let rs = distinct_rows(r, false);
    let mut best = 0u32;
    let mut witness = (ls[0], rs[0]);
    let ceiling = 2 * r.k;
    'outer: for &a in &ls {
        let ta = &r.left[a * j..(a + 1) * j];
        for &b in &rs {
            let tb = &r.right[b * j..(b + 1) * j];
            let mut m = u32::MAX;
            for p in 0..j {
                m = m.min(ta[p] + tb[p]);
                if m <= best {
                    break;
                }
            }
            if m > best {
                best = m;
                witness = (a, b);
                if best >= ceiling {
                    break 'outer;
                }
            }
        }
    }
    if j == 0 {
        best = 0;
    }
    Ok(MaxMin {
        value: best,
        witness: (r.left_vertices[witness.0], r.right_vertices[witness.1]),
        distinct_left: ls.len(),
        distinct_right: rs.len(),
    })
}

/// Plain double loop over all vertex pairs; the engine's test oracle.
pub fn maxmin_reference(r: &RoundedInstance) -> Result<u32> {
    if r.left_vertices.is_empty() || r.right_vertices.is_empty() {
        return Err(Error::EmptySide);
    }
    let j = r.j;
    let mut best = 0;
    for a in 0..r.left_vertices.len() {
        for b in 0..r.right_vertices.len() {
            let m = (0..j)
                .map(|p| r.left[a * j + p] + r.right[b * j + p])
                .min()
                .unwrap_or(0);
            best = best.max(m);
        }
    }
    Ok(best)
}

/// Outcome of the cross-separator estimate.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CrossResult {
    pub d1: f64,
    pub witness: Option<(VertexId, VertexId)>,
    pub ell: f64,
    pub distinct_left: usize,
    pub distinct_right: usize,
}

/// The `d1` term: the rounded tripartite max-min times the unit, or 0 when a
/// side has no marked vertex, all tuples are zero, or `x > 2 ell` (then no
/// crossing pair can be near the diameter).
pub fn cross_diameter(
    g: &EmbeddedGraph,
    portals: &PortalSet,
    inside: &[bool],
    outside: &[bool],
    x: f64,
    k: u32,
) -> Result<CrossResult> {
    let t = build_tripartite(g, &portals.portals, inside, outside)?;
    if t.is_one_sided() || t.ell == 0.0 || x > 2.0 * t.ell {
        return Ok(CrossResult {
            ell: t.ell,
            ..CrossResult::default()
        });
    }
    let r = round_instance(&t, k)?;
    let mm = maxmin_engine(&r)?;
    Ok(CrossResult {
        d1: r.unit * f64::from(mm.value),
        witness: Some(mm.witness),
        ell: t.ell,
        distinct_left: mm.distinct_left,
        distinct_right: mm.distinct_right,
    })
}
