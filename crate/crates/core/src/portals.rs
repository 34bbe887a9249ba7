//! Portal selection along the separator paths.
//!
//! Starting at the root, a path is walked and a vertex becomes a portal as
//! soon as its distance from the previous portal exceeds the spacing. The
//! walk stops at the first vertex farther than the prefix cap from the root.

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::separator::SeparatorDecomposition;

/// Accuracy parameters derived from the user's epsilon.
///
/// The approximation is assembled from several `(1 + c * eps)` factors that
/// add up to `1 + 7 * eps`, so the working epsilon is `eps_user / 7`. It is
/// then rounded down to `1 / k` for an integer `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Epsilon {
    pub user: f64,
    pub internal: f64,
    pub k: u32,
    pub eff: f64,
}

/// Largest accepted user epsilon.
pub const MAX_EPS: f64 = 0.7;

impl Epsilon {
    pub fn new(user: f64) -> Result<Self> {
        if !(user > 0.0 && user <= MAX_EPS) {
            return Err(Error::BadEpsilon(user));
        }
        let internal = user / 7.0;
        let k = (1.0 / internal).ceil() as u32;
        Ok(Self {
            user,
            internal,
            k,
            eff: 1.0 / f64::from(k),
        })
    }

    /// Regular portal spacing `eps_eff * x`.
    pub fn regular_spacing(&self, x: f64) -> f64 {
        self.eff * x
    }

    /// Dense portal spacing `eps_eff * x / (16 log2 n)`.
    pub fn dense_spacing(&self, x: f64, log2_n: f64) -> f64 {
        self.eff * x / (16.0 * log2_n)
    }

    /// Additive error allowed per reduction, `eps_eff * x / (2 log2 n)`.
    pub fn reduction_slack(&self, x: f64, log2_n: f64) -> f64 {
        self.eff * x / (2.0 * log2_n)
    }
}

/// Portals are only needed within `8x` of the root.
pub fn prefix_cap(x: f64) -> f64 {
    8.0 * x
}

/// `log2 n`, floored at 1 so tiny graphs do not divide by zero.
pub fn log2_n(n: usize) -> f64 {
    (n.max(2) as f64).log2().max(1.0)
}

/// Portals chosen on one path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathPortals {
    /// Positions on the path, increasing; the first is always 0.
    pub indices: Vec<usize>,
    /// Distance from the root along the path, per portal.
    pub prefix_dist: Vec<f64>,
    /// Number of path vertices within the cap.
    pub covered: usize,
    pub spacing: f64,
    pub prefix_cap: f64,
}

impl PathPortals {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Index into `indices` of the last portal at or before path position
    /// `pos`.
    pub fn nearest_before(&self, pos: usize) -> Result<usize> {
        if pos >= self.covered {
            return Err(Error::OutsidePrefix(pos));
        }
        Ok(self.indices.partition_point(|&i| i <= pos) - 1)
    }
}

/// Walks a path given by cumulative distances from its first vertex.
pub fn select_portals(cumulative: &[f64], spacing: f64, prefix_cap: f64) -> Result<PathPortals> {
    if cumulative.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut indices = vec![0];
    let mut prefix_dist = vec![cumulative[0]];
    let mut last = cumulative[0];
    let mut covered = 1;
    for (i, &c) in cumulative.iter().enumerate().skip(1) {
        if c > prefix_cap {
            break;
        }
        covered = i + 1;
        if spacing == 0.0 || c - last > spacing {
            indices.push(i);
            prefix_dist.push(c);
            last = c;
        }
    }
    Ok(PathPortals {
        indices,
        prefix_dist,
        covered,
        spacing,
        prefix_cap,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathId {
    P,
    Q,
}

/// Portals on both separator paths.
#[derive(Clone, Debug)]
pub struct PortalSet {
    /// Distinct portal vertices; the root comes first.
    pub portals: Vec<VertexId>,
    /// For each portal, its path and position on that path (the first path
    /// it was found on).
    pub on_path: Vec<(PathId, usize)>,
    pub prefix_dist: Vec<f64>,
    pub p: PathPortals,
    pub q: PathPortals,
    pub spacing: f64,
    pub prefix_cap: f64,
}

impl PortalSet {
    /// Selects portals on `P` and `Q` of `dec`. Both paths are shortest, so
    /// the distance along them is the tree distance from the root.
    pub fn for_separator(dec: &SeparatorDecomposition, spacing: f64, cap: f64) -> Result<Self> {
        let dist = &dec.tree.dist;
        let cum_p: Vec<f64> = dec.p.iter().map(|&v| dist[v]).collect();
        let cum_q: Vec<f64> = dec.q.iter().map(|&v| dist[v]).collect();
        let p = select_portals(&cum_p, spacing, cap)?;
        let q = select_portals(&cum_q, spacing, cap)?;
        let mut portals = Vec::new();
        let mut on_path = Vec::new();
        let mut prefix_dist = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (id, path, frag) in [(PathId::P, &dec.p, &p), (PathId::Q, &dec.q, &q)] {
            for (k, &i) in frag.indices.iter().enumerate() {
                if seen.insert(path[i]) {
                    portals.push(path[i]);
                    on_path.push((id, i));
                    prefix_dist.push(frag.prefix_dist[k]);
                }
            }
        }
        Ok(Self {
            portals,
            on_path,
            prefix_dist,
            p,
            q,
            spacing,
            prefix_cap: cap,
        })
    }

    pub fn len(&self) -> usize {
        self.portals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.portals.is_empty()
    }

    pub fn path(&self, id: PathId) -> &PathPortals {
        match id {
            PathId::P => &self.p,
            PathId::Q => &self.q,
        }
    }
}

/// Path position of the nearest portal at or before `pos`.
pub fn nearest_portal_before(frag: &PathPortals, pos: usize) -> Result<usize> {
    Ok(frag.indices[frag.nearest_before(pos)?])
}
