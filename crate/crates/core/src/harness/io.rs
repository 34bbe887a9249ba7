//! JSON graph files.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "n": 3,
//!   "edges": [[0, 1, 1.0], [1, 2, 1.0], [2, 0, 1.0]],
//!   "rotations": [[0, 2], [1, 0], [2, 1]],
//!   "marks": [0, 2]
//! }
//! ```
//!
//! `rotations` lists, per vertex, its incident edge indices in
//! counterclockwise order. Instead of rotations a file may give
//! `coordinates` (one `[x, y]` per vertex of a straight-line drawing); the
//! rotations are then derived by sorting edges by angle. `marks` is optional
//! and defaults to all vertices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EmbeddedGraph, VertexId};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub format_version: u32,
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marks: Option<Vec<VertexId>>,
}

impl GraphFile {
    /// Canonical form of `g`: edge `e` is `(origin(2e), head(2e), length)`
    /// and rotations start at each vertex's lowest dart. Marks are written
    /// only when some vertex is unmarked.
    pub fn from_graph(g: &EmbeddedGraph) -> Self {
        let edges = g.edges().map(|(_, u, v, len, _)| (u, v, len)).collect();
        let rotations = (0..g.vertex_count())
            .map(|v| g.darts_at(v).map(|d| d / 2).collect())
            .collect();
        let marks = (g.marked_count() < g.vertex_count()).then(|| g.marked_vertices());
        Self {
            format_version: FORMAT_VERSION,
            n: g.vertex_count(),
            edges,
            rotations: Some(rotations),
            coordinates: None,
            marks,
        }
    }

    pub fn to_graph(&self) -> Result<EmbeddedGraph> {
        let field = |location: &str, message: String| Error::Parse {
            location: location.to_string(),
            message,
        };
        if self.format_version != FORMAT_VERSION {
            return Err(field(
                "format_version",
                format!("unsupported version {}", self.format_version),
            ));
        }
        let g = match (&self.rotations, &self.coordinates) {
            (Some(rot), None) => EmbeddedGraph::build_from_edge_rotations(self.n, &self.edges, rot)?,
            (None, Some(xy)) => EmbeddedGraph::from_coordinates(self.n, &self.edges, xy)?,
            (Some(_), Some(_)) => {
                return Err(field(
                    "rotations",
                    "give either rotations or coordinates, not both".into(),
                ))
            }
            (None, None) => {
                return Err(field(
                    "rotations",
                    "an embedding (rotations or coordinates) is required".into(),
                ))
            }
        };
        match &self.marks {
            None => Ok(g),
            Some(list) => {
                let mut marks = vec![false; self.n];
                for (i, &v) in list.iter().enumerate() {
                    if v >= self.n {
                        return Err(field(
                            &format!("marks[{i}]"),
                            format!("vertex {v} out of range"),
                        ));
                    }
                    marks[v] = true;
                }
                Ok(g.with_marks(marks))
            }
        }
    }
}

pub fn parse_graph(text: &str) -> Result<EmbeddedGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.to_graph()
}

pub fn graph_to_json(g: &EmbeddedGraph) -> String {
    serde_json::to_string(&GraphFile::from_graph(g)).expect("graph files always serialize")
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<EmbeddedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &EmbeddedGraph) -> Result<()> {
    std::fs::write(path, graph_to_json(g) + "\n")?;
    Ok(())
}
