//! Approximate diameter of undirected planar graphs with non-negative edge
//! lengths.
//!
//! The estimate `d'` satisfies `d <= d' <= (1 + eps) * d`. The computation
//! splits the graph with a shortest-path separator, measures distances that
//! cross the separator through a small set of portals, replaces each side's
//! far region by a compact distance-preserving skeleton, and recurses.
//!
//! ```
//! use planar_diameter::{approximate_diameter, harness::gen_grid, RunConfig};
//!
//! let g = gen_grid(12, 12, (1, 1), 7);
//! let report = approximate_diameter(&g, &RunConfig::new(0.35)).unwrap();
//! assert!(report.d_prime >= 22.0 && report.d_prime <= 22.0 * 1.35);
//! ```

pub mod cross_diameter;
pub mod driver;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod portals;
pub mod reducer;
pub mod separator;
pub mod shortest_paths;

pub use driver::{approximate_diameter, RunConfig, RunReport};
pub use error::{Error, Result};
pub use graph::{EmbeddedGraph, FaceCycle, ValidationReport, NONE};
