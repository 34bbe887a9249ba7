//! Instance generation, graph files, oracle sweeps and benchmarks.

mod bench;
mod generators;
mod io;
mod sweep;

pub use bench::{bench_sizes, BenchRow};
pub use generators::{gen_face_split, gen_grid, gen_grid_n, gen_star, WeightRange};
pub use io::{graph_to_json, parse_graph, read_graph, write_graph, GraphFile, FORMAT_VERSION};
pub use sweep::{instance, run_one, run_sweep, Generator, SweepRecord, SweepSpec};
