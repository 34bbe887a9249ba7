use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use planar_diameter::harness::{
    bench_sizes, gen_face_split, gen_grid, read_graph, run_sweep, write_graph, Generator,
    SweepSpec, WeightRange,
};
use planar_diameter::oracle::exact_marked_diameter;
use planar_diameter::{approximate_diameter, Error, RunConfig};

#[derive(Parser)]
#[command(name = "planar-diameter", version, about = "Approximate and exact diameters of planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Approximate the diameter of a graph file.
    Approx(ApproxArgs),
    /// Exact diameter by all-pairs shortest paths.
    Exact {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Generate a graph file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Compare the approximation with the exact oracle on generated instances.
    Verify(VerifyArgs),
    /// Time the approximation on growing instances.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ApproxArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[command(flatten)]
    run: RunFlags,
    /// Check the distance invariant at every recursion node (small graphs only).
    #[arg(long)]
    audit: bool,
    /// Include per-phase wall-clock times in the report.
    #[arg(long)]
    timings: bool,
    /// Print the full report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RunFlags {
    #[arg(long, default_value_t = 64)]
    halt_size: usize,
    #[arg(long)]
    depth_cap: Option<usize>,
    #[arg(long, env = "PLANAR_DIAMETER_SEED", default_value_t = 0)]
    seed: u64,
    /// Use the asymptotic halting size instead of --halt-size.
    #[arg(long)]
    paper_halt: bool,
    /// Perturb lengths slightly (seeded) to make shortest paths unique.
    #[arg(long)]
    perturb: bool,
}

impl RunFlags {
    fn config(&self, eps: f64) -> RunConfig {
        RunConfig {
            halt_size: self.halt_size,
            depth_cap: self.depth_cap,
            seed: self.seed,
            paper_halt_rule: self.paper_halt,
            perturbation: self.perturb,
            ..RunConfig::new(eps)
        }
    }
}

#[derive(Args)]
struct WeightFlags {
    #[arg(long, default_value_t = 1)]
    min_weight: u32,
    #[arg(long, default_value_t = 100)]
    max_weight: u32,
}

impl WeightFlags {
    fn range(&self) -> Result<WeightRange, Error> {
        if self.min_weight > self.max_weight {
            return Err(Error::InvalidConfig(format!(
                "--min-weight {} exceeds --max-weight {}",
                self.min_weight, self.max_weight
            )));
        }
        Ok((self.min_weight, self.max_weight))
    }
}

#[derive(Subcommand)]
enum GenKind {
    /// A w x h grid.
    Grid {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        #[command(flatten)]
        weights: WeightFlags,
        #[arg(long, env = "PLANAR_DIAMETER_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A random maximal planar graph grown by face splits.
    FaceSplit {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        weights: WeightFlags,
        #[arg(long, env = "PLANAR_DIAMETER_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenName {
    Grid,
    FaceSplit,
}

impl From<GenName> for Generator {
    fn from(g: GenName) -> Self {
        match g {
            GenName::Grid => Generator::Grid,
            GenName::FaceSplit => Generator::FaceSplit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "gen", value_enum)]
    generator: GenName,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 50)]
    min_n: usize,
    #[arg(long, default_value_t = 500)]
    max_n: usize,
    #[command(flatten)]
    weights: WeightFlags,
    #[command(flatten)]
    run: RunFlags,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "gen", value_enum, default_value_t = GenName::Grid)]
    generator: GenName,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_value = "25000,50000,100000,200000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.7)]
    eps: f64,
    #[command(flatten)]
    weights: WeightFlags,
    #[command(flatten)]
    run: RunFlags,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Approx(a) => {
            let g = read_graph(&a.file)?;
            let cfg = RunConfig {
                audit: a.audit,
                timings: a.timings,
                ..a.run.config(a.eps)
            };
            let report = approximate_diameter(&g, &cfg)?;
            if a.json {
                let text = serde_json::to_string_pretty(&report).map_err(json_err)?;
                println!("{text}");
            } else {
                println!("{}", report.d_prime);
            }
        }
        Command::Exact { file, json } => {
            let g = read_graph(&file)?;
            let d = exact_marked_diameter(&g)?;
            if json {
                println!("{}", serde_json::json!({ "n": g.vertex_count(), "d": d }));
            } else {
                println!("{d}");
            }
        }
        Command::Gen { kind } => {
            let (g, output) = match kind {
                GenKind::Grid {
                    width,
                    height,
                    weights,
                    seed,
                    output,
                } => {
                    if width == 0 || height == 0 {
                        return Err(Error::InvalidConfig("grid sides must be positive".into()));
                    }
                    (gen_grid(width, height, weights.range()?, seed), output)
                }
                GenKind::FaceSplit {
                    n,
                    weights,
                    seed,
                    output,
                } => {
                    if n == 0 {
                        return Err(Error::InvalidConfig("--n must be positive".into()));
                    }
                    (gen_face_split(n, weights.range()?, seed), output)
                }
            };
            match output {
                Some(path) => write_graph(&path, &g)?,
                None => {
                    let text = planar_diameter::harness::graph_to_json(&g);
                    println!("{text}");
                }
            }
        }
        Command::Verify(v) => {
            if v.min_n > v.max_n {
                return Err(Error::InvalidConfig("--min-n exceeds --max-n".into()));
            }
            let spec = SweepSpec {
                generator: v.generator.into(),
                count: v.count,
                min_n: v.min_n,
                max_n: v.max_n,
                weights: v.weights.range()?,
                seed: v.run.seed,
                config: v.run.config(v.eps),
                jobs: v.jobs,
            };
            let records = run_sweep(&spec)?;
            let mut out = sink(v.output.as_deref())?;
            emit(&mut out, v.format, &records)?;
            out.flush()?;
            let bad = records.iter().filter(|r| !r.within_bounds()).count();
            if bad > 0 {
                eprintln!("{bad} of {} instances violate d <= d' <= (1+eps) d", records.len());
                return Ok(ExitCode::from(2));
            }
        }
        Command::Bench(b) => {
            let rows = bench_sizes(
                b.generator.into(),
                &b.sizes,
                b.weights.range()?,
                b.run.seed,
                &b.run.config(b.eps),
                b.repeats,
            )?;
            let mut out = sink(b.output.as_deref())?;
            emit(&mut out, b.format, &rows)?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: serde::Serialize>(out: &mut dyn Write, format: Format, rows: &[T]) -> Result<(), Error> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for r in rows {
                let line = serde_json::to_string(r).map_err(json_err)?;
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(e.to_string())
}
