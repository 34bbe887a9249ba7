//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use planar_diameter::cross_diameter::{
    build_tripartite, maxmin_engine, maxmin_reference, RoundedInstance,
};
use planar_diameter::graph::{
    contract_degree2, extract_induced, simplify, triangulate, EmbeddedGraph,
};
use planar_diameter::harness::{
    bench_sizes, gen_face_split, gen_grid_n, gen_star, run_sweep, write_graph, Generator,
    SweepSpec,
};
use planar_diameter::oracle::{distances_from, exact_marked_diameter, exact_set_diameter, DistanceMatrix};
use planar_diameter::portals::{log2_n, prefix_cap, Epsilon, PortalSet};
use planar_diameter::reducer::{dense_skeleton, reduce_side, shrink_separator, Which};
use planar_diameter::separator::{find_separator, SeparatorDecomposition, Side};
use planar_diameter::shortest_paths::bootstrap_x;
use planar_diameter::{approximate_diameter, RunConfig};

type Outcome = Result<String, String>;

fn tol(v: f64) -> f64 {
    1e-9 * v.max(1.0)
}

fn instance(i: u64, min_n: usize, max_n: usize) -> EmbeddedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0000 + i);
    let n = rng.gen_range(min_n..=max_n);
    if i % 2 == 0 {
        gen_grid_n(n, (1, 100), i)
    } else {
        gen_face_split(n, (1, 100), i)
    }
}

fn check(failures: &[String], count: usize, what: &str) -> Outcome {
    if failures.is_empty() {
        Ok(format!("{count} {what}, 0 violations"))
    } else {
        Err(format!(
            "{} of {count} {what} violate; first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn sandwich() -> Outcome {
    let mut runs = 0;
    let mut failures = Vec::new();
    for generator in [Generator::Grid, Generator::FaceSplit] {
        for eps in [0.7, 0.35] {
            let spec = SweepSpec {
                generator,
                count: 100,
                min_n: 50,
                max_n: 2000,
                weights: (1, 100),
                seed: 1000,
                config: RunConfig::new(eps),
                jobs: 0,
            };
            for r in run_sweep(&spec).map_err(|e| e.to_string())? {
                runs += 1;
                if !r.within_bounds() {
                    failures.push(format!(
                        "{} n={} seed={} eps={} d={} d'={}",
                        r.generator, r.n, r.seed, r.eps, r.d_exact, r.d_prime
                    ));
                }
            }
        }
    }
    check(&failures, runs, "runs (200 instances x 2 eps)")
}

fn engine_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    for i in 0..500 {
        let j = rng.gen_range(1..=32);
        let k = rng.gen_range(1..=12u32);
        let side = |rng: &mut ChaCha8Rng| {
            let rows = rng.gen_range(1..=300);
            (0..rows)
                .map(|_| (0..j).map(|_| rng.gen_range(1..=k)).collect())
                .collect::<Vec<Vec<u32>>>()
        };
        let left = side(&mut rng);
        let right = side(&mut rng);
        let r = RoundedInstance::from_tuples(j, k, left, right);
        let fast = maxmin_engine(&r).map_err(|e| e.to_string())?.value;
        let slow = maxmin_reference(&r).map_err(|e| e.to_string())?;
        if fast != slow {
            failures.push(format!("instance {i}: engine {fast} reference {slow}"));
        }
    }
    check(&failures, 500, "instances")
}

/// The top-level separator of the driver: simplified graph, triangulated,
/// rooted at the lowest marked vertex.
fn top_separator(g: &EmbeddedGraph) -> (EmbeddedGraph, SeparatorDecomposition) {
    let g = simplify(g);
    let tri = triangulate(&g).unwrap().graph;
    let root = g.marked_vertices()[0];
    let dec = find_separator(&tri, root).unwrap();
    (g, dec)
}

fn cross_lemma() -> Outcome {
    let mut failures = Vec::new();
    let mut qualified = 0;
    let mut tried = 0;
    let mut i = 0;
    while qualified < 50 && tried < 2000 {
        tried += 1;
        i += 1;
        let g = instance(30_000 + i, 40, 400);
        let eps = Epsilon::new(if i % 2 == 0 { 0.7 } else { 0.35 }).unwrap();
        let x = bootstrap_x(&g).unwrap();
        let (g, dec) = top_separator(&g);
        let inside: Vec<bool> = dec.side.iter().map(|&s| s != Side::Outside).collect();
        let outside: Vec<bool> = dec.side.iter().map(|&s| s != Side::Inside).collect();
        let regular = PortalSet::for_separator(&dec, eps.regular_spacing(x), prefix_cap(x)).unwrap();
        let t = build_tripartite(&g, &regular.portals, &inside, &outside).unwrap();
        if t.is_one_sided() {
            continue;
        }
        let truth = exact_set_diameter(&g, &t.left_vertices, &t.right_vertices).unwrap();
        if truth < x {
            continue;
        }
        qualified += 1;
        let value = t.unrounded_value().unwrap();
        let hi = (1.0 + 2.0 * eps.eff) * truth;
        if value < truth - tol(truth) || value > hi + tol(truth) {
            failures.push(format!("instance {i}: d={truth} G_t={value} bound={hi}"));
        }
    }
    if qualified < 50 {
        return Err(format!("only {qualified} qualifying instances in {tried} tries"));
    }
    check(&failures, qualified, "qualifying instances")
}

struct FirstLevel {
    g: EmbeddedGraph,
    dec: SeparatorDecomposition,
    shrunk: planar_diameter::reducer::Shrunk,
    slack: f64,
}

fn first_level(g: &EmbeddedGraph, eps_user: f64) -> FirstLevel {
    let eps = Epsilon::new(eps_user).unwrap();
    let x = bootstrap_x(g).unwrap();
    let log2 = log2_n(g.vertex_count());
    let (g, dec) = top_separator(g);
    let marks: Vec<bool> = (0..g.vertex_count())
        .map(|v| g.is_marked(v) && dec.side[v] != Side::Separator)
        .collect();
    let g = g.with_marks(marks);
    let dense = PortalSet::for_separator(&dec, eps.dense_spacing(x, log2), prefix_cap(x)).unwrap();
    let shrunk = shrink_separator(&g, &dec, &dense).unwrap();
    FirstLevel {
        g,
        dec,
        shrunk,
        slack: eps.reduction_slack(x, log2),
    }
}

fn reduction_lemma() -> Outcome {
    let mut failures = Vec::new();
    let mut sides = 0;
    for i in 0..100 {
        let g = instance(40_000 + i, 50, 400);
        let eps = if i % 2 == 0 { 0.7 } else { 0.35 };
        let fl = first_level(&g, eps);
        let full = DistanceMatrix::new(&fl.g);
        for which in [Which::In, Which::Out] {
            let near = if which == Which::In { Side::Inside } else { Side::Outside };
            let red = reduce_side(&fl.shrunk, which);
            let reduced = DistanceMatrix::new(&red.result);
            let marked = red.result.marked_vertices();
            let original: Vec<usize> = (0..fl.g.vertex_count())
                .filter(|&v| fl.g.is_marked(v) && fl.dec.side[v] == near)
                .collect();
            let mut got: Vec<usize> = marked.iter().map(|&v| red.vertex_map[v]).collect();
            got.sort_unstable();
            if got != original {
                failures.push(format!("instance {i} {which:?}: marked set changed"));
                continue;
            }
            sides += 1;
            let mut truth: f64 = 0.0;
            let mut approx: f64 = 0.0;
            for &a in &marked {
                for &b in &marked {
                    truth = truth.max(full.get(red.vertex_map[a], red.vertex_map[b]));
                    approx = approx.max(reduced.get(a, b));
                }
            }
            if approx < truth - tol(truth) || approx > truth + fl.slack + tol(truth) {
                failures.push(format!(
                    "instance {i} {which:?}: d={truth} reduced={approx} slack={}",
                    fl.slack
                ));
            }
        }
    }
    check(&failures, sides, "reductions")
}

fn path_is_shortest(g: &EmbeddedGraph, path: &[usize], dist: &[f64]) -> bool {
    if dist[path[0]] != 0.0 {
        return false;
    }
    let mut along = 0.0;
    for w in path.windows(2) {
        let step = g
            .darts_at(w[0])
            .filter(|&d| g.head(d) == w[1] && !g.is_artificial(d))
            .map(|d| g.length(d))
            .fold(f64::INFINITY, f64::min);
        along += step;
        if (along - dist[w[1]]).abs() > tol(along) {
            return false;
        }
    }
    true
}

fn separator_contract() -> Outcome {
    let mut failures = Vec::new();
    for i in 0..200 {
        let g = instance(50_000 + i, 20, 2000);
        let tri = triangulate(&simplify(&g)).unwrap().graph;
        let n = tri.vertex_count();
        let dec = find_separator(&tri, 0).unwrap();
        let c: HashSet<usize> = dec.p.iter().chain(&dec.q).copied().collect();
        let bound = (2 * n).div_ceil(3);
        let mut why = Vec::new();
        if dec.side.len() != n || (0..n).any(|v| (dec.side[v] == Side::Separator) != c.contains(&v)) {
            why.push("C is not P + Q");
        }
        if tri.edges().any(|(_, u, v, _, _)| {
            matches!(
                (dec.side[u], dec.side[v]),
                (Side::Inside, Side::Outside) | (Side::Outside, Side::Inside)
            )
        }) {
            why.push("A-B edge");
        }
        if dec.count(Side::Inside) > bound || dec.count(Side::Outside) > bound {
            why.push("unbalanced");
        }
        let dist = distances_from(&g, 0);
        if dec.p[0] != 0 || dec.q[0] != 0 || !path_is_shortest(&g, &dec.p, &dist) || !path_is_shortest(&g, &dec.q, &dist) {
            why.push("path not shortest");
        }
        if !why.is_empty() {
            failures.push(format!("instance {i} (n={n}): {}", why.join(", ")));
        }
    }
    check(&failures, 200, "triangulated instances")
}

fn portal_counts() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for i in 0..120 {
        let g = instance(60_000 + i, 30, if i < 100 { 500 } else { 3000 });
        let n = g.vertex_count();
        let eps_user = [0.7, 0.35, 0.1][i as usize % 3];
        let eps = Epsilon::new(eps_user).unwrap();
        let log2 = log2_n(n);
        let reg_cap = 8.0 / eps.eff + 1.0;
        let dense_cap = 128.0 * log2 / eps.eff + 1.0;
        let report = approximate_diameter(&g, &RunConfig::new(eps_user)).map_err(|e| e.to_string())?;
        runs += 1;
        if report.max_regular_portals_per_path as f64 > reg_cap
            || report.max_dense_portals_per_path as f64 > dense_cap
        {
            failures.push(format!(
                "instance {i}: regular {} (cap {reg_cap}), dense {} (cap {dense_cap})",
                report.max_regular_portals_per_path, report.max_dense_portals_per_path
            ));
        }
        if n > 500 {
            continue;
        }
        let x = bootstrap_x(&g).unwrap();
        let (_, dec) = top_separator(&g);
        let cap = prefix_cap(x);
        for spacing in [eps.regular_spacing(x), eps.dense_spacing(x, log2)] {
            let set = PortalSet::for_separator(&dec, spacing, cap).unwrap();
            for (path, frag) in [(&dec.p, &set.p), (&dec.q, &set.q)] {
                if frag.len() as f64 > if spacing == eps.regular_spacing(x) { reg_cap } else { dense_cap } {
                    failures.push(format!("instance {i}: {} portals on one path", frag.len()));
                }
                for (pos, &v) in path.iter().enumerate() {
                    let d = dec.tree.dist[v];
                    if d > cap {
                        continue;
                    }
                    let gap = match frag.nearest_before(pos) {
                        Ok(k) => d - dec.tree.dist[path[frag.indices[k]]],
                        Err(_) => f64::INFINITY,
                    };
                    if gap > spacing + tol(d) {
                        failures.push(format!("instance {i}: gap {gap} > spacing {spacing} at position {pos}"));
                    }
                }
            }
        }
    }
    check(&failures, runs, "runs")
}

fn near_linearity() -> Outcome {
    let sizes = [25_000, 50_000, 100_000, 200_000];
    let rows = bench_sizes(Generator::Grid, &sizes, (1, 100), 0, &RunConfig::new(0.7), 1)
        .map_err(|e| e.to_string())?;
    let summary: Vec<String> = rows
        .iter()
        .map(|r| match r.growth {
            Some(g) => format!("n={} {:.2}s (x{g:.2})", r.n, r.millis / 1e3),
            None => format!("n={} {:.2}s", r.n, r.millis / 1e3),
        })
        .collect();
    let text = summary.join(", ");
    if rows.iter().filter_map(|r| r.growth).all(|g| g <= 3.0) {
        Ok(text)
    } else {
        Err(format!("growth above 3.0 per doubling: {text}"))
    }
}

fn bootstrap() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let g = instance(80_000 + i, 3, 300);
        let n = g.vertex_count();
        let g = if i % 3 == 0 {
            let mut marks: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
            marks[rng.gen_range(0..n)] = true;
            g.with_marks(marks)
        } else {
            g
        };
        let x = bootstrap_x(&g).unwrap();
        let d = exact_marked_diameter(&g).unwrap();
        if x > d + tol(d) || d > 2.0 * x + tol(d) {
            failures.push(format!("instance {i}: x={x} d={d}"));
        }
    }
    for leaves in [2, 5, 40] {
        let g = gen_star(leaves, 3.5);
        let x = bootstrap_x(&g).unwrap();
        let d = exact_marked_diameter(&g).unwrap();
        if x != 3.5 || d != 2.0 * x {
            failures.push(format!("star with {leaves} leaves: x={x} d={d}, expected d = 2x"));
        }
    }
    check(&failures, 203, "instances (3 stars at d = 2x)")
}

fn embedding_integrity() -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checks = 0;
    for i in 0..100 {
        let g = instance(90_000 + i, 10, 600);
        let n = g.vertex_count();
        let mut bad = Vec::new();
        let mut ok = |name: &'static str, h: &EmbeddedGraph| {
            checks += 1;
            if !h.validate().is_valid() {
                bad.push(name);
            }
        };
        ok("triangulate", &triangulate(&g).unwrap().graph);
        let keep: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.6)).collect();
        let ex = extract_induced(&g, &keep);
        ok("extract_induced", &ex.graph);
        let kept: Vec<bool> = (0..ex.graph.vertex_count()).map(|_| rng.gen_bool(0.2)).collect();
        ok("contract_degree2", &contract_degree2(&ex.graph, &kept).graph);
        let fl = first_level(&g, 0.35);
        for which in [Which::In, Which::Out] {
            ok("dense_skeleton", &dense_skeleton(&fl.shrunk, which).0);
            ok("glue_and_shrink", &reduce_side(&fl.shrunk, which).result);
        }
        if !bad.is_empty() {
            failures.push(format!("instance {i}: {}", bad.join(", ")));
        }
    }
    check(&failures, checks, "validations")
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let exe = env!("CARGO_BIN_EXE_planar-diameter");
    let mut runs = 0;
    for (i, g) in [
        gen_grid_n(900, (1, 100), 3),
        gen_face_split(1500, (1, 100), 4),
        gen_face_split(300, (1, 1), 5),
    ]
    .iter()
    .enumerate()
    {
        let path = dir.path().join(format!("g{i}.json"));
        write_graph(&path, g).map_err(|e| e.to_string())?;
        for flags in [
            vec!["--eps", "0.35"],
            vec!["--eps", "0.7", "--perturb", "--seed", "11"],
            vec!["--eps", "0.5", "--halt-size", "16", "--seed", "3"],
        ] {
            let a = run_cli(exe, &path, &flags)?;
            let b = run_cli(exe, &path, &flags)?;
            runs += 1;
            if a != b {
                return Err(format!("reports differ for g{i} with {flags:?}"));
            }
        }
    }
    Ok(format!("{runs} file/flag combinations, byte-identical reports"))
}

fn run_cli(exe: &str, file: &Path, flags: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(exe)
        .arg("approx")
        .arg(file)
        .args(flags)
        .arg("--json")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("diameter sandwich", sandwich),
        ("max-min engine equals reference", engine_equivalence),
        ("cross-separator estimate sandwich", cross_lemma),
        ("side reduction sandwich", reduction_lemma),
        ("separator contract", separator_contract),
        ("portal counts and coverage", portal_counts),
        ("near-linear running time", near_linearity),
        ("bootstrap bracket", bootstrap),
        ("embedding integrity", embedding_integrity),
        ("deterministic reports", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| *f == id || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
