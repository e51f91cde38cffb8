//! Acceptance gate: one PASS/FAIL line per criterion, full-size runs.
//! Built with `harness = false` so the lines always reach the console.

mod support;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shadowlab::arrangement::{is_convex_cycle, shadow_complex, Classification};
use shadowlab::compat::{check_union_closure, find_disconnection_example, largest_compatible, reachable};
use shadowlab::curve::Point;
use shadowlab::sphere::{
    betti, build_sphere, check_slice_scaling, verify_retraction, RetractionEvaluator, SphereModel, VoxelSet,
};
use shadowlab::theorem_lab::symmetry::canonical_open;
use shadowlab::theorem_lab::{
    enumerate_min_vertex_paths, find_tree_shadow_cycle, lattice_vertices, min_branch_point_census,
    run_strand_suite, search_convex_shadow_paths, search_path_shadow_cycles, shadow_reports, Mode,
    SearchConfig, StrandSuiteConfig,
};
use shadowlab::{parse_curve, Rational, SIX_VERTEX_EXAMPLE};
use support::oracle::betti_oracle;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_shadowlab"))
        .env_remove("SHADOWLAB_BUDGET")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

const PATH_CYCLES: (u64, i64, usize, u64) = (100_000, 3, 20, 42);
const STRAND_SUITE: StrandSuiteConfig = StrandSuiteConfig {
    paths: 10_000,
    lifts: 100,
    grid_max: 3,
    max_steps: 20,
    seed: 42,
};
const CONVEX: (u64, i64, usize, u64) = (10_000, 3, 8, 7);

fn path_cycle_cfg() -> SearchConfig {
    let (n, g, l, seed) = PATH_CYCLES;
    SearchConfig::new(Mode::PathShadowCycles, g, l, n, seed)
}

fn convex_cfg() -> SearchConfig {
    let (n, g, l, seed) = CONVEX;
    SearchConfig::new(Mode::ConvexShadowPaths, g, l, n, seed)
}

fn c1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("six.curve");
    std::fs::write(&path, SIX_VERTEX_EXAMPLE).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let out = cli(&["classify", "--curve", path.to_str().unwrap(), "--axis", "all"])?;
    let secs = t.elapsed().as_secs_f64();
    let v: serde_json::Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let kinds: Vec<&str> = v["shadows"]
        .as_array()
        .ok_or("no shadows")?
        .iter()
        .filter_map(|s| s["report"]["classification"].as_str())
        .collect();
    check(kinds == ["Cycle", "Cycle", "Cycle"], format!("classifications {kinds:?}"))?;
    check(secs < 1.0, format!("took {secs:.2} s"))?;
    Ok(format!("classify reports Cycle, Cycle, Cycle in {secs:.3} s"))
}

fn c2() -> Outcome {
    let mut notes = Vec::new();
    for n in [3, 4, 5] {
        let cfg = SearchConfig::new(Mode::MinVertexPaths, 2, n, 0, 0);
        let r = enumerate_min_vertex_paths(n, &cfg).map_err(|e| e.to_string())?;
        check(r.witnesses.is_empty(), format!("n = {n} has {} witnesses", r.witnesses.len()))?;
        notes.push(format!("n={n}: 0 of {} nodes", r.stats["searchNodes"]));
    }
    let t = Instant::now();
    let cfg = SearchConfig::new(Mode::MinVertexPaths, 3, 6, 0, 0);
    let r = enumerate_min_vertex_paths(6, &cfg).map_err(|e| e.to_string())?;
    let secs = t.elapsed().as_secs_f64();
    let six = parse_curve(SIX_VERTEX_EXAMPLE).unwrap();
    let target = canonical_open(&lattice_vertices(&six).unwrap());
    let found = r
        .witnesses
        .iter()
        .any(|w| lattice_vertices(w).map(|v| canonical_open(&v)) == Some(target.clone()));
    check(found, "six-vertex example missing from the n = 6 witnesses")?;
    check(secs < 600.0, format!("n = 6 took {secs:.0} s"))?;
    Ok(format!(
        "{}; n=6 on {{0..3}}^3: {} classes incl. the example, {secs:.1} s",
        notes.join(", "),
        r.witnesses.len()
    ))
}

fn c3() -> Outcome {
    let r = search_path_shadow_cycles(&path_cycle_cfg()).map_err(|e| e.to_string())?;
    check(r.instances_checked == PATH_CYCLES.0, "sample count")?;
    check(r.counterexamples.is_empty(), format!("{} counterexamples", r.counterexamples.len()))?;
    check(r.histogram.get("Path,Path,Path").is_none(), "all-path triple in histogram")?;
    let violations = r.stats["twoStrandViolations"];
    check(violations == 0, format!("{violations} two-strand violations"))?;
    Ok(format!(
        "{} cycles, 0 all-path triples, {} two-strand checks with 0 violations",
        r.instances_checked, r.stats["twoStrandChecks"]
    ))
}

fn c4() -> Outcome {
    let r = run_strand_suite(&STRAND_SUITE).map_err(|e| e.to_string())?;
    check(r.paths_checked == 10_000, "path count")?;
    check(r.lifts_checked == 100, format!("only {} liftable instances", r.lifts_checked))?;
    check(r.violation_count() == 0, format!("{:?}", r.witnesses))?;
    Ok(format!(
        "10000 paths and {} lifts ({} draws), 0 violations",
        r.lifts_checked, r.lift_attempts
    ))
}

fn c5() -> Outcome {
    let cfg = SearchConfig::new(Mode::TreeShadowCycles, 2, 24, 0, 0);
    let w = find_tree_shadow_cycle(&cfg)
        .map_err(|e| e.to_string())?
        .ok_or("no tree-shadow cycle found")?;
    let reps = shadow_reports(&w);
    let counts: Vec<usize> = reps.iter().map(|r| r.branch_point_count).collect();
    check(
        reps.iter().all(|r| r.classification == Classification::Tree && r.branch_point_count >= 2),
        format!("witness shadows {counts:?}"),
    )?;
    check(counts.iter().sum::<usize>() >= 3, "total branch points below 3")?;
    let census = SearchConfig::new(Mode::BranchCensus, 3, 24, 0, 0);
    let c = min_branch_point_census(&census).map_err(|e| e.to_string())?;
    check(c.counterexamples.is_empty(), "forbidden pattern in census")?;
    let total = c.stats.get("minBranchTotal").copied().unwrap_or(u64::MAX);
    check(total >= 3, format!("census minimum total {total}"))?;
    Ok(format!(
        "witness of length {} with branch points {counts:?}; census on {{0..3}}^3, length <= 24: classes {:?}, no forbidden pattern",
        w.vertices().len(),
        c.histogram
    ))
}

fn c6() -> Outcome {
    let r = search_convex_shadow_paths(&convex_cfg()).map_err(|e| e.to_string())?;
    check(r.instances_checked == CONVEX.0, "sample count")?;
    check(r.counterexamples.is_empty(), format!("{} counterexamples", r.counterexamples.len()))?;
    let six = parse_curve(SIX_VERTEX_EXAMPLE).unwrap();
    let convex = (1..=3)
        .filter(|&a| is_convex_cycle(&shadow_complex(&six, a).unwrap()))
        .count();
    check(convex <= 2, format!("six-vertex example has {convex} convex shadows"))?;
    Ok(format!("10000 chains, 0 with three convex cycle shadows; six-vertex example has {convex}"))
}

fn c7() -> Outcome {
    let model = SphereModel::rickard(1);
    let s = build_sphere(&model, 16).map_err(|e| e.to_string())?;
    check(s.dim() == 4, "not in Z^4")?;
    let t = Instant::now();
    let mut all = Vec::new();
    for axis in 1..=4 {
        let b = betti(&s.shadow(axis).unwrap()).map_err(|e| e.to_string())?;
        check(b == [1, 0, 0], format!("x{axis}-shadow has Betti {b:?}"))?;
        all.push(b);
    }
    let secs = t.elapsed().as_secs_f64();
    check(secs < 300.0, format!("homology took {secs:.0} s"))?;
    let slices = check_slice_scaling(&model, &s).map_err(|e| e.to_string())?;
    check(slices.ok, "slice scaling violated")?;
    let max_diff = slices.levels.iter().map(|l| l.symmetric_difference).max().unwrap_or(0);
    Ok(format!(
        "{} cells; four shadows (1, 0, 0) in {secs:.2} s; {} slices within one voxel (max difference {max_diff})",
        s.len(),
        slices.levels.len()
    ))
}

fn c8() -> Outcome {
    let model = SphereModel::rickard(1);
    let tol = Rational::new(1, 16);
    let mut total = 0;
    for (d, axes) in [(1usize, 3usize), (2, 4)] {
        for axis in 1..=axes {
            let ev = RetractionEvaluator::new(&model, d, axis).map_err(|e| e.to_string())?;
            let r = verify_retraction(&model, &ev, 1000, 8, &tol).map_err(|e| e.to_string())?;
            check(r.voxel_resolution == Some(16), "voxel check not at r = 16")?;
            // Only the suspended shadows (d >= 2, axis <= d + 1) have the split at 1/2.
            let split = d >= 2 && axis <= d + 1;
            check(!split || r.boundary_checks == r.samples, "branch agreement not checked on every sample")?;
            check(r.ok(), format!("d={d} axis {axis}: {:?}", r.violations))?;
            total += r.samples;
        }
    }
    let ev = RetractionEvaluator::new(&model, 2, 4).map_err(|e| e.to_string())?;
    let x = Point::new(vec![Rational::new(1, 2), Rational::zero(), Rational::zero()]);
    let y = ev.eval(&x, &Rational::new(1, 2)).map_err(|e| e.to_string())?;
    check(
        y == Point::new(vec![Rational::new(1, 4), Rational::zero(), Rational::zero()]),
        "linear branch example",
    )?;
    Ok(format!("{total} samples over 7 shadows, 0 violations at tol 1/16"))
}

fn c9() -> Outcome {
    let one = |dim| BTreeSet::from([vec![0i64; dim]]);
    check(betti(&VoxelSet::new(2, 1, one(2))).unwrap() == [1, 0], "single pixel")?;
    check(betti(&VoxelSet::new(3, 1, one(3))).unwrap() == [1, 0, 0], "single voxel")?;
    let ring: BTreeSet<Vec<i64>> = (0..9).map(|i| vec![i % 3, i / 3]).filter(|c| c != &vec![1, 1]).collect();
    check(betti(&VoxelSet::new(2, 1, ring)).unwrap() == [1, 1], "ring")?;
    let shell: BTreeSet<Vec<i64>> = (0..27)
        .map(|i| vec![i % 3, i / 3 % 3, i / 9])
        .filter(|c| c != &vec![1, 1, 1])
        .collect();
    check(betti(&VoxelSet::new(3, 1, shell)).unwrap() == [1, 0, 1], "shell")?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut nontrivial = 0;
    for k in 0..50 {
        let dim = 2 + k % 2;
        let side = if dim == 2 { 14 } else { 6 };
        let n = rng.gen_range(1..=200);
        let mut cells = BTreeSet::new();
        let mut c = vec![side / 2; dim];
        while cells.len() < n {
            if rng.gen_bool(0.6) {
                cells.insert(c.clone());
            }
            let a = rng.gen_range(0..dim);
            c[a] = (c[a] + if rng.gen_bool(0.5) { 1 } else { -1 }).clamp(0, side - 1);
        }
        let fast = betti(&VoxelSet::new(dim, 1, cells.clone())).unwrap();
        let slow = betti_oracle(dim, &cells);
        check(fast == slow, format!("set {k}: {fast:?} vs oracle {slow:?}"))?;
        if fast.iter().skip(1).any(|&b| b > 0) || fast[0] > 1 {
            nontrivial += 1;
        }
    }
    Ok(format!("named examples exact; 50 random sets agree with the oracle ({nontrivial} non-trivial)"))
}

fn c10() -> Outcome {
    let r = find_disconnection_example(5, 10_000_000, 1).map_err(|e| e.to_string())?;
    let w = r.witness.ok_or("no witness within 5x5")?;
    check(w.iter().all(|s| s.is_path()), "witness bitmap not a path")?;
    let res = largest_compatible(&w[0], &w[1], &w[2]).map_err(|e| e.to_string())?;
    check(res.per_shadow_exact == [true; 3], "shadows not exact")?;
    let largest = res.largest.ok_or("no largest set")?;
    let comps = largest.components();
    check(comps.len() >= 2, "largest set connected")?;
    check(!reachable(&largest, &comps[0][0], &comps[1][0]).unwrap(), "rods can move between components")?;
    let u = check_union_closure(1000, 5, 3);
    check(u.union_violations == 0 && u.maximality_violations == 0, format!("{:?}", u.examples))?;
    Ok(format!(
        "witness after {} draws, {} voxels in {} components; 1000 union pairs, 0 violations",
        r.triples_checked,
        largest.len(),
        comps.len()
    ))
}

fn c11() -> Outcome {
    let (n, g, l, seed) = PATH_CYCLES;
    let (n, g, l, seed) = (n.to_string(), g.to_string(), l.to_string(), seed.to_string());
    let c3_args = ["search", "path-shadow-cycles", "--samples", &n, "--grid", &g, "--max-len", &l, "--seed", &seed];
    let s = &STRAND_SUITE;
    let (sp, sl, sg, sm, ss) = (
        s.paths.to_string(),
        s.lifts.to_string(),
        s.grid_max.to_string(),
        s.max_steps.to_string(),
        s.seed.to_string(),
    );
    let c4_args = [
        "search", "strand-laws", "--samples", &sp, "--lifts", &sl, "--grid", &sg, "--max-len", &sm, "--seed", &ss,
    ];
    let (n, g, l, seed) = CONVEX;
    let (n, g, l, seed) = (n.to_string(), g.to_string(), l.to_string(), seed.to_string());
    let c6_args = ["search", "convex-shadow-paths", "--samples", &n, "--grid", &g, "--max-len", &l, "--seed", &seed];

    let in_process = [
        search_path_shadow_cycles(&path_cycle_cfg()).unwrap().to_json(),
        serde_json::to_string_pretty(&run_strand_suite(&STRAND_SUITE).unwrap()).unwrap(),
        search_convex_shadow_paths(&convex_cfg()).unwrap().to_json(),
    ];
    for (k, args) in [&c3_args[..], &c4_args[..], &c6_args[..]].into_iter().enumerate() {
        let one = cli(&[&["--jobs", "1"][..], args].concat())?;
        let four = cli(&[&["--jobs", "4"][..], args].concat())?;
        check(one == four, format!("{} differs between --jobs 1 and 4", args[1]))?;
        check(
            String::from_utf8_lossy(&one).trim_end() == in_process[k],
            format!("{} CLI output differs from the library report", args[1]),
        )?;
    }
    Ok("criteria 3, 4, 6 reports byte-identical for --jobs 1, --jobs 4 and in-process runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("six-vertex example", c1),
        ("minimality", c2),
        ("no cycle with three path shadows", c3),
        ("strand laws", c4),
        ("tree-shadow cycle and branch census", c5),
        ("convex shadows", c6),
        ("sphere contractibility", c7),
        ("retraction", c8),
        ("Betti oracle", c9),
        ("compatibility", c10),
        ("determinism", c11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.1} s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.1} s]", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
