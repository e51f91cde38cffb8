use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use shadowlab::arrangement::{build_complex, classify, is_convex_cycle, shadow_complex};
use shadowlab::compat::{self, CompatError, ShadowBitmap};
use shadowlab::curve::{parse_curve, project, PolyChain};
use shadowlab::render::{render_shadow, RenderSpec};
use shadowlab::sphere::{self, RetractionEvaluator, SphereError, SphereModel, VoxelSet};
use shadowlab::strands::{self, lift_strand, shadow_curve, Strand};
use shadowlab::theorem_lab::{self as lab, Mode, SearchConfig, SearchError};
use shadowlab::{Error, Rational};

#[derive(Parser)]
#[command(name = "shadowlab", version, about = "Shadows of polygonal curves and voxel sets")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the shadows of a spatial curve (or a planar curve itself).
    Classify {
        #[arg(long)]
        curve: PathBuf,
        /// 1, 2, 3 or `all`.
        #[arg(long, default_value = "all")]
        axis: String,
    },
    /// List the x_i-strands of a curve.
    Strands {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        axis: usize,
    },
    /// Lift the x_i-strands of a path shadow back to the curve.
    Lift {
        #[arg(long)]
        curve: PathBuf,
        /// Axis of the shadow.
        #[arg(long)]
        shadow: usize,
        /// Strand axis, numbered in the curve's coordinates.
        #[arg(long)]
        axis: usize,
    },
    /// Evidence searches.
    Search {
        #[arg(value_enum)]
        mode: SearchMode,
        #[command(flatten)]
        opts: SearchOpts,
    },
    /// Voxelized suspension spheres.
    Sphere {
        #[command(subcommand)]
        command: SphereCommand,
    },
    /// Voxel sets compatible with three shadows.
    Compat {
        #[command(subcommand)]
        command: CompatCommand,
    },
    /// Draw a shadow as SVG.
    Render {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        axis: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        labels: bool,
        #[arg(long, default_value = "1/20")]
        stroke: Rational,
        #[arg(long, default_value = "1/2")]
        margin: Rational,
        /// Pixels per coordinate unit.
        #[arg(long, default_value_t = 80)]
        unit: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    PathShadowCycles,
    MinVertexPaths,
    TreeShadowCycle,
    ConvexShadowPaths,
    BranchCensus,
    StrandLaws,
}

#[derive(Args)]
struct SearchOpts {
    #[arg(long, default_value_t = 3)]
    grid: i64,
    /// Walk length (cycles) or vertex count (chains, strand-law paths).
    #[arg(long, default_value_t = 20)]
    max_len: usize,
    /// Random instances; 0 means exhaustive where supported.
    #[arg(long, default_value_t = 0)]
    samples: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides SHADOWLAB_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
    /// Vertex count for min-vertex-paths.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Lift checks for strand-laws.
    #[arg(long, default_value_t = 100)]
    lifts: u64,
    /// Directory for witness and counterexample curve files.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct Source {
    /// Read a voxel file instead of building a sphere.
    #[arg(long, conflicts_with_all = ["d", "res", "base"])]
    voxels: Option<PathBuf>,
    /// Sphere S_{d+1} is built from the base cycle S_1.
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 16)]
    res: u32,
    /// Base tree-shadow cycle (default: the shipped one).
    #[arg(long)]
    base: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SphereCommand {
    Build {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Shadow {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        axis: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Slice {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        axis: usize,
        #[arg(long, allow_negative_numbers = true)]
        level: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Betti {
        #[command(flatten)]
        src: Source,
        /// Take this shadow first.
        #[arg(long)]
        shadow: Option<usize>,
        #[arg(long, default_value_t = sphere::DEFAULT_CELL_CAP)]
        cap: usize,
    },
    /// Compare slices of the shadows against scaled shadows of the base.
    SliceCheck {
        #[arg(long, default_value_t = 16)]
        res: u32,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    RetractCheck {
        /// The evaluator retracts the shadows of S_d.
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        axis: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "1/16")]
        tol: Rational,
        #[arg(long)]
        base: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Shadows {
    #[arg(long)]
    s1: PathBuf,
    #[arg(long)]
    s2: PathBuf,
    #[arg(long)]
    s3: PathBuf,
}

#[derive(Subcommand)]
enum CompatCommand {
    Largest {
        #[command(flatten)]
        shadows: Shadows,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Components {
        #[command(flatten)]
        shadows: Shadows,
    },
    Reach {
        #[command(flatten)]
        shadows: Shadows,
        /// Cell as `x,y,z`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        from: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        to: Vec<i64>,
    },
    FindExample {
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the witness bitmaps as s1.txt, s2.txt, s3.txt here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    UnionClosure {
        #[arg(long, default_value_t = 1000)]
        pairs: u64,
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let budget = matches!(
            e,
            Error::Search(SearchError::BudgetExceeded { .. })
                | Error::Compat(CompatError::BudgetExceeded { .. })
                | Error::Sphere(SphereError::TooLarge { .. })
        );
        match e {
            Error::Io(source) => CliError::Io {
                path: "-".into(),
                source,
            },
            e if budget => CliError::Budget(e.to_string()),
            e => CliError::Validation(e.to_string()),
        }
    }
}

macro_rules! lib_err {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
lib_err!(
    shadowlab::CurveError,
    shadowlab::arrangement::ArrangementError,
    strands::StrandError,
    SearchError,
    SphereError,
    CompatError
);

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_curve(path: &Path) -> Result<PolyChain> {
    Ok(parse_curve(&read(path)?)?)
}

fn print(text: &str) {
    // A closed pipe (`| head`) is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit<T: Serialize>(value: &T) {
    print(&serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn need_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| CliError::Usage(format!("{what} is sampled and needs --seed")))
}

fn axes(spec: &str, dim: usize) -> Result<Vec<usize>> {
    if spec == "all" {
        return Ok((1..=dim).collect());
    }
    match spec.parse::<usize>() {
        Ok(a) if (1..=dim).contains(&a) => Ok(vec![a]),
        _ => Err(CliError::Usage(format!("--axis must be 1..={dim} or all, got {spec:?}"))),
    }
}

fn classify_cmd(curve: &Path, axis: &str) -> Result<()> {
    let chain = load_curve(curve)?;
    let shadows = if chain.dim() == 2 {
        let cx = build_complex(&shadowlab::SegmentSet::new(chain.segments()))?;
        vec![json!({ "axis": null, "convexCycle": is_convex_cycle(&cx), "report": classify(&cx) })]
    } else {
        axes(axis, chain.dim())?
            .into_iter()
            .map(|a| {
                let cx = build_complex(&project(&chain, a)?)?;
                Ok(json!({ "axis": a, "convexCycle": is_convex_cycle(&cx), "report": classify(&cx) }))
            })
            .collect::<Result<Vec<_>>>()?
    };
    emit(&json!({ "dimension": chain.dim(), "closed": chain.is_closed(), "shadows": shadows }));
    Ok(())
}

fn strand_record(s: &Strand, host: &PolyChain) -> serde_json::Value {
    let (a, b) = s.endpoints(host);
    json!({
        "axis": s.axis,
        "u": s.u,
        "v": s.v,
        "minFirst": s.min_first,
        "endpoints": [a, b],
    })
}

fn strands_cmd(curve: &Path, axis: usize) -> Result<()> {
    let chain = load_curve(curve)?;
    let list = strands::strands(&chain, axis)?;
    emit(&list.iter().map(|s| strand_record(s, &chain)).collect::<Vec<_>>());
    Ok(())
}

fn lift_cmd(curve: &Path, j: usize, axis: usize) -> Result<()> {
    let gamma = load_curve(curve)?;
    gamma.check_axis(j)?;
    if axis == j {
        return Err(CliError::Usage("strand axis must differ from the shadow axis".into()));
    }
    let shadow = match shadow_curve(&gamma, j)? {
        Some(c) if !c.is_closed() => c,
        _ => return Err(strands::StrandError::ShadowNotPath { axis: j }.into()),
    };
    let list = strands::strands(&shadow, strands::shadow_axis(axis, j))?;
    let out = list
        .iter()
        .map(|sigma| {
            let lifted = lift_strand(&gamma, j, sigma)?;
            Ok(json!({
                "shadowStrand": strand_record(sigma, &shadow),
                "lifted": strand_record(&lifted, &gamma),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&out);
    Ok(())
}

fn write_chains(dir: &Path, prefix: &str, chains: &[PolyChain]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for (k, c) in chains.iter().enumerate() {
        write(&dir.join(format!("{prefix}-{k}.curve")), &c.to_curve_text())?;
    }
    Ok(())
}

fn search_cmd(mode: SearchMode, o: &SearchOpts) -> Result<()> {
    let budget = o.budget.unwrap_or_else(lab::budget_from_env);
    let cfg = |m: Mode, samples: u64, seed: u64| {
        let mut c = SearchConfig::new(m, o.grid, o.max_len, samples, seed);
        c.budget = budget;
        c
    };
    let report = match mode {
        SearchMode::StrandLaws => {
            let seed = need_seed(o.seed, "strand-laws")?;
            let r = lab::run_strand_suite(&lab::StrandSuiteConfig {
                paths: o.samples,
                lifts: o.lifts,
                grid_max: o.grid,
                max_steps: o.max_len,
                seed,
            })?;
            emit(&r);
            if r.violation_count() > 0 {
                return Err(CliError::Validation(format!("{} strand-law violations", r.violation_count())));
            }
            return Ok(());
        }
        SearchMode::TreeShadowCycle => {
            let found = lab::find_tree_shadow_cycle(&cfg(Mode::TreeShadowCycles, 0, 0))?;
            let shadows = found.as_ref().map(lab::shadow_reports);
            if let (Some(dir), Some(c)) = (&o.out_dir, &found) {
                write_chains(dir, "witness", std::slice::from_ref(c))?;
            }
            emit(&json!({
                "gridMax": o.grid,
                "maxLength": o.max_len,
                "witness": found,
                "shadows": shadows,
            }));
            return Ok(());
        }
        SearchMode::PathShadowCycles => {
            let seed = if o.samples > 0 { need_seed(o.seed, "path-shadow-cycles")? } else { 0 };
            lab::search_path_shadow_cycles(&cfg(Mode::PathShadowCycles, o.samples, seed))?
        }
        SearchMode::ConvexShadowPaths => {
            let seed = need_seed(o.seed, "convex-shadow-paths")?;
            lab::search_convex_shadow_paths(&cfg(Mode::ConvexShadowPaths, o.samples, seed))?
        }
        SearchMode::MinVertexPaths => lab::enumerate_min_vertex_paths(o.n, &cfg(Mode::MinVertexPaths, 0, 0))?,
        SearchMode::BranchCensus => lab::min_branch_point_census(&cfg(Mode::BranchCensus, 0, 0))?,
    };
    eprintln!("search took {:.3} s", report.elapsed.as_secs_f64());
    if let Some(dir) = &o.out_dir {
        write_chains(dir, "witness", &report.witnesses)?;
        write_chains(dir, "counterexample", &report.counterexamples)?;
    }
    print(&report.to_json());
    if !report.counterexamples.is_empty() {
        return Err(CliError::Validation(format!(
            "{} counterexamples found",
            report.counterexamples.len()
        )));
    }
    Ok(())
}

fn model(base: &Option<PathBuf>, d: usize) -> Result<SphereModel> {
    Ok(match base {
        Some(p) => SphereModel::new(&load_curve(p)?, d)?,
        None => SphereModel::new(SphereModel::rickard(1).base(), d)?,
    })
}

fn source(src: &Source) -> Result<VoxelSet> {
    match &src.voxels {
        Some(p) => Ok(sphere::parse_voxels(&read(p)?)?),
        None => Ok(sphere::build_sphere(&model(&src.base, src.d)?, src.res)?),
    }
}

fn summary(v: &VoxelSet) -> serde_json::Value {
    json!({
        "dim": v.dim(),
        "resolution": v.resolution(),
        "cells": v.len(),
        "bounds": v.bounds(),
        "components": v.components().len(),
    })
}

fn dump(v: &VoxelSet, out: &Option<PathBuf>) -> Result<()> {
    if let Some(p) = out {
        write(p, &v.to_text())?;
    }
    emit(&summary(v));
    Ok(())
}

fn sphere_cmd(cmd: &SphereCommand) -> Result<()> {
    match cmd {
        SphereCommand::Build { src, out } => dump(&source(src)?, out),
        SphereCommand::Shadow { src, axis, out } => dump(&source(src)?.shadow(*axis)?, out),
        SphereCommand::Slice { src, axis, level, out } => dump(&source(src)?.slice(*axis, *level)?, out),
        SphereCommand::Betti { src, shadow, cap } => {
            let mut v = source(src)?;
            if let Some(a) = shadow {
                v = v.shadow(*a)?;
            }
            let b = sphere::betti_with_cap(&v, *cap)?;
            emit(&json!({ "dim": v.dim(), "cells": v.len(), "betti": b }));
            Ok(())
        }
        SphereCommand::SliceCheck { res, base } => {
            let m = model(base, 1)?;
            let s = sphere::build_sphere(&m, *res)?;
            let r = sphere::check_slice_scaling(&m, &s)?;
            emit(&r);
            if !r.ok {
                return Err(CliError::Validation("slice scaling violated".into()));
            }
            Ok(())
        }
        SphereCommand::RetractCheck { d, axis, samples, seed, tol, base } => {
            let seed = need_seed(*seed, "retract-check")?;
            let m = model(base, 1)?;
            let ev = RetractionEvaluator::new(&m, *d, *axis)?;
            let r = sphere::verify_retraction(&m, &ev, *samples, seed, tol)?;
            emit(&r);
            if !r.ok() {
                return Err(CliError::Validation(format!("{} retraction violations", r.violation_count())));
            }
            Ok(())
        }
    }
}

fn bitmaps(s: &Shadows) -> Result<[ShadowBitmap; 3]> {
    Ok([
        ShadowBitmap::parse(&read(&s.s1)?)?,
        ShadowBitmap::parse(&read(&s.s2)?)?,
        ShadowBitmap::parse(&read(&s.s3)?)?,
    ])
}

fn compat_cmd(cmd: &CompatCommand) -> Result<()> {
    match cmd {
        CompatCommand::Largest { shadows, out } => {
            let [a, b, c] = bitmaps(shadows)?;
            let r = compat::largest_compatible(&a, &b, &c)?;
            if let (Some(p), Some(v)) = (out, &r.largest) {
                write(p, &v.to_text())?;
            }
            emit(&r);
        }
        CompatCommand::Components { shadows } => {
            let [a, b, c] = bitmaps(shadows)?;
            let v = compat::back_project(&a, &b, &c)?;
            let comps = v.components();
            emit(&json!({ "componentCount": comps.len(), "components": comps }));
        }
        CompatCommand::Reach { shadows, from, to } => {
            if from.len() != 3 || to.len() != 3 {
                return Err(CliError::Usage("--from and --to take three comma-separated integers".into()));
            }
            let [a, b, c] = bitmaps(shadows)?;
            let r = compat::largest_compatible(&a, &b, &c)?;
            let Some(v) = r.largest else {
                return Err(CliError::Validation("no set is compatible with these shadows".into()));
            };
            let ok = compat::reachable(&v, from, to)?;
            emit(&json!({ "from": from, "to": to, "reachable": ok }));
        }
        CompatCommand::FindExample { size, budget, seed, out_dir } => {
            let seed = if *size > 2 { need_seed(*seed, "find-example")? } else { seed.unwrap_or(0) };
            let r = compat::find_disconnection_example(*size, *budget, seed)?;
            if let (Some(dir), Some(w)) = (out_dir, &r.witness) {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
                for (k, s) in w.iter().enumerate() {
                    write(&dir.join(format!("s{}.txt", k + 1)), &s.to_text())?;
                }
            }
            emit(&r);
        }
        CompatCommand::UnionClosure { pairs, size, seed } => {
            let seed = need_seed(*seed, "union-closure")?;
            let r = compat::check_union_closure(*pairs, *size, seed);
            emit(&r);
            if r.union_violations + r.maximality_violations > 0 {
                return Err(CliError::Validation("union closure violated".into()));
            }
        }
    }
    Ok(())
}

fn render_cmd(curve: &Path, axis: usize, out: &Path, spec: RenderSpec) -> Result<()> {
    let chain = load_curve(curve)?;
    let cx = if chain.dim() == 2 {
        build_complex(&shadowlab::SegmentSet::new(chain.segments()))?
    } else {
        shadow_complex(&chain, axis)?
    };
    let svg = render_shadow(&cx, &spec).map_err(|e| CliError::Validation(e.to_string()))?;
    write(out, &svg)?;
    emit(&json!({ "target": out, "report": classify(&cx) }));
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Classify { curve, axis } => classify_cmd(&curve, &axis),
        Command::Strands { curve, axis } => strands_cmd(&curve, axis),
        Command::Lift { curve, shadow, axis } => lift_cmd(&curve, shadow, axis),
        Command::Search { mode, opts } => search_cmd(mode, &opts),
        Command::Sphere { command } => sphere_cmd(&command),
        Command::Compat { command } => compat_cmd(&command),
        Command::Render { curve, axis, out, labels, stroke, margin, unit } => render_cmd(
            &curve,
            axis,
            &out,
            RenderSpec {
                stroke_scale: stroke,
                margin,
                labels,
                unit_px: unit,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let t0 = Instant::now();
    let res = run(cli);
    eprintln!("elapsed {:.3} s", t0.elapsed().as_secs_f64());
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
