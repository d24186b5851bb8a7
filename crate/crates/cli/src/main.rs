//! `pmin`: evaluate, analyze, classify and verify ruled p-minimal
//! surfaces described by profile documents.
//!
//! Exit status: 0 on success, 1 when a verification assertion fails,
//! 2 on unusable input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pmin_core::analyzer::{analyze, AnalysisOptions};
use pmin_core::classifier::{classify, Classification, ClassificationKind};
use pmin_core::grid::GridSpec;
use pmin_core::mesh::SurfaceMesh;
use pmin_core::profile::{Interval, SurfaceProfile};
use pmin_core::tolerances::{LEGENDRIAN_TOL, PARALLEL_EPS, SINGULAR_TOL};
use pmin_core::verifier::golden::GOLDEN_NAMES;
use pmin_core::verifier::pde::LevelResidual;
use pmin_core::verifier::{
    golden_examples, legendrian_residual, pde_residual, GoldenProfiles, GoldenReport, GraphPatch,
    ImplicitTiltedGraph, ResidualReport, VerticalGraph,
};

#[derive(Parser)]
#[command(name = "pmin", version, about = "Ruled p-minimal surfaces in the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate surface points X(s, t) on a grid.
    Eval(ProfileArgs),
    /// Immersion, singular set, injectivity, properness and ruling-intersection report.
    Analyze(ProfileArgs),
    /// Helicoid-type classification with its certificate.
    Classify(ProfileArgs),
    /// Legendrian and graph-equation residuals plus the bundled example suite.
    Verify(VerifyArgs),
    /// Export a triangulated (s, t) grid as OBJ or CSV.
    Mesh(ProfileArgs),
    /// Run the checks on the bundled example profiles.
    Golden(GoldenArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Obj,
}

#[derive(Args)]
struct ProfileArgs {
    /// Profile document (JSON).
    profile: PathBuf,
    /// Grid nodes along s.
    #[arg(long, default_value_t = 101)]
    ns: usize,
    /// Grid nodes along t.
    #[arg(long, default_value_t = 101)]
    nt: usize,
    /// Override the profile's s range.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    s_range: Option<Vec<f64>>,
    /// Override the profile's t range.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true)]
    t_range: Option<Vec<f64>>,
    /// Singular-residual tolerance after refinement.
    #[arg(long, default_value_t = SINGULAR_TOL)]
    tol_singular: f64,
    /// |sin(θ₂ − θ₁)| below which two projected rulings count as parallel.
    #[arg(long, default_value_t = PARALLEL_EPS)]
    tol_parallel: f64,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Output format (json for reports; csv or obj for point data).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// x interval of the graph patch for the residual of the graph equation.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, default_values_t = [0.5, 2.0])]
    patch_x: Vec<f64>,
    /// y interval of the graph patch.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], allow_negative_numbers = true, default_values_t = [-1.0, 1.0])]
    patch_y: Vec<f64>,
    /// Coarsest grid spacing; the residual is also computed at h/2 and h/4.
    #[arg(long, default_value_t = 1.0 / 32.0)]
    h: f64,
}

#[derive(Args)]
struct GoldenArgs {
    /// Directory holding the bundled profiles.
    #[arg(long, default_value = "profiles")]
    dir: PathBuf,
    /// Also write the full report as JSON to this file.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

/// Input problems; reported with exit status 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = Result<T, InputError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(InputError(msg)) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// `PMIN_THREADS` caps the worker pool used by the parallel scans.
fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("PMIN_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| InputError(format!("PMIN_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Eval(args) => eval(&args),
        Command::Analyze(args) => analyze_cmd(&args),
        Command::Classify(args) => classify_cmd(&args),
        Command::Verify(args) => verify(&args),
        Command::Mesh(args) => mesh(&args),
        Command::Golden(args) => golden(&args),
    }
}

fn interval(v: &[f64], what: &str) -> CliResult<Interval> {
    Interval::new(v[0], v[1]).map_err(|e| InputError(format!("{what}: {e}")))
}

fn load_profile(args: &ProfileArgs) -> CliResult<SurfaceProfile> {
    let path = &args.profile;
    let profile = SurfaceProfile::load(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if args.s_range.is_none() && args.t_range.is_none() {
        return Ok(profile);
    }
    let s = match &args.s_range {
        Some(v) => interval(v, "--s-range")?,
        None => profile.s_range,
    };
    let t = match &args.t_range {
        Some(v) => interval(v, "--t-range")?,
        None => profile.t_range,
    };
    profile.with_ranges(t, s).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn grid(args: &ProfileArgs, profile: &SurfaceProfile) -> CliResult<GridSpec> {
    Ok(GridSpec::for_profile(profile, args.ns, args.nt)?)
}

fn format(args: &ProfileArgs, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = args.format.unwrap_or(default);
    if !allowed.contains(&f) {
        let name = f.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
        return Err(InputError(format!("--format {name} is not available for this command")));
    }
    Ok(f)
}

fn emit(output: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult<()> {
    match output {
        Some(path) => {
            let mut file = io::BufWriter::new(
                fs::File::create(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?,
            );
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            // A reader that stops early (`| head`) is not an error.
            match write(&mut lock).and_then(|()| lock.flush()) {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)?;
    emit(output, |w| writeln!(w, "{text}"))
}

#[derive(Serialize)]
struct PointTable {
    columns: [&'static str; 5],
    points: Vec<[f64; 5]>,
}

fn eval(args: &ProfileArgs) -> CliResult<ExitCode> {
    let fmt = format(args, Format::Json, &[Format::Json, Format::Csv])?;
    let profile = load_profile(args)?;
    let mesh = SurfaceMesh::sample(&profile, &grid(args, &profile)?)?;
    match fmt {
        Format::Csv => emit(args.output.as_deref(), |w| mesh.write_csv(w))?,
        _ => {
            let points = mesh
                .params
                .iter()
                .zip(&mesh.points)
                .map(|(&(s, t), p)| [s, t, p.x, p.y, p.z])
                .collect();
            emit_json(
                args.output.as_deref(),
                &PointTable {
                    columns: ["s", "t", "x", "y", "z"],
                    points,
                },
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze_cmd(args: &ProfileArgs) -> CliResult<ExitCode> {
    format(args, Format::Json, &[Format::Json])?;
    for (flag, v) in [("--tol-singular", args.tol_singular), ("--tol-parallel", args.tol_parallel)] {
        if !(v > 0.0) {
            return Err(InputError(format!("{flag} must be positive, got {v}")));
        }
    }
    let profile = load_profile(args)?;
    let mut options = AnalysisOptions::for_profile(&profile, args.ns, args.nt)?;
    options.tolerances.singular = args.tol_singular;
    options.tolerances.parallel = args.tol_parallel;
    let report = analyze(&profile, &options)?;
    emit_json(args.output.as_deref(), &report)?;
    Ok(ExitCode::SUCCESS)
}

fn classify_cmd(args: &ProfileArgs) -> CliResult<ExitCode> {
    format(args, Format::Json, &[Format::Json])?;
    let profile = load_profile(args)?;
    let class = classify(&profile)?;
    emit_json(args.output.as_deref(), &class)?;
    Ok(ExitCode::SUCCESS)
}

fn mesh(args: &ProfileArgs) -> CliResult<ExitCode> {
    let fmt = format(args, Format::Obj, &[Format::Obj, Format::Csv])?;
    let profile = load_profile(args)?;
    let mesh = SurfaceMesh::sample(&profile, &grid(args, &profile)?)?;
    emit(args.output.as_deref(), |w| match fmt {
        Format::Csv => mesh.write_csv(w),
        _ => mesh.write_obj(w),
    })?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VerifyReport {
    legendrian_residual: f64,
    legendrian_tolerance: f64,
    classification: &'static str,
    /// Residual of the graph equation on the patch, when the surface has a
    /// canonical graph form there.
    graph_residual: Option<ResidualReport>,
    graph_residual_skipped: Option<String>,
    golden: GoldenReport,
    passed: bool,
}

fn graph_residual(class: &Classification, patch_x: Interval, patch_y: Interval, h: f64) -> Result<ResidualReport, String> {
    let result = match &class.kind {
        ClassificationKind::HelicoidVertical { a, b, g, .. } => pde_residual(&GraphPatch {
            field: VerticalGraph {
                a: *a,
                b: *b,
                g: g.clone(),
            },
            x_range: patch_x,
            y_range: patch_y,
            h,
        }),
        ClassificationKind::HelicoidTilted {
            x0,
            y0,
            theta,
            tau_range,
        } => pde_residual(&GraphPatch {
            field: ImplicitTiltedGraph {
                x0: *x0,
                y0: *y0,
                theta: theta.clone(),
                tau_range: *tau_range,
            },
            x_range: patch_x,
            y_range: patch_y,
            h,
        }),
        _ => return Err(format!("{} has no canonical graph form", class.name())),
    };
    result.map_err(|e| e.to_string())
}

fn verify(args: &VerifyArgs) -> CliResult<ExitCode> {
    let fmt = format(&args.profile, Format::Json, &[Format::Json, Format::Csv])?;
    let profile = load_profile(&args.profile)?;
    let patch_x = interval(&args.patch_x, "--patch-x")?;
    let patch_y = interval(&args.patch_y, "--patch-y")?;
    if !(args.h > 0.0) {
        return Err(InputError(format!("--h must be positive, got {}", args.h)));
    }

    let g = grid(&args.profile, &profile)?;
    let samples: Vec<(f64, f64)> = g
        .t_values()
        .into_iter()
        .flat_map(|t| g.s_values().into_iter().map(move |s| (s, t)))
        .collect();
    let legendrian = legendrian_residual(&profile, &samples)?;
    let class = classify(&profile)?;
    let (graph, skipped) = match graph_residual(&class, patch_x, patch_y, args.h) {
        Ok(r) => (Some(r), None),
        Err(reason) => (None, Some(reason)),
    };

    if fmt == Format::Csv {
        let Some(level) = graph.as_ref().map(ResidualReport::finest) else {
            return Err(InputError(format!(
                "no residual field to export: {}",
                skipped.unwrap_or_default()
            )));
        };
        emit(args.profile.output.as_deref(), |w| LevelResidual::write_csv(level, w))?;
    }

    let golden = golden_examples(&GoldenProfiles::builtin());
    let passed = legendrian < LEGENDRIAN_TOL && graph.as_ref().is_none_or(|r| r.second_order) && golden.passed();
    let report = VerifyReport {
        legendrian_residual: legendrian,
        legendrian_tolerance: LEGENDRIAN_TOL,
        classification: class.name(),
        graph_residual: graph,
        graph_residual_skipped: skipped,
        golden,
        passed,
    };
    if fmt == Format::Json {
        emit_json(args.profile.output.as_deref(), &report)?;
    }
    if !passed {
        eprintln!("verification failed:");
        if legendrian >= LEGENDRIAN_TOL {
            eprintln!("  Legendrian residual {legendrian:.3e} (>= {LEGENDRIAN_TOL:.0e})");
        }
        if let Some(r) = &report.graph_residual {
            if !r.second_order {
                eprintln!("  graph residual ratios {:?} outside [3.5, 4.5]", r.ratios);
            }
        }
        for a in report.golden.failures() {
            eprintln!("  {}: {} ({})", a.example, a.check, a.detail);
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn golden(args: &GoldenArgs) -> CliResult<ExitCode> {
    if !args.dir.is_dir() {
        return Err(InputError(format!(
            "{}: no such directory (expected {})",
            args.dir.display(),
            GOLDEN_NAMES.map(|n| format!("{n}.json")).join(", ")
        )));
    }
    let profiles = GoldenProfiles::load_dir(&args.dir)?;
    let report = golden_examples(&profiles);
    if let Some(path) = &args.output {
        emit_json(Some(path), &report)?;
    }

    let width = report.assertions.iter().map(|a| a.check.len()).max().unwrap_or(0);
    let mut out = io::stdout().lock();
    writeln!(out, "{:<13} {:<width$}  result  detail", "example", "check")?;
    for a in &report.assertions {
        let verdict = if a.passed { "pass" } else { "FAIL" };
        writeln!(out, "{:<13} {:<width$}  {verdict:<6}  {}", a.example, a.check, a.detail)?;
    }
    let failed = report.failures().count();
    writeln!(out, "{} of {} assertions passed", report.assertions.len() - failed, report.assertions.len())?;
    if failed > 0 {
        eprintln!("{failed} golden assertions failed:");
        for a in report.failures() {
            eprintln!("  {}: {} ({})", a.example, a.check, a.detail);
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
