//! Command-line front end: sample in, CSV out.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{ArgGroup, CommandFactory, Parser, ValueEnum};

use crate::assembly::{assemble_mass, BcKind};
use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::initial_condition::{generate_uniform, histogram, load_sample, project_deltas, DataSample};
use crate::mesh::Mesh1D;
use crate::solver::{run, SolverConfig, Trajectory};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BcArg {
    Neumann,
    MeanConserving,
}

impl From<BcArg> for BcKind {
    fn from(arg: BcArg) -> Self {
        match arg {
            BcArg::Neumann => BcKind::Neumann,
            BcArg::MeanConserving => BcKind::MeanConserving,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "diffkde",
    version,
    about = "Diffusion density estimation with mass- and mean-conserving boundary conditions"
)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "generate"])))]
struct Args {
    /// Sample file: one number per line, '#' comments and blank lines ignored
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Draw N points uniformly from the domain instead of reading a file
    #[arg(long, value_name = "N", requires = "seed")]
    generate: Option<usize>,

    /// Seed for --generate
    #[arg(long, value_name = "S", requires = "generate")]
    seed: Option<u64>,

    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [0.0, 10.0], allow_negative_numbers = true)]
    domain: Vec<f64>,

    /// Number of finite elements
    #[arg(long, value_name = "M", default_value_t = 5000)]
    elements: usize,

    #[arg(long, value_name = "X", default_value_t = 1e-3, allow_negative_numbers = true)]
    dt: f64,

    /// Diffusion time (bandwidth)
    #[arg(
        long = "t-final",
        value_name = "T",
        default_value_t = 0.1,
        allow_negative_numbers = true
    )]
    t_final: f64,

    #[arg(long, value_enum)]
    bc: BcArg,

    /// Final density as `x,u`
    #[arg(long = "density-out", value_name = "PATH")]
    density_out: Option<PathBuf>,

    /// Per-step `t,mass,mean,min,delta_mass,delta_mean`
    #[arg(long = "diagnostics-out", value_name = "PATH")]
    diagnostics_out: Option<PathBuf>,

    #[arg(long = "histogram-bins", value_name = "K", default_value_t = 50)]
    histogram_bins: usize,

    /// Sample histogram as `bin_left,count`
    #[arg(long = "histogram-out", value_name = "PATH")]
    histogram_out: Option<PathBuf>,

    /// Also write every K-th state next to --density-out
    #[arg(long = "snapshot-stride", value_name = "K")]
    snapshot_stride: Option<usize>,

    /// Flat key=value record of the run
    #[arg(long = "manifest-out", value_name = "PATH")]
    manifest_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleSource {
    File(PathBuf),
    Generate { n: usize, seed: u64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPlan {
    pub density: Option<PathBuf>,
    pub diagnostics: Option<PathBuf>,
    pub histogram: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

/// Fully resolved invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunPlan {
    pub source: SampleSource,
    pub a: f64,
    pub b: f64,
    pub elements: usize,
    pub solver: SolverConfig,
    pub histogram_bins: usize,
    pub outputs: OutputPlan,
}

fn usage_error(message: impl std::fmt::Display) -> clap::Error {
    Args::command().error(ErrorKind::ValueValidation, message)
}

pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunPlan, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    let (a, b) = (args.domain[0], args.domain[1]);
    if !(a.is_finite() && b.is_finite() && b > a) {
        return Err(usage_error(format!(
            "--domain: B ({b}) must be greater than A ({a})"
        )));
    }
    if args.elements == 0 {
        return Err(usage_error("--elements must be at least 1"));
    }
    if !(args.dt > 0.0 && args.dt.is_finite()) {
        return Err(usage_error(format!("--dt must be > 0, got {}", args.dt)));
    }
    if !(args.t_final > 0.0 && args.t_final.is_finite()) {
        return Err(usage_error(format!(
            "--t-final must be > 0, got {}",
            args.t_final
        )));
    }
    if args.dt > args.t_final {
        return Err(usage_error(format!(
            "--dt ({}) must not exceed --t-final ({})",
            args.dt, args.t_final
        )));
    }
    if args.histogram_bins == 0 {
        return Err(usage_error("--histogram-bins must be at least 1"));
    }
    if args.snapshot_stride == Some(0) {
        return Err(usage_error("--snapshot-stride must be at least 1"));
    }
    if args.snapshot_stride.is_some() && args.density_out.is_none() {
        return Err(usage_error("--snapshot-stride requires --density-out"));
    }
    let source = match (args.input, args.generate, args.seed) {
        (Some(path), None, _) => SampleSource::File(path),
        (None, Some(0), _) => return Err(usage_error("--generate must be at least 1")),
        (None, Some(n), Some(seed)) => SampleSource::Generate { n, seed },
        _ => {
            return Err(usage_error(
                "exactly one of --input or --generate N --seed S is required",
            ))
        }
    };
    Ok(RunPlan {
        source,
        a,
        b,
        elements: args.elements,
        solver: SolverConfig {
            dt: args.dt,
            t_final: args.t_final,
            bc: args.bc.into(),
            snapshot_stride: args.snapshot_stride,
        },
        histogram_bins: args.histogram_bins,
        outputs: OutputPlan {
            density: args.density_out,
            diagnostics: args.diagnostics_out,
            histogram: args.histogram_out,
            manifest: args.manifest_out,
        },
    })
}

/// Everything a finished run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub sample: DataSample,
    pub mesh: Mesh1D,
    pub trajectory: Trajectory,
    pub elapsed_seconds: f64,
}

impl RunOutcome {
    pub fn final_record(&self) -> &DiagnosticsRecord {
        self.trajectory.final_diagnostics()
    }
}

/// Loads or generates the sample and evolves it. Does not touch the output files.
pub fn execute(plan: &RunPlan) -> Result<RunOutcome> {
    let started = Instant::now();
    let sample = match &plan.source {
        SampleSource::File(path) => load_sample(path, plan.a, plan.b)?,
        SampleSource::Generate { n, seed } => generate_uniform(*n, plan.a, plan.b, *seed)?,
    };
    let mesh = Mesh1D::new(plan.a, plan.b, plan.elements)?;
    let mass = assemble_mass(&mesh);
    let u0 = project_deltas(&sample, &mesh, &mass)?;
    let trajectory = run(&mesh, &u0, &plan.solver)?;
    Ok(RunOutcome {
        sample,
        mesh,
        trajectory,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn density_csv(mesh: &Mesh1D, u: &[f64]) -> String {
    let mut out = String::from("x,u\n");
    for (x, v) in mesh.nodes().iter().zip(u) {
        let _ = writeln!(out, "{},{}", fmt_float(*x), fmt_float(*v));
    }
    out
}

pub fn diagnostics_csv(records: &[DiagnosticsRecord]) -> String {
    let mut out = String::from("t,mass,mean,min,delta_mass,delta_mean\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(r.time),
            fmt_float(r.mass),
            fmt_float(r.mean),
            fmt_float(r.min_value),
            fmt_float(r.delta_mass),
            fmt_float(r.delta_mean)
        );
    }
    out
}

pub fn histogram_csv(bins: &[(f64, usize)]) -> String {
    let mut out = String::from("bin_left,count\n");
    for (left, count) in bins {
        let _ = writeln!(out, "{},{count}", fmt_float(*left));
    }
    out
}

/// `density.csv` with step 40 becomes `density_step000040.csv`.
pub fn snapshot_path(density: &Path, step: usize) -> PathBuf {
    let stem = density
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match density.extension() {
        Some(ext) => format!("{stem}_step{step:06}.{}", ext.to_string_lossy()),
        None => format!("{stem}_step{step:06}"),
    };
    density.with_file_name(name)
}

pub fn manifest(plan: &RunPlan, outcome: &RunOutcome) -> String {
    let mut m = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(m, "{k}={v}");
    };
    let path_or_none =
        |p: &Option<PathBuf>| p.as_ref().map_or("none".to_string(), |p| p.display().to_string());
    kv("tool", env!("CARGO_PKG_NAME").into());
    kv("version", env!("CARGO_PKG_VERSION").into());
    match &plan.source {
        SampleSource::File(p) => {
            kv("source", "input".into());
            kv("input", p.display().to_string());
        }
        SampleSource::Generate { n, seed } => {
            kv("source", "generate".into());
            kv("generate", n.to_string());
            kv("seed", seed.to_string());
        }
    }
    kv("sample_size", outcome.sample.len().to_string());
    kv("domain_a", format!("{:?}", plan.a));
    kv("domain_b", format!("{:?}", plan.b));
    kv("elements", plan.elements.to_string());
    kv("dt", format!("{:?}", plan.solver.dt));
    kv("t_final", format!("{:?}", plan.solver.t_final));
    kv("bc", plan.solver.bc.name().into());
    kv("steps", (outcome.trajectory.times.len() - 1).to_string());
    kv(
        "snapshot_stride",
        plan.solver
            .snapshot_stride
            .map_or("final".into(), |k| k.to_string()),
    );
    kv("histogram_bins", plan.histogram_bins.to_string());
    kv("density_out", path_or_none(&plan.outputs.density));
    kv("diagnostics_out", path_or_none(&plan.outputs.diagnostics));
    kv("histogram_out", path_or_none(&plan.outputs.histogram));
    let last = outcome.final_record();
    kv("final_mass", fmt_float(last.mass));
    kv("final_mean", fmt_float(last.mean));
    kv("final_min", fmt_float(last.min_value));
    kv("final_delta_mass", fmt_float(last.delta_mass));
    kv("final_delta_mean", fmt_float(last.delta_mean));
    kv("relative_mean_change", fmt_float(last.relative_mean_change()));
    kv("nonnegative", (last.min_value >= 0.0).to_string());
    kv("wall_clock_seconds", format!("{:.6}", outcome.elapsed_seconds));
    m
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs the plan and writes every requested output.
pub fn run_pipeline(plan: &RunPlan) -> Result<RunOutcome> {
    let outcome = execute(plan)?;
    let outputs = &plan.outputs;
    if let Some(path) = &outputs.density {
        write_file(
            path,
            &density_csv(&outcome.mesh, outcome.trajectory.final_state().values()),
        )?;
        if plan.solver.snapshot_stride.is_some() {
            for snap in &outcome.trajectory.snapshots {
                write_file(
                    &snapshot_path(path, snap.step),
                    &density_csv(&outcome.mesh, snap.u.values()),
                )?;
            }
        }
    }
    if let Some(path) = &outputs.diagnostics {
        write_file(path, &diagnostics_csv(&outcome.trajectory.diagnostics))?;
    }
    if let Some(path) = &outputs.histogram {
        write_file(
            path,
            &histogram_csv(&histogram(&outcome.sample, plan.histogram_bins)?),
        )?;
    }
    if let Some(path) = &outputs.manifest {
        write_file(path, &manifest(plan, &outcome))?;
    }
    Ok(outcome)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        e if e.is_numerical() => EXIT_NUMERICAL,
        Error::Config(_) | Error::DomainOrder { .. } | Error::NoElements => EXIT_USAGE,
        // unreadable files and files that do not hold a valid sample
        _ => EXIT_IO,
    }
}

/// Entry point shared by the binary and the tests; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let plan = match parse_args(argv) {
        Ok(plan) => plan,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_pipeline(&plan) {
        Ok(outcome) => {
            let last = outcome.final_record();
            println!(
                "bc={} steps={} mass={} mean={} delta_mass={:.3e} delta_mean={:.3e} ({:.4}%) min={:.6e} elapsed={:.3}s",
                plan.solver.bc,
                outcome.trajectory.times.len() - 1,
                last.mass,
                last.mean,
                last.delta_mass,
                last.delta_mean,
                100.0 * last.relative_mean_change(),
                last.min_value,
                outcome.elapsed_seconds
            );
            if last.min_value < 0.0 {
                eprintln!(
                    "warning: final density has negative coefficients (min {:e})",
                    last.min_value
                );
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
