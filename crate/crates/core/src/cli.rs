//! Command-line surface. [`run`] is what the binary calls; it is exposed so
//! tests can drive commands in-process.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::clustering::{bicriteria, CenterSet, DEFAULT_ALPHA, DEFAULT_BETA};
use crate::coreset::{build_coreset, CoresetConfig};
use crate::error::{Error, Result};
use crate::evaluation::{
    candidate_pool, certify, concentration_trial, lower_bound_ids, lower_bound_instance, DEFAULT_LOWER_BOUND_DELTA,
};
use crate::io::{load_coreset, load_dataset, save_coreset, save_dataset, Dataset};
use crate::metrics::{distance, FrechetTolerance, MetricKind};
use crate::sensitivity::sensitivity_upper_bounds;

/// Environment variable capping worker threads (0 = automatic).
pub const THREADS_ENV: &str = "CURVESET_THREADS";

/// Exit code of `certify` when the coreset misses its ε target.
pub const EXIT_CERTIFY_FAILED: i32 = 1;
/// Exit code for every error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "curveset", version, about = "Coresets for (k,l)-median clustering of curves and point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a coreset from a dataset.
    Build(BuildArgs),
    /// Compare a coreset against the full dataset on random center sets.
    Certify(CertifyArgs),
    /// Write the adversarial lower-bound dataset.
    GenLowerbound(GenArgs),
    /// Distance between two objects.
    Dist(DistArgs),
    /// Empirical failure rate of a fixed-function importance-sampling estimate.
    Trial(TrialArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_metric)]
    pub metric: MetricKind,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub eps: f64,
    /// Exponent δ on the input complexity in the size formula.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub size_constant: f64,
    /// Fixed number of draws, overriding the size formula.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
    /// Omit the creation time so identical runs give identical files.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub coreset: PathBuf,
    #[arg(long)]
    pub candidates: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_LOWER_BOUND_DELTA)]
    pub delta: f64,
    #[arg(long, value_parser = parse_metric)]
    pub metric: MetricKind,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_parser = parse_metric)]
    pub metric: MetricKind,
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Object id in the first file (default: first record).
    #[arg(long)]
    pub a_id: Option<String>,
    /// Object id in the second file (default: first record).
    #[arg(long)]
    pub b_id: Option<String>,
    /// Relative precision of the continuous Fréchet evaluation.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub seed: u64,
    /// Defaults to continuous Fréchet for curves and Hausdorff for point sets.
    #[arg(long, value_parser = parse_metric)]
    pub metric: Option<MetricKind>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
}

fn parse_metric(s: &str) -> std::result::Result<MetricKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code. Errors go to `err` as a single
/// `error: <code>: <message>` line.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let first = e.to_string();
                let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
                let _ = writeln!(err, "error: usage: {first}");
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.code(), e.to_string().replace('\n', " "));
            EXIT_ERROR
        }
    }
}

/// Applies the thread cap from [`THREADS_ENV`] to the global pool.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV} must be a nonnegative integer, got '{raw}'")))?;
    // a pool that was already initialized keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Build(a) => cmd_build(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::GenLowerbound(a) => cmd_gen(a, out),
        Command::Dist(a) => cmd_dist(a, out),
        Command::Trial(a) => cmd_trial(a, out),
    }
}

fn cmd_build(a: BuildArgs, out: &mut dyn Write) -> Result<i32> {
    let Dataset { ids, instance } = load_dataset(&a.input, a.metric)?;
    let inst = instance.with_params(a.k, a.l)?;
    let cfg = CoresetConfig {
        eps: a.eps,
        delta_exponent: a.delta,
        size_constant: a.size_constant,
        size_override: a.size,
        seed: a.seed,
        alpha: a.alpha,
        beta: a.beta,
    };
    let cs = build_coreset(&inst, &cfg)?;
    save_coreset(&a.output, &cs, &ids, !a.no_timestamp)?;
    writeln!(
        out,
        "a={} S={} opt_prime={} centers={}",
        cs.meta.a, cs.meta.total_sensitivity, cs.meta.opt_prime, cs.meta.num_centers
    )?;
    Ok(0)
}

fn cmd_certify(a: CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (cs, _) = load_coreset(&a.coreset)?;
    let Dataset { instance, .. } = load_dataset(&a.input, cs.meta.metric)?;
    let inst = instance.with_params(cs.meta.k, cs.meta.l)?;
    let pool = candidate_pool(&inst, cs.meta.k, cs.meta.l, a.candidates, a.seed)?;
    let report = certify(&inst, &cs, &pool)?;
    if let Some(path) = &a.report {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &report).map_err(|e| Error::Io(e.into()))?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    writeln!(
        out,
        "max_error={} mean_error={} eps={} zero_cost={} pass={}",
        report.max_error, report.mean_error, report.eps, report.zero_cost_candidates, report.pass
    )?;
    Ok(if report.pass { 0 } else { EXIT_CERTIFY_FAILED })
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = lower_bound_instance(a.n, a.delta, a.metric)?;
    save_dataset(&a.output, &lower_bound_ids(a.n), &inst)?;
    writeln!(out, "wrote {} objects", inst.len())?;
    Ok(0)
}

fn pick<'a>(ds: &'a Dataset, id: Option<&str>) -> Result<&'a crate::geometry::GeomObject> {
    let idx = match id {
        None => 0,
        Some(id) => ds
            .ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::InvalidParameter(format!("no object with id '{id}'")))?,
    };
    Ok(&ds.instance.objects()[idx])
}

fn cmd_dist(a: DistArgs, out: &mut dyn Write) -> Result<i32> {
    let da = load_dataset(&a.a, a.metric)?;
    let db = load_dataset(&a.b, a.metric)?;
    let tol = match a.tol {
        Some(t) => FrechetTolerance::new(t, FrechetTolerance::default().absolute)?,
        None => FrechetTolerance::default(),
    };
    let d = distance(a.metric, pick(&da, a.a_id.as_deref())?, pick(&db, a.b_id.as_deref())?, tol)?;
    writeln!(out, "{d}")?;
    Ok(0)
}

fn cmd_trial(a: TrialArgs, out: &mut dyn Write) -> Result<i32> {
    let Dataset { instance, .. } = match a.metric {
        Some(m) => load_dataset(&a.input, m)?,
        None => match load_dataset(&a.input, MetricKind::ContinuousFrechet) {
            Err(Error::Parse { .. }) => load_dataset(&a.input, MetricKind::Hausdorff)?,
            other => other?,
        },
    };
    let inst = instance.with_params(a.k, a.l)?;
    let bic = bicriteria(&inst, a.beta, a.alpha, a.seed)?;
    let profile = sensitivity_upper_bounds(&inst, &bic)?;
    // the fixed function: the first k bicriteria centers
    let mut centers = bic.centers.into_inner();
    centers.truncate(a.k);
    let centers = CenterSet::new(centers)?;
    let t = concentration_trial(&inst, &profile, &centers, a.eps, a.trials, a.seed)?;
    writeln!(
        out,
        "failure_rate={} failures={} trials={} a={} S={} clamped={}",
        t.failure_rate, t.failures, t.trials, t.a, t.total_sensitivity, t.clamped
    )?;
    Ok(0)
}
