mod bench;
mod report;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use quatcomp::completion::{Method, SolverConfig, WeightSide};
use quatcomp::imaging::{load_image, make_mask, parse_patterns, save_mask};
use rayon::prelude::*;

use crate::bench::BenchConfig;
use crate::report::{summarize, write_csv, write_json_rows, write_summary};
use crate::run::{execute, save_recovered, seeded_pattern, MaskSource, Row, RunSpec};

/// Exit code for runs that finished without meeting the tolerance.
const EXIT_UNCONVERGED: u8 = 2;

#[derive(Parser)]
#[command(name = "quatcomp", version, about = "Low-rank quaternion matrix completion for color images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete one image or synthetic matrix
    Complete(CompleteArgs),
    /// Generate a mask file
    Mask(MaskArgs),
    /// Run one problem over a range of truncation ranks
    Sweep(SweepArgs),
    /// Run a benchmark grid from a TOML or JSON config
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct ProblemArgs {
    /// Image path (PNG or PPM) or `synth:MxN:rank=K:scale=S:seed=T`
    #[arg(long)]
    input: String,
    /// Mask file (PNG or JSON)
    #[arg(long, conflicts_with = "pattern", required_unless_present = "pattern")]
    mask: Option<PathBuf>,
    /// Pattern descriptor, e.g. `random:p=0.5` or `block:x=0:y=0:w=8:h=8`, joined with `+`
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long, default_value = "dwqtnn")]
    method: Method,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long)]
    rho: Option<f64>,
    /// Penalty seed for qtnn and the baseline
    #[arg(long, conflicts_with = "eps1")]
    beta0: Option<f64>,
    /// Step-schedule seed for wqtnn and dwqtnn
    #[arg(long)]
    eps1: Option<f64>,
    /// Cap on the penalty or step schedule
    #[arg(long)]
    cap: Option<f64>,
    /// Outer stopping tolerance
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    inner_tol: Option<f64>,
    #[arg(long)]
    max_outer: Option<usize>,
    #[arg(long)]
    max_inner: Option<usize>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
    #[arg(long)]
    weight_side: Option<WeightSide>,
    /// Seed for random patterns that do not set their own
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self, method: Method, rank: usize) -> SolverConfig {
        let mut c = method.default_config(rank);
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut c.rho, self.rho);
        set(&mut c.step0, self.beta0.or(self.eps1));
        set(&mut c.step_max, self.cap);
        set(&mut c.outer_tol, self.tol);
        set(&mut c.inner_tol, self.inner_tol);
        set(&mut c.weights.theta1, self.theta1);
        set(&mut c.weights.theta2, self.theta2);
        if let Some(n) = self.max_outer {
            c.max_outer = n;
        }
        if let Some(n) = self.max_inner {
            c.max_inner = n;
        }
        if let Some(side) = self.weight_side {
            c.weights.side = side;
        }
        c.seed = self.seed;
        c
    }
}

impl ProblemArgs {
    fn spec(&self, rank: usize) -> Result<RunSpec> {
        let mask = match (&self.mask, &self.pattern) {
            (Some(p), _) => MaskSource::File(p.clone()),
            (None, Some(p)) => MaskSource::Pattern(seeded_pattern(p, self.solver.seed)),
            (None, None) => bail!("one of --mask or --pattern is required"),
        };
        Ok(RunSpec {
            input: self.input.parse()?,
            mask,
            method: self.method,
            config: self.solver.config(self.method, rank),
        })
    }
}

#[derive(Args)]
struct CompleteArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Truncation rank (required for qtnn, wqtnn and dwqtnn)
    #[arg(long)]
    rank: Option<usize>,
    /// Recovered image, or JSON matrix for synthetic inputs
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV report
    #[arg(long)]
    report: Option<PathBuf>,
    /// JSON report
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct MaskArgs {
    #[arg(long, required_unless_present = "like")]
    rows: Option<usize>,
    #[arg(long, required_unless_present = "like")]
    cols: Option<usize>,
    /// Take the dimensions from this image
    #[arg(long, conflicts_with_all = ["rows", "cols"])]
    like: Option<PathBuf>,
    #[arg(long)]
    pattern: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output mask (`.json` for JSON, PNG otherwise)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Inclusive rank range, e.g. `1..6` or `3`
    #[arg(long)]
    ranks: String,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV of all runs
    #[arg(long)]
    report: PathBuf,
    /// JSON summary with per-method mean wall time
    #[arg(long)]
    summary: Option<PathBuf>,
}

fn parse_ranks(s: &str) -> Result<Vec<usize>> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim_start_matches('=').trim().parse()?),
        None => {
            let r: usize = s.trim().parse()?;
            (r, r)
        }
    };
    if a == 0 || a > b {
        bail!("empty rank range `{s}`");
    }
    Ok((a..=b).collect())
}

fn write_reports(rows: &[Row], csv: Option<&Path>, json: Option<&Path>) -> Result<()> {
    if let Some(p) = csv {
        write_csv(p, rows)?;
    }
    if let Some(p) = json {
        write_json_rows(p, rows)?;
    }
    if csv.is_none() && json.is_none() {
        print!("{}", String::from_utf8(report::csv_bytes(rows)?)?);
    }
    Ok(())
}

fn status(all_converged: bool) -> ExitCode {
    if all_converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_UNCONVERGED)
    }
}

fn cmd_complete(args: CompleteArgs) -> Result<ExitCode> {
    let rank = match (args.rank, args.problem.method.is_truncated()) {
        (Some(r), _) => r,
        (None, false) => 0,
        (None, true) => bail!("--rank is required for method {}", args.problem.method),
    };
    let spec = args.problem.spec(rank)?;
    let truth = spec.input.load()?;
    let (rows, cols) = truth.matrix().shape();
    let mask = spec.mask.build(rows, cols)?;
    let outcome = execute(&spec, &truth, &mask)?;
    if let Some(out) = &args.out {
        save_recovered(out, &truth, &outcome.report.recovered)?;
    }
    write_reports(std::slice::from_ref(&outcome.row), args.report.as_deref(), args.json.as_deref())?;
    Ok(status(outcome.row.converged))
}

fn cmd_mask(args: MaskArgs) -> Result<ExitCode> {
    let (rows, cols) = match &args.like {
        Some(p) => {
            let img = load_image(p)?;
            (img.rows(), img.cols())
        }
        None => (args.rows.unwrap_or_default(), args.cols.unwrap_or_default()),
    };
    let patterns = parse_patterns(&seeded_pattern(&args.pattern, args.seed))?;
    let mask = make_mask(&patterns, rows, cols)?;
    save_mask(&args.out, &mask)?;
    eprintln!("{} of {} entries missing", mask.missing_count(), rows * cols);
    Ok(ExitCode::SUCCESS)
}

/// Worker count for concurrent runs, capped by `QUATCOMP_THREADS`.
fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("QUATCOMP_THREADS") {
        let n: usize = v.parse().context("QUATCOMP_THREADS must be a positive integer")?;
        b = b.num_threads(n.max(1));
    }
    Ok(b.build()?)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let ranks = parse_ranks(&args.ranks)?;
    let base = args.problem.spec(ranks[0])?;
    let truth = base.input.load()?;
    let (rows, cols) = truth.matrix().shape();
    if ranks[ranks.len() - 1] > rows.min(cols) {
        bail!("rank range exceeds min(M, N) = {}", rows.min(cols));
    }
    let mask = base.mask.build(rows, cols)?;
    let mut out: Vec<Row> = pool()?.install(|| {
        ranks
            .par_iter()
            .map(|&r| {
                let spec = RunSpec { config: args.problem.solver.config(base.method, r), ..base.clone() };
                execute(&spec, &truth, &mask).map(|o| o.row)
            })
            .collect::<Result<_>>()
    })?;
    let converged = out.iter().all(|r| r.converged);
    let best = out
        .iter()
        .max_by(|a, b| a.psnr.total_cmp(&b.psnr))
        .cloned()
        .map(|r| Row { row: "best".into(), ..r });
    out.extend(best);
    write_reports(&out, args.report.as_deref(), args.json.as_deref())?;
    Ok(status(converged))
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    let config = BenchConfig::load(&args.config)?;
    let mut rows = Vec::new();
    // runs are sequential so their wall times are comparable
    for group in config.expand()? {
        let truth = group[0].input.load()?;
        let (m, n) = truth.matrix().shape();
        let mask = group[0].mask.build(m, n)?;
        for spec in &group {
            let outcome = execute(spec, &truth, &mask)?;
            eprintln!(
                "{} {} r={} {}: {:.2} dB in {:.3}s",
                outcome.row.image, outcome.row.method, outcome.row.r, outcome.row.pattern, outcome.row.psnr, outcome.row.wall_seconds
            );
            rows.push(outcome.row);
        }
    }
    write_csv(&args.report, &rows)?;
    if let Some(p) = &args.summary {
        write_summary(p, &summarize(&rows))?;
    }
    Ok(status(rows.iter().all(|r| r.converged)))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Complete(a) => cmd_complete(a),
        Command::Mask(a) => cmd_mask(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
