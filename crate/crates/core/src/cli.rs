//! Command-line interface.
//!
//! Stdout carries only `key=value` lines, CSV, or (with `--json`) a single
//! JSON object; diagnostics go to stderr. Exit codes: 0 success, 1 input
//! error, 2 computation error, 64 usage error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::document::parse_model;
use crate::experiments::{
    run_alpha_sweep, run_cluster_sweep, run_redundancy_configs, run_table3, SweepResult, Target,
    ALPHA_GRID, CLUSTER_SWEEP,
};
use crate::ft::{eval_ft, parse_ft, u_ran, u_sys, ElementUnavailabilities, RedundancyConfig};
use crate::models::{element_unavailability, ElementKind, IntensityTable, ModelError};
use crate::san::{Net, SanModel};
use crate::sim::{simulate, simulate_replicated, DEFAULT_WARMUP_FRACTION};
use crate::solver::{self, Method};
use crate::statespace::{eliminate_vanishing, explore, to_ctmc, DEFAULT_MAX_STATES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable supplying the default simulation seed.
pub const SEED_ENV: &str = "EDGEAVAIL_SEED";

#[derive(Debug, Parser)]
#[command(name = "edgeavail", version, about = "Steady-state availability of SAN models and 5G-MEC systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a `.san` model exactly.
    Solve(SolveArgs),
    /// Estimate a `.san` model's reward by discrete-event simulation.
    Simulate(SimulateArgs),
    /// Evaluate a fault tree file, or the 5G-MEC closed form with `--paper`.
    Ft(FtArgs),
    /// Run one of the built-in experiments.
    Paper(PaperArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Override a parameter, `name=value`. Repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Print one JSON object instead of key=value lines.
    #[arg(long)]
    json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Gth,
    Iter,
}

#[derive(Debug, Args)]
struct SolveArgs {
    model: PathBuf,
    #[arg(long, default_value = "up")]
    reward: String,
    #[arg(long, value_enum, default_value = "gth")]
    method: MethodArg,
    #[arg(long, default_value_t = solver::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = solver::DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Write the state graph as a text edge list.
    #[arg(long, value_name = "PATH")]
    dump_graph: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    model: PathBuf,
    #[arg(long, default_value = "up")]
    reward: String,
    /// Simulated time in hours.
    #[arg(long, default_value_t = 1e6)]
    horizon: f64,
    /// Discarded initial time in hours (default: 1% of the horizon).
    #[arg(long)]
    warmup: Option<f64>,
    #[arg(long, default_value_t = 30)]
    batches: usize,
    /// Use this many independent replications instead of batch means.
    #[arg(long)]
    replications: Option<usize>,
    /// Random seed (default: $EDGEAVAIL_SEED, else 1).
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct FtArgs {
    /// Fault tree file.
    #[arg(required_unless_present = "paper", conflicts_with = "paper")]
    tree: Option<PathBuf>,
    /// Evaluate the 5G-MEC closed form; element values default to the
    /// solved element models.
    #[arg(long)]
    paper: bool,
    #[arg(long)]
    u_ru: Option<f64>,
    #[arg(long)]
    u_du: Option<f64>,
    #[arg(long)]
    u_cu: Option<f64>,
    #[arg(long)]
    u_meh: Option<f64>,
    #[arg(long = "u-5gc")]
    u_5gc: Option<f64>,
    #[arg(long)]
    u_mano: Option<f64>,
    #[arg(long, default_value_t = 1)]
    n_c: u32,
    #[arg(long, default_value_t = 1)]
    n_d: u32,
    #[arg(long, default_value_t = 1)]
    n_r: u32,
    #[arg(long, default_value_t = 1)]
    n_h: u32,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    Table3,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

#[derive(Debug, Args)]
struct PaperArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

/// A failure with its exit code and message.
struct Fail(i32, String);

impl Fail {
    fn input(msg: impl std::fmt::Display) -> Self {
        Fail(EXIT_INPUT, msg.to_string())
    }
    fn compute(msg: impl std::fmt::Display) -> Self {
        Fail(EXIT_COMPUTE, msg.to_string())
    }
    fn usage(msg: impl std::fmt::Display) -> Self {
        Fail(EXIT_USAGE, msg.to_string())
    }
}

type Outcome = Result<(), Fail>;

/// Run the CLI on `args` (program name first).
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let jobs = match &cli.command {
        Command::Solve(a) => a.common.jobs,
        Command::Simulate(a) => a.common.jobs,
        Command::Ft(a) => a.common.jobs,
        Command::Paper(a) => a.common.jobs,
    };
    let result = match jobs {
        Some(0) => Err(Fail::usage("--jobs must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let (mut o, mut e) = (Vec::new(), Vec::new());
                let r = pool.install(|| dispatch(cli.command, &mut o, &mut e));
                let _ = stdout.write_all(&o);
                let _ = stderr.write_all(&e);
                r
            }
            Err(e) => Err(Fail::compute(e)),
        },
        None => dispatch(cli.command, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Fail(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Solve(a) => cmd_solve(a, out, err),
        Command::Simulate(a) => cmd_simulate(a, out, err),
        Command::Ft(a) => cmd_ft(a, out, err),
        Command::Paper(a) => cmd_paper(a, out, err),
    }
}

fn parse_overrides(set: &[String]) -> Result<Vec<(String, f64)>, Fail> {
    set.iter()
        .map(|s| {
            let (name, value) = s
                .split_once('=')
                .ok_or_else(|| Fail::usage(format!("--set expects NAME=VALUE, got `{s}`")))?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| Fail::usage(format!("--set {name}: `{value}` is not a number")))?;
            Ok((name.trim().to_string(), v))
        })
        .collect()
}

fn table_with(set: &[String]) -> Result<IntensityTable, Fail> {
    let mut t = IntensityTable::default();
    for (name, v) in parse_overrides(set)? {
        t.set(&name, v).map_err(Fail::usage)?;
    }
    t.validate().map_err(Fail::usage)?;
    Ok(t)
}

fn load_model(path: &Path, set: &[String], reward: &str) -> Result<(SanModel, Net), Fail> {
    let overrides = parse_overrides(set)?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    let mut model =
        parse_model(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    if !model.reward_names().any(|r| r == reward) {
        return Err(Fail::input(format!(
            "{}: no reward named `{reward}`",
            path.display()
        )));
    }
    for (name, v) in &overrides {
        model.set_param(name, *v).map_err(Fail::usage)?;
    }
    let net = Net::new(&model).map_err(|e| {
        if overrides.is_empty() {
            Fail::input(e)
        } else {
            Fail::usage(e)
        }
    })?;
    Ok((model, net))
}

/// Emit `report` as key=value lines (one per field) or one JSON object.
fn emit<T: Serialize>(out: &mut dyn Write, json: bool, report: &T) -> Outcome {
    let value = serde_json::to_value(report).map_err(Fail::compute)?;
    let io = |e: std::io::Error| Fail::compute(e);
    if json {
        writeln!(out, "{value}").map_err(io)?;
    } else if let serde_json::Value::Object(map) = value {
        for (k, v) in map {
            match v {
                serde_json::Value::String(s) => writeln!(out, "{k}={s}"),
                other => writeln!(out, "{k}={other}"),
            }
            .map_err(io)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    model: String,
    reward: String,
    tangible_states: usize,
    vanishing_states: usize,
    transitions: usize,
    method: String,
    residual: f64,
    iterations: usize,
    availability: f64,
    unavailability: f64,
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if !(a.tol > 0.0) || a.max_iter == 0 || a.max_states == 0 {
        return Err(Fail::usage("--tol, --max-iter and --max-states must be positive"));
    }
    let (_, net) = load_model(&a.model, &a.common.set, &a.reward)?;
    let g = explore(&net, a.max_states).map_err(Fail::compute)?;
    if let Some(path) = &a.dump_graph {
        std::fs::write(path, g.dump(&net))
            .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
    }
    let tangible = eliminate_vanishing(&g).map_err(Fail::compute)?;
    let ctmc = to_ctmc(&tangible, &net, &a.reward).map_err(Fail::compute)?;
    let method = match a.method {
        MethodArg::Gth => Method::Gth,
        MethodArg::Iter => Method::Iterative,
    };
    let ss = solver::solve(&ctmc, method, a.tol, a.max_iter).map_err(Fail::compute)?;
    let u = solver::unavailability(&ctmc, &ss);
    let _ = writeln!(
        err,
        "solved {} tangible states with {method}",
        ctmc.size()
    );
    emit(
        out,
        a.common.json,
        &SolveReport {
            model: a.model.display().to_string(),
            reward: a.reward,
            tangible_states: g.tangible_count(),
            vanishing_states: g.vanishing_count(),
            transitions: tangible.transitions.len(),
            method: method.to_string(),
            residual: ss.residual,
            iterations: ss.iterations,
            availability: 1.0 - u,
            unavailability: u,
        },
    )
}

#[derive(Serialize)]
struct SimulateReport {
    model: String,
    reward: String,
    availability: f64,
    unavailability: f64,
    ci_halfwidth: f64,
    ci_lower: f64,
    ci_upper: f64,
    batches: usize,
    replicated: bool,
    horizon: f64,
    warmup: f64,
    seed: u64,
    events: u64,
}

fn default_seed() -> Result<u64, Fail> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Fail::usage(format!("{SEED_ENV}=`{s}` is not a 64-bit seed"))),
        Err(_) => Ok(1),
    }
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let reps = a.replications;
    if a.batches < 2 || reps.is_some_and(|r| r < 2) {
        return Err(Fail::usage("--batches and --replications must be at least 2"));
    }
    let warmup = a.warmup.unwrap_or(a.horizon * DEFAULT_WARMUP_FRACTION);
    if !(a.horizon.is_finite() && a.horizon > 0.0 && warmup >= 0.0 && warmup < a.horizon) {
        return Err(Fail::usage("need 0 <= --warmup < --horizon"));
    }
    let seed = match a.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let (_, net) = load_model(&a.model, &a.common.set, &a.reward)?;
    let est = match reps {
        Some(r) => simulate_replicated(&net, &a.reward, a.horizon, warmup, r, seed),
        None => simulate(&net, &a.reward, a.horizon, warmup, a.batches, seed),
    }
    .map_err(|e| match e {
        crate::sim::SimError::InvalidArgument(m) => Fail::usage(m),
        other => Fail::compute(other),
    })?;
    let _ = writeln!(err, "simulated {} events", est.events);
    emit(
        out,
        a.common.json,
        &SimulateReport {
            model: a.model.display().to_string(),
            reward: a.reward,
            availability: est.point,
            unavailability: 1.0 - est.point,
            ci_halfwidth: est.ci_halfwidth,
            ci_lower: est.lower(),
            ci_upper: est.upper(),
            batches: est.batches,
            replicated: reps.is_some(),
            horizon: est.horizon,
            warmup: est.warmup,
            seed: est.seed,
            events: est.events,
        },
    )
}

#[derive(Serialize)]
struct TreeReport {
    tree: String,
    u_sys: f64,
}

#[derive(Serialize)]
struct PaperTreeReport {
    n_c: u32,
    n_d: u32,
    n_r: u32,
    n_h: u32,
    u_ru: f64,
    u_du: f64,
    u_cu: f64,
    u_meh: f64,
    u_5gc: f64,
    u_mano: f64,
    u_ran: f64,
    u_sys: f64,
}

fn cmd_ft(a: FtArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Outcome {
    if let Some(path) = &a.tree {
        if !a.common.set.is_empty() {
            return Err(Fail::usage("--set only applies with --paper"));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
        let tree = parse_ft(&text).map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
        return emit(
            out,
            a.common.json,
            &TreeReport {
                tree: path.display().to_string(),
                u_sys: eval_ft(&tree),
            },
        );
    }
    let cfg = RedundancyConfig::new(a.n_c, a.n_d, a.n_r, a.n_h).map_err(Fail::usage)?;
    let t = table_with(&a.common.set)?;
    let given = [
        (ElementKind::RU, a.u_ru),
        (ElementKind::DU, a.u_du),
        (ElementKind::CU, a.u_cu),
        (ElementKind::MEH, a.u_meh),
        (ElementKind::Cluster5GC, a.u_5gc),
        (ElementKind::ClusterMANO, a.u_mano),
    ];
    let mut us = [0.0; 6];
    for (slot, (kind, value)) in us.iter_mut().zip(given) {
        *slot = match value {
            Some(u) if (0.0..=1.0).contains(&u) => u,
            Some(u) => return Err(Fail::input(format!("{kind} unavailability {u} outside [0, 1]"))),
            None => element_unavailability(kind, &t).map_err(Fail::compute)?,
        };
    }
    let e = ElementUnavailabilities {
        ru: us[0],
        du: us[1],
        cu: us[2],
        meh: us[3],
        core_5gc: us[4],
        mano: us[5],
    };
    let ran = u_ran(e.ru, e.du, e.cu, cfg);
    emit(
        out,
        a.common.json,
        &PaperTreeReport {
            n_c: cfg.n_c,
            n_d: cfg.n_d,
            n_r: cfg.n_r,
            n_h: cfg.n_h,
            u_ru: e.ru,
            u_du: e.du,
            u_cu: e.cu,
            u_meh: e.meh,
            u_5gc: e.core_5gc,
            u_mano: e.mano,
            u_ran: ran,
            u_sys: u_sys(ran, e.core_5gc, e.mano, e.meh, cfg.n_h),
        },
    )
}

#[derive(Serialize)]
struct PaperSummary {
    experiment: String,
    rows: usize,
    out: String,
    min_unavailability: f64,
    max_unavailability: f64,
    method: String,
    table_digest: String,
    timestamp: u64,
}

fn cmd_paper(a: PaperArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let t = table_with(&a.common.set)?;
    let result: Result<SweepResult, ModelError> = match a.experiment {
        Experiment::Table3 => run_table3(&t),
        Experiment::Fig6 => run_cluster_sweep(&t, &CLUSTER_SWEEP),
        Experiment::Fig7 => run_redundancy_configs(&t),
        Experiment::Fig8 => run_alpha_sweep(&t, Target::Both, &ALPHA_GRID),
        Experiment::Fig9 => run_alpha_sweep(&t, Target::Core5gcOnly, &ALPHA_GRID),
    };
    let r = result.map_err(Fail::compute)?;
    let _ = writeln!(err, "{}: {} rows", r.name, r.rows.len());
    let csv_error = |e: csv::Error| Fail::input(e);
    match &a.out {
        Some(path) => {
            let f = std::fs::File::create(path)
                .map_err(|e| Fail::input(format!("{}: {e}", path.display())))?;
            r.write_csv(std::io::BufWriter::new(f)).map_err(csv_error)?;
        }
        None if !a.common.json => {
            return r.write_csv(out).map_err(csv_error);
        }
        None => {}
    }
    if a.common.json && a.out.is_none() {
        return emit(out, true, &r);
    }
    let us = r.rows.iter().map(|x| x.unavailability);
    emit(
        out,
        a.common.json,
        &PaperSummary {
            experiment: r.name.clone(),
            rows: r.rows.len(),
            out: a
                .out
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            min_unavailability: us.clone().fold(f64::INFINITY, f64::min),
            max_unavailability: us.fold(0.0, f64::max),
            method: r.method.to_string(),
            table_digest: r.table_digest.clone(),
            timestamp: r.timestamp,
        },
    )
}
