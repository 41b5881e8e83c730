//! Command-line front end. `main` only forwards to [`run`] and renders
//! errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{FamilyKind, FamilySpec};
use crate::interval::search_best;
use crate::lp::{certify, solve, write_lp, SolveOptions, CERTIFICATION_TOL};
use crate::sim::{
    offline_optimum, run_balance, run_ranking, run_secretary, secretary_policy_from_lp, slab_audit, SimInstance,
    SimReport, DEFAULT_TRIALS,
};
use crate::studies::{limit_estimate, rate_violations, sweep_family, write_csv};
use crate::variational::{
    discretize_profile, integrate_tight_ode, multiplier_check, secretary_candidate, ContinuumProfile, ProfileTag,
    TightOde,
};

/// Environment variable that overrides the default simulation seed.
pub const SEED_ENV: &str = "REVEALING_SEED";

const PLANTED_EXTRA_DEGREE: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "revealing", version, about = "Factor-revealing LPs, continuum limits and online simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one LP family instance and certify the optimum.
    Solve(SolveArgs),
    /// Solve a family over many sizes and write a CSV table.
    Sweep(SweepArgs),
    /// Integrate a tight-constraint ODE with RK4.
    Ode(OdeArgs),
    /// Sample a continuum profile into an LP and report the gaps.
    VcCheck(VcArgs),
    /// Multiplier residuals for the (optionally perturbed) secretary optimizer.
    KktCheck(KktArgs),
    /// Grid search over interval sequences.
    IntervalSearch(IntervalArgs),
    /// Run BALANCE, RANKING or an LP-derived secretary policy.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Family and size, e.g. `balance:256`.
    #[arg(long)]
    family: FamilySpec,
    /// Also write the LP in text form to this path.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    family: FamilyKind,
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Fit `L + C/n` and report the extrapolated limit.
    #[arg(long)]
    extrapolate: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct OdeArgs {
    #[arg(long)]
    kind: TightOde,
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VcArgs {
    #[arg(long)]
    profile: ProfileTag,
    #[arg(long)]
    family: FamilySpec,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct KktArgs {
    /// Number of grid points.
    #[arg(long, default_value_t = 10_000)]
    grid: usize,
    /// Amplitude of the `t (1 - t)` perturbation.
    #[arg(long, default_value_t = 0.0)]
    perturb: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct IntervalArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1e-2)]
    resolution: f64,
    #[arg(long, default_value_t = 1e-2)]
    min_sep: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Balance,
    Ranking,
    Secretary,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["instance", "planted", "policy_from_lp"]))]
struct SimulateArgs {
    algorithm: Algorithm,
    /// Instance file: header `n_offline n_online b`, then one line of
    /// 1-based neighbor indices per arrival.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Random instance with a planted perfect b-matching, as `n,b`.
    #[arg(long, value_parser = parse_planted)]
    planted: Option<(usize, u32)>,
    /// Derive the secretary policy from the optimum of the size-n LP.
    #[arg(long)]
    policy_from_lp: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Slab count for the BALANCE accounting.
    #[arg(long, default_value_t = 10)]
    slabs: usize,
    #[arg(long)]
    json: bool,
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out`. `--help` and `--version` are written to `out` as well.
pub fn run<I, T, W>(args: I, out: &mut W) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write!(out, "{}", e.render())?;
            return Ok(());
        }
        Err(e) => {
            let msg = e.render().to_string();
            return Err(Error::invalid(msg.strip_prefix("error: ").unwrap_or(&msg).trim_end()));
        }
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Ode(a) => cmd_ode(a, out),
        Command::VcCheck(a) => cmd_vc(a, out),
        Command::KktCheck(a) => cmd_kkt(a, out),
        Command::IntervalSearch(a) => cmd_interval(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    }
}

/// JSON object written to stderr when a command fails.
pub fn error_json(err: &Error) -> String {
    json!({ "error": err.kind(), "message": err.to_string() }).to_string()
}

fn emit<W: Write, T: Serialize>(out: &mut W, json: bool, value: &T, text: impl FnOnce(&mut W) -> Result<()>) -> Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    } else {
        text(out)
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn cmd_solve<W: Write>(a: SolveArgs, out: &mut W) -> Result<()> {
    let lp = a.family.build()?;
    if let Some(path) = &a.dump_lp {
        let mut f = create(path)?;
        write_lp(&lp, &mut f)?;
        f.flush()?;
    }
    let sol = solve(&lp, SolveOptions::default())?;
    let cert = if sol.is_optimal() { Some(certify(&lp, &sol, CERTIFICATION_TOL)?) } else { None };
    let report = json!({
        "family": a.family.to_string(),
        "status": sol.status,
        "objective_value": sol.objective_value,
        "iterations": sol.iterations,
        "max_primal_violation": sol.max_primal_violation,
        "duality_gap": sol.duality_gap,
        "certificate": cert,
        "x": sol.x,
        "dual": sol.dual,
    });
    emit(out, a.json, &report, |out| {
        writeln!(out, "family      {}", a.family)?;
        writeln!(out, "status      {}", sol.status.as_str())?;
        writeln!(out, "objective   {:.12}", sol.objective_value)?;
        writeln!(out, "iterations  {}", sol.iterations)?;
        if let Some(c) = &cert {
            writeln!(out, "gap         {:.3e}", c.gap)?;
            writeln!(out, "certified   {}", c.passed)?;
        }
        Ok(())
    })
}

fn cmd_sweep<W: Write>(a: SweepArgs, out: &mut W) -> Result<()> {
    let table = sweep_family(a.family, &a.sizes)?;
    let mut f = create(&a.out)?;
    write_csv(&table, &mut f)?;
    f.flush()?;
    let fit = if a.extrapolate { Some(limit_estimate(&table)?) } else { None };
    let slow_rate = fit.as_ref().map(|fit| rate_violations(&table, fit));
    let report = json!({ "table": table, "fit": fit, "rate_violations": slow_rate });
    emit(out, a.json, &report, |out| {
        for r in &table.rows {
            writeln!(out, "{:>9}  {:.12}  {:>10.1} ms", r.n, r.value, r.ms)?;
        }
        if let Some(fit) = &fit {
            writeln!(out, "limit {:.9} +- {:.1e} (C = {:.4}, target {:.9}, off by {:.1e})", fit.limit, fit.error_bar, fit.constant, fit.target, fit.deviation)?;
        }
        Ok(())
    })
}

fn cmd_ode<W: Write>(a: OdeArgs, out: &mut W) -> Result<()> {
    let run = integrate_tight_ode(a.kind, a.step)?;
    let mut f = create(&a.out)?;
    run.trajectory.write_csv(&mut f)?;
    f.flush()?;
    let report = json!({
        "step": run.step,
        "terminal": run.terminal,
        "target": a.kind.terminal_target(),
        "terminal_error": run.terminal_error,
        "max_error": run.max_error,
    });
    emit(out, a.json, &report, |out| {
        writeln!(out, "terminal {:.15} (target {:.15})", run.terminal, a.kind.terminal_target())?;
        writeln!(out, "terminal error {:.3e}, max error {:.3e}", run.terminal_error, run.max_error)?;
        Ok(())
    })
}

fn cmd_vc<W: Write>(a: VcArgs, out: &mut W) -> Result<()> {
    let mut d = discretize_profile(&ContinuumProfile::new(a.profile), a.family)?;
    if !a.json {
        d.x.clear();
    }
    emit(out, a.json, &d, |out| {
        writeln!(out, "max violation      {:.3e} (row {:?})", d.max_violation, d.worst_row.map(|r| r + 1))?;
        writeln!(out, "LP objective       {:.12}", d.lp_objective)?;
        writeln!(out, "continuum value    {:.12}", d.continuum_objective)?;
        writeln!(out, "objective gap      {:.3e}", d.objective_gap)?;
        writeln!(out, "bound C/n          {:.3e}", d.bound)?;
        writeln!(out, "within bound       {}", d.within_bound)?;
        Ok(())
    })
}

fn cmd_kkt<W: Write>(a: KktArgs, out: &mut W) -> Result<()> {
    let candidate = secretary_candidate(a.grid, a.perturb)?;
    let (_, report) = multiplier_check(&candidate, a.tol)?;
    emit(out, a.json, &report, |out| {
        writeln!(out, "stationarity  {:.3e}", report.stationarity)?;
        writeln!(out, "slack v       {:.3e}", report.slack_v)?;
        writeln!(out, "slack w       {:.3e}", report.slack_w)?;
        writeln!(out, "negative sq   {:.3e}", report.negative_square)?;
        writeln!(out, "max residual  {:.3e} (tol {:.1e})", report.max_residual, report.tol)?;
        writeln!(out, "passed        {}", report.passed)?;
        Ok(())
    })
}

fn cmd_interval<W: Write>(a: IntervalArgs, out: &mut W) -> Result<()> {
    let r = search_best(a.k, a.resolution, a.min_sep)?;
    emit(out, a.json, &r, |out| {
        writeln!(out, "best s     {:?}", r.best_s)?;
        writeln!(out, "best value {:.12}", r.best_value)?;
        writeln!(out, "evaluated  {}", r.grid_points_evaluated)?;
        Ok(())
    })
}

fn cmd_simulate<W: Write>(a: SimulateArgs, out: &mut W) -> Result<()> {
    if a.algorithm == Algorithm::Secretary {
        let n = a
            .policy_from_lp
            .ok_or_else(|| Error::invalid("secretary simulation needs --policy-from-lp n"))?;
        let sol = solve(&crate::families::build_secretary(n)?, SolveOptions::default())?;
        if !sol.is_optimal() {
            return Err(Error::NotOptimal(sol.status));
        }
        let report = run_secretary(&secretary_policy_from_lp(&sol.x)?, a.trials, a.seed)?;
        let z = (report.estimate - sol.objective_value) / report.std_error;
        let value = merge(&report, json!({ "lp_value": sol.objective_value, "z_score": z }));
        return emit(out, a.json, &value, |out| {
            print_report(out, &report)?;
            writeln!(out, "LP value  {:.9} (z = {z:.2})", sol.objective_value)?;
            Ok(())
        });
    }

    let (instance, planted) = match (&a.instance, &a.planted) {
        (Some(path), _) => (SimInstance::read(BufReader::new(File::open(path)?))?, false),
        (None, Some((n, b))) => (SimInstance::planted(*n, *b, PLANTED_EXTRA_DEGREE, a.seed)?, true),
        _ => return Err(Error::invalid("simulation needs --instance FILE or --planted n,b")),
    };
    let b = u64::from(instance.capacity());
    let opt = if planted {
        Some(instance.n_offline() as u64 * b)
    } else {
        offline_optimum(&instance)
    };
    let opt_units = opt.map(|o| o as f64 / b as f64);

    match a.algorithm {
        Algorithm::Balance => {
            let outcome = run_balance(&instance, a.slabs)?;
            let exhausts = opt == Some(instance.n_offline() as u64 * b);
            let audit = if exhausts { Some(slab_audit(&outcome.stats, true)?) } else { None };
            let report = SimReport { trials: 1, estimate: outcome.value, std_error: 0.0, seed: a.seed, extra: Some(outcome.stats) };
            let ratio = opt_units.map(|o| outcome.value / o);
            let value = merge(&report, json!({ "offline_optimum": opt_units, "ratio": ratio, "slab_audit": audit }));
            emit(out, a.json, &value, |out| {
                print_report(out, &report)?;
                if let Some(r) = ratio {
                    writeln!(out, "ratio     {r:.6}")?;
                }
                if let Some(audit) = &audit {
                    writeln!(out, "slab audit passed: {}", audit.passed)?;
                }
                Ok(())
            })
        }
        Algorithm::Ranking => {
            let report = run_ranking(&instance, a.trials, a.seed)?;
            let ratio = opt_units.map(|o| report.estimate / o);
            let value = merge(&report, json!({ "offline_optimum": opt_units, "ratio": ratio }));
            emit(out, a.json, &value, |out| {
                print_report(out, &report)?;
                if let Some(r) = ratio {
                    writeln!(out, "ratio     {r:.6}")?;
                }
                Ok(())
            })
        }
        Algorithm::Secretary => unreachable!("handled above"),
    }
}

fn parse_planted(s: &str) -> std::result::Result<(usize, u32), String> {
    let (n, b) = s.split_once(',').ok_or_else(|| format!("expected `n,b`, got `{s}`"))?;
    let n = n.trim().parse().map_err(|_| format!("`{n}` is not a size"))?;
    let b = b.trim().parse().map_err(|_| format!("`{b}` is not a capacity"))?;
    Ok((n, b))
}

fn merge(report: &SimReport, extra: Value) -> Value {
    let mut v = serde_json::to_value(report).unwrap_or(Value::Null);
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

fn print_report<W: Write>(out: &mut W, r: &SimReport) -> Result<()> {
    writeln!(out, "trials    {}", r.trials)?;
    writeln!(out, "estimate  {:.9} +- {:.2e}", r.estimate, r.std_error)?;
    writeln!(out, "seed      {}", r.seed)?;
    Ok(())
}
