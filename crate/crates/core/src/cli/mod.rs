//! `wavepack` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or config,
//! 3 numerical failure, 4 unresolved collapse under `--strict`.

pub mod figures;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{sweep_constant_width, LocusPoint};
use crate::error::Error;
use crate::pde::{evolve, PdeConfig, RunStatus};
use crate::variational::{
    free_critical, integrate_width, stability_frequency, trap_d, trap_ymin, FreeParams,
    TrapParams, WidthModel, WidthStatus,
};
use figures::{figure, Panel};
use output::{num, potential_csv, RunDir, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_COLLAPSE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "wavepack", version, about = "Gaussian wave-packet dynamics in the NLSE and trapped GPE")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the variational width equation.
    Variational(VariationalArgs),
    /// Run the split-step PDE solver from a JSON config.
    Pde(PdeArgs),
    /// Closed-form queries.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Parameter sweeps.
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Reproduce a canned figure scenario.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Free,
    Trap,
}

#[derive(Debug, Args)]
struct VariationalArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    delta0: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    alpha: f64,
    /// Initial Y; defaults to delta0².
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    ydot0: f64,
    #[arg(long)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Args)]
struct PdeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    strict: bool,
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Critical width of the free packet.
    Critical {
        #[arg(long, value_enum)]
        mode: CriticalMode,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        #[arg(long)]
        delta0: f64,
    },
    /// Constant-width coupling, Y_min and stability frequency for a trap width.
    Locus {
        #[arg(long)]
        delta: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CriticalMode {
    Free,
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Verify the constant-width locus over a range of widths.
    Locus {
        #[arg(long)]
        delta_min: f64,
        #[arg(long)]
        delta_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct FiguresArgs {
    /// fig1 .. fig14
    #[arg(long)]
    name: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    strict: bool,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::NonFinite(_) | Error::ConvergenceFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Variational(args) => run_variational(args),
        Command::Pde(args) => run_pde(args),
        Command::Analyze(cmd) => run_analyze(cmd),
        Command::Sweep(cmd) => run_sweep(cmd),
        Command::Figures(args) => run_figures(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

type CmdResult = Result<i32, Error>;

fn variational_model(args: &VariationalArgs) -> Result<WidthModel, Error> {
    match args.mode {
        Mode::Free => {
            let gamma = args
                .gamma
                .ok_or_else(|| Error::InvalidConfig("--mode free requires --gamma".into()))?;
            Ok(WidthModel::Free(FreeParams::new(gamma, args.delta0)?))
        }
        Mode::Trap => {
            let beta = args
                .beta
                .ok_or_else(|| Error::InvalidConfig("--mode trap requires --beta".into()))?;
            Ok(WidthModel::Trap(TrapParams::new(beta, args.delta0, args.alpha)?))
        }
    }
}

fn width_status_label(status: WidthStatus) -> String {
    match status {
        WidthStatus::Completed => "completed".into(),
        WidthStatus::Collapsed { t } => format!("collapsed at t = {t}"),
    }
}

fn run_variational(args: VariationalArgs) -> CmdResult {
    let start = Instant::now();
    let model = variational_model(&args)?;
    let y0 = args.y0.unwrap_or(args.delta0 * args.delta0);
    let series = integrate_width(model, y0, args.ydot0, args.t_end, args.dt)?;

    let mut dir = RunDir::create(&args.out)?;
    dir.write_series(&series)?;
    let config = json!({
        "model": model,
        "y0": y0,
        "ydot0": args.ydot0,
        "t_end": args.t_end,
        "dt": args.dt,
        "strict": args.strict,
    });
    let manifest = RunManifest::new("variational", config, width_status_label(series.status));
    dir.finish(manifest, start.elapsed())?;

    if let WidthStatus::Collapsed { t } = series.status {
        println!("status=Collapsed\ncollapse_time={t}");
        if args.strict {
            return Ok(EXIT_COLLAPSE);
        }
    } else {
        println!("status=Completed");
    }
    Ok(EXIT_OK)
}

fn pde_status_code(status: RunStatus, strict: bool) -> i32 {
    match status {
        RunStatus::Completed => EXIT_OK,
        RunStatus::NonFinite => EXIT_NUMERICAL,
        RunStatus::CollapseUnresolvable if strict => EXIT_COLLAPSE,
        RunStatus::CollapseUnresolvable => EXIT_OK,
    }
}

fn status_label(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Completed => "completed",
        RunStatus::CollapseUnresolvable => "collapse_unresolvable",
        RunStatus::NonFinite => "non_finite",
    }
}

fn run_pde_into(cfg: &PdeConfig, out: &Path, subcommand: &str) -> Result<RunStatus, Error> {
    let start = Instant::now();
    let traj = evolve(cfg)?;
    let mut dir = RunDir::create(out)?;
    dir.write_trajectory(&traj)?;
    let manifest = RunManifest::new(subcommand, serde_json::to_value(cfg)?, status_label(traj.status));
    dir.finish(manifest, start.elapsed())?;
    Ok(traj.status)
}

fn run_pde(args: PdeArgs) -> CmdResult {
    let text = fs::read_to_string(&args.config)?;
    let cfg: PdeConfig = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("{}: {e}", args.config.display())))?;
    let status = run_pde_into(&cfg, &args.out, "pde")?;
    println!("status={}", status_label(status));
    Ok(pde_status_code(status, args.strict))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

struct LocusSummary {
    beta: f64,
    y_min: f64,
    frequency: f64,
}

fn locus_summary(delta: f64) -> Result<LocusSummary, Error> {
    let beta = -crate::variational::beta_for_constant_width(delta)?;
    let p = TrapParams::new(beta, delta, 0.0)?;
    if beta < 0.0 {
        Ok(LocusSummary {
            beta,
            y_min: trap_ymin(&p)?,
            frequency: stability_frequency(&p)?,
        })
    } else {
        // β = 0 at δ = 3^(-1/4): the linear-oscillator limit
        Ok(LocusSummary {
            beta,
            y_min: 0.25 * trap_d(&p),
            frequency: 1.0 / std::f64::consts::PI,
        })
    }
}

fn run_analyze(cmd: AnalyzeCommand) -> CmdResult {
    match cmd {
        AnalyzeCommand::Critical { mode: CriticalMode::Free, gamma, delta0 } => {
            let c = free_critical(&FreeParams::new(gamma, delta0)?);
            println!("y_c={}", opt(c.y_c));
            println!("delta_c={}", opt(c.delta_c));
            println!("regime={:?}", c.regime);
        }
        AnalyzeCommand::Locus { delta } => {
            let s = locus_summary(delta)?;
            println!("beta={}", s.beta);
            println!("y_min={}", s.y_min);
            println!("frequency={}", s.frequency);
        }
    }
    Ok(EXIT_OK)
}

fn sweep_threads() -> Option<usize> {
    std::env::var("WAVEPACK_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn run_sweep(cmd: SweepCommand) -> CmdResult {
    let SweepCommand::Locus { delta_min, delta_max, steps, tolerance, out } = cmd;
    let start = Instant::now();
    if steps == 0 || !(delta_min > 0.0 && delta_max >= delta_min) {
        return Err(Error::InvalidConfig(
            "need steps >= 1 and 0 < delta-min <= delta-max".into(),
        ));
    }
    let deltas: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                delta_min
            } else {
                delta_min + (delta_max - delta_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    let points = match sweep_threads() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("WAVEPACK_THREADS: {e}")))?
            .install(|| sweep_constant_width(&deltas, tolerance)),
        None => sweep_constant_width(&deltas, tolerance),
    };

    let mut csv = String::from("delta,beta,y_min,frequency,max_excursion,verified\n");
    for p in &points {
        csv.push_str(&locus_row(p));
    }
    let verified = points.iter().filter(|p| p.verified).count();
    let mut dir = RunDir::create(&out)?;
    dir.write("locus.csv", &csv)?;
    let config = json!({
        "delta_min": delta_min,
        "delta_max": delta_max,
        "steps": steps,
        "tolerance": tolerance,
        "t_end": crate::analysis::LOCUS_T_END,
        "dt": crate::analysis::LOCUS_DT,
    });
    let manifest = RunManifest::new("sweep locus", config, format!("{verified}/{steps} verified"));
    dir.finish(manifest, start.elapsed())?;
    println!("verified={verified}/{steps}");
    Ok(EXIT_OK)
}

fn locus_row(p: &LocusPoint) -> String {
    let field = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), num);
    let summary = locus_summary(p.delta).ok();
    format!(
        "{},{},{},{},{},{}\n",
        num(p.delta),
        field(p.beta),
        field(summary.as_ref().map(|s| s.y_min)),
        field(summary.as_ref().map(|s| s.frequency)),
        field(p.max_excursion),
        p.verified
    )
}

fn run_figures(args: FiguresArgs) -> CmdResult {
    let start = Instant::now();
    let fig = figure(&args.name).ok_or_else(|| {
        Error::InvalidConfig(format!(
            "unknown figure '{}', expected one of {}",
            args.name,
            figures::NAMES.join(", ")
        ))
    })?;
    let single = fig.panels.len() == 1;
    let mut code = EXIT_OK;
    let mut panels = Vec::new();
    for (label, panel) in &fig.panels {
        let dir_path = if single { args.out.clone() } else { args.out.join(label) };
        let panel_start = Instant::now();
        let status = match panel {
            Panel::Potential { model, y_max } => {
                let mut dir = RunDir::create(&dir_path)?;
                dir.write("potential.csv", &potential_csv(*y_max, 401, |y| panel.potential_at(y)))?;
                let manifest = RunManifest::new("figures", json!({ "model": model, "y_max": y_max }), "completed");
                dir.finish(manifest, panel_start.elapsed())?;
                "completed".to_string()
            }
            Panel::Width { model, t_end } => {
                let y0 = match model {
                    WidthModel::Free(p) => p.delta0 * p.delta0,
                    WidthModel::Trap(p) => p.delta * p.delta,
                };
                let series = integrate_width(*model, y0, 0.0, *t_end, 1e-3)?;
                let mut dir = RunDir::create(&dir_path)?;
                dir.write_series(&series)?;
                let config = json!({ "model": model, "y0": y0, "ydot0": 0.0, "t_end": t_end, "dt": 1e-3 });
                let status = width_status_label(series.status);
                dir.finish(RunManifest::new("figures", config, status.clone()), panel_start.elapsed())?;
                status
            }
            Panel::Pde(cfg) => {
                let status = run_pde_into(cfg, &dir_path, "figures")?;
                code = code.max(pde_status_code(status, args.strict));
                status_label(status).to_string()
            }
        };
        println!("{label}: {status}");
        panels.push(json!({ "label": label, "status": status }));
    }
    if !single {
        let mut manifest = RunManifest::new(
            "figures",
            json!({ "name": fig.name, "description": fig.description, "panels": panels }),
            "completed",
        );
        manifest.outputs = fig.panels.iter().map(|(l, _)| format!("{l}/")).collect();
        manifest.write(&args.out, start.elapsed())?;
    }
    Ok(code)
}
