use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pwe_cli::fsio::{sha256_hex, write_artifacts, write_atomic};
use pwe_cli::pipeline::{self, Options};
use pwe_cli::render::render_svg;
use pwe_cli::report::{pretty, RunReport};
use pwe_core::emcompiler::{compile, CompileRequest, LookupTable, RequestKind, TileModel, DEFAULT_BUDGET};
use pwe_core::scenario::{parse_scenario, Scenario, DEFAULT_COLUMNS_PER_TILE};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pwe", version, about = "Programmable wireless environment simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunFlags {
    /// Maximum tile bounces per path.
    #[arg(long, default_value_t = 3)]
    max_bounces: usize,
    /// Rays per launch fan.
    #[arg(long, default_value_t = 3600)]
    rays: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Compiler evaluation budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Lookup table file, read if present and updated after the run.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl RunFlags {
    fn options(&self) -> Options {
        Options { max_bounces: self.max_bounces, rays: self.rays, seed: self.seed, budget: self.budget }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Steer,
    Specular,
    Absorb,
}

#[derive(clap::Args)]
struct CompileArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Incidence angle, degrees from the tile normal.
    #[arg(long = "in", default_value_t = 0.0, allow_negative_numbers = true)]
    theta_in: f64,
    /// Target departure angle, degrees.
    #[arg(long = "out", default_value_t = 0.0, allow_negative_numbers = true)]
    theta_out: f64,
    #[arg(long, default_value_t = DEFAULT_COLUMNS_PER_TILE)]
    columns: u32,
    #[arg(long, default_value_t = 2.4e9)]
    frequency: f64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: control step, dissemination, propagation, report.
    Simulate {
        scenario: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Control step only; writes the routing report.
    Route {
        scenario: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Compile one tile configuration and print it as JSON.
    Compile(CompileArgs),
    /// Draw a scenario with the tile states and paths of a report.
    Render {
        scenario: PathBuf,
        report: PathBuf,
        #[arg(long, default_value = "floorplan.svg")]
        out: PathBuf,
    },
    /// Pretty-print a report.
    Report { report: PathBuf },
}

/// Failure kinds with their exit codes.
enum Failure {
    Input(anyhow::Error),
    NoPath,
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn read_scenario(path: &Path) -> Result<(Scenario, String)> {
    let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let scenario = parse_scenario(text).with_context(|| format!("invalid scenario {}", path.display()))?;
    Ok((scenario, sha256_hex(&bytes)))
}

fn read_table(path: Option<&Path>) -> Result<Option<LookupTable>> {
    let Some(path) = path.filter(|p| p.exists()) else { return Ok(None) };
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let table = LookupTable::from_json(&text).with_context(|| format!("invalid lookup table {}", path.display()))?;
    Ok(Some(table))
}

fn save_table(path: Option<&Path>, table: Option<&LookupTable>) -> Result<()> {
    if let (Some(path), Some(table)) = (path, table) {
        let mut text = serde_json::to_string_pretty(&table.to_json())?;
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

fn run_scenario(scenario_path: &Path, flags: &RunFlags, propagate: bool) -> Result<RunReport, Failure> {
    let start = Instant::now();
    let (scenario, hash) = read_scenario(scenario_path)?;
    let table = read_table(flags.table.as_deref())?;
    let mut art = pipeline::run(&scenario, hash, &flags.options(), table, propagate)?;
    art.report.wall_clock_s = start.elapsed().as_secs_f64();
    art.files.insert(0, ("report.json".into(), art.report.to_json().into_bytes()));
    write_artifacts(&flags.out, &art.files)?;
    save_table(flags.table.as_deref(), art.table.as_ref())?;
    if art.report.any_no_path() {
        for o in art.report.objectives.iter().filter(|o| o.status == pwe_core::controller::Status::NoPath) {
            eprintln!("no path for objective {}", o.label);
        }
        return Err(Failure::NoPath);
    }
    Ok(art.report)
}

fn cmd_compile(args: &CompileArgs) -> Result<()> {
    let CompileArgs { kind, theta_in, theta_out, columns, frequency, budget, seed, .. } = *args;
    let table_path = args.table.as_deref();
    if columns == 0 {
        bail!("--columns must be positive");
    }
    if !(frequency.is_finite() && frequency > 0.0) {
        bail!("--frequency must be positive, got {frequency}");
    }
    for (name, v) in [("--in", theta_in), ("--out", theta_out)] {
        if !(v.is_finite() && v.abs() < 90.0) {
            bail!("{name} must be strictly between -90 and 90 degrees, got {v}");
        }
    }
    let model = TileModel::new(columns, frequency);
    let kind = match kind {
        Kind::Steer => RequestKind::Steer,
        Kind::Specular => RequestKind::Specular,
        Kind::Absorb => RequestKind::Absorb,
    };
    let theta_target = if kind == RequestKind::Specular { -theta_in } else { theta_out };
    let req = CompileRequest { kind, theta_in: theta_in.to_radians(), theta_target: theta_target.to_radians() };
    let mut table = match read_table(table_path)? {
        Some(t) if t.model() == &model => t,
        Some(_) => bail!("lookup table model does not match --columns/--frequency"),
        None => LookupTable::new(model.clone()),
    };
    let cfg = compile(&model, &req, frequency, budget, seed)?;
    table.put(&req, &cfg)?;
    save_table(table_path, Some(&table))?;
    let out = json!({
        "kind": format!("{kind:?}").to_uppercase(),
        "theta_in_deg": theta_in,
        "theta_target_deg": theta_target,
        "columns": columns,
        "bits": cfg.bits,
        "quality": cfg.quality,
    });
    writeln!(io::stdout().lock(), "{}", serde_json::to_string_pretty(&out)?)?;
    Ok(())
}

fn cmd_render(scenario_path: &Path, report_path: &Path, out: &Path) -> Result<()> {
    let (scenario, hash) = read_scenario(scenario_path)?;
    let text = fs::read_to_string(report_path).with_context(|| format!("cannot read {}", report_path.display()))?;
    let report: RunReport = serde_json::from_str(&text).with_context(|| format!("invalid report {}", report_path.display()))?;
    if report.scenario_hash != hash {
        bail!("scenario hash mismatch: report was produced from {}, {} hashes to {}", report.scenario_hash, scenario_path.display(), hash);
    }
    write_atomic(out, render_svg(&scenario.plan, &report).as_bytes())
}

fn cmd_report(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let report: RunReport = serde_json::from_str(&text).with_context(|| format!("invalid report {}", path.display()))?;
    write!(io::stdout().lock(), "{}", pretty(&report))?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { scenario, flags } => {
            let r = run_scenario(&scenario, &flags, true)?;
            println!("wrote {} ({} objectives)", flags.out.join("report.json").display(), r.objectives.len());
        }
        Command::Route { scenario, flags } => {
            let r = run_scenario(&scenario, &flags, false)?;
            println!("wrote {} ({} objectives)", flags.out.join("report.json").display(), r.objectives.len());
        }
        Command::Compile(args) => cmd_compile(&args)?,
        Command::Render { scenario, report, out } => cmd_render(&scenario, &report, &out)?,
        Command::Report { report } => cmd_report(&report)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NoPath) => ExitCode::from(2),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
