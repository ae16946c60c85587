use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxforge_cli::commands::{cmd_cox, cmd_graph, cmd_invariants, cmd_reduce};
use coxforge_cli::config::{parse_case, parse_degree};
use coxforge_cli::verify::{default_report_cases, run_report_text, run_verify};
use coxforge_cli::{CliError, CliResult, CommandOutput, RunConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "coxforge", version, about = "Exact Cox ring computations for du Val singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON config file (caps, grid, seed).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap overrides, e.g. `truncation=24,hard=40,steps=10000,base-k=3,base-a=3`.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Include per-section wall-clock timings (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct GridArgs {
    /// Degree box, `LO..HI` or `R` for `-R..R`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Maximum number of cells; larger boxes are sampled.
    #[arg(long)]
    samples: Option<usize>,
    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Treat a cokernel that does not stabilize within the caps as an error.
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Dual graph, intersection matrix, extended degree matrix.
    Graph {
        #[arg(long)]
        case: String,
    },
    /// Degree-zero generators and relations against the reference table.
    Invariants {
        #[arg(long)]
        case: String,
        /// Relation search cap (generator-degree bound).
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Candidate relation and pull-back factorizations.
    Cox {
        #[arg(long)]
        case: String,
    },
    /// Reduce one degree to a basic one, auditing every step.
    Reduce {
        #[arg(long)]
        case: String,
        /// Comma list (`0,-1,0,0`) or a unit multiple (`2e7`).
        #[arg(long, allow_hyphen_values = true)]
        degree: String,
    },
    /// Full verification of one case over a degree grid.
    Verify {
        #[arg(long)]
        case: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// `verify` over several cases (default: A1-A8, D4-D8, E6-E8, custom:2,2,3).
    Report {
        /// Repeatable.
        #[arg(long = "case")]
        cases: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
}

fn config(g: &Global, grid: Option<&GridArgs>) -> CliResult<RunConfig> {
    let mut c = RunConfig::load(g.config.as_deref())?;
    if let Some(caps) = &g.caps {
        c.apply_caps(caps)?;
    }
    if let Some(a) = grid {
        if let Some(s) = &a.grid {
            c.apply_grid(s)?;
        }
        if let Some(n) = a.samples {
            c.max_cells = n;
        }
        if let Some(s) = a.seed {
            c.seed = s;
        }
        c.strict |= a.strict;
    }
    Ok(c)
}

/// Output plus process exit code.
fn run(cli: &Cli) -> CliResult<(CommandOutput, i32)> {
    let g = &cli.global;
    let plain = |o: CommandOutput| {
        let code = if o.ok { 0 } else { 1 };
        (o, code)
    };
    Ok(match &cli.command {
        Command::Graph { case } => plain(cmd_graph(&parse_case(case)?)?),
        Command::Invariants { case, cap } => plain(cmd_invariants(&parse_case(case)?, *cap)?),
        Command::Cox { case } => plain(cmd_cox(&parse_case(case)?)?),
        Command::Reduce { case, degree } => {
            let c = parse_case(case)?;
            let d = parse_degree(degree, c.build()?.len())?;
            let (o, terminated) = cmd_reduce(&c, &d, &config(g, None)?)?;
            let code = if !terminated { 3 } else if o.ok { 0 } else { 1 };
            (o, code)
        }
        Command::Verify { case, grid } => {
            let cfg = config(g, Some(grid))?;
            let r = run_verify(&parse_case(case)?, &cfg, g.timings)?;
            let code = r.status.exit_code();
            (CommandOutput { text: run_report_text(&r), ok: r.ok, json: serde_json::to_value(&r)? }, code)
        }
        Command::Report { cases, grid } => {
            let cfg = config(g, Some(grid))?;
            let cases = if cases.is_empty() {
                default_report_cases()
            } else {
                cases.iter().map(|s| parse_case(s)).collect::<CliResult<_>>()?
            };
            let mut reports = Vec::new();
            for c in &cases {
                reports.push(run_verify(c, &cfg, g.timings)?);
            }
            let worst = reports.iter().map(|r| r.status.exit_code()).max().unwrap_or(0);
            let ok = worst == 0;
            let text: String = reports.iter().map(run_report_text).collect();
            let summary: Vec<_> = reports
                .iter()
                .map(|r| json!({ "case": r.case, "status": r.status, "ok": r.ok }))
                .collect();
            let json = json!({ "ok": ok, "summary": summary, "reports": reports });
            (CommandOutput { json, text, ok }, worst)
        }
    })
}

fn emit(out: &Option<PathBuf>, body: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(body.as_bytes())
                .and_then(|()| so.flush())
                .map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(o, code)| {
        let body = match cli.global.format {
            Format::Json => serde_json::to_string_pretty(&o.json)? + "\n",
            Format::Text => o.text,
        };
        emit(&cli.global.out, &body)?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(u8::try_from(code).unwrap_or(1)),
        Err(e) => {
            eprintln!("coxforge: {e}");
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
        }
    }
}
