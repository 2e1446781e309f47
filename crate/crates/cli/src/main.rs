use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bachelier_cli::config::{parse_rn_mode, CommandConfig, ConfigFile, RunConfig};
use bachelier_cli::{run_command, CliError, Report, Result};
use bachelier_core::binomial::RnMode;
use clap::Parser;

#[derive(Debug, Parser)]
#[command(name = "bachelier", version, about = "Bachelier-market pricing, simulation and ESG toolkit")]
struct Cli {
    /// Master seed for all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo paths.
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Time steps (tree depth, path resolution).
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Risk-neutral probability convention: as-written or martingale.
    #[arg(long, global = true, value_parser = parse_rn_mode)]
    rn_mode: Option<RnMode>,
    /// Also print an aligned text table where the command has one.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Option<CommandConfig>,
}

fn resolve(cli: &Cli) -> Result<RunConfig> {
    let file = match &cli.config {
        Some(p) => ConfigFile::read(p)?,
        None => ConfigFile::default(),
    };
    let command = cli
        .command
        .clone()
        .or(file.command)
        .ok_or_else(|| CliError::Config("no command given (use a subcommand or a config file)".into()))?;
    let mut cfg = RunConfig::new(command);
    cfg.seed = cli.seed.or(file.seed).unwrap_or(cfg.seed);
    cfg.paths = cli.paths.or(file.paths).unwrap_or(cfg.paths);
    cfg.steps = cli.steps.or(file.steps).unwrap_or(cfg.steps);
    cfg.rn_mode = cli.rn_mode.or(file.rn_mode).unwrap_or(cfg.rn_mode);
    cfg.output_path = cli.out.clone().or(file.output_path);
    Ok(cfg)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn emit(report: &Report, table: bool) -> Result<()> {
    let json = report.to_json();
    let mut stdout = std::io::stdout().lock();
    let mut stdout_used = false;
    if let Some(csv) = &report.csv {
        let dest = match &report.inputs.command {
            CommandConfig::Simulate(a) => a.csv.clone(),
            _ => None,
        };
        match dest {
            Some(p) => write_file(&p, csv)?,
            None => {
                let _ = stdout.write_all(csv.as_bytes());
                stdout_used = true;
            }
        }
    }
    match &report.inputs.output_path {
        Some(p) => write_file(p, &json)?,
        None if !stdout_used => {
            let _ = stdout.write_all(json.as_bytes());
        }
        None => {}
    }
    if table {
        if let Some(t) = &report.table {
            let _ = stdout.write_all(t.as_bytes());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.render().to_string();
            let body = serde_json::json!({ "error": { "kind": "usage", "message": message.trim() } });
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    let result = resolve(&cli).and_then(|cfg| {
        let report = run_command(&cfg)?;
        emit(&report, cli.table)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.report() });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
