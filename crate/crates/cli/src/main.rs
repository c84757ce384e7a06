use clap::{Args, Parser, Subcommand};
use keyregion::binary::{reference, BinaryExampleParams};
use keyregion::frontier::{Coordinate, Objective};
use keyregion::prob::Mode;
use keyregion::{Execution, SearchConfig};
use keyregion_cli::commands::{self, FrontierOptions};
use keyregion_cli::config::ModelConfig;
use keyregion_cli::format::parse_fraction;
use keyregion_cli::{CliError, CliResult};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Rate regions of key agreement with action-dependent side information.
#[derive(Parser, Debug)]
#[command(name = "keyregion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one auxiliary choice: prints (R_k, R_w, Delta, C).
    Eval { config: PathBuf, aux: PathBuf },
    /// Trace the Pareto frontier of a region as CSV.
    Frontier(FrontierArgs),
    /// Check the binary example against its reference values.
    VerifyExample(ExampleArgs),
    /// Key-leakage trade-off of the binary example as CSV.
    Tradeoff(ExampleArgs),
    /// Print a model file in explicit, normalized form.
    Config { config: PathBuf },
}

#[derive(Args, Debug)]
struct FrontierArgs {
    config: PathBuf,
    /// Region (gs, cs, hgs, hcs); defaults to the file's mode.
    #[arg(long, value_parser = parse_mode)]
    region: Option<Mode>,
    /// Simplex grid step, `1/n`.
    #[arg(long, default_value = "1/16", value_parser = parse_fraction)]
    step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_fraction)]
    cost_cap: Option<f64>,
    #[arg(long)]
    card_u: Option<usize>,
    #[arg(long)]
    card_v: Option<usize>,
    /// Use only the first k actions.
    #[arg(long)]
    card_a: Option<usize>,
    /// Default |U|, |V| to their bounds instead of at most 4.
    #[arg(long)]
    allow_full_cardinality: bool,
    /// Drop corners dominated by time-sharing.
    #[arg(long)]
    hull: bool,
    #[arg(long, default_value_t = SearchConfig::default().restarts)]
    restarts: usize,
    #[arg(long, default_value_t = SearchConfig::default().refinement_rounds)]
    rounds: usize,
    /// Coordinate written to the x_param column (leakage, storage, cost).
    #[arg(long, default_value = "leakage", value_parser = parse_coordinate)]
    x_param: Coordinate,
    /// Maximize R_k at each of these comma-separated levels of --x-param.
    #[arg(long, value_delimiter = ',', value_parser = parse_fraction)]
    sweep: Option<Vec<f64>>,
    /// Enumerate the full grid (small instances only).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    sequential: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p0: Option<f64>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    /// Sweep spacing in x_bar.
    #[arg(long, default_value_t = reference::SWEEP_RESOLUTION, value_parser = parse_fraction)]
    resolution: f64,
    #[arg(long)]
    sequential: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ExampleArgs {
    fn params(&self) -> BinaryExampleParams {
        let r = BinaryExampleParams::reference();
        BinaryExampleParams {
            alpha: self.alpha.unwrap_or(r.alpha),
            p0: self.p0.unwrap_or(r.p0),
            p1: self.p1.unwrap_or(r.p1),
            p: self.p.unwrap_or(r.p),
            gamma0: self.gamma0.unwrap_or(r.gamma0),
            gamma1: self.gamma1.unwrap_or(r.gamma1),
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: keyregion::Error| e.to_string())
}

fn parse_coordinate(s: &str) -> Result<Coordinate, String> {
    s.parse().map_err(|e: keyregion::Error| e.to_string())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn emit(text: &str, output: Option<&Path>) -> CliResult<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Eval { config, aux } => emit(&commands::eval(&config, &aux)?, None),
        Command::Frontier(a) => {
            let model = commands::load_model(&a.config, a.region)?;
            let objective = match a.sweep {
                Some(levels) => Objective::Sweep { coordinate: a.x_param, levels },
                None => Objective::default(),
            };
            let opts = FrontierOptions {
                search: SearchConfig {
                    card_a_use: a.card_a,
                    card_u: a.card_u,
                    card_v: a.card_v,
                    allow_full_cardinality: a.allow_full_cardinality,
                    step: a.step,
                    refinement_rounds: a.rounds,
                    restarts: a.restarts,
                    seed: a.seed,
                    cost_cap: a.cost_cap,
                    objective,
                    hull: a.hull,
                    execution: execution(a.sequential),
                },
                x_param: a.x_param,
                oracle: a.oracle,
            };
            let (csv, notices) = commands::frontier(&model, &opts)?;
            for n in notices {
                eprintln!("notice: {n}");
            }
            emit(&csv, a.output.as_deref())
        }
        Command::VerifyExample(a) => {
            match commands::verify_example(&a.params(), a.resolution, execution(a.sequential)) {
                Ok(text) => emit(&text, a.output.as_deref()),
                Err(CliError::Verification(text)) => {
                    emit(&text, a.output.as_deref())?;
                    Err(CliError::Verification("one or more checks failed".into()))
                }
                Err(e) => Err(e),
            }
        }
        Command::Tradeoff(a) => {
            let csv = commands::tradeoff(&a.params(), a.resolution, execution(a.sequential))?;
            emit(&csv, a.output.as_deref())
        }
        Command::Config { config } => {
            let model = ModelConfig::load(&config)?.build()?;
            emit(&ModelConfig::from_model(&model).to_toml(), None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
