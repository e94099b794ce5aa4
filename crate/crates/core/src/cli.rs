//! Command-line front end: `bellcheck run <scenario> [options]`.
//!
//! Exit codes: 0 when every verdict came out as predicted, 1 when some did
//! not, 2 for usage errors and invalid parameters, 3 when the output file
//! cannot be written.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::error::Result;
use crate::models::UpdateRule;
use crate::report::ScenarioOutput;
use crate::scenarios::{
    run_bell_toy, run_chsh, run_constraint_check, run_epr_scan, run_sequential,
    run_three_particle_search, search_update_rules, AngleGrid, MeterBMode, SequentialModel,
};

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID_STEP: f64 = 0.01;
pub const SEED_ENV: &str = "BELLCHECK_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    EprScan,
    Chsh,
    Sequential,
    ThreeParticle,
    UpdateRuleSearch,
    ConstraintCheck,
    BellToy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Scenario-specific `--mode` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    MeterB(MeterBMode),
    Sequential(SequentialModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub samples: u64,
    pub seed: u64,
    pub format: Format,
    pub angles: AngleGrid,
    pub mode: Option<Mode>,
    /// Flip probability applied after every measurement of the Clifford
    /// sequential model.
    pub flip_prob: f64,
    pub grid_step: f64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "bellcheck",
    version,
    about = "Compare Clifford-algebra spin models with quantum mechanics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and print its report.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    scenario: Scenario,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    /// Run seed; defaults to $BELLCHECK_SEED, then 42.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Angle grid in radians, START:STOP:STEP.
    #[arg(long, value_parser = parse_angles)]
    angles: Option<AngleGrid>,
    /// epr-scan, constraint-check: christian-eq16 | anticorrelated-eq2;
    /// sequential: christian | bell-static | bell-hemisphere.
    #[arg(long)]
    mode: Option<String>,
    /// Flip probability of the Clifford sequential model's update rule.
    #[arg(long, default_value_t = 0.0)]
    flip_prob: f64,
    /// Probability grid step of update-rule-search.
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    grid_step: f64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_angles(s: &str) -> std::result::Result<AngleGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err("expected START:STOP:STEP".into());
    };
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    let grid = AngleGrid {
        start: num(start)?,
        stop: num(stop)?,
        step: num(step)?,
    };
    grid.points().map_err(|e| e.to_string())?;
    Ok(grid)
}

fn parse_mode(scenario: Scenario, mode: &str) -> Option<Mode> {
    match (scenario, mode) {
        (Scenario::EprScan | Scenario::ConstraintCheck, "christian-eq16") => {
            Some(Mode::MeterB(MeterBMode::ChristianEq16))
        }
        (Scenario::EprScan | Scenario::ConstraintCheck, "anticorrelated-eq2") => {
            Some(Mode::MeterB(MeterBMode::AnticorrelatedEq2))
        }
        (Scenario::Sequential, "christian") => Some(Mode::Sequential(SequentialModel::Christian)),
        (Scenario::Sequential, "bell-static") => {
            Some(Mode::Sequential(SequentialModel::BellStatic))
        }
        (Scenario::Sequential, "bell-hemisphere") => {
            Some(Mode::Sequential(SequentialModel::BellHemisphere))
        }
        _ => None,
    }
}

/// Parses arguments (without the program name), reading the default seed
/// from `BELLCHECK_SEED`.
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    parse_args_with_env(argv, env_seed.as_deref())
}

/// [`parse_args`] with an explicit value for the seed variable.
pub fn parse_args_with_env<I, T>(
    argv: I,
    env_seed: Option<&str>,
) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = std::iter::once(OsString::from("bellcheck")).chain(argv.into_iter().map(Into::into));
    let Command::Run(run) = Cli::try_parse_from(args)?.command;
    let usage = |msg: String| Cli::command().error(ErrorKind::InvalidValue, msg);

    let seed = match (run.seed, env_seed) {
        (Some(s), _) => s,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("invalid {SEED_ENV} value {v:?}")))?,
        (None, None) => DEFAULT_SEED,
    };
    let mode = match &run.mode {
        Some(m) => Some(parse_mode(run.scenario, m).ok_or_else(|| {
            usage(format!(
                "invalid value {m:?} for '--mode' with this scenario"
            ))
        })?),
        None => None,
    };
    if !(0.0..=1.0).contains(&run.flip_prob) {
        return Err(usage(format!(
            "invalid value {} for '--flip-prob': not in [0, 1]",
            run.flip_prob
        )));
    }
    Ok(RunConfig {
        scenario: run.scenario,
        samples: run.samples,
        seed,
        format: run.format,
        angles: run.angles.unwrap_or_else(AngleGrid::default_grid),
        mode,
        flip_prob: run.flip_prob,
        grid_step: run.grid_step,
        out: run.out,
    })
}

/// Runs the configured scenario.
pub fn run_scenario(config: &RunConfig) -> Result<ScenarioOutput> {
    let meter_b = |default| match config.mode {
        Some(Mode::MeterB(m)) => m,
        _ => default,
    };
    match config.scenario {
        Scenario::EprScan => {
            run_epr_scan(&config.angles.points()?, meter_b(MeterBMode::ChristianEq16))
        }
        Scenario::Chsh => run_chsh(config.samples, config.seed),
        Scenario::Sequential => {
            let model = match config.mode {
                Some(Mode::Sequential(m)) => m,
                _ => SequentialModel::Christian,
            };
            let rule = (model == SequentialModel::Christian)
                .then(|| UpdateRule::uniform(config.flip_prob))
                .transpose()?;
            run_sequential(model, rule, config.samples, config.seed)
        }
        Scenario::ThreeParticle => run_three_particle_search(),
        Scenario::UpdateRuleSearch => search_update_rules(config.grid_step),
        Scenario::ConstraintCheck => run_constraint_check(
            &crate::scenarios::default_constraint_pairs(),
            meter_b(MeterBMode::AnticorrelatedEq2),
        ),
        Scenario::BellToy => run_bell_toy(config.samples, config.seed),
    }
}

/// Serialized report in the requested format.
pub fn render(output: &ScenarioOutput, format: Format) -> String {
    match format {
        Format::Table => output.to_table_text(),
        Format::Json => output.report.to_json(),
        Format::Csv => output.table.to_csv(),
    }
}

/// Serialized report plus the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitted {
    /// Text for standard output; empty when written to `--out`.
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

/// Renders `output`, writes it to `config.out` when set, and derives the
/// exit code from the verdicts.
pub fn emit_report(output: &ScenarioOutput, config: &RunConfig) -> Emitted {
    let text = render(output, config.format);
    let exit_code = if output.report.all_as_predicted() {
        EXIT_OK
    } else {
        EXIT_UNEXPECTED
    };
    match &config.out {
        None => Emitted {
            stdout: text,
            stderr: String::new(),
            exit_code,
        },
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Emitted {
                stdout: String::new(),
                stderr: String::new(),
                exit_code,
            },
            Err(e) => Emitted {
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
                exit_code: EXIT_OUTPUT,
            },
        },
    }
}

/// Full command: parse, run, emit. Usage errors print clap's message.
pub fn main_with_args<I, T>(argv: I, env_seed: Option<&str>) -> Emitted
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args_with_env(argv, env_seed) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let mut text = e.render().to_string();
            if e.use_stderr() && !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return if e.use_stderr() {
                Emitted {
                    stdout: String::new(),
                    stderr: text,
                    exit_code: code,
                }
            } else {
                Emitted {
                    stdout: text,
                    stderr: String::new(),
                    exit_code: code,
                }
            };
        }
    };
    match run_scenario(&config) {
        Ok(output) => emit_report(&output, &config),
        Err(e) => Emitted {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            exit_code: EXIT_USAGE,
        },
    }
}
