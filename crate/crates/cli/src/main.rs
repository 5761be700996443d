//! `coiso`: subdivision, trees, fillings, sweeps and schedules from the
//! command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use output::CliError;

#[derive(Parser, Debug)]
#[command(name = "coiso", version, about = "Coisoperimetric fillings and degree schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// L-fold edgewise subdivision with a provenance sidecar.
    Subdivide(SubdivideArgs),
    /// Spanning, wrapping or grid trees.
    Tree(TreeArgs),
    /// Minimal ℓ∞ filling of a coboundary.
    Fill(FillArgs),
    /// Empirical filling ratios across subdivision levels.
    CipSweep(CipArgs),
    /// Degree schedule on the prism X × [0, T].
    Schedule(ScheduleArgs),
    /// Null-homotopy schedule for a degree-zero map of the 2-sphere.
    S2demo(S2Args),
    /// Homology, ∂∂ = 0 and tree checks on a complex.
    Verify(VerifyArgs),
    /// Filling and cofilling constants of a tiny complex.
    Duality(DualityArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SubdivideArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub l: u32,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    Spanning,
    Wrapping,
    Cube,
}

#[derive(Args, Debug, Serialize)]
pub struct TreeArgs {
    /// A complex, or a grid `{ "n": n, "r": r }` for `--kind cube`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "spanning")]
    pub kind: TreeKind,
    /// Also search for the exact gnarledness (tiny complexes only).
    #[arg(long)]
    pub exact: bool,
    /// Denominator bound for the exact search.
    #[arg(long, default_value_t = 4)]
    pub denom_bound: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RingArg {
    Int,
    Rat,
}

#[derive(Args, Debug, Serialize)]
pub struct FillArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub omega: PathBuf,
    #[arg(long, value_enum, default_value = "int")]
    pub ring: RingArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CipArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long = "L", value_delimiter = ',', required = true)]
    #[serde(rename = "L")]
    pub ls: Vec<u32>,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output; a `.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub omega: PathBuf,
    #[arg(long)]
    pub alpha: PathBuf,
    /// Defaults to `max(1, ‖α‖∞)`.
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct S2Args {
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub l: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Expected rational Betti numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub betti: Option<Vec<usize>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DualityArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("COISO_THREADS") else { return Ok(()) };
    let n: usize =
        v.parse().map_err(|_| CliError::input(format!("COISO_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot configure threads: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let config: Value = serde_json::to_value(&cli.command).expect("serializable");
    match &cli.command {
        Command::Subdivide(a) => commands::subdivide(a, &config),
        Command::Tree(a) => commands::tree(a, &config),
        Command::Fill(a) => commands::fill(a, &config),
        Command::CipSweep(a) => commands::cip_sweep(a, &config),
        Command::Schedule(a) => commands::schedule(a, &config),
        Command::S2demo(a) => commands::s2demo(a, &config),
        Command::Verify(a) => commands::verify(a, &config),
        Command::Duality(a) => commands::duality(a, &config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage { kind: "usage", message: e.to_string().trim_end().to_owned() };
            eprint!("{}", output::to_text(&err.to_json()));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", output::to_text(&e.to_json()));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
