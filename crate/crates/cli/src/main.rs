//! `dpcolor`: command-line front end. Machine-readable output goes to stdout
//! (key=value lines or CSV); diagnostics go to stderr.
//!
//! Exit codes: 0 success or verified result, 1 reported failure (round caps,
//! no coloring, violated axioms, failed gated verdicts), 2 usage or input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Master seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Debug, Parser)]
#[command(name = "dpcolor", version, about = "DP-coloring (correspondence coloring) toolkit")]
pub struct Cli {
    /// Worker threads for the experiment harness. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph or a random cover.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a cover against the axioms C1-C4 and print every violation.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Run the two-phase randomized colorer.
    Color(ColorArgs),
    /// Exhaustive solvers for small instances.
    #[command(subcommand)]
    Exact(ExactCommand),
    /// Draw independent subsets of the neighborhood lists of a vertex.
    Sample(SampleArgs),
    /// Monte-Carlo and exact experiments; CSV on stdout unless --out or --json.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Cycle,
    Complete,
    Bipartite,
    TriangleFree,
    KrFree,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Print a graph in the edge-list format.
    Graph {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Vertex count (first part size for bipartite graphs).
        #[arg(long)]
        n: usize,
        /// Second part size for bipartite graphs; defaults to n.
        #[arg(long)]
        m: Option<usize>,
        /// Edge probability for bipartite graphs.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Expected degree for the random clique-free families.
        #[arg(long, default_value_t = 3.0)]
        d: f64,
        /// Forbidden clique size for kr-free.
        #[arg(long, default_value_t = 4)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Print a random k-fold cover of a graph in the cover format.
    Cover {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Keep each matched pair with this probability; perfect matchings by default.
        #[arg(long)]
        density: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColorMode {
    /// Triangle-free pipeline.
    Tf,
    /// K_r-free pipeline.
    Kr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CapArg {
    Eighth,
    Half,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Cover to color; a random perfect k-fold cover is generated otherwise.
    #[arg(long)]
    pub cover: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: ColorMode,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 4)]
    pub r: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub ell: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Phase-1 round cap; defaults to 100n.
    #[arg(long)]
    pub max_rounds: Option<u64>,
    /// Phase-2 round cap; defaults to 100n.
    #[arg(long)]
    pub completion_rounds: Option<u64>,
    /// Residual cross-degree cap of the triangle-free pipeline.
    #[arg(long, value_enum, default_value_t = CapArg::Eighth)]
    pub cap: CapArg,
    /// Layer threshold of the K_r-free sampler; defaults to ⌈Δ^(1/20)⌉.
    #[arg(long)]
    pub threshold: Option<u128>,
    /// Also print the coloring as `u -> slot` lines.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExactCommand {
    /// Compute χ_DP; above --kmax, print an uncolorable witness cover.
    ChiDp {
        graph: PathBuf,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// Search-node budget.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Find a coloring of a cover by backtracking.
    FindColoring {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Count independent sets and compute the median independent-set size.
    Ind { graph: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleMode {
    Enum,
    Star,
    Layered,
    Glauber,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub mode: SampleMode,
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub cover: PathBuf,
    #[arg(long)]
    pub focus: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Layer threshold for the layered sampler; defaults to ⌈Δ^(1/20)⌉.
    #[arg(long)]
    pub threshold: Option<u128>,
    /// Glauber steps per trial; defaults to 50 per list slot in N(u).
    #[arg(long)]
    pub steps: Option<u64>,
    /// Print a CSV frequency table instead of one line per trial.
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Survival,
    Negcorr,
    Chernoff,
    Shearer,
    Factorial,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseKind {
    /// Independent neighborhood.
    Star,
    /// Edges and cross edges inside the neighborhood.
    Layered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamilyArg {
    TriangleFree,
    Bipartite,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Emit the report as JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
    /// Instance graph; with --cover and --focus replaces the generated case.
    #[arg(long, requires_all = ["cover", "focus"])]
    pub graph: Option<PathBuf>,
    #[arg(long, requires_all = ["graph", "focus"])]
    pub cover: Option<PathBuf>,
    #[arg(long, requires_all = ["graph", "cover"])]
    pub focus: Option<usize>,
    /// Generated case kind when no instance is given.
    #[arg(long, value_enum, default_value_t = CaseKind::Star)]
    pub case: CaseKind,
    /// Seed of the generated case; defaults to --seed.
    #[arg(long)]
    pub case_seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// ℓ for survival and factorial; defaults to the focus list size.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Chernoff deviations δ in (0, 1).
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
    pub deltas: Vec<f64>,
    /// Layer threshold for factorial.
    #[arg(long, default_value_t = 1)]
    pub threshold: u128,
    /// Clique size for shearer.
    #[arg(long, default_value_t = 4)]
    pub r: usize,
    /// Largest graph for shearer.
    #[arg(long, default_value_t = 18)]
    pub n_max: usize,
    /// Sample count for shearer.
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = SweepFamilyArg::TriangleFree)]
    pub family: SweepFamilyArg,
    /// Vertex count for sweep.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Target maximum degrees for sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16])]
    pub sweep_deltas: Vec<usize>,
    /// Multipliers m in k = ⌈mΔ/ln Δ⌉ for sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0])]
    pub multipliers: Vec<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Phase-1 round cap for sweep runs.
    #[arg(long)]
    pub max_rounds: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
