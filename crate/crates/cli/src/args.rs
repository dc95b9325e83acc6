use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "tsallis-sep",
    version,
    about = "Entropic separability thresholds of N-qudit Werner-Popescu states"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write CSV here (plus a `.manifest.json` side file) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with `dense_cap`, `x_tol`, `max_iterations`, `jobs`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for independent cells.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub dense_cap: Option<u64>,
    #[arg(long, global = true)]
    pub x_tol: Option<f64>,
    #[arg(long, global = true)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Cstre,
    Ar,
    Vn,
    Ppt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConditioningArg {
    /// Condition on parties 2..N.
    B,
    /// Condition on party 1.
    A,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct Family {
    #[arg(long = "d", value_delimiter = ',', num_args = 1..)]
    pub d: Option<Vec<u32>>,
    #[arg(long = "N", value_delimiter = ',', num_args = 1..)]
    pub n: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct Criterion {
    #[arg(long, value_enum, default_value_t = CriterionArg::Cstre)]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t = ConditioningArg::B)]
    pub conditioning: ConditioningArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonzero eigenvalues of the sandwiched operator with multiplicities.
    Table1 {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 0.3)]
        x: f64,
    },
    /// `q → ∞` thresholds next to `1/(1+d^(N-1))`.
    Table2 {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_enum, default_value_t = CriterionArg::Cstre)]
        criterion: CriterionArg,
    },
    /// CSTRE and AR crossings at fixed q.
    Table3 {
        #[command(flatten)]
        family: Family,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
    },
    /// Implicit threshold curve x*(q).
    Curve {
        #[arg(long = "d")]
        d: u32,
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        criterion: Criterion,
        #[arg(long, default_value_t = 1.0)]
        q_min: f64,
        #[arg(long, default_value_t = 1e3)]
        q_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Scale::Log)]
        scale: Scale,
    },
    /// Criterion value along x at fixed q.
    Scan {
        #[arg(long = "d")]
        d: u32,
        #[arg(long = "N")]
        n: u32,
        #[command(flatten)]
        criterion: Criterion,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        #[arg(long, default_value_t = 1.0)]
        x_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Run the self-check report; exits 1 on any failure.
    Verify {
        /// Largest `d^N` used by the dense spectrum check.
        #[arg(long, default_value_t = 256)]
        dense_limit: u64,
    },
}
