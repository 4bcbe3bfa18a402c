use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "diophant",
    version,
    about = "Best-approximation periods, resonance and Diophantine exponents in exact arithmetic"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Global {
    /// Optional `key = value` file with precision and guard settings.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Largest enclosure precision in bits (default from DIOPHANT_PRECISION_CAP, else 16384).
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_cap: Option<u32>,

    /// Starting enclosure precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_start: Option<u32>,

    /// Largest enumeration box (k-vectors) accepted.
    #[arg(long, global = true, value_name = "N")]
    pub box_guard: Option<u128>,

    /// Largest census grid accepted.
    #[arg(long, global = true, value_name = "N")]
    pub grid_guard: Option<u128>,

    /// Print decimal midpoints with D digits instead of exact values.
    #[arg(long, global = true, value_name = "D")]
    pub decimals: Option<u32>,

    /// Run enumerations on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,

    /// Write a run manifest to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Simultaneous,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Declare {
    /// No declaration: irrational components are rejected where resonance matters.
    None,
    /// No nonzero integer vector resonates with ω.
    NonResonant,
    /// The irrational components form a non-resonant block.
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Growth,
    Sim,
    Lin,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best-approximation period sequence.
    Periods {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        max_period: Option<u64>,
        #[arg(long)]
        max_index: Option<usize>,
        /// Use the orbit definition on the torus instead of the record scan.
        #[arg(long)]
        dynamical: bool,
        /// Report the two-sided bound on each consecutive pair.
        #[arg(long)]
        sandwich: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Dirichlet witness for a threshold Q.
    Dirichlet {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value = "simultaneous")]
        mode: Mode,
    },
    /// Resonance module of a rational (or declared mixed) vector.
    Resonance {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        normal_form: bool,
        #[arg(long)]
        e_value: bool,
        #[arg(long, value_enum, default_value = "none")]
        declare: Declare,
    },
    /// Smith normal form of an integer matrix given as "a,b;c,d".
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Count w in [0,T-1]^n with e(w/T) <= A.
    Census {
        #[arg(long)]
        t: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        threshold: u64,
        /// Count via the union of hyperplane sections.
        #[arg(long)]
        dual: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Census at A = floor(T^((1-tau)/(n+1))) for each T.
    CensusTrend {
        #[arg(long, value_delimiter = ',')]
        t_list: Vec<u64>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tau: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Exponent maps, empirical exponents, proof traces and resonant witnesses.
    Transfer {
        #[command(subcommand)]
        op: TransferOp,
    },
    /// Re-run the command stored in a manifest.
    Replay {
        file: PathBuf,
        /// Exit with status 1 unless the output digest matches the manifest.
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum TransferOp {
    /// tau/((n-1)tau+n) and n*tau.
    Map {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        n: usize,
    },
    /// n*tau/(n-(n-1)(1+tau)).
    Mu {
        #[arg(long)]
        tau: String,
        #[arg(long)]
        n: usize,
    },
    /// Empirical exponent and constant from a finite scan.
    Estimate {
        #[arg(long)]
        omega: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Largest period (growth, sim) or largest |k| (lin).
        #[arg(long)]
        depth: u64,
    },
    /// Check the linear-form lower bound chain for one k, or every k in a box.
    /// The vector is taken as declared non-resonant.
    Trace {
        #[arg(long)]
        omega: String,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "radius")]
        k: Option<String>,
        /// Trace every nonzero k with |k| <= R.
        #[arg(long, conflicts_with = "k")]
        radius: Option<i64>,
        #[arg(long)]
        max_period: u64,
        /// Growth exponent to use instead of the fitted one.
        #[arg(long)]
        tau: Option<String>,
    },
    /// Witnesses T' = pT for a split vector "w'_1, ... | w/p".
    ResonantWitnesses {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        count: usize,
        /// Unimodular A with omega = A^-1 (w', w/p), as "a,b;c,d".
        #[arg(long)]
        matrix: Option<String>,
    },
}
