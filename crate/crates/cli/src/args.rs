use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "avclab", version, about = "Exact oracles for learning against evasion adversaries")]
pub struct Cli {
    /// Print `key: value` lines instead of compact JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Worker threads for parallel enumeration (0 = all cores).
    #[arg(long, global = true, env = "AVCLAB_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

/// The perturbation body. Exactly one of the shape options is needed.
#[derive(Args, Debug, Clone, Default)]
pub struct BodyArgs {
    /// Constraint-set JSON file.
    #[arg(long, value_name = "FILE")]
    pub body: Option<PathBuf>,
    /// ℓ∞ ball of this radius.
    #[arg(long, value_name = "EPS")]
    pub linf: Option<String>,
    /// ℓ1 ball of this radius.
    #[arg(long, value_name = "EPS")]
    pub l1: Option<String>,
    /// ℓ2 ball of this radius.
    #[arg(long, value_name = "EPS")]
    pub l2: Option<String>,
    /// No perturbation at all.
    #[arg(long)]
    pub identity: bool,
    /// Lineality basis added to a shape option, e.g. `0,0,1;1,0,0`.
    #[arg(long, value_name = "VECTORS")]
    pub lineality: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassKind {
    Halfspace,
    Pointind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Witness,
    PointIndicator,
}

pub fn parse_construction(s: &str) -> Result<Construction, String> {
    match s {
        "4" | "witness" => Ok(Construction::Witness),
        "5" | "point-indicator" | "pointind" => Ok(Construction::PointIndicator),
        other => Err(format!("unknown construction {other:?}; use witness (4) or point-indicator (5)")),
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dual seminorm (and optionally the seminorm and support vertex).
    Dualnorm {
        #[arg(long)]
        d: Option<usize>,
        /// Comma-separated rational vector.
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Also report the seminorm of this vector.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Corrupted labels of a halfspace at points, and its adversarial risk.
    CorruptEval {
        /// Halfspace JSON file.
        #[arg(long, value_name = "FILE", conflicts_with = "a")]
        halfspace: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true, requires = "b")]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        /// Dataset JSON file; risk is reported when given.
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        /// A single point instead of a dataset.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "data")]
        x: Option<String>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Loss-pattern set and shattering check.
    Shatter {
        #[arg(long, value_enum, default_value = "halfspace")]
        class: ClassKind,
        #[arg(long)]
        d: Option<usize>,
        /// Dataset JSON file (halfspace class).
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        /// Labels for the point-indicator construction, e.g. `-1,-1`.
        #[arg(long, allow_hyphen_values = true)]
        labels: Option<String>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Adversarial VC-dimension: formula value, witness check, counterexample search.
    Avc {
        #[arg(long)]
        d: usize,
        /// Random datasets of size value + 1 to certify as not shattered.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Label vectors checked on the witness (all of them when 2^k is smaller).
        #[arg(long, default_value_t = 4)]
        label_vectors: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Unachievable-pattern certificate for a dataset, checked by the LP oracle.
    Certify {
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Adversarial empirical risk minimization.
    Aerm {
        /// Dataset JSON file (halfspaces).
        #[arg(long, value_name = "FILE", conflicts_with = "finite")]
        data: Option<PathBuf>,
        /// JSON file with `class`, `relation` and `data` (finite class).
        #[arg(long, value_name = "FILE")]
        finite: Option<PathBuf>,
        #[arg(long, default_value_t = avclab::aerm::DEFAULT_MAX_N)]
        max_n: usize,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Empirical Rademacher complexity of a loss-vector set.
    Rademacher {
        /// JSON array of 0/1 vectors.
        #[arg(long, value_name = "FILE", conflicts_with = "data")]
        vectors: Option<PathBuf>,
        /// Dataset whose halfspace loss-pattern set is used.
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long, default_value_t = avclab::risk::RADEMACHER_CAP)]
        cap: usize,
        /// Monte Carlo samples when n is above the cap.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Sample-complexity bound, or the generalization bound when --rad is given.
    Bound {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        delta: String,
        #[arg(long = "C", default_value = "1")]
        c: String,
        /// Rademacher complexity for the generalization bound.
        #[arg(long)]
        rad: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Emit one of the explicit constructions as dataset files.
    Construct {
        /// `witness` (alias 4) or `point-indicator` (alias 5).
        #[arg(long, alias = "paper-sec", value_parser = parse_construction)]
        construction: Construction,
        #[arg(long)]
        d: usize,
        /// Labels for the emitted dataset.
        #[arg(long, allow_hyphen_values = true)]
        labels: Option<String>,
        /// Directory for dataset.json (and class.json, relation.json).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        #[command(flatten)]
        body: BodyArgs,
    },
    /// Run a learning-curve or budget-sweep experiment from a JSON config.
    Experiment {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// JSON-lines record output; records are embedded in the result otherwise.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// CSV summary output.
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Record wall times (makes outputs differ between runs).
        #[arg(long)]
        timing: bool,
    },
}
