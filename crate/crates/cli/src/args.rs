use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qhsd", version, about = "Exact checks for quantum cohomology of manifolds with small dual")]
pub struct Cli {
    /// Emit the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check applicable to a manifold file.
    Verify {
        #[arg(long)]
        file: PathBuf,
        /// Novikov truncation cap (default: QHSD_TRUNCATION_CAP or 16).
        #[arg(long)]
        cap: Option<i64>,
    },
    /// Quantum inverse of a class or element.
    Invert(InvertArgs),
    /// Built-in quantum cohomology rings.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Betti-table constraints.
    #[command(subcommand)]
    Betti(BettiCommand),
    /// Small-dual profile for dimension n and defect k.
    Defect {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        /// Do not assume b_2 = 1 (Chern data are then not derived).
        #[arg(long)]
        b2_not_1: bool,
    },
    /// Section classes contributing to the Seidel element.
    Seidel {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        d_min: Option<i64>,
    },
    /// Numerical Morse-index experiments on affine charts.
    #[command(subcommand)]
    Subcrit(SubcritCommand),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct RingSource {
    /// Manifold file with a ring section.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Catalog identifier, e.g. cp3 or p1xp1_paper.
    #[arg(long)]
    pub catalog: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ElementSource {
    /// Named class or basis element.
    #[arg(long)]
    pub class: Option<String>,
    /// Expression such as "2*alpha*T + beta*T + beta*T^2".
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    #[command(flatten)]
    pub ring: RingSource,
    #[command(flatten)]
    pub element: ElementSource,
    /// Novikov truncation cap (default: QHSD_TRUNCATION_CAP or 16).
    #[arg(long)]
    pub cap: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    List,
    Show { id: String },
    /// Write the ring presentation as JSON.
    Export {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct BettiSource {
    /// Manifold file, or a file holding a JSON array of ranks.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Comma-separated ranks b_0,...,b_top.
    #[arg(long)]
    pub ranks: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum BettiCommand {
    /// Ranks summed over degrees modulo 2C.
    Cyclic {
        #[command(flatten)]
        source: BettiSource,
        #[arg(long)]
        c: Option<usize>,
    },
    /// Cyclic periodicity with period 2C.
    Periodicity {
        #[command(flatten)]
        source: BettiSource,
        #[arg(long)]
        c: Option<usize>,
    },
    /// Betti numbers of the hyperplane section.
    Transfer {
        #[command(flatten)]
        source: BettiSource,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Rank-level hard Lefschetz window.
    Window {
        #[command(flatten)]
        source: BettiSource,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Betti numbers of a circle bundle from the Gysin sequence.
    Gysin {
        #[command(flatten)]
        source: BettiSource,
        /// Ranks of cup with the Euler class; default min(b_j, b_(j+2)).
        #[arg(long)]
        cup_ranks: Option<String>,
    },
    /// Rank constraints for a Lagrangian with vanishing Floer cohomology.
    Oh {
        #[command(flatten)]
        source: BettiSource,
        /// Minimal Maslov number; defaults to n + k.
        #[arg(long)]
        maslov: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModelSource {
    /// Chart model JSON.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Built-in model: segre, line or parabola.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Manifold file with a chart section.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SubcritCommand {
    /// Multistart search for critical points of the distance function.
    Run {
        #[command(flatten)]
        source: ModelSource,
        /// Newton starts per seed.
        #[arg(long, default_value_t = 50)]
        starts: usize,
        /// Seed for w0 and the starts; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
        /// Number of consecutive seeds, starting at --seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// Redraws of w0 allowed while a critical point is degenerate.
        #[arg(long, default_value_t = 10)]
        max_resamples: usize,
    },
}
