use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Subsemigroups of N x N, N^k and N x S: construction, classification and
/// verification.
#[derive(Debug, Parser)]
#[command(name = "subdirekt", version)]
pub struct Cli {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Countability verdicts for subsemigroups and subdirect products of N x S.
    Classify {
        /// Cayley table file.
        table: PathBuf,
    },
    /// Strongly 3-separating integer sets.
    #[command(subcommand)]
    Sepset(SepsetCommand),
    /// Subsemigroups S_M = <(1, m) : m in M> of N x N.
    #[command(subcommand)]
    Sm(SmCommand),
    /// Non-isomorphic families inside N x S.
    Witness {
        #[arg(value_enum)]
        family: Family,
        /// Cayley table file.
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated parameter set.
        #[arg(long = "M", value_name = "SET")]
        m: String,
        /// Truncation bound; defaults to 2 max(M ∪ {2}).
        #[arg(short = 'D')]
        bound: Option<u64>,
    },
    /// Finite generating sets from layer sequences.
    #[command(subcommand)]
    Gens(GensCommand),
    /// Truncated closure of a generator file.
    Closure {
        file: PathBuf,
        #[command(flatten)]
        table: TableArg,
        /// Grade bound; defaults to 4 times the largest generator grade.
        #[arg(short = 'D')]
        bound: Option<u64>,
    },
    /// Brute-force relation enumeration, isomorphism checks and census.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Run a named verification suite.
    Verify {
        /// One of the names printed by `verify list`, or `list`.
        suite: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SepsetCommand {
    /// Check conditions (S1) and (S2); exits 1 if either fails.
    Check { set: String },
    /// Greedily extend a strongly 3-separating set.
    Extend {
        set: String,
        /// Target size; defaults to one more element.
        #[arg(long)]
        to: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SmCommand {
    /// Compare the triple criterion with the relation oracle for generator
    /// correspondences S_M -> S_N.
    Iso {
        #[arg(long = "M", value_name = "SET")]
        m: String,
        #[arg(long = "N", value_name = "SET")]
        n: String,
        /// `all`, or a permutation such as `2,1,0` sending (1, m_i) to (1, n_perm[i]).
        #[arg(long, default_value = "all")]
        perm: String,
        /// Relation degree bound; defaults to 2 (m1 + m2 + m3).
        #[arg(short = 'L')]
        degree: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GensCommand {
    /// Extract a finite generating set and verify it regenerates.
    Extract {
        file: PathBuf,
        #[arg(long)]
        table: PathBuf,
        /// Write the generating set to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// All relations among generators up to a degree.
    Relations {
        file: PathBuf,
        #[command(flatten)]
        table: TableArg,
        /// Degree bound; defaults to 8.
        #[arg(short = 'L')]
        degree: Option<u64>,
    },
    /// Test every bijection of indecomposables between two subsemigroups.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        table: TableArg,
        /// Degree bound; defaults to the sum of the largest coordinates of all
        /// generators (6 over N x S).
        #[arg(short = 'L')]
        degree: Option<u64>,
    },
    /// Semigroups of order n up to isomorphism.
    Census {
        #[arg(short = 'n', default_value_t = 3)]
        order: usize,
        /// Write one table file per semigroup into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct TableArg {
    /// Cayley table file; generator fibers are then elements of it.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum Family {
    /// Over a semigroup that is not a union of groups.
    #[value(name = "thmD")]
    NonGroup,
    /// Subdirect, over a semigroup with an element lacking relative identities.
    #[value(name = "thmE")]
    Subdirect,
}

/// Exit status contract: 0 success, 1 verification failure, 2 usage or
/// input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
