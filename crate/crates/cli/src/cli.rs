//! Argument tree. Every leaf struct doubles as the `config` echo in the JSON
//! envelope, so the report always records exactly what it was asked to do.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "fpwb",
    version,
    about = "Workbench for finitely presented groups: certificates, small cancellation, \
             constructions, enumeration, and full pipeline reports",
    propagate_version = true
)]
pub struct Cli {
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Omit the timestamp so identical runs emit byte-identical reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a presentation file and echo its structure.
    Parse(InputArgs),
    /// Abelianization (invariant factors and free rank) via Smith normal form.
    Abelianize(InputArgs),
    /// One-sided certificate that the second homology vanishes.
    H2cert(InputArgs),
    /// Metric small-cancellation tools.
    #[command(subcommand)]
    Smallcanc(SmallcancCmd),
    /// Small-cancellation construction over the input group, with
    /// verified post-conditions.
    Rips(RipsArgs),
    /// Generating tuples for the fibre product of the constructed quotient.
    Fibre(FibreArgs),
    /// Wreath product of the input group with a finite top group.
    Wreath(WreathArgs),
    /// Coset enumeration, low-index subgroups, quotient spectra, density.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Full construction pipeline: input certificates, small-cancellation
    /// extension, fibre product, wreath embedding, density checks.
    Pipeline(PipelineArgs),
    /// Run the pipeline over every presentation file in a directory.
    Batch(BatchArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct InputArgs {
    /// Presentation file (.grp).
    pub file: PathBuf,
    /// Value substituted for the symbolic exponent parameter `p`.
    #[arg(long, default_value_t = 2)]
    pub p: i64,
}

#[derive(Subcommand, Debug)]
pub enum SmallcancCmd {
    /// Verify the metric condition C'(1/lambda): every piece of every
    /// relator strictly shorter than length/lambda.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Metric denominator (>= 6).
        #[arg(long, default_value_t = 10)]
        lambda: u64,
    },
    /// Dehn-reduce a word; under C'(1/6) the result is empty iff the word
    /// represents the identity.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// Word over the file's generators, e.g. "b a^-2 b^-1 a^3".
        #[arg(long)]
        word: String,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct RipsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Small-cancellation target C'(1/lambda) (>= 6).
    #[arg(long, default_value_t = 10)]
    pub lambda: u64,
    /// Base padding-word length (grown automatically if needed).
    #[arg(long, default_value_t = 64)]
    pub pad: usize,
    /// Include the full relator text in the JSON (large).
    #[arg(long)]
    pub full: bool,
    /// Also write the constructed presentation as a .grp file.
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct FibreArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Number of fibre factors (>= 2).
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Take the fibre product over the quotient map onto this presentation
    /// (same generator names, a superset of relators) instead of over the
    /// small-cancellation construction's quotient.
    #[arg(long, value_name = "PATH")]
    pub quotient: Option<PathBuf>,
    /// Small-cancellation target for the underlying construction.
    #[arg(long, default_value_t = 10)]
    pub lambda: u64,
    /// Base padding-word length for the underlying construction.
    #[arg(long, default_value_t = 64)]
    pub pad: usize,
    /// Enumerate the index of the generated subgroup in the direct power
    /// (terminates exactly when that index is finite).
    #[arg(long)]
    pub index: bool,
    /// Exhaustively compare against the equal-image tuples (finite domains
    /// only; enumeration is bounded by --budget).
    #[arg(long)]
    pub check: bool,
    /// Coset budget for --index and --check.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct WreathArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Finite top group: C<n>, V4, S3, S4, A4, D4, D5, or D6.
    #[arg(long = "B", value_name = "NAME")]
    pub b: String,
    /// Enumerate the order of the wreath product (finite bases only).
    #[arg(long)]
    pub order: bool,
    /// Compute the index of the diagonal-with-top subgroup (finite bases only).
    #[arg(long)]
    pub diagonal_index: bool,
    /// Coset budget for --order / --diagonal-index.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Also write the wreath presentation as a .grp file.
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum EnumerateCmd {
    /// Index of the subgroup generated by --gen words, by coset enumeration.
    Index {
        #[command(flatten)]
        input: InputArgs,
        /// Subgroup generator word (repeatable; none = trivial subgroup).
        #[arg(long = "gen", value_name = "WORD")]
        gens: Vec<String>,
        /// Maximum cosets defined before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// One representative per conjugacy class of subgroups of small index.
    Lowindex {
        #[command(flatten)]
        input: InputArgs,
        /// Largest index to search.
        #[arg(long, default_value_t = 3)]
        max_index: usize,
        /// Node budget for the backtracking search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Isomorphism signatures of finite quotients seen by transitive
    /// actions of bounded degree.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        /// Largest action degree to analyze.
        #[arg(long, default_value_t = 6)]
        max_index: usize,
        /// Node budget for the backtracking search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Check that the subgroup generated by --gen words acts transitively
    /// on every coset space of index up to --max-index.
    Density {
        #[command(flatten)]
        input: InputArgs,
        /// Subgroup generator word (repeatable).
        #[arg(long = "gen", value_name = "WORD")]
        gens: Vec<String>,
        /// Largest subgroup index to test against.
        #[arg(long, default_value_t = 3)]
        max_index: usize,
        /// Node budget for the backtracking search.
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
}

#[derive(Args, Debug, Serialize)]
pub struct PipelineArgs {
    /// Input presentation file (.grp).
    #[arg(long, value_name = "PATH")]
    pub q: PathBuf,
    /// Value substituted for the symbolic exponent parameter `p`.
    #[arg(long, default_value_t = 2)]
    pub p: i64,
    /// Fibre arity minus one; the top group must have order d + 1.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Finite top group (must have order d + 1): C<n>, V4, S3, ….
    #[arg(long = "B", default_value = "C2", value_name = "NAME")]
    pub b: String,
    /// Small-cancellation target C'(1/lambda) (>= 6).
    #[arg(long, default_value_t = 10)]
    pub lambda: u64,
    /// Base padding-word length.
    #[arg(long, default_value_t = 64)]
    pub pad: usize,
    /// Node budget for every enumeration pass.
    #[arg(long, default_value_t = 1_000_000)]
    pub coset_budget: usize,
    /// Subgroup index bound for the density checks.
    #[arg(long, default_value_t = 3)]
    pub max_index: usize,
    /// Quotient-order bound for the input certificate sweep.
    #[arg(long, default_value_t = 6)]
    pub quotient_bound: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct BatchArgs {
    /// Directory of presentation files (every *.grp inside is processed).
    pub dir: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub params: BatchParams,
}

/// Pipeline parameters shared by every batch item.
#[derive(Args, Debug, Clone, Serialize)]
pub struct BatchParams {
    /// Value substituted for the symbolic exponent parameter `p`.
    #[arg(long, default_value_t = 2)]
    pub p: i64,
    /// Fibre arity minus one; the top group must have order d + 1.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Finite top group (must have order d + 1).
    #[arg(long = "B", default_value = "C2", value_name = "NAME")]
    pub b: String,
    /// Small-cancellation target C'(1/lambda) (>= 6).
    #[arg(long, default_value_t = 10)]
    pub lambda: u64,
    /// Base padding-word length.
    #[arg(long, default_value_t = 64)]
    pub pad: usize,
    /// Node budget for every enumeration pass.
    #[arg(long, default_value_t = 1_000_000)]
    pub coset_budget: usize,
    /// Subgroup index bound for the density checks.
    #[arg(long, default_value_t = 3)]
    pub max_index: usize,
    /// Quotient-order bound for the input certificate sweep.
    #[arg(long, default_value_t = 6)]
    pub quotient_bound: usize,
}
