//! `rankx`: extremal ranks of `A + BXC` from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rankx_core::oracle::Family;
use rankx_core::witness::Target;
use rankx_core::FieldSpec;

use output::{Format, Out};

#[derive(Parser)]
#[command(name = "rankx", version, about = "Extremal ranks of A + BXC when the rank of X is prescribed")]
struct Cli {
    /// Output layout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Reinterpret every operand over this field (Q, GF2, GF3, GF5, ...).
    #[arg(long, global = true)]
    field: Option<FieldSpec>,

    #[command(subcommand)]
    command: Command,
}

/// `--rank t` or `--rank-range s t`; neither means any rank.
#[derive(Args, Debug, Clone)]
pub struct ConstraintArgs {
    /// Fix the rank of X.
    #[arg(long, value_name = "T", conflicts_with = "rank_range")]
    rank: Option<usize>,

    /// Bound the rank of X to s..=t.
    #[arg(long, num_args = 2, value_names = ["S", "T"])]
    rank_range: Option<Vec<usize>>,
}

#[derive(Args, Debug, Clone)]
pub struct Triple {
    a: PathBuf,
    b: PathBuf,
    c: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of one matrix.
    Rank { matrix: PathBuf },
    /// Rank profile and structural parameters of a triple.
    Profile {
        #[command(flatten)]
        triple: Triple,
    },
    /// Maximal and minimal rank of A + BXC.
    Extremal {
        #[command(flatten)]
        triple: Triple,
        #[command(flatten)]
        constraint: ConstraintArgs,
    },
    /// A verified X attaining the maximal or minimal rank.
    Witness {
        #[command(flatten)]
        triple: Triple,
        #[command(flatten)]
        constraint: ConstraintArgs,
        /// Which extreme; both when omitted.
        #[arg(long)]
        target: Option<Target>,
        /// Also write X to this file.
        #[arg(short, long, requires = "target")]
        output: Option<PathBuf>,
    },
    /// Simultaneous decomposition of A, B and C.
    Decompose {
        #[command(flatten)]
        triple: Triple,
    },
    /// Extremal ranks of the completion [[A, B], [C, X]].
    Complete {
        #[command(flatten)]
        triple: Triple,
        #[command(flatten)]
        constraint: ConstraintArgs,
        /// Build a witness for this extreme (needs --rank).
        #[arg(long, requires = "rank")]
        target: Option<Target>,
        /// Also write X to this file.
        #[arg(short, long, requires = "target")]
        output: Option<PathBuf>,
    },
    /// Extremal ranks of [[A - X, B - X], [C - X, D - X]].
    Shifted {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        d: PathBuf,
        #[arg(long, value_name = "T")]
        rank: usize,
    },
    /// Compare a formula family with brute force over a small prime field.
    Verify {
        /// Either one bound for every dimension or `m,n,p,q`.
        #[arg(long, default_value = "2")]
        dims: String,
        #[arg(long, default_value = "fixed")]
        family: Family,
        /// Check this many seeded random instances instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        /// Sampling seed; RANKX_SEED overrides it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on exhaustive enumeration sizes.
        #[arg(long)]
        cap: Option<u128>,
        /// Print only the summary line (and any mismatches).
        #[arg(long)]
        summary_only: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out::new(cli.format);
    let result = commands::run(cli.command, cli.field, &mut out);
    out.flush();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
