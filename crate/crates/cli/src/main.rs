//! `anticonc`: exact anticoncentration bounds, searches and simulations for
//! products of two-point random variables in finite groups.

mod commands;
mod emit;
mod parse;

use std::io;
use std::process::ExitCode;

use anticonc::group::DEFAULT_MAX_TABLE_ENTRIES;
use anticonc::search::DEFAULT_MAX_LAWS;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use emit::{Emitter, Format};

// aliases keep clap from treating these as repeated flags
type Values = Vec<u64>;
type Pairs = Vec<(usize, usize)>;
type Indices = Vec<usize>;

#[derive(Debug, Parser)]
#[command(
    name = "anticonc",
    version,
    about = "Anticoncentration of random products in finite groups"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output format; json is one record per line.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest number of product laws a search may evaluate.
    #[arg(long, global = true, env = "ANTICONC_MAX_LAWS", default_value_t = DEFAULT_MAX_LAWS)]
    pub max_laws: u128,
    /// Largest Cayley table, in entries, a group may occupy.
    #[arg(long, global = true, env = "ANTICONC_MAX_GROUP", default_value_t = DEFAULT_MAX_TABLE_ENTRIES)]
    pub max_group: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Symmetric,
    Any,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Every bound at (n, k, m); n, k and m accept ranges like 1..=10.
    Bound {
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long, value_parser = parse::values, default_value = "1")]
        k: Values,
        #[arg(long, value_parser = parse::values)]
        m: Values,
    },
    /// Exact law and top-k mass of an explicit product of two-point variables.
    Exact {
        #[arg(long)]
        group: String,
        /// Factors as element index pairs, e.g. 1:5,0:2.
        #[arg(long, value_parser = parse::index_pairs, conflicts_with = "gens", required_unless_present = "gens")]
        pairs: Option<Pairs>,
        /// Symmetric factors {g^-1, g}, by element index.
        #[arg(long, value_parser = parse::indices)]
        gens: Option<Indices>,
        /// Repeat the factor list this many times.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long, default_value_t = 1)]
        k: u64,
    },
    /// Exhaustive worst case over all admissible factor choices.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long, value_parser = parse::values, default_value = "1")]
        k: Values,
        /// Minimum element order for symmetric factors.
        #[arg(long, value_parser = parse::values, default_value = "2")]
        m: Values,
        #[arg(long, value_enum, default_value = "symmetric")]
        mode: SearchMode,
    },
    /// Exhaustive worst case checked against a bound; exits 2 on a violation.
    Verify {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long, value_parser = parse::values, default_value = "1")]
        k: Values,
        #[arg(long, value_parser = parse::values)]
        m: Values,
    },
    /// Split a law with masses <= 1/2 into a mixture of two-point uniforms.
    Decompose {
        /// Distribution JSON file; reads stdin when absent.
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Sums of evenly spaced binomial coefficients, exact vs trigonometric.
    IdentityCheck {
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long, value_parser = parse::values)]
        s: Values,
        /// Residues t; every t < s when absent.
        #[arg(long, value_parser = parse::values)]
        t: Option<Values>,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Seeded Monte Carlo estimate of the largest point mass.
    Simulate {
        #[arg(long, required_unless_present = "matrix_p")]
        group: Option<String>,
        #[arg(long, value_parser = parse::index_pairs)]
        pairs: Option<Pairs>,
        #[arg(long, value_parser = parse::indices)]
        gens: Option<Indices>,
        /// Walk in GL2(p) by direct matrix products instead of a table.
        #[arg(long, conflicts_with = "group", requires = "matrix_pairs")]
        matrix_p: Option<u64>,
        /// Matrix factors as a,b,c,d:e,f,g,h;...
        #[arg(long)]
        matrix_pairs: Option<String>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Also compute the exact top-1 mass and report it as the target.
        #[arg(long)]
        exact: bool,
        /// Cells kept in the report; the rest fold into `overflow`.
        #[arg(long, default_value_t = 64)]
        top: usize,
        /// Write the full histogram as CSV (element, count, frequency).
        #[arg(long)]
        histogram: Option<std::path::PathBuf>,
    },
    /// Probe the conjectured bound for groups with even-order elements.
    Conjecture {
        #[arg(long)]
        group: String,
        #[arg(long)]
        m: u64,
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long, value_parser = parse::values, default_value = "1")]
        k: Values,
    },
    /// Distance of one residue's signed-walk mass from 2/m~, over n.
    Prop1 {
        #[arg(long, value_parser = parse::values)]
        n: Values,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        l: u64,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] anticonc::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

/// What a successful run found.
#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.common.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let mut out = Emitter::new(
        cli.common.format,
        Box::new(io::BufWriter::new(io::stdout().lock())),
    );
    let result = commands::run(&cli.common, &cli.command, &mut out);
    let flushed = out.finish();
    match (result, flushed) {
        (Ok(Status::Ok), Ok(())) => ExitCode::SUCCESS,
        (Ok(Status::Violation), Ok(())) => ExitCode::from(2),
        (Err(CliError::Core(e @ anticonc::Error::Inconsistent(_))), _) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        (Err(e), _) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        (_, Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
