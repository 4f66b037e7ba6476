//! `suebk`: generate, verify and inspect SUEBk sets from the command line.
//!
//! Exit codes: 0 success or unextendible; 1 a check failed, the set is
//! extendible, or a search proved nonexistence; 2 invalid input or
//! unsupported parameters; 3 undecided, missing ingredient or exhausted
//! search budget.

mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "suebk", version, about = "Special unextendible entangled bases of type k")]
struct Cli {
    /// Absolute tolerance for inner products, singular values and projector entries.
    #[arg(long, global = true, env = "SUEBK_TOL", default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build, self-verify and write one state file per cardinality.
    Generate(GenerateArgs),
    /// Certify a state file.
    Verify(VerifyArgs),
    /// Weighing matrix tools.
    Weighing {
        #[command(subcommand)]
        command: WeighingCommand,
    },
    /// Print the order diagram of a grid.
    Order(OrderArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Recipe {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Local dimension of the first party.
    #[arg(short = 'd', required_unless_present = "plan")]
    d: Option<usize>,
    /// Local dimension of the second party.
    #[arg(short = 'p', long = "dprime", required_unless_present = "plan")]
    dprime: Option<usize>,
    /// Type of the entangled states.
    #[arg(short = 'k', required_unless_present = "plan")]
    k: Option<usize>,
    /// Cardinality `N`, or an inclusive range `a..b`.
    #[arg(short = 'N', value_parser = cmd::parse_range, required_unless_present = "plan")]
    cardinality: Option<(usize, usize)>,
    #[arg(long = "type", value_enum, default_value_t = Recipe::Auto)]
    recipe: Recipe,
    /// Type 2 split: rows kept in the main block.
    #[arg(long, requires = "m2")]
    m1: Option<usize>,
    /// Type 2 split: columns kept in the main block.
    #[arg(long, requires = "m1")]
    m2: Option<usize>,
    /// Block counts `s,t` of the short and long ingredient.
    #[arg(long, value_parser = cmd::parse_pair)]
    split: Option<(usize, usize)>,
    /// Build from a plan file instead of a recipe.
    #[arg(long, conflicts_with_all = ["d", "dprime", "k", "cardinality", "m1", "m2"])]
    plan: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Extra weighing matrices, in catalog format.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Node budget for ingredient searches.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Check for this type instead of the one recorded in the file.
    #[arg(short = 'k')]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum WeighingCommand {
    /// Check every record of a catalog-format file.
    Validate { file: PathBuf },
    /// Search for a `W(n, k, a)`.
    Search {
        n: u32,
        k: usize,
        a: usize,
        /// Maximum number of search nodes.
        #[arg(long, conflicts_with = "exhaustive")]
        budget: Option<u64>,
        /// Search without a node limit.
        #[arg(long)]
        exhaustive: bool,
        /// Append a found matrix to this catalog file.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// List built-in entries and those of an optional catalog file.
    List {
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Ascii,
}

#[derive(Debug, Args)]
struct OrderArgs {
    d: usize,
    dprime: usize,
    /// Cells to delete, as `i,j`.
    #[arg(long, num_args = 1.., value_parser = cmd::parse_pair)]
    delete: Vec<(usize, usize)>,
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cmd::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code)
}
