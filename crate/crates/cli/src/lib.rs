//! The `nichols` command line.
//!
//! Every subcommand writes its result to the supplied writer in markdown,
//! CSV or JSON. Exit status is 0 on success, 1 on domain errors (including
//! a failed paper comparison) and 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod commands;
pub mod data;
pub mod paper;
pub mod render;

use render::Format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown group {0:?}; pass a generator file or one of the builtin names")]
    UnknownGroup(String),
    #[error("missing file or directory {}", .0.display())]
    Missing(PathBuf),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] nichols_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// The command ran but its check did not pass; the report was written.
    #[error("{0}")]
    Failed(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<nichols_core::CharTableError> for CliError {
    fn from(e: nichols_core::CharTableError) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nichols", version, about = "Bi-one Nichols algebras over finite groups")]
pub struct Cli {
    /// Progress and timings on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Generator file, or a builtin name (s3 s4 s5 s6 d4 q8 a5 sz8 hs co3).
    #[arg(short, long)]
    pub group: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(short, long, value_enum, default_value_t = Format::Md)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criteria {
    Literal,
    Strict,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Directory of CTX centralizer tables.
    #[arg(long)]
    pub tables: Option<PathBuf>,
    /// Compute tables missing from `--tables` by Dixon-Schneider.
    #[arg(long)]
    pub compute_tables: bool,
    /// Largest centralizer order handed to Dixon-Schneider.
    #[arg(long, default_value_t = nichols_core::chartab::DEFAULT_MAX_ORDER)]
    pub max_group_order: u128,
    #[arg(long, value_enum, default_value_t = Criteria::Literal)]
    pub criteria: Criteria,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conjugacy classes with sizes, centralizer orders and power maps.
    Classes {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Quasi-real and strongly quasi-real classes with witnesses.
    Quasireal {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Character table of the group or of a centralizer.
    Chartab {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Table of the centralizer of this class (1-based).
        #[arg(long)]
        class: Option<usize>,
        /// Write the table as a CTX file.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Export every centralizer table into this directory.
        #[arg(long, conflicts_with_all = ["class", "export"])]
        all_centralizers: Option<PathBuf>,
        /// Replace existing CTX files whose content differs.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = nichols_core::chartab::DEFAULT_MAX_ORDER)]
        max_group_order: u128,
    },
    /// Quasi-(-1) classification of every class.
    Classify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tables: TableArgs,
    },
    /// The Yetter-Drinfeld module of a class and a representation, with its
    /// braiding.
    Braiding {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Class representative in cycle notation.
        #[arg(long, conflicts_with = "class_index", required_unless_present = "class_index")]
        class_rep: Option<String>,
        /// Class index (1-based, canonical order).
        #[arg(long)]
        class_index: Option<usize>,
        /// Linear character of the centralizer: a 1-based index into its
        /// computed table, or its row of CTX values.
        #[arg(long, conflicts_with = "rep", required_unless_present = "rep")]
        char: Option<String>,
        /// REP file with matrices for generators of the centralizer.
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Verify invertibility and the braid equation
        #[arg(long)]
        check_braid: bool,
        /// Verify the action and the Yetter-Drinfeld compatibility
        #[arg(long)]
        check_yd: bool,
        /// Write the braiding matrix as JSON.
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long, default_value_t = nichols_core::ydmod::DEFAULT_CLASS_CAP)]
        class_size_cap: usize,
        #[arg(long, default_value_t = nichols_core::ydmod::DEFAULT_DIMENSION_CAP)]
        dimension_cap: usize,
        /// Sample size for the action and compatibility checks above the
        /// exhaustive limit.
        #[arg(long, default_value_t = 2000)]
        sample: usize,
        #[arg(long, default_value_t = nichols_core::chartab::DEFAULT_MAX_ORDER)]
        max_group_order: u128,
    },
    /// Compares the classification with the published tables.
    VerifyPaper {
        /// Table number 1 to 4; repeat to combine tables of one group.
        #[arg(long = "paper-table", required = true, value_parser = clap::value_parser!(u8).range(1..=4))]
        paper_tables: Vec<u8>,
        /// Defaults to the group of the first table.
        #[arg(short, long)]
        group: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory holding tableN.csv and errata.csv.
        #[arg(long)]
        paper_dir: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tables: TableArgs,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Errors go to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(std::io::stderr(), "{}", e.render());
            }
            return code;
        }
    };
    match commands::execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            e.exit_code()
        }
    }
}
