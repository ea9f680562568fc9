//! `clusterform`: load, check, synthesize and compare forms and bicategories.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails or a
//! search exhausts its budget, 2 for usage and input errors.

mod commands;
mod docs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "clusterform",
    version,
    about = "Checks and constructions for finite forms"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Node budget for exhaustive searches.
    #[arg(long, default_value_t = clusterform::formcore::DEFAULT_ISO_BUDGET, global = true)]
    pub budget: u64,
    /// Directory caching emitted zoo documents.
    #[arg(long, env = "CLUSTERFORM_SEED_CACHE", global = true)]
    pub seed_cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Direct,
    Dual,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Form,
    Category,
    Bicat,
}

#[derive(Subcommand)]
enum Verb {
    /// Structural validation of a fincat/1, form/1 or bicat/1 document.
    Validate { input: PathBuf },
    /// Runs an axiom selection on a form or bicategory.
    Check {
        input: PathBuf,
        /// Comma-separated. Forms: form, orean, noetherian, exact-join,
        /// exact-meet, modular, all. Bicategories: B0..B5, B1'..B5',
        /// battery, equivalences, trivial, all; left-exact on request.
        #[arg(long, default_value = "all")]
        axioms: String,
        /// Bicategories only: check the axioms or their duals.
        #[arg(long, value_enum, default_value_t = SideArg::Direct)]
        side: SideArg,
    },
    /// Cluster classification and the special predicates of an orean form.
    Classify { input: PathBuf },
    /// Searches for an exact decomposition.
    Decompose { input: PathBuf },
    /// Synthesizes a form from a bicategory, or from a conormal and a normal form.
    Synthesize {
        /// One bicat/1 document, or two form/1 documents (conormal, normal).
        #[arg(num_args = 1..=2, required = true)]
        inputs: Vec<PathBuf>,
        /// Bicategory input: synthesize from the axioms or their duals.
        #[arg(long, value_enum, default_value_t = SideArg::Direct)]
        side: SideArg,
        /// Write the form here and print the report instead.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Isomorphism (or, with --embed, full embedding) search between two forms.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Look for a full injective operator from the first form into the second.
        #[arg(long)]
        embed: bool,
    },
    /// Emits a zoo document.
    #[command(name = "zoo-emit")]
    ZooEmit {
        /// Zoo name; omit with --list.
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Kind::Form)]
        kind: Kind,
        /// Set size, or maximal group order for the group entries.
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// List the available names.
        #[arg(long)]
        list: bool,
    },
    /// Runs the acceptance battery.
    Battery {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long)]
        only: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let result = match cli.verb {
        Verb::Validate { input } => commands::validate(&g, &input),
        Verb::Check {
            input,
            axioms,
            side,
        } => commands::check(&g, &input, &axioms, side),
        Verb::Classify { input } => commands::classify(&g, &input),
        Verb::Decompose { input } => commands::decompose(&g, &input),
        Verb::Synthesize {
            inputs,
            side,
            output,
        } => commands::synthesize(&g, &inputs, side, output.as_deref()),
        Verb::Compare { a, b, embed } => commands::compare(&g, &a, &b, embed),
        Verb::ZooEmit {
            name,
            kind,
            size,
            output,
            list,
        } => commands::zoo_emit(&g, name.as_deref(), kind, size, output.as_deref(), list),
        Verb::Battery { only } => commands::battery(&g, only.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
