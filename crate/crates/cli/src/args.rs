use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfx_ahp::report::Format;

#[derive(Debug, Parser)]
#[command(name = "dfx-ahp", version, about = "Rank DfX techniques for IoT products with AHP")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Directory holding the catalog CSVs and datasets.json [default: bundled data]
    #[arg(long, global = true, env = "DFX_AHP_DATA")]
    pub data_dir: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Markdown)]
    pub format: OutputFormat,
    /// Bundled preset name, or a path to a preset JSON file
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Prune threshold: keep elements with weight >= theta / N
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Exit 0 even when a matrix fails the consistency gate
    #[arg(long, global = true)]
    pub allow_inconsistent: bool,
    /// Seed for Monte-Carlo random indices
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Impute missing pairs instead of rejecting incomplete matrices
    #[arg(long, global = true)]
    pub lenient: bool,
    /// Run against a decision service instead of locally
    #[arg(long, global = true, value_name = "URL")]
    pub server: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Markdown,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Markdown => Format::Markdown,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Hierarchy document (JSON); omit when using --preset
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a hierarchy and report global weights and consistency
    Solve {
        #[command(flatten)]
        input: InputArgs,
        /// Show only the first N alternatives in the weight table
        #[arg(long)]
        top: Option<usize>,
    },
    /// Solve, prune, and solve again on what remains
    Prune {
        #[command(flatten)]
        input: InputArgs,
        /// Keep exactly these top-level criteria (repeatable)
        #[arg(long = "keep-criterion", value_name = "NAME")]
        keep_criteria: Vec<String>,
        /// Keep exactly these alternatives (repeatable)
        #[arg(long = "keep-alternative", value_name = "NAME")]
        keep_alternatives: Vec<String>,
    },
    /// Show how one judgment edit would change the ranking
    Whatif {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        context: String,
        #[arg(long)]
        row: String,
        #[arg(long)]
        col: String,
        #[arg(long)]
        grade: i64,
        /// The judgment is 1/grade
        #[arg(long)]
        inverted: bool,
    },
    /// List design strategies no DfX technique covers
    Gaps,
    /// Query the DfX catalog
    Catalog {
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        scope: Option<String>,
        #[arg(long)]
        character: Option<String>,
        #[arg(long)]
        focus: Option<String>,
        /// Substring of the goals column
        #[arg(long)]
        goal: Option<String>,
    },
    /// Check the published global weight table for internal consistency
    #[command(name = "validate-fig10")]
    ValidateFig10,
    /// List bundled presets
    Presets,
    /// Run the decision service
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: String,
        /// Append session events here and replay them on start
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}
