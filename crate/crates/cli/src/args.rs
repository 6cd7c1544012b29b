use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mlbound", version, about = "Bounds on the ML decoding error probability of binary linear codes and ensembles")]
pub struct Cli {
    /// Worker threads for grid evaluation and Monte-Carlo.
    #[arg(long, global = true, env = "MLBOUND_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance spectrum (or IOWEF) of a code by exhaustive enumeration.
    Spectrum(SpectrumArgs),
    /// IOWEF of a terminated or truncated convolutional component.
    ConvIowef(ConvArgs),
    /// Uniform-interleaver IOWEF of a parallel concatenated ensemble.
    TurboIowef(TurboArgs),
    /// Upper bounds over an Eb/N0 or crossover grid.
    Upper(UpperArgs),
    /// Lower bounds for an event system or a specific code.
    Lower(LowerArgs),
    /// Parity-check density and Fano-type bit error table.
    Density(DensityArgs),
    /// Exact or Monte-Carlo ML decoding error probability.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; a `<out>.meta.json` sidecar is written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Emit the input-output weight enumerator instead of the spectrum.
    #[arg(long)]
    pub iowef: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvArgs {
    /// Component description (TOML).
    #[arg(long)]
    pub component: PathBuf,
    /// Number of information bits.
    #[arg(long)]
    pub length: usize,
    #[arg(long)]
    pub w_max: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TurboArgs {
    /// Ensemble description (TOML).
    #[arg(long)]
    pub ensemble: PathBuf,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CapArgs {
    /// Largest information weight enumerated.
    #[arg(long)]
    pub w_max: Option<usize>,
    /// Largest codeword weight kept.
    #[arg(long)]
    pub d_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Biawgn,
    Bsc,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long, value_enum, default_value = "biawgn")]
    pub channel: ChannelKind,
    /// Single Eb/N0 point in dB.
    #[arg(long = "ebno-db", allow_hyphen_values = true, conflicts_with = "ebno")]
    pub ebno_db: Option<f64>,
    /// Eb/N0 grid `start:stop:step` in dB, inclusive.
    #[arg(long, allow_hyphen_values = true)]
    pub ebno: Option<String>,
    /// Code rate for the Eb/N0 conversion; defaults to the input's rate.
    #[arg(long)]
    pub rate: Option<f64>,
    /// BSC crossover probabilities: a value, a comma list, or `start:stop:step`.
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Generator matrix file.
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Weight file (spectrum or IOWEF JSON).
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Ensemble description (TOML).
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct UpperArgs {
    /// Comma-separated: union, bhattacharyya, gallager65, ds2, sphere, shifted-sphere, tsb.
    #[arg(long, value_delimiter = ',', required = true)]
    pub bounds: Vec<String>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub caps: CapArgs,
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Do not clip the conditional union term of the tangential-sphere bound at 1.
    #[arg(long)]
    pub no_slice_clip: bool,
    /// Coarse grid size of the cone half-angle search.
    #[arg(long, default_value_t = 64)]
    pub tsb_grid: usize,
    /// Seed of the optimizers' random starts.
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LowerArgs {
    /// Comma-separated: decaen, cohen-merhav.
    #[arg(long = "bound", value_delimiter = ',', required = true)]
    pub bounds: Vec<String>,
    /// Finite event system (JSON with `atoms` and `events`).
    #[arg(long, conflicts_with = "code")]
    pub events: Option<PathBuf>,
    /// Weights for an event system: `unit`, `inverse-degree`, or a JSON file
    /// holding an events x atoms array.
    #[arg(long, default_value = "inverse-degree")]
    pub weights: String,
    /// Generator matrix file (BIAWGN bounds).
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FanoArg {
    Rate,
    Unit,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Channel capacity in bits per use.
    #[arg(long)]
    pub capacity: f64,
    /// Gaps to capacity, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub epsilon: Vec<f64>,
    /// Normalized densities, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub t: Vec<f64>,
    /// Lower bound on H(X|Y)/n, for the bit error column.
    #[arg(long)]
    pub h_norm: Option<f64>,
    #[arg(long, value_enum, default_value = "rate")]
    pub fano: FanoArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Block,
    Bit,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_enum)]
    pub method: OracleMethod,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Required for Monte-Carlo runs.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "block")]
    pub metric: MetricArg,
    #[command(flatten)]
    pub output: OutputArgs,
}
