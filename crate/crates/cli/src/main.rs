mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsys_complexity::{ConvergenceParams64, EncodingTag, KMode};

/// Structural complexity of bit sequences from their L-system rewriting
/// grammar, with topological entropy and linguistic complexity baselines.
///
/// Every option can also be set through the environment variable shown in
/// its help; an explicit flag wins over the environment.
#[derive(Parser, Debug)]
#[command(name = "lsys", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize a UTF-8 text and write it as a packed bit file.
    ///
    /// Normalization lowercases, keeps the letters a-z, drops punctuation
    /// and digits, and collapses whitespace runs into one space. The output
    /// starts with a one-line JSON header (bit_length, encoding, code_width)
    /// followed by the bits packed most significant bit first.
    Encode(EncodeArgs),
    /// Print the classified rewriting grammar of one window.
    Grammar(GrammarArgs),
    /// Radius of convergence R and K0 = -ln R of one window.
    Complexity(ComplexityArgs),
    /// Topological entropy and linguistic complexity of one symbol string.
    Baselines(BaselinesArgs),
    /// Per-window K0 / TE / LC series with anomaly flags, as CSV or JSON.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TextEncoding {
    Bin,
    Lzw,
}

impl From<TextEncoding> for EncodingTag {
    fn from(e: TextEncoding) -> Self {
        match e {
            TextEncoding::Bin => EncodingTag::Bin,
            TextEncoding::Lzw => EncodingTag::Lzw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum InputEncoding {
    Bin,
    Lzw,
    RawBits,
}

impl From<InputEncoding> for EncodingTag {
    fn from(e: InputEncoding) -> Self {
        match e {
            InputEncoding::Bin => EncodingTag::Bin,
            InputEncoding::Lzw => EncodingTag::Lzw,
            InputEncoding::RawBits => EncodingTag::RawBits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KModeArg {
    /// k = 1 for every variant.
    Unit,
    /// k = 1 / n_ip for a variant of multiplicity n_ip.
    Inverse,
}

impl From<KModeArg> for KMode {
    fn from(k: KModeArg) -> Self {
        match k {
            KModeArg::Unit => KMode::Unit,
            KModeArg::Inverse => KMode::Inverse,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Measure {
    K0,
    Te,
    Lc,
}

#[derive(Args, Debug, Clone)]
struct EncodingArgs {
    /// Symbols of the alphabet in index order (index 1 first). Defaults to
    /// a-z followed by space, the 27-symbol normalized alphabet.
    #[arg(long, env = "LSYS_ALPHABET")]
    alphabet: Option<String>,
    /// Field width for BIN encoding. Default 5, the narrowest width that
    /// holds index 27.
    #[arg(long, env = "LSYS_BIN_WIDTH", value_parser = clap::value_parser!(u32).range(1..=32))]
    bin_width: Option<u32>,
    /// Fixed code width for LZW. Default: the width of the largest emitted
    /// index, used for every code.
    #[arg(long, env = "LSYS_CODE_WIDTH", value_parser = clap::value_parser!(u32).range(1..=32))]
    code_width: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct SolverArgs {
    /// Isomorphism depth X used to classify rules.
    #[arg(long, env = "LSYS_ISO_DEPTH", default_value_t = 2)]
    iso_depth: u32,
    /// Choice of the weight k in each term n_ip z^k V_a V_b.
    #[arg(long, env = "LSYS_K_MODE", value_enum, default_value_t = KModeArg::Unit)]
    k_mode: KModeArg,
    /// Iteration budget m per evaluation of the generating functions.
    #[arg(long, env = "LSYS_M_MAX", default_value_t = 200)]
    m_max: usize,
    /// Convergence tolerance: the iteration has converged once no class
    /// value moves by more than eps in one step (implementation default).
    #[arg(long, env = "LSYS_EPS", default_value_t = 1e-9)]
    eps: f64,
    /// Bisection steps on [0, 1] when searching for R (implementation default).
    #[arg(long, env = "LSYS_BISECT_ITERS", default_value_t = 40)]
    bisect_iters: usize,
    /// An iterate above this value counts as divergent.
    #[arg(long, env = "LSYS_VALUE_CAP", default_value_t = 1e100)]
    value_cap: f64,
    /// Skip the initial probe at z = 1 and always bisect. With the probe,
    /// any system that converges at z = 1 reports R = 1 and K0 = 0, which
    /// is the case for every window; without it, R is the last convergent
    /// point of the bisection under the (m_max, eps) budget.
    #[arg(long, env = "LSYS_NO_UNIT_PROBE")]
    no_unit_probe: bool,
}

impl SolverArgs {
    fn params(&self) -> ConvergenceParams64 {
        ConvergenceParams64 {
            m_max: self.m_max,
            eps: self.eps,
            value_cap: self.value_cap,
            bisect_iters: self.bisect_iters,
            unit_probe: !self.no_unit_probe,
        }
    }
}

#[derive(Args, Debug)]
struct WindowInput {
    /// Window as a string of 0 and 1.
    #[arg(long)]
    bits: Option<String>,
    /// Window as hexadecimal digits, four bits each.
    #[arg(long)]
    hex: Option<String>,
    /// File holding the window: ASCII 0/1 or a packed bit file from
    /// `lsys encode`. Use `-` for standard input.
    input: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    /// UTF-8 text file, or `-` for standard input.
    input: PathBuf,
    /// Text encoder.
    #[arg(long, short, env = "LSYS_ENCODING", value_enum, default_value_t = TextEncoding::Lzw)]
    encoding: TextEncoding,
    #[command(flatten)]
    encoding_args: EncodingArgs,
    /// Write the bits as one ASCII 0/1 line instead of a packed bit file.
    #[arg(long)]
    ascii: bool,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GrammarArgs {
    #[command(flatten)]
    window: WindowInput,
    /// Isomorphism depth X used to classify rules.
    #[arg(long, env = "LSYS_ISO_DEPTH", default_value_t = 2)]
    iso_depth: u32,
    #[arg(long, short, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
    /// Also print the bracketed string of the window's tree.
    #[arg(long)]
    bracketed: bool,
}

#[derive(Args, Debug)]
struct ComplexityArgs {
    #[command(flatten)]
    window: WindowInput,
    #[command(flatten)]
    solver: SolverArgs,
    /// Print every probe of the radius search.
    #[arg(long)]
    trace: bool,
    /// Print the generating-function equations.
    #[arg(long)]
    system: bool,
    #[arg(long, short, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct BaselinesArgs {
    /// Symbol string; every character is one symbol.
    sequence: Option<String>,
    /// Read the symbol string from a file instead (surrounding whitespace
    /// is trimmed).
    #[arg(long, conflicts_with = "sequence")]
    file: Option<PathBuf>,
    /// Alphabet size k. Default: 2, or the number of distinct symbols if
    /// larger.
    #[arg(long, short)]
    k: Option<usize>,
    #[arg(long, short, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Input file, or `-` for standard input. Text for bin/lzw; ASCII 0/1
    /// or a packed bit file for raw-bits.
    input: PathBuf,
    /// How to turn the input into bits: encode text with bin or lzw, or
    /// read it as bits already.
    #[arg(long, short, env = "LSYS_ENCODING", value_enum, default_value_t = InputEncoding::Lzw)]
    encoding: InputEncoding,
    #[command(flatten)]
    encoding_args: EncodingArgs,
    /// Window length in bits; must be a power of two.
    #[arg(long, short, env = "LSYS_WINDOW", default_value_t = 512)]
    window: usize,
    /// Distance between window starts in bits. Default: the window length
    /// (non-overlapping windows). A partial window at the end is dropped.
    #[arg(long, env = "LSYS_STRIDE")]
    stride: Option<usize>,
    /// Measures to compute, comma separated.
    #[arg(long, short, env = "LSYS_MEASURES", value_enum, value_delimiter = ',', default_values_t = [Measure::K0, Measure::Te, Measure::Lc])]
    measures: Vec<Measure>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Anomaly threshold: a window is flagged when, for any computed
    /// measure, |x - median| > tau * 1.4826 * MAD (implementation default).
    #[arg(long, env = "LSYS_TAU", default_value_t = 3.5)]
    tau: f64,
    #[arg(long, short, env = "LSYS_FORMAT", value_enum, default_value_t = SeriesFormat::Csv)]
    format: SeriesFormat,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Encode(args) => commands::encode(args),
        Command::Grammar(args) => commands::grammar(args),
        Command::Complexity(args) => commands::complexity(args),
        Command::Baselines(args) => commands::baselines(args),
        Command::Analyze(args) => commands::analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
