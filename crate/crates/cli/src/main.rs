mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use xyzdec::decoder::DecoderKind;
use xyzdec::CodeKind;

#[derive(Parser, Debug)]
#[command(name = "xyzdec", version, about = "Decoding and threshold experiments for the XYZ planar code")]
struct Cli {
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = "XYZDEC_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write its JSON description.
    Codegen(CodegenArgs),
    /// Posterior probabilities and weights as CSV.
    Weights(WeightsArgs),
    /// Sample errors and their syndromes as JSON lines.
    Sample(SampleArgs),
    /// Monte Carlo failure rates over a grid, as CSV.
    Sweep(SweepArgs),
    /// Sweep followed by a finite-size-scaling fit.
    Threshold(ThresholdArgs),
    /// Decode one syndrome.
    Decode(DecodeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Planar,
    #[value(alias = "xyz-planar")]
    Xyz,
}

impl From<KindArg> for CodeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Planar => CodeKind::Planar,
            KindArg::Xyz => CodeKind::XyzPlanar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Mwpm,
    Pmwpm,
}

impl From<DecoderArg> for DecoderKind {
    fn from(d: DecoderArg) -> Self {
        match d {
            DecoderArg::Mwpm => DecoderKind::Mwpm,
            DecoderArg::Pmwpm => DecoderKind::Pmwpm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Category {
    Any,
    X,
    Z,
}

/// Channel selection shared by the commands that need one.
#[derive(Args, Debug, Clone)]
struct NoiseArgs {
    /// Bias η = p_z / (p_x + p_y); `inf` for pure dephasing. Sweeps accept
    /// a comma-separated list.
    #[arg(long, conflicts_with_all = ["px", "py", "pz"])]
    eta: Option<String>,
    /// X error probability of a custom channel.
    #[arg(long, requires_all = ["py", "pz"])]
    px: Option<f64>,
    #[arg(long, requires_all = ["px", "pz"])]
    py: Option<f64>,
    #[arg(long, requires_all = ["px", "py"])]
    pz: Option<f64>,
}

#[derive(Args, Debug)]
struct CodegenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, short = 'd')]
    distance: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct WeightsArgs {
    #[command(flatten)]
    noise: NoiseArgs,
    /// Error rates: numbers, `a:b:k` ranges or `a:b:refpoints`.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, short = 'd')]
    distance: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: u64,
    /// Index of the first trial.
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct GridArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    /// Comma-separated code distances.
    #[arg(long)]
    distances: String,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Error rates: numbers, `a:b:k` ranges or `a:b:refpoints`.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Batches for the jackknife error bars.
    #[arg(long, default_value_t = xyzdec::experiment::DEFAULT_BATCHES)]
    batches: usize,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write 0 instead of the wall time so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Results CSV; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Failure category that is fitted.
    #[arg(long, value_enum, default_value_t = Category::Any)]
    category: Category,
    /// Results CSV of the underlying sweep.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit JSON; standard output when omitted.
    #[arg(long)]
    fit_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    /// Code description written by `codegen`.
    #[arg(long)]
    code: PathBuf,
    /// JSON with `s_x` and `s_zy`, or a `sample` record.
    #[arg(long)]
    syndrome: PathBuf,
    /// Defaults to pmwpm on xyz codes and mwpm on planar codes.
    #[arg(long, value_enum)]
    decoder: Option<DecoderArg>,
    #[command(flatten)]
    noise: NoiseArgs,
    #[arg(long)]
    p: Option<f64>,
    /// JSON holding the true `error`; reports whether the residual is a
    /// stabilizer.
    #[arg(long)]
    check_error: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, files or parameters: exit 2.
    Usage(anyhow::Error),
    /// Anything that went wrong while computing: exit 1.
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let usage = match e.downcast_ref::<xyzdec::Error>() {
            Some(core) => matches!(
                core,
                xyzdec::Error::Parameter(_) | xyzdec::Error::Dimension { .. } | xyzdec::Error::Parse(_)
            ),
            None => true,
        };
        if usage {
            Failure::Usage(e)
        } else {
            Failure::Runtime(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Codegen(a) => commands::codegen(&cli.out_dir, a),
        Command::Weights(a) => commands::weights(&cli.out_dir, a),
        Command::Sample(a) => commands::sample(&cli.out_dir, a),
        Command::Sweep(a) => commands::sweep(&cli.out_dir, a),
        Command::Threshold(a) => commands::threshold(&cli.out_dir, a),
        Command::Decode(a) => commands::decode(&cli.out_dir, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
