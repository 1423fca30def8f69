//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on operational failures (I/O, malformed
//! files, family collisions, capacity), 2 on usage errors (bad flags, hex,
//! length mismatches, missing seeds).

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(name = "stegsec", version, about = "Keyed-XOR bit-plane steganography and distinguishing games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a support-family manifest from base contents.
    FamilyInit(FamilyInitArgs),
    /// Hide a message in one base of a family.
    Embed(EmbedArgs),
    /// Recover a hidden message.
    Extract(ExtractArgs),
    /// Run a distinguisher over content files, one JSON line per file.
    Attack(AttackArgs),
    /// Estimate or compute a distinguisher's advantage.
    Game(GameArgs),
    /// Compare stego and cover distributions by enumeration.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    Raw,
    Graymap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenArg {
    Otp,
    Counter,
    Zero,
    ShortCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Chi2,
    Replay,
    Const0,
    Const1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Stego,
    Generator,
}

#[derive(Debug, Args)]
pub struct FamilyInitArgs {
    /// Plane width N.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "lsb-per-byte")]
    pub policy: String,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Manifest path; normalized bases go to `<stem>.bases/` next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(required = true)]
    pub bases: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    #[arg(long, value_enum)]
    pub gen: GenArg,
    /// Key length ℓ; defaults to N for otp and zero, 128 for counter, 16 for short-cycle.
    #[arg(long)]
    pub key_bits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub key_args: KeyArgs,
    #[arg(long)]
    pub key: String,
    /// Message as hex (N bits, or whole bytes with --chunk).
    #[arg(long, conflicts_with = "msg_file", required_unless_present = "msg_file")]
    pub msg: Option<String>,
    #[arg(long)]
    pub msg_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub base: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Split a byte message into N-bit blocks, one content per block.
    #[arg(long)]
    pub chunk: bool,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub key_args: KeyArgs,
    #[arg(long)]
    pub key: String,
    #[arg(long = "in", conflicts_with = "chunks", required_unless_present = "chunks")]
    pub input: Option<PathBuf>,
    /// Chunk sidecar written by `embed --chunk`.
    #[arg(long)]
    pub chunks: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long, value_enum, default_value_t = DetectorArg::Chi2)]
    pub detector: DetectorArg,
    #[arg(long, default_value_t = crate::analysis::DEFAULT_THRESHOLD_P)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// Family manifest, needed by the replay detector.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub gen: Option<GenArg>,
    #[arg(long)]
    pub key_bits: Option<usize>,
    #[arg(long)]
    pub msg: Option<String>,
    #[arg(long)]
    pub key_space: Option<u64>,
    #[arg(long, num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
}

/// Family selection shared by `game` and `verify`: a manifest, or a
/// deterministic synthetic family.
#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Plane width of the synthetic family.
    #[arg(long, default_value_t = 4, conflicts_with = "manifest")]
    pub n: usize,
    /// Number of synthetic bases r.
    #[arg(long, default_value_t = 1, conflicts_with = "manifest")]
    pub bases: usize,
    /// Payload bytes per synthetic base.
    #[arg(long, default_value_t = 64, conflicts_with = "manifest")]
    pub payload: usize,
    #[arg(long, default_value_t = 0, conflicts_with = "manifest")]
    pub family_seed: u64,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    pub detector: DetectorArg,
    #[command(flatten)]
    pub key_args: KeyArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Message m0 as hex.
    #[arg(long)]
    pub msg: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = crate::analysis::DEFAULT_THRESHOLD_P)]
    pub threshold: f64,
    /// Keys enumerated by the replay detector; defaults to min(2^ℓ, 2^16).
    #[arg(long)]
    pub key_space: Option<u64>,
    /// `generator` plays the reduction of the detector against G.
    #[arg(long, value_enum, default_value_t = TargetArg::Stego)]
    pub target: TargetArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub key_args: KeyArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Include the distance for every message.
    #[arg(long)]
    pub per_message: bool,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Structural(_) | Error::Config(_) | Error::Hex(_) => 2,
        Error::Capacity { .. }
        | Error::Parse { .. }
        | Error::NotInFamily
        | Error::Collision { .. }
        | Error::Io(_)
        | Error::Json(_) => 1,
    }
}

/// Runs the CLI against `args`, writing reports to `out` and diagnostics
/// to `err`. Returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
