//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns what would be printed, so every path can be exercised without
//! spawning a process.

pub mod bench;
pub mod commands;
mod error;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use functor_he::quotient_he::Mode;

pub use error::CliError;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "functor-he",
    version,
    about = "Toy homomorphic schemes over finite functors"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output directory for `keygen`; output file for other commands.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair for the shift scheme.
    Keygen(KeygenArgs),
    /// Encrypt a residue with a secret key.
    Encrypt(EncryptArgs),
    /// Add ciphertexts using only the public key.
    Add(AddArgs),
    /// Decrypt a ciphertext.
    Decrypt(DecryptArgs),
    /// Encrypt two bits, combine them with OR or AND, decrypt.
    Bool(BoolArgs),
    /// Evaluate a monotone 2-DNF on encrypted inputs.
    Dnf(DnfArgs),
    /// Play the pattern-distinguishing game.
    SiGame(SiGameArgs),
    /// Decide subgraph containment through the quotient recognizer.
    ReduceCheck(ReduceCheckArgs),
    /// Type-check and normalize a term.
    Prove(ProveArgs),
    /// Encrypt the denotation of a shift-valued term.
    DenoteEncrypt(DenoteEncryptArgs),
    /// Time key generation against homomorphic addition.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub class_size: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    /// Extra dummy-only classes (sampled mode).
    #[arg(long, default_value_t = 0)]
    pub extra: usize,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    /// Secret key file.
    #[arg(long)]
    pub key: PathBuf,
    pub message: usize,
}

#[derive(Debug, Args)]
pub struct AddArgs {
    /// Public key file.
    #[arg(long)]
    pub public: PathBuf,
    /// Ciphertext files or inline JSON; summed left to right.
    #[arg(required = true, num_args = 2..)]
    pub ciphertexts: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// Ciphertext file or inline JSON.
    pub ciphertext: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoolOp {
    Or,
    And,
}

#[derive(Debug, Args)]
pub struct BoolArgs {
    #[arg(long, default_value_t = 11)]
    pub p: u64,
    #[arg(long, default_value_t = 13)]
    pub q: u64,
    #[arg(long, value_enum)]
    pub op: BoolOp,
    #[arg(value_parser = clap::value_parser!(u8).range(0..=1))]
    pub a: u8,
    #[arg(value_parser = clap::value_parser!(u8).range(0..=1))]
    pub b: u8,
}

#[derive(Debug, Args)]
pub struct DnfArgs {
    #[arg(long, default_value_t = 65521)]
    pub p: u64,
    #[arg(long, default_value_t = 65537)]
    pub q: u64,
    /// e.g. `x0&x1 | x2&x3`
    #[arg(long)]
    pub formula: String,
    /// Comma-separated bits, one per variable.
    #[arg(long)]
    pub inputs: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Coin,
    Profile,
    Canonical,
}

#[derive(Debug, Args)]
pub struct SiGameArgs {
    /// Graph file, or a name such as `K4`, `C5`, `P3`, `E2`.
    #[arg(long)]
    pub host: String,
    #[arg(long)]
    pub p0: String,
    #[arg(long)]
    pub p1: String,
    #[arg(long, value_enum, default_value_t = AdversaryArg::Coin)]
    pub adversary: AdversaryArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct ReduceCheckArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub host: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Full,
    Weak,
}

#[derive(Debug, Args)]
pub struct TermSource {
    /// The term itself.
    pub term: Option<String>,
    /// Read the term from a file instead.
    #[arg(long, conflicts_with = "term")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProveArgs {
    #[command(flatten)]
    pub source: TermSource,
    #[arg(long, default_value_t = functor_he::proof_lang::DEFAULT_FUEL)]
    pub fuel: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Full)]
    pub strategy: StrategyArg,
}

#[derive(Debug, Args)]
pub struct DenoteEncryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    #[command(flatten)]
    pub source: TermSource,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

impl TermSource {
    pub(crate) fn text(&self) -> Result<String, CliError> {
        match (&self.term, &self.file) {
            (Some(t), None) => Ok(t.clone()),
            (None, Some(path)) => read_text(path),
            _ => Err(CliError::Usage("give a term or --file".into())),
        }
    }
}

/// Parse `args` (including the program name) and run the subcommand.
/// Returns the text destined for standard output.
pub fn run<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Ok(e.to_string())
                }
                _ => Err(CliError::Usage(e.to_string())),
            }
        }
    };
    execute(&cli)
}

/// Run an already parsed command line.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.jobs)))?;
    let output = pool.install(|| commands::dispatch(cli))?;
    match (&cli.command, &cli.out) {
        (Command::Keygen(_), _) | (_, None) => Ok(output),
        (_, Some(path)) => {
            write_text(path, &output)?;
            Ok(String::new())
        }
    }
}
