//! `solvcrypt`: key generation, encryption, homomorphic evaluation,
//! decryption, the factoring demonstration and benchmarks.

mod bench;
mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "solvcrypt", version, about = "Homomorphic encryption over finite solvable groups")]
struct Cli {
    /// Seed for the deterministic random source; OS entropy when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair for a group.
    ///
    /// GROUP is one of `cyclic:<p>`, `semidirect:<file>`, `table:<file>`
    /// or `builtin:<S3|Z4|Z6|D4|Q8|A5>`.
    Keygen {
        #[arg(long)]
        group: String,
        /// Prime bit length of every factor modulus.
        #[arg(long, default_value_t = 64)]
        bits: u32,
        /// Kernel transformations per encryption.
        #[arg(long, default_value_t = solvcrypt::composite::DEFAULT_BLINDING)]
        blinding: usize,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "sec")]
        secret: PathBuf,
    },
    /// Encrypt a group element given by label or plaintext index.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        element: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decrypt a ciphertext and print the element label and index.
    Decrypt {
        #[arg(long = "sec")]
        secret: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Multiply or invert ciphertexts without the secret key.
    Eval {
        #[arg(long = "pub")]
        public: PathBuf,
        #[command(subcommand)]
        op: EvalOp,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Re-blind a ciphertext.
    Rerandomize {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a modulus with an m-th root oracle built from its secret key.
    Attack {
        /// A `CYCKEY` secret key or a `COMPKEY` secret key file.
        #[arg(long = "sec")]
        secret: PathBuf,
        /// Factor of a composite key (1-based).
        #[arg(long, default_value_t = 1)]
        factor: usize,
        /// Expected modulus; must match the key.
        #[arg(long)]
        n: Option<String>,
        /// Expected plaintext order; must match the key.
        #[arg(long)]
        m: Option<u32>,
        /// Number of independent runs; their mean iteration count is reported.
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long, default_value_t = 1024)]
        budget: usize,
    },
    /// Time keygen, encrypt, eval and decrypt.
    Bench {
        /// Prime bit lengths.
        #[arg(long, value_delimiter = ',', default_values_t = vec![256u32, 512, 1024])]
        sizes: Vec<u32>,
        /// Groups among Z2, S3 and Z2wrZ2 (orders 2, 6, 8).
        #[arg(long, value_delimiter = ',', default_values_t = vec!["Z2".to_string(), "S3".to_string(), "Z2wrZ2".to_string()])]
        groups: Vec<String>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = solvcrypt::composite::DEFAULT_BLINDING)]
        blinding: usize,
        /// Extra encrypt rows `encrypt_s<k>` for these blinding lengths.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EvalOp {
    /// Product of two ciphertext files.
    Mul { c1: PathBuf, c2: PathBuf },
    /// Inverse of a ciphertext file.
    Inv { c: PathBuf },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut rng = commands::make_rng(cli.seed);
    match cli.command {
        Command::Keygen { group, bits, blinding, public, secret } => {
            commands::keygen(&group, bits, blinding, &public, &secret, &mut rng)
        }
        Command::Encrypt { public, element, out } => commands::encrypt(&public, &element, out.as_deref(), &mut rng),
        Command::Decrypt { secret, input } => commands::decrypt(&secret, &input),
        Command::Eval { public, op, out } => match op {
            EvalOp::Mul { c1, c2 } => commands::eval_mul(&public, &c1, &c2, out.as_deref()),
            EvalOp::Inv { c } => commands::eval_inv(&public, &c, out.as_deref()),
        },
        Command::Rerandomize { public, input, out } => commands::rerandomize(&public, &input, out.as_deref(), &mut rng),
        Command::Attack { secret, factor, n, m, runs, budget } => {
            commands::attack(&secret, factor, n.as_deref(), m, runs, budget, &mut rng)
        }
        Command::Bench { sizes, groups, trials, blinding, sweep, format, out } => {
            let opts = bench::Options { sizes, groups, trials, blinding, sweep, format };
            bench::run(&opts, out.as_deref(), &mut rng)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
