use std::process::ExitCode;

use clap::{Parser, Subcommand};
use multiber::cli::{cmd_affine, cmd_ber, cmd_decompose, cmd_em, cmd_fourier, cmd_jump, cmd_plot1d, SystemDescription};
use multiber::Error;

/// Multiple Bernoulli series of lattice vector systems.
#[derive(Parser)]
#[command(name = "multiber", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tope key, tope polynomial and value at a regular point.
    Ber {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Jump across the wall separating two adjacent topes.
    Jump {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        at1: String,
        #[arg(long, allow_hyphen_values = true)]
        at2: String,
    },
    /// Decomposition over admissible affine subspaces.
    Decompose {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        radius: Option<String>,
    },
    /// Euler-MacLaurin check with a Gaussian `a,c1,...,cr`.
    Em {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        gaussian: String,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long, default_value_t = 0.0625)]
        step: f64,
    },
    /// Symmetric partial Fourier sum.
    Fourier {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long = "N", default_value_t = 100)]
        n: i64,
        #[arg(long)]
        cesaro: bool,
    },
    /// Affine series value (complex).
    Affine {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// CSV samples of a one-dimensional series.
    Plot1d {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long, default_value_t = 201)]
        samples: usize,
    },
}

fn load(file: &str) -> Result<SystemDescription, Error> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::InvalidInput(format!("{file}: {e}")))?;
    SystemDescription::parse(&text)
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Ber { file, at } => cmd_ber(&load(&file)?, &at),
        Command::Jump { file, at1, at2 } => cmd_jump(&load(&file)?, &at1, &at2),
        Command::Decompose { file, beta, at, radius } => cmd_decompose(&load(&file)?, &beta, &at, radius.as_deref()),
        Command::Em { file, gaussian, radius, step } => cmd_em(&load(&file)?, &gaussian, radius, step),
        Command::Fourier { file, at, n, cesaro } => cmd_fourier(&load(&file)?, &at, n, cesaro),
        Command::Affine { file, at } => cmd_affine(&load(&file)?, &at),
        Command::Plot1d { file, range, samples } => cmd_plot1d(&load(&file)?, &range, samples),
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("MULTIBER_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: MULTIBER_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
