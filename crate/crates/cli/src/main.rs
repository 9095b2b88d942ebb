//! `symspace`: verification suites, Trotter tables and quotients for the
//! catalog models.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage, 3 quotient gate rejection.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "symspace", version, about = "Symmetric spaces of matrix symmetric pairs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Catalog model, `name` or `name(params)`, e.g. `sphere(2)`.
    #[arg(long, global = true, default_value = "sphere")]
    model: String,
    /// Model parameters, e.g. `1,3` for `grassmann`.
    #[arg(long, global = true, default_value = "")]
    params: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    tol_abs: Option<f64>,
    #[arg(long, global = true)]
    tol_rel: Option<f64>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Axiom and functoriality suites on a model, or axioms of a tensor file.
    Verify {
        /// JSON tensor descriptor to check instead of a model.
        #[arg(long)]
        tensor: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Trotter convergence table: (k, error), or (k, l, error) with `--z`.
    Trotter {
        /// `g-` coordinates, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Smallest k; k doubles up to `--k-max`.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        k_min: u64,
        #[arg(long, default_value_t = 4096)]
        k_max: u64,
        /// Fixed inner count for the bracket formula (default l = k).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        l: Option<u64>,
    },
    /// Quotient by an ideal: a designated ideal name or `;`-separated vectors.
    Quotient {
        #[arg(long, allow_hyphen_values = true)]
        ideal: Option<String>,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Lie triple systems of the designated subspaces.
    Subspace,
    /// The catalog.
    Models,
}

/// Process outcome with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    pub fn check(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.verb {
        Verb::Verify { tensor, samples } => commands::verify(&cli.common, tensor.as_deref(), *samples),
        Verb::Trotter { x, y, z, k_min, k_max, l } => {
            commands::trotter(&cli.common, x, y, z.as_deref(), *k_min, *k_max, *l)
        }
        Verb::Quotient { ideal, samples } => commands::quotient(&cli.common, ideal.as_deref(), *samples),
        Verb::Subspace => commands::subspace(&cli.common),
        Verb::Models => commands::models(&cli.common),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("symspace: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
