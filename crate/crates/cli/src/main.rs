//! Experiment driver for the ellipsoidal-harmonics library.
//!
//! Each subcommand reproduces one experiment as a CSV table; see the README
//! for the list and typical invocations. Output is deterministic: identical
//! arguments produce byte-identical CSV.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ellharm::quad::TransformKind;

#[derive(Parser)]
#[command(name = "ellharm", version, about = "Ellipsoidal harmonic expansion experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalization constants gamma_n^p for every p at one order.
    Gamma {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        /// Harmonic order.
        #[arg(long)]
        n: usize,
        /// Quadrature transform: tanh-sinh, tanh or erf.
        #[arg(long, default_value = "tanh-sinh")]
        scheme: TransformKind,
        /// Per-part relative tolerance for the adaptive quadrature.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Work-precision comparison of the three transforms on one gamma_n^p.
    QuadCompare {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        /// Harmonic index within the order.
        #[arg(long)]
        p: usize,
        /// Fixed rule levels to evaluate (evaluation budgets).
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6,7,8")]
        levels: Vec<u32>,
        /// Target digits p fixing the node cutoff 10^(-2p).
        #[arg(long, default_value_t = 15)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Near-sphere solvation energies against the Born ion.
    BornLimit {
        /// Deviations Δ for semi-axes (1+Δ, 1+Δ/5, 1+Δ/10).
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3")]
        deltas: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        eps_in: f64,
        #[arg(long, default_value_t = 80.0)]
        eps_out: f64,
        /// Expansion truncation order.
        #[arg(long, default_value_t = 20)]
        order: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solvation free energy vs truncation order for a configured model.
    Solvate {
        /// JSON model configuration.
        #[arg(long)]
        config: PathBuf,
        /// Truncation orders to report.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Override the config's charge seed (seeded configs only).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ellipsoidal vs spherical Coulomb expansion error at one point.
    ExpandCompare {
        #[arg(long)]
        config: PathBuf,
        /// Evaluation point as x,y,z.
        #[arg(long, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
        point: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Gamma {
            a,
            b,
            c,
            n,
            scheme,
            tol,
            out,
        } => commands::cmd_gamma(a, b, c, n, scheme, tol, out.as_ref()),
        Command::QuadCompare {
            a,
            b,
            c,
            n,
            p,
            levels,
            digits,
            out,
        } => commands::cmd_quad_compare(a, b, c, n, p, &levels, digits, out.as_ref()),
        Command::BornLimit {
            deltas,
            eps_in,
            eps_out,
            order,
            tol,
            out,
        } => commands::cmd_born_limit(&deltas, eps_in, eps_out, order, tol, out.as_ref()),
        Command::Solvate {
            config,
            orders,
            tol,
            seed,
            out,
        } => commands::cmd_solvate(&config, &orders, tol, seed, out.as_ref()),
        Command::ExpandCompare {
            config,
            point,
            orders,
            tol,
            seed,
            out,
        } => {
            let point = [point[0], point[1], point[2]];
            commands::cmd_expand_compare(&config, point, &orders, tol, seed, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
