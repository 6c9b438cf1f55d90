use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "heisenharm",
    version,
    about = "Exact solid harmonics for the Heisenberg sublaplacian"
)]
struct Cli {
    /// Output format; CSV is only available for flat coefficient tables.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Write results to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the m+1 basis harmonics of degree m.
    Basis {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, visible_alias = "m")]
        degree: u32,
    },
    /// Run every consistency check for all degrees up to --max-degree.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long)]
        max_degree: u32,
    },
    /// Evaluate one harmonic at a spherical point through both routes.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long, visible_alias = "m")]
        degree: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        rho: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        phi: f64,
    },
    /// Classical R^3 harmonics and Gegenbauer polynomials.
    Classical {
        #[command(subcommand)]
        command: ClassicalCommand,
    },
    /// Evaluate the fundamental solution of L_alpha at (z, t).
    Fundamental {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_re: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_im: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
enum ClassicalCommand {
    /// Coefficients of P_k^lambda in increasing powers of x.
    Gegenbauer {
        /// Rational, e.g. 3/2.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        k: u32,
    },
    /// Gram matrix of P_0^lambda .. P_kmax^lambda against the closed-form norms.
    Orthogonality {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        kmax: u32,
    },
    /// The 2m+1 classical solid harmonics of degree m.
    R3Basis {
        #[arg(long, visible_alias = "m")]
        degree: u32,
    },
}

/// What a command produced: the rendered document and whether every check passed.
pub struct Rendered {
    pub body: String,
    pub passed: bool,
    /// Extra diagnostic for standard error when `passed` is false.
    pub diagnostic: Option<String>,
}

fn run(cli: Cli) -> anyhow::Result<Rendered> {
    let fmt = cli.format;
    match cli.command {
        Command::Basis { alpha, degree } => commands::basis(alpha, degree, fmt),
        Command::Verify { alpha, max_degree } => commands::verify(alpha, max_degree, fmt),
        Command::Eval {
            alpha,
            degree,
            n,
            rho,
            theta,
            phi,
        } => commands::eval(alpha, degree, n, rho, theta, phi, fmt),
        Command::Classical { command } => match command {
            ClassicalCommand::Gegenbauer { lambda, k } => commands::gegenbauer(&lambda, k, fmt),
            ClassicalCommand::Orthogonality { lambda, kmax } => {
                commands::orthogonality(&lambda, kmax, fmt)
            }
            ClassicalCommand::R3Basis { degree } => commands::r3_basis_cmd(degree, fmt),
        },
        Command::Fundamental {
            alpha,
            z_re,
            z_im,
            t,
        } => commands::fundamental(alpha, z_re, z_im, t, fmt),
    }
}

fn emit(output: Option<&PathBuf>, body: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let rendered = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(output.as_ref(), &rendered.body) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if rendered.passed {
        ExitCode::SUCCESS
    } else {
        if let Some(d) = rendered.diagnostic {
            eprintln!("{d}");
        }
        ExitCode::FAILURE
    }
}
