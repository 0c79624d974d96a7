use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use apposition::cli::{self, ReportDocument};
use apposition::Error;

/// Mass spectra, Coxeter identities and eigenvector patterns for the
/// simple Lie algebras.
#[derive(Parser)]
#[command(name = "apposition", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mass spectrum and Cartan-eigenvector comparison for one type.
    Spectrum {
        /// Simple type, e.g. A7, D4, E8, G2.
        type_name: String,
        #[command(flatten)]
        output: OutputOpts,
        /// Override the default residual tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run every invariant suite; exit 0 iff all checks pass.
    Verify {
        /// Simple type (omit with --all).
        type_name: Option<String>,
        /// Verify every supported type of rank <= 8.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        output: OutputOpts,
        /// Override the default residual tolerances.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Cluster decomposition and PF-type permutations of the Cartan
    /// eigenvectors.
    Patterns {
        type_name: String,
        #[command(flatten)]
        output: OutputOpts,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Toda normal modes, dispersion residuals and convergence studies.
    Toda {
        type_name: String,
        /// Coupling scale m.
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        /// Base grid size.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(clap::Args)]
struct OutputOpts {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Emit CSV instead of text.
    #[arg(long)]
    csv: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(doc: &ReportDocument, opts: &OutputOpts) -> std::io::Result<()> {
    let rendered = if opts.json {
        cli::render_json(doc)
    } else if opts.csv {
        cli::render_csv(doc)
    } else {
        cli::render_text(doc)
    };
    match &opts.out {
        Some(path) => std::fs::write(path, rendered),
        None => {
            println!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match &args.command {
        Command::Spectrum { type_name, output, tol } => {
            cli::cmd_spectrum(type_name, *tol).map(|doc| (doc, output))
        }
        Command::Verify { type_name, all, output, tol } => {
            cli::cmd_verify(type_name.as_deref(), *all, *tol).map(|doc| (doc, output))
        }
        Command::Patterns { type_name, output, tol } => {
            cli::cmd_patterns(type_name, *tol).map(|doc| (doc, output))
        }
        Command::Toda { type_name, m, grid, output } => {
            cli::cmd_toda(type_name, *m, *grid).map(|doc| (doc, output))
        }
    };
    match result {
        Ok((doc, output)) => {
            if let Err(e) = emit(&doc, output) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if cli::document_passes(&doc) {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed:");
                if let Some(reports) = &doc.verification {
                    for rep in reports {
                        for c in rep.failed_checks() {
                            eprintln!(
                                "  {} {}: residual {:.3e} > tol {:.1e}",
                                rep.type_name, c.name, c.residual, c.tolerance
                            );
                        }
                    }
                }
                ExitCode::from(1)
            }
        }
        Err(Error::UnknownType(s)) => {
            eprintln!("unknown type `{s}`");
            ExitCode::from(2)
        }
        Err(Error::InvalidRank { family, rank }) => {
            eprintln!("invalid rank {rank} for family {family}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
