use std::path::PathBuf;

use equifem_cli::commands;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "equifem",
    version,
    about = "Convergence studies for P1 finite elements on tensor-equilateral parallelogram meshes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a parallelogram whose uniform meshes are equilateral for the tensor
    GenDomain {
        #[arg(long, allow_negative_numbers = true)]
        a11: f64,
        #[arg(long, allow_negative_numbers = true)]
        a12: f64,
        #[arg(long, allow_negative_numbers = true)]
        a22: f64,
        /// Common energy of the three hat gradients on every triangle
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Certify the configured domain against the configured tensor at every level
    Check {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Solve one refinement level and dump nodal values next to the report path
    Solve {
        #[arg(short, long)]
        config: PathBuf,
        /// Subdivisions per parallelogram side
        #[arg(short, long)]
        n: usize,
    },
    /// Run the configured refinement study and write the convergence table
    Convergence {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Check the one-dimensional expansion and the two triangle identities
    EmVerify,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::GenDomain { a11, a12, a22, alpha } => commands::gen_domain(a11, a12, a22, alpha),
        Command::Check { config } => commands::check(&config),
        Command::Solve { config, n } => commands::solve(&config, n),
        Command::Convergence { config } => commands::convergence(&config),
        Command::EmVerify => commands::em_verify(),
    };
    if let Err(failure) = result {
        eprintln!("error: {}", failure.message());
        std::process::exit(failure.exit_code());
    }
}
