use clap::{Parser, Subcommand};
use harmonia_cli::{run, Format, PolynomialInput, RunConfig};
use std::path::PathBuf;

/// Converging lower and upper bounds for minima of homogeneous polynomials
/// on the unit sphere.
#[derive(Parser)]
#[command(name = "harmonia", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the product cubature rule of algebraic degree 2t on S^{n-1}
    Cubature {
        /// Ambient dimension n (the rule lives on S^{n-1})
        #[arg(long)]
        n: usize,
        /// Half the algebraic degree
        #[arg(long)]
        t: usize,
        /// Print the maximum exactness residual instead of the node table
        #[arg(long)]
        verify: bool,
        /// Write the node CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Harmonic decomposition of a form, emitted as a JSON array indexed by 2j
    Decompose {
        /// Polynomial JSON file
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Built-in example form (motzkin|robinson)
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Kernel coefficients in the normalized Gegenbauer basis
    Kernel {
        #[arg(long)]
        n: usize,
        /// Target degree parameter (required for fangfawzi)
        #[arg(long)]
        k: Option<usize>,
        /// Kernel half-degree
        #[arg(long)]
        s: usize,
        /// Kernel family (power|fangfawzi)
        #[arg(long)]
        kind: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep hierarchy levels, reporting tau and the lower/upper bounds
    Bound {
        /// Polynomial JSON file
        #[arg(long)]
        poly: Option<PathBuf>,
        /// Built-in example form (motzkin|robinson)
        #[arg(long)]
        builtin: Option<String>,
        /// Kernel family (power|fangfawzi)
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        s_min: usize,
        #[arg(long)]
        s_max: usize,
        /// Output encoding (csv|json)
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn build_config(cli: Cli) -> harmonia::Result<RunConfig> {
    Ok(match cli.command {
        Command::Cubature { n, t, verify, out } => RunConfig::Cubature { n, t, verify, out },
        Command::Decompose { poly, builtin, out } => RunConfig::Decompose {
            input: PolynomialInput::from_options(poly, builtin)?,
            out,
        },
        Command::Kernel { n, k, s, kind, out } => RunConfig::Kernel {
            n,
            k,
            s,
            kind: kind.parse()?,
            out,
        },
        Command::Bound {
            poly,
            builtin,
            kernel,
            s_min,
            s_max,
            format,
            out,
        } => RunConfig::Bound {
            input: PolynomialInput::from_options(poly, builtin)?,
            kernel: kernel.parse()?,
            s_min,
            s_max,
            format: format.parse::<Format>()?,
            out,
        },
    })
}

fn main() {
    let cli = Cli::parse();
    let code = match build_config(cli) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            harmonia_cli::exit_code(&e)
        }
    };
    std::process::exit(code);
}
