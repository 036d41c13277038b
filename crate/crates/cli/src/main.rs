//! Command-line front end: tangents, Cayley images, LDU diagonals, component
//! representatives and the closed-form suites.

mod commands;
mod format;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Input, Report};

#[derive(Debug, Parser)]
#[command(name = "cayley-bruhat", version)]
#[command(about = "Bruhat diagonals of Cartan-embedded symmetric spaces in Cayley coordinates")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Tolerance override for the command's checks.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// AIII, DIII, CI, CII, BDI (dispatched on parity), BDI_even or BDI_oddodd.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Coordinates as JSON, or @path to a JSON file.
    #[arg(long)]
    payload: Option<String>,
    /// Seed for random coordinates when no payload is given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SpaceArgs {
    fn input(&self) -> Input {
        Input {
            family: self.family.clone(),
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
            payload: self.payload.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the tangent X from coordinates and validate it.
    Build(SpaceArgs),
    /// Apply the Cayley map and check membership of the image.
    Cayley(SpaceArgs),
    /// Unpivoted LDU of Phi(X), or of a matrix given with --matrix.
    Factorize {
        #[command(flatten)]
        space: SpaceArgs,
        /// Matrix JSON {"n", "entries"}, or @path.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// The diagonal d(Phi(X)).
    D {
        #[command(flatten)]
        space: SpaceArgs,
        /// gauss, minor_ratio, cayley_det, fredholm, coroot_product or all.
        #[arg(long, default_value = "cayley_det")]
        method: String,
    },
    /// Cross-check every route to d plus membership, on a payload or seeded draws.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Draws per space when no payload is given.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Component representatives, one sign string per line.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        /// Construct witnesses and check d(Phi(tX)) -> w.
        #[arg(long)]
        check_limits: bool,
    },
    /// Closed-form suites against the determinant route.
    Golden {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Conjugacy of the standard and antidiagonal representations.
    VerifyRep {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.tol;
    match &cli.command {
        Command::Build(space) => commands::build(&space.input(), tol),
        Command::Cayley(space) => commands::cayley_cmd(&space.input(), tol),
        Command::Factorize { space, matrix } => commands::factorize(&space.input(), matrix.as_deref(), tol),
        Command::D { space, method } => commands::d(&space.input(), method),
        Command::Verify { space, samples } => commands::verify(&space.input(), *samples, tol),
        Command::Enumerate { space, check_limits } => commands::enumerate(&space.input(), *check_limits),
        Command::Golden { suite, seed } => commands::golden_cmd(suite, *seed, tol),
        Command::VerifyRep { n, samples, seed } => commands::verify_rep(*n, *samples, *seed, tol),
    }
}

fn emit(format: Format, json: &serde_json::Value, table: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(json).expect("JSON values serialize")),
        Format::Table => println!("{table}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            emit(cli.format, &report.json, &report.table);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(CliError::Check(json, table)) => {
            emit(cli.format, &json, &table);
            ExitCode::from(2)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
