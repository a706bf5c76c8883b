use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use tmodels::{commands, scenarios, CliError, Format, Options, Report};

#[derive(Parser)]
#[command(
    name = "tmodels",
    version,
    about = "Integral models of t-motives and extension tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Series precision (overrides the manifest).
    #[arg(long, env = "TMODELS_PRECISION", global = true)]
    precision: Option<i64>,
    /// Append the elapsed wall time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Args)]
struct ManifestArgs {
    /// Path to the manifest.
    input: PathBuf,
    /// Coefficient place as a monic irreducible polynomial in t.
    #[arg(long)]
    ell: Option<String>,
    /// Largest level n of the l^n reductions.
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, determinant certificate, effectivity, bad places.
    Inspect(ManifestArgs),
    /// Maximal integral and good models and the good-reduction verdict.
    Model(ManifestArgs),
    /// Hodge polygon and weights.
    Polygons(ManifestArgs),
    /// Tests on the extension class of the manifest.
    Ext {
        #[command(flatten)]
        args: ManifestArgs,
        /// Class entries, one per coordinate (repeat the flag).
        #[arg(long)]
        class: Vec<String>,
        /// Comma-separated subset of split,torsion,integral,good-reduction,regulated.
        #[arg(long, value_delimiter = ',')]
        tests: Vec<String>,
    },
    /// Runs a canned scenario and checks its expected verdicts.
    Reproduce {
        /// One of counterexample-5.1, mornev, eta-torsion, frob-mismatch, carlitz-conjecture.
        name: String,
    },
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let opts = |a: &ManifestArgs, class: &[String], tests: &[String]| Options {
        ell: a.ell.clone(),
        n_max: a.n_max,
        precision: cli.precision,
        class: class.to_vec(),
        tests: tests.to_vec(),
    };
    let read = |a: &ManifestArgs| std::fs::read_to_string(&a.input);
    match &cli.command {
        Command::Inspect(a) => commands::inspect(&read(a)?, &opts(a, &[], &[])),
        Command::Model(a) => commands::model(&read(a)?, &opts(a, &[], &[])),
        Command::Polygons(a) => commands::polygons(&read(a)?, &opts(a, &[], &[])),
        Command::Ext { args, class, tests } => {
            commands::ext(&read(args)?, &opts(args, class, tests))
        }
        Command::Reproduce { name } => scenarios::reproduce(name, cli.precision),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Exit status 2 is reserved for undecided verdicts.
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            if cli.timing {
                report.push("elapsed_ms", start.elapsed().as_millis());
            }
            print!("{}", report.render(cli.format));
            ExitCode::from(report.status().exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(1)
        }
    }
}
