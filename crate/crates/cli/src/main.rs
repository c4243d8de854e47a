use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quiverlab::files::{bundled_names, QuiverSpec, CORPUS_ENV};
use quiverlab::runner::scenario_to_toml;
use quiverlab::{generate, run, Format, RunOptions, Scenario, Suite};

#[derive(Parser)]
#[command(name = "quiverlab", version, about = "Exact verification suites for quiver varieties and Hecke correspondences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario: a bundled name, a path, or a file in the corpus directory.
    Run {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Sample count for every selected suite.
        #[arg(long)]
        samples: Option<usize>,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Emit a scenario containing a seeded random Hecke walk.
    Gen {
        /// Preset quiver: jordan, a2 or two-loop.
        #[arg(long)]
        quiver: String,
        /// Framing vector, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the available suites and bundled scenarios.
    ListSuites,
}

fn write_out(out: Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            seed,
            samples,
            suites,
            out,
            format,
        } => (|| -> Result<bool, String> {
            let sc = Scenario::load(&scenario).map_err(|e| e.to_string())?;
            let suites = suites.iter().map(|s| Suite::from_name(s)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            let report = run(&sc, &RunOptions { seed, samples, suites }).map_err(|e| e.to_string())?;
            let fmt = match format {
                OutputFormat::Text => Format::Text,
                OutputFormat::Structured => Format::Structured,
            };
            write_out(out, &report.render(fmt).map_err(|e| e.to_string())?)?;
            for c in report.checks.iter().filter(|c| c.fails_run()) {
                let at = c.context.as_deref().map(|s| format!(" at {s}")).unwrap_or_default();
                eprintln!("FAIL {} [{}] expected {} computed {}{at}", c.id, c.anchor, c.expected, c.computed);
            }
            Ok(!report.failed())
        })(),
        Command::Gen { quiver, w, length, seed, out } => (|| -> Result<bool, String> {
            let f = generate(QuiverSpec::preset(&quiver), w, length, seed).map_err(|e| e.to_string())?;
            write_out(out, &scenario_to_toml(&f).map_err(|e| e.to_string())?)?;
            Ok(true)
        })(),
        Command::ListSuites => {
            for s in Suite::ALL {
                println!("{:<11} {}", s.name(), s.description());
            }
            println!();
            println!("bundled scenarios: {}", bundled_names().join(", "));
            println!("corpus directory: ${CORPUS_ENV}");
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
