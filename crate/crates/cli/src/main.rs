//! `ulbcheck`: load space files, run verification suites, compare identity
//! neighborhood bases and run the model demos.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ulb_core::report::{exit_code, render, Format, SuiteReport, Verdict};
use ulb_core::space::{load_space, Bundle};
use ulb_core::suite;

#[derive(Parser)]
#[command(
    name = "ulbcheck",
    version,
    about = "Verify uniform structures and bornologies on finite models"
)]
struct Cli {
    /// Report layout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a space file.
    Validate { file: PathBuf },
    /// Run one suite (or `all`) against a space file.
    Check {
        file: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cap on randomized instances.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Compare two identity neighborhood bases, written `B@i,… / B@i,…`.
    Compare {
        file: PathBuf,
        #[arg(long)]
        bases: String,
    },
    /// Run a model demo: qorder-separations, sigma-suite or symz-examples.
    Demo {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<usize>,
    },
}

fn summary(bundle: &Bundle) -> SuiteReport {
    let space = &bundle.space;
    let f = space.filtration();
    let mut rep = SuiteReport::new("validate", "file", Verdict::Pass)
        .with("carrier", bundle.size())
        .with("depth", f.depth())
        .with("basis_sets", space.bornology().sets().len())
        .with(
            "certified_index",
            space
                .certified_index()
                .map_or("none".to_string(), |c| c.to_string()),
        );
    if let Some(m) = &bundle.maps {
        rep.push("maps", m.len());
    }
    if let Some(g) = &bundle.group {
        rep.push("group_order", g.group.order());
        rep.push("automorphisms", g.automorphisms.len());
    }
    if let Some(m) = &bundle.measures {
        rep.push("measures", m.family.measures().len());
    }
    rep
}

fn run(cli: &Cli) -> ulb_core::Result<Vec<SuiteReport>> {
    match &cli.command {
        Command::Validate { file } => Ok(vec![summary(&load_space(file)?)]),
        Command::Check {
            file,
            suite,
            seed,
            budget,
        } => suite::run_suite(&load_space(file)?, suite, *seed, *budget),
        Command::Compare { file, bases } => Ok(vec![suite::compare(&load_space(file)?, bases)?]),
        Command::Demo { name, seed, budget } => suite::demo(name, *seed, *budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Records => Format::Records,
    };
    match run(&cli) {
        Ok(reports) => {
            print!("{}", render(&reports, format));
            ExitCode::from(exit_code(&reports) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
