//! `price-kit`: validate, report and simulate evolutionary processes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cli::input::read_spec;
use cli::report::{build_report, non_finite_paths, Sections};
use cli::simulate::{simulate, write_csv};
use cli::CliError;
use measure_core::{tolerance, Error, Population};
use process_core::validate;

#[derive(Debug, Parser)]
#[command(name = "price-kit", version, about = "Price-equation diagnostics for evolutionary processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a description defines a valid process.
    Validate {
        /// Process description (JSON).
        file: PathBuf,
    },
    /// Compute the diagnostic report.
    Report(ReportArgs),
    /// Iterate an endomorphic process and write a trajectory table.
    Simulate {
        /// Process description (JSON).
        file: PathBuf,
        /// Number of generations (at most 64).
        #[arg(long, short = 'T', default_value_t = 10)]
        generations: usize,
        /// CSV output path (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Process description (JSON).
    file: PathBuf,
    /// Include the selection laws.
    #[arg(long)]
    laws: bool,
    /// Include entropies, reversibility and KS entropy.
    #[arg(long)]
    entropy: bool,
    /// Include quantum diagnostics (the diagonal embedding when no quantum section is given).
    #[arg(long)]
    quantum: bool,
    /// Include the open-process diagnostics.
    #[arg(long)]
    kgs: bool,
    /// Write the JSON report to this path instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl ReportArgs {
    fn sections(&self) -> Sections {
        if !(self.laws || self.entropy || self.quantum || self.kgs) {
            return Sections::ALL;
        }
        Sections { laws: self.laws, entropy: self.entropy, quantum: self.quantum, kgs: self.kgs }
    }
}

fn cmd_validate(path: &Path) -> Result<(), CliError> {
    let spec = read_spec(path)?;
    let source = spec.source()?;
    let types = spec.target_types()?;
    let target = match &spec.target_weights {
        Some(w) => Population::new(types, w.clone())?,
        None => {
            let p = spec.process()?;
            p.target().clone()
        }
    };
    let diag = validate(&source, &target, &spec.kernel)?;
    if !diag.passed {
        eprint!("{}", diag.table(&target));
        return Err(Error::Validation(format!(
            "disintegration residual {:e} exceeds tolerance {:e}",
            diag.max_residual,
            tolerance::current().rel
        ))
        .into());
    }
    println!(
        "ok: {} parent types -> {} child types, max relative residual {:e}",
        source.len(),
        target.len(),
        diag.max_residual
    );
    let p = spec.process()?;
    if let Some(next) = spec.next_process(&p)? {
        println!("ok: next process {} -> {} types", next.source().len(), next.target().len());
    }
    if let Some(open) = &spec.open {
        let o = open_process::OpenProcess::with_orphans(p.clone(), open.orphan_weights.clone())?;
        println!("ok: open process, parented proportion {}", o.p_parented());
    }
    if let Some(q) = &spec.quantum {
        let qp = q.process()?;
        println!(
            "ok: quantum process {} -> {} (positivity sample-checked on {} random pure states, not proven)",
            qp.source().dim(),
            qp.target().dim(),
            quantum::POSITIVITY_PROBES
        );
    }
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let spec = read_spec(&args.file)?;
    let report = build_report(&spec, args.sections())?;
    let value = serde_json::to_value(&report)?;
    let bad = non_finite_paths(&value);
    let text = serde_json::to_string_pretty(&value)?;
    match &args.json {
        Some(out) => {
            std::fs::write(out, text + "\n")?;
            println!("report written to {}", out.display());
        }
        None => println!("{text}"),
    }
    if !bad.is_empty() {
        return Err(Error::Degenerate(format!("non-finite values at {}", bad.join(", "))).into());
    }
    Ok(())
}

fn cmd_simulate(path: &Path, generations: usize, out: Option<&Path>) -> Result<(), CliError> {
    let spec = read_spec(path)?;
    let p = spec.process()?;
    let rows = simulate(&p, generations)?;
    match out {
        Some(o) => write_csv(&rows, std::fs::File::create(o)?)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(file),
        Command::Report(args) => cmd_report(args),
        Command::Simulate { file, generations, out } => cmd_simulate(file, *generations, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
