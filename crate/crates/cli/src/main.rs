use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use extensive_core::runner::{run, Format, RunConfig};
use extensive_core::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

/// Brute-force checks of sums, closures and factorizations in finite contexts.
#[derive(Debug, Parser)]
#[command(name = "extensive", version)]
struct Args {
    /// finset or finpre.
    #[arg(long, default_value = "finpre")]
    context: String,

    /// Closure family (alexandrov, identity, indiscrete); repeatable. Defaults to all.
    #[arg(long = "closure")]
    closures: Vec<String>,

    /// Largest carrier size enumerated.
    #[arg(long, default_value_t = 3)]
    bound: usize,

    /// Bound for checker E. Defaults to min(bound, 2).
    #[arg(long)]
    e_bound: Option<usize>,

    /// Bound for checkers G and H. Defaults to min(bound, 2).
    #[arg(long)]
    proper_bound: Option<usize>,

    /// validate, adjunctions, biproduct, A..H or all; repeatable.
    #[arg(long = "theorem", default_value = "all")]
    theorems: Vec<String>,

    /// JSON file with extra objects.
    #[arg(long)]
    objects: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,

    /// Record timings in the structured report.
    #[arg(long)]
    timings: bool,
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownContext(_)
            | Error::UnknownFamily(_)
            | Error::UnknownTheorem(_)
            | Error::BoundOutOfRange(_)
            | Error::Description(_)
            | Error::FlavourMismatch
    )
}

fn main() -> ExitCode {
    let args = Args::parse();
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Structured => Format::Structured,
    };
    let config = RunConfig {
        context: args.context,
        families: args.closures,
        bound: args.bound,
        e_bound: args.e_bound,
        proper_bound: args.proper_bound,
        theorems: args.theorems,
        objects: args.objects,
        format,
        timings: args.timings,
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if is_usage_error(&e) { 2 } else { 1 });
        }
    };
    let out = report.render(format);
    match &args.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!("overall: {}", if report.passed { "pass" } else { "FAIL" });
        }
        None => print!("{out}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
