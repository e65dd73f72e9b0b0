use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wzmahler_core::numkernel::PrecisionCtx;
use wzmahler_core::registry::{
    exit_code, lookup, registry_entries, reports_to_json, reports_to_text, run_all_with_tol,
    run_check_with_tol, summary, CheckReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "wzmahler",
    version,
    about = "Verify WZ, Mahler measure and elliptic dilogarithm identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    bits: u32,

    /// Replace each entry's tolerance, e.g. 1e-20.
    #[arg(long, global = true)]
    tol: Option<String>,

    /// Series term budget.
    #[arg(long, global = true)]
    max_terms: Option<usize>,

    /// Worker threads for `all`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print only failures and the summary line.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check one identity.
    Verify { id: String },
    /// Check every identity whose id contains the filter.
    All {
        #[arg(long)]
        filter: Option<String>,
    },
    /// List the registry.
    List,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn emit(reports: &[CheckReport], cli: &Cli) {
    match cli.format {
        Format::Json => println!("{}", reports_to_json(reports)),
        Format::Text => {
            let shown: Vec<CheckReport> = if cli.quiet {
                reports
                    .iter()
                    .filter(|r| !r.status.is_pass())
                    .cloned()
                    .collect()
            } else {
                reports.to_vec()
            };
            print!("{}", reports_to_text(&shown));
            println!("{}", summary(reports));
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        return usage_error("--jobs must be positive");
    }
    let mut ctx = match PrecisionCtx::new(cli.bits) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if let Some(n) = cli.max_terms {
        ctx = match ctx.with_max_terms(n) {
            Ok(c) => c,
            Err(e) => return usage_error(e),
        };
    }
    if let Some(t) = &cli.tol {
        match ctx.parse(t) {
            Ok(v) if v > 0 => {}
            _ => return usage_error(format!("--tol must be a positive decimal, got `{t}`")),
        }
    }
    let tol = cli.tol.as_deref();
    match &cli.command {
        Command::List => {
            let mut out = std::io::stdout().lock();
            for r in registry_entries() {
                let line = match cli.format {
                    Format::Text => format!(
                        "{:<28} {:<20} tol {:<6} {}",
                        r.id,
                        r.kind.to_string(),
                        r.tol,
                        r.description
                    ),
                    Format::Json => serde_json::json!({"id": r.id, "kind": r.kind, "tol": r.tol, "params": r.params, "description": r.description}).to_string(),
                };
                // A closed pipe (e.g. `| head`) ends the listing.
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Verify { id } => {
            if lookup(id).is_none() {
                return usage_error(format!("unknown identity `{id}`"));
            }
            match run_check_with_tol(id, &ctx, tol) {
                Ok(rep) => {
                    let reports = [rep];
                    emit(&reports, &cli);
                    ExitCode::from(exit_code(&reports) as u8)
                }
                Err(e) => usage_error(e),
            }
        }
        Command::All { filter } => {
            let (reports, code) = run_all_with_tol(filter.as_deref(), cli.jobs, &ctx, tol);
            emit(&reports, &cli);
            ExitCode::from(code as u8)
        }
    }
}
