use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use defring_core::hypothesis::{search, ParameterTuple};
use defring_core::report::{format_table, verify, VerificationReport, VerifyOptions};

#[derive(Parser)]
#[command(name = "defring", version, about = "Exact verification of universal deformation rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List parameter tuples satisfying the hypothesis.
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        max_ell: u64,
        #[arg(long)]
        max_q: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run every check for one tuple and emit a report.
    Verify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        a: u64,
        /// Working precision m; defaults to n + 2.
        #[arg(long)]
        precision: Option<u32>,
        /// Also count deformations over small rings by enumeration.
        #[arg(long)]
        bruteforce: bool,
        #[arg(long)]
        skip_h1_bruteforce: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Summarise saved reports.
    Table { reports: Vec<PathBuf> },
}

fn write_json(path: &PathBuf, value: serde_json::Result<String>) -> Result<(), String> {
    let mut text = value.map_err(|e| e.to_string())?;
    text.push('\n');
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Search { p, n, max_ell, max_q, json } => {
            let rows = search(p, n, max_ell, max_q).map_err(|e| e.to_string())?;
            println!("{:>4} {:>3} {:>4} {:>4} {:>3}", "ell", "q", "u", "a", "d");
            for r in &rows {
                let t = r.tuple;
                println!("{:>4} {:>3} {:>4} {:>4} {:>3}", t.ell, t.q, t.u, t.a, r.d);
            }
            if let Some(path) = json {
                write_json(&path, serde_json::to_string_pretty(&rows))?;
            }
            Ok(!rows.is_empty())
        }
        Command::Verify { p, n, ell, q, u, a, precision, bruteforce, skip_h1_bruteforce, json } => {
            let opts = VerifyOptions { tuple: ParameterTuple { p, n, ell, q, u, a }, precision, bruteforce, skip_h1_bruteforce };
            let report = verify(&opts).map_err(|e| e.to_string())?;
            if let Some(path) = json {
                write_json(&path, serde_json::to_string_pretty(&report))?;
            }
            print!("{}", format_table(std::slice::from_ref(&report)));
            for f in &report.overall.failures {
                eprintln!("failed: {f}");
            }
            Ok(report.passed())
        }
        Command::Table { reports } => {
            let parsed = reports
                .iter()
                .map(|path| {
                    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    serde_json::from_str::<VerificationReport>(&text).map_err(|e| format!("{}: {e}", path.display()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            print!("{}", format_table(&parsed));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
