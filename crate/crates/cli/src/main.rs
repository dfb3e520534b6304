use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sympair::Limits;
use sympair_cli::{construct, ec_search, table, verify, CliError, CliResult, CodeFile, TABLE_HEADER};

#[derive(Parser)]
#[command(name = "sympair", version, about = "Construct and verify MDS symbol-pair codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and write it as a JSON code file.
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        /// Minimum pair distance.
        #[arg(long)]
        dpair: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Output path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Node cap for the ovoid ordering search.
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Re-verify a code file.
    Verify {
        path: PathBuf,
        /// Also enumerate all codewords when the code is small enough.
        #[arg(long)]
        oracle: bool,
    },
    /// Construct and verify every feasible length, as CSV.
    Table {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        dpair: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Find the first maximal elliptic curve over GF(q).
    EcSearch {
        #[arg(long)]
        q: u32,
    },
}

fn limits(max_states: Option<usize>) -> Limits {
    let mut l = Limits::default();
    if let Some(m) = max_states {
        l.max_states = m;
    }
    l
}

fn write_out(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Construct {
            q,
            n,
            dpair,
            format: Format::Json,
            out,
            max_states,
        } => {
            let file = construct(q, n, dpair, &limits(max_states))?;
            write_out(&out, &file.to_json())?;
            eprintln!(
                "constructed {} code: q = {}, n = {}, k = {}, d_pair = {}, route {}",
                file.construction.as_str(),
                file.q,
                file.n,
                file.k,
                file.d_pair,
                file.certificate.route
            );
            Ok(())
        }
        Command::Verify { path, oracle } => {
            let text =
                std::fs::read_to_string(&path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let file = CodeFile::from_json(&text)?;
            let v = verify(&file, oracle, Limits::default().codeword_cap)?;
            if let Some(d) = v.oracle {
                println!("oracle: brute-force pair distance {d}");
            } else if v.oracle_skipped {
                println!("oracle: skipped, q^k exceeds the enumeration cap");
            }
            match &v.failure {
                None => {
                    println!("verified: d_pair = {} via {} ({})", file.d_pair, v.route, v.basis);
                    Ok(())
                }
                Some(f) => {
                    println!("FAILED: condition {} witness {:?}", f.condition, f.witness);
                    Err(CliError::Verification(f.to_string()))
                }
            }
        }
        Command::Table {
            q,
            dpair,
            out,
            max_states,
        } => {
            let rows = table(q, dpair, &limits(max_states))?;
            let mut text = String::from(TABLE_HEADER);
            text.push('\n');
            for r in &rows {
                text.push_str(&r.csv());
                text.push('\n');
            }
            write_out(&out, &text)?;
            if rows.iter().all(|r| r.verified) {
                Ok(())
            } else {
                Err(CliError::Verification("some rows did not verify".to_string()))
            }
        }
        Command::EcSearch { q } => {
            let r = ec_search(q)?;
            let [a1, a2, a3, a4, a6] = r.coefficients;
            println!("q = {}", r.q);
            println!("curve: y^2 + {a1}xy + {a3}y = x^3 + {a2}x^2 + {a4}x + {a6}");
            println!("points: {}", r.points);
            println!("n_max: {}", r.n_max);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
