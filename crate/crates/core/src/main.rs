use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use bigerm::bigerm::BigermInput;
use bigerm::equivalence::{decide_equivalence, BranchOrder};
use bigerm::normalform::{invariants, normal_form, Source, DEFAULT_CAP};
use bigerm::selftest::{run_selftest, SelftestConfig};
use bigerm::table::{run_table, to_markdown, TableConfig, DEFAULT_PAIRS};
use bigerm::valuesets::{value_set, SetKind, VsError};

#[derive(Parser)]
#[command(name = "bigerm", version, about = "Invariants, normal forms and equivalence of two-branch plane curve germs")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest truncation order the analysis may use.
    #[arg(long, global = true, env = "BIGERM_TRUNC_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Value sets, conductor, maximal points and branch data.
    Invariants { input: String },
    /// Normal form and family.
    NormalForm { input: String },
    /// Decide equivalence (exit 0 equivalent, 1 not equivalent, 2 failure).
    Equiv { first: String, second: String },
    /// Regenerate the classification table by random sampling.
    Table {
        /// Multiplicity pairs such as `2,3`; all rows by default.
        #[arg(long, value_parser = parse_pair, num_args = 1..)]
        pairs: Vec<(usize, usize)>,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        samples: usize,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Smaller sample counts.
        #[arg(long)]
        quick: bool,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `m1,m2`, got `{s}`"))?;
    let n = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    Ok((n(a)?, n(b)?))
}

/// Reads a file, `-` for stdin, or takes the argument itself as input text.
fn read_input(arg: &str) -> Result<Source, String> {
    let text = if arg == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| e.to_string())?
    } else if PathBuf::from(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?
    } else {
        arg.replace(';', "\n")
    };
    BigermInput::parse(&text).map(Source::Input).map_err(|e| format!("{arg}: {e}"))
}

fn print_json(v: &serde_json::Value) {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn invariants_cmd(src: &Source, cli: &Cli) -> Result<(), String> {
    let inv = invariants(src, cli.cap).map_err(|e| e.to_string())?;
    let lambda = match value_set(&inv.phi, SetKind::Lambda, inv.gamma.window()) {
        Ok((set, _)) => set,
        Err(VsError::ConductorNotDetected { partial }) => *partial,
        Err(e) => return Err(e.to_string()),
    };
    if cli.json {
        let mut v = inv.to_json();
        v["lambda"] = lambda.to_json();
        print_json(&v);
        return Ok(());
    }
    let (m1, m2) = inv.multiplicity();
    println!("germ:               {}", inv.phi);
    println!("multiplicities:     ({m1}, {m2})");
    println!("intersection:       {}", inv.intersection);
    for (i, s) in inv.semigroups.iter().enumerate() {
        println!("branch {} semigroup: <{:?}>, conductor {}", i + 1, s.generators(), s.conductor());
    }
    println!("conductor:          {:?}", inv.conductor());
    println!("lambda[delta] conductor: {:?}", inv.lambda_delta_conductor());
    let maximal = |s: &bigerm::valuesets::ValueSet| s.maximal_points().map(|m| format!("{m:?}")).unwrap_or_else(|e| e.to_string());
    println!("gamma maximal points:  {}", maximal(&inv.gamma));
    println!("lambda maximal points: {}", maximal(&lambda));
    println!("lambda[delta] maximal points: {}", maximal(&inv.lambda_delta));
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Invariants { input } => {
            invariants_cmd(&read_input(input)?, cli)?;
        }
        Command::NormalForm { input } => {
            let nf = normal_form(&read_input(input)?, cli.cap).map_err(|e| e.to_string())?;
            if cli.json {
                print_json(&nf.to_json());
            } else {
                println!("{}", nf.render());
                println!("family: {}", nf.family());
            }
        }
        Command::Equiv { first, second } => {
            let v = decide_equivalence(&read_input(first)?, &read_input(second)?, cli.cap).map_err(|e| e.to_string())?;
            if cli.json {
                print_json(&v.to_json());
            } else if v.equivalent {
                let order = match v.order {
                    Some(BranchOrder::Swapped) => "after swapping the branches",
                    _ => "with the branches as given",
                };
                println!("equivalent {order}, case {}", v.case.as_deref().unwrap_or("?"));
            } else {
                println!("not equivalent: {}", v.reason);
            }
            return Ok(ExitCode::from(if v.equivalent { 0 } else { 1 }));
        }
        Command::Table { pairs, seed, samples } => {
            let cfg = TableConfig {
                pairs: if pairs.is_empty() { DEFAULT_PAIRS.to_vec() } else { pairs.clone() },
                seed: *seed,
                samples: *samples,
                cap: cli.cap,
                ..TableConfig::default()
            };
            let reports = run_table(&cfg);
            if cli.json {
                print_json(&json!(reports));
            } else {
                print!("{}", to_markdown(&reports));
            }
            if !reports.iter().all(|r| r.matches()) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Selftest { seed, quick } => {
            let reports = run_selftest(&SelftestConfig { seed: *seed, quick: *quick, cap: cli.cap });
            if cli.json {
                print_json(&json!(reports));
            } else {
                for r in &reports {
                    let status = if r.failures.is_empty() { "ok" } else { "FAILED" };
                    println!("{:<22} {:>4} cases  {status}", r.name, r.cases);
                    for f in &r.failures {
                        println!("    {f}");
                    }
                }
            }
            if reports.iter().any(|r| !r.failures.is_empty()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
