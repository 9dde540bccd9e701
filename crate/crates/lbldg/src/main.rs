use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use lbldg_core::building::apartment_overlap;
use lbldg_core::harness::{Axiom, Check, Report, Theorem, TrialConfig, REPORT_SCHEMA};
use lbldg_core::matrix::SeriesMatrix;
use lbldg_core::rootsys::RootSystem;
use lbldg_core::symspace::{cartan_valuations, distance, retract_mu, GroupElem, SPDPoint};
use lbldg_core::valfield::parse;
use serde_json::json;

/// Exact computations in the affine building of SL(n) over Puiseux series.
#[derive(Parser)]
#[command(name = "lbldg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance between two points given as JSON matrices of series strings.
    Dist { x: PathBuf, y: PathBuf },
    /// Iwasawa retraction of a point onto the standard apartment.
    Retract { x: PathBuf },
    /// Overlap of the chart of a group element with the standard apartment.
    Overlap { g: PathBuf },
    /// Run an axiom suite (A1, A2, A3r, TI, A4, EC or all).
    Axioms(SuiteArgs),
    /// Run a theorem suite (Stab_o, Stab_A, Stab_C0, HalfAptStab, Retract,
    /// GermBorel, InfinityBorel, IwasawaO or all).
    Theorems(SuiteArgs),
    /// Parse a series and print its canonical form.
    Parse {
        /// Only validate; print `ok` on success.
        #[arg(long)]
        check: bool,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    which: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    exp_den: u32,
    #[arg(long, default_value_t = 4)]
    exp_mag: i64,
    #[arg(long, default_value_t = 3)]
    factors: usize,
    #[arg(long)]
    threads: Option<usize>,
    /// Re-run a single trial index and print its outcome.
    #[arg(long)]
    replay: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl SuiteArgs {
    fn config(&self) -> TrialConfig {
        TrialConfig {
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            exponent_denominator_bound: self.exp_den,
            exponent_magnitude_bound: self.exp_mag,
            factor_count: self.factors,
            threads: self.threads,
        }
    }
}

/// Errors that map to exit code 2.
struct UsageError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.into())
    }
}

fn read_matrix(path: &Path) -> anyhow::Result<SeriesMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let rows = value.get("matrix").unwrap_or(&value);
    let rows: Vec<Vec<String>> =
        serde_json::from_value(rows.clone()).context("expected an array of arrays of series strings")?;
    Ok(SeriesMatrix::from_strings(&rows)?)
}

fn read_point(path: &Path) -> anyhow::Result<SPDPoint> {
    Ok(SPDPoint::new(read_matrix(path)?)?)
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run_suite(args: &SuiteArgs, checks: Vec<Check>) -> Result<bool, UsageError> {
    let cfg = args.config();
    if let Some(trial) = args.replay {
        let [check] = checks[..] else {
            return Err(UsageError(anyhow::anyhow!("--replay needs a single suite")));
        };
        return match check.replay(&cfg, trial)? {
            None => {
                println!("trial {trial}: pass");
                Ok(true)
            }
            Some(c) => {
                print_json(&serde_json::to_value(&c)?);
                Ok(false)
            }
        };
    }
    let mut reports: Vec<Report> = Vec::new();
    for check in checks {
        let report = check.run(&cfg)?;
        println!("{report}");
        for c in report.counterexamples.iter().take(3) {
            println!("  trial {}: {}", c.trial, c.detail);
        }
        reports.push(report);
    }
    let ok = reports.iter().all(Report::all_passed);
    if let Some(path) = &args.json {
        let out = if reports.len() == 1 {
            serde_json::to_value(&reports[0])?
        } else {
            json!({ "schema": REPORT_SCHEMA, "reports": reports })
        };
        fs::write(path, serde_json::to_string_pretty(&out)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn execute(cli: Cli) -> Result<bool, UsageError> {
    match cli.command {
        Command::Dist { x, y } => {
            let (x, y) = (read_point(&x)?, read_point(&y)?);
            let cartan = cartan_valuations(&x, &y)?;
            let d = distance(&x, &y)?;
            print_json(&json!({ "distance": d.to_string(), "cartan": strings(&cartan.mu) }));
        }
        Command::Retract { x } => {
            let mu = retract_mu(&read_point(&x)?)?;
            print_json(&json!({ "mu": strings(&mu) }));
        }
        Command::Overlap { g } => {
            let g = GroupElem::new(read_matrix(&g)?)?;
            let rs = RootSystem::type_a(g.n() - 1);
            print_json(&apartment_overlap(&g)?.to_json(&rs)?);
        }
        Command::Axioms(args) => {
            let checks = if args.which.eq_ignore_ascii_case("all") {
                Axiom::ALL.into_iter().map(Check::Axiom).collect()
            } else {
                vec![Check::Axiom(args.which.parse()?)]
            };
            return run_suite(&args, checks);
        }
        Command::Theorems(args) => {
            let checks = if args.which.eq_ignore_ascii_case("all") {
                Theorem::ALL.into_iter().map(Check::Theorem).collect()
            } else {
                vec![Check::Theorem(args.which.parse()?)]
            };
            return run_suite(&args, checks);
        }
        Command::Parse { check, expr } => {
            let x = parse(&expr)?;
            if check {
                println!("ok");
            } else {
                println!("{x}");
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
