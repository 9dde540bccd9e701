//! Randomized verification suites with deterministic, replayable reports.
//!
//! Trial `k` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s)`
//! on stream `k`, so a trial's data does not depend on how trials are
//! scheduled across threads.

pub mod axioms;
pub mod gen;
pub mod sample;
pub mod theorems;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use axioms::{check_axiom, Axiom};
pub use theorems::{check_theorem, Theorem};

pub const REPORT_SCHEMA: &str = "lbldg-report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub exponent_denominator_bound: u32,
    pub exponent_magnitude_bound: i64,
    pub factor_count: usize,
    /// Worker threads; `None` uses the global pool. Does not affect results.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            n: 3,
            trials: 100,
            seed: 0,
            exponent_denominator_bound: 2,
            exponent_magnitude_bound: 4,
            factor_count: 3,
            threads: None,
        }
    }
}

impl TrialConfig {
    pub fn new(n: usize, trials: u64, seed: u64) -> Self {
        TrialConfig { n, trials, seed, ..Default::default() }
    }

    pub fn validate(&self, max_n: usize) -> Result<()> {
        if self.n < 2 || self.n > max_n {
            return Err(Error::Config(format!("n must lie in 2..={max_n}, got {}", self.n)));
        }
        if self.exponent_denominator_bound == 0 {
            return Err(Error::Config("exponent_denominator_bound must be positive".into()));
        }
        if self.exponent_magnitude_bound < 0 {
            return Err(Error::Config("exponent_magnitude_bound must be nonnegative".into()));
        }
        if self.factor_count > 16 {
            return Err(Error::Config("factor_count is limited to 16".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(())
    }
}

/// The generator for trial `trial` of a run with seed `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Inputs recorded by a trial as it generates them, kept for the
/// counterexample payload.
#[derive(Default, Debug)]
pub struct Record {
    fields: serde_json::Map<String, serde_json::Value>,
}

impl Record {
    pub fn put(&mut self, key: &str, value: impl Serialize) {
        self.fields.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn into_value(self) -> serde_json::Value {
        serde_json::Value::Object(self.fields)
    }
}

/// `Ok(None)` is a pass, `Ok(Some(detail))` a failure; errors count as
/// failures.
pub type TrialFn = fn(&TrialConfig, &mut ChaCha8Rng, &mut Record) -> Result<Option<String>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: u64,
    pub seed: u64,
    pub input: serde_json::Value,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub check: String,
    pub config: TrialConfig,
    pub passed: u64,
    pub failed: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// The report without timing, for determinism comparisons.
    pub fn without_timing(&self) -> Report {
        Report { elapsed_ms: 0, ..self.clone() }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} n={} trials={} seed={}: {} passed, {} failed ({} ms)",
            self.check, self.config.n, self.config.trials, self.config.seed, self.passed, self.failed, self.elapsed_ms
        )
    }
}

/// Runs one trial and returns its counterexample, if it fails.
pub fn run_trial(cfg: &TrialConfig, f: TrialFn, trial: u64) -> Option<Counterexample> {
    let mut rng = trial_rng(cfg.seed, trial);
    let mut rec = Record::default();
    let detail = match f(cfg, &mut rng, &mut rec) {
        Ok(None) => return None,
        Ok(Some(d)) => d,
        Err(e) => format!("error: {e}"),
    };
    Some(Counterexample { trial, seed: cfg.seed, input: rec.into_value(), detail })
}

pub(crate) fn run(cfg: &TrialConfig, name: &str, f: TrialFn) -> Result<Report> {
    let start = Instant::now();
    let go = || -> Vec<Option<Counterexample>> { (0..cfg.trials).into_par_iter().map(|k| run_trial(cfg, f, k)).collect() };
    let outcomes = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(go),
        None => go(),
    };
    let counterexamples: Vec<Counterexample> = outcomes.into_iter().flatten().collect();
    let failed = counterexamples.len() as u64;
    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        check: name.to_string(),
        config: cfg.clone(),
        passed: cfg.trials - failed,
        failed,
        counterexamples,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Either kind of suite, addressed by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Axiom(Axiom),
    Theorem(Theorem),
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.parse::<Axiom>().map(Check::Axiom).or_else(|_| s.parse::<Theorem>().map(Check::Theorem))
    }
}

impl Check {
    pub fn run(&self, cfg: &TrialConfig) -> Result<Report> {
        match self {
            Check::Axiom(a) => check_axiom(cfg, *a),
            Check::Theorem(t) => check_theorem(cfg, *t),
        }
    }

    /// Re-runs a single trial, as recorded in a counterexample.
    pub fn replay(&self, cfg: &TrialConfig, trial: u64) -> Result<Option<Counterexample>> {
        let f = match self {
            Check::Axiom(a) => a.trial_fn(cfg)?,
            Check::Theorem(t) => t.trial_fn(cfg)?,
        };
        Ok(run_trial(cfg, f, trial))
    }
}
