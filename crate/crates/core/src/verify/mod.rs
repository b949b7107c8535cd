//! Check runner: every claim is a [`Check`] registered under a stable id.

mod checks;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::decomp::{decompose_tensor, Decomposition};
use crate::error::{Error, Result};
use crate::gf::{PrimeField, DEFAULT_PRIME};
use crate::groups::{build_group, GroupLabel, PolyhedralGroup};
use crate::invariants::{fundamental_invariants, FundamentalSet};
use crate::linalg::Subspace;
use crate::reps::fixed_space;

pub use checks::standard_checks;

pub const DEFAULT_SEED: u64 = 1729;

/// Form pairs sampled by the randomized transvectant comparison.
pub const DEFAULT_ORACLE_SAMPLES: usize = 60;

#[derive(Clone, Debug)]
pub struct Config {
    pub prime: u32,
    pub seed: u64,
    pub only: Option<String>,
    pub oracle_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            prime: DEFAULT_PRIME,
            seed: DEFAULT_SEED,
            only: None,
            oracle_samples: DEFAULT_ORACLE_SAMPLES,
        }
    }
}

/// Verdict plus whatever evidence the check wants to show.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub pass: bool,
    pub witness: Value,
}

impl Outcome {
    pub fn new(pass: bool, witness: Value) -> Self {
        Outcome { pass, witness }
    }
}

pub trait Check: Send + Sync {
    /// Stable identifier, e.g. `syzygy.T`.
    fn id(&self) -> String;

    /// The mathematical statement being checked.
    fn claim(&self) -> String;

    fn run(&self, ctx: &Context) -> Result<Outcome>;
}

type Cache<K, V> = Mutex<HashMap<K, Result<Arc<V>>>>;

/// Shared state for one run; groups, fixed spaces and decompositions are
/// built once and reused across checks.
pub struct Context {
    field: PrimeField,
    seed: u64,
    oracle_samples: usize,
    groups: Cache<GroupLabel, PolyhedralGroup>,
    fundamentals: Cache<GroupLabel, FundamentalSet>,
    fixed: Cache<(GroupLabel, usize), Subspace>,
    decompositions: Cache<(usize, usize), Decomposition>,
}

fn cached<K, V>(cache: &Cache<K, V>, key: K, build: impl FnOnce() -> Result<V>) -> Result<Arc<V>>
where
    K: std::hash::Hash + Eq + Copy,
{
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let value = build().map(Arc::new);
    cache.lock().unwrap().insert(key, value.clone());
    value
}

impl Context {
    pub fn new(field: PrimeField, seed: u64, oracle_samples: usize) -> Self {
        Context {
            field,
            seed,
            oracle_samples,
            groups: Mutex::default(),
            fundamentals: Mutex::default(),
            fixed: Mutex::default(),
            decompositions: Mutex::default(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn oracle_samples(&self) -> usize {
        self.oracle_samples
    }

    pub fn group(&self, label: GroupLabel) -> Result<Arc<PolyhedralGroup>> {
        cached(&self.groups, label, || build_group(self.field, label))
    }

    pub fn fundamentals(&self, label: GroupLabel) -> Result<Arc<FundamentalSet>> {
        cached(&self.fundamentals, label, || {
            fundamental_invariants(&*self.group(label)?)
        })
    }

    pub fn fixed_space(&self, label: GroupLabel, m: usize) -> Result<Arc<Subspace>> {
        cached(&self.fixed, (label, m), || {
            fixed_space(&*self.group(label)?, m)
        })
    }

    pub fn decomposition(&self, m: usize, n: usize) -> Result<Arc<Decomposition>> {
        cached(&self.decompositions, (m, n), || {
            decompose_tensor(self.field, m, n)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub pass: bool,
    pub status: Status,
    pub witness: Value,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub prime: u32,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl CheckReport {
    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|r| r.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check, then the overall verdict.
    pub fn summary_table(&self) -> String {
        let width = self.checks.iter().map(|r| r.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.checks {
            let tag = match r.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            let _ = writeln!(
                out,
                "{tag}  {:<width$}  {:>6} ms  {}",
                r.id, r.runtime_ms, r.reference
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let passed = self.checks.iter().filter(|r| r.pass).count();
        let _ = writeln!(
            out,
            "{} / {} checks passed at p = {} (seed {}): {}",
            passed,
            self.checks.len(),
            self.prime,
            self.seed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Ordered collection of checks.
pub struct CheckRegistry {
    checks: Vec<Box<dyn Check>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        CheckRegistry {
            checks: standard_checks(),
        }
    }
}

impl CheckRegistry {
    pub fn empty() -> Self {
        CheckRegistry { checks: Vec::new() }
    }

    /// Appends a check; ids must be unique.
    pub fn register(&mut self, check: Box<dyn Check>) -> Result<()> {
        let id = check.id();
        if self.checks.iter().any(|c| c.id() == id) {
            return Err(Error::DuplicateCheck(id));
        }
        self.checks.push(check);
        Ok(())
    }

    pub fn ids(&self) -> Vec<String> {
        self.checks.iter().map(|c| c.id()).collect()
    }

    pub fn checks(&self) -> &[Box<dyn Check>] {
        &self.checks
    }

    /// Checks whose id equals `only` or starts with `only.`.
    pub fn select(&self, only: Option<&str>) -> Result<Vec<&dyn Check>> {
        let Some(key) = only else {
            return Ok(self.checks.iter().map(|c| c.as_ref()).collect());
        };
        let prefix = format!("{key}.");
        let chosen: Vec<&dyn Check> = self
            .checks
            .iter()
            .filter(|c| {
                let id = c.id();
                id == key || id.starts_with(&prefix)
            })
            .map(|c| c.as_ref())
            .collect();
        if chosen.is_empty() {
            return Err(Error::UnknownCheck(key.to_string()));
        }
        Ok(chosen)
    }

    pub fn run(&self, config: &Config) -> Result<CheckReport> {
        let field = PrimeField::new(config.prime)?;
        let ctx = Context::new(field, config.seed, config.oracle_samples);
        let selected = self.select(config.only.as_deref())?;
        let mut records = Vec::with_capacity(selected.len());
        for check in selected {
            records.push(run_one(check, &ctx));
        }
        let notes = if config.only.is_none() {
            checks::report_notes(&ctx)
        } else {
            Vec::new()
        };
        let pass = records.iter().all(|r| r.pass);
        Ok(CheckReport {
            prime: config.prime,
            seed: config.seed,
            checks: records,
            notes,
            pass,
        })
    }
}

fn run_one(check: &dyn Check, ctx: &Context) -> CheckRecord {
    let start = Instant::now();
    let result = check.run(ctx);
    let runtime_ms = start.elapsed().as_millis() as u64;
    let (pass, status, witness) = match result {
        Ok(o) if o.pass => (true, Status::Pass, o.witness),
        Ok(o) => (false, Status::Fail, o.witness),
        Err(e) => (
            false,
            Status::Error,
            serde_json::json!({ "error": e.to_string() }),
        ),
    };
    CheckRecord {
        id: check.id(),
        reference: check.claim(),
        pass,
        status,
        witness,
        runtime_ms,
    }
}

/// Runs the standard checks.
pub fn verify_all(config: &Config) -> Result<CheckReport> {
    CheckRegistry::default().run(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let ids = CheckRegistry::default().ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(ids.len() >= 20);
    }

    #[test]
    fn selection() {
        let reg = CheckRegistry::default();
        assert_eq!(reg.select(Some("nonvanishing.S.19")).unwrap().len(), 1);
        assert_eq!(reg.select(Some("distinct")).unwrap().len(), 2);
        assert_eq!(reg.select(Some("syzygy")).unwrap().len(), 3);
        assert!(matches!(
            reg.select(Some("nope")),
            Err(Error::UnknownCheck(_))
        ));
    }

    #[test]
    fn single_record_report() {
        let config = Config {
            only: Some("nonvanishing.S.19".into()),
            ..Config::default()
        };
        let report = verify_all(&config).unwrap();
        assert_eq!(report.checks.len(), 1);
        assert!(report.pass, "{}", report.summary_table());
    }

    #[test]
    fn errors_become_failed_records() {
        struct Broken;
        impl Check for Broken {
            fn id(&self) -> String {
                "broken".into()
            }
            fn claim(&self) -> String {
                "nothing".into()
            }
            fn run(&self, _: &Context) -> Result<Outcome> {
                Err(Error::Singular)
            }
        }
        let mut reg = CheckRegistry::empty();
        reg.register(Box::new(Broken)).unwrap();
        assert!(matches!(
            reg.register(Box::new(Broken)),
            Err(Error::DuplicateCheck(_))
        ));
        let report = reg.run(&Config::default()).unwrap();
        assert!(!report.pass);
        assert_eq!(report.checks[0].status, Status::Error);
    }
}
