//! Seeded law suites over the whole library, aggregated into one report.
//!
//! Every case draws its randomness from a seed derived from the run seed,
//! the check name and the case index, so a witness can be replayed alone
//! with [`replay`].

mod config;
mod corpus;
mod suites;

use std::sync::Arc;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cahiers::probe_outcome;
use crate::error::ProbeError;
use crate::report::{case_rng, run_cases_counting, CheckReport, Failure};

pub use config::{Config, DimsGrid, ToleranceConfig, SUITES};
pub use corpus::DERIVATIVE_CORPUS;
pub use suites::ASSOC_ALGEBRAS;

type CaseFn = dyn Fn(&mut ChaCha8Rng) -> Result<bool, Failure> + Send + Sync;

/// A named, seeded check; `Ok(false)` from a case marks it inconclusive.
#[derive(Clone)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    run: Arc<CaseFn>,
}

impl Check {
    pub fn new<F>(name: impl Into<String>, cases: usize, f: F) -> Check
    where
        F: Fn(&mut ChaCha8Rng) -> Result<(), Failure> + Send + Sync + 'static,
    {
        Check::counting(name, cases, move |rng| f(rng).map(|()| true))
    }

    pub fn counting<F>(name: impl Into<String>, cases: usize, f: F) -> Check
    where
        F: Fn(&mut ChaCha8Rng) -> Result<bool, Failure> + Send + Sync + 'static,
    {
        Check { name: name.into(), cases, run: Arc::new(f) }
    }

    pub fn run(&self, seed: u64) -> CheckReport {
        run_cases_counting(&self.name, seed, self.cases, |rng| (self.run)(rng))
    }

    /// One case from its recorded seed.
    pub fn replay(&self, case_seed: u64) -> CheckReport {
        let mut report = CheckReport::new(&self.name);
        let r = (self.run)(&mut case_rng(case_seed));
        if matches!(r, Ok(false)) {
            report.skipped += 1;
        }
        report.record(0, case_seed, r.map(|_| ()));
        report
    }
}

/// Aggregated run result; the serialized form is the report file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub suites: Vec<CheckReport>,
    pub wall_ms: u64,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.suites.iter().map(|s| s.failures).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn suite(&self, name: &str) -> Option<&CheckReport> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn context(config: &Config) -> Result<suites::Ctx, ProbeError> {
    config.validate()?;
    Ok(suites::Ctx {
        seed: config.seed,
        cases: config.cases,
        degree_bound: config.degree_bound,
        n: config.dims_grid.n.clone(),
        m: config.dims_grid.m.clone(),
        algebras: config.algebras()?,
        tol: config.tolerance(),
    })
}

/// The checks of one suite under `config`.
pub fn checks(config: &Config, suite: &str) -> Result<Vec<Check>, ProbeError> {
    if !SUITES.contains(&suite) {
        return Err(ProbeError::Config(format!("unknown suite `{suite}`")));
    }
    Ok(suites::build(suite, &context(config)?))
}

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

/// Run one suite: its checks in parallel, folded in a fixed order.
pub fn run_one(config: &Config, suite: &str) -> Result<CheckReport, ProbeError> {
    let start = Instant::now();
    let checks = checks(config, suite)?;
    let results: Vec<CheckReport> = checks.par_iter().map(|c| c.run(config.seed)).collect();
    let mut report = CheckReport::new(suite);
    for r in results {
        report.absorb(r);
    }
    if suite == "conjecture_probe" {
        report.outcome = Some(probe_outcome(&report).to_string());
    }
    report.wall_ms = elapsed_ms(start, config.timing);
    Ok(report)
}

/// Run every configured suite in order.
pub fn run_suite(config: &Config) -> Result<Report, ProbeError> {
    let start = Instant::now();
    // resolve everything up front so configuration errors surface before work
    context(config)?;
    let suites = config.suites.iter().map(|s| run_one(config, s)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        suites,
        wall_ms: elapsed_ms(start, config.timing),
    })
}

/// Re-run the case of check `name` with the given case seed.
pub fn replay(config: &Config, name: &str, case_seed: u64) -> Result<CheckReport, ProbeError> {
    let suite = name.split('/').next().unwrap_or(name);
    let check = checks(config, suite)?
        .into_iter()
        .find(|c| c.name == name)
        .ok_or_else(|| ProbeError::Config(format!("no check named `{name}`")))?;
    Ok(check.replay(case_seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: &[&str]) -> Config {
        Config {
            suites: suites.iter().map(|s| s.to_string()).collect(),
            seed: 11,
            cases: 8,
            degree_bound: 2,
            dims_grid: DimsGrid { n: vec![0, 1], m: vec![1], algebras: vec!["dual".into(), "jet2".into()] },
            ..Config::default()
        }
    }

    #[test]
    fn empty_suite_list_passes() {
        let r = run_suite(&small(&[])).unwrap();
        assert!(r.suites.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn every_suite_passes_on_a_small_config() {
        let r = run_suite(&small(&SUITES)).unwrap();
        for s in &r.suites {
            assert_eq!(s.failures, s.witnesses.len());
            assert!(s.passed(), "{} failed: {:?}", s.name, s.witnesses.first());
        }
        let probe = r.suite("conjecture_probe").unwrap();
        assert!(matches!(probe.outcome.as_deref(), Some("evidence-for") | Some("counterexample")));
    }

    #[test]
    fn reports_are_deterministic() {
        let c = small(&["ring_laws", "bifunctor"]);
        assert_eq!(run_suite(&c).unwrap().to_json(), run_suite(&c).unwrap().to_json());
    }

    #[test]
    fn failures_replay_from_their_seed() {
        let check = Check::new("demo", 50, |rng| {
            use rand::Rng;
            if rng.gen_range(0..4) == 0 {
                Err(Failure::new("planted"))
            } else {
                Ok(())
            }
        });
        let report = check.run(3);
        assert!(report.failures > 0);
        for w in &report.witnesses {
            assert_eq!(check.replay(w.case_seed).failures, 1);
        }
    }

    #[test]
    fn replay_finds_checks_by_name() {
        let c = small(&["ring_laws"]);
        let r = replay(&c, "ring_laws/dual", 42).unwrap();
        assert_eq!((r.cases, r.failures), (1, 0));
        assert!(replay(&c, "ring_laws/nope", 1).is_err());
    }
}
