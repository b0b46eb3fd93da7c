//! Check reports and the seeded, parallel case runner behind them.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Name of the check whose case failed; replay uses it with `case_seed`.
    pub check: String,
    pub case: usize,
    pub case_seed: u64,
    pub message: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
    pub wall_ms: u64,
    /// Cases that could not be decided (for instance a degree overflow).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub skipped: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<String>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl CheckReport {
    pub fn new(name: &str) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            cases: 0,
            failures: 0,
            witnesses: Vec::new(),
            wall_ms: 0,
            skipped: 0,
            outcome: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn record(&mut self, case: usize, case_seed: u64, result: Result<(), Failure>) {
        self.cases += 1;
        if let Err(f) = result {
            self.failures += 1;
            self.witnesses.push(Witness {
                check: self.name.clone(),
                case,
                case_seed,
                message: f.message,
                values: f.values,
            });
        }
    }

    /// Fold another report's cases into this one.
    pub fn absorb(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failures += other.failures;
        self.skipped += other.skipped;
        self.witnesses.extend(other.witnesses);
    }
}

/// A failing case: message plus named values for the witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub message: String,
    pub values: BTreeMap<String, String>,
}

impl Failure {
    pub fn new(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Failure {
        self.values.insert(key.to_string(), value.to_string());
        self
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::new(e.to_string())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Seed of case `index` of `suite` under the run seed.
pub fn case_seed(seed: u64, suite: &str, index: usize) -> u64 {
    splitmix64(splitmix64(seed ^ fnv1a(suite)) ^ index as u64)
}

pub fn case_rng(case_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed)
}

/// Run `cases` seeded cases in parallel; results are collected in case order
/// so the report does not depend on scheduling.
pub fn run_cases<F>(name: &str, seed: u64, cases: usize, check: F) -> CheckReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), Failure> + Sync,
{
    run_cases_counting(name, seed, cases, |rng| check(rng).map(|()| true))
}

/// As [`run_cases`], for checks that may be inconclusive: `Ok(false)`
/// counts the case as skipped.
pub fn run_cases_counting<F>(name: &str, seed: u64, cases: usize, check: F) -> CheckReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<bool, Failure> + Sync,
{
    let results: Vec<(u64, Result<bool, Failure>)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let s = case_seed(seed, name, i);
            (s, check(&mut case_rng(s)))
        })
        .collect();
    let mut report = CheckReport::new(name);
    for (i, (s, r)) in results.into_iter().enumerate() {
        if matches!(r, Ok(false)) {
            report.skipped += 1;
        }
        report.record(i, s, r.map(|_| ()));
    }
    report
}

/// Re-run a single case from its seed.
pub fn replay_case<F>(name: &str, case_seed: u64, check: F) -> CheckReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), Failure>,
{
    let mut report = CheckReport::new(name);
    report.record(0, case_seed, check(&mut case_rng(case_seed)));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(case_seed(7, "a", 3), case_seed(7, "a", 3));
        assert_ne!(case_seed(7, "a", 3), case_seed(7, "b", 3));
        assert_ne!(case_seed(7, "a", 3), case_seed(7, "a", 4));
        assert_ne!(case_seed(7, "a", 3), case_seed(8, "a", 3));
    }

    #[test]
    fn runner_is_deterministic_and_replayable() {
        let check = |rng: &mut ChaCha8Rng| {
            let v: u32 = rng.gen_range(0..10);
            if v == 0 {
                Err(Failure::new("zero").with("v", v))
            } else {
                Ok(())
            }
        };
        let a = run_cases("demo", 1, 200, check);
        let b = run_cases("demo", 1, 200, check);
        assert_eq!(a, b);
        assert!(a.failures > 0);
        let w = &a.witnesses[0];
        let again = replay_case("demo", w.case_seed, check);
        assert_eq!(again.failures, 1);
    }
}
