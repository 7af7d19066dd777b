//! Verification reports emitted by the pipelines.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cohomology::CohomologyTable;
use crate::error::{Error, Result};
use crate::hilbert::SurfaceInvariants;
use crate::resolve::{BettiRecord, BettiTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub stage: String,
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Retry {
    pub stage: String,
    pub attempt: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub pipeline: String,
    pub seed: u64,
    pub characteristic: u32,
    pub assertions: Vec<Assertion>,
    pub retries: Vec<Retry>,
    pub invariants: Option<SurfaceInvariants>,
    pub betti: Vec<BettiRecord>,
    pub cohomology: Option<CohomologyTable>,
    pub verdict: bool,
    /// Wall-clock time per stage; kept out of the JSON so reruns compare equal.
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl ConstructionReport {
    pub fn new(pipeline: &str, seed: u64, characteristic: u32) -> ConstructionReport {
        ConstructionReport {
            pipeline: pipeline.to_string(),
            seed,
            characteristic,
            assertions: vec![],
            retries: vec![],
            invariants: None,
            betti: vec![],
            cohomology: None,
            verdict: true,
            timings: vec![],
        }
    }

    /// Records an expected/computed pair; returns whether they agree.
    pub fn check<T: Serialize + PartialEq>(&mut self, stage: &str, name: &str, expected: T, computed: T) -> bool {
        let pass = expected == computed;
        self.push(stage, name, json(&expected), json(&computed), pass)
    }

    /// Records a boolean property.
    pub fn check_true(&mut self, stage: &str, name: &str, holds: bool) -> bool {
        self.check(stage, name, true, holds)
    }

    fn push(&mut self, stage: &str, name: &str, expected: Value, computed: Value, pass: bool) -> bool {
        log::debug!("{stage}: {name}: {}", if pass { "ok" } else { "FAILED" });
        self.assertions.push(Assertion {
            stage: stage.to_string(),
            name: name.to_string(),
            expected,
            computed,
            pass,
        });
        self.verdict &= pass;
        pass
    }

    pub fn retry(&mut self, stage: &str, attempt: u32, reason: impl Into<String>) {
        let reason = reason.into();
        log::info!("{stage}: attempt {attempt} rejected: {reason}");
        self.retries.push(Retry { stage: stage.to_string(), attempt, reason });
    }

    pub fn time(&mut self, stage: &str, d: Duration) {
        self.timings.push((stage.to_string(), d));
    }

    pub fn set_betti(&mut self, table: &BettiTable) {
        self.betti = table.records();
    }

    pub fn failures(&self) -> Vec<&Assertion> {
        self.assertions.iter().filter(|a| !a.pass).collect()
    }

    /// Assertions of one stage, all passing.
    pub fn stage_passed(&self, stage: &str) -> bool {
        self.assertions.iter().filter(|a| a.stage == stage).all(|a| a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<ConstructionReport> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} pipeline, seed {}, p = {}", self.pipeline, self.seed, self.characteristic);
        let mut stage = "";
        for a in &self.assertions {
            if a.stage != stage {
                stage = &a.stage;
                let _ = writeln!(s, "[{stage}]");
            }
            let mark = if a.pass { "ok  " } else { "FAIL" };
            if a.expected == Value::Bool(true) && a.computed.is_boolean() {
                let _ = writeln!(s, "  {mark} {}", a.name);
            } else {
                let _ = writeln!(s, "  {mark} {}: expected {}, computed {}", a.name, a.expected, a.computed);
            }
        }
        for r in &self.retries {
            let _ = writeln!(s, "retry {} #{}: {}", r.stage, r.attempt, r.reason);
        }
        if let Some(inv) = &self.invariants {
            let _ = writeln!(
                s,
                "invariants: d = {}, pi = {}, chi = {}, p_g = {}, q = {}, K^2 = {}, s = {}",
                inv.d, inv.pi, inv.chi, inv.pg, inv.q, inv.k2, inv.s
            );
        }
        if !self.betti.is_empty() {
            let _ = writeln!(s, "Betti table:\n{}", BettiTable::from_records(&self.betti).to_text());
        }
        if let Some(t) = &self.cohomology {
            let _ = writeln!(s, "h^i I(j):\n{}", t.to_text());
        }
        for (stage, d) in &self.timings {
            let _ = writeln!(s, "time {stage}: {:.3}s", d.as_secs_f64());
        }
        let _ = writeln!(s, "verdict: {}", if self.verdict { "pass" } else { "FAIL" });
        s
    }
}

fn json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

/// Creates the run directory `<root>/<pipeline>-s<seed>-p<p>`. An existing
/// directory is an error unless `force` is set.
pub fn run_dir(root: &Path, pipeline: &str, seed: u64, p: u32, force: bool) -> Result<std::path::PathBuf> {
    let dir = root.join(format!("{pipeline}-s{seed}-p{p}"));
    if dir.exists() && !force {
        return Err(Error::Usage(format!(
            "{} already exists; pass --force to overwrite",
            dir.display()
        )));
    }
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

/// Writes named text artifacts and the report into `dir`.
pub fn write_run(dir: &Path, files: &[(String, String)], report: &ConstructionReport) -> Result<()> {
    for (name, body) in files {
        std::fs::write(dir.join(name), body)?;
    }
    std::fs::write(dir.join("report.json"), report.to_json())?;
    std::fs::write(dir.join("report.txt"), report.to_text())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_and_round_trip() {
        let mut r = ConstructionReport::new("test", 3, 31991);
        assert!(r.check("a", "count", 5, 5));
        assert!(r.verdict);
        assert!(!r.check("b", "pair", (1, 2), (1, 3)));
        assert!(!r.verdict);
        assert!(r.stage_passed("a") && !r.stage_passed("b"));
        r.time("a", Duration::from_millis(5));
        let back = ConstructionReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back.assertions, r.assertions);
        assert!(back.timings.is_empty());
        assert!(r.to_text().contains("FAIL pair"));
    }
}
