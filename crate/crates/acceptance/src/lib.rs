//! Bookkeeping for the acceptance gate in `tests/acceptance.rs`: each
//! criterion runs under a panic guard and reports a single line.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    /// `None` for informative lines that never gate.
    pub passed: Option<bool>,
    pub detail: String,
    pub secs: f64,
    pub budget_secs: Option<f64>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let tag = match self.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "INFO",
        };
        let time = match self.budget_secs {
            Some(b) if self.secs > b => format!("{:.1} s, over the {b:.0} s budget", self.secs),
            Some(b) => format!("{:.1} s of {b:.0} s", self.secs),
            None => format!("{:.1} s", self.secs),
        };
        format!("{tag} [{:>2}] {}: {} ({time})", self.id, self.title, self.detail)
    }
}

#[derive(Debug, Default)]
pub struct Gate {
    outcomes: Vec<Outcome>,
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "panic".into())
}

impl Gate {
    pub fn new() -> Self {
        Self::default()
    }

    fn record(&mut self, o: Outcome) {
        println!("{}", o.line());
        self.outcomes.push(o);
    }

    /// Runs a gating criterion. `Err` and panics both count as failure.
    pub fn check<F>(&mut self, id: u32, title: &'static str, budget_secs: f64, f: F)
    where
        F: FnOnce() -> Result<String, String>,
    {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(p))));
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.record(Outcome {
            id,
            title,
            passed: Some(passed),
            detail,
            secs: t.elapsed().as_secs_f64(),
            budget_secs: Some(budget_secs),
        });
    }

    /// Runs an informative step; it can still fail if it cannot produce
    /// its output at all.
    pub fn inform<F>(&mut self, id: u32, title: &'static str, f: F)
    where
        F: FnOnce() -> Result<String, String>,
    {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| Err(format!("panicked: {}", panic_text(p))));
        let (passed, detail) = match r {
            Ok(d) => (None, d),
            Err(d) => (Some(false), d),
        };
        self.record(Outcome { id, title, passed, detail, secs: t.elapsed().as_secs_f64(), budget_secs: None });
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed == Some(false)).count()
    }

    pub fn finish(self) -> ExitCode {
        let gated = self.outcomes.iter().filter(|o| o.passed.is_some()).count();
        let failed = self.failures();
        println!("acceptance: {} of {gated} gating criteria passed", gated - failed);
        if failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}

/// Standard deviation of a frequency estimated from `trials` Bernoulli(`p`)
/// samples.
pub fn sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials.max(1) as f64).sqrt()
}

/// Fails with `msg` unless `cond` holds.
pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}
