//! Runner for the acceptance criteria: each criterion prints one PASS/FAIL
//! line with its measured values, tolerance and runtime.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Result of one criterion before the runtime limit is applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }

    /// All parts must pass; details are joined.
    pub fn all(parts: impl IntoIterator<Item = Verdict>) -> Self {
        let parts: Vec<_> = parts.into_iter().collect();
        Self {
            pass: parts.iter().all(|p| p.pass),
            detail: parts
                .iter()
                .map(|p| format!("{}{}", if p.pass { "" } else { "✗ " }, p.detail))
                .collect::<Vec<_>>()
                .join("; "),
        }
    }
}

/// `|value − target| ≤ rel·|target|`.
pub fn within_rel(name: &str, value: f64, target: f64, rel: f64) -> Verdict {
    let dev = (value - target).abs() / target.abs();
    Verdict::new(
        dev <= rel,
        format!("{name} = {value:.5} vs {target} ± {:.1}% (off {:.2}%)", rel * 100.0, dev * 100.0),
    )
}

/// `|value − target| ≤ tol`.
pub fn within_abs(name: &str, value: f64, target: f64, tol: f64) -> Verdict {
    Verdict::new(
        (value - target).abs() <= tol,
        format!("{name} = {value:.5} vs {target} ± {tol}"),
    )
}

pub fn in_range(name: &str, value: f64, lo: f64, hi: f64) -> Verdict {
    Verdict::new(
        (lo..=hi).contains(&value),
        format!("{name} = {value:.4} in [{lo}, {hi}]"),
    )
}

#[derive(Debug, Default)]
pub struct Gate {
    results: Vec<(String, bool)>,
}

impl Gate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Run one criterion. A panic counts as a failure; so does exceeding `limit`.
    pub fn check(&mut self, id: &str, title: &str, limit: Duration, f: impl FnOnce() -> Verdict) {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Verdict::new(false, format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = verdict.pass && in_time;
        println!(
            "{} criterion {id} ({title}): {} [{:.2} s, limit {} s{}]",
            if pass { "PASS" } else { "FAIL" },
            verdict.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", too slow" }
        );
        self.results.push((id.to_string(), pass));
    }

    pub fn failed(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.1)
            .map(|r| r.0.as_str())
            .collect()
    }

    pub fn finish(self) -> ExitCode {
        let failed = self.failed();
        println!(
            "acceptance: {} passed, {} failed{}",
            self.results.len() - failed.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" ({})", failed.join(", "))
            }
        );
        if failed.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        }
    }
}
