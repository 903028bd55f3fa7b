//! Reporting for the acceptance run: each criterion yields one verdict line.

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {}: {tag} [{}] {} ({:.2}s)",
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Collects verdicts and the overall result.
#[derive(Debug, Default)]
pub struct Report {
    pub verdicts: Vec<Verdict>,
}

impl Report {
    /// Time `check`, print its verdict line and keep it.
    pub fn run<F>(&mut self, id: u8, title: &'static str, check: F)
    where
        F: FnOnce() -> (bool, String),
    {
        let start = std::time::Instant::now();
        let (passed, detail) = check();
        let v = Verdict { id, title, passed, detail, elapsed: start.elapsed() };
        println!("{v}");
        self.verdicts.push(v);
    }

    pub fn failed(&self) -> Vec<u8> {
        self.verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect()
    }
}

/// `|observed − p| ≤ k·sqrt(p(1−p)/n)`.
pub fn within_sigmas(observed: f64, p: f64, n: usize, k: f64) -> bool {
    (observed - p).abs() <= k * (p * (1.0 - p) / n as f64).sqrt()
}
