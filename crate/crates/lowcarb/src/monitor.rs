//! Wall-clock monitor: enforces time limits and prints progress to stderr.

use std::io::Write;
use std::time::Instant;

use lowcarb_core::milp::{Monitor, Progress};

pub struct Console {
    start: Instant,
    last: Option<f64>,
    /// Seconds between progress lines; `None` keeps quiet.
    pub interval: Option<f64>,
}

impl Console {
    pub fn new(interval: Option<f64>) -> Self {
        Self { start: Instant::now(), last: None, interval }
    }

    pub fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

impl Monitor for Console {
    fn progress(&mut self, p: &Progress) {
        let Some(interval) = self.interval else { return };
        let now = self.seconds();
        if self.last.is_some_and(|t| now - t < interval) {
            return;
        }
        self.last = Some(now);
        let _ = writeln!(std::io::stderr(), "[{now:7.1}s] {p}");
    }

    fn incumbent(&mut self, objective: f64) {
        if self.interval.is_some() {
            let _ = writeln!(std::io::stderr(), "[{:7.1}s] incumbent {objective:.9e}", self.seconds());
        }
    }

    fn elapsed(&self) -> Option<f64> {
        Some(self.seconds())
    }
}
