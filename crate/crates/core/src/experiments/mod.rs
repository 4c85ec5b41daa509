//! Executable versions of the eraser, delayed-choice, trade-off and brainwash
//! constructions. Each run is a pure function of its settings (and seed).

mod brainwash;
mod delayed;
mod eraser;
mod tradeoff;

pub use brainwash::{brainwash_roundtrip, BrainwashVariant};
pub use delayed::{
    free_will_patterns, run_entanglement_swapping, run_free_will, swapping_outcomes, FreeWillChoice,
    FreeWillPatterns,
    SwappingOutcome, VictorChoice,
};
pub use eraser::{
    herzog_coincidence, run_double_slit_eraser, run_herzog, run_wheeler, Eraser, WheelerChoice,
};
pub use tradeoff::{
    complementarity_tradeoff, correlation_measure, interference_coefficient, tradeoff_family,
    tradeoff_final_state, tradeoff_initial_state, tradeoff_report, TradeoffResult,
};

use crate::error::{Error, Result};
use crate::optics::ScreenPattern;

/// A named pass/fail check computed during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Settings in insertion order.
    pub settings: Vec<(String, String)>,
    pub patterns: Vec<(String, ScreenPattern)>,
    pub scalars: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub notes: String,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            settings: Vec::new(),
            patterns: Vec::new(),
            scalars: Vec::new(),
            verdicts: Vec::new(),
            notes: String::new(),
        }
    }

    pub fn setting(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.settings.push((key.into(), value.to_string()));
        self
    }

    /// Record a scalar; names must be unique and values finite.
    pub fn scalar(&mut self, key: impl Into<String>, value: f64) -> Result<&mut Self> {
        let key = key.into();
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("scalar `{key}` is not finite")));
        }
        if self.scalars.iter().any(|(k, _)| *k == key) {
            return Err(Error::InvalidParameter(format!("scalar `{key}` recorded twice")));
        }
        self.scalars.push((key, value));
        Ok(self)
    }

    pub fn pattern(&mut self, key: impl Into<String>, pattern: ScreenPattern) -> Result<&mut Self> {
        let key = key.into();
        if self.patterns.iter().any(|(k, _)| *k == key) {
            return Err(Error::InvalidParameter(format!("pattern `{key}` recorded twice")));
        }
        self.patterns.push((key, pattern));
        Ok(self)
    }

    pub fn verdict(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.into(),
            passed,
        });
        self
    }

    pub fn note(&mut self, text: &str) -> &mut Self {
        if !self.notes.is_empty() {
            self.notes.push(' ');
        }
        self.notes.push_str(text);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.scalars.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn get_pattern(&self, key: &str) -> Option<&ScreenPattern> {
        self.patterns.iter().find(|(k, _)| k == key).map(|(_, p)| p)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_names_unique_and_finite() {
        let mut r = ExperimentReport::new("x");
        r.scalar("a", 1.0).unwrap();
        assert!(r.scalar("a", 2.0).is_err());
        assert!(r.scalar("b", f64::NAN).is_err());
        assert_eq!(r.get("a"), Some(1.0));
    }
}
