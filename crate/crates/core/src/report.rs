//! Pass/fail reports shared by every checker.

use serde::Serialize;

use crate::conformal_core::LambdaElement;
use crate::exactalg::Poly;
use crate::formal_dist::ModeCombination;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Nonzero residual left by an identity that should hold exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Residual {
    Lambda(LambdaElement),
    Poly(Poly),
    Modes(ModeCombination),
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub inputs: Vec<String>,
    pub residual: Residual,
}

impl Violation {
    pub fn new(axiom: impl Into<String>, inputs: Vec<String>, residual: Residual) -> Self {
        Violation {
            axiom: axiom.into(),
            inputs,
            residual,
        }
    }
}

/// Status is `Pass` exactly when there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
    /// Number of identities that were evaluated.
    pub checked: usize,
}

impl AxiomReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn status(&self) -> Status {
        if self.violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn record(&mut self, v: Option<Violation>) {
        self.checked += 1;
        if let Some(v) = v {
            self.violations.push(v);
        }
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    /// Violations whose axiom name matches.
    pub fn count(&self, axiom: &str) -> usize {
        self.violations.iter().filter(|v| v.axiom == axiom).count()
    }
}
