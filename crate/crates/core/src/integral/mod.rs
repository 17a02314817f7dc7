//! Convergence tests for improper integrals at the origin and the
//! bisection for their critical constants.

mod critical;
mod engine;
mod suite;

use serde::{Deserialize, Serialize};

use crate::asymptotic::Asymptotic;

pub use critical::{critical_constant, verdict_grid, CriticalConstant, CriticalValue};
pub use engine::{classify_integral, Engine, EngineConfig, Integrand};
pub use suite::{i_test, j_test, k_test, test_33b, test_5_1, test_condition_2, Condition2Forms, Form51};

/// Block-heuristic thresholds of the numeric path.
pub mod thresholds {
    /// Number of trailing unit blocks inspected.
    pub const TRAILING: usize = 20;
    /// Maximum ratio of consecutive trailing blocks for geometric decay.
    pub const RATIO: f64 = 0.9;
    /// Geometric remainder must be below this fraction of the total.
    pub const REMAINDER_REL: f64 = 1e-6;
    /// Trailing blocks of a divergent integral stay above this fraction of the largest earlier block.
    pub const DIVERGENCE_FLOOR: f64 = 1e-6;
    /// Log-log slopes within this distance of `-1` are not decided.
    pub const SLOPE_MARGIN: f64 = 0.25;
    /// Default probing depth in `u = ln(1/x)`.
    pub const U_MAX: f64 = 500.0;
    /// Geometric blocks `u ∈ [U e^i, U e^(i+1)]` used to sum analytic tails.
    pub const CONTINUATION_BLOCKS: usize = 400;
    /// Continuation stops here: beyond it `ln g(e^-u) - u` loses all precision.
    pub const CONTINUATION_U_MAX: f64 = 1e12;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Convergent { value: f64 },
    Divergent,
    Inconclusive,
}

impl Outcome {
    pub fn is_convergent(&self) -> bool {
        matches!(self, Outcome::Convergent { .. })
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Outcome::Divergent)
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Outcome::Inconclusive)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Convergent { .. } => "convergent",
            Outcome::Divergent => "divergent",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    /// Same verdict, ignoring the value.
    pub fn same_kind(&self, o: &Outcome) -> bool {
        self.label() == o.label()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Numeric,
}

/// What is known about the integrand `g` as `x ↓ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailHint {
    /// `g` itself behaves like the descriptor.
    Power { g: Asymptotic },
    /// `g(x) = x^-1 exp(-rate f(x))` with `f` described by `exponent`.
    ExpDamped { rate: f64, exponent: Asymptotic },
}

impl From<Asymptotic> for TailHint {
    fn from(g: Asymptotic) -> Self {
        TailHint::Power { g }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralVerdict {
    pub label: String,
    pub outcome: Outcome,
    pub method: Method,
    /// Unit-block partial integrals `∫_j^(j+1) g(e^-u) e^-u du`.
    pub blocks: Vec<f64>,
    /// Largest `u = ln(1/x)` sampled.
    pub probed_depth: f64,
    /// Estimated contribution beyond the probed depth (convergent verdicts).
    pub remainder: Option<f64>,
    pub hint: Option<TailHint>,
    pub notes: Vec<String>,
}

impl IntegralVerdict {
    pub fn is_convergent(&self) -> bool {
        self.outcome.is_convergent()
    }

    pub fn is_divergent(&self) -> bool {
        self.outcome.is_divergent()
    }

    pub fn is_inconclusive(&self) -> bool {
        self.outcome.is_inconclusive()
    }

    pub(crate) fn trivial(label: impl Into<String>, outcome: Outcome, note: &str) -> Self {
        Self {
            label: label.into(),
            outcome,
            method: Method::Analytic,
            blocks: Vec::new(),
            probed_depth: 0.0,
            remainder: None,
            hint: None,
            notes: vec![note.to_string()],
        }
    }
}
