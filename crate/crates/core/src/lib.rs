//! Small-time behaviour of `X_t / t^kappa` for Lévy processes with jumps in
//! `[-1, 1]`: integral tests, their critical constants, the resulting
//! classification of `limsup`, `liminf` and `lim` as `t ↓ 0`, and a Monte
//! Carlo path simulator on geometric time grids for empirical cross-checks.
//!
//! Internally every function of `x ∈ (0, 1]` is evaluated at `u = ln(1/x)`
//! and returned as a natural logarithm, so the tests can probe `x = e^-500`.

pub mod asymptotic;
pub mod classifier;
pub mod error;
pub mod functionals;
pub mod integral;
pub mod measure;
pub mod quadrature;
pub mod simulator;

pub use asymptotic::{Asymptotic, AsymptoticExponent};
pub use classifier::{
    classify_limit, classify_one_sided, classify_query, classify_subordinator_liminf, classify_two_sided, Basis,
    Classification, ClassificationValue, Classifier, QueryResult,
};
pub use error::{Error, Result};
pub use functionals::{asymptotic_of, eval_functional, FunctionalKind};
pub use integral::{
    classify_integral, critical_constant, i_test, j_test, k_test, test_33b, test_5_1, test_condition_2,
    CriticalConstant, CriticalValue, Engine, EngineConfig, IntegralVerdict, Integrand, Method, Outcome, TailHint,
};
pub use measure::{JumpMeasure, LevyProcessSpec, Side};
pub use simulator::{sample_path_grid, trend_statistic, PathGrid, SimConfig, TrendMode, TrendReport, TrendVerdict};
