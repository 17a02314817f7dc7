use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{IntegralVerdict, Outcome};
use crate::error::{Error, Result};

/// Smallest and largest parameters probed before reporting a boundary marker.
const PARAM_FLOOR: f64 = 1e-9;
const PARAM_CEIL: f64 = 1e9;
const BISECTION_STEPS: usize = 40;
const BISECTION_REL_WIDTH: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CriticalValue {
    /// Convergent already at the smallest probed parameter.
    Zero,
    Finite {
        value: f64,
    },
    /// Divergent even at the largest probed parameter.
    Infinite,
}

impl CriticalValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            CriticalValue::Finite { value } => Some(*value),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalConstant {
    pub value: CriticalValue,
    /// `(lo, hi)`; `hi` is `None` for the infinite marker.
    pub bracket: (f64, Option<f64>),
    /// Divergent verdict at `lo` (absent for the zero marker).
    pub verdict_lo: Option<IntegralVerdict>,
    /// Convergent verdict at `hi` (absent for the infinite marker).
    pub verdict_hi: Option<IntegralVerdict>,
    /// Every `(parameter, outcome)` evaluated, in evaluation order.
    pub probes: Vec<(f64, Outcome)>,
}

/// Locates `inf{p > 0 : test(p) converges}` for a test that is divergent
/// for small and convergent for large parameters.
pub fn critical_constant(test: &(dyn Fn(f64) -> Result<IntegralVerdict> + Sync)) -> Result<CriticalConstant> {
    let mut probes: Vec<(f64, Outcome)> = Vec::new();
    let mut probe = |p: f64| -> Result<IntegralVerdict> {
        let v = test(p)?;
        probes.push((p, v.outcome));
        if v.is_inconclusive() {
            return Err(Error::InconclusiveBracket { param: p });
        }
        Ok(v)
    };

    let at_floor = probe(PARAM_FLOOR)?;
    let at_ceil = probe(PARAM_CEIL)?;
    if at_floor.is_convergent() {
        return finish(CriticalConstant {
            value: CriticalValue::Zero,
            bracket: (0.0, Some(PARAM_FLOOR)),
            verdict_lo: None,
            verdict_hi: Some(at_floor),
            probes,
        });
    }
    if at_ceil.is_divergent() {
        return finish(CriticalConstant {
            value: CriticalValue::Infinite,
            bracket: (PARAM_CEIL, None),
            verdict_lo: Some(at_ceil),
            verdict_hi: None,
            probes,
        });
    }

    let (mut lo, mut v_lo, mut hi, mut v_hi);
    let first = probe(1.0)?;
    if first.is_convergent() {
        (hi, v_hi) = (1.0, first);
        let mut p = 0.5;
        loop {
            let v = if p <= PARAM_FLOOR { at_floor.clone() } else { probe(p)? };
            if v.is_divergent() {
                (lo, v_lo) = (p.max(PARAM_FLOOR), v);
                break;
            }
            (hi, v_hi) = (p, v);
            p *= 0.5;
        }
    } else {
        (lo, v_lo) = (1.0, first);
        let mut p = 2.0;
        loop {
            let v = if p >= PARAM_CEIL { at_ceil.clone() } else { probe(p)? };
            if v.is_convergent() {
                (hi, v_hi) = (p.min(PARAM_CEIL), v);
                break;
            }
            (lo, v_lo) = (p, v);
            p *= 2.0;
        }
    }

    for _ in 0..BISECTION_STEPS {
        if hi - lo < BISECTION_REL_WIDTH * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = probe(mid)?;
        if v.is_convergent() {
            (hi, v_hi) = (mid, v);
        } else {
            (lo, v_lo) = (mid, v);
        }
    }

    finish(CriticalConstant {
        value: CriticalValue::Finite { value: 0.5 * (lo + hi) },
        bracket: (lo, Some(hi)),
        verdict_lo: Some(v_lo),
        verdict_hi: Some(v_hi),
        probes,
    })
}

/// Rejects results whose probes show a convergent parameter below a divergent one.
fn finish(c: CriticalConstant) -> Result<CriticalConstant> {
    let conv_min = c
        .probes
        .iter()
        .filter(|(_, o)| o.is_convergent())
        .map(|(p, _)| *p)
        .fold(f64::INFINITY, f64::min);
    let div_max = c
        .probes
        .iter()
        .filter(|(_, o)| o.is_divergent())
        .map(|(p, _)| *p)
        .fold(f64::NEG_INFINITY, f64::max);
    if conv_min < div_max {
        return Err(Error::NonMonotone {
            convergent_at: conv_min,
            divergent_at: div_max,
        });
    }
    Ok(c)
}

/// Evaluates a parameterized test on a grid in parallel; results keep grid order.
pub fn verdict_grid(
    test: &(dyn Fn(f64) -> Result<IntegralVerdict> + Sync),
    params: &[f64],
) -> Vec<Result<IntegralVerdict>> {
    params.par_iter().map(|&p| test(p)).collect()
}
