use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::thresholds::*;
use super::{IntegralVerdict, Method, Outcome, TailHint};
use crate::asymptotic::{sign_tol, Asymptotic, EXPONENT_TOL};
use crate::error::{Error, Result};
use crate::quadrature::{ln_add, LnSum, GL32};

type LnFn<'a> = Box<dyn Fn(f64) -> Result<f64> + Send + Sync + 'a>;

/// An integrand `g` on `(0, 1]` given in log-argument form:
/// `ln_g(u) = ln g(e^-u)`, `-inf` where `g` vanishes.
pub struct Integrand<'a> {
    pub label: String,
    ln_g: LnFn<'a>,
    pub hint: Option<TailHint>,
    /// Points in `u` where `g` is not smooth; blocks are split there.
    pub breaks: Vec<f64>,
    /// Finite contribution of point masses, added to a convergent value.
    pub point_mass: f64,
}

impl<'a> Integrand<'a> {
    pub fn new(label: impl Into<String>, ln_g: impl Fn(f64) -> Result<f64> + Send + Sync + 'a) -> Self {
        Self {
            label: label.into(),
            ln_g: Box::new(ln_g),
            hint: None,
            breaks: Vec::new(),
            point_mass: 0.0,
        }
    }

    /// Infallible variant of [`Integrand::new`].
    pub fn from_ln(label: impl Into<String>, ln_g: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self::new(label, move |u| Ok(ln_g(u)))
    }

    pub fn with_hint(mut self, hint: impl Into<TailHint>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn with_breaks(mut self, breaks: impl IntoIterator<Item = f64>) -> Self {
        self.breaks = breaks.into_iter().filter(|b| b.is_finite() && *b > 0.0).collect();
        self.breaks.sort_by(f64::total_cmp);
        self
    }

    pub fn with_point_mass(mut self, mass: f64) -> Self {
        self.point_mass = mass;
        self
    }

    /// `ln` of the integrand against `du`, `g(e^-u) e^-u`.
    fn ln_h(&self, u: f64) -> Result<f64> {
        let v = (self.ln_g)(u)?;
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::Evaluation { u, value: v });
        }
        Ok(v - u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub u_max: f64,
    /// Ignore tail hints and always run the block heuristic.
    pub numeric_only: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            u_max: U_MAX,
            numeric_only: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Engine {
    pub config: EngineConfig,
}

/// Classifies `∫_0^1 g(x) dx` with the default engine.
pub fn classify_integral(g: &Integrand<'_>) -> Result<IntegralVerdict> {
    Engine::default().classify(g)
}

fn saturate(ln_v: f64) -> f64 {
    if ln_v > f64::MAX.ln() {
        f64::MAX
    } else {
        ln_v.exp()
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Self { config }
    }

    pub fn numeric() -> Self {
        Self::new(EngineConfig {
            numeric_only: true,
            ..EngineConfig::default()
        })
    }

    pub fn classify(&self, g: &Integrand<'_>) -> Result<IntegralVerdict> {
        let hint = if self.config.numeric_only { None } else { g.hint };
        match hint {
            Some(h) if !analytic_convergence(&h) => Ok(IntegralVerdict {
                label: g.label.clone(),
                outcome: Outcome::Divergent,
                method: Method::Analytic,
                blocks: Vec::new(),
                probed_depth: 0.0,
                remainder: None,
                hint: Some(h),
                notes: Vec::new(),
            }),
            Some(h) => self.analytic_value(g, h),
            None => self.numeric_path(g),
        }
    }

    fn ln_segment(&self, g: &Integrand<'_>, a: f64, b: f64) -> Result<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let ln_half = half.ln();
        let mut acc = LnSum::new();
        for (z, w) in GL32.nodes.iter().zip(&GL32.weights) {
            acc.add(w.ln() + ln_half + g.ln_h(mid + half * z)?);
        }
        Ok(acc.value())
    }

    fn ln_block(&self, g: &Integrand<'_>, a: f64, b: f64) -> Result<f64> {
        let mut acc = LnSum::new();
        let mut lo = a;
        for &br in g.breaks.iter().filter(|&&br| br > a && br < b) {
            acc.add(self.ln_segment(g, lo, br)?);
            lo = br;
        }
        acc.add(self.ln_segment(g, lo, b)?);
        Ok(acc.value())
    }

    /// `ln` of the unit blocks over `[0, u_max]`.
    fn ln_blocks(&self, g: &Integrand<'_>) -> Result<Vec<f64>> {
        let n = self.config.u_max.ceil() as usize;
        (0..n)
            .map(|j| self.ln_block(g, j as f64, ((j + 1) as f64).min(self.config.u_max)))
            .collect()
    }

    fn verdict(&self, g: &Integrand<'_>, outcome: Outcome, method: Method, ln_blocks: &[f64]) -> IntegralVerdict {
        IntegralVerdict {
            label: g.label.clone(),
            outcome,
            method,
            blocks: ln_blocks.iter().map(|&b| saturate(b)).collect(),
            probed_depth: self.config.u_max,
            remainder: None,
            hint: g.hint,
            notes: Vec::new(),
        }
    }

    /// Value of an integral already known to converge: unit blocks up to
    /// `u_max`, then geometric blocks in `u` until they are negligible.
    fn analytic_value(&self, g: &Integrand<'_>, hint: TailHint) -> Result<IntegralVerdict> {
        let ln_blocks = self.ln_blocks(g)?;
        let mut total = LnSum::new();
        ln_blocks.iter().for_each(|&b| total.add(b));

        let big_u = self.config.u_max;
        let ln_big_u = big_u.ln();
        let mut prev = f64::NEG_INFINITY;
        let mut last = f64::NEG_INFINITY;
        let mut depth = big_u;
        for i in 0..CONTINUATION_BLOCKS {
            let (t0, t1) = (i as f64, (i + 1) as f64);
            let mut acc = LnSum::new();
            let half = 0.5;
            let mid = t0 + half;
            for (z, w) in GL32.nodes.iter().zip(&GL32.weights) {
                let t = mid + half * z;
                let u = big_u * t.exp();
                acc.add(w.ln() + half.ln() + g.ln_h(u)? + ln_big_u + t);
            }
            let b = acc.value();
            total.add(b);
            prev = last;
            last = b;
            depth = big_u * t1.exp();
            if b == f64::NEG_INFINITY || b < total.value() + (1e-18f64).ln() || depth >= CONTINUATION_U_MAX {
                break;
            }
        }
        let ln_rem = if last == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else if prev > last {
            let ln_rho = last - prev;
            last + ln_rho - crate::quadrature::ln_one_minus_exp(ln_rho)
        } else {
            last
        };
        let mut v = self.verdict(g, Outcome::Divergent, Method::Analytic, &ln_blocks);
        let ln_value = ln_add(total.value(), ln_rem);
        v.outcome = Outcome::Convergent {
            value: saturate(ln_value) + g.point_mass,
        };
        v.remainder = Some(saturate(ln_rem));
        v.probed_depth = depth;
        v.hint = Some(hint);
        Ok(v)
    }

    fn numeric_path(&self, g: &Integrand<'_>) -> Result<IntegralVerdict> {
        let ln_blocks = self.ln_blocks(g)?;
        let (outcome, ln_rem) = decide_numeric(&ln_blocks);
        let outcome = match outcome {
            Outcome::Convergent { value } => Outcome::Convergent {
                value: value + g.point_mass,
            },
            o => o,
        };
        let mut v = self.verdict(g, outcome, Method::Numeric, &ln_blocks);
        v.remainder = ln_rem.map(saturate);
        Ok(v)
    }
}

/// Block heuristic on `ln` block sums. Returns the outcome and, when
/// convergent, the `ln` of the extrapolated remainder.
pub(crate) fn decide_numeric(ln_blocks: &[f64]) -> (Outcome, Option<f64>) {
    let mut total = LnSum::new();
    ln_blocks.iter().for_each(|&b| total.add(b));
    let ln_total = total.value();
    let convergent = |ln_rem: f64| {
        (
            Outcome::Convergent {
                value: saturate(ln_add(ln_total, ln_rem)),
            },
            Some(ln_rem),
        )
    };
    if ln_total == f64::NEG_INFINITY {
        return convergent(f64::NEG_INFINITY);
    }
    let n = ln_blocks.len();
    if n < 2 * TRAILING {
        return (Outcome::Inconclusive, None);
    }
    let tail = &ln_blocks[n - TRAILING..];
    if tail.iter().all(|&b| b == f64::NEG_INFINITY) {
        return convergent(f64::NEG_INFINITY);
    }

    // geometric decay
    let ln_ratio_cap = RATIO.ln();
    let ratios_ok = tail
        .windows(2)
        .all(|w| w[1] == f64::NEG_INFINITY || w[1] - w[0] <= ln_ratio_cap);
    if ratios_ok {
        let ln_rho = tail
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|r| !r.is_nan())
            .fold(f64::NEG_INFINITY, f64::max);
        let last = tail[TRAILING - 1];
        let ln_rem = if last == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            last + ln_rho - crate::quadrature::ln_one_minus_exp(ln_rho)
        };
        if ln_rem < ln_total + REMAINDER_REL.ln() {
            return convergent(ln_rem);
        }
    }

    // power-law decay, judged by the log-log slope over the second half
    let mid = n / 2;
    let (b_mid, b_last) = (ln_blocks[mid], ln_blocks[n - 1]);
    let (u_mid, u_last) = (mid as f64 + 0.5, n as f64 - 0.5);
    let slope = if b_last == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if b_mid == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        (b_last - b_mid) / (u_last.ln() - u_mid.ln())
    };
    if slope < -1.0 - SLOPE_MARGIN {
        let ln_rem = if b_last == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            b_last + u_last.ln() - (-slope - 1.0).ln()
        };
        return convergent(ln_rem);
    }
    // measured against the blocks before the trailing window, so growing integrands pass
    let ln_max = ln_blocks[..n - TRAILING]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let floor = ln_max + DIVERGENCE_FLOOR.ln();
    if slope > -1.0 + SLOPE_MARGIN && tail.iter().all(|&b| b >= floor) {
        return (Outcome::Divergent, None);
    }
    (Outcome::Inconclusive, None)
}

/// Whether the hint alone decides convergence.
pub(crate) fn analytic_convergence(hint: &TailHint) -> bool {
    match *hint {
        TailHint::Power { g } => match g {
            Asymptotic::Zero => true,
            Asymptotic::Infinite => false,
            Asymptotic::Power(e) => e.integrable_at_zero(),
        },
        TailHint::ExpDamped { rate, exponent } => {
            if rate <= 0.0 {
                return false;
            }
            match exponent {
                Asymptotic::Zero => false,
                Asymptotic::Infinite => true,
                Asymptotic::Power(e) => match sign_tol(e.p) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => match sign_tol(e.q) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        // exp(-rate C (ln u)^s) against du
                        Ordering::Equal => match sign_tol(e.s - 1.0) {
                            Ordering::Greater => true,
                            Ordering::Less => false,
                            Ordering::Equal => rate * e.c > 1.0 + EXPONENT_TOL,
                        },
                    },
                },
            }
        }
    }
}
