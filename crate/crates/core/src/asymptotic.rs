//! Asymptotic descriptors `g(x) ~ C x^p (log 1/x)^q (log log 1/x)^s` as `x ↓ 0`
//! and the small algebra the integral tests need to combine them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Exponents closer than this are treated as equal. Exponents are computed
/// from user parameters like `(1 - alpha) * kappa / (kappa - 1) - 1`, which
/// land on exact ties only up to rounding.
pub const EXPONENT_TOL: f64 = 1e-9;

/// `g(x) ~ C · x^p · (log 1/x)^q · (log log 1/x)^s` as `x ↓ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticExponent {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

fn cmp_tol(a: f64, b: f64) -> Ordering {
    if (a - b).abs() <= EXPONENT_TOL {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Sign of `x` with the tie band around zero.
pub(crate) fn sign_tol(x: f64) -> Ordering {
    cmp_tol(x, 0.0)
}

impl AsymptoticExponent {
    pub fn new(p: f64, q: f64, s: f64, c: f64) -> Self {
        debug_assert!(c > 0.0 && c.is_finite(), "leading constant must be positive");
        debug_assert!(p.is_finite() && q.is_finite() && s.is_finite());
        Self { p, q, s, c }
    }

    pub fn power(p: f64, c: f64) -> Self {
        Self::new(p, 0.0, 0.0, c)
    }

    /// `ln(C x^p L^q LL^s)` at `x = e^-u`; meaningful for `u > 1`.
    pub fn ln_value(&self, u: f64) -> f64 {
        let mut v = self.c.ln() - self.p * u;
        if self.q != 0.0 {
            v += self.q * u.ln();
        }
        if self.s != 0.0 {
            v += self.s * u.ln().ln();
        }
        v
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.p + o.p, self.q + o.q, self.s + o.s, self.c * o.c)
    }

    pub fn powf(&self, r: f64) -> Self {
        Self::new(self.p * r, self.q * r, self.s * r, self.c.powf(r))
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.p, self.q, self.s, self.c * k)
    }

    pub fn times_x_pow(&self, k: f64) -> Self {
        Self::new(self.p + k, self.q, self.s, self.c)
    }

    /// Descriptor of `x ↦ g(x^kappa)`.
    pub fn compose_power(&self, kappa: f64) -> Self {
        Self::new(self.p * kappa, self.q, self.s, self.c * kappa.powf(self.q))
    }

    /// Compares growth as `x ↓ 0`: `Greater` means `self` eventually dominates.
    pub fn dominance(&self, o: &Self) -> Ordering {
        cmp_tol(o.p, self.p)
            .then_with(|| cmp_tol(self.q, o.q))
            .then_with(|| cmp_tol(self.s, o.s))
    }

    /// Whether `∫_0 g(x) dx` converges at the origin.
    pub fn integrable_at_zero(&self) -> bool {
        // against dx/x the power shifts by one
        match sign_tol(self.p + 1.0) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match cmp_tol(self.q, -1.0) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => cmp_tol(self.s, -1.0) == Ordering::Less,
            },
        }
    }
}

/// Eventual behaviour of a nonnegative function near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Asymptotic {
    /// Identically zero on some `(0, ε)`.
    Zero,
    Power(AsymptoticExponent),
    /// Identically `+∞` on some `(0, ε)` (e.g. the reciprocal of `Zero`).
    Infinite,
}

impl From<AsymptoticExponent> for Asymptotic {
    fn from(e: AsymptoticExponent) -> Self {
        Asymptotic::Power(e)
    }
}

impl Asymptotic {
    pub fn constant(c: f64) -> Self {
        if c > 0.0 {
            Asymptotic::Power(AsymptoticExponent::power(0.0, c))
        } else {
            Asymptotic::Zero
        }
    }

    pub fn exponent(&self) -> Option<&AsymptoticExponent> {
        match self {
            Asymptotic::Power(e) => Some(e),
            _ => None,
        }
    }

    /// Asymptotic of a sum: the dominant term, constants added on ties.
    pub fn plus(self, o: Self) -> Self {
        self.combine(o, |a, b| a + b, true)
    }

    /// Asymptotic of the pointwise maximum.
    pub fn max(self, o: Self) -> Self {
        self.combine(o, f64::max, true)
    }

    /// Asymptotic of the pointwise minimum.
    pub fn min(self, o: Self) -> Self {
        self.combine(o, f64::min, false)
    }

    fn combine(self, o: Self, tie: impl Fn(f64, f64) -> f64, larger: bool) -> Self {
        use Asymptotic::*;
        match (self, o) {
            (Infinite, x) | (x, Infinite) => {
                if larger {
                    Infinite
                } else {
                    x
                }
            }
            (Zero, x) | (x, Zero) => {
                if larger {
                    x
                } else {
                    Zero
                }
            }
            (Power(a), Power(b)) => {
                let ord = a.dominance(&b);
                let pick_a = if larger {
                    ord == Ordering::Greater
                } else {
                    ord == Ordering::Less
                };
                match ord {
                    Ordering::Equal => Power(AsymptoticExponent::new(a.p, a.q, a.s, tie(a.c, b.c))),
                    _ if pick_a => Power(a),
                    _ => Power(b),
                }
            }
        }
    }

    /// Product; `None` for the indeterminate `0 · ∞`.
    pub fn product(self, o: Self) -> Option<Self> {
        use Asymptotic::*;
        match (self, o) {
            (Zero, Infinite) | (Infinite, Zero) => None,
            (Zero, _) | (_, Zero) => Some(Zero),
            (Infinite, _) | (_, Infinite) => Some(Infinite),
            (Power(a), Power(b)) => Some(Power(a.mul(&b))),
        }
    }

    pub fn powf(self, r: f64) -> Self {
        use Asymptotic::*;
        match self {
            Power(e) => Power(e.powf(r)),
            _ if r == 0.0 => Asymptotic::constant(1.0),
            Zero if r > 0.0 => Zero,
            Zero => Infinite,
            Infinite if r > 0.0 => Infinite,
            Infinite => Zero,
        }
    }

    pub fn recip(self) -> Self {
        self.powf(-1.0)
    }

    pub fn scale(self, k: f64) -> Self {
        match self {
            Asymptotic::Power(e) => Asymptotic::Power(e.scale(k)),
            other => other,
        }
    }

    pub fn times_x_pow(self, k: f64) -> Self {
        match self {
            Asymptotic::Power(e) => Asymptotic::Power(e.times_x_pow(k)),
            other => other,
        }
    }

    pub fn compose_power(self, kappa: f64) -> Self {
        match self {
            Asymptotic::Power(e) => Asymptotic::Power(e.compose_power(kappa)),
            other => other,
        }
    }
}
