//! Log-space arithmetic and fixed Gauss–Legendre rules.
//!
//! Everything that can overflow `f64` at depth (tails of order `x^-2` at
//! `x = e^-500`, say) is carried as a natural logarithm. Zero is `-inf`.

use std::sync::LazyLock;

/// Nodes and weights of a Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// `ln ∫_a^b exp(f(v)) dv` for `a < b`.
    pub fn ln_integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        if b <= a {
            return f64::NEG_INFINITY;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let ln_half = half.ln();
        let mut acc = LnSum::new();
        for (z, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w.ln() + ln_half + f(mid + half * z));
        }
        acc.value()
    }
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

pub static GL16: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(16));
pub static GL32: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(32));

/// `ln(e^a + e^b)`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)`, clamped to `-inf` when `b >= a`.
pub fn ln_sub(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + ln_one_minus_exp(b - a)
}

/// `ln(1 - e^x)` for `x < 0`, accurate near both ends.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    debug_assert!(x <= 0.0);
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln ∫_0^u e^{k v} dv`, i.e. `ln((e^{ku} - 1)/k)`, with the `k = 0` limit `ln u`.
pub fn ln_exp_integral(k: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let ku = k * u;
    if ku.abs() < 1e-8 {
        // (e^{ku}-1)/k = u (1 + ku/2 + ...)
        return u.ln() + (0.5 * ku).ln_1p();
    }
    if k > 0.0 {
        ku + ln_one_minus_exp(-ku) - k.ln()
    } else {
        ln_one_minus_exp(ku) - (-k).ln()
    }
}

/// Streaming log-sum-exp accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LnSum {
    max: f64,
    scaled: f64,
}

impl Default for LnSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LnSum {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled: 0.0,
        }
    }

    pub fn add(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term == f64::INFINITY || ln_term.is_nan() {
            self.max = ln_term;
            self.scaled = 1.0;
            return;
        }
        if self.max.is_nan() || self.max == f64::INFINITY {
            return;
        }
        if ln_term <= self.max {
            self.scaled += (ln_term - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        // degree 15 is the exactness limit
        let s: f64 = gl.nodes.iter().zip(&gl.weights).map(|(x, w)| w * x.powi(14)).sum();
        assert_relative_eq!(s, 2.0 / 15.0, max_relative = 1e-13);
        let total: f64 = GL32.weights.iter().sum();
        assert_relative_eq!(total, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn ln_integrate_matches_exponential() {
        let v = GL16.ln_integrate(0.0, 2.0, |v| 1.5 * v);
        let exact = ((3.0f64).exp() - 1.0) / 1.5;
        assert_relative_eq!(v.exp(), exact, max_relative = 1e-13);
    }

    #[test]
    fn log_helpers() {
        assert_relative_eq!(ln_add(1.0f64.ln(), 2.0f64.ln()).exp(), 3.0, max_relative = 1e-15);
        assert_relative_eq!(ln_sub(3.0f64.ln(), 1.0f64.ln()).exp(), 2.0, max_relative = 1e-15);
        assert_eq!(ln_sub(1.0, 1.0), f64::NEG_INFINITY);
        assert_relative_eq!(ln_exp_integral(0.0, 3.0).exp(), 3.0, max_relative = 1e-15);
        assert_relative_eq!(
            ln_exp_integral(-0.5, 2.0).exp(),
            (1.0 - (-1.0f64).exp()) / 0.5,
            max_relative = 1e-14
        );
        // overflow-free at depth
        let big = ln_exp_integral(1.5, 500.0);
        assert_relative_eq!(big, 750.0 - 1.5f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn ln_sum_accumulates() {
        let mut s = LnSum::new();
        for v in [1000.0, 1000.0, f64::NEG_INFINITY] {
            s.add(v);
        }
        assert_relative_eq!(s.value(), 1000.0 + 2f64.ln(), max_relative = 1e-15);
    }
}
