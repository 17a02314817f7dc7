//! Derived functionals of a jump measure: `V`, `U`, `W`, `A±`, `rho_kappa`,
//! `U+` and `m_T`, with their small-`x` asymptotic descriptors.

use serde::{Deserialize, Serialize};

use crate::asymptotic::{Asymptotic, AsymptoticExponent};
use crate::error::{Error, Result};
use crate::measure::{log_argument, JumpMeasure, MeasureView, Side};
use crate::quadrature::ln_add;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum FunctionalKind {
    /// `V(x) = ∫_{|y|<=x} y^2 Π(dy)`.
    V,
    /// `U(x) = V(x) + x^2 Π̄(x)`.
    U,
    /// `W(y) = ∫_0^y ∫_x^1 z Π_side(dz) dx`.
    #[serde(rename = "W_side")]
    W { side: Side },
    /// `A+(x) = ∫_0^x Π̄+(y) dy`.
    #[serde(rename = "A_plus")]
    APlus,
    #[serde(rename = "A_minus")]
    AMinus,
    /// `rho_kappa(x) = (1/kappa) ∫_x^1 y^(1/kappa - 1) Π̄+(y) dy`.
    #[serde(rename = "rho_kappa")]
    RhoKappa { kappa: f64 },
    /// `U+(x) = 2 ∫_0^x y Π̄+(y) dy`.
    #[serde(rename = "U_plus")]
    UPlus,
    /// `m_T(x) = ∫_0^x Π̄_T(y) dy` for a measure carried by `(0, 1]`.
    #[serde(rename = "m_T")]
    MT,
}

impl FunctionalKind {
    pub fn name(&self) -> String {
        match self {
            FunctionalKind::V => "V".into(),
            FunctionalKind::U => "U".into(),
            FunctionalKind::W { side: Side::Positive } => "W_plus".into(),
            FunctionalKind::W { side: Side::Negative } => "W_minus".into(),
            FunctionalKind::APlus => "A_plus".into(),
            FunctionalKind::AMinus => "A_minus".into(),
            FunctionalKind::RhoKappa { kappa } => format!("rho_kappa_{kappa}"),
            FunctionalKind::UPlus => "U_plus".into(),
            FunctionalKind::MT => "m_T".into(),
        }
    }

    /// Whether the functional is nonincreasing in `x` (only `rho_kappa`).
    pub fn is_decreasing(&self) -> bool {
        matches!(self, FunctionalKind::RhoKappa { .. })
    }

    fn validate(&self) -> Result<()> {
        if let FunctionalKind::RhoKappa { kappa } = *self {
            if !(kappa > 0.0 && kappa.is_finite()) {
                return Err(Error::Domain {
                    what: "kappa",
                    value: kappa,
                    domain: "(0, ∞)",
                });
            }
        }
        Ok(())
    }
}

/// Value of the functional at `x ∈ (0, 1]`.
pub fn eval_functional(m: &JumpMeasure, k: FunctionalKind, x: f64) -> Result<f64> {
    let u = log_argument(x)?;
    let v = ln_functional(&m.view(), k, u)?;
    if v == f64::INFINITY {
        return Err(Error::BvRequired);
    }
    Ok(v.exp())
}

/// `ln` of the functional at `x = e^-u`; `+inf` where it diverges
/// (e.g. `A+` of a non-bv side).
pub fn ln_functional(view: &MeasureView, k: FunctionalKind, u: f64) -> Result<f64> {
    k.validate()?;
    use FunctionalKind::*;
    match k {
        V => Ok(ln_add(
            view.ln_v_side(Side::Positive, u)?,
            view.ln_v_side(Side::Negative, u)?,
        )),
        U => Ok(ln_add(
            view.ln_u_plus_side(Side::Positive, u)?,
            view.ln_u_plus_side(Side::Negative, u)?,
        )),
        W { side } => view.ln_w_side(side, u),
        APlus | MT => view.ln_a_side(Side::Positive, u),
        AMinus => view.ln_a_side(Side::Negative, u),
        RhoKappa { kappa } => view.ln_rho_side(Side::Positive, kappa, u),
        UPlus => view.ln_u_plus_side(Side::Positive, u),
    }
}

/// Asymptotic descriptor of the functional as `x ↓ 0`, including the
/// degenerate `Zero` / `Infinite` cases.
pub fn asymptotic_descriptor(view: &MeasureView, k: FunctionalKind) -> Result<Asymptotic> {
    k.validate()?;
    use FunctionalKind::*;
    match k {
        V => Ok(view
            .asym_v_side(Side::Positive)?
            .plus(view.asym_v_side(Side::Negative)?)),
        U => Ok(view
            .asym_u_plus_side(Side::Positive)?
            .plus(view.asym_u_plus_side(Side::Negative)?)),
        W { side } => view.asym_w_side(side),
        APlus | MT => view.asym_a_side(Side::Positive),
        AMinus => view.asym_a_side(Side::Negative),
        RhoKappa { kappa } => view.asym_rho_side(Side::Positive, kappa),
        UPlus => view.asym_u_plus_side(Side::Positive),
    }
}

/// `(p, q, s, C)` with `f(x) ~ C x^p (ln 1/x)^q (ln ln 1/x)^s`.
pub fn asymptotic_of(m: &JumpMeasure, k: FunctionalKind) -> Result<AsymptoticExponent> {
    match asymptotic_descriptor(&m.view(), k)? {
        Asymptotic::Power(e) => Ok(e),
        Asymptotic::Zero => Err(Error::UnsupportedFunctional {
            family: m.family_name(),
            functional: format!("{} (vanishes near 0)", k.name()),
        }),
        Asymptotic::Infinite => Err(Error::UnsupportedFunctional {
            family: m.family_name(),
            functional: format!("{} (infinite)", k.name()),
        }),
    }
}

/// The functional on a geometric grid `x_i = x_min^(i/(n-1))`, `i = 0..n`.
pub fn functional_grid(m: &JumpMeasure, k: FunctionalKind, x_min: f64, n: usize) -> Result<Vec<(f64, f64)>> {
    let u_max = log_argument(x_min)?;
    let view = m.view();
    (0..n)
        .map(|i| {
            let u = if n > 1 {
                u_max * i as f64 / (n - 1) as f64
            } else {
                u_max
            };
            let v = ln_functional(&view, k, u)?;
            Ok(((-u).exp(), v.exp()))
        })
        .collect()
}
