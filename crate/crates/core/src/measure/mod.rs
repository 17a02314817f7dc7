//! Lévy process specifications and the parametric jump-measure families.
//!
//! All measures are carried by `[-1, 1] \ {0}`. A measure is flattened into
//! one-sided components (see [`MeasureView`]); every functional used by the
//! integral tests is linear in the measure, so it is evaluated per component
//! and summed.

mod component;

use serde::{Deserialize, Serialize};

pub(crate) use component::Component;

use crate::asymptotic::Asymptotic;
use crate::error::{Error, Result};
use crate::quadrature::LnSum;

/// Side of the origin. `Negative` quantities are those of the reflected measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Positive => Side::Negative,
            Side::Negative => Side::Positive,
        }
    }
}

/// Jump-measure family descriptor. Serialized as `{"family": "...", ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum JumpMeasure {
    /// Density `c_plus x^(-1-alpha)` on `(0,1]` and `c_minus |x|^(-1-alpha)` on `[-1,0)`.
    StableLike { c_plus: f64, c_minus: f64, alpha: f64 },
    /// Finitely many point masses `(location, mass)`.
    CompoundPoissonAtoms { atoms: Vec<(f64, f64)> },
    /// Symmetric measure with `V(x) = 1/ln ln(1/x)` for `x <= e^-e` and no
    /// mass above `e^-e`.
    VProfileLogLog {},
    /// Spectrally negative measure given only through its `W` profile
    /// `W(y) = y^((2k-1)/k) (c ln ln(1/y))^(-(1-k)/k)`. Integral tests only.
    WProfileCritical { kappa: f64, c: f64 },
    /// The sign-reversed measure.
    NegativeOf { inner: Box<JumpMeasure> },
    /// Superposition of measures.
    Sum { parts: Vec<JumpMeasure> },
}

impl JumpMeasure {
    pub fn stable_like(c_plus: f64, c_minus: f64, alpha: f64) -> Result<Self> {
        let m = JumpMeasure::StableLike { c_plus, c_minus, alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn atoms(atoms: Vec<(f64, f64)>) -> Result<Self> {
        let m = JumpMeasure::CompoundPoissonAtoms { atoms };
        m.validate()?;
        Ok(m)
    }

    pub fn v_profile_loglog() -> Self {
        JumpMeasure::VProfileLogLog {}
    }

    pub fn w_profile_critical(kappa: f64, c: f64) -> Result<Self> {
        let m = JumpMeasure::WProfileCritical { kappa, c };
        m.validate()?;
        Ok(m)
    }

    pub fn negative_of(inner: JumpMeasure) -> Self {
        JumpMeasure::NegativeOf { inner: Box::new(inner) }
    }

    pub fn sum(parts: Vec<JumpMeasure>) -> Self {
        JumpMeasure::Sum { parts }
    }

    /// Two one-sided stable-like pieces with separate exponents.
    pub fn two_sided_stable(c_plus: f64, alpha_plus: f64, c_minus: f64, alpha_minus: f64) -> Result<Self> {
        Ok(JumpMeasure::sum(vec![
            JumpMeasure::stable_like(c_plus, 0.0, alpha_plus)?,
            JumpMeasure::stable_like(0.0, c_minus, alpha_minus)?,
        ]))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: JumpMeasure = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measures always serialize")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMeasure(msg));
        match self {
            JumpMeasure::StableLike { c_plus, c_minus, alpha } => {
                if !(c_plus.is_finite() && *c_plus >= 0.0 && c_minus.is_finite() && *c_minus >= 0.0) {
                    return bad(format!(
                        "c_plus/c_minus must be finite and >= 0, got {c_plus}/{c_minus}"
                    ));
                }
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return bad(format!("alpha must lie in (0, 2), got {alpha}"));
                }
            }
            JumpMeasure::CompoundPoissonAtoms { atoms } => {
                for &(loc, mass) in atoms {
                    if !(loc.is_finite() && loc != 0.0 && loc.abs() <= 1.0) {
                        return bad(format!("atom location {loc} outside [-1,1] \\ {{0}}"));
                    }
                    if !(mass.is_finite() && mass > 0.0) {
                        return bad(format!("atom mass {mass} must be positive"));
                    }
                }
            }
            JumpMeasure::VProfileLogLog {} => {}
            JumpMeasure::WProfileCritical { kappa, c } => {
                if !(*kappa > 0.5 && *kappa < 1.0) {
                    return bad(format!("kappa must lie in (1/2, 1), got {kappa}"));
                }
                if !(c.is_finite() && *c > 0.0) {
                    return bad(format!("c must be positive, got {c}"));
                }
            }
            JumpMeasure::NegativeOf { inner } => inner.validate()?,
            JumpMeasure::Sum { parts } => {
                for p in parts {
                    p.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Flattened one-sided view used by every numerical routine.
    pub fn view(&self) -> MeasureView {
        let mut view = MeasureView::default();
        self.flatten(false, &mut view);
        view
    }

    fn flatten(&self, negated: bool, out: &mut MeasureView) {
        let side = |s: Side| if negated { s.flip() } else { s };
        match self {
            JumpMeasure::StableLike { c_plus, c_minus, alpha } => {
                if *c_plus > 0.0 {
                    out.push(
                        side(Side::Positive),
                        Component::Power {
                            c: *c_plus,
                            alpha: *alpha,
                        },
                    );
                }
                if *c_minus > 0.0 {
                    out.push(
                        side(Side::Negative),
                        Component::Power {
                            c: *c_minus,
                            alpha: *alpha,
                        },
                    );
                }
            }
            JumpMeasure::CompoundPoissonAtoms { atoms } => {
                for &(loc, mass) in atoms {
                    let s = if loc > 0.0 { Side::Positive } else { Side::Negative };
                    out.push(side(s), Component::Atom { loc: loc.abs(), mass });
                }
            }
            JumpMeasure::VProfileLogLog {} => {
                out.push(Side::Positive, Component::LogLog);
                out.push(Side::Negative, Component::LogLog);
            }
            JumpMeasure::WProfileCritical { kappa, c } => {
                out.push(side(Side::Negative), Component::WCritical { kappa: *kappa, c: *c });
            }
            JumpMeasure::NegativeOf { inner } => inner.flatten(!negated, out),
            JumpMeasure::Sum { parts } => {
                for p in parts {
                    p.flatten(negated, out);
                }
            }
        }
    }

    /// `Π((x, ∞))` for `x ∈ (0, 1]`.
    pub fn tail_plus(&self, x: f64) -> Result<f64> {
        let u = log_argument(x)?;
        Ok(self.view().ln_tail(Side::Positive, u)?.exp())
    }

    /// `Π((-∞, -x))` for `x ∈ (0, 1]`.
    pub fn tail_minus(&self, x: f64) -> Result<f64> {
        let u = log_argument(x)?;
        Ok(self.view().ln_tail(Side::Negative, u)?.exp())
    }

    /// Whether `∫_{|x|<=1} |x| Π(dx) < ∞`.
    pub fn is_bv(&self) -> bool {
        self.view().is_bv()
    }

    /// Upper (Blumenthal–Getoor) index `inf{a > 0 : ∫ |x|^a Π(dx) < ∞}`.
    pub fn bg_index(&self) -> f64 {
        self.view().all().map(|(_, c)| c.bg_index()).fold(0.0, f64::max)
    }

    /// `∫ x Π(dx)` over `[-1, 1]`; `None` if the measure is not bv.
    pub fn signed_first_moment(&self) -> Option<f64> {
        let v = self.view();
        if !v.is_bv() {
            return None;
        }
        Some(
            v.plus.iter().map(Component::first_moment).sum::<f64>()
                - v.minus.iter().map(Component::first_moment).sum::<f64>(),
        )
    }

    /// `Π(ℝ) < ∞`.
    pub fn has_finite_mass(&self) -> bool {
        self.view().all().all(|(_, c)| c.has_finite_mass())
    }

    pub fn supports_sampling(&self) -> bool {
        self.view().all().all(|(_, c)| c.supports_sampling())
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            JumpMeasure::StableLike { .. } => "StableLike",
            JumpMeasure::CompoundPoissonAtoms { .. } => "CompoundPoissonAtoms",
            JumpMeasure::VProfileLogLog {} => "VProfileLogLog",
            JumpMeasure::WProfileCritical { .. } => "WProfileCritical",
            JumpMeasure::NegativeOf { .. } => "NegativeOf",
            JumpMeasure::Sum { .. } => "Sum",
        }
    }
}

/// `u = ln(1/x)` with the `(0, 1]` domain check.
pub fn log_argument(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "(0, 1]",
        });
    }
    Ok(-x.ln())
}

/// A measure split into its positive part and the positive part of its
/// reflection.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasureView {
    pub(crate) plus: Vec<Component>,
    pub(crate) minus: Vec<Component>,
}

macro_rules! side_sum {
    ($self:ident, $side:expr, |$c:ident| $body:expr) => {{
        let mut acc = LnSum::new();
        for $c in $self.side($side) {
            acc.add($body?);
        }
        Ok(acc.value())
    }};
}

macro_rules! side_asym {
    ($self:ident, $side:expr, |$c:ident| $body:expr) => {{
        let mut acc = Asymptotic::Zero;
        for $c in $self.side($side) {
            acc = acc.plus($body?);
        }
        Ok(acc)
    }};
}

impl MeasureView {
    fn push(&mut self, side: Side, comp: Component) {
        match side {
            Side::Positive => self.plus.push(comp),
            Side::Negative => self.minus.push(comp),
        }
    }

    pub(crate) fn side(&self, side: Side) -> &[Component] {
        match side {
            Side::Positive => &self.plus,
            Side::Negative => &self.minus,
        }
    }

    pub(crate) fn all(&self) -> impl Iterator<Item = (Side, &Component)> {
        self.plus
            .iter()
            .map(|c| (Side::Positive, c))
            .chain(self.minus.iter().map(|c| (Side::Negative, c)))
    }

    /// The view of the reflected measure.
    pub fn reflected(&self) -> MeasureView {
        MeasureView {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn is_empty_side(&self, side: Side) -> bool {
        self.side(side).is_empty()
    }

    pub fn is_bv(&self) -> bool {
        self.all().all(|(_, c)| c.is_bv())
    }

    pub fn is_side_bv(&self, side: Side) -> bool {
        self.side(side).iter().all(Component::is_bv)
    }

    /// `u` values where tails on the given side (or both) jump or kink.
    pub(crate) fn kinks(&self, side: Option<Side>) -> Vec<f64> {
        self.all()
            .filter(|(s, _)| side.is_none_or(|want| *s == want))
            .filter_map(|(_, c)| match *c {
                Component::Atom { loc, .. } => Some(-loc.ln()),
                Component::LogLog => Some(component::LOGLOG_U0),
                _ => None,
            })
            .collect()
    }

    /// Point masses on one side as `(distance, mass)`.
    pub fn atoms(&self, side: Side) -> Vec<(f64, f64)> {
        self.side(side).iter().filter_map(Component::atom).collect()
    }

    pub fn ln_tail(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_tail(u))
    }

    pub fn ln_tail_total(&self, u: f64) -> Result<f64> {
        Ok(crate::quadrature::ln_add(
            self.ln_tail(Side::Positive, u)?,
            self.ln_tail(Side::Negative, u)?,
        ))
    }

    pub fn ln_density(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_density(u))
    }

    pub fn ln_moment_below(&self, side: Side, beta: f64, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_moment_below(beta, u))
    }

    pub fn ln_moment_above(&self, side: Side, beta: f64, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_moment_above(beta, u))
    }

    pub fn ln_v_side(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_v(u))
    }

    pub fn ln_w_side(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_w(u))
    }

    pub fn ln_a_side(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_a(u))
    }

    pub fn ln_u_plus_side(&self, side: Side, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_u_plus(u))
    }

    pub fn ln_rho_side(&self, side: Side, kappa: f64, u: f64) -> Result<f64> {
        side_sum!(self, side, |c| c.ln_rho(kappa, u))
    }

    pub fn asym_tail(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_tail())
    }

    pub fn asym_density(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_density())
    }

    pub fn asym_moment_below(&self, side: Side, beta: f64) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_moment_below(beta))
    }

    pub fn asym_v_side(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_v())
    }

    pub fn asym_w_side(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_w())
    }

    pub fn asym_a_side(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_a())
    }

    pub fn asym_u_plus_side(&self, side: Side) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_u_plus())
    }

    pub fn asym_rho_side(&self, side: Side, kappa: f64) -> Result<Asymptotic> {
        side_asym!(self, side, |c| c.asym_rho(kappa))
    }
}

/// Characteristic triplet `(gamma, sigma^2, Π)` with `Π` carried by `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyProcessSpec {
    pub gamma: f64,
    pub sigma2: f64,
    pub jump: JumpMeasure,
}

impl LevyProcessSpec {
    pub fn new(gamma: f64, sigma2: f64, jump: JumpMeasure) -> Result<Self> {
        let s = Self { gamma, sigma2, jump };
        s.validate()?;
        Ok(s)
    }

    /// Pure-jump spec whose drift `delta` is the given value (bv jumps only).
    pub fn with_drift(delta: f64, jump: JumpMeasure) -> Result<Self> {
        let m1 = jump.signed_first_moment().ok_or(Error::BvRequired)?;
        Self::new(delta + m1, 0.0, jump)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() {
            return Err(Error::InvalidSpec(format!("gamma must be finite, got {}", self.gamma)));
        }
        if !(self.sigma2.is_finite() && self.sigma2 >= 0.0) {
            return Err(Error::InvalidSpec(format!("sigma2 must be >= 0, got {}", self.sigma2)));
        }
        self.jump.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: LevyProcessSpec = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    /// Spec of `-X`.
    pub fn negated(&self) -> Self {
        Self {
            gamma: -self.gamma,
            sigma2: self.sigma2,
            jump: JumpMeasure::negative_of(self.jump.clone()),
        }
    }

    /// `X ∈ bv`: no Brownian part and a bv jump measure.
    pub fn is_bv(&self) -> bool {
        self.sigma2 == 0.0 && self.jump.is_bv()
    }

    /// `delta = gamma - ∫_[-1,1] x Π(dx)`.
    pub fn drift_delta(&self) -> Result<f64> {
        let m1 = self.jump.signed_first_moment().ok_or(Error::BvRequired)?;
        Ok(self.gamma - m1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tail_examples() {
        let m = JumpMeasure::stable_like(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(m.tail_plus(0.5).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(m.tail_minus(0.5).unwrap(), 1.0, max_relative = 1e-14);
        assert_eq!(m.tail_plus(1.0).unwrap(), 0.0);

        let a = JumpMeasure::atoms(vec![(0.3, 2.0)]).unwrap();
        assert_eq!(a.tail_plus(0.2).unwrap(), 2.0);
        assert_eq!(a.tail_minus(0.2).unwrap(), 0.0);
        assert_eq!(JumpMeasure::negative_of(a).tail_minus(0.2).unwrap(), 2.0);
    }

    #[test]
    fn tail_domain_errors() {
        let m = JumpMeasure::v_profile_loglog();
        assert!(matches!(m.tail_plus(0.0), Err(Error::Domain { .. })));
        assert!(matches!(m.tail_plus(1.5), Err(Error::Domain { .. })));
        assert!(matches!(m.tail_minus(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn bv_and_drift() {
        assert!(JumpMeasure::stable_like(1.0, 1.0, 0.5).unwrap().is_bv());
        assert!(!JumpMeasure::stable_like(1.0, 1.0, 1.5).unwrap().is_bv());
        assert!(JumpMeasure::atoms(vec![(0.5, 2.0), (-0.1, 1.0)]).unwrap().is_bv());
        assert!(!JumpMeasure::v_profile_loglog().is_bv());
        assert!(!JumpMeasure::w_profile_critical(0.75, 1.0).unwrap().is_bv());

        let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::atoms(vec![(0.5, 2.0)]).unwrap()).unwrap();
        assert_relative_eq!(s.drift_delta().unwrap(), -1.0);
        let s = LevyProcessSpec::new(1.0, 0.0, JumpMeasure::stable_like(1.0, 1.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(s.drift_delta().unwrap(), 1.0);
        let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::stable_like(1.0, 0.0, 0.5).unwrap()).unwrap();
        assert_relative_eq!(s.drift_delta().unwrap(), -2.0, max_relative = 1e-14);
        let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::v_profile_loglog()).unwrap();
        assert!(matches!(s.drift_delta(), Err(Error::BvRequired)));
    }

    #[test]
    fn bg_index_by_family() {
        assert_eq!(JumpMeasure::stable_like(1.0, 1.0, 1.5).unwrap().bg_index(), 1.5);
        assert_eq!(JumpMeasure::atoms(vec![(0.3, 1.0)]).unwrap().bg_index(), 0.0);
        assert_eq!(JumpMeasure::v_profile_loglog().bg_index(), 2.0);
        assert_relative_eq!(
            JumpMeasure::w_profile_critical(0.75, 1.0).unwrap().bg_index(),
            4.0 / 3.0
        );
    }

    #[test]
    fn constructors_reject_mass_outside_unit_interval() {
        assert!(JumpMeasure::atoms(vec![(1.5, 1.0)]).is_err());
        assert!(JumpMeasure::atoms(vec![(0.0, 1.0)]).is_err());
        assert!(JumpMeasure::atoms(vec![(0.5, -1.0)]).is_err());
        assert!(JumpMeasure::stable_like(1.0, 1.0, 2.0).is_err());
        assert!(JumpMeasure::w_profile_critical(0.4, 1.0).is_err());
        assert!(LevyProcessSpec::new(0.0, -1.0, JumpMeasure::v_profile_loglog()).is_err());
    }

    #[test]
    fn json_uses_documented_field_names() {
        let m = JumpMeasure::negative_of(JumpMeasure::atoms(vec![(0.3, 2.0)]).unwrap());
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"family":"NegativeOf","inner":{"family":"CompoundPoissonAtoms","atoms":[[0.3,2.0]]}}"#
        );
        let parsed = JumpMeasure::from_json(r#"{"family":"StableLike","c_plus":1,"c_minus":0.5,"alpha":1.2}"#).unwrap();
        assert_eq!(parsed, JumpMeasure::stable_like(1.0, 0.5, 1.2).unwrap());
        let parsed = JumpMeasure::from_json(r#"{"family":"VProfileLogLog"}"#).unwrap();
        assert_eq!(parsed, JumpMeasure::v_profile_loglog());
        let parsed = JumpMeasure::from_json(r#"{"family":"WProfileCritical","kappa":0.75,"c":1}"#).unwrap();
        assert_eq!(parsed, JumpMeasure::w_profile_critical(0.75, 1.0).unwrap());
        assert!(JumpMeasure::from_json(r#"{"family":"StableLike","c_plus":1,"c_minus":1,"alpha":3}"#).is_err());
    }
}
