//! The concrete integrals: condition (2) in tail and moment form, `I(a)`,
//! `J(lambda)`, `K(d)`, the one-sided bv integral and its min-form, and the
//! `x / A+(x)` integral against the negative jumps.

use serde::{Deserialize, Serialize};

use super::engine::{Engine, Integrand};
use super::{IntegralVerdict, Outcome, TailHint};
use crate::asymptotic::{Asymptotic, AsymptoticExponent};
use crate::error::{Error, Result};
use crate::functionals::{asymptotic_descriptor, ln_functional, FunctionalKind};
use crate::measure::{JumpMeasure, MeasureView, Side};
use crate::quadrature::ln_add;

/// Both forms of condition (2): `∫_0^1 Π̄(x^kappa) dx` and `∫ |x|^(1/kappa) Π(dx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition2Forms {
    pub tail_form: IntegralVerdict,
    pub moment_form: IntegralVerdict,
    pub consistent: bool,
}

/// The one-sided bv integral and its min-form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Form51 {
    pub quotient_form: IntegralVerdict,
    pub min_form: IntegralVerdict,
    pub consistent: bool,
}

fn check_kappa(kappa: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if kappa > lo && kappa < hi {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "kappa",
            value: kappa,
            domain,
        })
    }
}

fn check_positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: v,
            domain: "(0, ∞)",
        })
    }
}

fn side_name(side: Option<Side>) -> &'static str {
    match side {
        None => "",
        Some(Side::Positive) => "+",
        Some(Side::Negative) => "-",
    }
}

fn ln_tail(view: &MeasureView, side: Option<Side>, u: f64) -> Result<f64> {
    match side {
        Some(s) => view.ln_tail(s, u),
        None => view.ln_tail_total(u),
    }
}

fn ln_density(view: &MeasureView, side: Option<Side>, u: f64) -> Result<f64> {
    match side {
        Some(s) => view.ln_density(s, u),
        None => Ok(ln_add(
            view.ln_density(Side::Positive, u)?,
            view.ln_density(Side::Negative, u)?,
        )),
    }
}

fn asym_on(side: Option<Side>, f: impl Fn(Side) -> Result<Asymptotic>) -> Result<Asymptotic> {
    match side {
        Some(s) => f(s),
        None => Ok(f(Side::Positive)?.plus(f(Side::Negative)?)),
    }
}

fn atoms_on(view: &MeasureView, side: Option<Side>) -> Vec<(f64, f64)> {
    match side {
        Some(s) => view.atoms(s),
        None => {
            let mut a = view.atoms(Side::Positive);
            a.extend(view.atoms(Side::Negative));
            a
        }
    }
}

fn x_pow(p: f64) -> Asymptotic {
    AsymptoticExponent::power(p, 1.0).into()
}

impl Engine {
    /// Condition (2), `∫_0^1 Π̄(x^kappa) dx < ∞`, for the whole measure or one side.
    /// The verdict carries a note when the moment form disagrees.
    pub fn condition_2(&self, m: &JumpMeasure, kappa: f64, side: Option<Side>) -> Result<IntegralVerdict> {
        let forms = self.condition_2_forms(m, kappa, side)?;
        let mut v = forms.tail_form;
        if !forms.consistent {
            v.notes.push(format!(
                "moment form is {} while tail form is {}",
                forms.moment_form.outcome.label(),
                v.outcome.label()
            ));
        }
        Ok(v)
    }

    pub fn condition_2_forms(&self, m: &JumpMeasure, kappa: f64, side: Option<Side>) -> Result<Condition2Forms> {
        check_kappa(kappa, 0.5, f64::INFINITY, "(1/2, ∞)")?;
        let view = m.view();
        let tail_form = self.condition_2_tail_form(&view, kappa, side)?;
        let moment_form = self.condition_2_moment_form(&view, kappa, side)?;
        let consistent = tail_form.outcome.same_kind(&moment_form.outcome);
        Ok(Condition2Forms {
            tail_form,
            moment_form,
            consistent,
        })
    }

    fn condition_2_tail_form(&self, view: &MeasureView, kappa: f64, side: Option<Side>) -> Result<IntegralVerdict> {
        let hint = asym_on(side, |s| view.asym_tail(s))?.compose_power(kappa);
        let breaks = view.kinks(side).into_iter().map(|k| k / kappa);
        let g = Integrand::new(format!("condition_2{}(kappa={kappa})", side_name(side)), |u| {
            ln_tail(view, side, kappa * u)
        })
        .with_hint(hint)
        .with_breaks(breaks);
        self.classify(&g)
    }

    fn condition_2_moment_form(&self, view: &MeasureView, kappa: f64, side: Option<Side>) -> Result<IntegralVerdict> {
        let b = 1.0 / kappa;
        let hint = asym_on(side, |s| view.asym_density(s))?.times_x_pow(b);
        let atoms: f64 = atoms_on(view, side).iter().map(|(loc, m)| m * loc.powf(b)).sum();
        let g = Integrand::new(format!("condition_2{}_moment(kappa={kappa})", side_name(side)), |u| {
            Ok(-b * u + ln_density(view, side, u)?)
        })
        .with_hint(hint)
        .with_breaks(view.kinks(side))
        .with_point_mass(atoms);
        self.classify(&g)
    }

    /// `I(a) = ∫_0^1 x^-1 exp(-a^2 / 2V(x)) dx`.
    pub fn i_test(&self, m: &JumpMeasure, a: f64) -> Result<IntegralVerdict> {
        check_positive("a", a)?;
        let view = m.view();
        let rate = 0.5 * a * a;
        let v_asym = asymptotic_descriptor(&view, FunctionalKind::V)?;
        let g = Integrand::new(format!("I(a={a})"), |u| {
            let ln_v = ln_functional(&view, FunctionalKind::V, u)?;
            Ok(u - rate * (-ln_v).exp())
        })
        .with_hint(TailHint::ExpDamped {
            rate,
            exponent: v_asym.recip(),
        })
        .with_breaks(view.kinks(None));
        self.classify(&g)
    }

    /// `J(lambda) = ∫_0^1 exp(-lambda (y^((2k-1)/k) / W(y))^(k/(1-k))) dy/y`
    /// with `W` built from the given side.
    pub fn j_test(&self, m: &JumpMeasure, lambda: f64, kappa: f64, side: Side) -> Result<IntegralVerdict> {
        check_positive("lambda", lambda)?;
        check_kappa(kappa, 0.5, 1.0, "(1/2, 1)")?;
        let view = m.view();
        let e = (2.0 * kappa - 1.0) / kappa;
        let r = kappa / (1.0 - kappa);
        let kind = FunctionalKind::W { side };
        let exponent = asymptotic_descriptor(&view, kind)?.recip().times_x_pow(e).powf(r);
        let g = Integrand::new(
            format!("J{}(lambda={lambda}, kappa={kappa})", side_name(Some(side))),
            |u| {
                let ln_w = ln_functional(&view, kind, u)?;
                Ok(u - lambda * (r * (-e * u - ln_w)).exp())
            },
        )
        .with_hint(TailHint::ExpDamped { rate: lambda, exponent })
        .with_breaks(view.kinks(Some(side)));
        self.classify(&g)
    }

    /// `K(d) = ∫_0^1 exp(-d A+(y)^(k/(k-1)) / y) dy/y`. Also serves `K_T` with
    /// `m_T = A+` and `gamma` in place of `kappa`.
    pub fn k_test(&self, m: &JumpMeasure, d: f64, kappa: f64) -> Result<IntegralVerdict> {
        check_positive("d", d)?;
        check_kappa(kappa, 1.0, f64::INFINITY, "(1, ∞)")?;
        let view = m.view();
        if !view.is_side_bv(Side::Positive) {
            return Err(Error::BvRequired);
        }
        let r = kappa / (kappa - 1.0);
        let exponent = asymptotic_descriptor(&view, FunctionalKind::APlus)?
            .powf(r)
            .times_x_pow(-1.0);
        let g = Integrand::new(format!("K(d={d}, kappa={kappa})"), |u| {
            let ln_a = ln_functional(&view, FunctionalKind::APlus, u)?;
            Ok(u - d * (r * ln_a + u).exp())
        })
        .with_hint(TailHint::ExpDamped { rate: d, exponent })
        .with_breaks(view.kinks(Some(Side::Positive)));
        self.classify(&g)
    }

    /// `∫_(0,1] Π+(dx) / (x^(-1/kappa) + A-(x)/x)`, with a note when the min-form disagrees.
    pub fn test_5_1(&self, m: &JumpMeasure, kappa: f64) -> Result<IntegralVerdict> {
        let forms = self.test_5_1_forms(m, kappa)?;
        let mut v = forms.quotient_form;
        if !forms.consistent {
            v.notes.push(format!(
                "min-form is {} while quotient form is {}",
                forms.min_form.outcome.label(),
                v.outcome.label()
            ));
        }
        Ok(v)
    }

    pub fn test_5_1_forms(&self, m: &JumpMeasure, kappa: f64) -> Result<Form51> {
        check_kappa(kappa, 1.0, f64::INFINITY, "(1, ∞)")?;
        let view = m.view();
        if !view.is_bv() {
            return Err(Error::BvRequired);
        }
        let b = 1.0 / kappa;
        let a_minus = asymptotic_descriptor(&view, FunctionalKind::AMinus)?;
        let dens = view.asym_density(Side::Positive)?;
        let ln_a_minus = |u: f64| ln_functional(&view, FunctionalKind::AMinus, u);
        let atoms = view.atoms(Side::Positive);
        let breaks = view.kinks(None);

        let denom = x_pow(-b).plus(a_minus.times_x_pow(-1.0));
        let quotient_hint = dens.product(denom.recip());
        let mut quotient_mass = 0.0;
        for &(loc, mass) in &atoms {
            let u = -loc.ln();
            quotient_mass += mass / (loc.powf(-b) + ln_a_minus(u)?.exp() / loc);
        }
        let mut g = Integrand::new(format!("5.1(kappa={kappa})"), |u| {
            Ok(view.ln_density(Side::Positive, u)? - ln_add(b * u, ln_a_minus(u)? + u))
        })
        .with_breaks(breaks.clone())
        .with_point_mass(quotient_mass);
        if let Some(h) = quotient_hint {
            g = g.with_hint(h);
        }
        let quotient_form = self.classify(&g)?;

        let min_hint = dens.product(x_pow(b).min(a_minus.recip().times_x_pow(1.0)));
        let mut min_mass = 0.0;
        for &(loc, mass) in &atoms {
            let u = -loc.ln();
            min_mass += mass * loc.powf(b).min(loc / ln_a_minus(u)?.exp());
        }
        let mut g = Integrand::new(format!("5.1_min(kappa={kappa})"), |u| {
            Ok(view.ln_density(Side::Positive, u)? + (-b * u).min(-u - ln_a_minus(u)?))
        })
        .with_breaks(breaks)
        .with_point_mass(min_mass);
        if let Some(h) = min_hint {
            g = g.with_hint(h);
        }
        let min_form = self.classify(&g)?;

        let consistent = quotient_form.outcome.same_kind(&min_form.outcome);
        Ok(Form51 {
            quotient_form,
            min_form,
            consistent,
        })
    }

    /// `∫_(0,1] (x / A+(x)) Π-(dx)`.
    pub fn test_33b(&self, m: &JumpMeasure) -> Result<IntegralVerdict> {
        let view = m.view();
        let label = "33b";
        if view.is_empty_side(Side::Negative) {
            return Ok(IntegralVerdict::trivial(
                label,
                Outcome::Convergent { value: 0.0 },
                "no negative jumps",
            ));
        }
        if view.is_empty_side(Side::Positive) {
            return Ok(IntegralVerdict::trivial(
                label,
                Outcome::Divergent,
                "A+ vanishes identically while negative jumps are present",
            ));
        }
        if !view.is_side_bv(Side::Positive) {
            return Err(Error::BvRequired);
        }
        let a_plus = asymptotic_descriptor(&view, FunctionalKind::APlus)?;
        let hint = view
            .asym_density(Side::Negative)?
            .product(a_plus.recip().times_x_pow(1.0));
        let ln_a_plus = |u: f64| ln_functional(&view, FunctionalKind::APlus, u);
        let mut mass = 0.0;
        for (loc, m) in view.atoms(Side::Negative) {
            mass += m * loc / ln_a_plus(-loc.ln())?.exp();
        }
        let mut g = Integrand::new(label, |u| Ok(-u + view.ln_density(Side::Negative, u)? - ln_a_plus(u)?))
            .with_breaks(view.kinks(None))
            .with_point_mass(mass);
        if let Some(h) = hint {
            g = g.with_hint(h);
        }
        self.classify(&g)
    }
}

/// Condition (2) for the whole measure with the default engine.
pub fn test_condition_2(m: &JumpMeasure, kappa: f64) -> Result<IntegralVerdict> {
    Engine::default().condition_2(m, kappa, None)
}

pub fn i_test(m: &JumpMeasure, a: f64) -> Result<IntegralVerdict> {
    Engine::default().i_test(m, a)
}

pub fn j_test(m: &JumpMeasure, lambda: f64, kappa: f64, side: Side) -> Result<IntegralVerdict> {
    Engine::default().j_test(m, lambda, kappa, side)
}

pub fn k_test(m: &JumpMeasure, d: f64, kappa: f64) -> Result<IntegralVerdict> {
    Engine::default().k_test(m, d, kappa)
}

pub fn test_5_1(m: &JumpMeasure, kappa: f64) -> Result<IntegralVerdict> {
    Engine::default().test_5_1(m, kappa)
}

pub fn test_33b(m: &JumpMeasure) -> Result<IntegralVerdict> {
    Engine::default().test_33b(m)
}
