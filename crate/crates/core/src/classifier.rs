//! Decision logic for `limsup |X_t|/t^kappa`, `limsup X_t/t^kappa`,
//! `liminf X_t/t^kappa` and `lim X_t/t^kappa` as `t ↓ 0`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integral::{critical_constant, CriticalConstant, CriticalValue, Engine, IntegralVerdict};
use crate::measure::{JumpMeasure, LevyProcessSpec, Side};

/// Two exponents closer than this are treated as the same `kappa`.
const KAPPA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotApplicableReason {
    /// The event never happens for this process and exponent.
    Never,
    /// Only `limsup <= 0` is known.
    AtMostZero,
    /// Only `liminf >= 0` is known.
    AtLeastZero,
}

/// Almost-sure value of the normalized limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassificationValue {
    Zero,
    /// A constant in `(0, ∞)`; the number is reported only when it is determined.
    FinitePositive {
        value: Option<f64>,
    },
    /// A constant in `(-∞, 0)` (liminf of a sign-reversed finite limsup).
    FiniteNegative {
        value: Option<f64>,
    },
    Infinite,
    MinusInfinite,
    EqualsDrift {
        delta: f64,
    },
    EqualsSigma {
        sigma: f64,
    },
    NotApplicable {
        reason: NotApplicableReason,
    },
}

impl ClassificationValue {
    /// Value for `-X`: `liminf X = -limsup(-X)`.
    pub fn flipped(self) -> Self {
        use ClassificationValue::*;
        match self {
            Zero => Zero,
            FinitePositive { value } => FiniteNegative {
                value: value.map(|v| -v),
            },
            FiniteNegative { value } => FinitePositive {
                value: value.map(|v| -v),
            },
            Infinite => MinusInfinite,
            MinusInfinite => Infinite,
            EqualsDrift { delta } => EqualsDrift { delta: -delta },
            EqualsSigma { sigma } => EqualsSigma { sigma: -sigma },
            NotApplicable { reason } => NotApplicable {
                reason: match reason {
                    NotApplicableReason::Never => NotApplicableReason::Never,
                    NotApplicableReason::AtMostZero => NotApplicableReason::AtLeastZero,
                    NotApplicableReason::AtLeastZero => NotApplicableReason::AtMostZero,
                },
            },
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ClassificationValue::Infinite)
    }

    pub fn is_minus_infinite(&self) -> bool {
        matches!(self, ClassificationValue::MinusInfinite)
    }

    pub fn short_name(&self) -> &'static str {
        use ClassificationValue::*;
        match self {
            Zero => "zero",
            FinitePositive { .. } => "finite_positive",
            FiniteNegative { .. } => "finite_negative",
            Infinite => "infinite",
            MinusInfinite => "minus_infinite",
            EqualsDrift { .. } => "equals_drift",
            EqualsSigma { .. } => "equals_sigma",
            NotApplicable { .. } => "not_applicable",
        }
    }
}

/// The result a classification rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Brownian component present.
    KhintchineLil,
    /// `kappa < 1/2`, two-sided.
    TwoSidedSmallKappa,
    /// `kappa < 1/2`, one-sided.
    OneSidedSmallKappa,
    /// `kappa = 1/2` through the critical constant of `I(a)`.
    SqrtScale,
    /// Condition (2) for `kappa > 1/2`.
    PowerCrossing,
    /// `kappa > 1`, bv with nonzero drift, two-sided.
    TwoSidedDriftDominates,
    /// `kappa > 1`, not bv, two-sided.
    TwoSidedNotBv,
    /// `lim X_t/t = delta` for bv processes.
    DriftLimit,
    /// `1/2 < kappa < 1`, not bv, one-sided.
    OneSidedNotBv,
    /// `1/2 <= kappa <= 1`, bv, one-sided.
    OneSidedBvSmallKappa,
    /// `kappa > 1`, bv with nonzero drift, one-sided.
    OneSidedDriftSign,
    /// `kappa > 1`, bv with zero drift, one-sided.
    OneSidedBvZeroDrift,
    /// `kappa >= 1`, not bv, one-sided.
    OneSidedNotBvLargeKappa,
    /// `lim X_t/t^kappa = +∞` for bv processes with zero drift.
    LimitInfinite,
    /// Situations where `lim X_t/t^kappa = ±∞` cannot occur.
    LimitNever,
    /// Subordinator liminf through `K_T(d)`.
    SubordinatorLiminf,
    /// Finite jump activity without drift: `X_t = 0` before the first jump.
    NoJumpYet,
}

impl Basis {
    /// Citation tag embedded in reports.
    pub fn tag(&self) -> &'static str {
        use Basis::*;
        match self {
            KhintchineLil => "Khintchine LIL (khin2)",
            TwoSidedSmallKappa => "Table 1",
            OneSidedSmallKappa => "Table 2",
            SqrtScale => "Theorem 2",
            PowerCrossing => "Theorem 1",
            TwoSidedDriftDominates => "Table 1",
            TwoSidedNotBv => "Table 1",
            DriftLimit => "Remark after Theorem 2 (lim X_t/t = delta)",
            OneSidedNotBv => "Theorem 3.1",
            OneSidedBvSmallKappa => "Table 2",
            OneSidedDriftSign => "Table 2",
            OneSidedBvZeroDrift => "Theorem 3.2",
            OneSidedNotBvLargeKappa => "Table 2",
            LimitInfinite => "Theorem 3.3",
            LimitNever => "Theorem 3.3",
            SubordinatorLiminf => "Subordinator liminf lemma",
            NoJumpYet => "X_t = 0 before the first jump",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub value: ClassificationValue,
    /// Citation tag of the result used, e.g. `"Theorem 2"`.
    pub basis: String,
    pub rule: Basis,
    pub verdicts: Vec<IntegralVerdict>,
    pub critical: Option<CriticalConstant>,
}

impl Classification {
    fn new(value: ClassificationValue, rule: Basis) -> Self {
        Self {
            value,
            basis: rule.tag().to_string(),
            rule,
            verdicts: Vec::new(),
            critical: None,
        }
    }

    fn with_verdicts(mut self, v: Vec<IntegralVerdict>) -> Self {
        self.verdicts = v;
        self
    }

    fn with_critical(mut self, c: CriticalConstant) -> Self {
        self.critical = Some(c);
        self
    }

    /// Classification of `liminf X` obtained from `limsup (-X)`.
    pub fn flipped(mut self) -> Self {
        self.value = self.value.flipped();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub kappa: f64,
    /// `limsup |X_t| / t^kappa`.
    pub two_sided_limsup: Classification,
    /// `limsup X_t / t^kappa`.
    pub one_sided_limsup: Classification,
    /// `liminf X_t / t^kappa`.
    pub one_sided_liminf: Classification,
    /// `lim X_t / t^kappa` where it exists.
    pub limit: Classification,
    /// `limsup X_t / sqrt(2 t ln ln(1/t)) = sigma`.
    pub lil_limsup: ClassificationValue,
}

/// Classifier with a configurable integral engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classifier {
    pub engine: Engine,
    /// Side whose `W` enters `J(lambda)`. Negative follows the proof route;
    /// positive is the literal reading of the theorem display.
    pub w_side: Side,
}

impl Default for Classifier {
    fn default() -> Self {
        Self {
            engine: Engine::default(),
            w_side: Side::Negative,
        }
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "kappa",
            value: kappa,
            domain: "(0, ∞)",
        })
    }
}

fn kappa_cmp(kappa: f64, at: f64) -> Ordering {
    if (kappa - at).abs() <= KAPPA_TOL {
        Ordering::Equal
    } else if kappa < at {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Fails on an inconclusive verdict, otherwise returns whether it converged.
fn decided(v: &IntegralVerdict) -> Result<bool> {
    if v.is_inconclusive() {
        return Err(Error::Inconclusive {
            label: v.label.clone(),
            verdict: Box::new(v.clone()),
        });
    }
    Ok(v.is_convergent())
}

/// Sign of the drift with a relative tie band.
fn drift_sign(s: &LevyProcessSpec) -> Result<(f64, Ordering)> {
    let delta = s.drift_delta()?;
    let view = s.jump.view();
    let abs_moment: f64 = view.all().map(|(_, c)| c.first_moment()).sum();
    let scale = 1f64.max(s.gamma.abs()).max(abs_moment);
    let sign = if delta.abs() <= 1e-12 * scale {
        Ordering::Equal
    } else if delta > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    Ok((delta, sign))
}

impl Classifier {
    fn sqrt_scale(&self, s: &LevyProcessSpec) -> Result<Classification> {
        let jump = &s.jump;
        let c = critical_constant(&|a| self.engine.i_test(jump, a))?;
        let value = match c.value {
            CriticalValue::Zero => ClassificationValue::Zero,
            CriticalValue::Infinite => ClassificationValue::Infinite,
            CriticalValue::Finite { value } => ClassificationValue::FinitePositive { value: Some(value) },
        };
        Ok(Classification::new(value, Basis::SqrtScale).with_critical(c))
    }

    fn condition_2(&self, s: &LevyProcessSpec, kappa: f64, side: Option<Side>) -> Result<(bool, IntegralVerdict)> {
        let v = self.engine.condition_2(&s.jump, kappa, side)?;
        Ok((decided(&v)?, v))
    }

    /// `limsup |X_t| / t^kappa`.
    pub fn two_sided(&self, s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
        use ClassificationValue::*;
        check_kappa(kappa)?;
        let half = kappa_cmp(kappa, 0.5);
        if s.sigma2 > 0.0 {
            return Ok(match half {
                Ordering::Less => Classification::new(Zero, Basis::TwoSidedSmallKappa),
                _ => Classification::new(Infinite, Basis::KhintchineLil),
            });
        }
        match half {
            Ordering::Less => return Ok(Classification::new(Zero, Basis::TwoSidedSmallKappa)),
            Ordering::Equal => return self.sqrt_scale(s),
            Ordering::Greater => {}
        }
        let one = kappa_cmp(kappa, 1.0);
        if s.is_bv() {
            let (delta, sign) = drift_sign(s)?;
            if sign != Ordering::Equal {
                match one {
                    Ordering::Greater => return Ok(Classification::new(Infinite, Basis::TwoSidedDriftDominates)),
                    Ordering::Equal => {
                        return Ok(Classification::new(
                            FinitePositive {
                                value: Some(delta.abs()),
                            },
                            Basis::DriftLimit,
                        ))
                    }
                    Ordering::Less => {}
                }
            }
        } else if one == Ordering::Greater {
            return Ok(Classification::new(Infinite, Basis::TwoSidedNotBv));
        }
        let (conv, v) = self.condition_2(s, kappa, None)?;
        let value = if conv { Zero } else { Infinite };
        Ok(Classification::new(value, Basis::PowerCrossing).with_verdicts(vec![v]))
    }

    /// `limsup X_t / t^kappa`.
    pub fn one_sided(&self, s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
        use ClassificationValue::*;
        check_kappa(kappa)?;
        let half = kappa_cmp(kappa, 0.5);
        if s.sigma2 > 0.0 {
            return Ok(match half {
                Ordering::Less => Classification::new(Zero, Basis::OneSidedSmallKappa),
                _ => Classification::new(Infinite, Basis::KhintchineLil),
            });
        }
        if half == Ordering::Less {
            return Ok(Classification::new(Zero, Basis::OneSidedSmallKappa));
        }
        let one = kappa_cmp(kappa, 1.0);
        if s.is_bv() {
            let (delta, sign) = drift_sign(s)?;
            return match one {
                Ordering::Less => Ok(Classification::new(Zero, Basis::OneSidedBvSmallKappa)),
                Ordering::Equal => Ok(Classification::new(
                    if sign == Ordering::Equal {
                        Zero
                    } else {
                        EqualsDrift { delta }
                    },
                    Basis::OneSidedBvSmallKappa,
                )),
                Ordering::Greater => match sign {
                    Ordering::Less => Ok(Classification::new(MinusInfinite, Basis::OneSidedDriftSign)),
                    Ordering::Greater => Ok(Classification::new(Infinite, Basis::OneSidedDriftSign)),
                    Ordering::Equal if s.jump.has_finite_mass() => Ok(Classification::new(Zero, Basis::NoJumpYet)),
                    Ordering::Equal => {
                        let v = self.engine.test_5_1(&s.jump, kappa)?;
                        let value = if decided(&v)? {
                            NotApplicable {
                                reason: NotApplicableReason::AtMostZero,
                            }
                        } else {
                            Infinite
                        };
                        Ok(Classification::new(value, Basis::OneSidedBvZeroDrift).with_verdicts(vec![v]))
                    }
                },
            };
        }
        match (half, one) {
            (Ordering::Equal, _) => self.sqrt_scale(s),
            (_, Ordering::Less) => self.one_sided_not_bv(s, kappa),
            _ => Ok(Classification::new(Infinite, Basis::OneSidedNotBvLargeKappa)),
        }
    }

    fn one_sided_not_bv(&self, s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
        use ClassificationValue::*;
        let (plus_conv, v_plus) = self.condition_2(s, kappa, Some(Side::Positive))?;
        if !plus_conv {
            return Ok(Classification::new(Infinite, Basis::OneSidedNotBv).with_verdicts(vec![v_plus]));
        }
        let (minus_conv, v_minus) = self.condition_2(s, kappa, Some(Side::Negative))?;
        let verdicts = vec![v_plus, v_minus];
        if minus_conv {
            return Ok(Classification::new(Zero, Basis::OneSidedNotBv).with_verdicts(verdicts));
        }
        let jump = &s.jump;
        let c = critical_constant(&|lambda| self.engine.j_test(jump, lambda, kappa, self.w_side))?;
        let value = match c.value {
            CriticalValue::Infinite => Infinite,
            CriticalValue::Zero => Zero,
            CriticalValue::Finite { .. } => FinitePositive { value: None },
        };
        Ok(Classification::new(value, Basis::OneSidedNotBv)
            .with_verdicts(verdicts)
            .with_critical(c))
    }

    /// `lim X_t / t^kappa`, reported where the limit exists.
    pub fn limit(&self, s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
        use ClassificationValue::*;
        check_kappa(kappa)?;
        let never = || {
            Classification::new(
                NotApplicable {
                    reason: NotApplicableReason::Never,
                },
                Basis::LimitNever,
            )
        };
        let half = kappa_cmp(kappa, 0.5);
        if half == Ordering::Less {
            return Ok(Classification::new(Zero, Basis::TwoSidedSmallKappa));
        }
        if s.sigma2 > 0.0 {
            return Ok(never());
        }
        if half == Ordering::Equal {
            let c = self.sqrt_scale(s)?;
            return Ok(if c.value == Zero {
                c
            } else {
                never().with_critical(c.critical.unwrap())
            });
        }
        let one = kappa_cmp(kappa, 1.0);
        if !s.is_bv() {
            if one == Ordering::Less {
                let (conv, v) = self.condition_2(s, kappa, None)?;
                if conv {
                    return Ok(Classification::new(Zero, Basis::PowerCrossing).with_verdicts(vec![v]));
                }
                return Ok(never().with_verdicts(vec![v]));
            }
            return Ok(never());
        }
        let (delta, sign) = drift_sign(s)?;
        match one {
            Ordering::Less => return Ok(Classification::new(Zero, Basis::DriftLimit)),
            Ordering::Equal => {
                return Ok(Classification::new(
                    if sign == Ordering::Equal {
                        Zero
                    } else {
                        EqualsDrift { delta }
                    },
                    Basis::DriftLimit,
                ))
            }
            Ordering::Greater => {}
        }
        match sign {
            Ordering::Greater => return Ok(Classification::new(Infinite, Basis::OneSidedDriftSign)),
            Ordering::Less => return Ok(Classification::new(MinusInfinite, Basis::OneSidedDriftSign)),
            Ordering::Equal => {}
        }
        let (conv, v) = self.condition_2(s, kappa, None)?;
        if conv {
            return Ok(Classification::new(Zero, Basis::PowerCrossing).with_verdicts(vec![v]));
        }
        let mut verdicts = vec![v];
        let (up, c) = self.limit_plus_infinity(&s.jump, kappa, &mut verdicts)?;
        if up {
            return Ok(Classification::new(Infinite, Basis::LimitInfinite)
                .with_verdicts(verdicts)
                .with_critical(c));
        }
        let reflected = JumpMeasure::negative_of(s.jump.clone());
        let (down, c_down) = self.limit_plus_infinity(&reflected, kappa, &mut verdicts)?;
        if down {
            return Ok(Classification::new(MinusInfinite, Basis::LimitInfinite)
                .with_verdicts(verdicts)
                .with_critical(c_down));
        }
        Ok(never().with_verdicts(verdicts).with_critical(c))
    }

    /// Both conditions for `lim X_t/t^kappa = +∞` (bv, zero drift, `kappa > 1`):
    /// `K(d) < ∞` for every `d > 0` and the `x/A+(x)` integral finite.
    fn limit_plus_infinity(
        &self,
        m: &JumpMeasure,
        kappa: f64,
        verdicts: &mut Vec<IntegralVerdict>,
    ) -> Result<(bool, CriticalConstant)> {
        let c = critical_constant(&|d| self.engine.k_test(m, d, kappa))?;
        if c.value != CriticalValue::Zero {
            return Ok((false, c));
        }
        let v = self.engine.test_33b(m)?;
        let ok = decided(&v)?;
        verdicts.push(v);
        Ok((ok, c))
    }

    /// `liminf T_t / t^gamma` for a driftless subordinator with measure `m`.
    pub fn subordinator_liminf(&self, m: &JumpMeasure, gamma: f64) -> Result<Classification> {
        use ClassificationValue::*;
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::Domain {
                what: "gamma",
                value: gamma,
                domain: "(1, ∞)",
            });
        }
        let view = m.view();
        if !view.is_empty_side(Side::Negative) || view.is_empty_side(Side::Positive) {
            return Err(Error::PositiveSideRequired);
        }
        if m.has_finite_mass() {
            return Err(Error::InfiniteActivityRequired);
        }
        if !view.is_bv() {
            return Err(Error::BvRequired);
        }
        let c = critical_constant(&|d| self.engine.k_test(m, d, gamma))?;
        let value = match c.value {
            // lim T_t/t^gamma = ∞
            CriticalValue::Zero => Infinite,
            // liminf T_t/t^gamma = 0
            CriticalValue::Infinite => Zero,
            CriticalValue::Finite { .. } => FinitePositive { value: None },
        };
        Ok(Classification::new(value, Basis::SubordinatorLiminf).with_critical(c))
    }

    /// All four classifications at one exponent.
    pub fn query(&self, s: &LevyProcessSpec, kappa: f64) -> Result<QueryResult> {
        Ok(QueryResult {
            kappa,
            two_sided_limsup: self.two_sided(s, kappa)?,
            one_sided_limsup: self.one_sided(s, kappa)?,
            one_sided_liminf: self.one_sided(&s.negated(), kappa)?.flipped(),
            limit: self.limit(s, kappa)?,
            lil_limsup: lil_limsup(s),
        })
    }
}

/// `limsup X_t / sqrt(2 t ln ln(1/t)) = sigma`.
pub fn lil_limsup(s: &LevyProcessSpec) -> ClassificationValue {
    ClassificationValue::EqualsSigma { sigma: s.sigma2.sqrt() }
}

pub fn classify_two_sided(s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
    Classifier::default().two_sided(s, kappa)
}

pub fn classify_one_sided(s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
    Classifier::default().one_sided(s, kappa)
}

pub fn classify_limit(s: &LevyProcessSpec, kappa: f64) -> Result<Classification> {
    Classifier::default().limit(s, kappa)
}

pub fn classify_subordinator_liminf(m: &JumpMeasure, gamma: f64) -> Result<Classification> {
    Classifier::default().subordinator_liminf(m, gamma)
}

pub fn classify_query(s: &LevyProcessSpec, kappa: f64) -> Result<QueryResult> {
    Classifier::default().query(s, kappa)
}
