//! Monte Carlo paths on the geometric grid `t_n = r^n`.
//!
//! Over each interval `(t_(n+1), t_n]` jumps larger than `b_n = cutoff_scale
//! r^(n/2)` are drawn exactly (Poisson count, inverse-tail sizes) and
//! compensated; smaller jumps are replaced by a centred normal with the same
//! variance, or dropped. Point masses are always drawn exactly. The interval
//! `(0, t_N]` is handled the same way with `b = cutoff_scale r^(N/2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Component, LevyProcessSpec, MeasureView, Side};
use crate::quadrature::LnSum;

pub const EVIDENCE_DISCLAIMER: &str = "evidence only: almost-sure limsup/liminf values are not observable at any \
     finite depth (iterated-logarithm corrections are invisible on simulated grids); the integral tests decide, \
     the simulation only illustrates trends";

/// Growth ratios at or above this are reported as growing.
pub const GROWING_RATIO: f64 = 2.0;
/// Growth ratios at or below this are reported as bounded.
pub const BOUNDED_RATIO: f64 = 1.2;

/// With a unit scale the shallow levels leave most of the variance below the
/// cutoff; at `0.1` dropping it moves running maxima by under 10%.
pub const DEFAULT_CUTOFF_SCALE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub r: f64,
    pub depth: usize,
    pub paths: usize,
    pub seed: u64,
    pub cutoff_scale: f64,
    pub gaussian_refinement: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            r: 0.5,
            depth: 40,
            paths: 200,
            seed: 0,
            cutoff_scale: DEFAULT_CUTOFF_SCALE,
            gaussian_refinement: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.r > 0.0 && self.r < 1.0) {
            return bad(format!("r must lie in (0, 1), got {}", self.r));
        }
        if self.depth < 1 {
            return bad("depth must be at least 1".into());
        }
        if self.depth as f64 * (1.0 / self.r).ln() > 700.0 {
            return bad(format!(
                "depth {} with r = {} makes t_N unrepresentable (need N ln(1/r) <= 700)",
                self.depth, self.r
            ));
        }
        if self.paths < 1 {
            return bad("paths must be at least 1".into());
        }
        if !(self.cutoff_scale > 0.0 && self.cutoff_scale.is_finite()) {
            return bad(format!("cutoff_scale must be positive, got {}", self.cutoff_scale));
        }
        Ok(())
    }

    fn ln_r(&self) -> f64 {
        self.r.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub ln_t: f64,
    pub t: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    /// Sorted by `n` ascending, `n = 0..=depth`.
    pub values: Vec<GridPoint>,
    pub seed: u64,
    pub path_index: u64,
    pub config: SimConfig,
}

/// Per-interval sampling plan shared by all paths.
#[derive(Debug, Clone)]
struct LevelPlan {
    /// `(sign, component, ln tail beyond the cutoff)`.
    big: Vec<(f64, Component, f64)>,
    u_cut: f64,
    big_rate: f64,
    /// Drift over the interval: `gamma dt` minus the compensator of big jumps.
    drift: f64,
    small_sd: f64,
    brownian_sd: f64,
}

fn plan(s: &LevyProcessSpec, view: &MeasureView, cfg: &SimConfig) -> Result<Vec<LevelPlan>> {
    let n_levels = cfg.depth;
    let ln_r = cfg.ln_r();
    let mut plans = Vec::with_capacity(n_levels + 1);
    for level in 0..=n_levels {
        let t = (level as f64 * ln_r).exp();
        let dt = if level < n_levels { t * (1.0 - cfg.r) } else { t };
        let ln_b = (cfg.cutoff_scale.ln() + 0.5 * level as f64 * ln_r).min(0.0);
        let u_cut = -ln_b;
        let mut big = Vec::new();
        let mut rate = LnSum::new();
        let mut compensator = 0.0;
        let mut small_var = LnSum::new();
        for (side, comp) in view.all() {
            if !comp.supports_sampling() {
                return Err(Error::SamplingUnsupported(comp.family()));
            }
            let sign = match side {
                Side::Positive => 1.0,
                Side::Negative => -1.0,
            };
            // finite components are never approximated
            let u = if comp.has_finite_mass() { f64::INFINITY } else { u_cut };
            let ln_tail = if u.is_finite() {
                comp.ln_tail(u)?
            } else {
                comp.ln_tail(f64::MAX)?
            };
            let ln_m1 = if u.is_finite() {
                comp.ln_moment_above(1.0, u)?
            } else {
                comp.ln_moment_above(1.0, f64::MAX)?
            };
            if ln_tail > f64::NEG_INFINITY {
                big.push((sign, *comp, ln_tail));
                rate.add(ln_tail);
            }
            compensator += sign * ln_m1.exp();
            if u.is_finite() {
                small_var.add(comp.ln_v(u)?);
            }
        }
        let small_sd = if cfg.gaussian_refinement {
            (dt * small_var.value().exp()).sqrt()
        } else {
            0.0
        };
        plans.push(LevelPlan {
            big,
            u_cut,
            big_rate: dt * rate.value().exp(),
            drift: dt * (s.gamma - compensator),
            small_sd,
            brownian_sd: (dt * s.sigma2).sqrt(),
        });
    }
    Ok(plans)
}

/// Generator for one `(seed, path, level)` triple; draws are consumed in order.
fn level_rng(seed: u64, path_index: u64, level: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&path_index.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(level as u64);
    rng
}

fn level_increment(p: &LevelPlan, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut inc = p.drift;
    if p.brownian_sd > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        inc += p.brownian_sd * z;
    }
    if p.small_sd > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        inc += p.small_sd * z;
    }
    if p.big_rate > 0.0 {
        let count = Poisson::new(p.big_rate)
            .map_err(|e| Error::InvalidConfig(format!("Poisson rate {}: {e}", p.big_rate)))?
            .sample(rng) as u64;
        let total: f64 = p.big.iter().map(|(_, _, l)| l.exp()).sum();
        for _ in 0..count {
            let mut pick = rng.random::<f64>() * total;
            let mut chosen = &p.big[p.big.len() - 1];
            for entry in &p.big {
                let w = entry.2.exp();
                if pick < w {
                    chosen = entry;
                    break;
                }
                pick -= w;
            }
            let (sign, comp, ln_tail) = *chosen;
            // uniform position within the component's tail mass beyond the cutoff
            let v: f64 = 1.0 - rng.random::<f64>();
            let y = comp.inverse_tail(ln_tail + v.ln(), p.u_cut)?;
            inc += sign * y;
        }
    }
    Ok(inc)
}

/// Simulates one path on the grid `t_n = r^n`, `n = 0..=depth`.
pub fn sample_path_grid(s: &LevyProcessSpec, cfg: &SimConfig, path_index: u64) -> Result<PathGrid> {
    cfg.validate()?;
    let view = s.jump.view();
    let plans = plan(s, &view, cfg)?;
    sample_with_plan(&plans, cfg, path_index)
}

fn sample_with_plan(plans: &[LevelPlan], cfg: &SimConfig, path_index: u64) -> Result<PathGrid> {
    let n = cfg.depth;
    let ln_r = cfg.ln_r();
    let mut values = Vec::with_capacity(n + 1);
    // deepest first: X_(t_N) is the remainder over (0, t_N]
    let mut x = 0.0;
    for level in (0..=n).rev() {
        let mut rng = level_rng(cfg.seed, path_index, level);
        let inc = level_increment(&plans[level], &mut rng)?;
        if !inc.is_finite() {
            return Err(Error::NonFiniteSample {
                path: path_index,
                level,
            });
        }
        x += inc;
        // level < n covers (t_(level+1), t_level]; level n covers (0, t_n]
        let ln_t = level as f64 * ln_r;
        values.push(GridPoint {
            n: level,
            ln_t,
            t: ln_t.exp(),
            x,
        });
    }
    values.reverse();
    Ok(PathGrid {
        values,
        seed: cfg.seed,
        path_index,
        config: *cfg,
    })
}

/// Simulates `cfg.paths` paths in parallel, merged in path order.
pub fn sample_paths(s: &LevyProcessSpec, cfg: &SimConfig) -> Result<Vec<PathGrid>> {
    cfg.validate()?;
    let view = s.jump.view();
    let plans = plan(s, &view, cfg)?;
    (0..cfg.paths as u64)
        .into_par_iter()
        .map(|i| sample_with_plan(&plans, cfg, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendMode {
    Signed,
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendVerdict {
    Growing,
    Bounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthStatistic {
    pub depth: usize,
    pub t: f64,
    pub median_stat: f64,
    pub q75_stat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub kappa: f64,
    pub mode: TrendMode,
    /// Statistics of `max_(1 <= n <= depth) S_n` over paths, `depth = 1..=N`.
    pub depths: Vec<DepthStatistic>,
    /// Median at depth `N` over median at depth `N/2`; absent when the
    /// latter is not positive.
    pub growth_ratio: Option<f64>,
    pub verdict: TrendVerdict,
    pub disclaimer: String,
    pub config: SimConfig,
}

/// `S_n = X_(t_n)/t_n^kappa` (or `|X|`), saturated to the finite range.
fn normalized(x: f64, ln_t: f64, kappa: f64, mode: TrendMode) -> f64 {
    let x = match mode {
        TrendMode::Signed => x,
        TrendMode::Absolute => x.abs(),
    };
    if x == 0.0 {
        return 0.0;
    }
    let ln = x.abs().ln() - kappa * ln_t;
    let mag = if ln > f64::MAX.ln() { f64::MAX } else { ln.exp() };
    mag.copysign(x)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn trend_statistic(s: &LevyProcessSpec, cfg: &SimConfig, kappa: f64, mode: TrendMode) -> Result<TrendReport> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Domain {
            what: "kappa",
            value: kappa,
            domain: "(0, ∞)",
        });
    }
    let paths = sample_paths(s, cfg)?;
    Ok(trend_from_paths(&paths, cfg, kappa, mode))
}

pub fn trend_from_paths(paths: &[PathGrid], cfg: &SimConfig, kappa: f64, mode: TrendMode) -> TrendReport {
    let n = cfg.depth;
    // running[p][d-1] = max_(1<=k<=d) S_k on path p
    let running: Vec<Vec<f64>> = paths
        .iter()
        .map(|g| {
            let mut m = f64::NEG_INFINITY;
            g.values[1..]
                .iter()
                .map(|pt| {
                    m = m.max(normalized(pt.x, pt.ln_t, kappa, mode));
                    m
                })
                .collect()
        })
        .collect();
    let depths: Vec<DepthStatistic> = (1..=n)
        .map(|d| {
            let mut col: Vec<f64> = running.iter().map(|r| r[d - 1]).collect();
            col.sort_by(f64::total_cmp);
            DepthStatistic {
                depth: d,
                t: (d as f64 * cfg.ln_r()).exp(),
                median_stat: quantile(&col, 0.5),
                q75_stat: quantile(&col, 0.75),
            }
        })
        .collect();
    let full = depths[n - 1].median_stat;
    let half = depths[(n / 2).max(1) - 1].median_stat;
    let (growth_ratio, verdict) = if half > 0.0 {
        let g = full / half;
        let v = if g >= GROWING_RATIO {
            TrendVerdict::Growing
        } else if g <= BOUNDED_RATIO {
            TrendVerdict::Bounded
        } else {
            TrendVerdict::Inconclusive
        };
        (Some(g), v)
    } else if full <= 0.0 {
        // never positive at the median: nothing grows above zero
        (None, TrendVerdict::Bounded)
    } else {
        (None, TrendVerdict::Growing)
    };
    TrendReport {
        kappa,
        mode,
        depths,
        growth_ratio,
        verdict,
        disclaimer: EVIDENCE_DISCLAIMER.to_string(),
        config: *cfg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::JumpMeasure;

    #[test]
    fn config_validation() {
        let ok = SimConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SimConfig { r: 1.0, ..ok }.validate().is_err());
        assert!(SimConfig { depth: 0, ..ok }.validate().is_err());
        assert!(SimConfig { depth: 2000, ..ok }.validate().is_err());
        assert!(SimConfig { paths: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn w_profile_cannot_be_sampled() {
        let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::w_profile_critical(0.75, 1.0).unwrap()).unwrap();
        assert!(matches!(
            sample_path_grid(&s, &SimConfig::default(), 0),
            Err(Error::SamplingUnsupported(_))
        ));
    }

    #[test]
    fn grid_layout() {
        let s = LevyProcessSpec::new(0.0, 0.0, JumpMeasure::stable_like(1.0, 1.0, 1.5).unwrap()).unwrap();
        let cfg = SimConfig {
            depth: 10,
            ..SimConfig::default()
        };
        let g = sample_path_grid(&s, &cfg, 3).unwrap();
        assert_eq!(g.values.len(), 11);
        for (i, p) in g.values.iter().enumerate() {
            assert_eq!(p.n, i);
            assert_eq!(p.ln_t, i as f64 * 0.5f64.ln());
        }
    }

    #[test]
    fn quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&v, 0.5), 3.0);
        assert_eq!(quantile(&v, 0.75), 4.0);
    }
}
