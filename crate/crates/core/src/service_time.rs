//! Service-time distributions G and the quantities derived from them: the
//! density g, the hazard rate h(t) = g(t) / (1 - G(t)), the mean, the survival
//! integral ∫₀ᵗ (1 - G(v)) dv and the cumulative hazard -ln(1 - G(t)).
//!
//! Times are in days throughout. Every model satisfies G(0) = 0 and has a
//! finite, strictly positive mean.

use rand::Rng;
use serde::{Deserialize, Serialize};
use libm::tgamma as gamma;

use crate::error::{Error, Result};
use crate::quadrature;

/// Survival at or below this level counts as an exhausted distribution for the
/// bounded-support families.
pub const EXHAUSTED_SURVIVAL: f64 = 1e-12;

/// Raw distribution description, as it appears in scenario files:
/// `{"kind": "exponential", "mean": 1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Distribution {
    Exponential { mean: f64 },
    Deterministic { duration: f64 },
    Uniform { lower: f64, upper: f64 },
    Weibull { shape: f64, scale: f64 },
    /// Linear interpolation of `(time, cumulative probability)` knots.
    PiecewiseEmpirical { knots: Vec<[f64; 2]> },
}

/// A validated service-time distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Distribution", into = "Distribution")]
pub struct ServiceTimeModel {
    dist: Distribution,
    mean: f64,
}

impl From<ServiceTimeModel> for Distribution {
    fn from(model: ServiceTimeModel) -> Self {
        model.dist
    }
}

impl TryFrom<Distribution> for ServiceTimeModel {
    type Error = Error;

    fn try_from(dist: Distribution) -> Result<Self> {
        ServiceTimeModel::new(dist)
    }
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::Domain(format!("time must be >= 0, got {t}")))
    } else {
        Ok(())
    }
}

impl ServiceTimeModel {
    pub fn new(dist: Distribution) -> Result<Self> {
        let dist = match dist {
            Distribution::Exponential { mean } => {
                positive_finite("exponential mean", mean)?;
                Distribution::Exponential { mean }
            }
            Distribution::Deterministic { duration } => {
                positive_finite("deterministic duration", duration)?;
                Distribution::Deterministic { duration }
            }
            Distribution::Uniform { lower, upper } => {
                if !(lower.is_finite() && lower >= 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "uniform lower bound must be finite and >= 0, got {lower}"
                    )));
                }
                if !(upper.is_finite() && upper > lower) {
                    return Err(Error::InvalidModel(format!(
                        "uniform upper bound must exceed lower bound {lower}, got {upper}"
                    )));
                }
                Distribution::Uniform { lower, upper }
            }
            Distribution::Weibull { shape, scale } => {
                positive_finite("weibull shape", shape)?;
                positive_finite("weibull scale", scale)?;
                Distribution::Weibull { shape, scale }
            }
            Distribution::PiecewiseEmpirical { knots } => Distribution::PiecewiseEmpirical {
                knots: normalize_knots(knots)?,
            },
        };
        let mean = match &dist {
            Distribution::Exponential { mean } => *mean,
            Distribution::Deterministic { duration } => *duration,
            Distribution::Uniform { lower, upper } => 0.5 * (lower + upper),
            Distribution::Weibull { shape, scale } => scale * gamma(1.0 + 1.0 / shape),
            Distribution::PiecewiseEmpirical { knots } => piecewise_survival_integral(knots, f64::INFINITY),
        };
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::InvalidModel(format!(
                "mean must be finite and > 0, got {mean}"
            )));
        }
        Ok(ServiceTimeModel { dist, mean })
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        Self::new(Distribution::Exponential { mean })
    }

    pub fn deterministic(duration: f64) -> Result<Self> {
        Self::new(Distribution::Deterministic { duration })
    }

    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        Self::new(Distribution::Uniform { lower, upper })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Distribution::Weibull { shape, scale })
    }

    pub fn piecewise_empirical(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(Distribution::PiecewiseEmpirical {
            knots: knots.into_iter().map(|(t, p)| [t, p]).collect(),
        })
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    /// The mean when the model is exponential.
    pub fn exponential_mean(&self) -> Option<f64> {
        match self.dist {
            Distribution::Exponential { mean } => Some(mean),
            _ => None,
        }
    }

    pub fn has_density(&self) -> bool {
        !matches!(self.dist, Distribution::Deterministic { .. })
    }

    /// Upper end of the support, for the bounded families.
    pub fn support_end(&self) -> Option<f64> {
        match &self.dist {
            Distribution::Exponential { .. } | Distribution::Weibull { .. } => None,
            Distribution::Deterministic { duration } => Some(*duration),
            Distribution::Uniform { upper, .. } => Some(*upper),
            Distribution::PiecewiseEmpirical { knots } => knots.last().map(|k| k[0]),
        }
    }

    /// Mean service time α.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// G(t).
    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match &self.dist {
            Distribution::Exponential { mean } => -(-t / mean).exp_m1(),
            Distribution::Deterministic { duration } => {
                if t >= *duration {
                    1.0
                } else {
                    0.0
                }
            }
            Distribution::Uniform { lower, upper } => ((t - lower) / (upper - lower)).clamp(0.0, 1.0),
            Distribution::Weibull { shape, scale } => -(-(t / scale).powf(*shape)).exp_m1(),
            Distribution::PiecewiseEmpirical { knots } => piecewise_cdf(knots, t),
        })
    }

    /// 1 - G(t), computed without cancellation for the unbounded families.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match &self.dist {
            Distribution::Exponential { mean } => (-t / mean).exp(),
            Distribution::Weibull { shape, scale } => (-(t / scale).powf(*shape)).exp(),
            _ => 1.0 - self.cdf(t)?,
        })
    }

    /// g(t). Right-continuous at the knots of piecewise densities.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match &self.dist {
            Distribution::Exponential { mean } => (-t / mean).exp() / mean,
            Distribution::Deterministic { .. } => return Err(Error::NoDensity),
            Distribution::Uniform { lower, upper } => {
                if t >= *lower && t < *upper {
                    1.0 / (upper - lower)
                } else {
                    0.0
                }
            }
            Distribution::Weibull { shape, scale } => {
                let z = t / scale;
                shape / scale * z.powf(shape - 1.0) * (-z.powf(*shape)).exp()
            }
            Distribution::PiecewiseEmpirical { knots } => piecewise_pdf(knots, t),
        })
    }

    fn ensure_not_exhausted(&self, t: f64) -> Result<()> {
        match self.dist {
            Distribution::Exponential { .. } | Distribution::Weibull { .. } => Ok(()),
            _ => {
                if self.survival(t)? <= EXHAUSTED_SURVIVAL {
                    Err(Error::DistributionExhausted { t })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// h(t) = g(t) / (1 - G(t)).
    pub fn hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if !self.has_density() {
            return Err(Error::NoDensity);
        }
        self.ensure_not_exhausted(t)?;
        Ok(match &self.dist {
            Distribution::Exponential { mean } => 1.0 / mean,
            Distribution::Weibull { shape, scale } => shape / scale * (t / scale).powf(shape - 1.0),
            Distribution::Uniform { lower, upper } => {
                if t < *lower {
                    0.0
                } else {
                    1.0 / (upper - t)
                }
            }
            _ => self.pdf(t)? / self.survival(t)?,
        })
    }

    /// ∫₀ᵗ (1 - G(v)) dv. Bounded above by the mean.
    pub fn survival_integral(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.survival_integral_between(0.0, t))
    }

    /// Survival integral at every point of an increasing grid, accumulated
    /// interval by interval.
    pub fn survival_integral_on_grid(&self, grid: &[f64]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(grid.len());
        let mut prev = 0.0;
        let mut acc = 0.0;
        for &t in grid {
            check_time(t)?;
            if t < prev {
                return Err(Error::Domain("grid must be non-decreasing".into()));
            }
            acc += self.survival_integral_between(prev, t);
            out.push(acc.min(self.mean));
            prev = t;
        }
        Ok(out)
    }

    fn survival_integral_between(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let closed = |t: f64| -> f64 {
            match &self.dist {
                Distribution::Exponential { mean } => -mean * (-t / mean).exp_m1(),
                Distribution::Deterministic { duration } => t.min(*duration),
                Distribution::Uniform { lower, upper } => {
                    if t <= *lower {
                        t
                    } else if t >= *upper {
                        0.5 * (lower + upper)
                    } else {
                        t - 0.5 * (t - lower) * (t - lower) / (upper - lower)
                    }
                }
                Distribution::PiecewiseEmpirical { knots } => piecewise_survival_integral(knots, t),
                Distribution::Weibull { .. } => unreachable!(),
            }
        };
        match &self.dist {
            Distribution::Weibull { shape, scale } => {
                let (k, s) = (*shape, *scale);
                quadrature::integrate(|v| (-(v / s).powf(k)).exp(), a, b)
            }
            _ => closed(b) - closed(a),
        }
    }

    /// ∫₀ᵀ h(v) dv = -ln(1 - G(T)).
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        self.ensure_not_exhausted(t)?;
        Ok(match &self.dist {
            Distribution::Exponential { mean } => t / mean,
            Distribution::Weibull { shape, scale } => (t / scale).powf(*shape),
            _ => -(-self.cdf(t)?).ln_1p(),
        })
    }

    /// One draw from G by inversion.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match &self.dist {
            Distribution::Exponential { mean } => -mean * (-u).ln_1p(),
            Distribution::Deterministic { duration } => *duration,
            Distribution::Uniform { lower, upper } => lower + (upper - lower) * u,
            Distribution::Weibull { shape, scale } => scale * (-(-u).ln_1p()).powf(1.0 / shape),
            Distribution::PiecewiseEmpirical { knots } => piecewise_quantile(knots, u),
        }
    }
}

fn normalize_knots(knots: Vec<[f64; 2]>) -> Result<Vec<[f64; 2]>> {
    if knots.is_empty() {
        return Err(Error::InvalidModel("piecewise empirical model needs knots".into()));
    }
    for w in knots.windows(2) {
        if !(w[1][0] > w[0][0]) {
            return Err(Error::InvalidModel(
                "piecewise knots must be strictly increasing in time".into(),
            ));
        }
        if w[1][1] < w[0][1] {
            return Err(Error::InvalidModel(
                "piecewise cumulative probabilities must be non-decreasing".into(),
            ));
        }
    }
    for &[t, p] in &knots {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidModel(format!("knot time must be finite and >= 0, got {t}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidModel(format!("knot probability must lie in [0, 1], got {p}")));
        }
    }
    let mut out = Vec::with_capacity(knots.len() + 1);
    if knots[0][0] > 0.0 {
        out.push([0.0, 0.0]);
    } else if knots[0][1] != 0.0 {
        return Err(Error::InvalidModel("cumulative probability at t = 0 must be 0".into()));
    }
    out.extend(knots);
    if out.last().map(|k| k[1]) != Some(1.0) {
        return Err(Error::InvalidModel("last knot must reach cumulative probability 1".into()));
    }
    if out.len() < 2 {
        return Err(Error::InvalidModel("piecewise model needs a knot with t > 0".into()));
    }
    Ok(out)
}

/// Index of the segment `[t_i, t_{i+1})` containing `t`, or `None` past the last knot.
fn segment(knots: &[[f64; 2]], t: f64) -> Option<usize> {
    let i = knots.partition_point(|k| k[0] <= t);
    if i == 0 || i >= knots.len() {
        None
    } else {
        Some(i - 1)
    }
}

fn slope(knots: &[[f64; 2]], i: usize) -> f64 {
    (knots[i + 1][1] - knots[i][1]) / (knots[i + 1][0] - knots[i][0])
}

fn piecewise_cdf(knots: &[[f64; 2]], t: f64) -> f64 {
    match segment(knots, t) {
        Some(i) => (knots[i][1] + slope(knots, i) * (t - knots[i][0])).min(1.0),
        None => 1.0,
    }
}

fn piecewise_pdf(knots: &[[f64; 2]], t: f64) -> f64 {
    segment(knots, t).map_or(0.0, |i| slope(knots, i))
}

fn piecewise_survival_integral(knots: &[[f64; 2]], t: f64) -> f64 {
    let mut acc = 0.0;
    for w in knots.windows(2) {
        let (t0, p0) = (w[0][0], w[0][1]);
        let (t1, p1) = (w[1][0], w[1][1]);
        if t <= t0 {
            break;
        }
        let end = t.min(t1);
        let p_end = p0 + (p1 - p0) / (t1 - t0) * (end - t0);
        acc += (end - t0) * (1.0 - 0.5 * (p0 + p_end));
    }
    acc
}

fn piecewise_quantile(knots: &[[f64; 2]], u: f64) -> f64 {
    for w in knots.windows(2) {
        let (t0, p0) = (w[0][0], w[0][1]);
        let (t1, p1) = (w[1][0], w[1][1]);
        if u < p1 && p1 > p0 {
            return t0 + (u - p0).max(0.0) / (p1 - p0) * (t1 - t0);
        }
    }
    knots.last().map_or(0.0, |k| k[0])
}
