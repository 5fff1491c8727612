//! Transient behaviour of the M|G|∞ queue when the time origin is an arrival
//! into an empty system (one tagged customer in service at t = 0).
//!
//! - empty probability: p(t) = G(t) · exp(-λ ∫₀ᵗ (1 - G(v)) dv)
//! - mean number in system: μ(t) = 1 - G(t) + λ ∫₀ᵗ (1 - G(v)) dv
//!
//! When the hazard rate of the service time dominates the arrival rate,
//! h(t) ≥ λ for all t > 0, p is non-decreasing and μ is non-increasing. For
//! exponential service this reduces to ρ = λα ≤ 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig6;
use crate::service_time::ServiceTimeModel;

/// Successive differences within this band are treated as flat.
pub const MONOTONE_TOL: f64 = 1e-9;

/// Number of points in the default evaluation grid.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Geometric refinement points added near zero by [`stability_check`].
const REFINEMENT_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueScenario {
    lambda: f64,
    service: ServiceTimeModel,
}

impl QueueScenario {
    pub fn new(lambda: f64, service: ServiceTimeModel) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!(
                "arrival rate must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(QueueScenario { lambda, service })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn service(&self) -> &ServiceTimeModel {
        &self.service
    }

    /// ρ = λα.
    pub fn traffic_intensity(&self) -> f64 {
        self.lambda * self.service.mean()
    }

    /// p₁′₀(t): probability that the system is empty at `t`.
    pub fn empty_probability(&self, t: f64) -> Result<f64> {
        let g = self.service.cdf(t)?;
        let si = self.service.survival_integral(t)?;
        Ok(empty_probability_from(g, si, self.lambda))
    }

    /// μ(1′, t): expected number in system at `t`, counting the tagged customer.
    pub fn mean_in_system(&self, t: f64) -> Result<f64> {
        let s = self.service.survival(t)?;
        let si = self.service.survival_integral(t)?;
        Ok(s + self.lambda * si)
    }
}

fn empty_probability_from(g: f64, si: f64, lambda: f64) -> f64 {
    (g * (-lambda * si).exp()).clamp(0.0, 1.0)
}

/// `points` equally spaced times on `[0, max_t]`, both ends included.
pub fn uniform_grid(max_t: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {points}")));
    }
    if !(max_t.is_finite() && max_t > 0.0) {
        return Err(Error::Domain(format!("grid end must be finite and > 0, got {max_t}")));
    }
    let n = (points - 1) as f64;
    Ok((0..points).map(|i| max_t * (i as f64 / n)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    EmptyProbability,
    MeanInSystem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
    /// Flat within tolerance; both non-decreasing and non-increasing.
    Constant,
    Mixed,
}

impl Monotonicity {
    pub fn classify(values: &[f64], tol: f64) -> Self {
        let mut up = false;
        let mut down = false;
        for w in values.windows(2) {
            let d = w[1] - w[0];
            if d > tol {
                up = true;
            } else if d < -tol {
                down = true;
            }
        }
        match (up, down) {
            (false, false) => Monotonicity::Constant,
            (true, false) => Monotonicity::NonDecreasing,
            (false, true) => Monotonicity::NonIncreasing,
            (true, true) => Monotonicity::Mixed,
        }
    }

    pub fn is_non_decreasing(self) -> bool {
        matches!(self, Monotonicity::NonDecreasing | Monotonicity::Constant)
    }

    pub fn is_non_increasing(self) -> bool {
        matches!(self, Monotonicity::NonIncreasing | Monotonicity::Constant)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientCurve {
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub monotonicity: Monotonicity,
}

impl TransientCurve {
    /// CSV with header `t,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (t, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&sig6(*t));
            out.push(',');
            out.push_str(&sig6(*v));
            out.push('\n');
        }
        out
    }
}

fn check_curve_grid(grid: &[f64]) -> Result<()> {
    match grid.first() {
        None => return Err(Error::Domain("grid is empty".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::Domain(format!("grid must start at 0, starts at {t0}")))
        }
        _ => {}
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Evaluates one transient quantity on `grid` (strictly increasing from 0) and
/// classifies its monotonicity with tolerance [`MONOTONE_TOL`].
pub fn transient_curve(
    scenario: &QueueScenario,
    grid: &[f64],
    kind: CurveKind,
) -> Result<TransientCurve> {
    check_curve_grid(grid)?;
    let service = scenario.service();
    let si = service.survival_integral_on_grid(grid)?;
    let values = grid
        .iter()
        .zip(&si)
        .map(|(&t, &si)| match kind {
            CurveKind::EmptyProbability => {
                Ok(empty_probability_from(service.cdf(t)?, si, scenario.lambda()))
            }
            CurveKind::MeanInSystem => Ok(service.survival(t)? + scenario.lambda() * si),
        })
        .collect::<Result<Vec<f64>>>()?;
    let monotonicity = Monotonicity::classify(&values, MONOTONE_TOL);
    Ok(TransientCurve {
        kind,
        grid: grid.to_vec(),
        values,
        monotonicity,
    })
}

/// Outcome of checking h(t) ≥ λ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub satisfied: bool,
    pub first_violation_t: Option<f64>,
    pub rho: f64,
    /// False for services without a density, where the condition cannot be evaluated.
    pub applicable: bool,
}

/// Checks h(t) ≥ λ on the positive points of `grid`, refined with geometrically
/// spaced points near zero. Exponential services are decided exactly by ρ ≤ 1.
pub fn stability_check(scenario: &QueueScenario, grid: &[f64]) -> Result<StabilityReport> {
    if grid.is_empty() {
        return Err(Error::Domain("stability grid is empty".into()));
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Domain("stability grid times must be finite and >= 0".into()));
    }
    let mut points: Vec<f64> = grid.iter().copied().filter(|t| *t > 0.0).collect();
    if points.is_empty() {
        return Err(Error::Domain("stability grid has no positive time".into()));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let rho = scenario.traffic_intensity();
    let service = scenario.service();

    if !service.has_density() {
        return Ok(StabilityReport {
            satisfied: false,
            first_violation_t: None,
            rho,
            applicable: false,
        });
    }

    let checked = refine_near_zero(&points);
    if service.exponential_mean().is_some() {
        let satisfied = rho <= 1.0;
        return Ok(StabilityReport {
            satisfied,
            first_violation_t: if satisfied { None } else { checked.first().copied() },
            rho,
            applicable: true,
        });
    }

    // a grid reaching past the support is an error even if an earlier point already fails
    service.hazard(*checked.last().expect("non-empty"))?;
    for &t in &checked {
        if service.hazard(t)? < scenario.lambda() {
            return Ok(StabilityReport {
                satisfied: false,
                first_violation_t: Some(t),
                rho,
                applicable: true,
            });
        }
    }
    Ok(StabilityReport {
        satisfied: true,
        first_violation_t: None,
        rho,
        applicable: true,
    })
}

/// Prepends points spaced geometrically from `T·1e-6` up to (excluding) the
/// smallest grid point, `T` being the largest.
fn refine_near_zero(sorted_positive: &[f64]) -> Vec<f64> {
    let first = sorted_positive[0];
    let last = *sorted_positive.last().expect("non-empty");
    let lo = last * 1e-6;
    let mut out = Vec::with_capacity(sorted_positive.len() + REFINEMENT_POINTS);
    if lo < first {
        let ratio = first / lo;
        out.extend(
            (0..REFINEMENT_POINTS).map(|i| lo * ratio.powf(i as f64 / REFINEMENT_POINTS as f64)),
        );
    }
    out.extend_from_slice(sorted_positive);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(lambda: f64, alpha: f64) -> QueueScenario {
        QueueScenario::new(lambda, ServiceTimeModel::exponential(alpha).unwrap()).unwrap()
    }

    #[test]
    fn traffic_intensity_examples() {
        assert_eq!(mm(30.0, 1.0).traffic_intensity(), 30.0);
        assert_eq!(mm(0.0, 1.0).traffic_intensity(), 0.0);
        assert_eq!(mm(0.5, 2.0).traffic_intensity(), 1.0);
    }

    #[test]
    fn uniform_grid_ends_exactly_at_max() {
        for max_t in [0.1, 1.0 / 3.0, 7.77, 30.0, 1e-3 * 17.0] {
            for points in [2, 3, 8, 64, 512] {
                let g = uniform_grid(max_t, points).unwrap();
                assert_eq!(g.len(), points);
                assert_eq!(g[0], 0.0);
                assert_eq!(*g.last().unwrap(), max_t);
                assert!(g.windows(2).all(|w| w[1] > w[0]));
            }
        }
        assert!(uniform_grid(1.0, 1).is_err());
        assert!(uniform_grid(0.0, 8).is_err());
    }

    #[test]
    fn rejects_bad_lambda() {
        let s = ServiceTimeModel::exponential(1.0).unwrap();
        assert!(QueueScenario::new(-1.0, s.clone()).is_err());
        assert!(QueueScenario::new(f64::INFINITY, s).is_err());
    }

    #[test]
    fn empty_probability_examples() {
        assert_eq!(mm(3.0, 1.0).empty_probability(0.0).unwrap(), 0.0);
        let e1 = (-1.0f64).exp();
        assert!((mm(1.0, 1.0).empty_probability(50.0).unwrap() - e1).abs() < 1e-12);
        let det = QueueScenario::new(0.5, ServiceTimeModel::deterministic(2.0).unwrap()).unwrap();
        assert!((det.empty_probability(2.0).unwrap() - e1).abs() < 1e-15);
        assert!(mm(1.0, 1.0).empty_probability(-1.0).is_err());
    }

    #[test]
    fn mean_in_system_examples() {
        assert_eq!(mm(4.0, 2.5).mean_in_system(0.0).unwrap(), 1.0);
        assert!((mm(2.0, 1.0).mean_in_system(50.0).unwrap() - 2.0).abs() < 1e-12);
        let det = QueueScenario::new(0.5, ServiceTimeModel::deterministic(2.0).unwrap()).unwrap();
        assert_eq!(det.mean_in_system(2.0).unwrap(), 1.0);
        assert_eq!(det.mean_in_system(7.0).unwrap(), 1.0);
    }

    #[test]
    fn stability_examples() {
        let grid = uniform_grid(10.0, 64).unwrap();
        let r = stability_check(&mm(0.5, 1.0), &grid).unwrap();
        assert!(r.satisfied && r.applicable);
        assert_eq!(r.first_violation_t, None);

        let r = stability_check(&mm(1.0, 1.0), &grid).unwrap();
        assert!(r.satisfied, "boundary rho = 1 is satisfied");
        assert_eq!(r.rho, 1.0);

        let r = stability_check(&mm(30.0, 1.0), &grid).unwrap();
        assert!(!r.satisfied);
        assert!(r.first_violation_t.is_some());

        let w = QueueScenario::new(1.0, ServiceTimeModel::weibull(2.0, 1.0).unwrap()).unwrap();
        let r = stability_check(&w, &[0.1, 0.5, 1.0, 2.0]).unwrap();
        assert!(!r.satisfied);
        let t = r.first_violation_t.unwrap();
        assert!(t < 0.1, "refinement near zero finds the first violation, got {t}");
    }

    #[test]
    fn stability_past_support_is_an_error() {
        let u = QueueScenario::new(0.1, ServiceTimeModel::uniform(0.0, 2.0).unwrap()).unwrap();
        assert!(matches!(
            stability_check(&u, &[0.5, 1.0, 3.0]),
            Err(Error::DistributionExhausted { .. })
        ));
        // λ = 1 is already violated near zero, but the point past the support still wins
        let busy = QueueScenario::new(1.0, ServiceTimeModel::uniform(0.0, 2.0).unwrap()).unwrap();
        assert!(matches!(
            stability_check(&busy, &[0.5, 1.0, 3.0]),
            Err(Error::DistributionExhausted { .. })
        ));
        // hazard of U(0,2) is 1/(2-t) >= 0.5
        let r = stability_check(&u, &[0.5, 1.0, 1.9]).unwrap();
        assert!(r.satisfied);
    }

    #[test]
    fn deterministic_stability_not_applicable() {
        let d = QueueScenario::new(0.1, ServiceTimeModel::deterministic(2.0).unwrap()).unwrap();
        let r = stability_check(&d, &[0.5, 1.0]).unwrap();
        assert!(!r.applicable && !r.satisfied);
    }

    #[test]
    fn curve_examples() {
        let grid = uniform_grid(10.0, DEFAULT_GRID_POINTS).unwrap();
        let s = mm(0.5, 1.0);
        let p = transient_curve(&s, &grid, CurveKind::EmptyProbability).unwrap();
        assert_eq!(p.monotonicity, Monotonicity::NonDecreasing);
        let m = transient_curve(&s, &grid, CurveKind::MeanInSystem).unwrap();
        assert_eq!(m.monotonicity, Monotonicity::NonIncreasing);
        let m = transient_curve(&mm(5.0, 1.0), &grid, CurveKind::MeanInSystem).unwrap();
        assert_eq!(m.monotonicity, Monotonicity::NonDecreasing);
        // rho = 1: mu(t) = 1 identically
        let m = transient_curve(&mm(1.0, 1.0), &grid, CurveKind::MeanInSystem).unwrap();
        assert_eq!(m.monotonicity, Monotonicity::Constant);
        assert!(m.monotonicity.is_non_increasing() && m.monotonicity.is_non_decreasing());
    }

    #[test]
    fn curve_grid_must_start_at_zero() {
        let s = mm(0.5, 1.0);
        assert!(transient_curve(&s, &[0.5, 1.0], CurveKind::MeanInSystem).is_err());
        assert!(transient_curve(&s, &[0.0, 1.0, 1.0], CurveKind::MeanInSystem).is_err());
        assert!(transient_curve(&s, &[], CurveKind::MeanInSystem).is_err());
    }

    #[test]
    fn curve_matches_pointwise_evaluation() {
        let s = QueueScenario::new(0.7, ServiceTimeModel::weibull(1.7, 1.2).unwrap()).unwrap();
        let grid = uniform_grid(6.0, 40).unwrap();
        let p = transient_curve(&s, &grid, CurveKind::EmptyProbability).unwrap();
        let m = transient_curve(&s, &grid, CurveKind::MeanInSystem).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            assert!((p.values[i] - s.empty_probability(t).unwrap()).abs() < 1e-9);
            assert!((m.values[i] - s.mean_in_system(t).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let s = mm(0.5, 1.0);
        let c = transient_curve(&s, &[0.0, 1.0], CurveKind::MeanInSystem).unwrap();
        let csv = c.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines[1], "0,1");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn classify_cases() {
        assert_eq!(Monotonicity::classify(&[0.0, 1.0, 1.0, 2.0], 1e-9), Monotonicity::NonDecreasing);
        assert_eq!(Monotonicity::classify(&[1.0, 1.0 + 5e-10, 1.0], 1e-9), Monotonicity::Constant);
        assert_eq!(Monotonicity::classify(&[0.0, 1.0, 0.5], 1e-9), Monotonicity::Mixed);
    }
}
