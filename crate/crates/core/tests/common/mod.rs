//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use mginf::costbenefit::{ConversionOption, CostProfile, DecisionInput, FleetMixPolicy, OptionEconomics};
use mginf::ServiceTimeModel;
use rand::Rng;

/// A service model with a density together with the infimum of its hazard on
/// `[0, max_t]` and a horizon that stays inside the support.
pub struct HazardCase {
    pub model: ServiceTimeModel,
    pub min_hazard: f64,
    pub max_t: f64,
}

/// Families whose hazard infimum over `[0, max_t]` is known in closed form.
pub fn hazard_case<R: Rng>(rng: &mut R) -> HazardCase {
    match rng.random_range(0..4) {
        0 => {
            let mean = rng.random_range(0.2..5.0);
            HazardCase {
                model: ServiceTimeModel::exponential(mean).unwrap(),
                min_hazard: 1.0 / mean,
                max_t: rng.random_range(1.0..20.0) * mean,
            }
        }
        1 => {
            // shape <= 1: hazard decreases, so the infimum sits at the horizon
            let shape = rng.random_range(0.3..1.0);
            let scale = rng.random_range(0.5..4.0);
            let max_t = rng.random_range(0.5..4.0) * scale;
            let model = ServiceTimeModel::weibull(shape, scale).unwrap();
            let min_hazard = model.hazard(max_t).unwrap();
            HazardCase { model, min_hazard, max_t }
        }
        2 => {
            // uniform from zero: hazard 1/(b - t) is smallest at t = 0
            let upper = rng.random_range(0.5..10.0);
            HazardCase {
                model: ServiceTimeModel::uniform(0.0, upper).unwrap(),
                min_hazard: 1.0 / upper,
                max_t: rng.random_range(0.2..0.9) * upper,
            }
        }
        _ => {
            // piecewise-linear cdf: within a segment the hazard rises, so the
            // infimum is the minimum over segment starts
            let n = rng.random_range(2..6);
            let mut t = 0.0;
            let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.05..0.95)).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            cuts.push(1.0);
            let mut knots = vec![(0.0, 0.0)];
            for g in cuts {
                t += rng.random_range(0.2..2.0);
                knots.push((t, g));
            }
            let mut min_hazard = f64::INFINITY;
            for w in knots.windows(2) {
                let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                min_hazard = min_hazard.min(slope / (1.0 - w[0].1));
            }
            let max_t = rng.random_range(0.2..0.9) * t;
            HazardCase {
                model: ServiceTimeModel::piecewise_empirical(knots).unwrap(),
                min_hazard,
                max_t,
            }
        }
    }
}

/// Any density-bearing model, including increasing-hazard Weibull shapes.
pub fn density_model<R: Rng>(rng: &mut R) -> (ServiceTimeModel, f64) {
    if rng.random_bool(0.25) {
        let shape = rng.random_range(1.0..4.0);
        let scale = rng.random_range(0.5..4.0);
        (ServiceTimeModel::weibull(shape, scale).unwrap(), 2.0 * scale)
    } else {
        let c = hazard_case(rng);
        (c.model, c.max_t)
    }
}

/// Random all-exponential decision input with positive costs and benefits.
pub fn exponential_input<R: Rng>(rng: &mut R) -> DecisionInput {
    let p = rng.random_range(0.05..0.95);
    let q = rng.random_range(0.0..0.9);
    let r = rng.random_range(0.0..(1.0 - q));
    let options = ConversionOption::ALL
        .iter()
        .map(|&tag| {
            OptionEconomics::new(
                tag,
                ServiceTimeModel::exponential(rng.random_range(0.5..5.0)).unwrap(),
                rng.random_range(0.0..200.0),
                CostProfile::Total(rng.random_range(1.0..500.0)),
            )
            .unwrap()
        })
        .collect();
    DecisionInput::new(
        rng.random_range(0.5..50.0),
        rng.random_range(5.0..60.0),
        FleetMixPolicy::new(p, q, r).unwrap(),
        options,
    )
    .unwrap()
}

/// Root of an increasing function by bisection on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    assert!(f(lo) <= 0.0 && f(hi) >= 0.0, "root not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Net value of an all-exponential programme written out from first
/// principles: benefit bⱼ T/αⱼ per option against λ Σ shareⱼ Cⱼ.
pub fn exponential_net(lambda: f64, horizon: f64, shares: [f64; 4], means: [f64; 4], benefits: [f64; 4], costs: [f64; 4]) -> f64 {
    let benefit: f64 = (0..4).map(|j| benefits[j] * horizon / means[j]).sum();
    let cost: f64 = lambda * (0..4).map(|j| shares[j] * costs[j]).sum::<f64>();
    benefit - cost
}
