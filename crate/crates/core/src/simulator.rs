//! Discrete-event Monte Carlo simulation of the M|G|∞ queue.
//!
//! Two initial conditions are supported:
//!
//! - [`simulate_transient`]: one tagged customer starts service at t = 0 in an
//!   otherwise empty system, matching the transient formulas in
//!   [`crate::transient`].
//! - [`simulate_fleet`]: the system starts empty and every arrival is routed to
//!   one of the four conversion options.
//!
//! Replication `k` draws from ChaCha8 stream `k` of the configured seed, and
//! replications are reduced in fixed-size chunks in index order, so results are
//! bit-identical whether they run serially or on a thread pool.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::costbenefit::{ConversionOption, DecisionInput};
use crate::error::{Error, Result};
use crate::estimation::{ArrivalLog, ServiceLog};
use crate::format::sig6;
use crate::service_time::ServiceTimeModel;
use crate::transient::{CurveKind, Monotonicity, QueueScenario, TransientCurve, MONOTONE_TOL};

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

const CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub horizon: f64,
    pub replications: usize,
    pub seed: u64,
    pub grid: Vec<f64>,
    /// Run replications on the rayon pool. Results do not depend on this.
    pub parallel: bool,
}

impl SimulationConfig {
    pub fn new(horizon: f64, replications: usize, seed: u64, grid: Vec<f64>) -> Self {
        SimulationConfig {
            horizon,
            replications,
            seed,
            grid,
            parallel: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::Config(format!("horizon must be finite and > 0, got {}", self.horizon)));
        }
        if self.grid.iter().any(|t| !(0.0..=self.horizon).contains(t)) {
            return Err(Error::Config("observation grid must lie within [0, horizon]".into()));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("observation grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Random stream for replication `k`.
pub fn replication_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulationMode {
    Transient,
    Fleet,
}

/// Per-grid-point estimates with 99% normal-approximation half-widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCurve {
    pub grid: Vec<f64>,
    pub estimate: Vec<f64>,
    pub half_width: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FleetOutcome {
    /// Routed arrivals per option, summed over replications.
    pub arrivals: BTreeMap<ConversionOption, u64>,
    /// Completions within the horizon per option, summed over replications.
    pub completions: BTreeMap<ConversionOption, u64>,
    pub mean_arrivals: f64,
    /// Mean per replication of Σ bᵢ over completions.
    pub realized_benefit: f64,
    /// Mean per replication of cost accrued at Cᵢᵀ/T over in-service time.
    pub realized_cost: f64,
    /// Σ bᵢ Hᵢ(T), when every cumulative hazard is finite.
    pub benefit_integral: Option<f64>,
    /// λ Σ shareᵢ Cᵢᵀ.
    pub cost_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub mode: SimulationMode,
    pub replications: usize,
    pub seed: u64,
    pub empty_probability: EmpiricalCurve,
    pub mean_in_system: EmpiricalCurve,
    /// Sample variance of the number in system at each grid point.
    pub count_variance: Vec<f64>,
    pub fleet: Option<FleetOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Departure {
    time: f64,
    option: usize,
}

impl Eq for Departure {}

impl PartialOrd for Departure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Departure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time.total_cmp(&other.time).then(self.option.cmp(&other.option))
    }
}

/// What one replication routes arrivals to.
struct Routing<'a> {
    services: Vec<&'a ServiceTimeModel>,
    /// Cumulative routing shares; empty for a single service.
    cumulative: Vec<f64>,
    benefits: [f64; 4],
    cost_rates: [f64; 4],
}

impl Routing<'_> {
    fn route<R: Rng>(&self, rng: &mut R) -> usize {
        if self.cumulative.is_empty() {
            return 0;
        }
        let u: f64 = rng.random();
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    empty: Vec<u64>,
    count_sum: Vec<u64>,
    count_sq: Vec<u64>,
    arrivals: [u64; 4],
    completions: [u64; 4],
    benefit: f64,
    cost: f64,
}

impl Tally {
    fn new(points: usize) -> Self {
        Tally {
            empty: vec![0; points],
            count_sum: vec![0; points],
            count_sq: vec![0; points],
            ..Default::default()
        }
    }

    fn merge(&mut self, other: &Tally) {
        for i in 0..self.empty.len() {
            self.empty[i] += other.empty[i];
            self.count_sum[i] += other.count_sum[i];
            self.count_sq[i] += other.count_sq[i];
        }
        for i in 0..4 {
            self.arrivals[i] += other.arrivals[i];
            self.completions[i] += other.completions[i];
        }
        self.benefit += other.benefit;
        self.cost += other.cost;
    }
}

struct Replication<'a> {
    lambda: f64,
    horizon: f64,
    grid: &'a [f64],
    routing: &'a Routing<'a>,
    tagged: bool,
}

impl Replication<'_> {
    fn run<R: Rng>(&self, rng: &mut R, tally: &mut Tally) {
        let mut in_service: BinaryHeap<Reverse<Departure>> = BinaryHeap::new();
        let next_gap = |rng: &mut R| -> f64 {
            if self.lambda > 0.0 {
                -(-rng.random::<f64>()).ln_1p() / self.lambda
            } else {
                f64::INFINITY
            }
        };
        if self.tagged {
            let s = self.routing.services[0].sample(rng);
            in_service.push(Reverse(Departure { time: s, option: 0 }));
        }
        let mut next_arrival = next_gap(rng);
        let mut obs = self.grid.iter().enumerate().peekable();

        loop {
            let next_departure = in_service.peek().map_or(f64::INFINITY, |d| d.0.time);
            let next_event = next_arrival.min(next_departure);
            // observations see every event at or before their time
            if let Some(&(i, &t)) = obs.peek() {
                if next_event > t {
                    let n = in_service.len() as u64;
                    if n == 0 {
                        tally.empty[i] += 1;
                    }
                    tally.count_sum[i] += n;
                    tally.count_sq[i] += n * n;
                    obs.next();
                    continue;
                }
            }
            if next_event > self.horizon {
                break;
            }
            if next_departure <= next_arrival {
                let Reverse(d) = in_service.pop().expect("peeked");
                if !self.tagged {
                    tally.completions[d.option] += 1;
                    tally.benefit += self.routing.benefits[d.option];
                }
            } else {
                let a = next_arrival;
                let option = self.routing.route(rng);
                let s = self.routing.services[option].sample(rng);
                if !self.tagged {
                    tally.arrivals[option] += 1;
                    tally.cost += self.routing.cost_rates[option] * s.min(self.horizon - a);
                }
                in_service.push(Reverse(Departure { time: a + s, option }));
                next_arrival = a + next_gap(rng);
            }
        }
    }
}

fn run_all(config: &SimulationConfig, rep: &Replication<'_>) -> Tally {
    let points = config.grid.len();
    let chunk_tally = |chunk: usize| -> Tally {
        let mut tally = Tally::new(points);
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(config.replications);
        for k in start..end {
            let mut rng = replication_rng(config.seed, k as u64);
            rep.run(&mut rng, &mut tally);
        }
        tally
    };
    let chunks = config.replications.div_ceil(CHUNK);
    let partials: Vec<Tally> = if config.parallel {
        (0..chunks).into_par_iter().map(chunk_tally).collect()
    } else {
        (0..chunks).map(chunk_tally).collect()
    };
    let mut total = Tally::new(points);
    for p in &partials {
        total.merge(p);
    }
    total
}

fn proportion_half_width(p: f64, n: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        // zero-variance estimate: exact one-sided bound for an all-or-nothing sample
        1.0 - 0.005f64.powf(1.0 / n)
    } else {
        Z_99 * (p * (1.0 - p) / n).sqrt()
    }
}

fn summarize(
    mode: SimulationMode,
    config: &SimulationConfig,
    tally: &Tally,
    fleet: Option<FleetOutcome>,
) -> SimulationResult {
    let n = config.replications as f64;
    let mut empty = EmpiricalCurve {
        grid: config.grid.clone(),
        estimate: Vec::with_capacity(config.grid.len()),
        half_width: Vec::with_capacity(config.grid.len()),
    };
    let mut mean = empty.clone();
    let mut variance = Vec::with_capacity(config.grid.len());
    for i in 0..config.grid.len() {
        let p = tally.empty[i] as f64 / n;
        empty.estimate.push(p);
        empty.half_width.push(proportion_half_width(p, n));

        let sum = tally.count_sum[i] as u128;
        let sq = tally.count_sq[i] as u128;
        let reps = config.replications as u128;
        let var = if reps > 1 {
            (reps * sq - sum * sum) as f64 / (reps * (reps - 1)) as f64
        } else {
            0.0
        };
        mean.estimate.push(sum as f64 / n);
        mean.half_width.push(Z_99 * (var / n).sqrt());
        variance.push(var);
    }
    SimulationResult {
        mode,
        replications: config.replications,
        seed: config.seed,
        empty_probability: empty,
        mean_in_system: mean,
        count_variance: variance,
        fleet,
    }
}

/// Replicates the tagged-arrival transient experiment.
pub fn simulate_transient(scenario: &QueueScenario, config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let routing = Routing {
        services: vec![scenario.service()],
        cumulative: Vec::new(),
        benefits: [0.0; 4],
        cost_rates: [0.0; 4],
    };
    let rep = Replication {
        lambda: scenario.lambda(),
        horizon: config.horizon,
        grid: &config.grid,
        routing: &routing,
        tagged: true,
    };
    let tally = run_all(config, &rep);
    Ok(summarize(SimulationMode::Transient, config, &tally, None))
}

/// Replicates the routed fleet from an empty system over the configured horizon.
pub fn simulate_fleet(input: &DecisionInput, config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let shares = input.policy().shares();
    let mut cumulative = Vec::with_capacity(4);
    let mut acc = 0.0;
    for s in shares {
        acc += s;
        cumulative.push(acc);
    }
    // the last positive share absorbs rounding
    if let Some(last) = shares.iter().rposition(|&s| s > 0.0) {
        for c in cumulative.iter_mut().skip(last) {
            *c = f64::INFINITY;
        }
    }
    let mut benefits = [0.0; 4];
    let mut cost_rates = [0.0; 4];
    for o in input.options() {
        let i = o.option.index();
        benefits[i] = o.benefit;
        cost_rates[i] = o.cost.integral(input.horizon()) / input.horizon();
    }
    let routing = Routing {
        services: input.options().iter().map(|o| &o.service).collect(),
        cumulative,
        benefits,
        cost_rates,
    };
    let rep = Replication {
        lambda: input.lambda(),
        horizon: config.horizon,
        grid: &config.grid,
        routing: &routing,
        tagged: false,
    };
    let tally = run_all(config, &rep);
    let n = config.replications as f64;
    let by_option = |counts: [u64; 4]| -> BTreeMap<ConversionOption, u64> {
        ConversionOption::ALL.into_iter().zip(counts).collect()
    };
    let fleet = FleetOutcome {
        arrivals: by_option(tally.arrivals),
        completions: by_option(tally.completions),
        mean_arrivals: tally.arrivals.iter().sum::<u64>() as f64 / n,
        realized_benefit: tally.benefit / n,
        realized_cost: tally.cost / n,
        benefit_integral: input.benefit_integral().ok(),
        cost_integral: input.cost_integral(),
    };
    Ok(summarize(SimulationMode::Fleet, config, &tally, Some(fleet)))
}

/// Transient curve of the routed fleet started empty: the number in system is
/// Poisson with mean λ Σᵢ shareᵢ ∫₀ᵗ (1 - Gᵢ), so P(empty) = exp(-mean).
pub fn fleet_analytic_curve(input: &DecisionInput, grid: &[f64], kind: CurveKind) -> Result<TransientCurve> {
    let shares = input.policy().shares();
    let mut mean = vec![0.0; grid.len()];
    for (o, share) in input.options().iter().zip(shares) {
        if share == 0.0 {
            continue;
        }
        let si = o.service.survival_integral_on_grid(grid)?;
        for (m, s) in mean.iter_mut().zip(si) {
            *m += input.lambda() * share * s;
        }
    }
    let values: Vec<f64> = match kind {
        CurveKind::MeanInSystem => mean,
        CurveKind::EmptyProbability => mean.iter().map(|m| (-m).exp()).collect(),
    };
    Ok(TransientCurve {
        kind,
        grid: grid.to_vec(),
        monotonicity: Monotonicity::classify(&values, MONOTONE_TOL),
        values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub max_abs_deviation: f64,
    /// Fraction of grid points whose analytic value lies in the empirical interval.
    pub coverage: f64,
    pub required_coverage: f64,
    pub passed: bool,
}

/// Checks an analytic curve against its simulated counterpart.
pub fn compare(analytic: &TransientCurve, empirical: &EmpiricalCurve, required_coverage: f64) -> Result<ComparisonReport> {
    if analytic.grid.len() != empirical.grid.len()
        || analytic.grid.iter().zip(&empirical.grid).any(|(a, b)| (a - b).abs() > 1e-12)
    {
        return Err(Error::Shape(format!(
            "analytic grid ({} points) does not match empirical grid ({} points)",
            analytic.grid.len(),
            empirical.grid.len()
        )));
    }
    if analytic.grid.is_empty() {
        return Err(Error::Shape("empty grid".into()));
    }
    let mut max_dev: f64 = 0.0;
    let mut covered = 0usize;
    for ((a, e), h) in analytic.values.iter().zip(&empirical.estimate).zip(&empirical.half_width) {
        let d = (a - e).abs();
        max_dev = max_dev.max(d);
        if d <= h + 1e-12 {
            covered += 1;
        }
    }
    let coverage = covered as f64 / analytic.grid.len() as f64;
    Ok(ComparisonReport {
        max_abs_deviation: max_dev,
        coverage,
        required_coverage,
        passed: coverage >= required_coverage,
    })
}

/// CSV with header `t,empirical,half_width,analytic,deviation`.
pub fn comparison_csv(analytic: &TransientCurve, empirical: &EmpiricalCurve) -> String {
    let mut out = String::from("t,empirical,half_width,analytic,deviation\n");
    for i in 0..empirical.grid.len() {
        let a = analytic.values[i];
        let e = empirical.estimate[i];
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig6(empirical.grid[i]),
            sig6(e),
            sig6(empirical.half_width[i]),
            sig6(a),
            sig6(e - a)
        ));
    }
    out
}

/// Generates `events` arrivals of a scenario from t = 0 with their service
/// durations; the arrival window closes at the last arrival.
pub fn record_event_log(scenario: &QueueScenario, events: usize, seed: u64) -> Result<(ArrivalLog, ServiceLog)> {
    if events == 0 {
        return Err(Error::Config("need at least one event".into()));
    }
    if scenario.lambda() <= 0.0 {
        return Err(Error::Config("arrival rate must be > 0 to record arrivals".into()));
    }
    let mut rng = replication_rng(seed, 0);
    let mut t = 0.0;
    let mut stamps = Vec::with_capacity(events);
    let mut durations = Vec::with_capacity(events);
    for _ in 0..events {
        t += -(-rng.random::<f64>()).ln_1p() / scenario.lambda();
        stamps.push(t);
        durations.push(scenario.service().sample(&mut rng));
    }
    Ok((ArrivalLog::new(stamps, (0.0, t))?, ServiceLog::new(durations)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costbenefit::{CostProfile, FleetMixPolicy, OptionEconomics};
    use crate::transient::transient_curve;

    fn mm(lambda: f64, alpha: f64) -> QueueScenario {
        QueueScenario::new(lambda, ServiceTimeModel::exponential(alpha).unwrap()).unwrap()
    }

    #[test]
    fn zero_replications_rejected() {
        let c = SimulationConfig::new(1.0, 0, 1, vec![0.5]);
        assert!(matches!(simulate_transient(&mm(1.0, 1.0), &c), Err(Error::Config(_))));
        let c = SimulationConfig::new(1.0, 10, 1, vec![2.0]);
        assert!(simulate_transient(&mm(1.0, 1.0), &c).is_err());
    }

    #[test]
    fn no_arrivals_reduces_to_the_cdf() {
        let c = SimulationConfig::new(1.0, 100_000, 3, vec![1.0]);
        let r = simulate_transient(&mm(0.0, 1.0), &c).unwrap();
        let g = 1.0 - (-1.0f64).exp();
        assert!((r.empty_probability.estimate[0] - g).abs() < 0.01);
    }

    #[test]
    fn deterministic_single_service() {
        let s = QueueScenario::new(0.0, ServiceTimeModel::deterministic(2.0).unwrap()).unwrap();
        let c = SimulationConfig::new(2.5, 50, 3, vec![1.0, 2.0, 2.5]);
        let r = simulate_transient(&s, &c).unwrap();
        assert_eq!(r.empty_probability.estimate, vec![0.0, 1.0, 1.0]);
        assert_eq!(r.mean_in_system.estimate, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let grid = vec![0.0, 0.5, 1.0, 2.0, 5.0];
        let mut c = SimulationConfig::new(5.0, 3000, 99, grid);
        let a = simulate_transient(&mm(1.3, 0.8), &c).unwrap();
        c.parallel = false;
        let b = simulate_transient(&mm(1.3, 0.8), &c).unwrap();
        assert_eq!(a, b);
        let c2 = SimulationConfig::new(5.0, 3000, 99, c.grid.clone());
        assert_eq!(simulate_transient(&mm(1.3, 0.8), &c2).unwrap(), a);
        let c3 = SimulationConfig::new(5.0, 3000, 100, c.grid.clone());
        assert_ne!(simulate_transient(&mm(1.3, 0.8), &c3).unwrap(), a);
    }

    #[test]
    fn half_width_shrinks_at_monte_carlo_rate() {
        let s = mm(1.0, 1.0);
        let grid = vec![1.0, 2.0];
        let small = simulate_transient(&s, &SimulationConfig::new(2.0, 20_000, 5, grid.clone())).unwrap();
        let large = simulate_transient(&s, &SimulationConfig::new(2.0, 80_000, 5, grid)).unwrap();
        for i in 0..2 {
            let ratio = small.empty_probability.half_width[i] / large.empty_probability.half_width[i];
            assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
            let ratio = small.mean_in_system.half_width[i] / large.mean_in_system.half_width[i];
            assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");
        }
    }

    #[test]
    fn compare_self_and_mismatch() {
        let s = mm(1.0, 1.0);
        let grid: Vec<f64> = (0..11).map(|i| i as f64 * 0.5).collect();
        let curve = transient_curve(&s, &grid, CurveKind::EmptyProbability).unwrap();
        let own = EmpiricalCurve {
            grid: grid.clone(),
            estimate: curve.values.clone(),
            half_width: vec![0.0; grid.len()],
        };
        let r = compare(&curve, &own, 0.95).unwrap();
        assert_eq!(r.max_abs_deviation, 0.0);
        assert_eq!(r.coverage, 1.0);
        assert!(r.passed);

        let sim = simulate_transient(&s, &SimulationConfig::new(5.0, 20_000, 8, grid.clone())).unwrap();
        let wrong = transient_curve(&mm(2.0, 1.0), &grid, CurveKind::EmptyProbability).unwrap();
        assert!(!compare(&wrong, &sim.empty_probability, 0.95).unwrap().passed);
        assert!(compare(&curve, &sim.empty_probability, 0.95).unwrap().passed);

        let short = EmpiricalCurve {
            grid: grid[..3].to_vec(),
            estimate: vec![0.0; 3],
            half_width: vec![0.0; 3],
        };
        assert!(matches!(compare(&curve, &short, 0.95), Err(Error::Shape(_))));
    }

    fn fleet_input(lambda: f64, p: f64, q: f64, r: f64) -> DecisionInput {
        let rows = [(ConversionOption::Ev, 1.0, 50.0, 150.0), (ConversionOption::Hev, 2.0, 30.0, 200.0), (ConversionOption::Fcev, 2.0, 30.0, 175.0), (ConversionOption::Dv, 1.5, 20.0, 100.0)];
        let options = rows
            .iter()
            .map(|&(o, a, b, c)| {
                OptionEconomics::new(o, ServiceTimeModel::exponential(a).unwrap(), b, CostProfile::Total(c)).unwrap()
            })
            .collect();
        DecisionInput::new(lambda, 30.0, FleetMixPolicy::new(p, q, r).unwrap(), options).unwrap()
    }

    #[test]
    fn fleet_routing_shares() {
        let input = fleet_input(30.0, 0.6, 0.2, 0.1);
        let r = simulate_fleet(&input, &SimulationConfig::new(30.0, 1000, 17, vec![0.0, 15.0, 30.0])).unwrap();
        let f = r.fleet.unwrap();
        assert!((f.mean_arrivals - 900.0).abs() < 900.0 * 0.01, "{}", f.mean_arrivals);
        let total: u64 = f.arrivals.values().sum();
        for (o, share) in ConversionOption::ALL.into_iter().zip([0.12, 0.06, 0.42, 0.40]) {
            let got = f.arrivals[&o] as f64 / total as f64;
            assert!((got - share).abs() <= 0.02 * share, "{o}: {got}");
        }
        // starts empty
        assert_eq!(r.empty_probability.estimate[0], 1.0);
        // accrual oracle: λ Σ shareᵢ (Cᵢ/T) ∫₀ᵀ E[min(S, T - a)] da, with
        // ∫₀ᵀ αᵢ(1 - e^{-u/αᵢ}) du = αᵢ(T - αᵢ(1 - e^{-T/αᵢ})) for exponential services
        let oracle: f64 = [(0.12, 150.0, 1.0), (0.06, 200.0, 2.0), (0.42, 175.0, 2.0), (0.40, 100.0, 1.5)]
            .iter()
            .map(|&(share, c, a): &(f64, f64, f64)| 30.0 * share * c / 30.0 * a * (30.0 - a * (1.0 - (-30.0 / a).exp())))
            .sum();
        assert!((f.realized_cost - oracle).abs() < 0.01 * oracle, "{} vs {oracle}", f.realized_cost);
        assert_eq!(f.cost_integral, 4305.0);
    }

    #[test]
    fn fleet_all_ev_and_no_arrivals() {
        let r = simulate_fleet(&fleet_input(5.0, 1.0, 1.0, 0.0), &SimulationConfig::new(30.0, 50, 1, vec![10.0])).unwrap();
        let f = r.fleet.unwrap();
        let others: u64 = f.completions.iter().filter(|(o, _)| **o != ConversionOption::Ev).map(|(_, c)| c).sum();
        assert_eq!(others, 0);
        assert!(f.completions[&ConversionOption::Ev] > 0);

        let r = simulate_fleet(&fleet_input(0.0, 0.6, 0.2, 0.1), &SimulationConfig::new(30.0, 20, 1, vec![10.0])).unwrap();
        let f = r.fleet.unwrap();
        assert_eq!(f.mean_arrivals, 0.0);
        assert_eq!(f.realized_benefit, 0.0);
        assert_eq!(f.realized_cost, 0.0);
        assert_eq!(r.empty_probability.estimate, vec![1.0]);
    }

    #[test]
    fn fleet_matches_empty_start_analytics() {
        let input = fleet_input(2.0, 0.6, 0.2, 0.1);
        let grid = vec![0.0, 0.5, 1.0, 2.0, 4.0];
        let r = simulate_fleet(&input, &SimulationConfig::new(30.0, 20_000, 4, grid.clone())).unwrap();
        let mean = fleet_analytic_curve(&input, &grid, CurveKind::MeanInSystem).unwrap();
        let empty = fleet_analytic_curve(&input, &grid, CurveKind::EmptyProbability).unwrap();
        assert!(compare(&mean, &r.mean_in_system, 0.95).unwrap().passed);
        assert!(compare(&empty, &r.empty_probability, 0.95).unwrap().passed);
    }

    #[test]
    fn event_log_round_trip_shape() {
        let (arrivals, services) = record_event_log(&mm(2.0, 1.5), 1000, 3).unwrap();
        assert_eq!(arrivals.timestamps().len(), 1000);
        assert_eq!(services.durations().len(), 1000);
        assert!(record_event_log(&mm(0.0, 1.5), 10, 3).is_err());
    }

    #[test]
    fn streams_differ_per_replication() {
        let a: u64 = replication_rng(1, 0).random();
        let b: u64 = replication_rng(1, 1).random();
        let c: u64 = replication_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
