//! Estimators for the model inputs: the arrival rate, the hazard of
//! exponential service times, a binned occurrence/exposure hazard, and an
//! index-of-dispersion check on the Poisson arrival assumption.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arrival timestamps observed over a window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrivalLog {
    timestamps: Vec<f64>,
    window: (f64, f64),
}

impl ArrivalLog {
    pub fn new(timestamps: Vec<f64>, window: (f64, f64)) -> Result<Self> {
        let (start, end) = window;
        if !(start.is_finite() && end.is_finite() && end > start) {
            return Err(Error::Domain(format!("window end must exceed start, got ({start}, {end})")));
        }
        if timestamps.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("arrival timestamps must be strictly increasing".into()));
        }
        if timestamps.iter().any(|t| !(start..=end).contains(t)) {
            return Err(Error::Domain(format!("arrival timestamps must lie in [{start}, {end}]")));
        }
        Ok(ArrivalLog { timestamps, window })
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    fn length(&self) -> f64 {
        self.window.1 - self.window.0
    }
}

/// Completed service durations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServiceLog {
    durations: Vec<f64>,
}

impl ServiceLog {
    pub fn new(durations: Vec<f64>) -> Result<Self> {
        if let Some(d) = durations.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::Domain(format!("durations must be finite and > 0, got {d}")));
        }
        Ok(ServiceLog { durations })
    }

    pub fn durations(&self) -> &[f64] {
        &self.durations
    }
}

/// Arrivals per unit time over the log window.
pub fn estimate_lambda(log: &ArrivalLog) -> Result<f64> {
    if log.timestamps.is_empty() {
        return Err(Error::InsufficientData("arrival log is empty".into()));
    }
    Ok(log.timestamps.len() as f64 / log.length())
}

/// Constant hazard 1/mean, the maximum-likelihood estimate for exponential data.
pub fn estimate_exponential_hazard(log: &ServiceLog) -> Result<f64> {
    if log.durations.is_empty() {
        return Err(Error::InsufficientData("service log is empty".into()));
    }
    let mean = log.durations.iter().sum::<f64>() / log.durations.len() as f64;
    Ok(1.0 / mean)
}

/// One bin `(start, end]` of a piecewise-constant hazard estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardBin {
    pub start: f64,
    pub end: f64,
    pub events: u64,
    pub exposure: f64,
    /// events / exposure; `None` when nothing was at risk in the bin.
    pub hazard: Option<f64>,
}

/// Occurrence/exposure hazard on the bins defined by `edges`.
///
/// Durations beyond the last edge contribute exposure to every bin but no
/// event.
pub fn estimate_empirical_hazard(log: &ServiceLog, edges: &[f64]) -> Result<Vec<HazardBin>> {
    if log.durations.is_empty() {
        return Err(Error::InsufficientData("service log is empty".into()));
    }
    if edges.len() < 2 {
        return Err(Error::InsufficientData("need at least two bin edges".into()));
    }
    if edges[0] < 0.0 || edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InsufficientData(
            "bin edges must be finite, non-negative and strictly increasing".into(),
        ));
    }
    let mut bins: Vec<HazardBin> = edges
        .windows(2)
        .map(|w| HazardBin {
            start: w[0],
            end: w[1],
            events: 0,
            exposure: 0.0,
            hazard: None,
        })
        .collect();
    for &d in &log.durations {
        for bin in bins.iter_mut() {
            if d <= bin.start {
                break;
            }
            bin.exposure += d.min(bin.end) - bin.start;
            if d <= bin.end {
                bin.events += 1;
            }
        }
    }
    for bin in bins.iter_mut() {
        if bin.exposure > 0.0 {
            bin.hazard = Some(bin.events as f64 / bin.exposure);
        }
    }
    Ok(bins)
}

/// Variance-to-mean ratio of arrival counts in `bin_count` equal bins of the
/// window; close to 1 for a Poisson stream.
pub fn dispersion_check(log: &ArrivalLog, bin_count: usize) -> Result<f64> {
    if bin_count < 2 {
        return Err(Error::InsufficientData(format!("need at least 2 bins, got {bin_count}")));
    }
    if log.timestamps.is_empty() {
        return Err(Error::InsufficientData("arrival log is empty".into()));
    }
    let (start, _) = log.window;
    let width = log.length() / bin_count as f64;
    let mut counts = vec![0u64; bin_count];
    for &t in &log.timestamps {
        let i = (((t - start) / width) as usize).min(bin_count - 1);
        counts[i] += 1;
    }
    let n = bin_count as f64;
    let mean = counts.iter().sum::<u64>() as f64 / n;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var / mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::service_time::ServiceTimeModel;
    use crate::simulator::{record_event_log, replication_rng};
    use crate::transient::QueueScenario;

    fn evenly(n: usize, end: f64) -> ArrivalLog {
        let stamps = (0..n).map(|i| (i as f64 + 0.5) * end / n as f64).collect();
        ArrivalLog::new(stamps, (0.0, end)).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(estimate_lambda(&evenly(30, 10.0)).unwrap(), 3.0);
        assert_eq!(estimate_lambda(&evenly(100, 50.0)).unwrap(), 2.0);
        let empty = ArrivalLog::new(vec![], (0.0, 1.0)).unwrap();
        assert!(matches!(estimate_lambda(&empty), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn lambda_rescales_with_time() {
        let stamps = vec![0.3, 1.1, 2.0, 4.7, 5.5];
        let base = estimate_lambda(&ArrivalLog::new(stamps.clone(), (0.0, 6.0)).unwrap()).unwrap();
        let k = 3.5;
        let scaled = ArrivalLog::new(stamps.iter().map(|t| t * k).collect(), (0.0, 6.0 * k)).unwrap();
        assert!((estimate_lambda(&scaled).unwrap() - base / k).abs() < 1e-15);
    }

    #[test]
    fn arrival_log_validation() {
        assert!(ArrivalLog::new(vec![1.0, 0.5], (0.0, 2.0)).is_err());
        assert!(ArrivalLog::new(vec![3.0], (0.0, 2.0)).is_err());
        assert!(ArrivalLog::new(vec![], (2.0, 2.0)).is_err());
        assert!(ServiceLog::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn exponential_hazard_examples() {
        let log = ServiceLog::new(vec![1.0, 3.0, 2.0]).unwrap();
        assert_eq!(estimate_exponential_hazard(&log).unwrap(), 0.5);
        assert_eq!(estimate_exponential_hazard(&ServiceLog::new(vec![4.0]).unwrap()).unwrap(), 0.25);
        assert!(estimate_exponential_hazard(&ServiceLog::new(vec![]).unwrap()).is_err());
    }

    fn exp_draws(alpha: f64, n: usize, seed: u64) -> ServiceLog {
        let m = ServiceTimeModel::exponential(alpha).unwrap();
        let mut rng = replication_rng(seed, 0);
        ServiceLog::new((0..n).map(|_| m.sample(&mut rng)).collect()).unwrap()
    }

    #[test]
    fn exponential_hazard_is_consistent() {
        let h = estimate_exponential_hazard(&exp_draws(1.0, 100_000, 1)).unwrap();
        assert!((h - 1.0).abs() < 0.02, "{h}");
        // root-mean-square error over independent seeded streams shrinks with n
        let rmse: Vec<f64> = [1_000, 10_000, 100_000]
            .iter()
            .map(|&n| {
                let sq: f64 = (0..20)
                    .map(|seed| (estimate_exponential_hazard(&exp_draws(1.0, n, 100 + seed)).unwrap() - 1.0).powi(2))
                    .sum();
                (sq / 20.0).sqrt()
            })
            .collect();
        assert!(rmse[0] > rmse[1] && rmse[1] > rmse[2], "{rmse:?}");
    }

    #[test]
    fn empirical_hazard_on_exponential_data() {
        let log = exp_draws(2.0, 100_000, 2);
        let edges: Vec<f64> = (0..=10).map(|i| i as f64 * 0.4).collect();
        let bins = estimate_empirical_hazard(&log, &edges).unwrap();
        assert_eq!(bins.len(), 10);
        for b in &bins {
            let h = b.hazard.unwrap();
            assert!((h - 0.5).abs() <= 0.05, "bin ({}, {}]: {h}", b.start, b.end);
        }
    }

    #[test]
    fn empirical_hazard_degenerate_sample() {
        let log = ServiceLog::new(vec![2.5; 40]).unwrap();
        let bins = estimate_empirical_hazard(&log, &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        // brute force: every unit spends 1 in each of the first two bins and 0.5 in the third
        assert_eq!(bins[0].hazard, Some(0.0));
        assert_eq!(bins[1].hazard, Some(0.0));
        assert_eq!(bins[2].events, 40);
        assert_eq!(bins[2].exposure, 20.0);
        assert_eq!(bins[2].hazard, Some(1.0 / 0.5));
        assert_eq!(bins[3].hazard, None);
    }

    #[test]
    fn empirical_hazard_errors() {
        let log = ServiceLog::new(vec![1.0]).unwrap();
        assert!(estimate_empirical_hazard(&ServiceLog::new(vec![]).unwrap(), &[0.0, 1.0]).is_err());
        assert!(estimate_empirical_hazard(&log, &[1.0]).is_err());
        assert!(estimate_empirical_hazard(&log, &[0.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn dispersion_of_poisson_stream() {
        let s = QueueScenario::new(1.0, ServiceTimeModel::exponential(1.0).unwrap()).unwrap();
        let (arrivals, _) = record_event_log(&s, 100_000, 21).unwrap();
        // index * (bins - 1) is approximately chi-square with bins - 1 degrees of freedom
        let d = dispersion_check(&arrivals, 100).unwrap();
        assert!((d - 1.0).abs() <= 4.0 * (2.0f64 / 99.0).sqrt(), "{d}");
        let d = dispersion_check(&arrivals, 10_000).unwrap();
        assert!((d - 1.0).abs() <= 0.1, "{d}");
    }

    #[test]
    fn dispersion_of_periodic_stream() {
        let d = dispersion_check(&evenly(10_000, 100.0), 100).unwrap();
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn dispersion_errors() {
        assert!(dispersion_check(&evenly(10, 1.0), 1).is_err());
        assert!(dispersion_check(&ArrivalLog::new(vec![], (0.0, 1.0)).unwrap(), 5).is_err());
    }
}
