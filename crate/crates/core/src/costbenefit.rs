//! Cost-benefit analysis of routing idle vehicles to conversion or dismantling.
//!
//! Arrivals at rate λ are split by a [`FleetMixPolicy`] into four streams with
//! shares pq (EV), pr (HEV), p(1-q-r) (FCEV) and 1-p (DV). Over a horizon T:
//!
//! - cost rate: C(t) = λ Σᵢ shareᵢ cᵢ(t), so ∫₀ᵀ C = λ Σᵢ shareᵢ Cᵢᵀ
//! - benefit rate: B(t) = Σᵢ bᵢ hᵢ(t), so with constant benefits
//!   ∫₀ᵀ B = Σᵢ bᵢ Hᵢ(T), Hᵢ being the cumulative hazard.
//!
//! Option i is worth pursuing when bᵢ exceeds the benefit that makes
//! ∫B = ∫C, clamped at zero:
//!
//! ```text
//! bᵢ* = max{ (λ Σⱼ shareⱼ Cⱼᵀ − Σⱼ≠ᵢ bⱼ Hⱼ(T)) / Hᵢ(T), 0 }
//! ```
//!
//! With exponential services Hᵢ(T) = T/αᵢ and the threshold becomes
//! ρᵢ Σⱼ shareⱼ Cⱼᵀ / T − Σⱼ≠ᵢ bⱼ αᵢ/αⱼ with ρᵢ = λαᵢ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig6;
use crate::service_time::ServiceTimeModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConversionOption {
    #[serde(rename = "EV")]
    Ev,
    #[serde(rename = "HEV")]
    Hev,
    #[serde(rename = "FCEV")]
    Fcev,
    #[serde(rename = "DV")]
    Dv,
}

impl ConversionOption {
    /// All options in tie-break order.
    pub const ALL: [ConversionOption; 4] = [
        ConversionOption::Ev,
        ConversionOption::Hev,
        ConversionOption::Fcev,
        ConversionOption::Dv,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConversionOption::Ev => "EV",
            ConversionOption::Hev => "HEV",
            ConversionOption::Fcev => "FCEV",
            ConversionOption::Dv => "DV",
        }
    }
}

impl fmt::Display for ConversionOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ConversionOption {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        ConversionOption::ALL
            .into_iter()
            .find(|o| o.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown option {s:?}, expected one of EV, HEV, FCEV, DV"))
    }
}

/// Routing probabilities: `p` to recycling, and among recycled vehicles `q`
/// to EV and `r` to HEV (the rest to FCEV).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FleetMixPolicy {
    p: f64,
    q: f64,
    r: f64,
}

impl FleetMixPolicy {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        let prob = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !prob(p) || !prob(q) || !prob(r) {
            return Err(Error::Domain(format!(
                "policy probabilities must lie in [0, 1], got p={p} q={q} r={r}"
            )));
        }
        if q + r > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("q + r must not exceed 1, got {}", q + r)));
        }
        Ok(FleetMixPolicy { p, q, r })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Routing shares in option order: pq, pr, p(1-q-r), 1-p.
    pub fn shares(&self) -> [f64; 4] {
        let FleetMixPolicy { p, q, r } = *self;
        [p * q, p * r, p * (1.0 - q - r).max(0.0), 1.0 - p]
    }

    pub fn share(&self, option: ConversionOption) -> f64 {
        self.shares()[option.index()]
    }
}

/// One step of a piecewise-constant cost profile: `rate` applies from the
/// previous step's `until` (or 0) up to this `until`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostStep {
    pub until: f64,
    pub rate: f64,
}

/// Mean cost of one conversion, cᵢ(t), or directly its integral Cᵢᵀ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CostProfile {
    /// Cᵢᵀ, spread uniformly over the horizon.
    Total(f64),
    /// Piecewise-constant rate; zero past the last step.
    Steps(Vec<CostStep>),
}

impl CostProfile {
    fn validate(&self) -> Result<()> {
        match self {
            CostProfile::Total(c) => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(Error::Domain(format!("cost total must be finite and >= 0, got {c}")));
                }
            }
            CostProfile::Steps(steps) => {
                if steps.is_empty() {
                    return Err(Error::Domain("cost profile has no steps".into()));
                }
                let mut prev = 0.0;
                for s in steps {
                    if !(s.until.is_finite() && s.until > prev) {
                        return Err(Error::Domain("cost profile `until` values must be strictly increasing and > 0".into()));
                    }
                    if !(s.rate.is_finite() && s.rate >= 0.0) {
                        return Err(Error::Domain(format!("cost rate must be finite and >= 0, got {}", s.rate)));
                    }
                    prev = s.until;
                }
            }
        }
        Ok(())
    }

    /// ∫₀ᵀ c(t) dt.
    pub fn integral(&self, horizon: f64) -> f64 {
        match self {
            CostProfile::Total(c) => *c,
            CostProfile::Steps(steps) => {
                let mut start = 0.0;
                let mut acc = 0.0;
                for s in steps {
                    if start >= horizon {
                        break;
                    }
                    acc += s.rate * (s.until.min(horizon) - start);
                    start = s.until;
                }
                acc
            }
        }
    }

    /// c(t) for `t` in `[0, horizon]`.
    pub fn rate_at(&self, t: f64, horizon: f64) -> f64 {
        match self {
            CostProfile::Total(c) => c / horizon,
            CostProfile::Steps(steps) => steps.iter().find(|s| t < s.until).map_or(0.0, |s| s.rate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionEconomics {
    pub option: ConversionOption,
    pub service: ServiceTimeModel,
    /// Constant benefit per conversion over the horizon.
    pub benefit: f64,
    pub cost: CostProfile,
}

impl OptionEconomics {
    pub fn new(
        option: ConversionOption,
        service: ServiceTimeModel,
        benefit: f64,
        cost: CostProfile,
    ) -> Result<Self> {
        if !(benefit.is_finite() && benefit >= 0.0) {
            return Err(Error::Domain(format!("benefit must be finite and >= 0, got {benefit}")).for_option(option));
        }
        cost.validate().map_err(|e| e.for_option(option))?;
        Ok(OptionEconomics {
            option,
            service,
            benefit,
            cost,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionInput {
    lambda: f64,
    horizon: f64,
    policy: FleetMixPolicy,
    /// Indexed by [`ConversionOption::index`].
    options: Vec<OptionEconomics>,
}

/// A minimum benefit, before and after clamping at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub raw: f64,
    pub clamped: f64,
}

impl Threshold {
    fn from_raw(raw: f64) -> Self {
        Threshold {
            raw,
            clamped: raw.max(0.0),
        }
    }
}

impl DecisionInput {
    pub fn new(
        lambda: f64,
        horizon: f64,
        policy: FleetMixPolicy,
        options: Vec<OptionEconomics>,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!("arrival rate must be finite and >= 0, got {lambda}")));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Domain(format!("horizon must be finite and > 0, got {horizon}")));
        }
        let mut slots: [Option<OptionEconomics>; 4] = Default::default();
        for o in options {
            let i = o.option.index();
            if slots[i].is_some() {
                return Err(Error::Domain(format!("option {} given more than once", o.option)));
            }
            slots[i] = Some(o);
        }
        let options = slots
            .into_iter()
            .zip(ConversionOption::ALL)
            .map(|(s, tag)| s.ok_or_else(|| Error::Domain(format!("option {tag} missing"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DecisionInput {
            lambda,
            horizon,
            policy,
            options,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn policy(&self) -> &FleetMixPolicy {
        &self.policy
    }

    pub fn option(&self, option: ConversionOption) -> &OptionEconomics {
        &self.options[option.index()]
    }

    pub fn options(&self) -> &[OptionEconomics] {
        &self.options
    }

    /// Copy of this input with one option's benefit replaced.
    pub fn with_benefit(&self, option: ConversionOption, benefit: f64) -> Self {
        let mut out = self.clone();
        out.options[option.index()].benefit = benefit;
        out
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < 0.0 || t > self.horizon {
            return Err(Error::Domain(format!("t = {t} outside [0, {}]", self.horizon)));
        }
        Ok(())
    }

    /// C(t) = λ Σᵢ shareᵢ cᵢ(t).
    pub fn cost_rate(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let shares = self.policy.shares();
        Ok(self.lambda
            * self
                .options
                .iter()
                .zip(shares)
                .map(|(o, s)| s * o.cost.rate_at(t, self.horizon))
                .sum::<f64>())
    }

    /// B(t) = Σᵢ bᵢ hᵢ(t).
    pub fn benefit_rate(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        self.options
            .iter()
            .map(|o| {
                o.service
                    .hazard(t)
                    .map(|h| o.benefit * h)
                    .map_err(|e| e.for_option(o.option))
            })
            .sum()
    }

    /// Σᵢ shareᵢ Cᵢᵀ: expected conversion cost of one arrival.
    pub fn cost_per_arrival(&self) -> f64 {
        self.options
            .iter()
            .zip(self.policy.shares())
            .map(|(o, s)| s * o.cost.integral(self.horizon))
            .sum()
    }

    /// ∫₀ᵀ C(t) dt.
    pub fn cost_integral(&self) -> f64 {
        self.lambda * self.cost_per_arrival()
    }

    /// Hᵢ(T) for every option, failing on the first exhausted distribution.
    pub fn cumulative_hazards(&self) -> Result<[f64; 4]> {
        let mut out = [0.0; 4];
        for (slot, o) in out.iter_mut().zip(&self.options) {
            *slot = o
                .service
                .cumulative_hazard(self.horizon)
                .map_err(|e| e.for_option(o.option))?;
        }
        Ok(out)
    }

    /// ∫₀ᵀ B(t) dt = Σᵢ bᵢ Hᵢ(T).
    pub fn benefit_integral(&self) -> Result<f64> {
        let h = self.cumulative_hazards()?;
        Ok(self.options.iter().zip(h).map(|(o, h)| o.benefit * h).sum())
    }

    /// ∫B − ∫C over the horizon; positive means the programme pays off.
    pub fn net_check(&self) -> Result<f64> {
        Ok(self.benefit_integral()? - self.cost_integral())
    }

    /// Minimum benefit for `option` from cumulative hazards; valid for any
    /// service family.
    pub fn threshold_general(&self, option: ConversionOption) -> Result<Threshold> {
        let h = self.cumulative_hazards()?;
        let own = h[option.index()];
        if own <= 0.0 {
            return Err(Error::DegenerateThreshold(option));
        }
        let others: f64 = self
            .options
            .iter()
            .zip(h)
            .filter(|(o, _)| o.option != option)
            .map(|(o, h)| o.benefit * h)
            .sum();
        Ok(Threshold::from_raw((self.cost_integral() - others) / own))
    }

    /// Minimum benefit for `option` in the all-exponential closed form.
    pub fn threshold_exponential(&self, option: ConversionOption) -> Result<Threshold> {
        let mut means = [0.0; 4];
        for (slot, o) in means.iter_mut().zip(&self.options) {
            *slot = o
                .service
                .exponential_mean()
                .ok_or(Error::WrongForm(o.option))?;
        }
        let alpha = means[option.index()];
        let rho = self.lambda * alpha;
        let others: f64 = self
            .options
            .iter()
            .zip(means)
            .filter(|(o, _)| o.option != option)
            .map(|(o, a)| o.benefit * alpha / a)
            .sum();
        Ok(Threshold::from_raw(rho * self.cost_per_arrival() / self.horizon - others))
    }

    fn all_exponential(&self) -> bool {
        self.options.iter().all(|o| o.service.exponential_mean().is_some())
    }

    /// Thresholds, interest flags and ranking for all four options.
    pub fn decide(&self) -> DecisionReport {
        let exponential = self.all_exponential();
        let mut verdicts: Vec<OptionVerdict> = self
            .options
            .iter()
            .map(|o| {
                let result = if exponential {
                    self.threshold_exponential(o.option)
                } else {
                    self.threshold_general(o.option)
                };
                match result {
                    Ok(th) => OptionVerdict {
                        option: o.option,
                        benefit: o.benefit,
                        raw_threshold: Some(th.raw),
                        clamped_threshold: Some(th.clamped),
                        interesting: o.benefit > th.clamped,
                        rank: None,
                        error: None,
                    },
                    Err(e) => OptionVerdict {
                        option: o.option,
                        benefit: o.benefit,
                        raw_threshold: None,
                        clamped_threshold: None,
                        interesting: false,
                        rank: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect();

        let mut ranked: Vec<(ConversionOption, f64)> = verdicts
            .iter()
            .filter_map(|v| v.clamped_threshold.map(|c| (v.option, c)))
            .collect();
        // stable sort keeps tag order on ties
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        for (rank, (option, _)) in ranked.iter().enumerate() {
            verdicts[option.index()].rank = Some(rank + 1);
        }
        let mut ranking: Vec<ConversionOption> = ranked.into_iter().map(|(o, _)| o).collect();
        ranking.extend(verdicts.iter().filter(|v| v.rank.is_none()).map(|v| v.option));

        let (net_value, net_error) = match self.net_check() {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        DecisionReport {
            method: if exponential { ThresholdMethod::Exponential } else { ThresholdMethod::General },
            options: verdicts,
            ranking,
            net_value,
            net_error,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    Exponential,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionVerdict {
    pub option: ConversionOption,
    pub raw_threshold: Option<f64>,
    pub clamped_threshold: Option<f64>,
    pub benefit: f64,
    pub interesting: bool,
    /// 1-based position in the ranking; absent when the threshold failed.
    pub rank: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub method: ThresholdMethod,
    /// In option order EV, HEV, FCEV, DV.
    pub options: Vec<OptionVerdict>,
    /// Ascending clamped threshold, ties in option order; failed options last.
    pub ranking: Vec<ConversionOption>,
    pub net_value: Option<f64>,
    pub net_error: Option<String>,
}

impl DecisionReport {
    pub fn verdict(&self, option: ConversionOption) -> &OptionVerdict {
        &self.options[option.index()]
    }

    pub fn has_errors(&self) -> bool {
        self.options.iter().any(|v| v.error.is_some())
    }

    /// CSV with columns `option,raw_threshold,clamped_threshold,benefit,interesting,rank`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(sig6).unwrap_or_default();
        let mut out = String::from("option,raw_threshold,clamped_threshold,benefit,interesting,rank\n");
        for v in &self.options {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                v.option,
                opt(v.raw_threshold),
                opt(v.clamped_threshold),
                sig6(v.benefit),
                v.interesting,
                v.rank.map(|r| r.to_string()).unwrap_or_default()
            ));
        }
        out
    }
}
