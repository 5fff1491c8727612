//! The `mginf` command line: scenario files on disk in, CSV and JSON out.
//!
//! Exit codes: 0 success, 1 input error, 2 computation error, 3 simulation
//! comparison failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::costbenefit::{ConversionOption, CostProfile, CostStep, DecisionInput, DecisionReport, FleetMixPolicy, OptionEconomics};
use crate::error::Error;
use crate::estimation::{self, ArrivalLog, HazardBin, ServiceLog};
use crate::service_time::ServiceTimeModel;
use crate::simulator::{self, ComparisonReport, SimulationConfig, SimulationResult};
use crate::transient::{self, CurveKind, Monotonicity, QueueScenario, StabilityReport, TransientCurve};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;
pub const EXIT_COMPARISON: i32 = 3;

const DEFAULT_REPLICATIONS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "mginf", version, about = "M|G|∞ analytics for idle-vehicle recycling and dismantling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transient curves and the stability condition for one option's service.
    Analyze(AnalyzeArgs),
    /// Minimum-benefit thresholds and ranking for all four options.
    Decide(DecideArgs),
    /// Monte Carlo run compared against the analytic curves.
    Simulate(SimulateArgs),
    /// Estimate the arrival rate or the service hazard from a CSV log.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub scenario: PathBuf,
    /// Option whose service time defines the queue (default: EV, or the only option present).
    #[arg(long)]
    pub option: Option<ConversionOption>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Transient,
    Fleet,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub option: Option<ConversionOption>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Minimum fraction of grid points whose analytic value must fall inside the interval.
    #[arg(long, default_value_t = 0.95)]
    pub coverage: f64,
    /// Arrival rate used for the analytic reference curves instead of the scenario's.
    #[arg(long)]
    pub reference_lambda: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV with a `t` column (arrivals) or a `duration` column (services).
    pub log: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub window_start: f64,
    /// End of the observation window (default: last timestamp).
    #[arg(long)]
    pub window_end: Option<f64>,
    /// Number of equal bins for the dispersion index of arrivals.
    #[arg(long)]
    pub dispersion_bins: Option<usize>,
    /// Comma-separated bin edges for the occurrence/exposure hazard.
    #[arg(long, value_delimiter = ',')]
    pub hazard_edges: Option<Vec<f64>>,
    #[command(flatten)]
    pub out: OutArgs,
}

/// Failure carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn computation(err: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_COMPUTATION,
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---------------------------------------------------------------------------
// scenario files

/// A validated scenario file.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub lambda: f64,
    pub horizon_days: f64,
    pub policy: Option<PolicySpec>,
    pub options: BTreeMap<ConversionOption, OptionSpec>,
    pub grid: Option<GridSpec>,
    pub simulation: Option<SimulationSpec>,
    /// Reference thresholds echoed next to the computed ones.
    pub expected: Option<BTreeMap<ConversionOption, f64>>,
}

// Option maps keep string keys so that deserialization errors carry the key in their path.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    lambda: f64,
    horizon_days: f64,
    #[serde(default)]
    policy: Option<PolicySpec>,
    options: BTreeMap<String, OptionSpec>,
    #[serde(default)]
    grid: Option<GridSpec>,
    #[serde(default)]
    simulation: Option<SimulationSpec>,
    #[serde(default)]
    expected: Option<BTreeMap<String, f64>>,
}

fn option_keys<V>(section: &str, map: BTreeMap<String, V>) -> CliResult<BTreeMap<ConversionOption, V>> {
    map.into_iter()
        .map(|(k, v)| {
            let tag: ConversionOption = k
                .parse()
                .map_err(|e| CliError::input(format!("invalid scenario at `{section}.{k}`: {e}")))?;
            if tag.as_str() != k {
                return Err(CliError::input(format!(
                    "invalid scenario at `{section}.{k}`: option keys are upper case ({tag})"
                )));
            }
            Ok((tag, v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionSpec {
    pub service: ServiceTimeModel,
    #[serde(default)]
    pub benefit: f64,
    #[serde(default)]
    pub cost_total: Option<f64>,
    #[serde(default)]
    pub cost_profile: Option<Vec<CostStep>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub max_t: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default)]
    pub replications: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mode: Option<Mode>,
}

impl ScenarioFile {
    /// Parses and validates a scenario; errors name the offending JSON path.
    pub fn parse(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::input(format!("invalid scenario at `{path}`: {}", e.inner()))
        })?;
        let file = ScenarioFile {
            lambda: raw.lambda,
            horizon_days: raw.horizon_days,
            policy: raw.policy,
            options: option_keys("options", raw.options)?,
            grid: raw.grid,
            simulation: raw.simulation,
            expected: raw.expected.map(|m| option_keys("expected", m)).transpose()?,
        };
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(CliError::input(format!("invalid scenario at `lambda`: must be finite and >= 0, got {}", self.lambda)));
        }
        if !(self.horizon_days.is_finite() && self.horizon_days > 0.0) {
            return Err(CliError::input(format!(
                "invalid scenario at `horizon_days`: must be finite and > 0, got {}",
                self.horizon_days
            )));
        }
        if self.options.is_empty() {
            return Err(CliError::input("invalid scenario at `options`: no options given"));
        }
        if let Some(p) = self.policy {
            FleetMixPolicy::new(p.p, p.q, p.r).map_err(|e| CliError::input(format!("invalid scenario at `policy`: {e}")))?;
        }
        for (tag, spec) in &self.options {
            spec.economics(*tag)
                .map_err(|e| CliError::input(format!("invalid scenario at `options.{tag}`: {e}")))?;
        }
        if let Some(g) = self.grid {
            if let Some(n) = g.points {
                if n < 2 {
                    return Err(CliError::input("invalid scenario at `grid.points`: need at least 2"));
                }
            }
            if let Some(m) = g.max_t {
                if !(m.is_finite() && m > 0.0) {
                    return Err(CliError::input("invalid scenario at `grid.max_t`: must be finite and > 0"));
                }
            }
        }
        if let Some(SimulationSpec { replications: Some(0), .. }) = self.simulation {
            return Err(CliError::input("invalid scenario at `simulation.replications`: must be >= 1"));
        }
        Ok(())
    }

    fn policy(&self) -> CliResult<FleetMixPolicy> {
        let p = self
            .policy
            .ok_or_else(|| CliError::input("invalid scenario at `policy`: required for this command"))?;
        FleetMixPolicy::new(p.p, p.q, p.r).map_err(|e| CliError::input(e.to_string()))
    }

    /// All four options as a decision input.
    pub fn decision_input(&self) -> CliResult<DecisionInput> {
        let policy = self.policy()?;
        for tag in ConversionOption::ALL {
            if !self.options.contains_key(&tag) {
                return Err(CliError::input(format!("invalid scenario at `options`: option {tag} missing")));
            }
        }
        let options = self
            .options
            .iter()
            .map(|(tag, spec)| spec.economics(*tag))
            .collect::<Result<Vec<_>, Error>>()
            .map_err(|e| CliError::input(e.to_string()))?;
        DecisionInput::new(self.lambda, self.horizon_days, policy, options).map_err(|e| CliError::input(e.to_string()))
    }

    /// Queue driven by the arrival rate and one option's service time.
    pub fn queue(&self, option: Option<ConversionOption>) -> CliResult<(ConversionOption, QueueScenario)> {
        let tag = match option {
            Some(tag) => tag,
            None if self.options.len() == 1 => *self.options.keys().next().expect("one option"),
            None => ConversionOption::Ev,
        };
        let spec = self
            .options
            .get(&tag)
            .ok_or_else(|| CliError::input(format!("invalid scenario at `options`: option {tag} missing")))?;
        let q = QueueScenario::new(self.lambda, spec.service.clone()).map_err(|e| CliError::input(e.to_string()))?;
        Ok((tag, q))
    }

    fn grid(&self, points_flag: Option<usize>) -> CliResult<Vec<f64>> {
        let points = points_flag
            .or(self.grid.and_then(|g| g.points))
            .unwrap_or(transient::DEFAULT_GRID_POINTS);
        let max_t = self.grid.and_then(|g| g.max_t).unwrap_or(self.horizon_days);
        transient::uniform_grid(max_t, points).map_err(|e| CliError::input(e.to_string()))
    }
}

impl OptionSpec {
    fn economics(&self, option: ConversionOption) -> Result<OptionEconomics, Error> {
        let cost = match (self.cost_total, &self.cost_profile) {
            (Some(_), Some(_)) => {
                return Err(Error::Domain("give either cost_total or cost_profile, not both".into()))
            }
            (Some(c), None) => CostProfile::Total(c),
            (None, Some(steps)) => CostProfile::Steps(steps.clone()),
            (None, None) => CostProfile::Total(0.0),
        };
        OptionEconomics::new(option, self.service.clone(), self.benefit, cost)
    }
}

// ---------------------------------------------------------------------------
// outputs

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

#[derive(Debug, Serialize)]
struct AnalyzeOutput<'a> {
    satisfied: bool,
    first_violation_t: Option<f64>,
    rho: f64,
    applicable: bool,
    option: ConversionOption,
    lambda: f64,
    empty_probability_trend: Monotonicity,
    mean_in_system_trend: Monotonicity,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

fn analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let scenario = ScenarioFile::load(&args.scenario)?;
    let (tag, queue) = scenario.queue(args.option)?;
    let grid = scenario.grid(args.grid_points)?;
    let p = transient::transient_curve(&queue, &grid, CurveKind::EmptyProbability).map_err(CliError::computation)?;
    let m = transient::transient_curve(&queue, &grid, CurveKind::MeanInSystem).map_err(CliError::computation)?;
    let StabilityReport {
        satisfied,
        first_violation_t,
        rho,
        applicable,
    } = transient::stability_check(&queue, &grid).map_err(CliError::computation)?;
    let out = AnalyzeOutput {
        satisfied,
        first_violation_t,
        rho,
        applicable,
        option: tag,
        lambda: queue.lambda(),
        empty_probability_trend: p.monotonicity,
        mean_in_system_trend: m.monotonicity,
        _marker: std::marker::PhantomData,
    };
    write_file(&args.out.out, "empty_probability.csv", &p.to_csv())?;
    write_file(&args.out.out, "mean_in_system.csv", &m.to_csv())?;
    let json = to_json(&out);
    write_file(&args.out.out, "stability.json", &json)?;
    print!("{json}");
    Ok(())
}

#[derive(Debug, Serialize)]
struct AuditEntry {
    option: ConversionOption,
    expected: f64,
    computed: Option<f64>,
}

#[derive(Debug, Serialize)]
struct DecideOutput {
    lambda: f64,
    horizon_days: f64,
    #[serde(flatten)]
    report: DecisionReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    paper_audit: Vec<AuditEntry>,
}

fn decide(args: &DecideArgs) -> CliResult<()> {
    let scenario = ScenarioFile::load(&args.scenario)?;
    let input = scenario.decision_input()?;
    let report = input.decide();
    let paper_audit = scenario
        .expected
        .iter()
        .flatten()
        .map(|(option, expected)| AuditEntry {
            option: *option,
            expected: *expected,
            computed: report.verdict(*option).clamped_threshold,
        })
        .collect();
    let csv = report.to_csv();
    let failed = report
        .options
        .iter()
        .filter_map(|v| v.error.as_ref().map(|e| format!("{}: {e}", v.option)))
        .collect::<Vec<_>>();
    let out = DecideOutput {
        lambda: input.lambda(),
        horizon_days: input.horizon(),
        report,
        paper_audit,
    };
    write_file(&args.out.out, "decision.csv", &csv)?;
    write_file(&args.out.out, "decision.json", &to_json(&out))?;
    print!("{csv}");
    if !failed.is_empty() {
        return Err(CliError::computation(failed.join("; ")));
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct SimulateOutput<'a> {
    passed: bool,
    empty_probability: &'a ComparisonReport,
    mean_in_system: &'a ComparisonReport,
    result: &'a SimulationResult,
}

fn simulate(args: &SimulateArgs) -> CliResult<bool> {
    let scenario = ScenarioFile::load(&args.scenario)?;
    if !(args.coverage.is_finite() && (0.0..=1.0).contains(&args.coverage)) {
        return Err(CliError::input(format!("--coverage must lie in [0, 1], got {}", args.coverage)));
    }
    let spec = scenario.simulation.unwrap_or(SimulationSpec {
        replications: None,
        seed: None,
        mode: None,
    });
    let mode = args.mode.or(spec.mode).unwrap_or(Mode::Transient);
    let replications = args.replications.or(spec.replications).unwrap_or(DEFAULT_REPLICATIONS);
    let seed = args.seed.or(spec.seed).unwrap_or(0);
    let grid = scenario.grid(args.grid_points)?;
    let horizon = match mode {
        Mode::Transient => *grid.last().expect("grid has points"),
        Mode::Fleet => scenario.horizon_days,
    };
    let config = SimulationConfig::new(horizon, replications, seed, grid.clone());
    let config_err = |e: Error| match e {
        Error::Config(_) => CliError::input(e.to_string()),
        other => CliError::computation(other),
    };

    let (result, analytic_p, analytic_m): (SimulationResult, TransientCurve, TransientCurve) = match mode {
        Mode::Transient => {
            let (_, queue) = scenario.queue(args.option)?;
            let reference = match args.reference_lambda {
                Some(l) => QueueScenario::new(l, queue.service().clone()).map_err(|e| CliError::input(e.to_string()))?,
                None => queue.clone(),
            };
            let result = simulator::simulate_transient(&queue, &config).map_err(config_err)?;
            let p = transient::transient_curve(&reference, &grid, CurveKind::EmptyProbability).map_err(CliError::computation)?;
            let m = transient::transient_curve(&reference, &grid, CurveKind::MeanInSystem).map_err(CliError::computation)?;
            (result, p, m)
        }
        Mode::Fleet => {
            let input = scenario.decision_input()?;
            let result = simulator::simulate_fleet(&input, &config).map_err(config_err)?;
            let reference = match args.reference_lambda {
                Some(l) => DecisionInput::new(l, input.horizon(), *input.policy(), input.options().to_vec())
                    .map_err(|e| CliError::input(e.to_string()))?,
                None => input,
            };
            let p = simulator::fleet_analytic_curve(&reference, &grid, CurveKind::EmptyProbability).map_err(CliError::computation)?;
            let m = simulator::fleet_analytic_curve(&reference, &grid, CurveKind::MeanInSystem).map_err(CliError::computation)?;
            (result, p, m)
        }
    };
    let cmp_p = simulator::compare(&analytic_p, &result.empty_probability, args.coverage).map_err(CliError::computation)?;
    let cmp_m = simulator::compare(&analytic_m, &result.mean_in_system, args.coverage).map_err(CliError::computation)?;
    let passed = cmp_p.passed && cmp_m.passed;

    write_file(
        &args.out.out,
        "simulation_empty_probability.csv",
        &simulator::comparison_csv(&analytic_p, &result.empty_probability),
    )?;
    write_file(
        &args.out.out,
        "simulation_mean_in_system.csv",
        &simulator::comparison_csv(&analytic_m, &result.mean_in_system),
    )?;
    let out = SimulateOutput {
        passed,
        empty_probability: &cmp_p,
        mean_in_system: &cmp_m,
        result: &result,
    };
    write_file(&args.out.out, "simulation.json", &to_json(&out))?;
    println!(
        "{} coverage: empty {:.4}, mean {:.4} (required {}); max deviation: empty {:.6}, mean {:.6}",
        if passed { "PASS" } else { "FAIL" },
        cmp_p.coverage,
        cmp_m.coverage,
        args.coverage,
        cmp_p.max_abs_deviation,
        cmp_m.max_abs_deviation
    );
    Ok(passed)
}

#[derive(Debug, Default, Serialize)]
struct EstimateOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dispersion_index: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hazard_exponential: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hazard_bins: Option<Vec<HazardBin>>,
}

enum LogColumn {
    Arrivals(Vec<f64>),
    Durations(Vec<f64>),
}

fn read_log(path: &Path) -> CliResult<LogColumn> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::input(format!("cannot read header of {}: {e}", path.display())))?
        .clone();
    let (index, arrivals) = if let Some(i) = headers.iter().position(|h| h == "t") {
        (i, true)
    } else if let Some(i) = headers.iter().position(|h| h == "duration") {
        (i, false)
    } else {
        return Err(CliError::input(format!(
            "{}: expected a `t` or `duration` column",
            path.display()
        )));
    };
    let mut values = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let field = record.get(index).unwrap_or("");
        let v: f64 = field
            .parse()
            .map_err(|_| CliError::input(format!("{}: row {}: not a number: {field:?}", path.display(), line + 2)))?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::input(format!("{}: log has no rows", path.display())));
    }
    Ok(if arrivals {
        LogColumn::Arrivals(values)
    } else {
        LogColumn::Durations(values)
    })
}

fn estimate(args: &EstimateArgs) -> CliResult<()> {
    let mut out = EstimateOutput::default();
    match read_log(&args.log)? {
        LogColumn::Arrivals(stamps) => {
            let end = args
                .window_end
                .unwrap_or_else(|| stamps.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            let log = ArrivalLog::new(stamps, (args.window_start, end)).map_err(|e| CliError::input(e.to_string()))?;
            out.lambda = Some(estimation::estimate_lambda(&log).map_err(|e| CliError::input(e.to_string()))?);
            if let Some(bins) = args.dispersion_bins {
                out.dispersion_index =
                    Some(estimation::dispersion_check(&log, bins).map_err(|e| CliError::input(e.to_string()))?);
            }
        }
        LogColumn::Durations(durations) => {
            let log = ServiceLog::new(durations).map_err(|e| CliError::input(e.to_string()))?;
            out.hazard_exponential =
                Some(estimation::estimate_exponential_hazard(&log).map_err(|e| CliError::input(e.to_string()))?);
            if let Some(edges) = &args.hazard_edges {
                out.hazard_bins = Some(
                    estimation::estimate_empirical_hazard(&log, edges).map_err(|e| CliError::input(e.to_string()))?,
                );
            }
        }
    }
    let json = to_json(&out);
    write_file(&args.out.out, "estimates.json", &json)?;
    print!("{json}");
    Ok(())
}

/// Runs one parsed command and returns its exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a).map(|_| EXIT_OK),
        Command::Decide(a) => decide(a).map(|_| EXIT_OK),
        Command::Simulate(a) => simulate(a).map(|passed| if passed { EXIT_OK } else { EXIT_COMPARISON }),
        Command::Estimate(a) => estimate(a).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
