//! Command implementations behind the `reachavoid` binary.
//!
//! Every command writes its report to the given writer and returns a
//! [`CliError`] whose [`CliError::exit_code`] follows the contract
//! 0 success, 1 load/validation failure, 2 solver precondition failure,
//! 3 comparison failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use reachavoid::fixtures::PLANE_FLIGHT_JSON;
use reachavoid::simulate::simulate_episodes;
use reachavoid::{
    estimate_reach_avoid, extract_policy, find_separation, first_action_filler, solve_improved,
    validate_model, Estimate, ExponentialRate, LoadError, MarkovPolicy, Model, ModelFile,
    Separation, SolveError, SolveResult, StopRule, TimeGrid,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("invalid model:\n{0}")]
    Invalid(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid policy file {path}: {reason}")]
    Policy { path: String, reason: String },
    #[error("{0}")]
    Solve(#[from] SolveError),
    #[error("{failed} of {total} states failed the comparison")]
    Comparison { failed: usize, total: usize },
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Load(_)
            | CliError::Invalid(_)
            | CliError::Config(_)
            | CliError::Policy { .. }
            | CliError::Output { .. } => 1,
            CliError::Solve(SolveError::InvalidModel(_)) => 1,
            CliError::Solve(_) => 2,
            CliError::Comparison { .. } => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "reachavoid",
    version,
    about = "Maximal reach-avoid probabilities for semi-Markov decision processes with epoch-varying obstacles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the model axioms and print the separation constants.
    Validate(RunConfig),
    /// Solve for W(x, 0, t) and write the value curves and the policy.
    Solve(SolveArgs),
    /// Value curves over [0, T] for every scenario of the model file.
    Sweep(RunConfig),
    /// Solver value versus a Monte Carlo estimate under the extracted (or a given) policy.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateArg {
    /// F(t) = 1 - exp(-t / mu)
    InverseMean,
    /// F(t) = 1 - exp(-mu t)
    Literal,
}

/// `bound` or `residual:TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopArg(pub StopRule);

impl FromStr for StopArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "bound" {
            return Ok(StopArg(StopRule::Bound));
        }
        match s.strip_prefix("residual:").map(str::parse::<f64>) {
            Some(Ok(tol)) if tol >= 0.0 => Ok(StopArg(StopRule::Residual(tol))),
            _ => Err(format!("expected `bound` or `residual:TOL`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Model file (JSON); the bundled plane-flight model when omitted.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Obstacle scenario from the model file's `scenarios`.
    #[arg(long)]
    pub scenario: Option<String>,
    /// Horizon T, overriding the model file.
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Number of grid steps M on [0, T].
    #[arg(long, default_value_t = 720)]
    pub grid: usize,
    /// Target accuracy of the solver.
    #[arg(long, default_value_t = 1.02e-5)]
    pub epsilon: f64,
    /// Jump-separation window.
    #[arg(long, default_value_t = 1.0)]
    pub delta: f64,
    /// Stopping rule: `bound` or `residual:TOL`.
    #[arg(long, default_value = "residual:1e-9")]
    pub stop: StopArg,
    /// Monte Carlo episodes per state.
    #[arg(long, default_value_t = 100_000)]
    pub episodes: u64,
    /// Seed of the simulator.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reading of the `mu` parameter of exponential sojourns, overriding the model file.
    #[arg(long, value_enum)]
    pub exponential_rate: Option<RateArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// Where to write the extracted policy (JSON).
    #[arg(long)]
    pub policy_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub config: RunConfig,
    /// Simulate this policy file instead of the extracted policy.
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Per-episode log (CSV).
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Allowance added to three standard errors.
    #[arg(long, default_value_t = 0.005)]
    pub tolerance: f64,
}

impl RunConfig {
    fn check(&self) -> Result<(), CliError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(CliError::Config(format!(
                "--epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if self.grid < 2 {
            return Err(CliError::Config(format!(
                "--grid must be at least 2, got {}",
                self.grid
            )));
        }
        if self.episodes < 1 {
            return Err(CliError::Config("--episodes must be at least 1".into()));
        }
        Ok(())
    }

    fn model_file(&self) -> Result<ModelFile, CliError> {
        let mut file = match &self.model {
            Some(path) => ModelFile::read(path)?,
            None => ModelFile::parse(PLANE_FLIGHT_JSON)?,
        };
        if let Some(rate) = self.exponential_rate {
            file.set_exponential_rate(match rate {
                RateArg::InverseMean => ExponentialRate::InverseMean,
                RateArg::Literal => ExponentialRate::Literal,
            });
        }
        Ok(file)
    }

    fn build(&self, file: &ModelFile, scenario: Option<&str>) -> Result<Model, CliError> {
        let model = file.build(scenario)?;
        Ok(match self.horizon {
            Some(t) => model.with_horizon(t).map_err(LoadError::from)?,
            None => model,
        })
    }

    fn model(&self) -> Result<Model, CliError> {
        self.build(&self.model_file()?, self.scenario.as_deref())
    }

    fn solve(&self, model: &Model) -> Result<SolveResult, CliError> {
        let grid = TimeGrid::new(model.horizon(), self.grid)?;
        Ok(solve_improved(
            model,
            grid,
            self.epsilon,
            self.delta,
            self.stop.0,
        )?)
    }

    fn label(&self) -> &str {
        self.scenario.as_deref().unwrap_or("default")
    }
}

/// Six significant digits; scientific notation for tiny magnitudes.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{v:.5e}");
    }
    format!("{v:.*}", (5 - magnitude).max(0) as usize)
}

/// Non-target states outside the epoch-0 obstacle set.
pub fn regular_states(model: &Model) -> Vec<usize> {
    model
        .non_target_states()
        .filter(|x| !model.obstacle_at(0).contains(x))
        .collect()
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let result = match path {
        Some(p) => fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    };
    result.map_err(|source| CliError::Output {
        path: path.map_or("<stdout>".into(), |p| p.display().to_string()),
        source,
    })
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(config) => cmd_validate(&config, out),
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Sweep(config) => cmd_sweep(&config, out),
        Command::Compare(args) => cmd_compare(&args, out),
    }
}

pub fn cmd_validate(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let model = config.model()?;
    let report = validate_model(&model);
    if !report.is_valid() {
        return Err(CliError::Invalid(report.to_string()));
    }
    let text = match find_separation(&model, config.delta) {
        Separation::Separated(c) => format!(
            "valid; δ={}, ε0={}, K̃={}, β={}\n",
            c.delta,
            sig6(c.epsilon0),
            c.k_tilde,
            sig6(c.beta)
        ),
        Separation::NotSeparated { delta, max_mass } => format!(
            "valid; not jump-separated at δ={} (max mass {}); try a smaller δ such as {}\n",
            delta,
            sig6(max_mass),
            delta / 2.0
        ),
    };
    emit(out, config.out.as_deref(), &text)
}

/// Rows `[scenario,]state,t,value` of layer 0, without a header.
fn value_rows(
    model: &Model,
    result: &SolveResult,
    grid: &TimeGrid,
    scenario: Option<&str>,
) -> String {
    let mut csv = String::new();
    for x in 0..model.num_states() {
        for (m, v) in result.value.values[x].iter().enumerate() {
            if let Some(s) = scenario {
                write!(csv, "{s},").unwrap();
            }
            writeln!(csv, "{},{},{}", model.state_name(x), grid.time(m), v).unwrap();
        }
    }
    csv
}

/// One action name per state, or a distribution over action names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicyEntry {
    Action(String),
    Mixed(IndexMap<String, f64>),
}

/// A Markov policy by names: `layers[n][state]`. Epochs past the last layer
/// repeat the schedule's period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyFile {
    pub layers: Vec<IndexMap<String, PolicyEntry>>,
}

impl PolicyFile {
    pub fn from_policy(policy: &MarkovPolicy, model: &Model) -> Self {
        let layers = (0..policy.layers())
            .map(|n| {
                (0..model.num_states())
                    .map(|x| {
                        let entry = match policy.action(n, x) {
                            Some(a) => PolicyEntry::Action(model.action_name(x, a).to_string()),
                            None => PolicyEntry::Mixed(
                                policy
                                    .plan(n, x)
                                    .iter()
                                    .enumerate()
                                    .map(|(a, &p)| (model.action_name(x, a).to_string(), p))
                                    .collect(),
                            ),
                        };
                        (model.state_name(x).to_string(), entry)
                    })
                    .collect()
            })
            .collect();
        Self { layers }
    }

    pub fn to_policy(&self, model: &Model) -> Result<MarkovPolicy, String> {
        let mut plans = Vec::with_capacity(self.layers.len());
        for (n, layer) in self.layers.iter().enumerate() {
            if let Some(name) = layer.keys().find(|s| model.state_index(s).is_none()) {
                return Err(format!("layer {n}: unknown state {name:?}"));
            }
            let mut plan = Vec::with_capacity(model.num_states());
            for x in 0..model.num_states() {
                let state = model.state_name(x);
                let entry = layer
                    .get(state)
                    .ok_or_else(|| format!("layer {n}: no entry for state {state:?}"))?;
                let index = |action: &str| {
                    model.action_index(x, action).ok_or_else(|| {
                        format!("layer {n}: unknown action {action:?} for state {state:?}")
                    })
                };
                let mut p = vec![0.0; model.num_actions(x)];
                match entry {
                    PolicyEntry::Action(a) => p[index(a)?] = 1.0,
                    PolicyEntry::Mixed(mix) => {
                        for (a, &q) in mix {
                            p[index(a)?] += q;
                        }
                    }
                }
                plan.push(p);
            }
            plans.push(plan);
        }
        MarkovPolicy::new(model, plans).map_err(|e| e.to_string())
    }
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = &args.config;
    config.check()?;
    let model = config.model()?;
    let result = config.solve(&model)?;
    let grid = TimeGrid::new(model.horizon(), config.grid)?;

    if let Some(path) = &config.out {
        let csv = String::from("state,t,value\n") + &value_rows(&model, &result, &grid, None);
        emit(out, Some(path), &csv)?;
    }
    if let Some(path) = &args.policy_out {
        let policy = extract_policy(&result, &model, first_action_filler(&model))?;
        let json = serde_json::to_string_pretty(&PolicyFile::from_policy(&policy, &model))
            .expect("policy serializes");
        emit(out, Some(path), &(json + "\n"))?;
    }

    let t = model.horizon();
    let mut summary = format!(
        "scenario {}, T={t}, M={}, δ={}, ε={}\n",
        config.label(),
        config.grid,
        config.delta,
        config.epsilon
    );
    for x in regular_states(&model) {
        writeln!(
            summary,
            "W({},0,{t}) = {}",
            model.state_name(x),
            sig6(result.value.at_horizon(x))
        )
        .unwrap();
    }
    writeln!(
        summary,
        "iterations {} (planned {}), error bound {}, residual {}",
        result.iterations,
        result.planned_iterations,
        sig6(result.error_bound),
        sig6(result.residual)
    )
    .unwrap();
    emit(out, None, &summary)
}

pub fn cmd_sweep(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    config.check()?;
    let file = config.model_file()?;
    let scenarios: Vec<Option<&str>> = match config.scenario.as_deref() {
        Some(s) => vec![Some(s)],
        None if file.scenario_names().next().is_some() => file.scenario_names().map(Some).collect(),
        None => vec![None],
    };
    let mut csv = String::from("scenario,state,t,value\n");
    for scenario in scenarios {
        let model = config.build(&file, scenario)?;
        let result = config.solve(&model)?;
        let grid = TimeGrid::new(model.horizon(), config.grid)?;
        csv.push_str(&value_rows(
            &model,
            &result,
            &grid,
            Some(scenario.unwrap_or("default")),
        ));
    }
    emit(out, config.out.as_deref(), &csv)
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub state: String,
    pub solver: f64,
    pub estimate: Estimate,
    pub pass: bool,
}

pub fn compare_states(
    model: &Model,
    result: &SolveResult,
    policy: &MarkovPolicy,
    episodes: u64,
    seed: u64,
    tolerance: f64,
) -> Vec<Comparison> {
    regular_states(model)
        .into_iter()
        .map(|x| {
            let solver = result.value.at_horizon(x);
            let estimate = estimate_reach_avoid(model, policy, x, model.horizon(), episodes, seed);
            Comparison {
                state: model.state_name(x).to_string(),
                solver,
                pass: (estimate.p_hat - solver).abs() <= 3.0 * estimate.std_error() + tolerance,
                estimate,
            }
        })
        .collect()
}

pub fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = &args.config;
    config.check()?;
    let model = config.model()?;
    let result = config.solve(&model)?;
    let policy = match &args.policy {
        Some(path) => {
            let fail = |reason: String| CliError::Policy {
                path: path.display().to_string(),
                reason,
            };
            let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
            let file: PolicyFile = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
            file.to_policy(&model).map_err(fail)?
        }
        None => extract_policy(&result, &model, first_action_filler(&model))?,
    };

    if let Some(path) = &args.log {
        let mut log = String::from("state,episode,outcome,jumps,final_time\n");
        for x in regular_states(&model) {
            let outcomes = simulate_episodes(
                &model,
                &policy,
                x,
                model.horizon(),
                config.episodes,
                config.seed,
            );
            for (i, o) in outcomes.iter().enumerate() {
                writeln!(
                    log,
                    "{},{i},{},{},{}",
                    model.state_name(x),
                    o.label(),
                    o.jumps,
                    o.final_time
                )
                .unwrap();
            }
        }
        emit(out, Some(path), &log)?;
    }

    let rows = compare_states(
        &model,
        &result,
        &policy,
        config.episodes,
        config.seed,
        args.tolerance,
    );
    let mut table = format!(
        "scenario {}, T={}, episodes {}, seed {}\n{:<8} {:>10} {:>10} {:>10} {:>10} {:>10}  verdict\n",
        config.label(),
        model.horizon(),
        config.episodes,
        config.seed,
        "state",
        "solver",
        "estimate",
        "ci_low",
        "ci_high",
        "se"
    );
    for r in &rows {
        writeln!(
            table,
            "{:<8} {:>10} {:>10} {:>10} {:>10} {:>10}  {}",
            r.state,
            sig6(r.solver),
            sig6(r.estimate.p_hat),
            sig6(r.estimate.ci95.0),
            sig6(r.estimate.ci95.1),
            sig6(r.estimate.std_error()),
            if r.pass { "pass" } else { "FAIL" }
        )
        .unwrap();
    }
    emit(out, None, &table)?;
    if let Some(path) = &config.out {
        emit(out, Some(path), &table)?;
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::Comparison {
            failed,
            total: rows.len(),
        });
    }
    Ok(())
}
