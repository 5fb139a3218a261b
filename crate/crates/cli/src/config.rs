//! Command-line arguments and JSON config files.
//!
//! Every command-specific option can also be given as a key of a flat JSON
//! object passed with `--config`. Keys use the snake_case field names
//! (`kappa0_min`, `n_theta`, ...). Flags take precedence over the file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use kicked_top::symspace::{BlochPoint, Spin};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "kicked-top", version, about = "Kicked-top simulations and tomography post-processing")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Output file (default: `<command>.csv`, `tunnel.json` for tunnel).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for commands that draw random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// JSON config file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement time series of a coherent initial state.
    Evolve(EvolveArgs),
    /// Long-time average entanglement over a range of kick strengths.
    Sweep(SweepArgs),
    /// Tunneling report and overlap series for four qubits.
    Tunnel(TunnelArgs),
    /// Husimi distribution of an evolved state.
    Husimi(HusimiArgs),
    /// Orbits of the classical map.
    Classical(ClassicalArgs),
    /// Entanglement metrics from three-qubit tomography data.
    Tomo(TomoArgs),
}

/// Initial coherent state: a named state or explicit angles.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct StateArgs {
    /// `zero`, `plus_y` or `minus_y` (default: `zero`).
    #[arg(long)]
    pub state: Option<String>,

    /// Polar angle of the initial state; requires `--phi0`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<f64>,

    /// Azimuth of the initial state; requires `--theta0`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<f64>,
}

/// Resolved initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Zero,
    PlusY,
    MinusY,
    Angles(BlochPoint),
}

impl StateSpec {
    pub fn point(self) -> BlochPoint {
        match self {
            Self::Zero => BlochPoint::north(),
            Self::PlusY => BlochPoint::plus_y(),
            Self::MinusY => BlochPoint::minus_y(),
            Self::Angles(p) => p,
        }
    }

    /// Initial states with dedicated closed-form entropy formulas.
    pub fn featured(self) -> Option<kicked_top::exact3::StateId> {
        use kicked_top::exact3::StateId;
        match self {
            Self::Zero => Some(StateId::Zero),
            Self::PlusY => Some(StateId::PlusY),
            _ => None,
        }
    }
}

impl StateArgs {
    pub fn resolve(&self) -> CliResult<StateSpec> {
        match (self.theta0, self.phi0) {
            (Some(theta), Some(phi)) => {
                if self.state.is_some() {
                    return Err(CliError::invalid("give either --state or --theta0/--phi0, not both"));
                }
                Ok(StateSpec::Angles(BlochPoint::new(theta, phi)?))
            }
            (None, None) => match self.state.as_deref().unwrap_or("zero") {
                "zero" => Ok(StateSpec::Zero),
                "plus_y" => Ok(StateSpec::PlusY),
                "minus_y" => Ok(StateSpec::MinusY),
                other => Err(CliError::invalid(format!(
                    "unknown state {other:?}; expected zero, plus_y, minus_y or --theta0/--phi0"
                ))),
            },
            _ => Err(CliError::invalid("--theta0 and --phi0 must be given together")),
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct EvolveArgs {
    /// Number of qubits 2j (default: 3).
    #[arg(long)]
    pub qubits: Option<u32>,

    /// Kick strength.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,

    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    /// Last kick index written (default: 40).
    #[arg(long)]
    pub steps: Option<u64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Number of qubits 2j (default: 3).
    #[arg(long)]
    pub qubits: Option<u32>,

    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    /// First kick strength of the grid.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0_min: Option<f64>,

    /// Last kick strength of the grid.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0_max: Option<f64>,

    /// Grid spacing (default: 0.1).
    #[arg(long)]
    pub kappa0_step: Option<f64>,

    /// Averaging horizon N; kicks 1..=N are averaged (default: 1000).
    #[arg(long)]
    pub horizon: Option<i64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct TunnelArgs {
    /// Kick strength, must be positive.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,

    /// Number of sampled times in the overlap series (default: 201).
    #[arg(long)]
    pub points: Option<usize>,

    /// Series length in units of the tunneling time π/Δ (default: 2).
    #[arg(long)]
    pub span: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct HusimiArgs {
    /// Number of qubits 2j (default: 3).
    #[arg(long)]
    pub qubits: Option<u32>,

    /// Kick strength (default: 0).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,

    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,

    /// Kicks applied before sampling (default: 0).
    #[arg(long)]
    pub steps: Option<u64>,

    /// Polar grid nodes (default: 101).
    #[arg(long)]
    pub n_theta: Option<usize>,

    /// Azimuthal grid nodes (default: 201).
    #[arg(long)]
    pub n_phi: Option<usize>,
}

/// `theta,phi` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Angles(pub f64, pub f64);

fn parse_angles(text: &str) -> Result<Angles, String> {
    let (a, b) = text.split_once(',').ok_or_else(|| format!("expected theta,phi, got {text:?}"))?;
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    Ok(Angles(parse(a)?, parse(b)?))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ClassicalArgs {
    /// Kick strength.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,

    /// Iterations per seed (default: 200).
    #[arg(long)]
    pub steps: Option<usize>,

    /// Seed point `theta,phi`; repeatable (default: the fixed point
    /// `π/2,−π/2` and the north pole).
    #[arg(long = "point", value_parser = parse_angles, allow_hyphen_values = true)]
    pub points: Option<Vec<Angles>>,

    /// Additional uniformly random seeds drawn with `--seed` (default: 0).
    #[arg(long)]
    pub random_points: Option<usize>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct TomoArgs {
    /// CSV with columns `step,label,value`.
    #[arg(long)]
    pub expectations: Option<PathBuf>,

    /// CSV with columns `step,p000..p111` of measured populations; their
    /// readout-corrected values replace the `I`/`Z`-only expectations.
    #[arg(long)]
    pub populations: Option<PathBuf>,

    /// Readout model JSON `{"f0": [...], "f1": [...]}` (default: bundled
    /// device fidelities).
    #[arg(long)]
    pub readout: Option<PathBuf>,

    /// Kick strength of the reference evolution.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa0: Option<f64>,

    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
}

fn to_object(value: &impl Serialize) -> Map<String, Value> {
    match serde_json::to_value(value) {
        Ok(Value::Object(map)) => map,
        _ => unreachable!("argument structs serialize to objects"),
    }
}

fn read_config(path: &Path) -> CliResult<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::invalid(format!("{}: config must be a JSON object", path.display()))),
        Err(e) => Err(CliError::invalid(format!("{}: {e}", path.display()))),
    }
}

/// Overlays the non-null entries of `flags` on `file`. A state given on one
/// side replaces the state given on the other, whichever form it takes.
fn merge(mut file: Map<String, Value>, flags: Map<String, Value>) -> Map<String, Value> {
    let set = |k: &str| flags.get(k).is_some_and(|v| !v.is_null());
    if set("state") {
        file.remove("theta0");
        file.remove("phi0");
    }
    if set("theta0") || set("phi0") {
        file.remove("state");
    }
    for (k, v) in flags {
        if !v.is_null() {
            file.insert(k, v);
        }
    }
    file
}

fn from_object<T: DeserializeOwned>(map: &Map<String, Value>, source: &str) -> CliResult<T> {
    serde_json::from_value(Value::Object(map.clone()))
        .map_err(|e| CliError::invalid(format!("{source}: {e}")))
}

/// Combines flags with the optional config file, rejecting unknown keys.
pub fn resolve<T>(global: &GlobalArgs, args: &T) -> CliResult<(GlobalArgs, T)>
where
    T: Serialize + DeserializeOwned + Default,
{
    let Some(path) = &global.config else {
        return Ok((global.clone(), from_object(&to_object(args), "arguments")?));
    };
    let file = read_config(path)?;
    let known: Vec<String> = to_object(&GlobalArgs::default())
        .keys()
        .cloned()
        .chain(to_object(&T::default()).keys().cloned())
        .collect();
    if let Some(unknown) = file.keys().find(|k| !known.contains(k)) {
        return Err(CliError::invalid(format!("{}: unknown key {unknown:?}", path.display())));
    }
    let mut flags = to_object(global);
    flags.extend(to_object(args));
    let merged = merge(file, flags);
    let source = path.display().to_string();
    let mut g: GlobalArgs = from_object(&merged, &source)?;
    g.config = Some(path.clone());
    Ok((g, from_object(&merged, &source)?))
}

pub fn require<T>(value: Option<T>, name: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::invalid(format!("missing required option --{}", name.replace('_', "-"))))
}

pub fn spin(qubits: u32) -> CliResult<Spin> {
    Ok(Spin::from_qubits(qubits)?)
}
