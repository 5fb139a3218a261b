//! `sweep`: long-time average single-qubit entropy over a grid of kick
//! strengths, normalized by the random-state value.

use kicked_top::exact3::avg_entropy3;
use kicked_top::exact4::avg_entropy4;
use kicked_top::measures::{linear_entropy, reduced_state, rmt_average, RunningMean};
use kicked_top::symspace::{coherent_state, floquet, Evolution, KickedTopParams, Spin, SymState};
use rayon::prelude::*;

use super::out_path;
use crate::config::{require, spin, GlobalArgs, SweepArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, CsvOut};

/// `min + i·step` up to `max`, tolerating round-off at the last node.
fn grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(CliError::invalid("kappa0 grid bounds must be finite"));
    }
    if step <= 0.0 {
        return Err(CliError::invalid(format!("--kappa0-step must be positive, got {step}")));
    }
    if max < min {
        return Err(CliError::invalid(format!("--kappa0-max {max} is below --kappa0-min {min}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

/// Mean entropy over kicks `1..=horizon`.
fn numeric_average(spin: Spin, psi0: &SymState, kappa0: f64, horizon: u64) -> CliResult<f64> {
    let u = floquet(&KickedTopParams::new(spin, kappa0)?);
    let mut mean = RunningMean::new();
    for psi in Evolution::new(&u, psi0.clone())?.skip(1).take(horizon as usize) {
        mean.push(linear_entropy(&reduced_state(&psi, 1)?));
    }
    Ok(mean.mean()?)
}

pub fn run(global: &GlobalArgs, args: &SweepArgs) -> CliResult<()> {
    let qubits = args.qubits.unwrap_or(3);
    if qubits < 2 {
        return Err(CliError::invalid("sweep needs at least 2 qubits"));
    }
    let horizon = args.horizon.unwrap_or(1000);
    if horizon <= 0 {
        return Err(CliError::invalid(format!("--horizon must be positive, got {horizon}")));
    }
    let kappas = grid(
        require(args.kappa0_min, "kappa0_min")?,
        require(args.kappa0_max, "kappa0_max")?,
        args.kappa0_step.unwrap_or(0.1),
    )?;
    let state = args.state.resolve()?;
    let spin = spin(qubits)?;
    let psi0 = coherent_state(spin, state.point())?;
    let rmt = rmt_average(qubits as usize)?;
    let closed = state.featured().filter(|_| qubits == 3 || qubits == 4);
    if closed.is_none() {
        log::warn!("no closed-form average for this state and qubit count; S_avg_closed is omitted");
    }

    let rows: Vec<(f64, f64, Option<f64>)> = kappas
        .par_iter()
        .map(|&kappa0| {
            let numeric = numeric_average(spin, &psi0, kappa0, horizon as u64)?;
            let exact = match closed {
                Some(id) => {
                    let avg = if qubits == 3 { avg_entropy3(id, kappa0)? } else { avg_entropy4(id, kappa0)? };
                    if avg.resonant {
                        log::warn!("kappa0 = {kappa0} is resonant; S_avg_closed is the exact resonant value");
                    }
                    Some(avg.value)
                }
                None => None,
            };
            Ok((kappa0, numeric, exact))
        })
        .collect::<CliResult<_>>()?;

    let mut header = vec!["kappa0", "S_avg_numeric"];
    if closed.is_some() {
        header.push("S_avg_closed");
    }
    header.push("S_rmt_normalized");
    let path = out_path(global, "sweep.csv");
    let mut out = CsvOut::create(&path, &header)?;
    for (kappa0, numeric, exact) in rows {
        let mut row = vec![fmt_f64(kappa0), fmt_f64(numeric)];
        row.extend(exact.map(fmt_f64));
        row.push(fmt_f64(numeric / rmt));
        out.record(row)?;
    }
    out.finish()
}
