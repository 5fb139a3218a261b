//! `tomo`: reconstructs three-qubit states from Pauli expectation tables and
//! compares them with the kicked-top evolution.

use std::collections::BTreeMap;
use std::path::Path;

use kicked_top::measures::{concurrence, linear_entropy, reduced_state, DensityMatrix};
use kicked_top::symspace::{coherent_state, evolve, floquet, symmetric_to_qubits, KickedTopParams, SymState};
use kicked_top::tomo::{
    correct_populations, pipeline_metrics, reconstruct, PopulationVector, ReadoutModel, TOMO_QUBITS,
};
use rayon::prelude::*;
use serde::Deserialize;

use super::out_path;
use crate::config::{require, spin, GlobalArgs, TomoArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, CsvOut};

type Table = BTreeMap<String, f64>;

#[derive(Debug, Deserialize)]
struct ExpectationRow {
    step: u64,
    label: String,
    value: f64,
}

fn read_expectations(path: &Path) -> CliResult<BTreeMap<u64, Table>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::csv(path, e))?;
    let mut steps: BTreeMap<u64, Table> = BTreeMap::new();
    for row in reader.deserialize() {
        let row: ExpectationRow = row.map_err(|e| CliError::csv(path, e))?;
        if steps.entry(row.step).or_default().insert(row.label.clone(), row.value).is_some() {
            return Err(CliError::invalid(format!(
                "{}: label {} repeated at step {}",
                path.display(),
                row.label,
                row.step
            )));
        }
    }
    if steps.is_empty() {
        return Err(CliError::invalid(format!("{}: no expectation rows", path.display())));
    }
    Ok(steps)
}

fn population_header() -> Vec<String> {
    std::iter::once("step".to_string())
        .chain((0..1 << TOMO_QUBITS).map(|b| format!("p{b:0width$b}", width = TOMO_QUBITS)))
        .collect()
}

fn read_populations(path: &Path) -> CliResult<BTreeMap<u64, PopulationVector>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::csv(path, e))?;
    let header: Vec<String> =
        reader.headers().map_err(|e| CliError::csv(path, e))?.iter().map(String::from).collect();
    if header != population_header() {
        return Err(CliError::invalid(format!(
            "{}: expected columns {}",
            path.display(),
            population_header().join(",")
        )));
    }
    let mut steps = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::csv(path, e))?;
        let bad = |field: &str| CliError::invalid(format!("{}: cannot parse {field:?}", path.display()));
        let step: u64 = record[0].trim().parse().map_err(|_| bad(&record[0]))?;
        let probs = record
            .iter()
            .skip(1)
            .map(|f| f.trim().parse::<f64>().map_err(|_| bad(f)))
            .collect::<CliResult<Vec<f64>>>()?;
        if steps.insert(step, PopulationVector::new(probs)?).is_some() {
            return Err(CliError::invalid(format!("{}: step {step} repeated", path.display())));
        }
    }
    Ok(steps)
}

fn read_readout(path: Option<&Path>) -> CliResult<ReadoutModel> {
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            ReadoutModel::from_json(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
        }
        None => Ok(ReadoutModel::device()),
    }
}

/// Replaces every `I`/`Z`-only expectation except `III` by its value from
/// the computational-basis populations.
fn apply_populations(table: &mut Table, populations: &PopulationVector) {
    for (label, value) in table.iter_mut() {
        if label.len() != TOMO_QUBITS || label == "III" || !label.chars().all(|c| c == 'I' || c == 'Z') {
            continue;
        }
        let mask = label
            .chars()
            .enumerate()
            .filter(|&(_, c)| c == 'Z')
            .fold(0usize, |m, (q, _)| m | 1 << (TOMO_QUBITS - 1 - q));
        *value = populations
            .probs
            .iter()
            .enumerate()
            .map(|(b, p)| if (b & mask).count_ones() % 2 == 0 { *p } else { -*p })
            .sum();
    }
}

struct Row {
    step: u64,
    fidelity: f64,
    mean_linear_entropy: f64,
    mean_concurrence: f64,
    s_theory: f64,
    c_theory: f64,
}

pub fn run(global: &GlobalArgs, args: &TomoArgs) -> CliResult<()> {
    let expectations_path = require(args.expectations.as_deref(), "expectations")?;
    let kappa0 = require(args.kappa0, "kappa0")?;
    let psi0 = coherent_state(spin(TOMO_QUBITS as u32)?, args.state.resolve()?.point())?;
    let mut tables = read_expectations(expectations_path)?;
    if let Some(path) = &args.populations {
        let model = read_readout(args.readout.as_deref())?;
        for (step, measured) in read_populations(path)? {
            let table = tables.get_mut(&step).ok_or_else(|| {
                CliError::invalid(format!("{}: step {step} has no expectation table", path.display()))
            })?;
            apply_populations(table, &correct_populations(&model, &measured)?);
        }
    } else if args.readout.is_some() {
        log::warn!("--readout has no effect without --populations");
    }

    let u = floquet(&KickedTopParams::new(psi0.spin(), kappa0)?);
    let theory = |step: u64| -> CliResult<(SymState, DensityMatrix)> {
        let psi = evolve(&u, &psi0, step)?;
        let rho = DensityMatrix::from_pure(&symmetric_to_qubits(&psi)?)?;
        Ok((psi, rho))
    };
    let rows: Vec<Row> = tables
        .par_iter()
        .map(|(&step, table)| {
            let rho_e = reconstruct(table).map_err(|e| CliError::invalid(format!("step {step}: {e}")))?;
            let (psi, rho_t) = theory(step)?;
            let metrics = pipeline_metrics(&rho_e, &rho_t)?;
            Ok(Row {
                step,
                fidelity: metrics.fidelity,
                mean_linear_entropy: metrics.mean_linear_entropy,
                mean_concurrence: metrics.mean_concurrence,
                s_theory: linear_entropy(&reduced_state(&psi, 1)?),
                c_theory: concurrence(&reduced_state(&psi, 2)?)?,
            })
        })
        .collect::<CliResult<_>>()?;

    let path = out_path(global, "tomo.csv");
    let mut out = CsvOut::create(
        &path,
        &["step", "fidelity", "mean_linear_entropy", "mean_concurrence", "S_theory", "C_theory"],
    )?;
    for r in rows {
        out.record([
            r.step.to_string(),
            fmt_f64(r.fidelity),
            fmt_f64(r.mean_linear_entropy),
            fmt_f64(r.mean_concurrence),
            fmt_f64(r.s_theory),
            fmt_f64(r.c_theory),
        ])?;
    }
    out.finish()
}
