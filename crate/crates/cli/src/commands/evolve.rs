//! `evolve`: numeric entanglement series beside the closed forms for three
//! and four qubits.

use kicked_top::exact3::{concurrence3_closed, entropy3_closed, state_closed, GeneralState3, StateId};
use kicked_top::exact4::{entropy4_closed, state4_closed};
use kicked_top::measures::{concurrence, linear_entropy, reduced_state};
use kicked_top::symspace::{coherent_state, floquet, Evolution, KickedTopParams, SymState};

use super::out_path;
use crate::config::{require, spin, EvolveArgs, GlobalArgs, StateSpec};
use crate::error::CliResult;
use crate::output::{fmt_f64, CsvOut};

enum ClosedForm {
    Three(GeneralState3, Option<StateId>),
    Four(SymState, Option<StateId>),
}

fn entropy(psi: &SymState) -> CliResult<f64> {
    Ok(linear_entropy(&reduced_state(psi, 1)?))
}

fn pair_concurrence(psi: &SymState) -> CliResult<f64> {
    Ok(concurrence(&reduced_state(psi, 2)?)?)
}

impl ClosedForm {
    fn new(qubits: u32, state: StateSpec, psi0: &SymState) -> CliResult<Option<Self>> {
        Ok(match qubits {
            3 => Some(Self::Three(GeneralState3::from_sym(psi0)?, state.featured())),
            4 => Some(Self::Four(psi0.clone(), state.featured())),
            _ => None,
        })
    }

    fn values(&self, n: u64, kappa0: f64) -> CliResult<(f64, f64)> {
        Ok(match self {
            Self::Three(_, Some(id)) => (entropy3_closed(*id, n, kappa0)?, concurrence3_closed(*id, n, kappa0)?),
            Self::Three(general, None) => {
                let psi = state_closed(general, n, kappa0)?;
                (entropy(&psi)?, pair_concurrence(&psi)?)
            }
            Self::Four(psi0, featured) => {
                let psi = state4_closed(psi0, n, kappa0)?;
                let s = match featured {
                    Some(id) => entropy4_closed(*id, n, kappa0)?,
                    None => entropy(&psi)?,
                };
                (s, pair_concurrence(&psi)?)
            }
        })
    }
}

pub fn run(global: &GlobalArgs, args: &EvolveArgs) -> CliResult<()> {
    let kappa0 = require(args.kappa0, "kappa0")?;
    let qubits = args.qubits.unwrap_or(3);
    let steps = args.steps.unwrap_or(40);
    let state = args.state.resolve()?;
    let spin = spin(qubits)?;
    let psi0 = coherent_state(spin, state.point())?;
    let closed = ClosedForm::new(qubits, state, &psi0)?;
    if closed.is_none() {
        log::warn!("no closed form for {qubits} qubits; S_closed and C_closed are omitted");
    }
    let pairs = qubits >= 2;

    let mut header = vec!["n", "S_numeric"];
    if closed.is_some() {
        header.push("S_closed");
    }
    if pairs {
        header.push("C_numeric");
        if closed.is_some() {
            header.push("C_closed");
        }
    }
    let path = out_path(global, "evolve.csv");
    let mut out = CsvOut::create(&path, &header)?;
    let u = floquet(&KickedTopParams::new(spin, kappa0)?);
    for (n, psi) in (0..=steps).zip(Evolution::new(&u, psi0)?) {
        let exact = closed.as_ref().map(|c| c.values(n, kappa0)).transpose()?;
        let mut row = vec![n.to_string(), fmt_f64(entropy(&psi)?)];
        row.extend(exact.map(|(s, _)| fmt_f64(s)));
        if pairs {
            row.push(fmt_f64(pair_concurrence(&psi)?));
            row.extend(exact.map(|(_, c)| fmt_f64(c)));
        }
        out.record(row)?;
    }
    out.finish()
}
