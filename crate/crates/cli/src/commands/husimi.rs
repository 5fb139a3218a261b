//! `husimi`: Husimi distribution of `U^n |θ0, φ0⟩` on a sphere grid.

use kicked_top::husimi::{husimi_grid, DEFAULT_N_PHI, DEFAULT_N_THETA};
use kicked_top::symspace::{coherent_state, evolve, floquet, KickedTopParams};

use super::out_path;
use crate::config::{spin, GlobalArgs, HusimiArgs};
use crate::error::CliResult;
use crate::output::{fmt_f64, CsvOut};

pub fn run(global: &GlobalArgs, args: &HusimiArgs) -> CliResult<()> {
    let spin = spin(args.qubits.unwrap_or(3))?;
    let kappa0 = args.kappa0.unwrap_or(0.0);
    let psi0 = coherent_state(spin, args.state.resolve()?.point())?;
    let psi = evolve(&floquet(&KickedTopParams::new(spin, kappa0)?), &psi0, args.steps.unwrap_or(0))?;
    let grid = husimi_grid(&psi, args.n_theta.unwrap_or(DEFAULT_N_THETA), args.n_phi.unwrap_or(DEFAULT_N_PHI))?;

    let path = out_path(global, "husimi.csv");
    let mut out = CsvOut::create(&path, &["theta", "phi", "q"])?;
    for (theta, phi, q) in grid.rows() {
        out.record([fmt_f64(theta), fmt_f64(phi), fmt_f64(q)])?;
    }
    out.finish()
}
