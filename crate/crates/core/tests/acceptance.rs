//! Acceptance criteria. Each test writes one `criterion N [PASS|FAIL]` line
//! straight to stderr so that it shows up without `--nocapture`, then
//! asserts the outcome. Runtime limits are part of each criterion.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use kicked_top::chebyshev::chebyshev_pair;
use kicked_top::classical::{
    instability_onset, norm_drift, step, trajectory as classical_trajectory, ClassicalPoint, FIXED_POINT,
    NORTH_POLE,
};
use kicked_top::exact3::{
    avg_entropy3, avg_entropy3_numeric, avg_entropy_3pi2, block_power3, concurrence3_000, concurrence3_closed,
    entropy3_closed, floquet_power3, Parity, StateId,
};
use kicked_top::exact4::{
    avg_entropy4, avg_entropy4_numeric, block_power4, entropy4_closed, ghz_fidelity, tunneling,
    tunneling_overlap_series, Sector,
};
use kicked_top::measures::{
    concurrence, fidelity, haar_symmetric_sample, linear_entropy, reduced_state, rmt_average, DensityMatrix,
    RunningMean,
};
use kicked_top::symspace::{
    coherent_state, floquet, symmetric_to_qubits, BlochPoint, Evolution, KickedTopParams, Spin, SymState,
};
use kicked_top::tomo::{
    apply_readout, correct_populations, pauli_expectations, reconstruct, PopulationVector, ReadoutModel,
};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, pass: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {id:>2} [{status}] {detail} ({:.3} s, limit {} s)",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    let _ = writeln!(std::io::stderr().lock(), "{line}");
    assert!(pass, "{line}");
}

/// Runs `body`, which returns whether the criterion holds and a summary, and
/// reports it against the runtime `limit`.
fn criterion(id: u32, limit_secs: u64, body: impl FnOnce() -> (bool, String)) {
    let limit = Duration::from_secs(limit_secs);
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed();
    report(id, ok && elapsed < limit, elapsed, limit, &detail);
}

fn spin(qubits: u32) -> Spin {
    Spin::from_qubits(qubits).unwrap()
}

fn coherent(qubits: u32, point: BlochPoint) -> SymState {
    coherent_state(spin(qubits), point).unwrap()
}

/// `(S, C)` of `U^n ψ0` for `n = 0..=steps` by direct Floquet evolution.
fn numeric_series(qubits: u32, point: BlochPoint, kappa0: f64, steps: usize) -> Vec<(f64, f64)> {
    let u = floquet(&KickedTopParams::new(spin(qubits), kappa0).unwrap());
    Evolution::new(&u, coherent(qubits, point))
        .unwrap()
        .take(steps + 1)
        .map(|psi| {
            let s = linear_entropy(&reduced_state(&psi, 1).unwrap());
            let c = concurrence(&reduced_state(&psi, 2).unwrap()).unwrap();
            (s, c)
        })
        .collect()
}

fn numeric_average(qubits: u32, point: BlochPoint, kappa0: f64, horizon: usize) -> f64 {
    let u = floquet(&KickedTopParams::new(spin(qubits), kappa0).unwrap());
    let mut mean = RunningMean::new();
    for psi in Evolution::new(&u, coherent(qubits, point)).unwrap().skip(1).take(horizon) {
        mean.push(linear_entropy(&reduced_state(&psi, 1).unwrap()));
    }
    mean.mean().unwrap()
}

#[test]
fn criterion_01_closed_form_matches_numerics() {
    criterion(1, 5, || {
        let kappas = [0.1, 0.4, 0.5, 0.8, 1.2, 2.5, 3.0 * PI / 2.0];
        let (mut ds3, mut dc3, mut ds4) = (0.0f64, 0.0f64, 0.0f64);
        for &k in &kappas {
            for id in [StateId::Zero, StateId::PlusY] {
                for (n, (s, c)) in numeric_series(3, id.point(), k, 40).into_iter().enumerate() {
                    ds3 = ds3.max((entropy3_closed(id, n as u64, k).unwrap() - s).abs());
                    dc3 = dc3.max((concurrence3_closed(id, n as u64, k).unwrap() - c).abs());
                }
                for (n, (s, _)) in numeric_series(4, id.point(), k, 40).into_iter().enumerate() {
                    ds4 = ds4.max((entropy4_closed(id, n as u64, k).unwrap() - s).abs());
                }
            }
        }
        let tol = 1e-10;
        (
            ds3 <= tol && dc3 <= tol && ds4 <= tol,
            format!("max |dS| 3q {ds3:.1e}, max |dC| 3q {dc3:.1e}, max |dS| 4q {ds4:.1e} (tol {tol:.0e})"),
        )
    });
}

#[test]
fn criterion_02_closed_form_constants() {
    criterion(2, 1, || {
        let checks = [
            ("3q |000> avg, kappa0 -> 0+", avg_entropy3(StateId::Zero, 1e-7).unwrap().value, 5.0 / 16.0),
            ("3q |000> avg at 3pi/2", avg_entropy3(StateId::Zero, 1.5 * PI).unwrap().value, 1.0 / 3.0),
            ("3q |+++>y avg at 3pi/2", avg_entropy3(StateId::PlusY, 1.5 * PI).unwrap().value, 1.0 / 3.0),
            ("3pi/2 average at (0, 0)", avg_entropy_3pi2(BlochPoint::new(0.0, 0.0).unwrap()), 1.0 / 3.0),
            ("3pi/2 average at (pi/4, -pi/2)", avg_entropy_3pi2(BlochPoint::new(FRAC_PI_4, -FRAC_PI_2).unwrap()), 7.0 / 24.0),
            ("C(1, pi/2)", concurrence3_000(1, FRAC_PI_2).unwrap(), (13f64.sqrt() - 1.0) / 8.0),
            ("4q |0000> avg, kappa0 -> 0+", avg_entropy4(StateId::Zero, 1e-7).unwrap().value, 11.0 / 32.0),
            ("4q |++++>y avg, kappa0 -> 0+", avg_entropy4(StateId::PlusY, 1e-7).unwrap().value, 1.0 / 4.0),
            ("4q |0000> avg at pi", avg_entropy4(StateId::Zero, PI).unwrap().value, 3.0 / 8.0),
            ("4q |++++>y avg at pi", avg_entropy4(StateId::PlusY, PI).unwrap().value, 3.0 / 8.0),
            ("S_RMT(3)", rmt_average(3).unwrap(), 1.0 / 3.0),
            ("S_RMT(4)", rmt_average(4).unwrap(), 3.0 / 8.0),
        ];
        let (worst_name, worst) = checks
            .iter()
            .map(|(name, got, want)| (*name, (got - want).abs()))
            .fold(("", 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
        (
            worst <= 1e-12,
            format!("{} constants, largest deviation {worst:.1e} ({worst_name}) (tol 1e-12)", checks.len()),
        )
    });
}

#[test]
fn criterion_03_step_equalities() {
    criterion(3, 5, || {
        let kappas = [0.1, 0.3, 0.5, 0.8, 1.0, 1.2, 1.7, 2.5, 3.0, 1.5 * PI];
        let mut exact = true;
        let (mut ds, mut dc, mut ds4) = (0.0f64, 0.0f64, 0.0f64);
        for &k in &kappas {
            let num3 = numeric_series(3, BlochPoint::north(), k, 200);
            let num4 = numeric_series(4, BlochPoint::north(), k, 200);
            for m in 1..=100u64 {
                let (odd, even) = (2 * m - 1, 2 * m);
                exact &= entropy3_closed(StateId::Zero, odd, k).unwrap() == entropy3_closed(StateId::Zero, even, k).unwrap();
                exact &= concurrence3_000(odd, k).unwrap() == concurrence3_000(even, k).unwrap();
                exact &= entropy4_closed(StateId::Zero, odd, k).unwrap() == entropy4_closed(StateId::Zero, even, k).unwrap();
                let (o, e) = (odd as usize, even as usize);
                ds = ds.max((num3[o].0 - num3[e].0).abs());
                dc = dc.max((num3[o].1 - num3[e].1).abs());
                ds4 = ds4.max((num4[o].0 - num4[e].0).abs());
            }
        }
        let tol = 1e-10;
        (
            exact && ds <= tol && dc <= tol && ds4 <= tol,
            format!(
                "closed forms equal: {exact}; numeric max |S(2m-1)-S(2m)| 3q {ds:.1e}, |C(2m-1)-C(2m)| 3q {dc:.1e}, |S| 4q {ds4:.1e}"
            ),
        )
    });
}

#[test]
fn criterion_04_pell_and_unitarity() {
    criterion(4, 2, || {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (mut pell, mut unit3, mut unit4) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..10_000 {
            let chi: f64 = rng.random_range(-1.0..=1.0);
            let n: u64 = rng.random_range(0..=200);
            let (t, u) = chebyshev_pair(chi, n);
            pell = pell.max((t * t + (1.0 - chi * chi) * u * u - 1.0).abs());

            let kappa0: f64 = rng.random_range(-10.0..10.0);
            for parity in [Parity::Plus, Parity::Minus] {
                unit3 = unit3.max((block_power3(kappa0, n, parity).unwrap().norm_sqr() - 1.0).abs());
            }
            let b = block_power4(kappa0, n, Sector::Plus).unwrap();
            unit4 = unit4.max((b[(0, 0)].norm_sqr() + b[(1, 0)].norm_sqr() - 1.0).abs());
        }
        (
            pell <= 1e-9 && unit3 <= 1e-12 && unit4 <= 1e-12,
            format!("10^4 draws: Pell residual {pell:.1e} (tol 1e-9), |a|^2+|b|^2-1 3q {unit3:.1e}, 4q {unit4:.1e} (tol 1e-12)"),
        )
    });
}

#[test]
fn criterion_05_time_average_convergence() {
    criterion(5, 30, || {
        let horizon = 1_000_000;
        let mut worst = 0.0f64;
        for k in [0.8, 1.2, 2.5] {
            for id in [StateId::Zero, StateId::PlusY] {
                let d3 = (avg_entropy3_numeric(id, k, horizon).unwrap() - avg_entropy3(id, k).unwrap().value).abs();
                let d4 = (avg_entropy4_numeric(id, k, horizon).unwrap() - avg_entropy4(id, k).unwrap().value).abs();
                worst = worst.max(d3).max(d4);
            }
        }
        (worst <= 1e-3, format!("N = 10^6, largest |numeric - closed| average {worst:.1e} (tol 1e-3)"))
    });
}

#[test]
fn criterion_06_three_pi_over_two_structure() {
    criterion(6, 1, || {
        let k = 1.5 * PI;
        let numeric_u12 = floquet(&KickedTopParams::new(spin(3), k).unwrap()).pow(12);
        let proportional = |m: &DMatrix<C64>| {
            let c = m[(0, 0)];
            (m - DMatrix::<C64>::identity(4, 4) * c).iter().map(|z| z.norm()).fold(0.0, f64::max)
                + (c.norm() - 1.0).abs()
        };
        let r_numeric = proportional(&numeric_u12);
        let r_closed = proportional(&floquet_power3(k, 12).unwrap());
        let mut period = 0.0f64;
        let mut conc = 0.0f64;
        for id in [StateId::Zero, StateId::PlusY] {
            let num = numeric_series(3, id.point(), k, 66);
            for n in 0..=60 {
                period = period.max((num[n + 6].0 - num[n].0).abs());
                let closed_shift = entropy3_closed(id, n as u64 + 6, k).unwrap() - entropy3_closed(id, n as u64, k).unwrap();
                period = period.max(closed_shift.abs());
            }
        }
        let zero = numeric_series(3, BlochPoint::north(), k, 60);
        for n in 1..=60u64 {
            conc = conc.max(concurrence3_000(n, k).unwrap().abs()).max(zero[n as usize].1.abs());
        }
        (
            r_numeric <= 1e-10 && r_closed <= 1e-10 && period <= 1e-10 && conc <= 1e-10,
            format!(
                "U^12 - cI residual numeric {r_numeric:.1e}, closed {r_closed:.1e}; period-6 residual {period:.1e}; max C(|000>) {conc:.1e}"
            ),
        )
    });
}

#[test]
fn criterion_07_tunneling() {
    criterion(7, 1, || {
        let k = 0.1;
        let report = tunneling(k).unwrap();
        let n = (PI / report.splitting).round() as u64;
        let overlap = tunneling_overlap_series(k, &[n]).unwrap()[0];
        let ghz = ghz_fidelity(k, n / 2).unwrap();
        let asymptotic = report.n_star_asymptotic;
        (
            overlap >= 0.95 && ghz >= 0.95 && (asymptotic - 402_124.0).abs() <= 1.0,
            format!("n = {n}: overlap {overlap:.6}, GHZ fidelity at n/2 {ghz:.6}; asymptotic n* {asymptotic:.2} (want 402124 +- 1)"),
        )
    });
}

#[test]
fn criterion_08_n_star_estimate() {
    criterion(8, 1, || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in [0.4, 0.5, 0.8] {
            let series: Vec<f64> = (0..=60).map(|n| entropy3_closed(StateId::Zero, n, k).unwrap()).collect();
            let argmax = (0..series.len()).fold(0, |best, n| if series[n] > series[best] { n } else { best });
            let estimate = (3.0 * PI / k).floor() as i64;
            let within = (argmax as i64 - estimate).abs() <= 2;
            ok &= within;
            parts.push(format!("kappa0 {k}: argmax {argmax} vs floor(3pi/kappa0) {estimate}{}", if within { "" } else { " (off)" }));
        }
        (ok, parts.join("; "))
    });
}

#[test]
fn criterion_09_rmt_monte_carlo() {
    criterion(9, 10, || {
        let s3 = haar_symmetric_sample(spin(3), 10_000, 9).unwrap();
        let s4 = haar_symmetric_sample(spin(4), 10_000, 9).unwrap();
        (
            (s3 - 1.0 / 3.0).abs() <= 0.01 && (s4 - 3.0 / 8.0).abs() <= 0.01,
            format!("10^4 Haar samples: 3q {s3:.5} (1/3), 4q {s4:.5} (3/8), tol 0.01"),
        )
    });
}

#[test]
fn criterion_10_classical_map() {
    criterion(10, 10, || {
        let mut orbit = 0.0f64;
        let mut fixed = 0.0f64;
        for k in [0.5, 1.0, 2.5, 3.0] {
            let traj = classical_trajectory(NORTH_POLE, k, 400).unwrap();
            for p in traj.iter().step_by(4) {
                orbit = orbit.max(p.distance(NORTH_POLE));
            }
            fixed = fixed.max(step(FIXED_POINT, k).unwrap().distance(FIXED_POINT));
        }
        let start = ClassicalPoint::from_angles(1.0, 0.3).unwrap();
        let drift = norm_drift(start, 3.0, 1_000_000).unwrap();
        let onset = instability_onset(1.9, 2.1, 2000, 1e-9);
        let onset_ok = onset.is_some_and(|k| (1.9..=2.1).contains(&k));
        (
            orbit <= 1e-12 && fixed <= 1e-12 && drift <= 1e-9 && onset_ok,
            format!(
                "period-4 return error {orbit:.1e}, fixed-point error {fixed:.1e}, norm drift over 10^6 steps {drift:.1e}, instability onset {onset:?}"
            ),
        )
    });
}

#[test]
fn criterion_11_tomography() {
    criterion(11, 1, || {
        let model = ReadoutModel::device();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut round_trip = 0.0f64;
        for _ in 0..100 {
            let raw: Vec<f64> = (0..8).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = raw.iter().sum();
            let p = PopulationVector::new(raw.iter().map(|x| x / total).collect()).unwrap();
            let back = apply_readout(&model, &correct_populations(&model, &p).unwrap()).unwrap();
            round_trip = back.probs.iter().zip(&p.probs).map(|(a, b)| (a - b).abs()).fold(round_trip, f64::max);
        }
        let mut worst_fidelity = 0.0f64;
        for (n, k) in [(0u64, 0.5), (3, 0.5), (5, 2.5), (12, 1.2)] {
            let u = floquet(&KickedTopParams::new(spin(3), k).unwrap());
            let psi = Evolution::new(&u, coherent(3, BlochPoint::north())).unwrap().nth(n as usize).unwrap();
            let rho = DensityMatrix::from_pure(&symmetric_to_qubits(&psi).unwrap()).unwrap();
            let table: BTreeMap<String, f64> = pauli_expectations(&rho).unwrap();
            let f = fidelity(&rho, &reconstruct(&table).unwrap()).unwrap();
            worst_fidelity = worst_fidelity.max((f - 1.0).abs());
        }
        let loaded = model.f0 == [0.98, 0.98, 0.96] && model.f1 == [0.92, 0.94, 0.87];
        (
            round_trip <= 1e-10 && worst_fidelity <= 1e-10 && loaded,
            format!("round trip {round_trip:.1e}, |1 - fidelity| {worst_fidelity:.1e} (tol 1e-10), bundled readout fidelities loaded: {loaded}"),
        )
    });
}

#[test]
fn criterion_12_large_spin_trends() {
    criterion(12, 60, || {
        let horizon = 2000;
        let rmt7 = rmt_average(7).unwrap();
        let low = numeric_average(7, BlochPoint::plus_y(), 1.0, horizon) / rmt7;
        let high = numeric_average(7, BlochPoint::plus_y(), 3.0, horizon) / rmt7;
        let rmt20 = rmt_average(20).unwrap();
        let start = numeric_average(20, BlochPoint::north(), 2.5, horizon) / rmt20;
        let end = numeric_average(20, BlochPoint::north(), 3.5, horizon) / rmt20;
        (
            high > low && end > start,
            format!("2j=7 |+>y: {low:.4} (kappa0 1) < {high:.4} (kappa0 3); 2j=20 |0>: {start:.4} (kappa0 2.5) < {end:.4} (kappa0 3.5); N = {horizon}"),
        )
    });
}
