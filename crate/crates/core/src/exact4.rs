//! Exact solution of the four-qubit kicked top.
//!
//! In the basis
//!
//! ```text
//! φ1± = (|W⟩ ∓ |W̄⟩)/√2,   φ2± = (|0000⟩ ± |1111⟩)/√2,   φ3+ = |D2⟩
//! ```
//!
//! (`W`, `W̄` and `D2` are the Dicke states with one, three and two ones) the
//! qubit-form Floquet operator splits as `1 ⊕ 2 ⊕ 2`. The state `φ1+` is an
//! eigenvector with eigenvalue `−1` for every `κ0`, the positive-parity block
//! on `{φ2+, φ3+}` is a Chebyshev power with `κ = κ0/2` and
//! `χ = sin(κ)/2`, and the negative-parity block on `{φ1−, φ2−}` has period
//! two up to phase.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{chebyshev_pair, Chebyshev};
use crate::error::{ensure_finite, Error, Result};
use crate::exact3::AverageEntropy;
pub use crate::exact3::StateId;
use crate::measures::RunningMean;
use crate::symspace::{coherent_state, BlochPoint, Spin, SymState};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const I: C64 = C64::new(0.0, 1.0);

/// Invariant subspaces of the four-qubit Floquet operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    /// The one-dimensional span of `φ1+`.
    Singlet,
    /// `{φ2+, φ3+}`.
    Plus,
    /// `{φ1−, φ2−}`.
    Minus,
}

/// Derived parameters of the four-qubit blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityBlockSpec4 {
    pub kappa0: f64,
    pub kappa: f64,
    pub chi: f64,
}

impl ParityBlockSpec4 {
    pub fn new(kappa0: f64) -> Result<Self> {
        ensure_finite("kappa0", kappa0)?;
        let kappa = kappa0 / 2.0;
        Ok(Self { kappa0, kappa, chi: kappa.sin() / 2.0 })
    }

    /// `δ(n) = n(2π − κ0)/4`, with the multiple of `π/2` reduced exactly.
    pub fn delta(&self, n: u64) -> f64 {
        ((n % 4) as f64) * PI / 2.0 - n as f64 * self.kappa0 / 4.0
    }
}

fn spin4() -> Spin {
    Spin::from_qubits(4).expect("4 qubits")
}

/// `e^{-i n π/2}` with the multiple of `π/2` reduced exactly.
fn quarter_power(n: u64) -> C64 {
    [C64::new(1.0, 0.0), C64::new(0.0, -1.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)][(n % 4) as usize]
}

fn sign_power(n: u64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn alpha_beta(kappa: f64, t: f64, u: f64) -> (C64, C64) {
    (C64::new(t, 0.5 * u * kappa.cos()), C64::from_polar(SQRT3_2 * u, kappa))
}

/// Closed-form `n`-th power of a sector block of the qubit-form Floquet
/// operator. The singlet sector is returned as a 1×1 matrix.
pub fn block_power4(kappa0: f64, n: u64, sector: Sector) -> Result<DMatrix<C64>> {
    let spec = ParityBlockSpec4::new(kappa0)?;
    let nf = n as f64;
    Ok(match sector {
        Sector::Singlet => DMatrix::from_element(1, 1, C64::from(sign_power(n))),
        Sector::Plus => {
            let (t, u) = chebyshev_pair(spec.chi, n);
            let (alpha, beta) = alpha_beta(spec.kappa, t, u);
            // e^{-in(π+κ)/2}
            let phase = quarter_power(n) * C64::from_polar(1.0, -nf * spec.kappa / 2.0);
            DMatrix::from_row_slice(2, 2, &[alpha, I * beta.conj(), I * beta, alpha.conj()]) * phase
        }
        Sector::Minus => {
            let (c, s) = match n % 4 {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            let e = C64::from_polar(1.0, 0.75 * spec.kappa);
            let phase = C64::from_polar(1.0, -0.75 * nf * spec.kappa);
            DMatrix::from_row_slice(2, 2, &[C64::from(c), e * s, -e.conj() * s, C64::from(c)]) * phase
        }
    })
}

/// One kick of the qubit-form Floquet operator on the positive-parity block
/// `{φ2+, φ3+}`.
pub fn block4_plus(kappa0: f64) -> Result<Matrix2<C64>> {
    let kappa = ParityBlockSpec4::new(kappa0)?.kappa;
    let em = C64::from_polar(1.0, -kappa);
    let ep = em.conj();
    let prefactor = -I * C64::from_polar(1.0, -kappa / 2.0);
    Ok(Matrix2::new(I * 0.5 * em, I * SQRT3_2 * em, I * SQRT3_2 * ep, -I * 0.5 * ep) * prefactor)
}

/// Basis `[φ1+, φ2+, φ3+, φ1−, φ2−]` as Dicke-basis vectors.
pub fn basis4() -> [DVector<C64>; 5] {
    let h = FRAC_1_SQRT_2;
    let v = |a: [f64; 5]| DVector::from_iterator(5, a.iter().map(|&x| C64::from(x)));
    [
        v([0.0, h, 0.0, -h, 0.0]),
        v([h, 0.0, 0.0, 0.0, h]),
        v([0.0, 0.0, 1.0, 0.0, 0.0]),
        v([0.0, h, 0.0, h, 0.0]),
        v([h, 0.0, 0.0, 0.0, -h]),
    ]
}

/// Closed-form `U^n` in the Dicke basis, including the global phase of the
/// numeric Floquet operator.
pub fn floquet_power4(kappa0: f64, n: u64) -> Result<DMatrix<C64>> {
    let mut blocks = DMatrix::<C64>::zeros(5, 5);
    blocks.view_mut((0, 0), (1, 1)).copy_from(&block_power4(kappa0, n, Sector::Singlet)?);
    blocks.view_mut((1, 1), (2, 2)).copy_from(&block_power4(kappa0, n, Sector::Plus)?);
    blocks.view_mut((3, 3), (2, 2)).copy_from(&block_power4(kappa0, n, Sector::Minus)?);
    let b = DMatrix::from_columns(&basis4());
    let global = C64::from_polar(1.0, -(n as f64) * kappa0 / 4.0);
    Ok(&b * blocks * b.adjoint() * global)
}

/// Closed-form `U^n ψ0` for any four-qubit symmetric state.
pub fn state4_closed(psi0: &SymState, n: u64, kappa0: f64) -> Result<SymState> {
    if psi0.spin().qubits() != 4 {
        return Err(Error::DimensionMismatch { expected: 5, got: psi0.amps().len() });
    }
    Ok(SymState::from_raw(spin4(), floquet_power4(kappa0, n)? * psi0.amps()))
}

fn even_partner(n: u64) -> u64 {
    n + n % 2
}

fn xi_zero(spec: &ParityBlockSpec4, n: u64, t: f64, u: f64) -> f64 {
    let (s, c) = (n as f64 * spec.kappa0 / 8.0).sin_cos();
    t * c - 0.5 * u * spec.kappa.cos() * s
}

fn xi_plus_y(spec: &ParityBlockSpec4, n: u64, t: f64, u: f64) -> f64 {
    let (s, c) = spec.delta(n).sin_cos();
    t * c + u * s * spec.kappa.cos()
}

/// Closed-form single-qubit linear entropy of a featured four-qubit state
/// after `n` kicks (`0` at `n = 0`).
pub fn entropy4_closed(state: StateId, n: u64, kappa0: f64) -> Result<f64> {
    let spec = ParityBlockSpec4::new(kappa0)?;
    if n == 0 {
        return Ok(0.0);
    }
    let xi = match state {
        StateId::Zero => {
            let m = even_partner(n);
            let (t, u) = chebyshev_pair(spec.chi, m);
            xi_zero(&spec, m, t, u)
        }
        StateId::PlusY => {
            let (t, u) = chebyshev_pair(spec.chi, n);
            xi_plus_y(&spec, n, t, u)
        }
    };
    Ok(0.5 * (1.0 - xi * xi))
}

/// Closed-form entropies for `n = 0, 1, 2, ...` at O(1) cost per step.
#[derive(Debug, Clone)]
pub struct Series4 {
    state: StateId,
    spec: ParityBlockSpec4,
    walker: Chebyshev,
}

impl Series4 {
    pub fn new(state: StateId, kappa0: f64) -> Result<Self> {
        let spec = ParityBlockSpec4::new(kappa0)?;
        Ok(Self { state, spec, walker: Chebyshev::new(spec.chi) })
    }
}

impl Iterator for Series4 {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let n = self.walker.degree();
        let s = if n == 0 {
            0.0
        } else {
            let xi = match self.state {
                StateId::Zero if n % 2 == 1 => {
                    let mut ahead = self.walker;
                    ahead.advance();
                    xi_zero(&self.spec, n + 1, ahead.t(), ahead.u_prev())
                }
                StateId::Zero => xi_zero(&self.spec, n, self.walker.t(), self.walker.u_prev()),
                StateId::PlusY => xi_plus_y(&self.spec, n, self.walker.t(), self.walker.u_prev()),
            };
            0.5 * (1.0 - xi * xi)
        };
        self.walker.advance();
        Some(s)
    }
}

/// Infinite-time average of the single-qubit linear entropy.
///
/// At `κ0 ≡ 0 (mod 4π)` the dynamics is local and the average is `0`. At
/// `κ0 ≡ 2π (mod 4π)` both featured states alternate between product and
/// maximally entangled states, giving `1/4`. Both cases are flagged
/// `resonant`.
pub fn avg_entropy4(state: StateId, kappa0: f64) -> Result<AverageEntropy> {
    ensure_finite("kappa0", kappa0)?;
    if (kappa0 / 2.0).sin().abs() < 1e-12 {
        let local = (kappa0 / 4.0).sin().abs() < 1e-6;
        return Ok(AverageEntropy { value: if local { 0.0 } else { 0.25 }, resonant: true });
    }
    let c2 = (kappa0 / 2.0).cos().powi(2);
    let value = match state {
        StateId::Zero => (9.0 + 2.0 * c2) / (8.0 * (3.0 + c2)),
        StateId::PlusY => (9.0 - c2) / (8.0 * (3.0 + c2)),
    };
    Ok(AverageEntropy { value, resonant: false })
}

/// Mean of the closed-form entropy over kicks `1..=count`. For `|++++⟩y`
/// at small `κ0` this converges only once `count` greatly exceeds the
/// tunneling time.
pub fn avg_entropy4_numeric(state: StateId, kappa0: f64, count: u64) -> Result<f64> {
    if count == 0 {
        return Err(Error::EmptySeries);
    }
    let mut acc = RunningMean::new();
    acc.extend(Series4::new(state, kappa0)?.skip(1).take(count as usize));
    acc.mean()
}

/// Tunneling between `⊗|+⟩y` and `⊗|−⟩y` at small `κ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelingReport {
    pub kappa0: f64,
    /// Eigenphase of the positive-parity block that approaches `π`.
    pub gamma_minus: f64,
    /// `Δ = |π − γ−|`.
    pub splitting: f64,
    /// `π/Δ`.
    pub n_star: f64,
    /// Small-`κ0` form `128π/κ0³`.
    pub n_star_asymptotic: f64,
    /// `n_star / 2`, where the state is close to a GHZ state.
    pub ghz_time: f64,
}

pub fn tunneling(kappa0: f64) -> Result<TunnelingReport> {
    ensure_finite("kappa0", kappa0)?;
    if kappa0 <= 0.0 {
        return Err(Error::OutOfRange { name: "kappa0", value: kappa0, min: 0.0, max: f64::INFINITY });
    }
    let gamma_minus = kappa0 / 4.0 + PI - ((kappa0 / 2.0).sin() / 2.0).asin();
    let splitting = (PI - gamma_minus).abs();
    let n_star = PI / splitting;
    Ok(TunnelingReport {
        kappa0,
        gamma_minus,
        splitting,
        n_star,
        n_star_asymptotic: 128.0 * PI / kappa0.powi(3),
        ghz_time: n_star / 2.0,
    })
}

fn coherent4(point: BlochPoint) -> SymState {
    coherent_state(spin4(), point).expect("valid point")
}

/// `|⟨⊗⁴ −y | U^n ⊗⁴ +y⟩|²` at each requested time.
pub fn tunneling_overlap_series(kappa0: f64, times: &[u64]) -> Result<Vec<f64>> {
    tunneling(kappa0)?;
    let start = coherent4(BlochPoint::plus_y());
    let target = coherent4(BlochPoint::minus_y());
    times
        .iter()
        .map(|&n| Ok(target.overlap(&state4_closed(&start, n, kappa0)?)))
        .collect()
}

/// `(⊗⁴|+⟩y − i ⊗⁴|−⟩y)/√2`.
pub fn ghz_y4() -> SymState {
    let plus = coherent4(BlochPoint::plus_y());
    let minus = coherent4(BlochPoint::minus_y());
    let amps = (plus.amps() - minus.amps() * I) * C64::from(FRAC_1_SQRT_2);
    SymState::from_raw(spin4(), amps)
}

/// `|⟨GHZ_y | U^n ⊗⁴ +y⟩|²`.
pub fn ghz_fidelity(kappa0: f64, n: u64) -> Result<f64> {
    tunneling(kappa0)?;
    let psi = state4_closed(&coherent4(BlochPoint::plus_y()), n, kappa0)?;
    Ok(ghz_y4().overlap(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{linear_entropy, reduced_state};
    use crate::symspace::{floquet, qubit_form_phase, Evolution, KickedTopParams, UnitaryMatrix};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const KAPPAS: [f64; 7] = [0.1, 0.4, 0.5, 0.8, 1.2, 2.5, 3.0 * PI / 2.0];

    fn numeric_u(spin: Spin, kappa0: f64) -> UnitaryMatrix {
        floquet(&KickedTopParams::new(spin, kappa0).unwrap())
    }

    fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn blocks_match_numeric_floquet() {
        let b = DMatrix::from_columns(&basis4());
        for &k in &KAPPAS {
            let u = numeric_u(spin4(), k);
            let ub = b.adjoint() * u.matrix() * &b / qubit_form_phase(k);
            let plus = block4_plus(k).unwrap();
            let plus = DMatrix::from_iterator(2, 2, plus.iter().copied());
            assert!((ub[(0, 0)] + 1.0).norm() < 1e-12);
            assert!(max_diff(&ub.view((1, 1), (2, 2)).into_owned(), &plus) < 1e-12);
            let minus = block_power4(k, 1, Sector::Minus).unwrap();
            assert!(max_diff(&ub.view((3, 3), (2, 2)).into_owned(), &minus) < 1e-12);
            let mut off = ub.clone();
            off.view_mut((0, 0), (1, 1)).fill(C64::from(0.0));
            off.view_mut((1, 1), (2, 2)).fill(C64::from(0.0));
            off.view_mut((3, 3), (2, 2)).fill(C64::from(0.0));
            assert!(off.iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn singlet_is_minus_one_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi1 = basis4()[0].clone();
        for _ in 0..20 {
            let k = rng.random_range(-4.0 * PI..4.0 * PI);
            let u = numeric_u(spin4(), k);
            let image = u.matrix() * &phi1 / qubit_form_phase(k);
            assert!((image + &phi1).norm() < 1e-10);
        }
    }

    #[test]
    fn block_powers_match_repeated_products() {
        for &k in &KAPPAS {
            let plus_one = block_power4(k, 1, Sector::Plus).unwrap();
            let minus_one = block_power4(k, 1, Sector::Minus).unwrap();
            let mut plus = DMatrix::<C64>::identity(2, 2);
            let mut minus = DMatrix::<C64>::identity(2, 2);
            for n in 0..=40u64 {
                assert!(max_diff(&block_power4(k, n, Sector::Plus).unwrap(), &plus) < 1e-10);
                assert!(max_diff(&block_power4(k, n, Sector::Minus).unwrap(), &minus) < 1e-10);
                assert_eq!(block_power4(k, n, Sector::Singlet).unwrap()[(0, 0)].re, sign_power(n));
                plus = &plus_one * plus;
                minus = &minus_one * minus;
            }
        }
    }

    #[test]
    fn minus_sector_has_period_two() {
        for &k in &KAPPAS {
            let two = block_power4(k, 2, Sector::Minus).unwrap();
            let expected = DMatrix::<C64>::identity(2, 2) * -C64::from_polar(1.0, -0.75 * k);
            assert!(max_diff(&two, &expected) < 1e-12);
        }
    }

    #[test]
    fn closed_floquet_power_matches_numeric() {
        for &k in &KAPPAS {
            let u = numeric_u(spin4(), k);
            for n in [0u64, 1, 2, 3, 17, 40, 1001] {
                assert!(max_diff(&floquet_power4(k, n).unwrap(), &u.pow(n)) < 1e-10);
            }
        }
    }

    #[test]
    fn closed_entropies_match_numerics() {
        for &k in &KAPPAS {
            let u = numeric_u(spin4(), k);
            for state in [StateId::Zero, StateId::PlusY] {
                let psi0 = coherent4(state.point());
                for (n, psi) in Evolution::new(&u, psi0).unwrap().take(41).enumerate() {
                    let s_num = linear_entropy(&reduced_state(&psi, 1).unwrap());
                    let s_closed = entropy4_closed(state, n as u64, k).unwrap();
                    assert!((s_closed - s_num).abs() < 1e-10, "k={k} n={n} {state:?}");
                }
            }
        }
    }

    #[test]
    fn series_matches_pointwise_formula() {
        for &k in &KAPPAS {
            for state in [StateId::Zero, StateId::PlusY] {
                for (n, s) in Series4::new(state, k).unwrap().take(150).enumerate() {
                    assert!((s - entropy4_closed(state, n as u64, k).unwrap()).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn step_rule_for_zero_state() {
        for i in 0..10 {
            let k = 0.21 + 1.1 * f64::from(i);
            for m in 1..=100u64 {
                assert_eq!(
                    entropy4_closed(StateId::Zero, 2 * m - 1, k).unwrap(),
                    entropy4_closed(StateId::Zero, 2 * m, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn reference_values() {
        for m in 0..30 {
            assert!(entropy4_closed(StateId::Zero, 2 * m, 0.0).unwrap().abs() < 1e-15);
        }
        for k in [1e-2, 1e-3] {
            let s1 = entropy4_closed(StateId::Zero, 1, k).unwrap();
            assert!((s1 / (3.0 * k * k / 32.0) - 1.0).abs() < 10.0 * k);
        }
    }

    #[test]
    fn ghz_minus_state_has_period_two_entanglement() {
        let ghz = SymState::new(spin4(), basis4()[4].clone()).unwrap();
        for &k in &KAPPAS {
            let u = numeric_u(spin4(), k);
            let s: Vec<f64> = Evolution::new(&u, ghz.clone())
                .unwrap()
                .take(20)
                .map(|psi| linear_entropy(&reduced_state(&psi, 1).unwrap()))
                .collect();
            for n in 0..18 {
                assert!((s[n] - s[n + 2]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn averages_reference_values() {
        let tiny = 1e-9;
        assert!((avg_entropy4(StateId::Zero, tiny).unwrap().value - 11.0 / 32.0).abs() < 1e-12);
        assert!((avg_entropy4(StateId::PlusY, tiny).unwrap().value - 0.25).abs() < 1e-12);
        for state in [StateId::Zero, StateId::PlusY] {
            assert!((avg_entropy4(state, PI).unwrap().value - 3.0 / 8.0).abs() < 1e-12);
            assert_eq!(avg_entropy4(state, 0.0).unwrap(), AverageEntropy { value: 0.0, resonant: true });
            assert_eq!(avg_entropy4(state, 2.0 * PI).unwrap(), AverageEntropy { value: 0.25, resonant: true });
            assert_eq!(avg_entropy4(state, 4.0 * PI).unwrap().value, 0.0);
        }
    }

    #[test]
    fn resonant_averages_match_dynamics() {
        for state in [StateId::Zero, StateId::PlusY] {
            for (k, expected) in [(2.0 * PI, 0.25), (4.0 * PI, 0.0)] {
                let numeric = avg_entropy4_numeric(state, k, 4000).unwrap();
                assert!((numeric - expected).abs() < 1e-3, "{state:?} k={k} {numeric}");
            }
        }
    }

    #[test]
    fn numeric_averages_converge_to_closed_forms() {
        for &k in &[0.8, 1.2, 2.5] {
            for state in [StateId::Zero, StateId::PlusY] {
                let numeric = avg_entropy4_numeric(state, k, 200_000).unwrap();
                let closed = avg_entropy4(state, k).unwrap().value;
                assert!((numeric - closed).abs() < 2e-3, "k={k} {numeric} {closed}");
            }
        }
    }

    #[test]
    fn tunneling_report() {
        let r = tunneling(0.1).unwrap();
        assert_eq!(r.n_star_asymptotic.round(), 402_124.0);
        assert!((r.n_star - PI / r.splitting).abs() < 1e-9);
        assert!((r.splitting / (0.1f64.powi(3) / 128.0) - 1.0).abs() < 1e-2);
        assert!((tunneling(PI).unwrap().gamma_minus - 13.0 * PI / 12.0).abs() < 1e-12);
        assert!(tunneling(0.0).is_err());
        assert!(tunneling(-0.3).is_err());
    }

    #[test]
    fn tunneling_phase_is_block_eigenvalue() {
        // e^{-iγ−} is an eigenvalue of the positive-parity block, next to the
        // singlet eigenvalue -1.
        for &k in &[0.1, 0.5, 1.0, PI] {
            let r = tunneling(k).unwrap();
            let block = block4_plus(k).unwrap();
            let lambda = C64::from_polar(1.0, -r.gamma_minus);
            let charpoly = lambda * lambda - block.trace() * lambda + block.determinant();
            assert!(charpoly.norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn tunneling_dynamics() {
        let r = tunneling(0.1).unwrap();
        let n = r.n_star.round() as u64;
        let overlaps = tunneling_overlap_series(0.1, &[0, n]).unwrap();
        assert!(overlaps[0] < 1e-20);
        assert!(overlaps[1] >= 0.95, "{}", overlaps[1]);
        assert!(ghz_fidelity(0.1, n / 2).unwrap() >= 0.95);
    }

    #[test]
    fn tunnel_pair_degenerate_only_for_multiples_of_four() {
        // ⊗|±⟩y are near-eigenvectors at small κ0; compare their eigenphases.
        let kappa0 = 0.05;
        for qubits in 3..=8u32 {
            let spin = Spin::from_qubits(qubits).unwrap();
            let u = numeric_u(spin, kappa0);
            let plus = coherent_state(spin, BlochPoint::plus_y()).unwrap();
            let minus = coherent_state(spin, BlochPoint::minus_y()).unwrap();
            let ep = plus.inner(&u.apply(&plus).unwrap());
            let em = minus.inner(&u.apply(&minus).unwrap());
            assert!(ep.norm() > 0.99 && em.norm() > 0.99);
            let gap = (ep * em.conj()).arg().abs();
            if qubits % 4 == 0 {
                assert!(gap < 1e-3, "{qubits}: {gap}");
            } else {
                assert!(gap > 1.0, "{qubits}: {gap}");
            }
        }
    }

    proptest! {
        #[test]
        fn plus_block_is_unitary(kappa0 in -20.0f64..20.0, n in 0u64..200) {
            let spec = ParityBlockSpec4::new(kappa0).unwrap();
            let (t, u) = chebyshev_pair(spec.chi, n);
            let (alpha, beta) = alpha_beta(spec.kappa, t, u);
            prop_assert!((alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs() < 1e-12);
            let m = block_power4(kappa0, n, Sector::Plus).unwrap();
            let residual = (m.adjoint() * &m - DMatrix::identity(2, 2)).norm();
            prop_assert!(residual < 1e-12);
        }

        #[test]
        fn entropies_in_range(kappa0 in -20.0f64..20.0, n in 0u64..300) {
            for state in [StateId::Zero, StateId::PlusY] {
                let s = entropy4_closed(state, n, kappa0).unwrap();
                prop_assert!((-1e-15..=0.5 + 1e-15).contains(&s));
            }
        }
    }
}
