//! Exact solution of the three-qubit kicked top.
//!
//! The parity operator `σy⊗σy⊗σy` commutes with the Floquet operator and
//! splits the four-dimensional symmetric space into two 2×2 blocks,
//!
//! ```text
//! φ1± = (|000⟩ ∓ i|111⟩)/√2,   φ2± = (|W⟩ ± i|W̄⟩)/√2.
//! ```
//!
//! Each block is an SU(2) rotation up to phase, so its `n`-th power is
//! expressed through the Chebyshev pair `(T_n(χ), U_{n-1}(χ))` with
//! `κ = κ0/6` and `χ = sin(2κ)/2`. Everything here is written for the
//! "qubit form" of the Floquet operator, which differs from
//! [`floquet`](crate::symspace::floquet) by the global phase
//! [`qubit_form_phase`](crate::symspace::qubit_form_phase). Closed-form states
//! returned by this module include that phase, so they agree with numerics
//! amplitude by amplitude.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{chebyshev_pair, Chebyshev};
use crate::error::{ensure_finite, Error, Result};
use crate::measures::{concurrence, reduced_state, DensityMatrix};
use crate::symspace::{coherent_state, BlochPoint, Spin, SymState};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const I: C64 = C64::new(0.0, 1.0);

/// Featured initial product states with closed-form entanglement dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateId {
    /// `|00..0⟩`, the north pole `θ0 = 0`.
    Zero,
    /// `⊗|+⟩y` at `(θ0, φ0) = (π/2, −π/2)`.
    PlusY,
}

impl StateId {
    pub fn point(self) -> BlochPoint {
        match self {
            StateId::Zero => BlochPoint::north(),
            StateId::PlusY => BlochPoint::plus_y(),
        }
    }
}

/// Parity sector of `σy⊗σy⊗σy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }
}

/// Derived parameters of the three-qubit parity blocks.
///
/// The positive-parity block acts as a rotation by `2γ` about the axis
/// `(θ, φ)` with `cos γ = χ`, `sin θ sin γ = √3/2` and `φ = π/2 + 2κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityBlockSpec3 {
    pub kappa0: f64,
    pub kappa: f64,
    pub chi: f64,
    pub gamma: f64,
    pub axis_theta: f64,
    pub axis_phi: f64,
}

impl ParityBlockSpec3 {
    pub fn new(kappa0: f64) -> Result<Self> {
        ensure_finite("kappa0", kappa0)?;
        let kappa = kappa0 / 6.0;
        let chi = (2.0 * kappa).sin() / 2.0;
        let gamma = chi.acos();
        let sin_gamma = gamma.sin();
        let axis_theta = (SQRT3_2 / sin_gamma).atan2(-(2.0 * kappa).cos() / (2.0 * sin_gamma));
        Ok(Self { kappa0, kappa, chi, gamma, axis_theta, axis_phi: PI / 2.0 + 2.0 * kappa })
    }

    /// Unit rotation axis in Cartesian form.
    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.axis_theta.sin_cos();
        let (sp, cp) = self.axis_phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `n`-th power of a 2×2 parity block,
/// `phase · [[α, ∓β*], [±β, α*]]` with the upper sign for positive parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPower {
    pub n: u64,
    pub sign: f64,
    pub phase: C64,
    pub alpha: C64,
    pub beta: C64,
}

impl BlockPower {
    pub fn matrix(&self) -> Matrix2<C64> {
        let s = C64::from(self.sign);
        Matrix2::new(self.alpha, -s * self.beta.conj(), s * self.beta, self.alpha.conj()) * self.phase
    }

    /// `|α|² + |β|²`, which is 1 by the Pell identity.
    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// `e^{-i n π/4}` with the multiple of `π/4` reduced exactly.
pub(crate) fn eighth_root_power(n: u64) -> C64 {
    let k = (n % 8) as f64;
    C64::from_polar(1.0, -k * PI / 4.0)
}

fn alpha_beta(kappa: f64, t: f64, u: f64) -> (C64, C64) {
    let alpha = C64::new(t, 0.5 * u * (2.0 * kappa).cos());
    let beta = C64::from_polar(SQRT3_2 * u, 2.0 * kappa);
    (alpha, beta)
}

/// Closed-form `n`-th power of a three-qubit parity block.
pub fn block_power3(kappa0: f64, n: u64, parity: Parity) -> Result<BlockPower> {
    let spec = ParityBlockSpec3::new(kappa0)?;
    let (t, u) = chebyshev_pair(spec.chi, n);
    let (alpha, beta) = alpha_beta(spec.kappa, t, u);
    let sign = parity.sign();
    // (±1)^n e^{∓inπ/4} e^{-inκ}
    let pi_part = match parity {
        Parity::Plus => eighth_root_power(n),
        Parity::Minus => eighth_root_power(n).conj() * if n % 2 == 0 { 1.0 } else { -1.0 },
    };
    let phase = pi_part * C64::from_polar(1.0, -(n as f64) * spec.kappa);
    Ok(BlockPower { n, sign, phase, alpha, beta })
}

/// One kick of the qubit-form Floquet operator restricted to a parity block,
/// in the basis `{φ1±, φ2±}`.
pub fn block3(kappa0: f64, parity: Parity) -> Result<Matrix2<C64>> {
    ensure_finite("kappa0", kappa0)?;
    let kappa = kappa0 / 6.0;
    let s = parity.sign();
    let em = C64::from_polar(1.0, -2.0 * kappa);
    let ep = em.conj();
    let prefactor = C64::from_polar(s, -s * PI / 4.0 - kappa);
    Ok(Matrix2::new(
        I * 0.5 * em,
        -s * SQRT3_2 * em,
        s * SQRT3_2 * ep,
        -I * 0.5 * ep,
    ) * prefactor)
}

/// Parity basis `[φ1+, φ2+, φ1−, φ2−]` as Dicke-basis vectors (index `k` is
/// the number of ones).
pub fn parity_basis3() -> [DVector<C64>; 4] {
    let h = C64::from(FRAC_1_SQRT_2);
    let ih = I * FRAC_1_SQRT_2;
    let v = |a: [C64; 4]| DVector::from_row_slice(&a);
    let z = C64::from(0.0);
    [
        v([h, z, z, -ih]),
        v([z, h, ih, z]),
        v([h, z, z, ih]),
        v([z, h, -ih, z]),
    ]
}

/// Closed-form `U^n` in the Dicke basis, including the global phase of the
/// numeric Floquet operator.
pub fn floquet_power3(kappa0: f64, n: u64) -> Result<DMatrix<C64>> {
    let plus = block_power3(kappa0, n, Parity::Plus)?.matrix();
    let minus = block_power3(kappa0, n, Parity::Minus)?.matrix();
    let basis = parity_basis3();
    let b = DMatrix::from_columns(&basis);
    let mut blocks = DMatrix::<C64>::zeros(4, 4);
    blocks.view_mut((0, 0), (2, 2)).copy_from(&plus);
    blocks.view_mut((2, 2), (2, 2)).copy_from(&minus);
    let global = C64::from_polar(1.0, -(n as f64) * kappa0 / 4.0);
    Ok(&b * blocks * b.adjoint() * global)
}

/// Three-qubit symmetric state in the parity basis,
/// `a1 φ1+ + a2 φ2+ + b1 φ1− + b2 φ2−`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralState3 {
    pub a1: C64,
    pub a2: C64,
    pub b1: C64,
    pub b2: C64,
}

impl GeneralState3 {
    pub fn new(a1: C64, a2: C64, b1: C64, b2: C64) -> Result<Self> {
        let state = Self { a1, a2, b1, b2 };
        let deviation = (state.norm_sqr() - 1.0).abs();
        if !(deviation <= 1e-10) {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(state)
    }

    fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr() + self.b1.norm_sqr() + self.b2.norm_sqr()
    }

    /// Coefficients of a three-qubit symmetric state.
    pub fn from_sym(psi: &SymState) -> Result<Self> {
        if psi.spin().qubits() != 3 {
            return Err(Error::DimensionMismatch { expected: 4, got: psi.amps().len() });
        }
        let [p1, p2, m1, m2] = parity_basis3();
        let c = |v: &DVector<C64>| v.dotc(psi.amps());
        Self::new(c(&p1), c(&p2), c(&m1), c(&m2))
    }

    /// Coefficients of the coherent state `⊗³(cos(θ/2)|0⟩ + e^{-iφ} sin(θ/2)|1⟩)`.
    pub fn from_point(point: BlochPoint) -> Result<Self> {
        Self::from_sym(&coherent_state(spin3(), point)?)
    }

    pub fn featured(state: StateId) -> Self {
        match state {
            // (φ1+ + φ1−)/√2
            StateId::Zero => Self {
                a1: C64::from(FRAC_1_SQRT_2),
                a2: C64::from(0.0),
                b1: C64::from(FRAC_1_SQRT_2),
                b2: C64::from(0.0),
            },
            // (φ1+ + √3 i φ2+)/2
            StateId::PlusY => Self {
                a1: C64::from(0.5),
                a2: I * SQRT3_2,
                b1: C64::from(0.0),
                b2: C64::from(0.0),
            },
        }
    }

    /// Evolved coefficients after `n` kicks, dropping the phase
    /// `e^{-inκ0/4} e^{-in(π/4+κ)}` common to both sectors. The negative-parity
    /// coefficients carry the relative phase `(-i)^n`.
    pub fn evolve(&self, alpha: C64, beta: C64, n: u64) -> Self {
        let rel = eighth_root_power(2 * (n % 4));
        Self {
            a1: self.a1 * alpha - self.a2 * beta.conj(),
            a2: self.a1 * beta + self.a2 * alpha.conj(),
            b1: rel * (self.b1 * alpha + self.b2 * beta.conj()),
            b2: rel * (self.b2 * alpha.conj() - self.b1 * beta),
        }
    }

    /// Single-qubit reduced state `[[r, s], [s*, 1 - r]]`.
    pub fn rho1(&self) -> DensityMatrix {
        let (a1, a2, b1, b2) = (self.a1, self.a2, self.b1, self.b2);
        let r = 0.5 + (a1 * b1.conj() + a2 * b2.conj() / 3.0).re;
        let s = C64::from((a1 * b2.conj() + b1 * a2.conj()).re / 3f64.sqrt())
            + I * ((a1 * a2.conj() + b1 * b2.conj()).im / 3f64.sqrt())
            - I / 3.0 * (a2 + b2) * (a2 - b2).conj();
        let m = DMatrix::from_row_slice(2, 2, &[C64::from(r), s, s.conj(), C64::from(1.0 - r)]);
        DensityMatrix::from_unchecked(m)
    }

    /// Dicke-basis vector `a1 φ1+ + a2 φ2+ + b1 φ1− + b2 φ2−`.
    pub fn to_dicke(&self) -> DVector<C64> {
        let [p1, p2, m1, m2] = parity_basis3();
        p1 * self.a1 + p2 * self.a2 + m1 * self.b1 + m2 * self.b2
    }
}

fn spin3() -> Spin {
    Spin::from_qubits(3).expect("3 qubits")
}

fn evolved_coefficients(state: &GeneralState3, n: u64, kappa0: f64) -> Result<GeneralState3> {
    let spec = ParityBlockSpec3::new(kappa0)?;
    let (t, u) = chebyshev_pair(spec.chi, n);
    let (alpha, beta) = alpha_beta(spec.kappa, t, u);
    Ok(state.evolve(alpha, beta, n))
}

/// Single-qubit reduced state of a general three-qubit state after `n` kicks.
pub fn general_rho1_3(state: &GeneralState3, n: u64, kappa0: f64) -> Result<DensityMatrix> {
    GeneralState3::new(state.a1, state.a2, state.b1, state.b2)?;
    Ok(evolved_coefficients(state, n, kappa0)?.rho1())
}

/// Single-qubit linear entropy `2[r(1 − r) − |s|²]` of a general three-qubit
/// state after `n` kicks.
pub fn general_entropy3(state: &GeneralState3, n: u64, kappa0: f64) -> Result<f64> {
    let rho = general_rho1_3(state, n, kappa0)?;
    let m = rho.matrix();
    let r = m[(0, 0)].re;
    Ok(2.0 * (r * (1.0 - r) - m[(0, 1)].norm_sqr()))
}

/// Closed-form `U^n ψ0` as a Dicke-basis state, phase included.
pub fn state_closed(state: &GeneralState3, n: u64, kappa0: f64) -> Result<SymState> {
    GeneralState3::new(state.a1, state.a2, state.b1, state.b2)?;
    let evolved = evolved_coefficients(state, n, kappa0)?;
    let kappa = kappa0 / 6.0;
    let phase = eighth_root_power(n)
        * C64::from_polar(1.0, -(n as f64) * (kappa + kappa0 / 4.0));
    Ok(SymState::from_raw(spin3(), evolved.to_dicke() * phase))
}

fn entropy_zero(u: f64) -> f64 {
    let lambda = u * u / 2.0;
    2.0 * lambda * (1.0 - lambda)
}

fn entropy_plus_y(chi: f64, u: f64) -> f64 {
    let x = 2.0 * chi * chi * u * u;
    2.0 * x * (1.0 - x)
}

fn concurrence_zero(u: f64) -> f64 {
    let a = u.abs();
    a * (a / 2.0 - (1.0 - 0.75 * u * u).max(0.0).sqrt()).abs()
}

/// `n` rounded up to the next even number; odd times share the value of the
/// following even time.
fn even_partner(n: u64) -> u64 {
    n + n % 2
}

/// Closed-form single-qubit linear entropy of a featured state after `n`
/// kicks (`0` at `n = 0`).
pub fn entropy3_closed(state: StateId, n: u64, kappa0: f64) -> Result<f64> {
    let spec = ParityBlockSpec3::new(kappa0)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(match state {
        StateId::Zero => entropy_zero(chebyshev_pair(spec.chi, even_partner(n)).1),
        StateId::PlusY => entropy_plus_y(spec.chi, chebyshev_pair(spec.chi, n).1),
    })
}

/// Closed-form two-qubit concurrence of the evolved `|000⟩` (`0` at `n = 0`).
pub fn concurrence3_000(n: u64, kappa0: f64) -> Result<f64> {
    let spec = ParityBlockSpec3::new(kappa0)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(concurrence_zero(chebyshev_pair(spec.chi, even_partner(n)).1))
}

/// Two-qubit concurrence of a featured state from its closed-form evolved
/// state. For `|000⟩` this is [`concurrence3_000`]; for `|+++⟩y` the reduced
/// state of the closed-form state is passed to the Wootters formula.
pub fn concurrence3_closed(state: StateId, n: u64, kappa0: f64) -> Result<f64> {
    match state {
        StateId::Zero => concurrence3_000(n, kappa0),
        StateId::PlusY => {
            let psi = state_closed(&GeneralState3::featured(state), n, kappa0)?;
            concurrence(&reduced_state(&psi, 2)?)
        }
    }
}

/// Per-kick closed-form values `(S(n), C(n))` for `n = 0, 1, 2, ...` at O(1)
/// cost per step. The concurrence is only available for `|000⟩`.
#[derive(Debug, Clone)]
pub struct Series3 {
    state: StateId,
    chi: f64,
    walker: Chebyshev,
}

impl Series3 {
    pub fn new(state: StateId, kappa0: f64) -> Result<Self> {
        let spec = ParityBlockSpec3::new(kappa0)?;
        Ok(Self { state, chi: spec.chi, walker: Chebyshev::new(spec.chi) })
    }
}

impl Iterator for Series3 {
    type Item = (f64, Option<f64>);

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.walker.degree();
        let item = if n == 0 {
            (0.0, (self.state == StateId::Zero).then_some(0.0))
        } else {
            match self.state {
                StateId::Zero => {
                    let u = if n % 2 == 0 { self.walker.u_prev() } else { self.walker.u() };
                    (entropy_zero(u), Some(concurrence_zero(u)))
                }
                StateId::PlusY => (entropy_plus_y(self.chi, self.walker.u_prev()), None),
            }
        };
        self.walker.advance();
        Some(item)
    }
}

/// Long-time average together with a flag marking parameter values where
/// the averaging formula does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageEntropy {
    pub value: f64,
    pub resonant: bool,
}

/// Infinite-time average of the single-qubit linear entropy.
///
/// At `κ0 ≡ 0 (mod 3π)` the Floquet operator is a product of single-qubit
/// unitaries and the exact average `0` is returned with `resonant = true`.
pub fn avg_entropy3(state: StateId, kappa0: f64) -> Result<AverageEntropy> {
    ensure_finite("kappa0", kappa0)?;
    let s2 = (kappa0 / 3.0).sin().powi(2);
    if s2 < 1e-24 {
        return Ok(AverageEntropy { value: 0.0, resonant: true });
    }
    let d = (4.0 - s2).powi(2);
    let value = match state {
        StateId::Zero => (5.0 - 2.0 * s2) / d,
        StateId::PlusY => s2 * (8.0 - 5.0 * s2) / d,
    };
    Ok(AverageEntropy { value, resonant: false })
}

/// Mean of the closed-form entropy over kicks `1..=count`.
pub fn avg_entropy3_numeric(state: StateId, kappa0: f64, count: u64) -> Result<f64> {
    if count == 0 {
        return Err(Error::EmptySeries);
    }
    let mut acc = crate::measures::RunningMean::new();
    acc.extend(Series3::new(state, kappa0)?.skip(1).take(count as usize).map(|(s, _)| s));
    acc.mean()
}

/// Infinite-time average entropy of an arbitrary coherent state at
/// `κ0 = 3π/2`, where the dynamics has period 12.
pub fn avg_entropy_3pi2(point: BlochPoint) -> f64 {
    let (theta, phi) = (point.theta, point.phi);
    (15.0
        + (4.0 * theta).cos()
        + (1.0 + 3.0 * (2.0 * theta).cos()) * theta.sin().powi(4) * (2.0 * phi).sin().powi(2))
        / 48.0
}

/// Small-`κ0` time scales of the `|000⟩` dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NStarEstimate {
    /// `floor(3π/κ0)`: first approach to maximal entanglement.
    pub first_max: u64,
    /// Odd-integer form `2 floor(3π/(2κ0) − 1/2) + 1`.
    pub refined: u64,
    /// Approximate return to a near-product state, `2 · first_max`.
    pub disentangle: u64,
}

pub fn n_star_000(kappa0: f64) -> Result<NStarEstimate> {
    ensure_finite("kappa0", kappa0)?;
    if kappa0 <= 0.0 {
        return Err(Error::OutOfRange { name: "kappa0", value: kappa0, min: 0.0, max: f64::INFINITY });
    }
    let first_max = (3.0 * PI / kappa0).floor() as u64;
    let refined = 2 * (3.0 * PI / (2.0 * kappa0) - 0.5).floor().max(0.0) as u64 + 1;
    Ok(NStarEstimate { first_max, refined, disentangle: 2 * first_max })
}
