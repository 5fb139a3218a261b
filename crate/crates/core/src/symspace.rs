//! Spin-j kicked top on the permutation-symmetric (Dicke) subspace.
//!
//! Basis convention: index `k = 0..=2j` holds the Dicke state `|j, m = j - k>`,
//! i.e. the symmetric superposition of qubit strings with `k` ones. `k = 0` is
//! `|00...0>`, the north pole of the Bloch sphere.
//!
//! The Floquet operator is `exp(-i kappa0/(2j) Jz^2) exp(-i p Jy)`. It differs
//! from the qubit-register form (all-to-all Ising coupling plus transverse
//! field) by the global phase `exp(-i kappa0/4)`; see [`qubit_form_phase`].

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Largest qubit register [`symmetric_to_qubits`] will build.
pub const QUBIT_LIMIT: usize = 14;

const NORM_TOLERANCE: f64 = 1e-12;
const UNITARY_TOLERANCE: f64 = 1e-10;

/// Spin quantum number `j`, stored as the integer `2j` (the qubit count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    /// Spin of `qubits` spin-1/2 particles in the symmetric subspace.
    pub fn from_qubits(qubits: u32) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self(qubits))
    }

    /// Parses `j` given as a float; it must be a positive multiple of 1/2.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 1.0 || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::InvalidSpin(j));
        }
        Self::from_qubits(twice.round() as u32)
    }

    pub fn j(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn qubits(self) -> usize {
        self.0 as usize
    }

    /// `2j + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// `m` for Dicke index `k`.
    pub fn m(self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// `(j, kappa0, p)` with `hbar = tau = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KickedTopParams {
    pub spin: Spin,
    pub kappa0: f64,
    pub rotation: f64,
}

impl KickedTopParams {
    /// Standard kicked top with rotation `p = pi/2`.
    pub fn new(spin: Spin, kappa0: f64) -> Result<Self> {
        Self::with_rotation(spin, kappa0, FRAC_PI_2)
    }

    pub fn with_rotation(spin: Spin, kappa0: f64, rotation: f64) -> Result<Self> {
        ensure_finite("kappa0", kappa0)?;
        ensure_finite("rotation", rotation)?;
        Ok(Self { spin, kappa0, rotation })
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }
}

/// Point `(theta0, phi0)` on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

impl BlochPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        ensure_finite("theta0", theta)?;
        ensure_finite("phi0", phi)?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::OutOfRange { name: "theta0", value: theta, min: 0.0, max: PI });
        }
        if !(-PI..=PI).contains(&phi) {
            return Err(Error::OutOfRange { name: "phi0", value: phi, min: -PI, max: PI });
        }
        Ok(Self { theta, phi })
    }

    /// `|00...0>`, on the classical period-4 orbit.
    pub fn north() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// `(pi/2, -pi/2)`: the product of `sigma_y` eigenstates `|+>_y`.
    pub fn plus_y() -> Self {
        Self { theta: FRAC_PI_2, phi: -FRAC_PI_2 }
    }

    /// `(pi/2, pi/2)`: the product of `|->_y`.
    pub fn minus_y() -> Self {
        Self { theta: FRAC_PI_2, phi: FRAC_PI_2 }
    }

    /// `(X, Y, Z)` on the unit sphere.
    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Single-qubit spinor `cos(theta/2)|0> + e^{-i phi} sin(theta/2)|1>`.
    pub fn spinor(self) -> [C64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [C64::new(c, 0.0), C64::from_polar(s, -self.phi)]
    }
}

/// Pure state in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymState {
    spin: Spin,
    amps: DVector<C64>,
}

impl SymState {
    /// Wraps amplitudes, checking length and normalization.
    pub fn new(spin: Spin, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), got: amps.len() });
        }
        let deviation = (amps.norm() - 1.0).abs();
        if deviation > NORM_TOLERANCE {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { spin, amps })
    }

    /// Scales nonzero amplitudes to unit norm.
    pub fn normalized(spin: Spin, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), got: amps.len() });
        }
        let norm = amps.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { deviation: 1.0 });
        }
        Ok(Self { spin, amps: amps / C64::from(norm) })
    }

    pub(crate) fn from_raw(spin: Spin, amps: DVector<C64>) -> Self {
        debug_assert_eq!(amps.len(), spin.dim());
        Self { spin, amps }
    }

    /// Dicke state with `k` excitations (`m = j - k`).
    pub fn dicke(spin: Spin, k: usize) -> Result<Self> {
        if k >= spin.dim() {
            return Err(Error::DimensionMismatch { expected: spin.dim(), got: k + 1 });
        }
        let mut amps = DVector::zeros(spin.dim());
        amps[k] = C64::new(1.0, 0.0);
        Ok(Self { spin, amps })
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn into_amps(self) -> DVector<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &SymState) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &SymState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        self.amps.dotc(&(op * &self.amps))
    }
}

/// Unitary on the Dicke subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    matrix: DMatrix<C64>,
}

impl UnitaryMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let residual = unitarity_residual(&matrix);
        if residual > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// `|U^dag U - I|_F`.
    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.matrix)
    }

    /// `U^n` by repeated squaring.
    pub fn pow(&self, mut n: u64) -> DMatrix<C64> {
        let mut result = DMatrix::identity(self.dim(), self.dim());
        let mut base = self.matrix.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// One application, `U psi`.
    pub fn apply(&self, psi: &SymState) -> Result<SymState> {
        if psi.amps.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: psi.amps.len() });
        }
        Ok(SymState::from_raw(psi.spin, &self.matrix * &psi.amps))
    }
}

fn unitarity_residual(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - DMatrix::<C64>::identity(n, n)).norm()
}

/// `sqrt(C(n, k))` computed in floating point.
pub(crate) fn sqrt_binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc.sqrt()
}

/// SU(2) coherent state `|theta0, phi0>`, the `2j`-fold tensor power of
/// [`BlochPoint::spinor`].
pub fn coherent_state(spin: Spin, point: BlochPoint) -> Result<SymState> {
    let point = BlochPoint::new(point.theta, point.phi)?;
    let n = spin.qubits();
    let (s, c) = (point.theta / 2.0).sin_cos();
    let down = C64::from_polar(s, -point.phi);
    let amps = DVector::from_fn(spin.dim(), |k, _| {
        C64::from(sqrt_binomial(n, k) * c.powi((n - k) as i32)) * down.powi(k as i32)
    });
    // Unit norm holds analytically; rescale away the last few ulps so large
    // registers stay inside the SymState tolerance.
    SymState::normalized(spin, amps)
}

/// `(Jx, Jy, Jz)` in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOps {
    pub jx: DMatrix<C64>,
    pub jy: DMatrix<C64>,
    pub jz: DMatrix<C64>,
}

pub fn collective_ops(spin: Spin) -> CollectiveOps {
    let d = spin.dim();
    let j = spin.j();
    let mut jplus = DMatrix::<C64>::zeros(d, d);
    for k in 1..d {
        // J+ |j, m> = sqrt(j(j+1) - m(m+1)) |j, m+1>, and m+1 sits at index k-1.
        let m = spin.m(k);
        jplus[(k - 1, k)] = C64::from((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus) * C64::new(0.5, 0.0);
    let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);
    let jz = DMatrix::from_fn(d, d, |r, c| if r == c { C64::from(spin.m(r)) } else { C64::new(0.0, 0.0) });
    CollectiveOps { jx, jy, jz }
}

/// `exp(-i p Jy)` from one Hermitian eigendecomposition of `Jy`.
pub fn rotation_y(spin: Spin, angle: f64) -> DMatrix<C64> {
    let jy = collective_ops(spin).jy;
    let eig = SymmetricEigen::new(jy);
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|mu| C64::from_polar(1.0, -angle * mu)));
    v * phases * v.adjoint()
}

/// Floquet operator `exp(-i kappa0/(2j) Jz^2) exp(-i p Jy)`.
pub fn floquet(params: &KickedTopParams) -> UnitaryMatrix {
    let spin = params.spin;
    let mut u = rotation_y(spin, params.rotation);
    let torsion = params.kappa0 / (2.0 * spin.j());
    for (k, mut row) in u.row_iter_mut().enumerate() {
        let m = spin.m(k);
        row *= C64::from_polar(1.0, -torsion * m * m);
    }
    UnitaryMatrix { matrix: u }
}

/// Phase `exp(-i kappa0/4)` relating [`floquet`] to the qubit-register form
/// used by the exact solutions: `floquet = qubit_form_phase * U_qubit`.
pub fn qubit_form_phase(kappa0: f64) -> C64 {
    C64::from_polar(1.0, -kappa0 / 4.0)
}

/// `U^n psi0` by repeated application. No renormalization is applied.
pub fn evolve(u: &UnitaryMatrix, psi0: &SymState, n: u64) -> Result<SymState> {
    if psi0.amps.len() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: psi0.amps.len() });
    }
    let mut amps = psi0.amps.clone();
    for _ in 0..n {
        amps = &u.matrix * &amps;
    }
    Ok(SymState::from_raw(psi0.spin, amps))
}

/// States `psi_0 ..= psi_n`.
pub fn trajectory(u: &UnitaryMatrix, psi0: &SymState, n: u64) -> Result<Vec<SymState>> {
    Evolution::new(u, psi0.clone())
        .map(|evo| evo.take(n as usize + 1).collect())
}

/// Lazy stroboscopic evolution yielding `psi_0, psi_1, ...` forever.
#[derive(Debug, Clone)]
pub struct Evolution<'a> {
    u: &'a UnitaryMatrix,
    next: SymState,
}

impl<'a> Evolution<'a> {
    pub fn new(u: &'a UnitaryMatrix, psi0: SymState) -> Result<Self> {
        if psi0.amps.len() != u.dim() {
            return Err(Error::DimensionMismatch { expected: u.dim(), got: psi0.amps.len() });
        }
        Ok(Self { u, next: psi0 })
    }
}

impl Iterator for Evolution<'_> {
    type Item = SymState;

    fn next(&mut self) -> Option<SymState> {
        let following = SymState::from_raw(self.next.spin, &self.u.matrix * &self.next.amps);
        Some(std::mem::replace(&mut self.next, following))
    }
}

/// Expands a Dicke-basis state into the full `2^(2j)` qubit register.
/// Qubit 1 is the most significant bit of the register index.
pub fn symmetric_to_qubits(psi: &SymState) -> Result<DVector<C64>> {
    let n = psi.spin.qubits();
    if n > QUBIT_LIMIT {
        return Err(Error::SizeLimit { qubits: n, limit: QUBIT_LIMIT });
    }
    let weights: Vec<f64> = (0..=n).map(|k| 1.0 / sqrt_binomial(n, k)).collect();
    Ok(DVector::from_fn(1 << n, |b, _| {
        let k = (b as u32).count_ones() as usize;
        psi.amps[k] * weights[k]
    }))
}

/// Orthogonal projection of a qubit register onto the Dicke basis. Not
/// renormalized.
pub fn qubits_to_symmetric(spin: Spin, register: &DVector<C64>) -> Result<DVector<C64>> {
    let n = spin.qubits();
    if n > QUBIT_LIMIT {
        return Err(Error::SizeLimit { qubits: n, limit: QUBIT_LIMIT });
    }
    if register.len() != 1 << n {
        return Err(Error::DimensionMismatch { expected: 1 << n, got: register.len() });
    }
    let mut amps = DVector::<C64>::zeros(spin.dim());
    for (b, a) in register.iter().enumerate() {
        amps[(b as u32).count_ones() as usize] += *a;
    }
    for (k, a) in amps.iter_mut().enumerate() {
        *a /= sqrt_binomial(n, k);
    }
    Ok(amps)
}

/// Parity `sigma_y ⊗ ... ⊗ sigma_y` in the Dicke basis:
/// `|k> -> i^(2j - 2k) |2j - k>`.
pub fn parity_operator(spin: Spin) -> DMatrix<C64> {
    let n = spin.qubits();
    let mut p = DMatrix::<C64>::zeros(spin.dim(), spin.dim());
    for k in 0..=n {
        p[(n - k, k)] = C64::i().powi(n as i32 - 2 * k as i32);
    }
    p
}

/// `<psi| sigma_y^{⊗2j} |psi>`, real for normalized input.
pub fn parity_expectation(psi: &SymState) -> f64 {
    psi.expectation(&parity_operator(psi.spin)).re
}
