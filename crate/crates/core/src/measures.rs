//! Entanglement and state-comparison measures.
//!
//! Reduced states of permutation-symmetric states are built directly from
//! Dicke amplitudes, so they stay cheap for `2j` in the hundreds. The general
//! qubit-register partial traces in this module serve the tomography pipeline
//! and the brute-force cross-checks.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symspace::{sqrt_binomial, Spin, SymState};

/// Hermiticity tolerance for a valid [`DensityMatrix`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Trace tolerance for a valid [`DensityMatrix`].
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOLERANCE, 0)` count as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let residual = hermitian_residual(&matrix);
        if residual > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { residual });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::BadTrace { trace });
        }
        let min_eigenvalue = hermitian_eigen(&matrix).0.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_unchecked(matrix: DMatrix<C64>) -> Self {
        Self { matrix }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn from_pure(psi: &DVector<C64>) -> Result<Self> {
        let norm_sqr = psi.norm_squared();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::NotNormalized { deviation: 1.0 });
        }
        Ok(Self { matrix: psi * psi.adjoint() / C64::from(norm_sqr) })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) / C64::from(dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals = hermitian_eigen(&self.matrix).0;
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn hermitian_residual(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues and eigenvectors of the Hermitian part of `m`.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// `V diag(sqrt(max(mu, 0))) V^dag`.
fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let (vals, vecs) = hermitian_eigen(m);
    let roots = DVector::from_iterator(vals.len(), vals.iter().map(|&v| C64::from(v.max(0.0).sqrt())));
    &vecs * DMatrix::from_diagonal(&roots) * vecs.adjoint()
}

/// Factor `M` with `rho_keep = M M^dag / <psi|psi>`: rows run over the kept
/// qubits' computational basis, columns over the Dicke basis of the rest.
fn symmetric_factor(psi: &SymState, keep: usize) -> DMatrix<C64> {
    let n = psi.spin().qubits();
    let rest = n - keep;
    let amps = psi.amps();
    DMatrix::from_fn(1 << keep, rest + 1, |s, k| {
        let ones = (s as u32).count_ones() as usize;
        let total = k + ones;
        amps[total] * (sqrt_binomial(rest, k) / sqrt_binomial(n, total))
    })
}

/// Reduced state of one (`keep = 1`) or two (`keep = 2`) qubits of a
/// permutation-symmetric pure state. Which qubits are kept is immaterial.
pub fn reduced_state(psi: &SymState, keep: usize) -> Result<DensityMatrix> {
    let qubits = psi.spin().qubits();
    if !(1..=2).contains(&keep) || keep > qubits {
        return Err(Error::InvalidKeep { keep, qubits });
    }
    let m = symmetric_factor(psi, keep);
    let rho = &m * m.adjoint() / C64::from(psi.amps().norm_squared());
    Ok(DensityMatrix::from_unchecked(rho))
}

fn check_qubit_list(qubits: usize, keep: &[usize]) -> Result<()> {
    let mut seen = 0usize;
    for &q in keep {
        if q >= qubits || seen & (1 << q) != 0 {
            return Err(Error::Invalid(format!("bad qubit list {keep:?} for {qubits} qubits")));
        }
        seen |= 1 << q;
    }
    Ok(())
}

/// Splits a register index into (kept bits in `keep` order, traced bits).
fn compose_index(qubits: usize, keep: &[usize], kept: usize, traced: usize) -> usize {
    let mut index = 0usize;
    let mut t = 0usize;
    let traced_count = qubits - keep.len();
    for q in 0..qubits {
        let bit = match keep.iter().position(|&k| k == q) {
            Some(pos) => (kept >> (keep.len() - 1 - pos)) & 1,
            None => {
                let b = (traced >> (traced_count - 1 - t)) & 1;
                t += 1;
                b
            }
        };
        index |= bit << (qubits - 1 - q);
    }
    index
}

/// Partial trace of a `2^qubits` density matrix onto the listed qubits
/// (qubit 0 is the most significant bit). Output ordering follows `keep`.
pub fn partial_trace(rho: &DMatrix<C64>, qubits: usize, keep: &[usize]) -> Result<DMatrix<C64>> {
    if rho.nrows() != 1 << qubits || !rho.is_square() {
        return Err(Error::DimensionMismatch { expected: 1 << qubits, got: rho.nrows() });
    }
    check_qubit_list(qubits, keep)?;
    let kd = 1 << keep.len();
    let td = 1 << (qubits - keep.len());
    let mut out = DMatrix::<C64>::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            out[(a, b)] = (0..td)
                .map(|t| rho[(compose_index(qubits, keep, a, t), compose_index(qubits, keep, b, t))])
                .sum();
        }
    }
    Ok(out)
}

/// Partial trace of the pure register state `|psi><psi|` without forming the
/// full density matrix.
pub fn partial_trace_pure(psi: &DVector<C64>, qubits: usize, keep: &[usize]) -> Result<DMatrix<C64>> {
    if psi.len() != 1 << qubits {
        return Err(Error::DimensionMismatch { expected: 1 << qubits, got: psi.len() });
    }
    check_qubit_list(qubits, keep)?;
    let kd = 1 << keep.len();
    let td = 1 << (qubits - keep.len());
    let m = DMatrix::from_fn(kd, td, |a, t| psi[compose_index(qubits, keep, a, t)]);
    Ok(&m * m.adjoint())
}

/// `1 - Tr rho^2`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    1.0 - rho.purity()
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: rho.dim() });
    }
    Ok(())
}

/// Largest magnitude outside the diagonal and anti-diagonal.
fn x_residual(m: &DMatrix<C64>) -> f64 {
    let mut r = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                r = r.max(m[(i, j)].norm());
            }
        }
    }
    r
}

/// True when every entry off the diagonal and anti-diagonal is below `tol`.
pub fn is_x_state(rho: &DensityMatrix, tol: f64) -> bool {
    rho.dim() == 4 && x_residual(&rho.matrix) <= tol
}

/// Wootters concurrence. X-shaped inputs take the closed-form path.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    if x_residual(&rho.matrix) == 0.0 {
        concurrence_x(rho)
    } else {
        concurrence_general(rho)
    }
}

/// Wootters concurrence `max(0, s1 - s2 - s3 - s4)`, where `s_i^2` are the
/// eigenvalues of `rho (sy⊗sy) rho^* (sy⊗sy)` in decreasing order.
///
/// With `rho = P P^dag` (`P = V sqrt(D)`), the `s_i` are the singular values
/// of the complex-symmetric matrix `P^T (sy⊗sy) P`; taking them from an SVD
/// avoids square roots of round-off-sized eigenvalues.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let (vals, vecs) = hermitian_eigen(&rho.matrix);
    let min_eigenvalue = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -PSD_TOLERANCE {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    let roots = DVector::from_iterator(4, vals.iter().map(|&v| C64::from(v.max(0.0).sqrt())));
    let p = vecs * DMatrix::from_diagonal(&roots);
    let tau = p.transpose() * spin_flip() * &p;
    let mut s: Vec<f64> = tau.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// `sigma_y ⊗ sigma_y`, which is real.
fn spin_flip() -> DMatrix<C64> {
    let mut y = DMatrix::<C64>::zeros(4, 4);
    y[(0, 3)] = C64::from(-1.0);
    y[(3, 0)] = C64::from(-1.0);
    y[(1, 2)] = C64::from(1.0);
    y[(2, 1)] = C64::from(1.0);
    y
}

/// Concurrence of an X state,
/// `2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))`.
/// Entries outside the X pattern are ignored.
pub fn concurrence_x(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let m = &rho.matrix;
    let d = |i: usize| m[(i, i)].re.max(0.0);
    let a = m[(1, 2)].norm() - (d(0) * d(3)).sqrt();
    let b = m[(0, 3)].norm() - (d(1) * d(2)).sqrt();
    Ok(2.0 * a.max(b).max(0.0))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho_t) rho_e sqrt(rho_t))`, evaluated as the
/// trace norm of `sqrt(rho_t) sqrt(rho_e)`.
pub fn fidelity(rho_t: &DensityMatrix, rho_e: &DensityMatrix) -> Result<f64> {
    if rho_t.dim() != rho_e.dim() {
        return Err(Error::DimensionMismatch { expected: rho_t.dim(), got: rho_e.dim() });
    }
    let prod = psd_sqrt(&rho_t.matrix) * psd_sqrt(&rho_e.matrix);
    Ok(prod.singular_values().sum().min(1.0))
}

/// Real observable sampled at kicks `n = 0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries(pub Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { name: "time series entry", value: *bad });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<f64> for TimeSeries {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Compensated running mean.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMean {
    sum: f64,
    carry: f64,
    count: u64,
}

impl RunningMean {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        // Neumaier summation.
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
        self.count += 1;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> Result<f64> {
        if self.count == 0 {
            return Err(Error::EmptySeries);
        }
        Ok((self.sum + self.carry) / self.count as f64)
    }
}

impl Extend<f64> for RunningMean {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

/// Mean of all entries.
pub fn time_average(series: &TimeSeries) -> Result<f64> {
    let mut acc = RunningMean::new();
    acc.extend(series.0.iter().copied());
    acc.mean()
}

/// Mean of `value(n)` for `n = 0..count`.
pub fn stream_average(count: u64, value: impl FnMut(u64) -> f64) -> Result<f64> {
    stream_average_filtered(count, value, |_| true)
}

/// Mean of `value(n)` over the `n < count` accepted by `filter`. The
/// even-time averages of the `|00..0>` closed forms use `|n| n % 2 == 0`.
pub fn stream_average_filtered(
    count: u64,
    mut value: impl FnMut(u64) -> f64,
    filter: impl Fn(u64) -> bool,
) -> Result<f64> {
    let mut acc = RunningMean::new();
    for n in (0..count).filter(|&n| filter(n)) {
        acc.push(value(n));
    }
    acc.mean()
}

/// Mean single-qubit linear entropy `(N - 1) / 2N` of random permutation
/// symmetric `N`-qubit states.
pub fn rmt_average(qubits: usize) -> Result<f64> {
    if qubits < 2 {
        return Err(Error::Invalid(format!("RMT average needs at least 2 qubits, got {qubits}")));
    }
    let n = qubits as f64;
    Ok((n - 1.0) / (2.0 * n))
}

const HAAR_CHUNK: usize = 512;

/// Haar-random unit vector in the Dicke subspace.
pub fn haar_symmetric_state<R: rand::Rng + ?Sized>(spin: Spin, rng: &mut R) -> SymState {
    loop {
        let amps = DVector::from_fn(spin.dim(), |_, _| {
            C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        if let Ok(state) = SymState::normalized(spin, amps) {
            return state;
        }
    }
}

/// Monte-Carlo mean single-qubit linear entropy over `count` Haar-random
/// symmetric states. Chunks of samples draw from independent ChaCha streams
/// of `seed`, so the result does not depend on the thread count.
pub fn haar_symmetric_sample(spin: Spin, count: usize, seed: u64) -> Result<f64> {
    if count == 0 {
        return Err(Error::EmptySeries);
    }
    let chunks = count.div_ceil(HAAR_CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let size = HAAR_CHUNK.min(count - c * HAAR_CHUNK);
            let mut acc = RunningMean::new();
            for _ in 0..size {
                let psi = haar_symmetric_state(spin, &mut rng);
                // 2j >= 1 always admits keep = 1.
                acc.push(linear_entropy(&reduced_state(&psi, 1).expect("one qubit")));
            }
            acc.sum + acc.carry
        })
        .collect();
    Ok(partial.iter().sum::<f64>() / count as f64)
}
