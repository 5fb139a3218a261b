//! Post-processing for three-qubit state tomography: readout-error
//! correction, Pauli-expectation reconstruction with projection onto the
//! density matrices, and entanglement metrics of the reconstructed states.
//!
//! Register conventions: qubit 1 is the most significant bit of a basis index
//! and the leftmost character of a Pauli label (`"XYI"` is `σx ⊗ σy ⊗ I`).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{
    concurrence, fidelity, hermitian_eigen, hermitian_residual, linear_entropy, partial_trace,
    DensityMatrix,
};

/// Number of qubits handled by the reconstruction.
pub const TOMO_QUBITS: usize = 3;
/// Hermiticity tolerance for raw reconstructed matrices.
pub const RAW_HERMITIAN_TOLERANCE: f64 = 1e-8;
/// Allowed excess of `|⟨P⟩|` over 1 from round-off.
pub const EXPECTATION_TOLERANCE: f64 = 1e-9;

/// Per-qubit readout fidelities: `f0[i]` is the probability of reading 0 when
/// qubit `i` is in `|0⟩`, `f1[i]` the probability of reading 1 for `|1⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    pub f0: Vec<f64>,
    pub f1: Vec<f64>,
}

const DEVICE_READOUT: &str = include_str!("../data/readout_device.json");

impl ReadoutModel {
    pub fn new(f0: Vec<f64>, f1: Vec<f64>) -> Result<Self> {
        let model = Self { f0, f1 };
        model.validate()?;
        Ok(model)
    }

    /// Ideal readout on `qubits` qubits.
    pub fn perfect(qubits: usize) -> Self {
        Self { f0: vec![1.0; qubits], f1: vec![1.0; qubits] }
    }

    /// Fitted fidelities of the superconducting three-qubit device,
    /// `f0 = (0.98, 0.98, 0.96)`, `f1 = (0.92, 0.94, 0.87)`.
    pub fn device() -> Self {
        Self::from_json(DEVICE_READOUT).expect("bundled readout model is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: Self =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("readout model: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn qubits(&self) -> usize {
        self.f0.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.f0.len() != self.f1.len() || self.f0.is_empty() {
            return Err(Error::Invalid(format!(
                "readout model needs equal, nonempty f0/f1 lists, got {} and {}",
                self.f0.len(),
                self.f1.len()
            )));
        }
        for (qubit, (&f0, &f1)) in self.f0.iter().zip(&self.f1).enumerate() {
            for (name, f) in [("f0", f0), ("f1", f1)] {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(Error::OutOfRange { name, value: f, min: 0.0, max: 1.0 });
                }
            }
            let determinant = f0 + f1 - 1.0;
            if determinant <= 0.0 {
                return Err(Error::SingularReadout { qubit: qubit + 1, determinant });
            }
        }
        Ok(())
    }

    /// `F_i = [[f0, 1 − f1], [1 − f0, f1]]`.
    pub fn qubit_matrix(&self, qubit: usize) -> [[f64; 2]; 2] {
        let (f0, f1) = (self.f0[qubit], self.f1[qubit]);
        [[f0, 1.0 - f1], [1.0 - f0, f1]]
    }

    fn qubit_inverse(&self, qubit: usize) -> [[f64; 2]; 2] {
        let (f0, f1) = (self.f0[qubit], self.f1[qubit]);
        let det = f0 + f1 - 1.0;
        [[f1 / det, -(1.0 - f1) / det], [-(1.0 - f0) / det, f0 / det]]
    }

    /// Full `F = F1 ⊗ F2 ⊗ ...`.
    pub fn matrix(&self) -> DMatrix<f64> {
        (0..self.qubits()).fold(DMatrix::from_element(1, 1, 1.0), |acc, q| {
            let m = self.qubit_matrix(q);
            acc.kronecker(&DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]]))
        })
    }
}

/// Populations of the computational basis states, index `b1 b2 ... bn` in
/// binary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationVector {
    pub probs: Vec<f64>,
}

/// Tolerance on the sum of measured populations.
pub const POPULATION_SUM_TOLERANCE: f64 = 1e-6;
/// Corrected populations below `-NEGATIVE_POPULATION_NOISE` are reported.
pub const NEGATIVE_POPULATION_NOISE: f64 = 1e-12;

impl PopulationVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if !probs.len().is_power_of_two() || probs.len() < 2 {
            return Err(Error::Invalid(format!("population vector length {} is not 2^n", probs.len())));
        }
        if let Some(&bad) = probs.iter().find(|p| !p.is_finite()) {
            return Err(Error::NonFinite { name: "population", value: bad });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > POPULATION_SUM_TOLERANCE {
            return Err(Error::Invalid(format!("populations sum to {sum}, expected 1")));
        }
        Ok(Self { probs })
    }

    pub fn qubits(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }

    /// Diagonal of a density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self { probs: rho.matrix().diagonal().iter().map(|z| z.re).collect() }
    }
}

/// Applies `⊗ m_q` to a population vector one qubit at a time.
fn apply_per_qubit(probs: &[f64], qubits: usize, m: impl Fn(usize) -> [[f64; 2]; 2]) -> Vec<f64> {
    let mut out = probs.to_vec();
    for q in 0..qubits {
        let stride = 1 << (qubits - 1 - q);
        let mq = m(q);
        for base in 0..out.len() {
            if base & stride != 0 {
                continue;
            }
            let (a, b) = (out[base], out[base | stride]);
            out[base] = mq[0][0] * a + mq[0][1] * b;
            out[base | stride] = mq[1][0] * a + mq[1][1] * b;
        }
    }
    out
}

fn check_model_size(model: &ReadoutModel, p: &PopulationVector) -> Result<()> {
    model.validate()?;
    if p.qubits() != model.qubits() {
        return Err(Error::DimensionMismatch { expected: 1 << model.qubits(), got: p.probs.len() });
    }
    Ok(())
}

/// Intrinsic populations `p_int = F⁻¹ p_m`. Negative entries are kept;
/// those beyond round-off are reported through `log::warn!`.
pub fn correct_populations(model: &ReadoutModel, measured: &PopulationVector) -> Result<PopulationVector> {
    check_model_size(model, measured)?;
    let probs = apply_per_qubit(&measured.probs, model.qubits(), |q| model.qubit_inverse(q));
    if let Some(min) = probs.iter().copied().reduce(f64::min).filter(|&m| m < -NEGATIVE_POPULATION_NOISE) {
        log::warn!("corrected populations contain negative entries (min {min:e})");
    }
    Ok(PopulationVector { probs })
}

/// Measured populations `p_m = F p` produced by the readout model.
pub fn apply_readout(model: &ReadoutModel, intrinsic: &PopulationVector) -> Result<PopulationVector> {
    check_model_size(model, intrinsic)?;
    Ok(PopulationVector { probs: apply_per_qubit(&intrinsic.probs, model.qubits(), |q| model.qubit_matrix(q)) })
}

/// Euclidean projection of a real vector onto the probability simplex.
fn project_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if v - candidate > 0.0 {
            shift = candidate;
        }
    }
    values.iter().map(|&v| (v - shift).max(0.0)).collect()
}

/// Nearest density matrix in Frobenius norm: the eigenvalues are projected
/// onto the probability simplex (negatives zeroed, the deficit spread evenly
/// over the remaining eigenvalues) and the eigenvectors are kept.
pub fn project_psd(rho_raw: &DMatrix<C64>) -> Result<DensityMatrix> {
    if !rho_raw.is_square() {
        return Err(Error::DimensionMismatch { expected: rho_raw.nrows(), got: rho_raw.ncols() });
    }
    let residual = hermitian_residual(rho_raw);
    if residual > RAW_HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { residual });
    }
    let (vals, vecs) = hermitian_eigen(rho_raw);
    let projected = project_simplex(&vals);
    let d = DVector::from_iterator(projected.len(), projected.into_iter().map(C64::from));
    let rho = &vecs * DMatrix::from_diagonal(&d) * vecs.adjoint();
    // Exact Hermitian symmetrization of round-off.
    let rho = (&rho + rho.adjoint()) * C64::from(0.5);
    Ok(DensityMatrix::from_unchecked(rho))
}

fn pauli(c: char) -> Option<DMatrix<C64>> {
    let o = C64::from(0.0);
    let l = C64::from(1.0);
    let i = C64::new(0.0, 1.0);
    let entries = match c {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => return None,
    };
    Some(DMatrix::from_row_slice(2, 2, &entries))
}

/// Tensor product named by a Pauli label such as `"XYI"`.
pub fn pauli_matrix(label: &str) -> Result<DMatrix<C64>> {
    if label.is_empty() {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    label.chars().try_fold(DMatrix::from_element(1, 1, C64::from(1.0)), |acc, c| {
        pauli(c).map(|p| acc.kronecker(&p)).ok_or_else(|| Error::InvalidLabel(label.to_string()))
    })
}

/// All `4^qubits` labels in lexicographic order over `I, X, Y, Z`.
pub fn pauli_labels(qubits: usize) -> Vec<String> {
    (0..qubits).fold(vec![String::new()], |acc, _| {
        acc.iter().flat_map(|s| "IXYZ".chars().map(move |c| format!("{s}{c}"))).collect()
    })
}

/// `Tr(ρ P)` for every three-qubit Pauli product.
pub fn pauli_expectations(rho: &DensityMatrix) -> Result<BTreeMap<String, f64>> {
    if rho.dim() != 1 << TOMO_QUBITS {
        return Err(Error::DimensionMismatch { expected: 1 << TOMO_QUBITS, got: rho.dim() });
    }
    pauli_labels(TOMO_QUBITS)
        .into_iter()
        .map(|label| {
            let p = pauli_matrix(&label)?;
            let value = (rho.matrix() * p).trace().re;
            Ok((label, value))
        })
        .collect()
}

/// Linear-inversion estimate `ρ = (1/8) Σ ⟨P⟩ P` followed by
/// [`project_psd`].
pub fn reconstruct(expectations: &BTreeMap<String, f64>) -> Result<DensityMatrix> {
    let labels = pauli_labels(TOMO_QUBITS);
    if let Some(unknown) = expectations.keys().find(|k| k.len() != TOMO_QUBITS || pauli_matrix(k).is_err()) {
        return Err(Error::InvalidLabel(unknown.clone()));
    }
    let dim = 1 << TOMO_QUBITS;
    let mut raw = DMatrix::<C64>::zeros(dim, dim);
    for label in &labels {
        let value = *expectations.get(label).ok_or_else(|| Error::MissingLabel(label.clone()))?;
        if !value.is_finite() || value.abs() > 1.0 + EXPECTATION_TOLERANCE {
            return Err(Error::ExpectationOutOfRange { label: label.clone(), value });
        }
        raw += pauli_matrix(label)? * C64::from(value);
    }
    let identity = expectations["III"];
    if (identity - 1.0).abs() > EXPECTATION_TOLERANCE {
        return Err(Error::Invalid(format!("identity expectation must be 1, got {identity}")));
    }
    project_psd(&(raw / C64::from(dim as f64)))
}

/// Entanglement summary of a reconstructed three-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineMetrics {
    /// Uhlmann fidelity between the theoretical and the reconstructed state.
    pub fidelity: f64,
    /// Mean single-qubit linear entropy over qubits 1, 2, 3.
    pub mean_linear_entropy: f64,
    /// Mean concurrence over the pairs (1,2), (2,3), (1,3).
    pub mean_concurrence: f64,
}

/// Metrics of `rho_e` (no permutation symmetry assumed) and its fidelity to
/// `rho_t`.
pub fn pipeline_metrics(rho_e: &DensityMatrix, rho_t: &DensityMatrix) -> Result<PipelineMetrics> {
    let dim = 1 << TOMO_QUBITS;
    for rho in [rho_e, rho_t] {
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: rho.dim() });
        }
    }
    let m = rho_e.matrix();
    let mut entropy = 0.0;
    for q in 0..TOMO_QUBITS {
        entropy += linear_entropy(&DensityMatrix::from_unchecked(partial_trace(m, TOMO_QUBITS, &[q])?));
    }
    let mut conc = 0.0;
    for pair in [[0, 1], [1, 2], [0, 2]] {
        conc += concurrence(&DensityMatrix::from_unchecked(partial_trace(m, TOMO_QUBITS, &pair)?))?;
    }
    Ok(PipelineMetrics {
        fidelity: fidelity(rho_t, rho_e)?,
        mean_linear_entropy: entropy / TOMO_QUBITS as f64,
        mean_concurrence: conc / 3.0,
    })
}
