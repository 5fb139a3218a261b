//! Husimi distributions `|⟨θ, φ|ψ⟩|²` of symmetric states on a sphere grid.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symspace::{sqrt_binomial, SymState};

pub const DEFAULT_N_THETA: usize = 101;
pub const DEFAULT_N_PHI: usize = 201;

/// Values on a uniform `θ × φ` grid covering `[0, π] × [−π, π]`. Both poles
/// and both copies of the `φ = ±π` seam are grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// `values[(i, k)]` at `(thetas[i], phis[k])`.
    pub values: DMatrix<f64>,
}

fn nodes(count: usize, from: f64, to: f64) -> Vec<f64> {
    (0..count).map(|i| from + (to - from) * i as f64 / (count - 1) as f64).collect()
}

impl SphereGrid {
    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    /// `(θ, φ, value)` in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.thetas.iter().enumerate().flat_map(move |(i, &t)| {
            self.phis.iter().enumerate().map(move |(k, &p)| (t, p, self.values[(i, k)]))
        })
    }

    /// Grid node with the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let (mut best, mut at) = (f64::NEG_INFINITY, (0.0, 0.0));
        for (t, p, v) in self.rows() {
            if v > best {
                best = v;
                at = (t, p);
            }
        }
        at
    }

    /// Trapezoid-rule integral of `values · sin θ` over the sphere, scaled by
    /// `scale`. With `scale = (2j + 1)/4π` this is 1 for a normalized state.
    pub fn integrate(&self, scale: f64) -> f64 {
        let weights = |xs: &[f64]| -> Vec<f64> {
            let h = xs[1] - xs[0];
            (0..xs.len()).map(|i| if i == 0 || i + 1 == xs.len() { h / 2.0 } else { h }).collect()
        };
        let wt = weights(&self.thetas);
        let wp = weights(&self.phis);
        let mut total = 0.0;
        for (i, &t) in self.thetas.iter().enumerate() {
            let row: f64 = (0..self.n_phi()).map(|k| wp[k] * self.values[(i, k)]).sum();
            total += wt[i] * t.sin() * row;
        }
        scale * total
    }
}

/// Husimi distribution of `psi` on an `n_theta × n_phi` grid.
pub fn husimi_grid(psi: &SymState, n_theta: usize, n_phi: usize) -> Result<SphereGrid> {
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::Invalid(format!("sphere grid needs at least 2×2 nodes, got {n_theta}×{n_phi}")));
    }
    let n = psi.spin().qubits();
    let binom: Vec<f64> = (0..=n).map(|k| sqrt_binomial(n, k)).collect();
    let amps = psi.amps();
    let norm_sqr = amps.norm_squared();
    let thetas = nodes(n_theta, 0.0, PI);
    let phis = nodes(n_phi, -PI, PI);
    let rows: Vec<Vec<f64>> = thetas
        .par_iter()
        .map(|&theta| {
            let (s, c) = (theta / 2.0).sin_cos();
            // Real part of each coherent amplitude, before the azimuthal phase.
            let radial: Vec<f64> = (0..=n)
                .map(|k| binom[k] * c.powi((n - k) as i32) * s.powi(k as i32))
                .collect();
            phis.iter()
                .map(|&phi| {
                    // ⟨θ, φ|ψ⟩ = Σ_k radial_k e^{ikφ} ψ_k
                    let step = C64::from_polar(1.0, phi);
                    let mut rot = C64::new(1.0, 0.0);
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..=n {
                        acc += rot * amps[k] * radial[k];
                        rot *= step;
                    }
                    acc.norm_sqr() / norm_sqr
                })
                .collect()
        })
        .collect();
    let values = DMatrix::from_fn(n_theta, n_phi, |i, k| rows[i][k]);
    Ok(SphereGrid { thetas, phis, values })
}
