//! Classical limit of the kicked top: an area-preserving map of the unit
//! sphere.
//!
//! ```text
//! X' =  Z cos(κ0 X) + Y sin(κ0 X)
//! Y' = −Z sin(κ0 X) + Y cos(κ0 X)
//! Z' = −X
//! ```
//!
//! The point `(0, −1, 0)` (spherical angles `(π/2, −π/2)`) is a fixed point
//! for every `κ0`, elliptic for `|κ0| < 2`. The orbit through the north pole
//! has period four for every `κ0`.

use nalgebra::{Matrix2, Matrix3};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};

/// Distance from the unit sphere tolerated on input.
pub const SPHERE_TOLERANCE: f64 = 1e-6;

/// Point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClassicalPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self { x, y, z };
        p.check()?;
        Ok(p)
    }

    /// Point at polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        ensure_finite("theta", theta)?;
        ensure_finite("phi", phi)?;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Ok(Self { x: st * cp, y: st * sp, z: ct })
    }

    /// `(theta, phi)` with `phi` in `(−π, π]`.
    pub fn to_angles(self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(self, other: Self) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2)).sqrt()
    }

    fn check(self) -> Result<()> {
        let deviation = (self.norm() - 1.0).abs();
        if !(deviation <= SPHERE_TOLERANCE) {
            return Err(Error::OffSphere { x: self.x, y: self.y, z: self.z, deviation });
        }
        Ok(())
    }
}

/// The elliptic fixed point `(0, −1, 0)`.
pub const FIXED_POINT: ClassicalPoint = ClassicalPoint { x: 0.0, y: -1.0, z: 0.0 };
/// North pole, on the period-4 orbit.
pub const NORTH_POLE: ClassicalPoint = ClassicalPoint { x: 0.0, y: 0.0, z: 1.0 };

fn step_unchecked(p: ClassicalPoint, kappa0: f64) -> ClassicalPoint {
    let (s, c) = (kappa0 * p.x).sin_cos();
    ClassicalPoint { x: p.z * c + p.y * s, y: -p.z * s + p.y * c, z: -p.x }
}

/// One iteration of the map. No renormalization is applied.
pub fn step(point: ClassicalPoint, kappa0: f64) -> Result<ClassicalPoint> {
    ensure_finite("kappa0", kappa0)?;
    point.check()?;
    Ok(step_unchecked(point, kappa0))
}

/// `n + 1` points starting with `start`.
pub fn trajectory(start: ClassicalPoint, kappa0: f64, n: usize) -> Result<Vec<ClassicalPoint>> {
    ensure_finite("kappa0", kappa0)?;
    start.check()?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(start);
    let mut p = start;
    for _ in 0..n {
        p = step_unchecked(p, kappa0);
        out.push(p);
    }
    Ok(out)
}

/// Largest deviation of `|p|` from 1 along `n` iterations.
pub fn norm_drift(start: ClassicalPoint, kappa0: f64, n: usize) -> Result<f64> {
    ensure_finite("kappa0", kappa0)?;
    start.check()?;
    let mut p = start;
    let mut drift = 0.0f64;
    for _ in 0..n {
        p = step_unchecked(p, kappa0);
        drift = drift.max((p.norm() - 1.0).abs());
    }
    Ok(drift)
}

/// Row of a phase portrait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PortraitRow {
    pub seed: usize,
    pub iteration: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Trajectories of every seed, `seeds.len() * (n + 1)` rows ordered by seed
/// then iteration.
pub fn portrait(seeds: &[ClassicalPoint], kappa0: f64, n: usize) -> Result<Vec<PortraitRow>> {
    if seeds.is_empty() {
        return Err(Error::Invalid("phase portrait needs at least one seed".into()));
    }
    if n == 0 {
        return Err(Error::Invalid("phase portrait needs at least one iteration".into()));
    }
    let per_seed: Vec<Vec<PortraitRow>> = seeds
        .par_iter()
        .enumerate()
        .map(|(seed, &start)| {
            Ok(trajectory(start, kappa0, n)?
                .into_iter()
                .enumerate()
                .map(|(iteration, p)| PortraitRow { seed, iteration, x: p.x, y: p.y, z: p.z })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

/// Jacobian of the map in ambient coordinates.
pub fn jacobian(p: ClassicalPoint, kappa0: f64) -> Matrix3<f64> {
    let (s, c) = (kappa0 * p.x).sin_cos();
    let dx = kappa0 * (-p.z * s + p.y * c);
    let dy = kappa0 * (-p.z * c - p.y * s);
    Matrix3::new(dx, s, c, dy, c, -s, -1.0, 0.0, 0.0)
}

/// Tangent map at the fixed point in the coordinates `(dX, dZ)`,
/// `[[−κ0, 1], [−1, 0]]`.
pub fn fixed_point_tangent_map(kappa0: f64) -> Matrix2<f64> {
    let j = jacobian(FIXED_POINT, kappa0);
    Matrix2::new(j[(0, 0)], j[(0, 2)], j[(2, 0)], j[(2, 2)])
}

/// Largest eigenvalue modulus of a real 2×2 matrix.
pub fn spectral_radius2(m: &Matrix2<f64>) -> f64 {
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        det.abs().sqrt()
    } else {
        let r = disc.sqrt();
        ((tr + r) / 2.0).abs().max(((tr - r) / 2.0).abs())
    }
}

/// Smallest `κ0` on a uniform grid over `[from, to]` at which the fixed
/// point's tangent map has an eigenvalue of modulus above `1 + tol`.
pub fn instability_onset(from: f64, to: f64, steps: usize, tol: f64) -> Option<f64> {
    (0..=steps)
        .map(|i| from + (to - from) * i as f64 / steps as f64)
        .find(|&k| spectral_radius2(&fixed_point_tangent_map(k)) > 1.0 + tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_point(rng: &mut ChaCha8Rng) -> ClassicalPoint {
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(-PI..PI);
        ClassicalPoint::from_angles(z.acos(), phi).unwrap()
    }

    /// Finite-time Lyapunov exponent from a shadow trajectory renormalized
    /// to separation `d0` after every step.
    fn lyapunov(start: ClassicalPoint, kappa0: f64, steps: usize) -> f64 {
        let d0 = 1e-8;
        let tangent = if start.z.abs() < 0.9 { [0.0, 0.0, 1.0] } else { [1.0, 0.0, 0.0] };
        let along = tangent[0] * start.x + tangent[1] * start.y + tangent[2] * start.z;
        let mut e = [tangent[0] - along * start.x, tangent[1] - along * start.y, tangent[2] - along * start.z];
        let n = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]).sqrt();
        e.iter_mut().for_each(|v| *v /= n);
        let normalize = |q: ClassicalPoint| {
            let r = q.norm();
            ClassicalPoint { x: q.x / r, y: q.y / r, z: q.z / r }
        };
        let mut p = start;
        let mut q = normalize(ClassicalPoint { x: p.x + d0 * e[0], y: p.y + d0 * e[1], z: p.z + d0 * e[2] });
        let mut sum = 0.0;
        for _ in 0..steps {
            p = step(p, kappa0).unwrap();
            q = step(q, kappa0).unwrap();
            let d = p.distance(q);
            sum += (d / d0).ln();
            let f = d0 / d;
            q = normalize(ClassicalPoint { x: p.x + (q.x - p.x) * f, y: p.y + (q.y - p.y) * f, z: p.z + (q.z - p.z) * f });
        }
        sum / steps as f64
    }

    #[test]
    fn fixed_point_is_exact() {
        for k in [0.0, 0.5, 2.5, 7.0, -3.0] {
            assert_eq!(step(FIXED_POINT, k).unwrap(), FIXED_POINT);
        }
        let p = ClassicalPoint::from_angles(FRAC_PI_2, -FRAC_PI_2).unwrap();
        assert!(p.distance(FIXED_POINT) < 1e-15);
    }

    #[test]
    fn period_four_orbit_is_exact() {
        let expected = [
            ClassicalPoint { x: 1.0, y: 0.0, z: 0.0 },
            ClassicalPoint { x: 0.0, y: 0.0, z: -1.0 },
            ClassicalPoint { x: -1.0, y: 0.0, z: 0.0 },
            NORTH_POLE,
        ];
        for k in [0.0, 0.5, 1.3, 2.5, 6.0] {
            let orbit = trajectory(NORTH_POLE, k, 4).unwrap();
            assert_eq!(&orbit[1..], &expected);
        }
    }

    #[test]
    fn zero_torsion_has_period_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = random_point(&mut rng);
            let q = trajectory(p, 0.0, 4).unwrap()[4];
            assert!(p.distance(q) < 1e-12);
            let r = step(p, 0.0).unwrap();
            assert_eq!((r.x, r.y, r.z), (p.z, p.y, -p.x));
        }
    }

    #[test]
    fn norm_drift_over_a_million_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_point(&mut rng);
        assert!(norm_drift(p, 2.5, 1_000_000).unwrap() <= 1e-9);
    }

    #[test]
    fn rejects_points_off_the_sphere() {
        assert!(matches!(ClassicalPoint::new(1.0, 1.0, 0.0), Err(Error::OffSphere { .. })));
        let off = ClassicalPoint { x: 0.0, y: 0.0, z: 1.0 + 1e-5 };
        assert!(step(off, 1.0).is_err());
        let near = ClassicalPoint { x: 0.0, y: 0.0, z: 1.0 + 1e-7 };
        assert!(step(near, 1.0).is_ok());
    }

    #[test]
    fn portrait_shape() {
        let rows = portrait(&[NORTH_POLE], 0.5, 10).unwrap();
        assert_eq!(rows.len(), 11);
        let seeds = [NORTH_POLE, FIXED_POINT, ClassicalPoint::from_angles(1.0, 0.3).unwrap()];
        let rows = portrait(&seeds, 0.5, 7).unwrap();
        assert_eq!(rows.len(), 24);
        assert_eq!((rows[8].seed, rows[8].iteration), (1, 0));
        assert!(portrait(&[], 0.5, 7).is_err());
        assert!(portrait(&seeds, 0.5, 0).is_err());
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let k = rng.random_range(0.0..4.0);
            let j = jacobian(p, k);
            let h = 1e-6;
            for col in 0..3 {
                let mut a = [p.x, p.y, p.z];
                let mut b = a;
                a[col] += h;
                b[col] -= h;
                let fa = step_unchecked(ClassicalPoint { x: a[0], y: a[1], z: a[2] }, k);
                let fb = step_unchecked(ClassicalPoint { x: b[0], y: b[1], z: b[2] }, k);
                let fd = [(fa.x - fb.x) / (2.0 * h), (fa.y - fb.y) / (2.0 * h), (fa.z - fb.z) / (2.0 * h)];
                for row in 0..3 {
                    assert!((j[(row, col)] - fd[row]).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn fixed_point_loses_stability_at_two() {
        let m = fixed_point_tangent_map(1.3);
        assert_eq!(m, Matrix2::new(-1.3, 1.0, -1.0, 0.0));
        assert!((spectral_radius2(&m) - 1.0).abs() < 1e-12);
        assert!(spectral_radius2(&fixed_point_tangent_map(2.1)) > 1.3);
        let onset = instability_onset(1.5, 2.5, 1000, 1e-9).unwrap();
        assert!((1.9..=2.1).contains(&onset), "{onset}");
    }

    #[test]
    fn regular_motion_at_small_torsion() {
        let seeds: Vec<ClassicalPoint> = (1..6)
            .flat_map(|i| (0..6).map(move |k| (f64::from(i) * PI / 6.0, -PI + f64::from(k) * PI / 3.0)))
            .map(|(t, p)| ClassicalPoint::from_angles(t, p).unwrap())
            .collect();
        let worst = seeds.iter().map(|&s| lyapunov(s, 0.5, 1000)).fold(f64::MIN, f64::max);
        assert!(worst < 0.02, "{worst}");
    }

    #[test]
    fn lyapunov_regression_value() {
        let seed = ClassicalPoint::from_angles(1.0, 0.5).unwrap();
        let value = lyapunov(seed, 0.5, 1000);
        assert!((value - REGULAR_FTLE).abs() < 1e-6, "{value}");
    }

    /// Frozen from an independent double-precision implementation.
    const REGULAR_FTLE: f64 = 0.004_352_19;

    #[test]
    fn chaotic_motion_near_period_four_orbit() {
        let seed = ClassicalPoint::from_angles(0.3, 0.2).unwrap();
        let value = lyapunov(seed, 2.5, 1000);
        assert!(value > 0.1, "{value}");
    }
}
