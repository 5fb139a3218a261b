//! `classical`: trajectories of the classical map from chosen and random
//! seeds.

use std::f64::consts::{FRAC_PI_2, PI};

use kicked_top::classical::{portrait, ClassicalPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::out_path;
use crate::config::{require, Angles, ClassicalArgs, GlobalArgs};
use crate::error::CliResult;
use crate::output::{fmt_f64, CsvOut};

/// The fixed point `(π/2, −π/2)` and the north pole on the period-4 orbit.
const DEFAULT_SEEDS: [Angles; 2] = [Angles(FRAC_PI_2, -FRAC_PI_2), Angles(0.0, 0.0)];

/// Uniform points on the sphere.
fn random_seeds(count: usize, seed: u64) -> Vec<Angles> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..=1.0);
            Angles(z.acos(), rng.random_range(-PI..PI))
        })
        .collect()
}

pub fn run(global: &GlobalArgs, args: &ClassicalArgs) -> CliResult<()> {
    let kappa0 = require(args.kappa0, "kappa0")?;
    let steps = args.steps.unwrap_or(200);
    let mut seeds = args.points.clone().unwrap_or_else(|| DEFAULT_SEEDS.to_vec());
    seeds.extend(random_seeds(args.random_points.unwrap_or(0), global.seed.unwrap_or(0)));
    let starts: Vec<ClassicalPoint> =
        seeds.iter().map(|a| ClassicalPoint::from_angles(a.0, a.1)).collect::<Result<_, _>>()?;
    let rows = portrait(&starts, kappa0, steps)?;

    let path = out_path(global, "classical.csv");
    let mut out = CsvOut::create(&path, &["seed", "theta0", "phi0", "iteration", "x", "y", "z"])?;
    for row in rows {
        let Angles(theta0, phi0) = seeds[row.seed];
        out.record([
            row.seed.to_string(),
            fmt_f64(theta0),
            fmt_f64(phi0),
            row.iteration.to_string(),
            fmt_f64(row.x),
            fmt_f64(row.y),
            fmt_f64(row.z),
        ])?;
    }
    out.finish()
}
