//! `tunnel`: tunneling report between `⊗⁴|+⟩y` and `⊗⁴|−⟩y` plus the overlap
//! series over a few tunneling periods.

use std::path::{Path, PathBuf};

use kicked_top::exact4::{ghz_fidelity, tunneling, tunneling_overlap_series, TunnelingReport};
use serde::Serialize;

use super::out_path;
use crate::config::{require, GlobalArgs, TunnelArgs};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, write_json, CsvOut};

#[derive(Debug, Serialize)]
struct Report {
    #[serde(flatten)]
    report: TunnelingReport,
    /// `round(π/Δ)`.
    tunneling_time: u64,
    overlap_at_tunneling_time: f64,
    ghz_fidelity_at_half_time: f64,
}

/// `report.json` → `report_overlap.csv` next to it.
fn series_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_overlap.csv"))
}

/// `points` integer times spread evenly over `[0, span]`.
fn sample_times(span: f64, points: usize) -> Vec<u64> {
    let mut times: Vec<u64> =
        (0..points).map(|i| (span * i as f64 / (points - 1) as f64).round() as u64).collect();
    times.dedup();
    times
}

pub fn run(global: &GlobalArgs, args: &TunnelArgs) -> CliResult<()> {
    let kappa0 = require(args.kappa0, "kappa0")?;
    let report = tunneling(kappa0)?;
    let points = args.points.unwrap_or(201);
    if points < 2 {
        return Err(CliError::invalid(format!("--points must be at least 2, got {points}")));
    }
    let span = args.span.unwrap_or(2.0);
    if !(span.is_finite() && span > 0.0) {
        return Err(CliError::invalid(format!("--span must be positive, got {span}")));
    }

    let tunneling_time = report.n_star.round() as u64;
    let summary = Report {
        report,
        tunneling_time,
        overlap_at_tunneling_time: tunneling_overlap_series(kappa0, &[tunneling_time])?[0],
        ghz_fidelity_at_half_time: ghz_fidelity(kappa0, tunneling_time / 2)?,
    };
    let path = out_path(global, "tunnel.json");
    write_json(&path, &summary)?;

    let times = sample_times(span * report.n_star, points);
    let overlaps = tunneling_overlap_series(kappa0, &times)?;
    let series = series_path(&path);
    let mut out = CsvOut::create(&series, &["n", "overlap_minus_y", "ghz_fidelity"])?;
    for (&n, overlap) in times.iter().zip(overlaps) {
        out.record([n.to_string(), fmt_f64(overlap), fmt_f64(ghz_fidelity(kappa0, n)?)])?;
    }
    out.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_file_sits_beside_report() {
        assert_eq!(series_path(Path::new("out/t.json")), PathBuf::from("out/t_overlap.csv"));
        assert_eq!(series_path(Path::new("t")), PathBuf::from("t_overlap.csv"));
    }

    #[test]
    fn sampled_times_are_distinct_and_span_the_range() {
        assert_eq!(sample_times(10.0, 6), vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(sample_times(2.0, 9), vec![0, 1, 2]);
    }
}
