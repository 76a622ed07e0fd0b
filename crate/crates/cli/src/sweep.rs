use std::str::FromStr;

use cpa_core::field::BeamsplitterSpec;
use cpa_core::geometry;
use cpa_core::oracle::interferometer_weak_values;

use crate::config::{ExperimentConfig, Geometry};
use crate::error::{CliError, CliResult};
use crate::experiment::run;
use crate::report::{Sweep, SweepRow, SCHEMA_VERSION};

/// `T=start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = |m: &str| CliError::validation("--sweep", format!("`{s}`: {m}"));
        let (name, range) = s.split_once('=').ok_or_else(|| bad("expected T=start:stop:step"))?;
        if name.trim() != "T" {
            return Err(bad("only T can be swept"));
        }
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("bounds must be numbers"))?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected three numbers"));
        };
        if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
            return Err(bad("step must be positive and bounds finite"));
        }
        Ok(SweepSpec { start, stop, step })
    }
}

impl SweepSpec {
    /// Grid points, rounded to 12 decimals so `0.05 * k` prints cleanly. Empty if `start > stop`.
    pub fn points(&self) -> Vec<f64> {
        if self.start > self.stop {
            return Vec::new();
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

/// Runs `base` at every grid value of `T`. Weak values come from the oracle on
/// the interferometer and are left empty for other geometries or impossible outcomes.
pub fn sweep(base: &ExperimentConfig, grid: SweepSpec) -> CliResult<Sweep> {
    if !matches!(base.geometry, Geometry::Beamsplitter | Geometry::Interferometer) {
        return Err(CliError::validation(
            "geometry",
            "sweeps need beamsplitter or interferometer",
        ));
    }
    let mut rows = Vec::new();
    for t in grid.points() {
        let config = ExperimentConfig {
            transmissions: vec![t],
            ..base.clone()
        };
        let report = run(&config)?;
        let p = |l: &str| report.probabilities.get(l).copied().unwrap_or(0.0);
        let o = |l: &str| report.oracle_probabilities.as_ref().and_then(|m| m.get(l).copied());
        let mut row = SweepRow {
            t,
            p_a: p("A"),
            p_b: p("B"),
            weak_ix_a: None,
            weak_iy_a: None,
            weak_ix_b: None,
            weak_iy_b: None,
            oracle_p_a: o("A").or(Some(p("A"))),
            oracle_p_b: o("B").or(Some(p("B"))),
        };
        if base.geometry == Geometry::Interferometer {
            let net = geometry::interferometer(BeamsplitterSpec::new(t)?)?;
            if let Ok((x, y)) = interferometer_weak_values(&net, "A") {
                (row.weak_ix_a, row.weak_iy_a) = (Some(x), Some(y));
            }
            if let Ok((x, y)) = interferometer_weak_values(&net, "B") {
                (row.weak_ix_b, row.weak_iy_b) = (Some(x), Some(y));
            }
        }
        rows.push(row);
    }
    Ok(Sweep {
        schema_version: SCHEMA_VERSION,
        base: base.clone(),
        parameter: "T".into(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acceptance_grid() {
        let g: SweepSpec = "T=0.05:0.95:0.05".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 19);
        assert_eq!(p[0], 0.05);
        assert_eq!(p[18], 0.95);
        assert_eq!(p[9], 0.5);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["T=0.1:0.2", "I=0:1:0.1", "T=0:1:0", "T=a:b:c"] {
            assert!(s.parse::<SweepSpec>().is_err(), "{s}");
        }
        assert!("T=0.9:0.1:0.1".parse::<SweepSpec>().unwrap().points().is_empty());
    }
}
