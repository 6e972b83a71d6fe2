//! CSV tables, JSON documents and run manifests.
//!
//! Floats are written with 17 significant digits so that every value read
//! back parses to the same `f64`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{CliError, Result};
use crate::experiments::{
    CalibrationRow, ConvergenceRow, LandscapeRow, NormalitySample, NormalitySummary, RmseRow,
    SequenceMatch,
};

/// `x` with 17 significant digits; `NaN`, `inf` and `-inf` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number with 17 significant digits; non-finite values become `null`.
pub fn json_f64(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        fmt_f64(x)
    } else {
        "null".to_owned()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

pub fn serialize_f64<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    json_f64(*x).serialize(s)
}

pub fn serialize_f64_slice<S: serde::Serializer>(
    xs: &[f64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    xs.iter()
        .map(|&x| json_f64(x))
        .collect::<Vec<_>>()
        .serialize(s)
}

/// A row type with a fixed CSV header.
pub trait Table {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<String>;
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn i<T: ToString>(x: T) -> String {
    x.to_string()
}

impl Table for RmseRow {
    const HEADER: &'static [&'static str] = &[
        "target",
        "steps",
        "max_total_queries",
        "rmse",
        "rmse_filtered",
        "outliers",
        "ccr_bound",
        "qcr_bound",
        "precision_limit",
        "heisenberg_reference",
    ];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            i(self.steps),
            i(self.max_total_queries),
            f(self.rmse),
            f(self.rmse_filtered),
            i(self.outliers),
            f(self.ccr_bound),
            f(self.qcr_bound),
            f(self.precision_limit),
            f(self.heisenberg_reference),
        ]
    }
}

impl Table for LandscapeRow {
    const HEADER: &'static [&'static str] = &[
        "target",
        "adaptive_classical",
        "adaptive_quantum",
        "standard_classical",
        "non_adaptive_classical",
        "adaptive_ccr",
        "standard_ccr",
        "non_adaptive_ccr",
        "quantum_over_classical",
        "limit_over_quantum",
        "improvement",
    ];
    fn cells(&self) -> Vec<String> {
        [
            self.target,
            self.adaptive_classical,
            self.adaptive_quantum,
            self.standard_classical,
            self.non_adaptive_classical,
            self.adaptive_ccr,
            self.standard_ccr,
            self.non_adaptive_ccr,
            self.quantum_over_classical,
            self.limit_over_quantum,
            self.improvement,
        ]
        .into_iter()
        .map(f)
        .collect()
    }
}

impl Table for ConvergenceRow {
    const HEADER: &'static [&'static str] = &[
        "target",
        "shots",
        "step",
        "asymptotic_alpha",
        "mean_ratio",
        "std_ratio",
        "step_match",
    ];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            i(self.shots),
            i(self.step),
            i(self.asymptotic_alpha),
            f(self.mean_ratio),
            f(self.std_ratio),
            f(self.step_match),
        ]
    }
}

impl Table for SequenceMatch {
    const HEADER: &'static [&'static str] = &["target", "shots", "trials", "full_match"];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            i(self.shots),
            i(self.trials),
            f(self.full_match),
        ]
    }
}

impl Table for NormalitySummary {
    const HEADER: &'static [&'static str] = &[
        "target",
        "shots",
        "steps",
        "trials",
        "fisher_total",
        "ccr_bound",
        "outliers",
        "outlier_fraction",
        "z_mean",
        "z_variance",
        "ks_statistic",
        "ks_p_value",
        "mass_within_3sigma",
    ];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            i(self.shots),
            i(self.steps),
            i(self.trials),
            f(self.fisher_total),
            f(self.ccr_bound),
            i(self.outliers),
            f(self.outlier_fraction),
            f(self.z_mean),
            f(self.z_variance),
            f(self.ks_statistic),
            f(self.ks_p_value),
            f(self.mass_within_3sigma),
        ]
    }
}

impl Table for NormalitySample {
    const HEADER: &'static [&'static str] = &["target", "trial", "estimate", "z", "outlier"];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            i(self.trial),
            f(self.estimate),
            f(self.z),
            i(self.outlier),
        ]
    }
}

impl Table for CalibrationRow {
    const HEADER: &'static [&'static str] = &[
        "target",
        "offset",
        "assumed_p_q",
        "steps",
        "max_total_queries",
        "rmse",
        "calibrated_qcr_bound",
        "rmse_over_bound",
    ];
    fn cells(&self) -> Vec<String> {
        vec![
            f(self.target),
            f(self.offset),
            f(self.assumed_p_q),
            i(self.steps),
            i(self.max_total_queries),
            f(self.rmse),
            f(self.calibrated_qcr_bound),
            f(self.rmse_over_bound),
        ]
    }
}

impl Table for qmean_oracle::VerifyRow {
    const HEADER: &'static [&'static str] = &[
        "n_qubits",
        "instance",
        "observable",
        "theta_star",
        "alpha",
        "p_q",
        "prob_abs_error",
        "qfi_rel_error",
        "three_valued_rel_error",
    ];
    fn cells(&self) -> Vec<String> {
        vec![
            i(self.n_qubits),
            i(self.instance),
            self.observable.clone(),
            f(self.theta_star),
            i(self.alpha),
            f(self.p_q),
            f(self.prob_abs_error),
            f(self.qfi_rel_error),
            self.three_valued_rel_error.map(f).unwrap_or_default(),
        ]
    }
}

/// Writes `rows` as CSV with a header line.
pub fn write_csv<T: Table, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::HEADER)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    Ok(())
}

pub fn csv_string<T: Table>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| CliError::Output(e.to_string()))
}

/// Metadata written next to every set of output files.
#[derive(Debug, Serialize)]
pub struct Manifest<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub config: &'a C,
    pub seed: u64,
    #[serde(serialize_with = "serialize_f64")]
    pub wall_time_seconds: f64,
    pub files: Vec<String>,
}

/// Creates `<root>/<subcommand>-<NNN>` with the first unused index.
pub fn create_run_dir(root: &Path, subcommand: &str) -> Result<PathBuf> {
    fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
    for n in 1..10_000 {
        let dir = root.join(format!("{subcommand}-{n:03}"));
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::io(dir, e)),
        }
    }
    Err(CliError::Output(format!(
        "no free run directory under {}",
        root.display()
    )))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-300, 5e-324, f64::MAX, 0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let j = json_f64(x);
            let back: f64 = serde_json::from_str(j.get()).unwrap();
            assert_eq!(back, x);
        }
        assert_eq!(fmt_f64(f64::NAN), "NaN");
        assert_eq!(json_f64(f64::INFINITY).get(), "null");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let rows = vec![SequenceMatch {
            target: 0.5,
            shots: 10,
            trials: 3,
            full_match: 1.0 / 3.0,
        }];
        let s = csv_string(&rows).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next().unwrap(), "target,shots,trials,full_match");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[1], "10");
        assert_eq!(row[3].parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn run_dirs_are_numbered() {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().join("nested");
        let a = create_run_dir(&root, "fisher").unwrap();
        let b = create_run_dir(&root, "fisher").unwrap();
        assert!(a.ends_with("fisher-001"));
        assert!(b.ends_with("fisher-002"));
    }
}
