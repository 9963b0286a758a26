#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dbsvol::cohort_file::write_cohort;
use dbsvol_core::features::feature_dim;
use dbsvol_core::{AnalytePanel, Cohort, FitMeta, Sample, VolumeModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dbsvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbsvol"))
        .args(args)
        .output()
        .expect("spawn dbsvol")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Runs the binary and panics with its stderr unless it exits 0.
pub fn ok(args: &[&str]) -> String {
    let out = dbsvol(args);
    assert!(
        out.status.success(),
        "dbsvol {args:?} failed: {}",
        stderr(&out)
    );
    stdout(&out)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

pub fn save_cohort(dir: &Path, name: &str, cohort: &Cohort) -> PathBuf {
    let p = dir.join(name);
    write_cohort(cohort, fs::File::create(&p).unwrap()).unwrap();
    p
}

/// Planted model with positive linear part and small quadratic part, so
/// volumes on positive samples stay positive.
pub fn planted_model<S: AsRef<str>>(rng: &mut ChaCha8Rng, codes: &[S]) -> VolumeModel {
    let m = codes.len();
    let d = feature_dim(m);
    let coeffs: Vec<f64> = (0..d)
        .map(|k| {
            if k < m {
                rng.random_range(0.5..1.5)
            } else {
                rng.random_range(-0.2..0.2)
            }
        })
        .collect();
    VolumeModel::from_coefficients(
        AnalytePanel::new(codes).unwrap(),
        &coeffs,
        FitMeta::manual(d),
    )
    .unwrap()
}

/// n uniform samples in [0.5, 10]^m labelled exactly by a random planted model.
pub fn planted_cohort<S: AsRef<str>>(seed: u64, n: usize, codes: &[S]) -> (Cohort, VolumeModel) {
    let mut r = rng(seed);
    let truth = planted_model(&mut r, codes);
    let samples: Vec<Sample> = (0..n)
        .map(|_| {
            Sample::new(
                (0..codes.len())
                    .map(|_| r.random_range(0.5..10.0))
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    let volumes = samples.iter().map(|s| truth.predict(s).unwrap()).collect();
    (
        Cohort::new(truth.panel().clone(), samples, Some(volumes)).unwrap(),
        truth,
    )
}

pub fn max_rel_error(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter()
        .zip(truth)
        .map(|(p, t)| ((p - t) / t).abs())
        .fold(0.0, f64::max)
}

/// Value of `key = value` in a report.
pub fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
}

/// Column `name` of a CSV text as numbers.
pub fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}
