#![allow(dead_code)]

use dbsvol_core::features::feature_dim;
use dbsvol_core::{feature_map, AnalytePanel, Cohort, FitMeta, Sample, VolumeModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn panel(m: usize) -> AnalytePanel {
    let codes: Vec<String> = (0..m).map(|i| format!("A{i:02}")).collect();
    AnalytePanel::new(&codes).unwrap()
}

pub fn random_samples(rng: &mut ChaCha8Rng, n: usize, m: usize, lo: f64, hi: f64) -> Vec<Sample> {
    (0..n)
        .map(|_| Sample::new((0..m).map(|_| rng.random_range(lo..hi)).collect()).unwrap())
        .collect()
}

/// Planted model with positive linear part and small quadratic part, so
/// volumes on positive samples stay positive.
pub fn planted_model(rng: &mut ChaCha8Rng, m: usize) -> VolumeModel {
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
    VolumeModel::from_coefficients(panel(m), &coeffs, FitMeta::manual(d)).unwrap()
}

/// n random samples on m analytes labelled by a random planted model.
pub fn planted_cohort(seed: u64, n: usize, m: usize) -> (Cohort, VolumeModel) {
    let mut r = rng(seed);
    let truth = planted_model(&mut r, m);
    let samples = random_samples(&mut r, n, m, 0.5, 10.0);
    let volumes = samples.iter().map(|s| truth.predict(s).unwrap()).collect();
    (
        Cohort::new(panel(m), samples, Some(volumes)).unwrap(),
        truth,
    )
}

pub fn max_rel_error(pred: &[f64], truth: &[f64]) -> f64 {
    pred.iter()
        .zip(truth)
        .map(|(p, t)| ((p - t) / t).abs())
        .fold(0.0, f64::max)
}

pub fn features(cohort: &Cohort) -> Vec<Vec<f64>> {
    cohort
        .samples()
        .iter()
        .map(|s| feature_map(s, cohort.panel()).unwrap().into_vec())
        .collect()
}
