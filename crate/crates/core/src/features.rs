//! The degree-1 homogeneous feature map.
//!
//! For amounts `y` with `rho = |y|_2` the features are the `m` linear terms
//! `y_i` followed by the `m(m+1)/2` terms `y_i * y_j / rho` for `i <= j` in
//! lexicographic `(i, j)` order. Every feature scales linearly with `y`, so
//! any linear model over them is positively homogeneous of degree 1. At the
//! origin all features are zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Result;
use crate::panel::{AnalytePanel, Sample};

/// Number of quadratic terms for `m` analytes.
pub const fn quadratic_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Feature dimension `d = m + m(m+1)/2`.
pub const fn feature_dim(m: usize) -> usize {
    m + quadratic_len(m)
}

/// Iterates the `(i, j)`, `i <= j`, pairs in quadratic-term order.
pub fn quadratic_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (i..m).map(move |j| (i, j)))
}

/// Feature vector of one sample, linear block first.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    entries: Vec<f64>,
    m: usize,
}

impl FeatureVector {
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn linear(&self) -> &[f64] {
        &self.entries[..self.m]
    }

    pub fn quadratic(&self) -> &[f64] {
        &self.entries[self.m..]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.entries
    }
}

pub(crate) fn euclidean_norm(y: &[f64]) -> f64 {
    libm::sqrt(y.iter().map(|v| v * v).sum::<f64>())
}

/// Writes the features of `y` into `out` (`out.len() == feature_dim(y.len())`).
pub(crate) fn write_features(y: &[f64], out: &mut [f64]) {
    let m = y.len();
    debug_assert_eq!(out.len(), feature_dim(m));
    out[..m].copy_from_slice(y);
    let rho = euclidean_norm(y);
    let quad = &mut out[m..];
    if rho == 0.0 {
        quad.fill(0.0);
        return;
    }
    for (slot, (i, j)) in quad.iter_mut().zip(quadratic_pairs(m)) {
        *slot = y[i] * y[j] / rho;
    }
}

/// Maps a sample to its homogeneous feature vector.
pub fn feature_map(sample: &Sample, panel: &AnalytePanel) -> Result<FeatureVector> {
    sample.check_panel(panel)?;
    let m = panel.len();
    let mut entries = vec![0.0; feature_dim(m)];
    write_features(sample.values(), &mut entries);
    Ok(FeatureVector { entries, m })
}
