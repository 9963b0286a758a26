use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::{feature_dim, quadratic_len, write_features};
use crate::panel::{AnalytePanel, Cohort, Sample};

/// Persistence format version written into model files.
pub const FORMAT_VERSION: u32 = 1;

/// Which linear-algebra route produced the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverPath {
    /// Cholesky factorization of the (regularized) normal matrix.
    Cholesky,
    /// Truncated eigendecomposition, minimum-norm solution.
    Spectral,
    /// Coefficients supplied directly rather than fitted.
    Manual,
}

impl SolverPath {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverPath::Cholesky => "cholesky",
            SolverPath::Spectral => "spectral",
            SolverPath::Manual => "manual",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cholesky" => Some(SolverPath::Cholesky),
            "spectral" => Some(SolverPath::Spectral),
            "manual" => Some(SolverPath::Manual),
            _ => None,
        }
    }
}

/// Provenance of a fitted model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitMeta {
    pub ridge: f64,
    pub rank_tolerance: f64,
    pub solver: SolverPath,
    /// Numerical rank of the solved system.
    pub rank: usize,
    pub n_train: usize,
    pub format_version: u32,
}

impl FitMeta {
    pub fn manual(d: usize) -> Self {
        Self {
            ridge: 0.0,
            rank_tolerance: crate::fitting::DEFAULT_RANK_TOLERANCE,
            solver: SolverPath::Manual,
            rank: d,
            n_train: 0,
            format_version: FORMAT_VERSION,
        }
    }
}

/// Coefficients of `f(y) = sum_i a_i y_i + sum_{i<=j} a_ij y_i y_j / |y|`
/// bound to an analyte panel.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeModel {
    panel: AnalytePanel,
    alpha_linear: Vec<f64>,
    alpha_quadratic: Vec<f64>,
    meta: FitMeta,
}

impl VolumeModel {
    pub fn new(
        panel: AnalytePanel,
        alpha_linear: Vec<f64>,
        alpha_quadratic: Vec<f64>,
        meta: FitMeta,
    ) -> Result<Self> {
        let m = panel.len();
        if alpha_linear.len() != m {
            return Err(Error::CoefficientMismatch {
                expected: m,
                found: alpha_linear.len(),
            });
        }
        if alpha_quadratic.len() != quadratic_len(m) {
            return Err(Error::CoefficientMismatch {
                expected: quadratic_len(m),
                found: alpha_quadratic.len(),
            });
        }
        if alpha_linear
            .iter()
            .chain(&alpha_quadratic)
            .any(|a| !a.is_finite())
        {
            return Err(Error::NonFinite("model coefficients"));
        }
        Ok(Self {
            panel,
            alpha_linear,
            alpha_quadratic,
            meta,
        })
    }

    /// Splits a full coefficient vector (linear block first).
    pub fn from_coefficients(
        panel: AnalytePanel,
        coefficients: &[f64],
        meta: FitMeta,
    ) -> Result<Self> {
        let m = panel.len();
        if coefficients.len() != feature_dim(m) {
            return Err(Error::CoefficientMismatch {
                expected: feature_dim(m),
                found: coefficients.len(),
            });
        }
        let (lin, quad) = coefficients.split_at(m);
        Self::new(panel, lin.to_vec(), quad.to_vec(), meta)
    }

    pub fn panel(&self) -> &AnalytePanel {
        &self.panel
    }

    pub fn alpha_linear(&self) -> &[f64] {
        &self.alpha_linear
    }

    pub fn alpha_quadratic(&self) -> &[f64] {
        &self.alpha_quadratic
    }

    pub fn meta(&self) -> &FitMeta {
        &self.meta
    }

    /// Full coefficient vector in feature layout.
    pub fn coefficients(&self) -> Vec<f64> {
        let mut c = self.alpha_linear.clone();
        c.extend_from_slice(&self.alpha_quadratic);
        c
    }

    /// Predicted volume for one sample. Never clamped; a poor model may
    /// return a negative value.
    pub fn predict(&self, sample: &Sample) -> Result<f64> {
        sample.check_panel(&self.panel)?;
        let mut buf = vec![0.0; feature_dim(self.panel.len())];
        Ok(self.predict_into(sample.values(), &mut buf))
    }

    /// Predictions for every row of a cohort over the same panel.
    pub fn predict_cohort(&self, cohort: &Cohort) -> Result<Vec<f64>> {
        if cohort.panel().analytes() != self.panel.analytes() {
            return Err(Error::PanelMismatch {
                expected: self.panel.len(),
                found: cohort.panel().len(),
            });
        }
        let mut buf = vec![0.0; feature_dim(self.panel.len())];
        Ok(cohort
            .samples()
            .iter()
            .map(|s| self.predict_into(s.values(), &mut buf))
            .collect())
    }

    fn predict_into(&self, y: &[f64], buf: &mut [f64]) -> f64 {
        write_features(y, buf);
        let m = self.panel.len();
        let lin: f64 = buf[..m]
            .iter()
            .zip(&self.alpha_linear)
            .map(|(f, a)| f * a)
            .sum();
        let quad: f64 = buf[m..]
            .iter()
            .zip(&self.alpha_quadratic)
            .map(|(f, a)| f * a)
            .sum();
        lin + quad
    }
}

/// Predicts with `model` for a sample given by value.
pub fn predict(model: &VolumeModel, sample: &Sample) -> Result<f64> {
    model.predict(sample)
}
