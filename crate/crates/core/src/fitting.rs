//! Least-squares fitting of the homogeneous volume model.
//!
//! The squared-error objective `h(a) = sum_s (a . phi(x_s) - lambda_s)^2` is
//! a non-negative quadratic in the coefficients; its stationary points solve
//! the normal system `G a = b` with `G = sum_s phi phi^T` and
//! `b = sum_s lambda_s phi`. Ridge adds `r I` to `G`. Forming `G` squares the
//! condition number of the design, so the rank cutoff (a singular-value
//! tolerance) is squared before it is compared with eigenvalues of the
//! equilibrated `G`, and the solution is polished by iterative refinement
//! with residuals recomputed from the design rows.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::features::{feature_dim, write_features};
use crate::linalg::{Cholesky, MinNorm, SymMatrix};
use crate::model::{FitMeta, SolverPath, VolumeModel, FORMAT_VERSION};
use crate::panel::Cohort;

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverMode {
    /// Cholesky when numerically positive definite, otherwise minimum norm.
    #[default]
    Auto,
    /// Cholesky only; fails on a singular system.
    Direct,
    /// Always the truncated eigendecomposition.
    MinimumNorm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub ridge: f64,
    /// Relative singular-value cutoff for the design matrix, in `(0, 1)`.
    /// Directions whose eigenvalue in the unit-diagonal scaling of `G` is
    /// at most `max(rank_tolerance^2, d * EPSILON)` are dropped.
    pub rank_tolerance: f64,
    pub solver_mode: SolverMode,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            ridge: 0.0,
            rank_tolerance: DEFAULT_RANK_TOLERANCE,
            solver_mode: SolverMode::Auto,
        }
    }
}

impl FitConfig {
    pub fn with_ridge(ridge: f64) -> Self {
        Self {
            ridge,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(Error::InvalidConfig("ridge must be finite and >= 0"));
        }
        if !(self.rank_tolerance > 0.0 && self.rank_tolerance < 1.0) {
            return Err(Error::InvalidConfig("rank tolerance must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Gram matrix and right-hand side of the least-squares problem.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalSystem {
    pub gram: SymMatrix,
    pub rhs: alloc::vec::Vec<f64>,
    pub n: usize,
}

/// Accumulates `G` and `b` over the cohort rows in row order.
pub fn assemble_normal_system(cohort: &Cohort) -> Result<NormalSystem> {
    let volumes = cohort.require_volumes()?;
    if cohort.is_empty() {
        return Err(Error::EmptyCohort);
    }
    let d = feature_dim(cohort.panel().len());
    let mut gram = SymMatrix::zeros(d);
    let mut rhs = vec![0.0; d];
    let mut phi = vec![0.0; d];
    for (sample, &lambda) in cohort.samples().iter().zip(volumes) {
        write_features(sample.values(), &mut phi);
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature vector"));
        }
        gram.add_outer_upper(&phi, 1.0);
        for (r, f) in rhs.iter_mut().zip(&phi) {
            *r += lambda * f;
        }
    }
    gram.mirror_upper();
    if gram.as_slice().iter().chain(&rhs).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("normal system"));
    }
    Ok(NormalSystem {
        gram,
        rhs,
        n: cohort.len(),
    })
}

/// Gram eigenvalues are squared singular values of the design matrix; the
/// floor keeps the cutoff above round-off in the eigenvalues themselves.
fn gram_cutoff(rank_tolerance: f64, d: usize) -> f64 {
    (rank_tolerance * rank_tolerance).max(d as f64 * f64::EPSILON)
}

/// Cap on refinement steps; each costs one pass over the cohort.
const REFINEMENT_STEPS: usize = 50;

enum Factor {
    Cholesky(Cholesky),
    Spectral(MinNorm),
}

impl Factor {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            Factor::Cholesky(f) => f.solve(b),
            Factor::Spectral(f) => f.solve(b),
        }
    }
}

/// `b - G a - r a`, with the residuals taken row by row from the design
/// rather than from the assembled `G`. Row sums are compensated (Neumaier)
/// so the result barely depends on row order.
fn gradient(cohort: &Cohort, alpha: &[f64], ridge: f64) -> Vec<f64> {
    let d = alpha.len();
    let mut sum = vec![0.0; d];
    let mut carry = vec![0.0; d];
    let mut phi = vec![0.0; d];
    let volumes = cohort.volumes().unwrap_or_default();
    for (sample, &lambda) in cohort.samples().iter().zip(volumes) {
        write_features(sample.values(), &mut phi);
        let r = lambda - phi.iter().zip(alpha).map(|(p, a)| p * a).sum::<f64>();
        for k in 0..d {
            let term = r * phi[k];
            let t = sum[k] + term;
            carry[k] += if sum[k].abs() >= term.abs() {
                (sum[k] - t) + term
            } else {
                (term - t) + sum[k]
            };
            sum[k] = t;
        }
    }
    (0..d)
        .map(|k| (sum[k] + carry[k]) - ridge * alpha[k])
        .collect()
}

/// Fits the coefficients minimizing `h + ridge * |a|^2`. With a singular
/// system and zero ridge the minimum-norm minimizer is returned.
pub fn fit(cohort: &Cohort, config: &FitConfig) -> Result<VolumeModel> {
    config.validate()?;
    let system = assemble_normal_system(cohort)?;
    let d = system.rhs.len();
    let mut a = system.gram;
    if config.ridge > 0.0 {
        a.add_diagonal(config.ridge);
    }

    let cutoff = gram_cutoff(config.rank_tolerance, d);
    let spectral = || {
        let f = MinNorm::new(&a, cutoff);
        let rank = f.rank();
        (Factor::Spectral(f), SolverPath::Spectral, rank)
    };
    let (factor, solver, rank) = match config.solver_mode {
        SolverMode::Direct => {
            let f = Cholesky::new(&a, cutoff).ok_or(Error::NotPositiveDefinite)?;
            (Factor::Cholesky(f), SolverPath::Cholesky, d)
        }
        SolverMode::MinimumNorm => spectral(),
        SolverMode::Auto => match Cholesky::new(&a, cutoff) {
            Some(f) => (Factor::Cholesky(f), SolverPath::Cholesky, d),
            None => spectral(),
        },
    };

    let mut coefficients = factor.solve(&system.rhs);
    // Stops once steps reach round-off or stall at the noise floor.
    let mut last = f64::INFINITY;
    for _ in 0..REFINEMENT_STEPS {
        let step = factor.solve(&gradient(cohort, &coefficients, config.ridge));
        let size = step.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if size.is_nan() || size >= last {
            break;
        }
        let scale = coefficients.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        coefficients
            .iter_mut()
            .zip(&step)
            .for_each(|(c, s)| *c += s);
        if size <= f64::EPSILON * scale || size > 0.5 * last {
            break;
        }
        last = size;
    }
    if coefficients.iter().any(|v| !v.is_finite()) {
        return Err(match solver {
            SolverPath::Cholesky => Error::NotPositiveDefinite,
            _ => Error::NonFinite("coefficients"),
        });
    }

    let meta = FitMeta {
        ridge: config.ridge,
        rank_tolerance: config.rank_tolerance,
        solver,
        rank,
        n_train: system.n,
        format_version: FORMAT_VERSION,
    };
    VolumeModel::from_coefficients(cohort.panel().clone(), &coefficients, meta)
}

/// Sum of squared deviations `sum_s (f(x_s) - lambda_s)^2`.
pub fn objective_value(model: &VolumeModel, cohort: &Cohort) -> Result<f64> {
    let volumes = cohort.require_volumes()?;
    let predicted = model.predict_cohort(cohort)?;
    Ok(predicted
        .iter()
        .zip(volumes)
        .map(|(p, l)| (p - l) * (p - l))
        .sum())
}
