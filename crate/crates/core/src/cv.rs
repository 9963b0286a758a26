//! Seeded k-fold cross-validation.
//!
//! Rows are shuffled with a ChaCha8 generator seeded from the 64-bit seed,
//! then cut into `folds` contiguous blocks; the first `n % folds` blocks get
//! one extra row.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fitting::{fit, FitConfig};
use crate::metrics::{EvalReport, DEFAULT_THRESHOLD};
use crate::panel::Cohort;

/// Fold index of every row.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::InvalidConfig("at least two folds are required"));
    }
    if n < folds {
        return Err(Error::InsufficientSamples { n, folds });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (n / folds, n % folds);
    let mut assignment = vec![0; n];
    let mut start = 0;
    for fold in 0..folds {
        let size = base + usize::from(fold < extra);
        for &row in &order[start..start + size] {
            assignment[row] = fold;
        }
        start += size;
    }
    Ok(assignment)
}

/// Held-out prediction for every row, in cohort row order.
pub fn cross_validate_predictions(
    cohort: &Cohort,
    config: &FitConfig,
    folds: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    cohort.require_volumes()?;
    let assignment = fold_assignment(cohort.len(), folds, seed)?;
    let mut predictions = vec![0.0; cohort.len()];
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..cohort.len()).partition(|&row| assignment[row] == fold);
        let model = fit(&cohort.rows(&train), config)?;
        let held_out = model.predict_cohort(&cohort.rows(&test))?;
        for (row, p) in test.into_iter().zip(held_out) {
            predictions[row] = p;
        }
    }
    Ok(predictions)
}

/// Cross-validated report at the default 5% threshold.
pub fn cross_validate(
    cohort: &Cohort,
    config: &FitConfig,
    folds: usize,
    seed: u64,
) -> Result<EvalReport> {
    cross_validate_with_threshold(cohort, config, folds, seed, DEFAULT_THRESHOLD)
}

pub fn cross_validate_with_threshold(
    cohort: &Cohort,
    config: &FitConfig,
    folds: usize,
    seed: u64,
    threshold: f64,
) -> Result<EvalReport> {
    let predictions = cross_validate_predictions(cohort, config, folds, seed)?;
    EvalReport::from_predictions(&predictions, cohort.require_volumes()?, threshold)
}
