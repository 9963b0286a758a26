//! Analyte-subset selection by cross-validated correlation.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cv::cross_validate_predictions;
use crate::error::{Error, Result};
use crate::fitting::FitConfig;
use crate::metrics::pearson_correlation;
use crate::panel::Cohort;

/// Largest number of subsets the exhaustive search will evaluate.
pub const EXHAUSTIVE_BUDGET: u128 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    Exhaustive,
    /// Forward selection: grow one analyte at a time, keeping the best.
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetScore {
    /// Codes in panel order.
    pub analytes: Vec<String>,
    /// Cross-validated Pearson r; NaN when undefined for this subset.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSearchResult {
    pub selected: Vec<String>,
    pub cv_pearson_r: f64,
    /// Every subset evaluated, in evaluation order.
    pub all_scores: Vec<SubsetScore>,
}

/// Number of non-empty subsets of size at most `k` drawn from `m`.
pub fn subset_count(m: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for j in 1..=k.min(m) {
        c = match c.checked_mul((m - j + 1) as u128) {
            Some(v) => v / j as u128,
            None => return u128::MAX,
        };
        total = total.saturating_add(c);
    }
    total
}

fn sorted_codes(s: &SubsetScore) -> Vec<&str> {
    let mut v: Vec<&str> = s.analytes.iter().map(String::as_str).collect();
    v.sort_unstable();
    v
}

/// `Less` when `a` ranks ahead of `b`: higher score, then fewer analytes,
/// then lexicographically smaller sorted code list. NaN ranks last.
fn rank(a: &SubsetScore, b: &SubsetScore) -> Ordering {
    let by_score = match (a.score.is_nan(), b.score.is_nan()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => b.score.partial_cmp(&a.score).unwrap_or(Ordering::Equal),
    };
    by_score
        .then(a.analytes.len().cmp(&b.analytes.len()))
        .then_with(|| sorted_codes(a).cmp(&sorted_codes(b)))
}

fn score_subset(
    cohort: &Cohort,
    idx: &[usize],
    config: &FitConfig,
    folds: usize,
    seed: u64,
) -> Result<SubsetScore> {
    let analytes: Vec<String> = idx
        .iter()
        .map(|&i| cohort.panel().analytes()[i].clone())
        .collect();
    let projected = cohort.project(&analytes)?;
    let predicted = cross_validate_predictions(&projected, config, folds, seed)?;
    let score = match pearson_correlation(&predicted, cohort.require_volumes()?) {
        Ok(r) => r,
        Err(Error::UndefinedCorrelation) | Err(Error::NonFinite(_)) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(SubsetScore { analytes, score })
}

/// Advances `idx` to the next `k`-combination of `0..m` in lexicographic order.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < m - k + pos {
            idx[pos] += 1;
            for q in pos + 1..k {
                idx[q] = idx[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Searches analyte subsets of size `1..=max_size` for the highest
/// cross-validated Pearson correlation between predicted and true volume.
pub fn select_subset(
    cohort: &Cohort,
    config: &FitConfig,
    max_size: usize,
    folds: usize,
    seed: u64,
    mode: SearchMode,
) -> Result<SubsetSearchResult> {
    config.validate()?;
    cohort.require_volumes()?;
    let m = cohort.panel().len();
    if max_size == 0 || max_size > m {
        return Err(Error::InvalidConfig("max_size must lie in 1..=m"));
    }

    let mut all_scores = Vec::new();
    match mode {
        SearchMode::Exhaustive => {
            let candidates = subset_count(m, max_size);
            if candidates > EXHAUSTIVE_BUDGET {
                return Err(Error::SearchBudgetExceeded {
                    candidates,
                    budget: EXHAUSTIVE_BUDGET,
                });
            }
            for k in 1..=max_size {
                let mut idx: Vec<usize> = (0..k).collect();
                loop {
                    all_scores.push(score_subset(cohort, &idx, config, folds, seed)?);
                    if !next_combination(&mut idx, m) {
                        break;
                    }
                }
            }
        }
        SearchMode::Greedy => {
            let mut current: Vec<usize> = Vec::new();
            for _ in 0..max_size {
                let mut best: Option<(SubsetScore, Vec<usize>)> = None;
                for a in (0..m).filter(|a| !current.contains(a)) {
                    let mut idx = current.clone();
                    idx.push(a);
                    idx.sort_unstable();
                    let s = score_subset(cohort, &idx, config, folds, seed)?;
                    if best
                        .as_ref()
                        .is_none_or(|(b, _)| rank(&s, b) == Ordering::Less)
                    {
                        best = Some((s.clone(), idx));
                    }
                    all_scores.push(s);
                }
                match best {
                    Some((_, idx)) => current = idx,
                    None => break,
                }
            }
        }
    }

    let best = all_scores
        .iter()
        .min_by(|a, b| rank(a, b))
        .cloned()
        .ok_or(Error::EmptyCohort)?;
    Ok(SubsetSearchResult {
        selected: best.analytes,
        cv_pearson_r: best.score,
        all_scores,
    })
}
