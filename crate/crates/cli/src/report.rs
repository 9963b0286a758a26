//! `key = value` text rendering of evaluation and subset-search results.

use std::fmt::Write as _;

use dbsvol_core::{EvalReport, SubsetSearchResult};

pub fn render_eval(kind: &str, report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "evaluation = {kind}");
    let _ = writeln!(s, "n = {}", report.n);
    match report.pearson_r {
        Some(r) => {
            let _ = writeln!(s, "pearson_r = {r:.6}");
        }
        None => {
            let _ = writeln!(s, "pearson_r = undefined");
        }
    }
    let _ = writeln!(s, "exceed_fraction = {:.6}", report.exceed_fraction);
    let _ = writeln!(s, "threshold = {:.6}", report.threshold);
    let _ = writeln!(s, "mean_abs_rel_error = {:.6e}", report.mean_abs_rel_error);
    let _ = writeln!(s, "max_abs_rel_error = {:.6e}", report.max_abs_rel_error);
    s
}

pub fn render_subset(result: &SubsetSearchResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "selected = {}", result.selected.join(","));
    let _ = writeln!(s, "cv_pearson_r = {:.9}", result.cv_pearson_r);
    let _ = writeln!(s, "subsets_evaluated = {}", result.all_scores.len());
    for entry in &result.all_scores {
        let _ = writeln!(s, "score {} = {:.9}", entry.analytes.join(","), entry.score);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_report_text() {
        let r = EvalReport::from_predictions(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 0.05).unwrap();
        let text = render_eval("in-sample", &r);
        assert!(text.contains("pearson_r = 1.000000\n"));
        assert!(text.contains("exceed_fraction = 0.000000\n"));
        assert!(text.contains("threshold = 0.050000\n"));
        assert!(text.contains("n = 3\n"));
    }
}
