mod common;

use std::fs;

use common::*;
use dbsvol::model_file::load_model;
use dbsvol_core::{generate_cohort, SynthConfig};
use tempfile::tempdir;

#[test]
fn fit_on_planted_csv_reports_zero_exceedance() {
    let dir = tempdir().unwrap();
    let (cohort, _) = planted_cohort(3, 200, &["TP", "K", "Na"]);
    let input = save_cohort(dir.path(), "train.csv", &cohort);
    let model = dir.path().join("model.txt");
    let report = ok(&[
        "fit",
        "--input",
        path_str(&input),
        "--output",
        path_str(&model),
    ]);
    assert_eq!(field(&report, "exceed_fraction"), "0.000000");
    assert_eq!(field(&report, "pearson_r"), "1.000000");
    assert_eq!(field(&report, "threshold"), "0.050000");
    assert_eq!(field(&report, "n"), "200");
    assert_eq!(field(&report, "analytes"), "TP,K,Na");
    assert!(model.exists());
}

#[test]
fn negative_value_cites_its_line() {
    let dir = tempdir().unwrap();
    let mut text = String::from("TP,K,volume\n");
    for i in 0..5 {
        text.push_str(&format!("{}.0,1.5,{}\n", i + 1, 10 + i));
    }
    text.push_str("3.0,-0.2,40\n");
    let input = write_file(dir.path(), "bad.csv", &text);
    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&input),
        "--output",
        path_str(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 7"), "{}", stderr(&out));
}

#[test]
fn ragged_row_is_a_validation_error() {
    let dir = tempdir().unwrap();
    let input = write_file(dir.path(), "bad.csv", "TP,volume\n1,2\n3\n");
    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&input),
        "--output",
        path_str(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn missing_volume_column_fails_fit() {
    let dir = tempdir().unwrap();
    let input = write_file(dir.path(), "x.csv", "TP,K\n1,2\n2,3\n");
    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&input),
        "--output",
        path_str(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("volume"), "{}", stderr(&out));
}

#[test]
fn analytes_flag_restricts_the_panel() {
    let dir = tempdir().unwrap();
    let cohort = generate_cohort(&SynthConfig::default_panel(200, 5)).unwrap();
    let input = save_cohort(dir.path(), "all.csv", &cohort);
    let model = dir.path().join("model.txt");
    ok(&[
        "fit",
        "--input",
        path_str(&input),
        "--output",
        path_str(&model),
        "--analytes",
        "TP,K,Na",
    ]);
    let loaded = load_model(&model).unwrap();
    assert_eq!(loaded.panel().analytes(), ["TP", "K", "Na"]);
    let text = fs::read_to_string(&model).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("analyte\t")).count(),
        3
    );
}

#[test]
fn predict_with_minimum_norm_model() {
    let dir = tempdir().unwrap();
    let train = write_file(dir.path(), "train.csv", "TP,volume\n1,2\n2,4\n");
    let model = dir.path().join("model.txt");
    let report = ok(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&model),
    ]);
    assert_eq!(field(&report, "solver"), "spectral");
    assert_eq!(field(&report, "rank"), "1");

    let rows = write_file(dir.path(), "rows.csv", "TP\n1\n2\n3\n");
    let out = ok(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&rows),
    ]);
    let predicted = csv_column(&out, "predicted_volume");
    for (p, want) in predicted.iter().zip([2.0, 4.0, 6.0]) {
        assert!((p - want).abs() <= 1e-12 * want, "{p} vs {want}");
    }
    assert!(out.starts_with("TP,predicted_volume\n"));
}

#[test]
fn header_only_input_gives_header_only_output() {
    let dir = tempdir().unwrap();
    let train = write_file(dir.path(), "train.csv", "TP,volume\n1,2\n2,4\n");
    let model = dir.path().join("model.txt");
    ok(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&model),
    ]);
    let empty = write_file(dir.path(), "empty.csv", "TP,note\n");
    let out = ok(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&empty),
    ]);
    assert_eq!(out, "TP,note,predicted_volume\n");
}

#[test]
fn missing_analyte_column_is_named() {
    let dir = tempdir().unwrap();
    let (cohort, _) = planted_cohort(4, 50, &["TP", "K", "Na"]);
    let train = save_cohort(dir.path(), "train.csv", &cohort);
    let model = dir.path().join("model.txt");
    ok(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&model),
    ]);
    let rows = write_file(dir.path(), "rows.csv", "TP,Na\n1,2\n");
    let out = dbsvol(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&rows),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("\"K\""), "{}", stderr(&out));
}

#[test]
fn crlf_input_and_extra_columns() {
    let dir = tempdir().unwrap();
    let train = write_file(
        dir.path(),
        "train.csv",
        "id,TP,volume\r\na,1,2\r\nb,2,4\r\n",
    );
    let model = dir.path().join("model.txt");
    ok(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&model),
        "--analytes",
        "TP",
    ]);
    let out = ok(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&train),
    ]);
    assert_eq!(out.lines().next().unwrap(), "id,TP,volume,predicted_volume");
    assert!(!out.contains('\r'));
}

#[test]
fn evaluate_perfect_model() {
    let dir = tempdir().unwrap();
    let (cohort, truth) = planted_cohort(8, 100, &["TP", "K", "Na"]);
    let input = save_cohort(dir.path(), "c.csv", &cohort);
    let model = dir.path().join("truth.txt");
    dbsvol::model_file::save_model(&truth, &model).unwrap();
    let report = ok(&[
        "evaluate",
        "--model",
        path_str(&model),
        "--input",
        path_str(&input),
    ]);
    assert_eq!(field(&report, "pearson_r"), "1.000000");
    assert_eq!(field(&report, "exceed_fraction"), "0.000000");
    assert_eq!(field(&report, "threshold"), "0.050000");
    assert_eq!(field(&report, "n"), "100");

    let cv = ok(&[
        "evaluate",
        "--model",
        path_str(&model),
        "--input",
        path_str(&input),
        "--folds",
        "5",
        "--seed",
        "3",
    ]);
    assert_eq!(field(&cv, "exceed_fraction"), "0.000000");
    assert_eq!(
        cv,
        ok(&[
            "evaluate",
            "--model",
            path_str(&model),
            "--input",
            path_str(&input),
            "--folds",
            "5",
            "--seed",
            "3"
        ])
    );
}

#[test]
fn synth_is_deterministic() {
    let a = ok(&["synth", "--n", "40", "--seed", "11"]);
    let b = ok(&["synth", "--n", "40", "--seed", "11"]);
    let c = ok(&["synth", "--n", "40", "--seed", "12"]);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 41);
    assert!(a.starts_with(
        "Chol,TBil,DBil,TP,Alb,Urea,Crea,ALT,AST,Amy,ALP,K,Ca,Na,Fe,Glu,LDH,volume\n"
    ));
}

#[test]
fn select_recovers_planted_signal() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("c.csv");
    ok(&[
        "synth",
        "--output",
        path_str(&input),
        "--n",
        "800",
        "--seed",
        "21",
        "--analytes",
        "Alb,Ca,Glu,K,Na,TP",
        "--signal",
        "TP,K,Na",
    ]);
    let report = ok(&["select", "--input", path_str(&input), "--max-size", "3"]);
    let mut selected: Vec<&str> = field(&report, "selected").split(',').collect();
    selected.sort();
    assert_eq!(selected, ["K", "Na", "TP"]);
    assert_eq!(field(&report, "subsets_evaluated"), "41");

    let greedy = ok(&[
        "select",
        "--input",
        path_str(&input),
        "--max-size",
        "3",
        "--greedy",
    ]);
    assert_eq!(field(&greedy, "subsets_evaluated"), "15");
}

#[test]
fn select_budget_exceeded_is_a_usage_error() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("c.csv");
    ok(&[
        "synth",
        "--output",
        path_str(&input),
        "--n",
        "30",
        "--seed",
        "1",
    ]);
    let out = dbsvol(&["select", "--input", path_str(&input), "--max-size", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("greedy"), "{}", stderr(&out));
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    assert_eq!(dbsvol(&[]).status.code(), Some(1));
    assert_eq!(dbsvol(&["fit", "--bogus"]).status.code(), Some(1));
    assert_eq!(dbsvol(&["--help"]).status.code(), Some(0));

    let missing = dir.path().join("nope.csv");
    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&missing),
        "--output",
        path_str(&dir.path().join("m")),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let train = write_file(dir.path(), "t.csv", "TP,volume\n1,2\n2,4\n");
    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&dir.path().join("m")),
        "--solver",
        "direct",
    ]);
    assert_eq!(out.status.code(), Some(3));

    let out = dbsvol(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&dir.path().join("m")),
        "--ridge",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn model_file_version_is_checked() {
    let dir = tempdir().unwrap();
    let train = write_file(dir.path(), "t.csv", "TP,volume\n1,2\n2,4\n");
    let model = dir.path().join("m.txt");
    ok(&[
        "fit",
        "--input",
        path_str(&train),
        "--output",
        path_str(&model),
    ]);
    let text = fs::read_to_string(&model)
        .unwrap()
        .replace("format_version\t1", "format_version\t9");
    fs::write(&model, text).unwrap();
    let out = dbsvol(&[
        "predict",
        "--model",
        path_str(&model),
        "--input",
        path_str(&train),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("format_version"), "{}", stderr(&out));
}
