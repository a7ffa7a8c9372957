use super::*;
use crate::config::Config;
use crate::error::CliError;
use crate::{run_command, Command, RunContext};

fn cfg(text: &str) -> Config {
    Config::parse(text).unwrap()
}

fn ctx() -> RunContext {
    RunContext::default()
}

#[test]
fn multiplier_hilbert_row() {
    let out = cmd_multiplier(&cfg("[multiplier]\nxi = -1:1:3\neta = -1:1:3\ndefects = true\ntol = 1e-8\n"), &ctx()).unwrap();
    let t = &out.tables[0];
    assert_eq!(t.rows.len(), 9);
    let row = t.rows.iter().find(|r| r[0].parse::<f64>().unwrap() == 1.0 && r[1].parse::<f64>().unwrap() == 0.0).unwrap();
    let im: f64 = row[t.column("im").unwrap()].parse().unwrap();
    assert!((im - std::f64::consts::PI).abs() <= 1e-8);
    assert!(out.passed);
}

#[test]
fn multiplier_rejects_empty_grid() {
    let err = cmd_multiplier(&cfg("[multiplier]\nxi =\n"), &ctx()).unwrap_err();
    assert!(matches!(&err, CliError::InvalidConfig(m) if m == "empty grid"));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn decay_needs_four_points() {
    let err = cmd_decay(&cfg("[decay]\nj_min = 4\nj_max = 4\n"), &ctx()).unwrap_err();
    assert!(matches!(err, CliError::Numerical(pcarleson::Error::NeedAtLeast4Points(1))));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn decay_small_sweep_is_deterministic() {
    let c = cfg("[decay]\nj_min = 2\nj_max = 5\nn = 96\n");
    let a = cmd_decay(&c, &ctx()).unwrap();
    let b = cmd_decay(&c, &ctx()).unwrap();
    assert_eq!(a.tables[0].to_csv().unwrap(), b.tables[0].to_csv().unwrap());
    assert_eq!(a.tables[0].rows.len(), 4);
    assert!(a.summary["fit"]["rate"].as_f64().unwrap().is_finite());
}

#[test]
fn decay_part2_validates_b() {
    let err = cmd_decay(&cfg("[decay]\nfamily = part2\nk = 6\nb = 10\n"), &ctx()).unwrap_err();
    assert!(matches!(err, CliError::InvalidConfig(_)));
}

#[test]
fn lemma_reports_rows_per_h() {
    let out = cmd_lemma(&cfg("[lemma]\nj_min = 10\nj_max = 12\nh = 0.5, 1\nxi = 0.5\n"), &ctx()).unwrap();
    assert_eq!(out.tables[0].rows.len(), 6);
    assert_eq!(out.summary["violations_per_h"].as_object().unwrap().len(), 2);
    let err = cmd_lemma(&cfg("[lemma]\nh = 1.5\n"), &ctx()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn polydeg_marks_not_found() {
    let out = cmd_polydeg(&cfg("[polydeg]\nb = 1e6\nd_max = 0\nrefine = false\n"), &ctx()).unwrap();
    assert_eq!(out.tables[0].rows[0][1], "NotFound");
    assert!(!out.passed);
    let err = cmd_polydeg(&cfg("[polydeg]\nd_max = 61\n"), &ctx()).unwrap_err();
    assert!(err.to_string().contains("polydeg.d_max") && err.to_string().contains("line 2"));
}

#[test]
fn verify_negative_control_trips_split_check() {
    let small = cfg("[verify]\nsplit_samples = 200\nq_samples = 100\nm2_samples = 5\n");
    let clean = cmd_verify(&small, &ctx()).unwrap();
    assert!(clean.passed);
    let bad = cmd_verify(&small, &RunContext { perturb_k2: 1e-3, ..ctx() }).unwrap();
    assert!(!bad.passed);
    let failed: Vec<&str> = bad.tables[0].rows.iter().filter(|r| r[1] == "false").map(|r| r[0].as_str()).collect();
    assert_eq!(failed, vec!["k_split_identity"]);
}

#[test]
fn unknown_keys_and_foreign_sections_are_rejected() {
    let err = run_command(Command::Polydeg, &cfg("[polydeg]\nfoo = 1\n"), &ctx()).unwrap_err();
    assert!(err.to_string().contains("unknown key"));
    let err = run_command(Command::Polydeg, &cfg("[decay]\nj_min = 1\n"), &ctx()).unwrap_err();
    assert!(matches!(err, CliError::InvalidConfig(_)));
}

#[test]
fn decay_part2_on_desk_grid_is_rejected() {
    let err = cmd_decay(&cfg("[decay]\nfamily = part2\nk = 18\nj_min = 0\nj_max = 36\n"), &ctx()).unwrap_err();
    assert!(matches!(err, CliError::Numerical(pcarleson::Error::GridTooCoarse { .. })));
    assert_eq!(err.exit_code(), 2);
}
