use std::collections::BTreeMap;

use pcarleson::kernels::PhaseVariant;
use pcarleson::spectral::{oscillatory_lemma_envelope, LemmaShape, LemmaSweep};
use serde_json::json;

use super::positive;
use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::RunContext;

/// Lemma sweep table; passes when no row exceeds the calibrated envelope.
pub fn cmd_lemma(config: &Config, _ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = config.section("lemma");
    let variant_name: String = s.get("variant", "part1".to_string())?;
    let variant = match variant_name.as_str() {
        "part1" => PhaseVariant::Part1,
        "part2" => PhaseVariant::Part2,
        other => return Err(CliError::InvalidConfig(format!("lemma.variant must be part1 or part2, got '{other}'"))),
    };
    let part2 = variant == PhaseVariant::Part2;
    let k: i32 = s.get("k", 6)?;
    let (dj_lo, dj_hi) = if part2 { ((11 * k + 5).div_euclid(6), 2 * k) } else { (10, 24) };
    let j_min: i32 = s.get("j_min", dj_lo)?;
    let j_max: i32 = s.get("j_max", dj_hi)?;
    let bx = s.get_checked("bx", if part2 { 1.4 } else { 1.0 }, positive)?;
    let h_default: &[f64] = if part2 { &[0.55, 0.75, 1.0] } else { &[0.1, 0.5, 1.0] };
    let h_set = s.get_list("h", h_default)?;
    let xi_set = s.get_list("xi", &[-1.0, -0.5, -0.25, 0.25, 0.5, 1.0])?;
    let v_set = s.get_list("v", &[0.0])?;
    let shape = match s.get("shape", "decay_only".to_string())?.as_str() {
        "decay_only" => LemmaShape::DecayOnly,
        "display" => LemmaShape::Display,
        other => return Err(CliError::InvalidConfig(format!("lemma.shape must be decay_only or display, got '{other}'"))),
    };
    let tol = s.get_checked("tol", 1e-10, positive)?;
    s.finish()?;
    if j_min < 0 || j_max < j_min {
        return Err(CliError::InvalidConfig(format!("need 0 ≤ j_min ≤ j_max, got {j_min}..{j_max}")));
    }
    if let Some(h) = h_set.iter().find(|h| !(**h > 0.0 && **h <= 1.0)) {
        return Err(CliError::InvalidConfig(format!("lemma.h values must lie in (0, 1], got {h}")));
    }
    if h_set.is_empty() || xi_set.is_empty() || v_set.is_empty() {
        return Err(CliError::InvalidConfig("lemma.h, lemma.xi and lemma.v must be non-empty".into()));
    }

    let sweep = LemmaSweep { variant, j_range: j_min..=j_max, k, bx, h_set, xi_set, v_set, shape, tol };
    let env = oscillatory_lemma_envelope(&sweep)?;
    let mut table = Table::new(
        "lemma",
        &["j", "xi_prime", "h", "v_star", "measured", "psi_c2", "normalized", "shape", "envelope", "within"],
    );
    let mut per_h: BTreeMap<String, usize> = BTreeMap::new();
    for r in &env.rows {
        table.push(vec![
            r.j.to_string(),
            num(r.xi_prime),
            num(r.h),
            num(r.v_star),
            num(r.measured),
            num(r.psi_c2),
            num(r.normalized),
            num(r.shape),
            num(r.envelope),
            r.within.to_string(),
        ]);
        *per_h.entry(format!("{}", r.h)).or_default() += usize::from(!r.within);
    }
    let violations: usize = per_h.values().sum();
    let summary = json!({
        "variant": variant_name,
        "k": if part2 { Some(k) } else { None },
        "shape": shape,
        "constant": env.constant,
        "calibration_j": env.calibration_j,
        "rows": env.rows.len(),
        "violations": violations,
        "violations_per_h": per_h,
        "h_uniform": env.h_uniform,
    });
    Ok(RunOutput { command: "lemma".into(), tables: vec![table], summary, passed: env.h_uniform })
}
