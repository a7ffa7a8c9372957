use pcarleson::multiplier::{check_anisotropic_homogeneity, check_conjugation_symmetry, eval_m2};
use rayon::prelude::*;
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::RunContext;

const DEFAULT_AXIS: [f64; 3] = [-20.0, 20.0, 41.0];

fn default_axis() -> Vec<f64> {
    let [lo, hi, n] = DEFAULT_AXIS;
    let n = n as usize;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Grid sweep of m₂: one row per (ξ, η) with ξ outer.
pub fn cmd_multiplier(config: &Config, _ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = config.section("multiplier");
    let xi = s.get_list("xi", &default_axis())?;
    let eta = s.get_list("eta", &default_axis())?;
    let tol = s.get_checked("tol", 1e-8, |t: f64| if t > 0.0 { Ok(()) } else { Err("tol must be positive".into()) })?;
    let defects = s.get_bool("defects", false)?;
    let lambda = s.get_checked("lambda", 2.0, |l: f64| if l > 0.0 { Ok(()) } else { Err("lambda must be positive".into()) })?;
    s.finish()?;
    if xi.is_empty() || eta.is_empty() {
        return Err(CliError::InvalidConfig("empty grid".into()));
    }

    let points: Vec<(f64, f64)> = xi.iter().flat_map(|&x| eta.iter().map(move |&e| (x, e))).collect();
    let rows = points
        .par_iter()
        .map(|&(x, e)| {
            let v = eval_m2(x, e, tol)?;
            let mut row = vec![num(x), num(e), num(v.value.re), num(v.value.im), num(v.error)];
            let mut d = (0.0, 0.0);
            if defects {
                d = (check_anisotropic_homogeneity(x, e, lambda, tol)?, check_conjugation_symmetry(x, e, tol)?);
                row.push(num(d.0));
                row.push(num(d.1));
            }
            Ok((row, v.value.norm(), v.error, d))
        })
        .collect::<Result<Vec<_>, pcarleson::Error>>()?;

    let mut header = vec!["xi", "eta", "re", "im", "err"];
    if defects {
        header.extend(["homogeneity_defect", "conjugation_defect"]);
    }
    let mut table = Table::new("multiplier", &header);
    let (mut max_abs, mut max_err, mut max_h, mut max_c) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (row, abs, err, (h, c)) in rows {
        table.push(row);
        max_abs = max_abs.max(abs);
        max_err = max_err.max(err);
        max_h = max_h.max(h);
        max_c = max_c.max(c);
    }
    let passed = !defects || (max_h <= 2.0 * tol && max_c <= 2.0 * tol);
    let summary = json!({
        "points": points.len(),
        "tol": tol,
        "max_abs_value": max_abs,
        "max_error_estimate": max_err,
        "max_homogeneity_defect": defects.then_some(max_h),
        "max_conjugation_defect": defects.then_some(max_c),
    });
    Ok(RunOutput { command: "multiplier".into(), tables: vec![table], summary, passed })
}
