use pcarleson::operators::GridTemplate;
use pcarleson::spectral::{decay_curve, envelope_check, fit_decay, part1_shape, part2_shape, Calibration, DecayFamily, DecaySetup};
use serde_json::json;

use super::{parse_branch, positive};
use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::RunContext;

/// Fitted log₂-slope a Part 1 sweep must reach.
pub const PART1_RATE_BOUND: f64 = -0.005;

/// Norm sweep over j with a fitted rate and an envelope check.
pub fn cmd_decay(config: &Config, _ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = config.section("decay");
    let family_name: String = s.get("family", "part1".to_string())?;
    let k: i32 = s.get("k", 6)?;
    let family = match family_name.as_str() {
        "part1" => DecayFamily::Part1,
        "outer" => DecayFamily::Outer,
        "part2" if k >= 1 => DecayFamily::Part2 { k },
        "part2" => return Err(CliError::InvalidConfig(format!("decay.k must be ≥ 1 for part2, got {k}"))),
        other => return Err(CliError::InvalidConfig(format!("decay.family must be part1, part2 or outer, got '{other}'"))),
    };
    let j_min: i32 = s.get("j_min", 4)?;
    let j_max: i32 = s.get("j_max", 14)?;
    let n: usize = s.get_checked("n", 256, |n: usize| if n >= 8 { Ok(()) } else { Err("need at least 8 grid points".into()) })?;
    let width = s.get_checked("width", 4.0, positive)?;
    let default_b = if matches!(family, DecayFamily::Part2 { .. }) { 1.5 * 2f64.powi(k) } else { 1.0 };
    let b = s.get_checked("b", default_b, positive)?;
    let n_mod: f64 = s.get("n_mod", 0.0)?;
    let branch = parse_branch(&s.get("branch", "abs".to_string())?)?;
    let tol = s.get_checked("tol", 1e-8, positive)?;
    let max_iter: usize = s.get("max_iter", 200_000)?;
    let calibration = match s.get("calibration", "first".to_string())?.as_str() {
        "first" => Calibration::First,
        "max" => Calibration::Max,
        other => return Err(CliError::InvalidConfig(format!("decay.calibration must be first or max, got '{other}'"))),
    };
    s.finish()?;
    if j_min < 0 || j_max < j_min {
        return Err(CliError::InvalidConfig(format!("need 0 ≤ j_min ≤ j_max, got {j_min}..{j_max}")));
    }
    if let DecayFamily::Part2 { k } = family {
        let bk = b / 2f64.powi(k);
        if !(bk > 1.0 && bk <= 2.0) {
            return Err(CliError::InvalidConfig(format!("part2 needs b/2^k in (1, 2], got {bk}")));
        }
    }
    let window_len = match family {
        DecayFamily::Part2 { k } => (j_max.min(2 * k) - j_min.max((11 * k + 5).div_euclid(6)) + 1).max(0),
        _ => j_max - j_min + 1,
    };
    if window_len < 4 {
        return Err(pcarleson::Error::NeedAtLeast4Points(window_len as usize).into());
    }

    let setup = DecaySetup { family, n_mod, b, branch, template: GridTemplate::new(n, width), tol, max_iter };
    let curve = decay_curve(&setup, j_min..=j_max)?;
    let points: Vec<(i32, f64)> = curve.iter().map(|(j, e)| (*j, e.value)).collect();
    let fit = fit_decay(&points)?;
    let shape = |j: i32| match family {
        DecayFamily::Part2 { k } => part2_shape(k, j),
        _ => part1_shape(j),
    };
    let env = envelope_check(&points, shape, calibration)?;

    let mut table = Table::new("decay", &["family", "k", "j", "norm", "iterations", "residual", "shape", "envelope", "ratio"]);
    let k_col = if matches!(family, DecayFamily::Part2 { .. }) { k } else { 0 };
    for ((j, e), ratio) in curve.iter().zip(&env.ratios) {
        table.push(vec![
            family_name.clone(),
            k_col.to_string(),
            j.to_string(),
            num(e.value),
            e.iterations.to_string(),
            num(e.residual),
            num(shape(*j)),
            num(env.constant * shape(*j)),
            num(*ratio),
        ]);
    }
    let rate_ok = !matches!(family, DecayFamily::Part1) || fit.rate <= PART1_RATE_BOUND;
    let summary = json!({
        "family": family_name,
        "k": k_col,
        "fit": fit,
        "envelope": {
            "calibration": calibration,
            "constant": env.constant,
            "holds": env.holds,
            "attained_at": env.attained_at,
            "max_ratio": env.ratios.iter().cloned().fold(0.0, f64::max),
        },
        "rate_bound": matches!(family, DecayFamily::Part1).then_some(PART1_RATE_BOUND),
        "rate_ok": rate_ok,
    });
    Ok(RunOutput { command: "decay".into(), tables: vec![table], summary, passed: env.holds && rate_ok })
}
