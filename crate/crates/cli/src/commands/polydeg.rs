use pcarleson::polyapprox::{degree_curve, MinDegree, DEFAULT_NODE_FACTOR, MAX_DEGREE};
use serde_json::json;

use crate::config::Config;
use crate::error::CliError;
use crate::output::{num, RunOutput, Table};
use crate::RunContext;

/// Growth in d_min the decade sweep must show from first to last b.
pub const MIN_GROWTH: i64 = 3;

fn cell(m: MinDegree) -> String {
    match m {
        MinDegree::Found(d) => d.to_string(),
        MinDegree::NotFound { .. } => "NotFound".into(),
    }
}

/// Minimal degree with unit weighted error per b, optionally re-run with twice the nodes.
pub fn cmd_polydeg(config: &Config, _ctx: &RunContext) -> Result<RunOutput, CliError> {
    let s = config.section("polydeg");
    let decades: Vec<f64> = (0..=6).map(|e| 10f64.powi(e)).collect();
    let b_list = s.get_list("b", &decades)?;
    let d_max = s.get_checked("d_max", 30usize, |d| {
        if d <= MAX_DEGREE {
            Ok(())
        } else {
            Err(format!("d_max must be ≤ {MAX_DEGREE}"))
        }
    })?;
    let node_factor = s.get_checked("node_factor", DEFAULT_NODE_FACTOR, |f| {
        if f >= DEFAULT_NODE_FACTOR {
            Ok(())
        } else {
            Err(format!("node_factor must be ≥ {DEFAULT_NODE_FACTOR}"))
        }
    })?;
    let refine = s.get_bool("refine", true)?;
    s.finish()?;
    if b_list.is_empty() {
        return Err(CliError::InvalidConfig("polydeg.b is empty".into()));
    }
    if let Some(b) = b_list.iter().find(|b| !(**b > 0.0)) {
        return Err(CliError::InvalidConfig(format!("polydeg.b values must be positive, got {b}")));
    }

    let curve = degree_curve(&b_list, d_max, node_factor)?;
    let fine = if refine { Some(degree_curve(&b_list, d_max, 2 * node_factor)?) } else { None };
    let mut header = vec!["b", "d_min"];
    if refine {
        header.push("d_min_refined");
    }
    let mut table = Table::new("polydeg", &header);
    for (i, (b, m)) in curve.pairs.iter().enumerate() {
        let mut row = vec![num(*b), cell(*m)];
        if let Some(f) = &fine {
            row.push(cell(f.pairs[i].1));
        }
        table.push(row);
    }
    let nondecreasing = curve.is_nondecreasing();
    let growth = curve.total_growth();
    let refined_equal = fine.as_ref().map(|f| f.pairs == curve.pairs);
    let passed = nondecreasing && growth.is_some_and(|g| g >= MIN_GROWTH) && refined_equal.unwrap_or(true);
    let summary = json!({
        "curve": curve,
        "d_max": d_max,
        "node_factor": node_factor,
        "nondecreasing": nondecreasing,
        "total_growth": growth,
        "min_growth": MIN_GROWTH,
        "refined_equal": refined_equal,
    });
    Ok(RunOutput { command: "polydeg".into(), tables: vec![table], summary, passed })
}
