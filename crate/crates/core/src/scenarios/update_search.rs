//! Exhaustive search over post-measurement update rules for the Clifford
//! model.
//!
//! After a first `up` along z the hidden state is updated once, and only
//! then does the experimenter choose between measuring z or x. Both
//! conditional probabilities are therefore read off the same updated
//! state, and a rule must satisfy both targets at once.

use crate::error::{Error, Result};
use crate::models::{DirectionTag, HiddenState, UpdateRule};
use crate::numfmt::fmt_sig;
use crate::report::{ScenarioOutput, ScenarioReport, Table};

use super::sequential::christian_sequential_exact;

/// Tolerance when testing a rule against its targets.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Required values of `P(up_z | up_z)` and `P(up_x | up_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuleTargets {
    pub zz: f64,
    pub zx: f64,
}

impl RuleTargets {
    /// The quantum predictions.
    pub const QUANTUM: RuleTargets = RuleTargets { zz: 1.0, zx: 0.5 };
    /// Control satisfied by the identity rule.
    pub const DETERMINISTIC_CONTROL: RuleTargets = RuleTargets { zz: 1.0, zx: 1.0 };
    /// Control satisfied by flipping with probability 1/2.
    pub const RANDOM_CONTROL: RuleTargets = RuleTargets { zz: 0.5, zx: 0.5 };
}

/// Probabilities `0, step, 2 step, ..., 1`. When `1 / step` is an integer
/// `n` the points are `k / n` exactly; otherwise 1 is appended.
pub fn probability_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::GridStep(step));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() < 1e-9 {
        let n = n as u32;
        return Ok((0..=n).map(|k| f64::from(k) / f64::from(n)).collect());
    }
    let mut points: Vec<f64> = (0..)
        .map(|k| f64::from(k) * step)
        .take_while(|p| *p < 1.0)
        .collect();
    points.push(1.0);
    Ok(points)
}

/// Every rule on the grid, as flip probabilities after a z measurement for
/// `mu = +I` and `mu = -I`, that meets `targets`.
pub fn feasible_rules(step: f64, targets: RuleTargets) -> Result<(usize, Vec<(f64, f64)>)> {
    let grid = probability_grid(step)?;
    let mut visited = 0;
    let mut feasible = Vec::new();
    for &p_plus in &grid {
        for &p_minus in &grid {
            visited += 1;
            let rule = UpdateRule::identity()
                .with(HiddenState::PLUS, DirectionTag::Z, p_plus)?
                .with(HiddenState::MINUS, DirectionTag::Z, p_minus)?;
            let probs = christian_sequential_exact(&rule);
            if (probs.zz - targets.zz).abs() <= FEASIBILITY_TOL
                && (probs.zx - targets.zx).abs() <= FEASIBILITY_TOL
            {
                feasible.push((p_plus, p_minus));
            }
        }
    }
    Ok((visited, feasible))
}

/// Searches the rule grid against the quantum targets and both controls.
///
/// CSV columns: `constraints,target_zz,target_zx,rules_visited,feasible_count,first_feasible`.
pub fn search_update_rules(grid_step: f64) -> Result<ScenarioOutput> {
    let mut report = ScenarioReport::new("update-rule-search", 0);
    report.param("grid_step", fmt_sig(grid_step));
    report.param("tolerance", fmt_sig(FEASIBILITY_TOL));
    report.qm("qm.p_zz", RuleTargets::QUANTUM.zz);
    report.qm("qm.p_zx", RuleTargets::QUANTUM.zx);
    let mut table = Table::new(&[
        "constraints",
        "target_zz",
        "target_zx",
        "rules_visited",
        "feasible_count",
        "first_feasible",
    ]);

    let cases = [
        ("quantum", RuleTargets::QUANTUM, false),
        (
            "deterministic_control",
            RuleTargets::DETERMINISTIC_CONTROL,
            true,
        ),
        ("random_control", RuleTargets::RANDOM_CONTROL, true),
    ];
    let mut headline = 0;
    for (name, targets, expect_feasible) in cases {
        let (visited, feasible) = feasible_rules(grid_step, targets)?;
        let count_key = format!("{name}.feasible_count");
        report.exact(&format!("{name}.rules_visited"), visited as f64);
        report.exact(&count_key, feasible.len() as f64);
        report.exact(&format!("{name}.target_zz"), targets.zz);
        report.exact(&format!("{name}.target_zx"), targets.zx);
        let first = feasible.first().map(|(p, m)| {
            report.exact(&format!("{name}.first_feasible.flip_plus"), *p);
            report.exact(&format!("{name}.first_feasible.flip_minus"), *m);
            format!("flip(+I)={} flip(-I)={}", fmt_sig(*p), fmt_sig(*m))
        });
        let compares: Vec<&str> = if name == "quantum" {
            vec![&count_key, "qm.p_zz", "qm.p_zx"]
        } else {
            vec![&count_key]
        };
        report.verdict(
            &format!("{name}.feasible"),
            !feasible.is_empty(),
            Some(expect_feasible),
            &compares,
        );
        if name == "quantum" {
            headline = feasible.len();
        }
        table.push(vec![
            name.to_string(),
            fmt_sig(targets.zz),
            fmt_sig(targets.zx),
            visited.to_string(),
            feasible.len().to_string(),
            first.unwrap_or_else(|| "none".into()),
        ]);
    }
    table
        .footer
        .push(format!("feasible update rules: {headline}"));
    Ok(ScenarioOutput { report, table })
}
