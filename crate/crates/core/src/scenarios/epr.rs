use crate::clifford::UnitVector;
use crate::error::{Error, Result};
use crate::models::{expectation_over_mu, pair_product, MeterModel};
use crate::numfmt::fmt_sig;
use crate::quantum::singlet_correlation;
use crate::report::{ScenarioOutput, ScenarioReport, Table};

use super::EXACT_TOL;

/// How the second meter's observable is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeterBMode {
    /// `B_n(mu) = mu . n`, the same definition as meter A.
    ChristianEq16,
    /// `B_n(mu) = -A_n(mu)`, perfect anticorrelation for equal settings.
    AnticorrelatedEq2,
}

impl MeterBMode {
    pub fn meter_b(self) -> MeterModel {
        match self {
            MeterBMode::ChristianEq16 => MeterModel::standard(),
            MeterBMode::AnticorrelatedEq2 => MeterModel::anticorrelated(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeterBMode::ChristianEq16 => "christian-eq16",
            MeterBMode::AnticorrelatedEq2 => "anticorrelated-eq2",
        }
    }
}

/// Scans `b = cos θ ez + sin θ ex` against `a = ez`, comparing the
/// μ-averaged pair product with the singlet correlation `-cos θ`.
///
/// CSV columns: `theta,model_scalar,model_bivector,qm,verdict` where
/// verdict is `match`, `wrong_sign` or `mismatch`.
pub fn run_epr_scan(angle_grid: &[f64], mode: MeterBMode) -> Result<ScenarioOutput> {
    if angle_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let meter_a = MeterModel::standard();
    let meter_b = mode.meter_b();
    let a = UnitVector::ez();

    let mut report = ScenarioReport::new("epr-scan", 0);
    report.param("mode", mode.name());
    report.param("points", angle_grid.len());
    report.param(
        "angles",
        angle_grid
            .iter()
            .map(|t| fmt_sig(*t))
            .collect::<Vec<_>>()
            .join(" "),
    );
    let mut table = Table::new(&["theta", "model_scalar", "model_bivector", "qm", "verdict"]);
    let (mut matches, mut wrong_signs) = (0usize, 0usize);

    for (k, &theta) in angle_grid.iter().enumerate() {
        let b = UnitVector::in_xz_plane(theta);
        let avg = expectation_over_mu(|mu| pair_product(&meter_a, &meter_b, &a, &b, mu));
        let scalar = avg.scalar_part();
        let bivector = avg.grade_project(2);
        let qm = singlet_correlation(&a, &b);

        let key = |s: &str| format!("theta[{k}].{s}");
        let (theta_key, scalar_key, biv_key, qm_key) =
            (key("theta"), key("scalar"), key("bivector"), key("qm"));
        report.exact(&theta_key, theta);
        report.exact(&scalar_key, scalar);
        report.exact_mv(&biv_key, bivector);
        report.qm(&qm_key, qm);

        let cos_nonzero = theta.cos().abs() > EXACT_TOL;
        let matches_qm = (scalar - qm).abs() <= EXACT_TOL;
        let oracle_ok = (qm + theta.cos()).abs() <= EXACT_TOL;
        report.verdict(
            &key("qm_equals_minus_cos"),
            oracle_ok,
            Some(true),
            &[&theta_key, &qm_key],
        );
        let (label, wrong) = match mode {
            MeterBMode::ChristianEq16 => {
                report.verdict(
                    &key("matches_qm"),
                    matches_qm,
                    Some(true),
                    &[&scalar_key, &qm_key],
                );
                (if matches_qm { "match" } else { "mismatch" }, false)
            }
            MeterBMode::AnticorrelatedEq2 => {
                let wrong_sign = (scalar - theta.cos()).abs() <= EXACT_TOL;
                report.verdict(
                    &key("matches_qm"),
                    matches_qm,
                    Some(!cos_nonzero),
                    &[&scalar_key, &qm_key],
                );
                report.verdict(
                    &key("wrong_sign"),
                    wrong_sign,
                    Some(true),
                    &[&scalar_key, &qm_key],
                );
                let w = wrong_sign && cos_nonzero;
                (
                    if matches_qm {
                        "match"
                    } else if w {
                        "wrong_sign"
                    } else {
                        "mismatch"
                    },
                    w,
                )
            }
        };
        matches += usize::from(matches_qm);
        wrong_signs += usize::from(wrong);
        table.push(vec![
            fmt_sig(theta),
            fmt_sig(scalar),
            bivector.to_string(),
            fmt_sig(qm),
            label.to_string(),
        ]);
    }
    report.exact("points_matching_qm", matches as f64);
    report.exact("points_wrong_sign", wrong_signs as f64);
    table.footer.push(format!(
        "points matching qm: {matches}/{}",
        angle_grid.len()
    ));
    if mode == MeterBMode::AnticorrelatedEq2 {
        table
            .footer
            .push(format!("points with wrong sign: {wrong_signs}"));
    }
    Ok(ScenarioOutput { report, table })
}
