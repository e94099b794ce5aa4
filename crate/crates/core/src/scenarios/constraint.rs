use crate::clifford::{Multivector, UnitVector};
use crate::error::{Error, Result};
use crate::models::{constraint_check, MeterModel};
use crate::numfmt::fmt_sig;
use crate::report::{ScenarioOutput, ScenarioReport, Table};

use super::epr::MeterBMode;
use super::EXACT_TOL;

/// Checks, for each direction pair, whether the μ-averaged commutator of the
/// two observables vanishes and whether the observable squares to +1.
///
/// CSV columns: `index,ax,ay,az,bx,by,bz,commutator_avg,square_avg,commutator_zero,square_is_one`.
pub fn run_constraint_check(
    pairs: &[(UnitVector, UnitVector)],
    meter_b: MeterBMode,
) -> Result<ScenarioOutput> {
    if pairs.is_empty() {
        return Err(Error::EmptyDirections);
    }
    let meter_a = MeterModel::standard();
    let mb = meter_b.meter_b();

    let mut report = ScenarioReport::new("constraint-check", 0);
    report.param("meter_b", meter_b.name());
    report.param("pairs", pairs.len());
    report.qm("required.commutator_avg", 0.0);
    report.qm("required.square_avg", 1.0);
    let mut table = Table::new(&[
        "index",
        "ax",
        "ay",
        "az",
        "bx",
        "by",
        "bz",
        "commutator_avg",
        "square_avg",
        "commutator_zero",
        "square_is_one",
    ]);
    let (mut commutator_violations, mut square_violations) = (0usize, 0usize);

    for (k, (a, b)) in pairs.iter().enumerate() {
        let check = constraint_check(&meter_a, &mb, a, b);
        let key = |s: &str| format!("pair[{k}].{s}");
        let (comm_key, sq_key) = (key("commutator_avg"), key("square_avg"));
        report.exact_mv(&comm_key, check.commutator_avg);
        report.exact_mv(&sq_key, check.square_avg);

        let commutator_zero = check.commutator_avg.is_zero_within(EXACT_TOL);
        let square_is_one = check.square_avg.approx_eq(&Multivector::scalar(1.0));
        let parallel = a
            .to_multivector()
            .wedge(&b.to_multivector())
            .is_zero_within(EXACT_TOL);
        report.verdict(
            &key("commutator_zero"),
            commutator_zero,
            Some(parallel),
            &[&comm_key, "required.commutator_avg"],
        );
        report.verdict(
            &key("square_is_one"),
            square_is_one,
            Some(false),
            &[&sq_key, "required.square_avg"],
        );
        commutator_violations += usize::from(!commutator_zero);
        square_violations += usize::from(!square_is_one);

        let [ax, ay, az] = a.components();
        let [bx, by, bz] = b.components();
        let mut row: Vec<String> = vec![k.to_string()];
        row.extend([ax, ay, az, bx, by, bz].map(fmt_sig));
        row.extend([
            check.commutator_avg.to_string(),
            check.square_avg.to_string(),
            commutator_zero.to_string(),
            square_is_one.to_string(),
        ]);
        table.push(row);
    }
    report.exact("commutator_violations", commutator_violations as f64);
    report.exact("square_violations", square_violations as f64);
    table.footer.push(format!(
        "commutator violations: {commutator_violations}/{}",
        pairs.len()
    ));
    table.footer.push(format!(
        "square violations: {square_violations}/{}",
        pairs.len()
    ));
    Ok(ScenarioOutput { report, table })
}

/// Pairs used when no directions are given: `(ez, ex)`, `(ez, ez)`,
/// `(ex, ey)` and a generic pair.
pub fn default_constraint_pairs() -> Vec<(UnitVector, UnitVector)> {
    let generic = UnitVector::normalize([1.0, 2.0, 2.0]).expect("nonzero");
    vec![
        (UnitVector::ez(), UnitVector::ex()),
        (UnitVector::ez(), UnitVector::ez()),
        (UnitVector::ex(), UnitVector::ey()),
        (UnitVector::ez(), generic),
    ]
}
