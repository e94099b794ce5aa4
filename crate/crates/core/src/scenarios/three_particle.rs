//! Exhaustive search over meter sign conventions for spins in a z-product
//! state.
//!
//! An assignment fixes, for every meter, the definition sign of its
//! observable and which bivector orientation it reads as "up"; all meters
//! share one hidden variable `mu`, uniform on `{±I}`. For each pair of
//! meters along `ez` the search evaluates
//!
//! * the algebraic correlation: scalar part of the μ-averaged geometric
//!   product of the two observables, and
//! * the label correlation: μ-average of the product of the two ±1 labels,
//!
//! and compares both with the quantum expectation in the product state. An
//! assignment is consistent when every pair agrees under both readings.

use crate::clifford::{Multivector, UnitVector};
use crate::error::Result;
use crate::models::{
    expectation_over_mu, meter_outcome, pair_product, HiddenState, Interpretation, MeterModel,
};
use crate::numfmt::fmt_sig;
use crate::quantum::product_pair_correlation;
use crate::report::{ScenarioOutput, ScenarioReport, Table};
use crate::sign::Sign;

use super::EXACT_TOL;

const METER_NAMES: [char; 3] = ['A', 'B', 'C'];

/// Meter conventions for every particle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignAssignment {
    pub meters: Vec<MeterModel>,
}

impl SignAssignment {
    /// All `4^n` assignments ordered by [`SignAssignment::code`].
    pub fn enumerate(particles: usize) -> Vec<SignAssignment> {
        (0..1u32 << (2 * particles))
            .map(|code| Self::from_code(code, particles))
            .collect()
    }

    /// Decodes the bit string `d_1 .. d_n i_1 .. i_n` (most significant
    /// first), with 0 for a `+` definition sign or natural reading.
    pub fn from_code(code: u32, particles: usize) -> Self {
        let bit = |pos: usize| (code >> (2 * particles - 1 - pos)) & 1 == 1;
        let meters = (0..particles)
            .map(|p| {
                let def = if bit(p) { Sign::Minus } else { Sign::Plus };
                let interp = if bit(particles + p) {
                    Interpretation::Flipped
                } else {
                    Interpretation::Natural
                };
                MeterModel::new(def, interp)
            })
            .collect();
        Self { meters }
    }

    pub fn code(&self) -> u32 {
        let n = self.meters.len();
        self.meters.iter().enumerate().fold(0, |acc, (p, m)| {
            let d = u32::from(m.def_sign == Sign::Minus) << (2 * n - 1 - p);
            let i = u32::from(m.interp == Interpretation::Flipped) << (n - 1 - p);
            acc | d | i
        })
    }

    /// e.g. `d=++- i=NFF`.
    pub fn label(&self) -> String {
        let d: String = self.meters.iter().map(|m| m.def_sign.to_string()).collect();
        let i: String = self.meters.iter().map(|m| m.interp.code()).collect();
        format!("d={d} i={i}")
    }
}

/// Meters A and B as in the two-particle resolution (B read in reverse) and
/// `C_ez(±I) = ∓I ez` with `-I ez` read as up.
pub fn forced_c_assignment() -> SignAssignment {
    SignAssignment {
        meters: vec![
            MeterModel::new(Sign::Plus, Interpretation::Natural),
            MeterModel::new(Sign::Plus, Interpretation::Flipped),
            MeterModel::new(Sign::Minus, Interpretation::Flipped),
        ],
    }
}

/// Per-assignment outcome of the comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    pub assignment: SignAssignment,
    pub pairs: Vec<(usize, usize)>,
    pub algebraic: Vec<f64>,
    pub labels: Vec<f64>,
    /// `algebraic - qm` per pair.
    pub algebraic_error: Vec<f64>,
    /// `labels - qm` per pair.
    pub label_error: Vec<f64>,
    pub algebraic_consistent: bool,
    pub label_consistent: bool,
    /// Every single-meter average under uniform `mu` equals the prepared
    /// value.
    pub marginals_uniform_mu: bool,
    /// Some fixed `mu` yields the prepared value on every meter.
    pub marginals_some_mu: bool,
}

impl AssignmentResult {
    pub fn consistent(&self) -> bool {
        self.algebraic_consistent && self.label_consistent
    }

    fn total_error(&self) -> f64 {
        self.algebraic_error
            .iter()
            .chain(&self.label_error)
            .map(|e| e.abs())
            .sum()
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Evaluates one assignment against the product state `pattern` along `ez`.
pub fn evaluate_assignment(
    assignment: &SignAssignment,
    pattern: &[Sign],
    qm: &[f64],
) -> AssignmentResult {
    let ez = UnitVector::ez();
    let meters = &assignment.meters;
    let pairs = all_pairs(pattern.len());
    let label = |m: &MeterModel, mu| meter_outcome(m, &ez, mu).value();

    let algebraic: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| {
            expectation_over_mu(|mu| pair_product(&meters[i], &meters[j], &ez, &ez, mu))
                .scalar_part()
        })
        .collect();
    let labels: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| {
            expectation_over_mu(|mu| {
                Multivector::scalar(label(&meters[i], mu) * label(&meters[j], mu))
            })
            .scalar_part()
        })
        .collect();
    let diff = |model: &[f64]| -> Vec<f64> { model.iter().zip(qm).map(|(m, q)| m - q).collect() };
    let algebraic_error = diff(&algebraic);
    let label_error = diff(&labels);
    let ok = |errs: &[f64]| errs.iter().all(|e| e.abs() <= EXACT_TOL);

    let marginals_uniform_mu = meters.iter().zip(pattern).all(|(m, s)| {
        let avg = expectation_over_mu(|mu| Multivector::scalar(label(m, mu))).scalar_part();
        (avg - s.value()).abs() <= EXACT_TOL
    });
    let marginals_some_mu = HiddenState::BOTH.iter().any(|&mu| {
        meters
            .iter()
            .zip(pattern)
            .all(|(m, s)| meter_outcome(m, &ez, mu) == *s)
    });

    AssignmentResult {
        assignment: assignment.clone(),
        algebraic_consistent: ok(&algebraic_error),
        label_consistent: ok(&label_error),
        pairs,
        algebraic,
        labels,
        algebraic_error,
        label_error,
        marginals_uniform_mu,
        marginals_some_mu,
    }
}

/// Result of the exhaustive search for one prepared pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSearch {
    pub qm: Vec<f64>,
    pub results: Vec<AssignmentResult>,
}

impl AssignmentSearch {
    pub fn visited(&self) -> usize {
        self.results.len()
    }

    pub fn consistent(&self) -> impl Iterator<Item = &AssignmentResult> {
        self.results.iter().filter(|r| r.consistent())
    }

    /// Smallest total absolute error; ties go to the lowest code.
    pub fn best(&self) -> &AssignmentResult {
        self.results
            .iter()
            .min_by(|a, b| {
                a.total_error()
                    .total_cmp(&b.total_error())
                    .then(a.assignment.code().cmp(&b.assignment.code()))
            })
            .expect("at least one assignment")
    }
}

/// Evaluates every assignment for the z-product state `pattern`.
pub fn search_assignments(pattern: &[Sign]) -> Result<AssignmentSearch> {
    let ez = UnitVector::ez();
    let qm = all_pairs(pattern.len())
        .into_iter()
        .map(|pair| product_pair_correlation(pattern, pair, &ez))
        .collect::<Result<Vec<f64>>>()?;
    let results = SignAssignment::enumerate(pattern.len())
        .iter()
        .map(|a| evaluate_assignment(a, pattern, &qm))
        .collect();
    Ok(AssignmentSearch { qm, results })
}

fn pair_name(pair: (usize, usize)) -> String {
    format!("{}{}", METER_NAMES[pair.0], METER_NAMES[pair.1])
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// Searches all 64 conventions for `|+-+>`, plus the two-particle control
/// `|+->` and the forced-C configuration.
///
/// CSV columns: `code,assignment,alg_AB,alg_AC,alg_BC,label_AB,label_AC,label_BC,`
/// `algebraic_consistent,label_consistent,marginals_uniform_mu,marginals_some_mu`.
pub fn run_three_particle_search() -> Result<ScenarioOutput> {
    use Sign::{Minus, Plus};
    let pattern = [Plus, Minus, Plus];
    let search = search_assignments(&pattern)?;
    let control = search_assignments(&[Plus, Minus])?;

    let mut report = ScenarioReport::new("three-particle", 0);
    report.param("pattern", "+-+");
    report.param("direction", "ez");
    report.param("mu_distribution", "uniform shared");
    report.param("control_pattern", "+-");

    let pairs = &search.results[0].pairs;
    for (pair, q) in pairs.iter().zip(&search.qm) {
        report.qm(&format!("qm.{}", pair_name(*pair)), *q);
    }
    report.qm("control.qm.AB", control.qm[0]);

    let consistent = search.consistent().count();
    let count =
        |f: fn(&AssignmentResult) -> bool| search.results.iter().filter(|r| f(r)).count() as f64;
    report.exact("configurations_visited", search.visited() as f64);
    report.exact("consistent_assignments", consistent as f64);
    report.exact(
        "algebraic_consistent_assignments",
        count(|r| r.algebraic_consistent),
    );
    report.exact(
        "label_consistent_assignments",
        count(|r| r.label_consistent),
    );
    report.exact(
        "marginals_uniform_mu_assignments",
        count(|r| r.marginals_uniform_mu),
    );
    report.exact(
        "marginals_some_mu_assignments",
        count(|r| r.marginals_some_mu),
    );
    let qm_refs = ["qm.AB", "qm.AC", "qm.BC"];
    report.verdict(
        "three_particle.consistent_assignment_exists",
        consistent > 0,
        Some(false),
        &["consistent_assignments", qm_refs[0], qm_refs[1], qm_refs[2]],
    );

    let best = search.best();
    report.exact("best.code", f64::from(best.assignment.code()));
    report.param("best.assignment", best.assignment.label());
    for (k, pair) in best.pairs.iter().enumerate() {
        report.exact(
            &format!("best.algebraic_error.{}", pair_name(*pair)),
            best.algebraic_error[k],
        );
        report.exact(
            &format!("best.label_error.{}", pair_name(*pair)),
            best.label_error[k],
        );
    }

    let control_consistent = control.consistent().count();
    report.exact("control.configurations_visited", control.visited() as f64);
    report.exact("control.consistent_assignments", control_consistent as f64);
    report.verdict(
        "control.consistent_assignment_exists",
        control_consistent > 0,
        Some(true),
        &["control.consistent_assignments", "control.qm.AB"],
    );

    let forced = evaluate_assignment(&forced_c_assignment(), &pattern, &search.qm);
    report.param("forced_c.assignment", forced.assignment.label());
    for (k, pair) in forced.pairs.iter().enumerate() {
        let name = pair_name(*pair);
        let key = format!("forced_c.algebraic.{name}");
        report.exact(&key, forced.algebraic[k]);
        let matches = forced.algebraic_error[k].abs() <= EXACT_TOL
            && forced.label_error[k].abs() <= EXACT_TOL;
        // A and C agree as required; B and C then come out wrong.
        let expected = name != "BC";
        report.verdict(
            &format!("forced_c.{name}.matches_qm"),
            matches,
            Some(expected),
            &[&key, &format!("qm.{name}")],
        );
    }

    let mut header = vec!["code".to_string(), "assignment".to_string()];
    header.extend(pairs.iter().map(|p| format!("alg_{}", pair_name(*p))));
    header.extend(pairs.iter().map(|p| format!("label_{}", pair_name(*p))));
    header.extend(
        [
            "algebraic_consistent",
            "label_consistent",
            "marginals_uniform_mu",
            "marginals_some_mu",
        ]
        .map(String::from),
    );
    let mut table = Table {
        header,
        rows: Vec::new(),
        footer: Vec::new(),
    };
    for r in &search.results {
        let mut row = vec![r.assignment.code().to_string(), r.assignment.label()];
        row.extend(r.algebraic.iter().map(|x| fmt_sig(*x)));
        row.extend(r.labels.iter().map(|x| fmt_sig(*x)));
        row.extend([
            yes_no(r.algebraic_consistent),
            yes_no(r.label_consistent),
            yes_no(r.marginals_uniform_mu),
            yes_no(r.marginals_some_mu),
        ]);
        table.push(row);
    }
    table.footer.push(format!(
        "best assignment: {} (algebraic error {})",
        best.assignment.label(),
        best.algebraic_error
            .iter()
            .map(|e| fmt_sig(*e))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    table.footer.push(format!(
        "two-particle control consistent assignments: {control_consistent}"
    ));
    table
        .footer
        .push(format!("consistent assignments: {consistent}"));
    Ok(ScenarioOutput { report, table })
}
