//! Scenario reports and their serializations.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::clifford::Multivector;
use crate::numfmt::{fmt_sig, round_sig};

/// An exactly computed result: a real or a multivector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExactValue {
    Real(f64),
    Multivector(Multivector),
}

impl ExactValue {
    fn quantized(&self) -> Self {
        match self {
            ExactValue::Real(x) => ExactValue::Real(round_sig(*x)),
            ExactValue::Multivector(m) => ExactValue::Multivector(m.quantized()),
        }
    }

    fn render(&self) -> String {
        match self {
            ExactValue::Real(x) => fmt_sig(*x),
            ExactValue::Multivector(m) => m.to_string(),
        }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
}

impl McEstimate {
    /// Fraction of successes among `trials` Bernoulli draws.
    pub fn bernoulli(successes: u64, trials: u64) -> Self {
        if trials == 0 {
            return Self {
                estimate: f64::NAN,
                standard_error: f64::NAN,
                samples: 0,
            };
        }
        let n = trials as f64;
        let p = successes as f64 / n;
        Self {
            estimate: p,
            standard_error: (p * (1.0 - p) / n).sqrt(),
            samples: trials,
        }
    }

    /// Sample mean from the running sums of `x` and `x^2`.
    pub fn from_moments(sum: f64, sum_sq: f64, samples: u64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 {
            ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        Self {
            estimate: mean,
            standard_error: (var / n).sqrt(),
            samples,
        }
    }

    /// `|estimate - target| <= sigmas * standard_error`, with an absolute
    /// floor of 1e-12 for zero-variance estimates.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.estimate - target).abs() <= sigmas * self.standard_error + 1e-12
    }

    fn quantized(&self) -> Self {
        Self {
            estimate: round_sig(self.estimate),
            standard_error: round_sig(self.standard_error),
            samples: self.samples,
        }
    }
}

/// A named comparison. `expected` records what the argument predicts:
/// `Some(true)` for a demonstration that must hold, `Some(false)` for a
/// model failure that must show up, `None` for informational checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub expected: Option<bool>,
    /// Names of the results and references being compared.
    pub compares: Vec<String>,
}

impl Verdict {
    pub fn as_predicted(&self) -> bool {
        self.expected.is_none_or(|e| e == self.holds)
    }
}

/// Deterministic record of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario_name: String,
    pub parameters: IndexMap<String, String>,
    pub exact_results: IndexMap<String, ExactValue>,
    pub mc_results: IndexMap<String, McEstimate>,
    pub qm_reference: IndexMap<String, f64>,
    pub verdicts: IndexMap<String, Verdict>,
    pub seed: u64,
}

impl ScenarioReport {
    pub fn new(scenario_name: &str, seed: u64) -> Self {
        Self {
            scenario_name: scenario_name.to_string(),
            parameters: IndexMap::new(),
            exact_results: IndexMap::new(),
            mc_results: IndexMap::new(),
            qm_reference: IndexMap::new(),
            verdicts: IndexMap::new(),
            seed,
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) {
        self.parameters.insert(name.to_string(), value.to_string());
    }

    pub fn exact(&mut self, name: &str, value: f64) {
        self.exact_results
            .insert(name.to_string(), ExactValue::Real(value));
    }

    pub fn exact_mv(&mut self, name: &str, value: Multivector) {
        self.exact_results
            .insert(name.to_string(), ExactValue::Multivector(value));
    }

    pub fn mc(&mut self, name: &str, value: McEstimate) {
        self.mc_results.insert(name.to_string(), value);
    }

    pub fn qm(&mut self, name: &str, value: f64) {
        self.qm_reference.insert(name.to_string(), value);
    }

    /// Records a verdict. Every name in `compares` must already be a
    /// recorded result or reference.
    pub fn verdict(&mut self, name: &str, holds: bool, expected: Option<bool>, compares: &[&str]) {
        assert!(!compares.is_empty(), "verdict {name} compares nothing");
        for c in compares {
            assert!(
                self.has_entry(c),
                "verdict {name} references unknown entry {c}"
            );
        }
        self.verdicts.insert(
            name.to_string(),
            Verdict {
                holds,
                expected,
                compares: compares.iter().map(|c| c.to_string()).collect(),
            },
        );
    }

    pub fn has_entry(&self, name: &str) -> bool {
        self.exact_results.contains_key(name)
            || self.mc_results.contains_key(name)
            || self.qm_reference.contains_key(name)
    }

    pub fn exact_real(&self, name: &str) -> Option<f64> {
        match self.exact_results.get(name)? {
            ExactValue::Real(x) => Some(*x),
            ExactValue::Multivector(_) => None,
        }
    }

    pub fn exact_multivector(&self, name: &str) -> Option<Multivector> {
        match self.exact_results.get(name)? {
            ExactValue::Multivector(m) => Some(*m),
            ExactValue::Real(_) => None,
        }
    }

    pub fn holds(&self, verdict: &str) -> Option<bool> {
        self.verdicts.get(verdict).map(|v| v.holds)
    }

    /// True when every verdict with a prediction came out as predicted.
    pub fn all_as_predicted(&self) -> bool {
        self.verdicts.values().all(Verdict::as_predicted)
    }

    /// Merges `other` into `self`, prefixing its entry names with
    /// `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: ScenarioReport) {
        let key = |k: &str| format!("{prefix}.{k}");
        for (k, v) in other.parameters {
            self.parameters.insert(key(&k), v);
        }
        for (k, v) in other.exact_results {
            self.exact_results.insert(key(&k), v);
        }
        for (k, v) in other.mc_results {
            self.mc_results.insert(key(&k), v);
        }
        for (k, v) in other.qm_reference {
            self.qm_reference.insert(key(&k), v);
        }
        for (k, mut v) in other.verdicts {
            v.compares = v.compares.iter().map(|c| key(c)).collect();
            self.verdicts.insert(key(&k), v);
        }
    }

    /// Copy with every real rounded to report precision; this is exactly
    /// what the JSON form carries.
    pub fn quantized(&self) -> Self {
        Self {
            scenario_name: self.scenario_name.clone(),
            parameters: self.parameters.clone(),
            exact_results: self
                .exact_results
                .iter()
                .map(|(k, v)| (k.clone(), v.quantized()))
                .collect(),
            mc_results: self
                .mc_results
                .iter()
                .map(|(k, v)| (k.clone(), v.quantized()))
                .collect(),
            qm_reference: self
                .qm_reference
                .iter()
                .map(|(k, v)| (k.clone(), round_sig(*v)))
                .collect(),
            verdicts: self.verdicts.clone(),
            seed: self.seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.quantized())
            .expect("reports contain only finite reals and string keys");
        s.push('\n');
        s
    }

    pub fn from_json(json: &str) -> serde_json::Result<Self> {
        serde_json::from_str(json)
    }
}

/// Per-row view of a scenario, used for CSV and aligned-table output.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Summary lines printed after the table.
    pub footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            writer.write_record(row).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }

    fn aligned(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| {
                std::iter::once(&self.header[c])
                    .chain(self.rows.iter().map(|r| &r[c]))
                    .map(|s| s.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Renderable output of a scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub report: ScenarioReport,
    pub table: Table,
}

impl ScenarioOutput {
    /// Human-readable rendering: parameters, the row table, the verdicts,
    /// then the footer lines.
    pub fn to_table_text(&self) -> String {
        let r = &self.report;
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}  seed: {}", r.scenario_name, r.seed);
        for (k, v) in &r.parameters {
            let _ = writeln!(out, "  {k} = {v}");
        }
        out.push('\n');
        out.push_str(&self.table.aligned());
        out.push('\n');
        let predicted = r.verdicts.values().filter(|v| v.as_predicted()).count();
        let _ = writeln!(
            out,
            "verdicts as predicted: {predicted}/{}",
            r.verdicts.len()
        );
        for (name, v) in &r.verdicts {
            if !v.as_predicted() {
                let _ = writeln!(out, "  UNEXPECTED {name}: holds={}", v.holds);
            }
        }
        for line in &self.table.footer {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

/// Renders an exact value for table cells.
pub fn cell(value: &ExactValue) -> String {
    value.render()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> ScenarioReport {
        let mut r = ScenarioReport::new("demo", 9);
        r.param("grid", "0:1:0.5");
        r.exact("x", 1.0 / 3.0);
        r.exact_mv(
            "m",
            Multivector::scalar(-1.0) + Multivector::pseudoscalar() * 0.25,
        );
        r.mc("x", McEstimate::bernoulli(1, 3));
        r.qm("x", 2f64.sqrt());
        r.verdict("x.close", true, Some(true), &["x"]);
        r
    }

    #[test]
    fn json_round_trip_matches_quantized_report() {
        let r = sample_report();
        let parsed = ScenarioReport::from_json(&r.to_json()).unwrap();
        assert_eq!(parsed, r.quantized());
        assert_eq!(parsed.to_json(), r.to_json());
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn json_has_the_documented_keys() {
        let v: serde_json::Value = serde_json::from_str(&sample_report().to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(
            keys,
            [
                "scenario_name",
                "parameters",
                "exact_results",
                "mc_results",
                "qm_reference",
                "verdicts",
                "seed"
            ]
        );
        assert_eq!(v["exact_results"]["m"], "-1·s + 0.25·I");
        assert_eq!(v["qm_reference"]["x"], 1.41421356237);
    }

    #[test]
    #[should_panic(expected = "unknown entry")]
    fn verdict_must_reference_known_entries() {
        sample_report().verdict("bad", true, None, &["missing"]);
    }

    #[test]
    fn csv_uses_lf_and_quotes_commas() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn bernoulli_estimates() {
        let e = McEstimate::bernoulli(50, 100);
        assert_eq!(e.estimate, 0.5);
        assert!((e.standard_error - 0.05).abs() < 1e-15);
        let certain = McEstimate::bernoulli(10, 10);
        assert_eq!(certain.standard_error, 0.0);
        assert!(certain.within(1.0, 3.0));
        assert!(!certain.within(0.5, 3.0));
    }

    #[test]
    fn moments_estimate() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let e = McEstimate::from_moments(xs.iter().sum(), xs.iter().map(|x| x * x).sum(), 4);
        assert_eq!(e.estimate, 2.5);
        // sample variance 5/3, so SE = sqrt(5/12)
        assert!((e.standard_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn absorb_prefixes_names() {
        let mut outer = ScenarioReport::new("outer", 9);
        outer.absorb("inner", sample_report());
        assert!(outer.exact_results.contains_key("inner.x"));
        assert_eq!(outer.verdicts["inner.x.close"].compares, ["inner.x"]);
    }
}
