use crate::clifford::UnitVector;
use crate::error::{Error, Result};
use crate::models::{bell_observable, expectation_over_mu, pair_product, BellLambda, MeterModel};
use crate::numfmt::fmt_sig;
use crate::quantum::{canonical_chsh_directions, chsh_combination, chsh_value};
use crate::report::{McEstimate, ScenarioOutput, ScenarioReport, Table};
use crate::sign::Sign;

use super::montecarlo::run_blocks;
use super::{EXACT_TOL, MC_SIGMAS, MIN_MC_SAMPLES};

const STREAM: u32 = 13;

/// Upper bound of CHSH for local models.
pub const LOCAL_BOUND: f64 = 2.0;

/// Scalar part of the μ-averaged pair product with both meters standard.
pub fn christian_scalar_correlation(a: &UnitVector, b: &UnitVector) -> f64 {
    let m = MeterModel::standard();
    expectation_over_mu(|mu| pair_product(&m, &m, a, b, mu)).scalar_part()
}

/// Exact correlation of Bell's model with `A = sign(a . λ)` and
/// `B = -sign(b . λ)`: `-1 + 2 angle(a, b) / pi`.
pub fn bell_static_correlation(a: &UnitVector, b: &UnitVector) -> f64 {
    -1.0 + 2.0 * a.angle_to(b) / std::f64::consts::PI
}

/// Integer moments of the four products `A(a_i) B(b_j)`, ordered
/// `(a,b), (a,b'), (a',b), (a',b')`. Each trial runs the four setting pairs
/// on fresh pairs, as separate runs of an experiment would.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: [i64; 4],
    cross: [[i64; 4]; 4],
}

fn merge(mut x: Moments, y: Moments) -> Moments {
    x.n += y.n;
    for i in 0..4 {
        x.sum[i] += y.sum[i];
        for j in 0..4 {
            x.cross[i][j] += y.cross[i][j];
        }
    }
    x
}

fn sample_block<R: rand::Rng + ?Sized>(dirs: &[UnitVector; 4], rng: &mut R, n: u64) -> Moments {
    let [a, a2, b, b2] = dirs;
    let mut m = Moments {
        n,
        ..Moments::default()
    };
    for _ in 0..n {
        let mut product = |x, y| {
            let lambda = BellLambda::sample(rng);
            -i64::from((bell_observable(x, &lambda) * bell_observable(y, &lambda)).as_i8())
        };
        let x = [
            product(a, b),
            product(a, b2),
            product(a2, b),
            product(a2, b2),
        ];
        for i in 0..4 {
            m.sum[i] += x[i];
            for j in 0..4 {
                m.cross[i][j] += x[i] * x[j];
            }
        }
    }
    m
}

/// CHSH estimate from the four sampled correlations. The standard error
/// propagates the sample covariance through the linear combination selected
/// by the signs inside the absolute values.
fn chsh_estimate(m: &Moments) -> McEstimate {
    let n = m.n as f64;
    let mean = m.sum.map(|s| s as f64 / n);
    let s1 = Sign::of(mean[0] - mean[1]).value();
    let s2 = Sign::of(mean[2] + mean[3]).value();
    let w = [s1, -s1, s2, s2];
    let estimate: f64 = w.iter().zip(&mean).map(|(w, x)| w * x).sum();
    let mut var = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let cov = (m.cross[i][j] as f64 - n * mean[i] * mean[j]) / (n - 1.0);
            var += w[i] * w[j] * cov;
        }
    }
    McEstimate {
        estimate,
        standard_error: (var.max(0.0) / n).sqrt(),
        samples: m.n,
    }
}

/// CHSH at the canonical settings for the quantum singlet, the scalar part
/// of the Clifford model, and Bell's static local model. `samples = 0`
/// skips the Monte Carlo estimate.
///
/// CSV columns: `model,setting,correlation,qm`, one row per setting pair
/// and model, followed by rows with setting `chsh`.
pub fn run_chsh(samples: u64, seed: u64) -> Result<ScenarioOutput> {
    if samples != 0 && samples < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            model: "bell-static",
            min: MIN_MC_SAMPLES,
            got: samples,
        });
    }
    let dirs = canonical_chsh_directions();
    let [a, a2, b, b2] = &dirs;

    let mut report = ScenarioReport::new("chsh", seed);
    report.param("samples", samples);
    report.param("settings_deg", "a=0 a'=90 b=45 b'=135");
    let qm = chsh_value(a, a2, b, b2);
    report.qm("chsh", qm);
    let christian = chsh_combination(christian_scalar_correlation, a, a2, b, b2);
    let bell = chsh_combination(bell_static_correlation, a, a2, b, b2);
    report.exact("christian.chsh", christian);
    report.exact("bell_static.chsh", bell);
    report.exact("local_bound", LOCAL_BOUND);

    report.verdict(
        "christian.matches_qm",
        (christian - qm).abs() <= EXACT_TOL,
        Some(true),
        &["christian.chsh", "chsh"],
    );
    report.verdict(
        "qm.exceeds_local_bound",
        qm > LOCAL_BOUND + EXACT_TOL,
        Some(true),
        &["chsh", "local_bound"],
    );
    report.verdict(
        "bell_static.within_local_bound",
        bell <= LOCAL_BOUND + EXACT_TOL,
        Some(true),
        &["bell_static.chsh", "local_bound"],
    );

    let mut table = Table::new(&["model", "setting", "correlation", "qm"]);
    let settings = [
        ("a,b", a, b),
        ("a,b'", a, b2),
        ("a',b", a2, b),
        ("a',b'", a2, b2),
    ];
    let quantum = |x: &UnitVector, y: &UnitVector| crate::quantum::singlet_correlation(x, y);
    for (model, corr) in [
        (
            "christian",
            &christian_scalar_correlation as &dyn Fn(&UnitVector, &UnitVector) -> f64,
        ),
        ("bell_static", &bell_static_correlation),
    ] {
        for (name, x, y) in settings {
            table.push(vec![
                model.into(),
                name.into(),
                fmt_sig(corr(x, y)),
                fmt_sig(quantum(x, y)),
            ]);
        }
    }
    table.push(vec![
        "christian".into(),
        "chsh".into(),
        fmt_sig(christian),
        fmt_sig(qm),
    ]);
    table.push(vec![
        "bell_static".into(),
        "chsh".into(),
        fmt_sig(bell),
        fmt_sig(qm),
    ]);

    if samples > 0 {
        let moments = run_blocks(
            seed,
            STREAM,
            samples,
            |rng, n| sample_block(&dirs, rng, n),
            merge,
        );
        let est = chsh_estimate(&moments);
        report.mc("bell_static.chsh_mc", est);
        report.verdict(
            "bell_static.mc_within_local_bound",
            est.estimate <= LOCAL_BOUND + MC_SIGMAS * est.standard_error + EXACT_TOL,
            Some(true),
            &["bell_static.chsh_mc", "local_bound"],
        );
        report.verdict(
            "bell_static.mc_vs_exact",
            est.within(bell, MC_SIGMAS),
            Some(true),
            &["bell_static.chsh_mc", "bell_static.chsh"],
        );
        table.push(vec![
            "bell_static_mc".into(),
            "chsh".into(),
            fmt_sig(est.estimate),
            fmt_sig(qm),
        ]);
        table.footer.push(format!(
            "bell static chsh (mc): {} +- {}",
            fmt_sig(est.estimate),
            fmt_sig(est.standard_error)
        ));
    }
    table.footer.push(format!(
        "chsh: qm {} christian {} bell static {}",
        fmt_sig(qm),
        fmt_sig(christian),
        fmt_sig(bell)
    ));
    Ok(ScenarioOutput { report, table })
}
