use crate::error::{Error, Result};
use crate::report::{ScenarioOutput, ScenarioReport};

use super::chsh::run_chsh;
use super::sequential::{run_sequential, SequentialModel};
use super::MIN_MC_SAMPLES;

/// Bell's local model in both flavours: a static `lambda`, which fixes every
/// later outcome, and one redrawn from the hemisphere selected by each
/// outcome. Combines their sequential statistics with the static model's
/// CHSH value.
///
/// Entry names carry the prefixes `static.`, `hemisphere.` and `chsh.`; the
/// table lists the sequential rows of both models.
pub fn run_bell_toy(samples: u64, seed: u64) -> Result<ScenarioOutput> {
    if samples < MIN_MC_SAMPLES {
        return Err(Error::TooFewSamples {
            model: "bell-toy",
            min: MIN_MC_SAMPLES,
            got: samples,
        });
    }
    let fixed = run_sequential(SequentialModel::BellStatic, None, samples, seed)?;
    let hemisphere = run_sequential(SequentialModel::BellHemisphere, None, samples, seed)?;
    let chsh = run_chsh(samples, seed)?;

    let mut report = ScenarioReport::new("bell-toy", seed);
    report.param("samples", samples);
    let static_ok = fixed.report.holds("model_reproduces_qm") == Some(true);
    let hemisphere_ok = hemisphere.report.holds("model_reproduces_qm") == Some(true);
    report.absorb("static", fixed.report);
    report.absorb("hemisphere", hemisphere.report);
    report.absorb("chsh", chsh.report);
    report.verdict(
        "hemisphere_update_circumvents",
        hemisphere_ok && !static_ok,
        Some(true),
        &["static.p_zxz", "hemisphere.p_zxz", "hemisphere.qm.p_zxz"],
    );

    let mut table = fixed.table;
    table.rows.extend(hemisphere.table.rows);
    table.footer = vec![
        format!("static lambda {}", fixed_footer(&table.footer)),
        format!(
            "hemisphere update {}",
            fixed_footer(&hemisphere.table.footer)
        ),
    ];
    table.footer.extend(chsh.table.footer);
    table.footer.push(format!(
        "hemisphere update circumvents repeated-measurement objection: {}",
        if hemisphere_ok && !static_ok {
            "yes"
        } else {
            "no"
        }
    ));
    Ok(ScenarioOutput { report, table })
}

fn fixed_footer(lines: &[String]) -> String {
    lines.last().cloned().unwrap_or_default()
}
