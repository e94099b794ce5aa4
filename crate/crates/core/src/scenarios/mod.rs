//! Executable scenarios comparing the hidden-variable models with the
//! quantum oracle.
//!
//! Expectations over `mu` are exact two-point sums; expectations over Bell's
//! `lambda` are Monte Carlo estimates with standard errors. Exact
//! comparisons use [`EXACT_TOL`], sampled ones [`MC_SIGMAS`] standard errors.

mod bell_toy;
mod chsh;
mod constraint;
mod epr;
pub mod montecarlo;
mod sequential;
mod three_particle;
mod update_search;

pub use bell_toy::run_bell_toy;
pub use chsh::{bell_static_correlation, christian_scalar_correlation, run_chsh};
pub use constraint::{default_constraint_pairs, run_constraint_check};
pub use epr::{run_epr_scan, MeterBMode};
pub use sequential::{
    bell_sequential_exact, christian_sequential_exact, run_sequential, SequentialModel,
    SequentialProbabilities,
};
pub use three_particle::{
    evaluate_assignment, forced_c_assignment, run_three_particle_search, search_assignments,
    AssignmentResult, AssignmentSearch, SignAssignment,
};
pub use update_search::{feasible_rules, probability_grid, search_update_rules, RuleTargets};

use crate::error::{Error, Result};

/// Tolerance for comparisons between exactly computed quantities.
pub const EXACT_TOL: f64 = 1e-12;

/// Monte Carlo comparisons accept deviations up to this many standard errors.
pub const MC_SIGMAS: f64 = 3.0;

/// Minimum sample count for scenarios that sample Bell's `lambda`.
pub const MIN_MC_SAMPLES: u64 = 10_000;

/// Closed grid `start, start + step, ..., <= stop` of angles in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AngleGrid {
    /// `0 : pi : pi/36`, 37 points.
    pub fn default_grid() -> Self {
        Self {
            start: 0.0,
            stop: std::f64::consts::PI,
            step: std::f64::consts::PI / 36.0,
        }
    }

    /// `floor((stop - start) / step) + 1` points, each `start + k * step`.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(Error::AngleStep(self.step));
        }
        if self.start.is_nan() || self.stop.is_nan() || self.stop < self.start {
            return Err(Error::EmptyGrid);
        }
        // The small slack keeps stop itself when (stop - start) / step is an
        // integer up to rounding.
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|k| self.start + k as f64 * self.step)
            .collect())
    }
}
