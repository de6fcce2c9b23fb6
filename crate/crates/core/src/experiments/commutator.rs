//! Tabulated equal-time electric/magnetic field commutators: the matrix
//! commutator on the truncated space against the analytic discrete mode sum
//! (the box-regularized derivative-of-delta commutator).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{eb_commutator, sub_cutoff_deviation, ModeSet};
use crate::vec3::Vec3;

/// Configuration of a commutator report.
#[derive(Debug, Clone)]
pub struct CommutatorConfig {
    /// Per-mode photon-number cutoff of the truncated space.
    pub cutoff: usize,
    /// Evaluation point of the electric field.
    pub x: Vec3,
    /// Evaluation point of the magnetic field.
    pub y: Vec3,
    /// Cartesian component pairs `(j, k)` to evaluate.
    pub components: Vec<(usize, usize)>,
    /// Times at which to evaluate (equal-time commutators are expected to be
    /// time independent).
    pub times: Vec<f64>,
}

impl CommutatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 1 {
            return Err(Error::Config("cutoff must be >= 1".into()));
        }
        if self.components.is_empty() {
            return Err(Error::Config("no component pairs requested".into()));
        }
        if let Some(&(j, k)) = self.components.iter().find(|&&(j, k)| j > 2 || k > 2) {
            return Err(Error::Index(format!(
                "component pair ({j}, {k}) out of range 0..=2"
            )));
        }
        if self.times.is_empty() {
            return Err(Error::Config("no evaluation times requested".into()));
        }
        Ok(())
    }
}

/// One row of the report.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorEntry {
    pub j: usize,
    pub k: usize,
    pub t: f64,
    /// Mean diagonal of the matrix commutator on the sub-cutoff block.
    pub numeric: Complex64,
    /// The analytic discrete mode sum.
    pub analytic: Complex64,
    /// Largest entrywise deviation of the matrix from `analytic * identity`
    /// on the sub-cutoff block.
    pub deviation: f64,
}

/// Evaluate `[E_j(x, t), B_k(y, t)]` for every requested component pair and
/// time.
pub fn run_commutator_report(ms: &ModeSet, cfg: &CommutatorConfig) -> Result<Vec<CommutatorEntry>> {
    cfg.validate()?;
    let space = ms.photon_space(cfg.cutoff)?;
    let mut entries = Vec::with_capacity(cfg.components.len() * cfg.times.len());
    for &(j, k) in &cfg.components {
        for &t in &cfg.times {
            let (numeric, analytic) = eb_commutator(ms, &space, j, k, cfg.x, cfg.y, t)?;
            let m = numeric.matrix();
            let mut diag_sum = Complex64::ZERO;
            let mut count = 0usize;
            for i in 0..space.dim() {
                if space.is_sub_cutoff(i) {
                    diag_sum += m[[i, i]];
                    count += 1;
                }
            }
            entries.push(CommutatorEntry {
                j,
                k,
                t,
                numeric: diag_sum / count as f64,
                analytic,
                deviation: sub_cutoff_deviation(&numeric, analytic),
            });
        }
    }
    Ok(entries)
}
