//! Desk-scale experiment drivers: natural line width from finite detection
//! windows, electric-versus-magnetic detector complementarity in a
//! two-beam interferometer, the field commutator report, and the
//! measurement-model validation runs (meter completeness, perturbative
//! scaling).
//!
//! Every driver is a pure function of its config; scan points are
//! independent and results are deterministic for a fixed config.

mod commutator;
mod lineshape;
mod mzi;
mod povm;
mod scaling;

pub use commutator::{run_commutator_report, CommutatorConfig, CommutatorEntry};
pub use lineshape::{lineshape_reference, run_lineshape, LineshapeConfig};
pub use mzi::{
    distinguishability, estimate_fringe_period, fringe_period, run_mzi, DetectorKind, MziConfig,
};
pub use povm::{run_povm_check, PovmCheck, PovmCheckConfig};
pub use scaling::{run_perturbation_scaling, ScalingConfig, ScalingPoint, ScalingStudy};

use crate::error::{Error, Result};

/// Probability scan over one abscissa.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub abscissa: Vec<f64>,
    pub probability: Vec<f64>,
    /// Human-readable echo of the configuration that produced the scan.
    pub metadata: String,
}

impl ScanResult {
    pub fn new(abscissa: Vec<f64>, probability: Vec<f64>, metadata: String) -> Result<Self> {
        if abscissa.len() != probability.len() {
            return Err(Error::Shape(format!(
                "scan has {} abscissa points but {} probabilities",
                abscissa.len(),
                probability.len()
            )));
        }
        if let Some(&bad) = probability.iter().find(|&&p| p < -1e-12 || !p.is_finite()) {
            return Err(Error::Numeric(format!(
                "scan contains an invalid probability {bad}"
            )));
        }
        Ok(Self {
            abscissa,
            probability,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.abscissa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissa.is_empty()
    }
}

/// Fringe visibility and which-path distinguishability of one interferometer
/// configuration.
#[derive(Debug, Clone, Copy)]
pub struct ComplementarityMetrics {
    pub visibility: f64,
    pub distinguishability: f64,
}

impl ComplementarityMetrics {
    /// The pair must satisfy `V^2 + D^2 <= 1` up to roundoff.
    pub fn new(visibility: f64, distinguishability: f64) -> Result<Self> {
        for (name, v) in [("visibility", visibility), ("distinguishability", distinguishability)] {
            if !(-1e-12..=1.0 + 1e-9).contains(&v) {
                return Err(Error::Numeric(format!("{name} {v} outside [0, 1]")));
            }
        }
        let sum = visibility * visibility + distinguishability * distinguishability;
        if sum > 1.0 + 1e-9 {
            return Err(Error::Numeric(format!(
                "complementarity violated: V^2 + D^2 = {sum}"
            )));
        }
        Ok(Self {
            visibility,
            distinguishability,
        })
    }
}

/// Fringe contrast `(p_max - p_min) / (p_max + p_min)`; zero for a scan with
/// no signal.
pub fn visibility(scan: &ScanResult) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &p in &scan.probability {
        lo = lo.min(p);
        hi = hi.max(p);
    }
    if !(hi > 1e-15) {
        return 0.0;
    }
    let lo = lo.max(0.0);
    (hi - lo) / (hi + lo)
}

/// Uniform grid of `n >= 2` points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + step * i as f64).collect()
}
