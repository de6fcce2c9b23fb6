//! Natural line width of a finite-time detection window.
//!
//! One photon sits in a single mode of frequency `omega`. A family of
//! magnetic-dipole detector atoms with transition energies `omega + detuning`
//! is queried with the rotating-wave detection operator over a window of
//! length `T`. A magnetic transition keeps the bare coupling independent of
//! the scanned transition energy, so the measured probability traces the pure
//! window profile `|c|^2 T^2 sinc^2(detuning T / 2)` exactly: the line is the
//! window, nothing else.

use crate::atom::{AtomSpec, TimeWindow};
use crate::error::{Error, Result};
use crate::fock::QState;
use crate::measure::detect_prob;
use crate::modes::{polarization_basis, Mode, ModeSet, Polarization};
use crate::vec3::{bilinear, cross, lift, normalize, Vec3};

use super::ScanResult;

/// Configuration of a line-width scan.
#[derive(Debug, Clone)]
pub struct LineshapeConfig {
    /// Mode frequency (and wavenumber, natural units).
    pub omega: f64,
    /// Transition detunings `delta - omega` to scan, strictly increasing.
    pub detuning_grid: Vec<f64>,
    /// Observation window length `T`.
    pub window_length: f64,
    /// Magnetic dipole orientation of the detector atoms.
    pub orientation: Vec3,
    /// Quantization volume.
    pub volume: f64,
    /// Detector coupling scale.
    pub coupling: f64,
}

impl LineshapeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::Config(format!(
                "mode frequency must be positive, got {}",
                self.omega
            )));
        }
        if !(self.window_length > 0.0) {
            return Err(Error::Config(format!(
                "window length must be positive, got {}",
                self.window_length
            )));
        }
        if !(self.volume > 0.0) {
            return Err(Error::Config(format!(
                "volume must be positive, got {}",
                self.volume
            )));
        }
        if self.detuning_grid.is_empty() {
            return Err(Error::Config("detuning grid must not be empty".into()));
        }
        if let Some(&bad) = self.detuning_grid.iter().find(|d| !d.is_finite()) {
            return Err(Error::Config(format!(
                "detuning grid contains a non-finite value {bad}"
            )));
        }
        if self.detuning_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "detuning grid must be strictly increasing".into(),
            ));
        }
        if self.detuning_grid[0] <= -self.omega {
            return Err(Error::Config(format!(
                "detuning {} puts the transition energy at or below zero",
                self.detuning_grid[0]
            )));
        }
        let m_hat = normalize(self.orientation)?;
        if bare_coupling(self, m_hat).abs() <= 0.0 {
            return Err(Error::Config(
                "detector orientation has no overlap with the mode's magnetic field".into(),
            ));
        }
        Ok(())
    }

    fn mode(&self) -> Result<(Mode, Vec3)> {
        let k = [0.0, 0.0, self.omega];
        let (e1, _) = polarization_basis(k)?;
        Ok((Mode::new(k, Polarization::S1, lift(e1))?, e1))
    }
}

/// The detuning-independent coupling amplitude `g |(k x eps) . m| / sqrt(2 w V)`.
fn bare_coupling(cfg: &LineshapeConfig, m_hat: Vec3) -> f64 {
    let k = [0.0, 0.0, cfg.omega];
    let (e1, _) = polarization_basis(k).expect("nonzero k");
    let overlap = bilinear(lift(cross(k, e1)), lift(m_hat)).norm();
    cfg.coupling * overlap / (2.0 * cfg.omega * cfg.volume).sqrt()
}

/// Detection probability versus detuning for a one-photon input.
pub fn run_lineshape(cfg: &LineshapeConfig) -> Result<ScanResult> {
    cfg.validate()?;
    let (mode, _) = cfg.mode()?;
    let ms = ModeSet::new(vec![mode], cfg.volume)?;
    let space = ms.photon_space(1)?;
    let one_photon = QState::basis_state(&space, &[1], &[])?;
    let window = TimeWindow::centered(cfg.window_length)?;
    let m_hat = normalize(cfg.orientation)?;

    let mut probability = Vec::with_capacity(cfg.detuning_grid.len());
    for &detuning in &cfg.detuning_grid {
        let atom = AtomSpec::two_level_magnetic(
            [0.0; 3],
            cfg.omega + detuning,
            lift(m_hat),
            cfg.coupling,
        )?;
        let d = crate::atom::detection_operator_current(&ms, &space, &atom, "e", window, true)?;
        probability.push(detect_prob(&d, &one_photon)?);
    }
    ScanResult::new(
        cfg.detuning_grid.clone(),
        probability,
        format!(
            "lineshape: omega = {}, T = {}, volume = {}, coupling = {}, orientation = {:?}",
            cfg.omega, cfg.window_length, cfg.volume, cfg.coupling, cfg.orientation
        ),
    )
}

/// The analytic profile `|c|^2 T^2 sinc^2(detuning T / 2)` the scan must
/// reproduce, computed from the scalar coupling path only.
pub fn lineshape_reference(cfg: &LineshapeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let m_hat = normalize(cfg.orientation)?;
    let c = bare_coupling(cfg, m_hat);
    let t_len = cfg.window_length;
    Ok(cfg
        .detuning_grid
        .iter()
        .map(|&detuning| {
            let half = 0.5 * detuning * t_len;
            let s = if half.abs() < 1e-8 {
                1.0 - half * half / 6.0
            } else {
                half.sin() / half
            };
            c * c * t_len * t_len * s * s
        })
        .collect())
}
