//! Meter-completeness check of the indirect measurement model: evolve one
//! photon and a ground-state detector atom with the exact propagator and
//! verify that the ground/excited readout probabilities sum to one.

use crate::atom::{AtomSpec, TimeWindow};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, QState};
use crate::measure::{born_probability, exact_propagator, Meter};
use crate::modes::{Mode, ModeSet, Polarization};
use crate::vec3::lift;

/// Canonical two-mode (counter-propagating, x-polarized) setup with an
/// electric-dipole two-level atom at the origin.
#[derive(Debug, Clone)]
pub struct PovmCheckConfig {
    /// Mode frequency; beams run along +-z.
    pub omega: f64,
    /// Detuning of the atomic transition from the mode frequency.
    pub detuning: f64,
    /// Quantization volume.
    pub volume: f64,
    /// Coupling scale of the atom.
    pub coupling: f64,
    /// Interaction window length.
    pub window_length: f64,
    /// Propagator step count.
    pub steps: usize,
}

impl Default for PovmCheckConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            detuning: 0.0,
            volume: 1.0,
            coupling: 0.05,
            window_length: 1.0,
            steps: 2000,
        }
    }
}

impl PovmCheckConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega", self.omega),
            ("detuning", self.detuning),
            ("volume", self.volume),
            ("coupling", self.coupling),
            ("window_length", self.window_length),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.omega > 0.0) || !(self.volume > 0.0) || !(self.window_length > 0.0) {
            return Err(Error::Config(
                "omega, volume, and window length must be positive".into(),
            ));
        }
        if !(self.omega + self.detuning > 0.0) {
            return Err(Error::Config(format!(
                "detuning {} puts the transition energy at or below zero",
                self.detuning
            )));
        }
        if self.steps < 1 {
            return Err(Error::Config("propagator needs at least one step".into()));
        }
        Ok(())
    }

    pub(crate) fn setup(&self) -> Result<(ModeSet, AtomSpec)> {
        let x_pol = lift([1.0, 0.0, 0.0]);
        let ms = ModeSet::new(
            vec![
                Mode::new([0.0, 0.0, self.omega], Polarization::S1, x_pol)?,
                Mode::new([0.0, 0.0, -self.omega], Polarization::S1, x_pol)?,
            ],
            self.volume,
        )?;
        let atom = AtomSpec::two_level_electric(
            [0.0; 3],
            self.omega + self.detuning,
            x_pol,
            self.coupling,
        )?;
        Ok((ms, atom))
    }
}

/// Per-outcome probabilities and their deviation from completeness.
#[derive(Debug, Clone)]
pub struct PovmCheck {
    /// `p_r` for the {ground, excited} meter, in that order.
    pub probabilities: Vec<f64>,
    pub sum: f64,
    /// `|sum - 1|`.
    pub deviation: f64,
}

/// Run the completeness check: one photon in the first mode, atom in the
/// ground state, exact evolution over the window.
pub fn run_povm_check(cfg: &PovmCheckConfig) -> Result<PovmCheck> {
    cfg.validate()?;
    let (ms, atom) = cfg.setup()?;
    let joint = ms.joint_space(1, &[atom.level_dim()])?;
    let window = TimeWindow::new(0.0, cfg.window_length)?;
    let u = exact_propagator(&ms, &joint, &atom, window, cfg.steps)?;

    let photon = ms.photon_space(1)?;
    let rho = QState::basis_state(&photon, &[1, 0], &[])?;
    let apparatus = FockSpace::apparatus_only(&[atom.level_dim()])?;
    let sigma = QState::basis_state(&apparatus, &[], &[0])?;
    let meter = Meter::ground_excited(atom.level_dim())?;

    let probabilities: Vec<f64> = (0..meter.outcomes())
        .map(|r| born_probability(meter.projector(r), &u, &rho, &sigma))
        .collect::<Result<_>>()?;
    let sum = probabilities.iter().sum();
    Ok(PovmCheck {
        probabilities,
        sum,
        deviation: (sum - 1.0_f64).abs(),
    })
}
