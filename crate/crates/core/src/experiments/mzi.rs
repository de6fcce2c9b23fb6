//! Two-beam interferometer with a scanned pointlike detector: wave-particle
//! complementarity of electric and magnetic detectors.
//!
//! Two plane-wave beams of equal wavenumber cross at half-angle `theta`
//! around the z axis, `k_hat = cos(theta) z_hat +- sin(theta) x_hat`, both
//! polarized along y (out of the beam plane). The input photon is the
//! post-split superposition `(|1>_a + e^{i phi} |1>_b) / sqrt(2)`; the
//! beam-splitter optics that prepare it are not simulated.
//!
//! On the film plane the electric fields of the two beams are parallel (both
//! along y), while their magnetic fields close an angle `2 theta` and become
//! orthogonal at `theta = 45 deg`. An electric-dipole detector therefore sees
//! interference fringes but no which-path contrast; a magnetic-dipole
//! detector aligned with one beam's field sees which-path contrast but no
//! fringes.

use crate::atom::{detection_operator_current, AtomSpec, TimeWindow};
use crate::error::{Error, Result};
use crate::fock::{FockSpace, QState};
use crate::measure::detect_prob;
use crate::modes::{Mode, ModeSet, Polarization};
use crate::vec3::{lift, normalize, Vec3};
use ndarray::Array1;
use num_complex::Complex64;

use super::{visibility, ComplementarityMetrics, ScanResult};

/// What the film is sensitive to: the detector atoms carry either an
/// electric or a magnetic transition dipole along the given direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorKind {
    Electric(Vec3),
    Magnetic(Vec3),
}

impl DetectorKind {
    fn orientation(&self) -> Vec3 {
        match self {
            DetectorKind::Electric(v) | DetectorKind::Magnetic(v) => *v,
        }
    }
}

/// Interferometer-and-film configuration.
#[derive(Debug, Clone)]
pub struct MziConfig {
    /// Beam wavenumber `k` (= frequency, natural units).
    pub wavenumber: f64,
    /// Half-angle between the beams and the z axis, radians, in (0, pi/2).
    pub half_angle: f64,
    /// Relative phase of the two paths.
    pub relative_phase: f64,
    /// z position of the film plane.
    pub film_z: f64,
    /// Film positions along x, strictly increasing.
    pub scan_x: Vec<f64>,
    /// Detector kind and dipole orientation.
    pub detector: DetectorKind,
    /// Observation window length per pixel.
    pub window_length: f64,
    /// Quantization volume.
    pub volume: f64,
    /// Detector coupling scale.
    pub coupling: f64,
}

impl MziConfig {
    /// Default film grid: `points` pixels with spacing `periods / points` of
    /// a fringe period, starting at x = 0, so extrema of an unshifted fringe
    /// land exactly on grid points.
    pub fn with_default_scan(
        wavenumber: f64,
        half_angle: f64,
        relative_phase: f64,
        detector: DetectorKind,
    ) -> Result<Self> {
        let cfg = Self {
            wavenumber,
            half_angle,
            relative_phase,
            film_z: 0.0,
            scan_x: default_scan(wavenumber, half_angle, 256, 4.0)?,
            detector,
            window_length: 1.0,
            volume: 1.0,
            coupling: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavenumber > 0.0) {
            return Err(Error::Config(format!(
                "wavenumber must be positive, got {}",
                self.wavenumber
            )));
        }
        if !(self.half_angle > 0.0 && self.half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Config(format!(
                "half-angle must lie in (0, pi/2), got {}",
                self.half_angle
            )));
        }
        if !(self.window_length > 0.0) || !(self.volume > 0.0) {
            return Err(Error::Config(
                "window length and volume must be positive".into(),
            ));
        }
        if let Some(&bad) = self.scan_x.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!(
                "film scan contains a non-finite position {bad}"
            )));
        }
        if self.scan_x.len() < 2 || self.scan_x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "film scan must have at least two strictly increasing positions".into(),
            ));
        }
        normalize(self.detector.orientation())?;
        let period = fringe_period(self);
        let extent = self.scan_x[self.scan_x.len() - 1] - self.scan_x[0];
        let periods = extent / period;
        if periods < 3.0 {
            return Err(Error::Config(format!(
                "film scan covers only {periods:.2} fringe periods; at least 3 are required \
                 (period {period:.4} exceeds the scan range?)"
            )));
        }
        let points_per_period = self.scan_x.len() as f64 / periods;
        if points_per_period < 16.0 {
            return Err(Error::Config(format!(
                "film scan resolves only {points_per_period:.1} points per fringe period; \
                 at least 16 are required"
            )));
        }
        Ok(())
    }
}

/// Analytic fringe period of the two-beam pattern, `pi / (k sin theta)`.
pub fn fringe_period(cfg: &MziConfig) -> f64 {
    std::f64::consts::PI / (cfg.wavenumber * cfg.half_angle.sin())
}

fn default_scan(wavenumber: f64, half_angle: f64, points: usize, periods: f64) -> Result<Vec<f64>> {
    if !(wavenumber > 0.0) || !(half_angle > 0.0) {
        return Err(Error::Config("wavenumber and half-angle must be positive".into()));
    }
    let period = std::f64::consts::PI / (wavenumber * half_angle.sin());
    let step = periods * period / points as f64;
    Ok((0..points).map(|i| i as f64 * step).collect())
}

struct Setup {
    ms: ModeSet,
    space: FockSpace,
}

fn build_setup(cfg: &MziConfig) -> Result<Setup> {
    let (s, c) = cfg.half_angle.sin_cos();
    let k = cfg.wavenumber;
    let y_pol = lift([0.0, 1.0, 0.0]);
    let modes = vec![
        Mode::new([k * s, 0.0, k * c], Polarization::S1, y_pol)?,
        Mode::new([-k * s, 0.0, k * c], Polarization::S1, y_pol)?,
    ];
    let ms = ModeSet::new(modes, cfg.volume)?;
    let space = ms.photon_space(1)?;
    Ok(Setup { ms, space })
}

fn film_atom(cfg: &MziConfig, x: f64) -> Result<AtomSpec> {
    let position = [x, 0.0, cfg.film_z];
    // resonant detector: transition energy equals the beam frequency
    match cfg.detector {
        DetectorKind::Electric(v) => AtomSpec::two_level_electric(
            position,
            cfg.wavenumber,
            lift(normalize(v)?),
            cfg.coupling,
        ),
        DetectorKind::Magnetic(v) => AtomSpec::two_level_magnetic(
            position,
            cfg.wavenumber,
            lift(normalize(v)?),
            cfg.coupling,
        ),
    }
}

fn scan_probabilities(cfg: &MziConfig, setup: &Setup, input: &QState) -> Result<Vec<f64>> {
    let window = TimeWindow::centered(cfg.window_length)?;
    cfg.scan_x
        .iter()
        .map(|&x| {
            let atom = film_atom(cfg, x)?;
            let d = detection_operator_current(&setup.ms, &setup.space, &atom, "e", window, true)?;
            detect_prob(&d, input)
        })
        .collect()
}

fn superposition_state(cfg: &MziConfig, setup: &Setup) -> Result<QState> {
    let i10 = setup.space.basis_index(&[1, 0], &[])?;
    let i01 = setup.space.basis_index(&[0, 1], &[])?;
    let mut ket = Array1::<Complex64>::zeros(setup.space.dim());
    let amp = 1.0 / 2.0_f64.sqrt();
    ket[i10] = Complex64::new(amp, 0.0);
    ket[i01] = Complex64::from_polar(amp, cfg.relative_phase);
    QState::pure(setup.space.clone(), &ket)
}

/// Film scan for the two-path superposition input, with the resulting
/// visibility and (from separate single-path runs) distinguishability.
pub fn run_mzi(cfg: &MziConfig) -> Result<(ScanResult, ComplementarityMetrics)> {
    cfg.validate()?;
    let setup = build_setup(cfg)?;
    let input = superposition_state(cfg, &setup)?;
    let probability = scan_probabilities(cfg, &setup, &input)?;
    let scan = ScanResult::new(
        cfg.scan_x.clone(),
        probability,
        format!(
            "mzi: k = {}, half_angle = {}, phase = {}, film_z = {}, detector = {:?}, \
             T = {}, volume = {}, coupling = {}",
            cfg.wavenumber,
            cfg.half_angle,
            cfg.relative_phase,
            cfg.film_z,
            cfg.detector,
            cfg.window_length,
            cfg.volume,
            cfg.coupling
        ),
    )?;
    let metrics = ComplementarityMetrics::new(visibility(&scan), distinguishability(cfg)?)?;
    Ok((scan, metrics))
}

/// Which-path contrast: the two single-path inputs are run against the same
/// film, and their scan-averaged responses compared,
/// `D = |p1 - p2| / (p1 + p2)`.
pub fn distinguishability(cfg: &MziConfig) -> Result<f64> {
    cfg.validate()?;
    let setup = build_setup(cfg)?;
    let mut means = [0.0f64; 2];
    for (path, mean) in means.iter_mut().enumerate() {
        let mut occupations = [0usize; 2];
        occupations[path] = 1;
        let input = QState::basis_state(&setup.space, &occupations, &[])?;
        let ps = scan_probabilities(cfg, &setup, &input)?;
        *mean = ps.iter().sum::<f64>() / ps.len() as f64;
    }
    let total = means[0] + means[1];
    if total < 1e-15 {
        return Err(Error::Numeric(
            "distinguishability undefined: the detector responds to neither path".into(),
        ));
    }
    Ok((means[0] - means[1]).abs() / total)
}

/// Measured fringe period: mean spacing between parabola-refined local maxima
/// of the scan. `None` when fewer than two interior maxima exist.
pub fn estimate_fringe_period(scan: &ScanResult) -> Option<f64> {
    let p = &scan.probability;
    let x = &scan.abscissa;
    let mut maxima = Vec::new();
    for i in 1..p.len().saturating_sub(1) {
        if p[i] >= p[i - 1] && p[i] > p[i + 1] {
            // parabolic refinement around the grid maximum
            let denom = p[i - 1] - 2.0 * p[i] + p[i + 1];
            let shift = if denom.abs() > 1e-300 {
                0.5 * (p[i - 1] - p[i + 1]) / denom
            } else {
                0.0
            };
            let h = 0.5 * (x[i + 1] - x[i - 1]);
            maxima.push(x[i] + shift.clamp(-1.0, 1.0) * h);
        }
    }
    if maxima.len() < 2 {
        return None;
    }
    Some((maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64)
}
