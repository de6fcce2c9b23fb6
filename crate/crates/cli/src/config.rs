//! TOML run configurations: one table per experiment, validated eagerly at
//! parse time so bad physics values fail before any computation starts.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use photon_detect_core::experiments::{
    linspace, CommutatorConfig, DetectorKind, LineshapeConfig, MziConfig, PovmCheckConfig,
    ScalingConfig,
};

use crate::{CliError, CliResult};

/// The experiment a config file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Lineshape,
    Mzi,
    Commutator,
    PovmCheck,
    PerturbationScaling,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Lineshape => "lineshape",
            ExperimentKind::Mzi => "mzi",
            ExperimentKind::Commutator => "commutator",
            ExperimentKind::PovmCheck => "povm-check",
            ExperimentKind::PerturbationScaling => "perturbation-scaling",
        }
    }

    /// TOML table name of the experiment section.
    pub fn section(self) -> &'static str {
        match self {
            ExperimentKind::Lineshape => "lineshape",
            ExperimentKind::Mzi => "mzi",
            ExperimentKind::Commutator => "commutator",
            ExperimentKind::PovmCheck => "povm_check",
            ExperimentKind::PerturbationScaling => "perturbation_scaling",
        }
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub output_path: PathBuf,
    /// Resolved experiment section (defaults filled in), echoed into the
    /// output header.
    pub resolved: String,
    /// SHA-256 of the resolved section; changes exactly when the effective
    /// configuration changes.
    pub config_hash: String,
}

#[derive(Debug, Clone)]
pub enum Experiment {
    Lineshape(LineshapeConfig),
    Mzi(MziConfig),
    Commutator {
        k_grid: Vec<[f64; 3]>,
        volume: f64,
        config: CommutatorConfig,
    },
    PovmCheck(PovmCheckConfig),
    PerturbationScaling(ScalingConfig),
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::Lineshape(_) => ExperimentKind::Lineshape,
            Experiment::Mzi(_) => ExperimentKind::Mzi,
            Experiment::Commutator { .. } => ExperimentKind::Commutator,
            Experiment::PovmCheck(_) => ExperimentKind::PovmCheck,
            Experiment::PerturbationScaling(_) => ExperimentKind::PerturbationScaling,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn y_axis() -> [f64; 3] {
    [0.0, 1.0, 0.0]
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<String>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LineshapeSection {
    omega: f64,
    window_length: f64,
    detuning_min: f64,
    detuning_max: f64,
    #[serde(default = "default_scan_points")]
    points: usize,
    #[serde(default = "y_axis")]
    orientation: [f64; 3],
    #[serde(default = "one")]
    volume: f64,
    #[serde(default = "one")]
    coupling: f64,
}

fn default_scan_points() -> usize {
    801
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MziSection {
    wavenumber: f64,
    /// Half-angle between each beam and the optical axis, radians.
    half_angle: f64,
    #[serde(default)]
    relative_phase: f64,
    #[serde(default)]
    film_z: f64,
    /// "electric" or "magnetic".
    detector: String,
    #[serde(default = "y_axis")]
    orientation: [f64; 3],
    #[serde(default = "default_film_points")]
    points: usize,
    #[serde(default = "default_film_periods")]
    periods: f64,
    #[serde(default = "one")]
    window_length: f64,
    #[serde(default = "one")]
    volume: f64,
    #[serde(default = "one")]
    coupling: f64,
}

fn default_film_points() -> usize {
    256
}

fn default_film_periods() -> f64 {
    4.0
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CommutatorSection {
    k_grid: Vec<[f64; 3]>,
    #[serde(default = "default_cutoff")]
    cutoff: usize,
    #[serde(default = "one")]
    volume: f64,
    #[serde(default = "default_probe_x")]
    x: [f64; 3],
    #[serde(default)]
    y: [f64; 3],
    #[serde(default = "default_components")]
    components: Vec<[usize; 2]>,
    #[serde(default = "default_times")]
    times: Vec<f64>,
}

fn default_cutoff() -> usize {
    1
}

fn default_probe_x() -> [f64; 3] {
    [0.25, 0.0, 0.0]
}

fn default_components() -> Vec<[usize; 2]> {
    (0..3)
        .flat_map(|j| (0..3).map(move |k| [j, k]))
        .collect()
}

fn default_times() -> Vec<f64> {
    vec![0.0, 1.7]
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
struct PovmSection {
    omega: f64,
    detuning: f64,
    volume: f64,
    coupling: f64,
    window_length: f64,
    steps: usize,
}

impl Default for PovmSection {
    fn default() -> Self {
        let d = PovmCheckConfig::default();
        Self {
            omega: d.omega,
            detuning: d.detuning,
            volume: d.volume,
            coupling: d.coupling,
            window_length: d.window_length,
            steps: d.steps,
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
struct ScalingSection {
    omega: f64,
    detuning: f64,
    volume: f64,
    window_length: f64,
    steps: usize,
    quadrature_panels: usize,
    target_first_order: f64,
}

impl Default for ScalingSection {
    fn default() -> Self {
        let d = ScalingConfig::default();
        Self {
            omega: d.omega,
            detuning: d.detuning,
            volume: d.volume,
            window_length: d.window_length,
            steps: d.steps,
            quadrature_panels: d.quadrature_panels,
            target_first_order: d.target_first_order,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    output: Option<OutputSection>,
    lineshape: Option<LineshapeSection>,
    mzi: Option<MziSection>,
    commutator: Option<CommutatorSection>,
    povm_check: Option<PovmSection>,
    perturbation_scaling: Option<ScalingSection>,
}

fn require_finite(section: &str, values: &[(&str, f64)]) -> CliResult<()> {
    for (key, v) in values {
        if !v.is_finite() {
            return Err(CliError::Config(format!(
                "[{section}] {key} must be finite, got {v}"
            )));
        }
    }
    Ok(())
}

/// Parse and fully validate a run configuration. Every invariant of the
/// underlying experiment is checked here, not at failure depth.
pub fn parse_config(path: &Path, requested: ExperimentKind) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawConfig =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    let mut present = Vec::new();
    if raw.lineshape.is_some() {
        present.push(ExperimentKind::Lineshape);
    }
    if raw.mzi.is_some() {
        present.push(ExperimentKind::Mzi);
    }
    if raw.commutator.is_some() {
        present.push(ExperimentKind::Commutator);
    }
    if raw.povm_check.is_some() {
        present.push(ExperimentKind::PovmCheck);
    }
    if raw.perturbation_scaling.is_some() {
        present.push(ExperimentKind::PerturbationScaling);
    }
    match present.as_slice() {
        [] => {
            return Err(CliError::Config(format!(
                "no experiment section found; add a [{}] table",
                requested.section()
            )))
        }
        [one] if *one == requested => {}
        [one] => {
            return Err(CliError::Config(format!(
                "config declares [{}] but the `{}` subcommand was invoked",
                one.section(),
                requested.name()
            )))
        }
        many => {
            let names: Vec<&str> = many.iter().map(|k| k.section()).collect();
            return Err(CliError::Config(format!(
                "exactly one experiment section is allowed, found {}",
                names.join(", ")
            )));
        }
    }

    let (experiment, resolved) = match requested {
        ExperimentKind::Lineshape => {
            let s = raw.lineshape.unwrap();
            require_finite(
                "lineshape",
                &[
                    ("omega", s.omega),
                    ("window_length", s.window_length),
                    ("detuning_min", s.detuning_min),
                    ("detuning_max", s.detuning_max),
                    ("volume", s.volume),
                    ("coupling", s.coupling),
                ],
            )?;
            if s.points < 2 {
                return Err(CliError::Config(
                    "[lineshape] points must be at least 2".into(),
                ));
            }
            if !(s.detuning_max > s.detuning_min) {
                return Err(CliError::Config(
                    "[lineshape] detuning_max must exceed detuning_min".into(),
                ));
            }
            let cfg = LineshapeConfig {
                omega: s.omega,
                detuning_grid: linspace(s.detuning_min, s.detuning_max, s.points),
                window_length: s.window_length,
                orientation: s.orientation,
                volume: s.volume,
                coupling: s.coupling,
            };
            cfg.validate()?;
            (Experiment::Lineshape(cfg), section_toml("lineshape", &s)?)
        }
        ExperimentKind::Mzi => {
            let s = raw.mzi.unwrap();
            require_finite(
                "mzi",
                &[
                    ("wavenumber", s.wavenumber),
                    ("half_angle", s.half_angle),
                    ("relative_phase", s.relative_phase),
                    ("film_z", s.film_z),
                    ("window_length", s.window_length),
                    ("volume", s.volume),
                    ("coupling", s.coupling),
                ],
            )?;
            let detector = match s.detector.as_str() {
                "electric" => DetectorKind::Electric(s.orientation),
                "magnetic" => DetectorKind::Magnetic(s.orientation),
                other => {
                    return Err(CliError::Config(format!(
                        "[mzi] detector must be \"electric\" or \"magnetic\", got \"{other}\""
                    )))
                }
            };
            if s.points < 2 || !(s.periods > 0.0) {
                return Err(CliError::Config(
                    "[mzi] points must be >= 2 and periods positive".into(),
                ));
            }
            if !(s.wavenumber > 0.0)
                || !(s.half_angle > 0.0 && s.half_angle < std::f64::consts::FRAC_PI_2)
            {
                return Err(CliError::Config(
                    "[mzi] wavenumber must be positive and half_angle in (0, pi/2)".into(),
                ));
            }
            let period = std::f64::consts::PI / (s.wavenumber * s.half_angle.sin());
            let step = s.periods * period / s.points as f64;
            let cfg = MziConfig {
                wavenumber: s.wavenumber,
                half_angle: s.half_angle,
                relative_phase: s.relative_phase,
                film_z: s.film_z,
                scan_x: (0..s.points).map(|i| i as f64 * step).collect(),
                detector,
                window_length: s.window_length,
                volume: s.volume,
                coupling: s.coupling,
            };
            cfg.validate()?;
            (Experiment::Mzi(cfg), section_toml("mzi", &s)?)
        }
        ExperimentKind::Commutator => {
            let s = raw.commutator.unwrap();
            if !(s.volume > 0.0) || !s.volume.is_finite() {
                return Err(CliError::Config(format!(
                    "[commutator] volume must be positive and finite, got {}",
                    s.volume
                )));
            }
            for (label, v) in [("x", s.x), ("y", s.y)] {
                require_finite(
                    "commutator",
                    &[(label, v[0]), (label, v[1]), (label, v[2])],
                )?;
            }
            let cfg = CommutatorConfig {
                cutoff: s.cutoff,
                x: s.x,
                y: s.y,
                components: s.components.iter().map(|c| (c[0], c[1])).collect(),
                times: s.times.clone(),
            };
            cfg.validate()?;
            // the mode set is rebuilt at run time; validate it now
            photon_detect_core::ModeSet::plane_waves(&s.k_grid, s.volume)?;
            let resolved = section_toml("commutator", &s)?;
            (
                Experiment::Commutator {
                    k_grid: s.k_grid,
                    volume: s.volume,
                    config: cfg,
                },
                resolved,
            )
        }
        ExperimentKind::PovmCheck => {
            let s = raw.povm_check.unwrap();
            let cfg = PovmCheckConfig {
                omega: s.omega,
                detuning: s.detuning,
                volume: s.volume,
                coupling: s.coupling,
                window_length: s.window_length,
                steps: s.steps,
            };
            cfg.validate()?;
            (Experiment::PovmCheck(cfg), section_toml("povm_check", &s)?)
        }
        ExperimentKind::PerturbationScaling => {
            let s = raw.perturbation_scaling.unwrap();
            let cfg = ScalingConfig {
                omega: s.omega,
                detuning: s.detuning,
                volume: s.volume,
                window_length: s.window_length,
                steps: s.steps,
                quadrature_panels: s.quadrature_panels,
                target_first_order: s.target_first_order,
            };
            cfg.validate()?;
            (
                Experiment::PerturbationScaling(cfg),
                section_toml("perturbation_scaling", &s)?,
            )
        }
    };

    let output_path = raw
        .output
        .and_then(|o| o.path)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", requested.name())));

    let config_hash = {
        let mut hasher = Sha256::new();
        hasher.update(resolved.as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    };

    Ok(RunConfig {
        experiment,
        output_path,
        resolved,
        config_hash,
    })
}

/// Serialize a resolved section (defaults filled in) back to TOML.
fn section_toml<T: Serialize>(name: &str, section: &T) -> CliResult<String> {
    let body = toml::to_string(section)
        .map_err(|e| CliError::Config(format!("cannot echo the resolved config: {e}")))?;
    Ok(format!("[{name}]\n{body}"))
}
