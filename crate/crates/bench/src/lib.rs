//! Shared fixtures for the benchmark targets.

use photon_detect_core::atom::{AtomSpec, Transition};
use photon_detect_core::vec3::Vec3;
use photon_detect_core::ModeSet;

pub fn standard_modes(n_vectors: usize) -> ModeSet {
    let ks: Vec<Vec3> = (0..n_vectors)
        .map(|i| {
            let angle = 0.4 + 0.9 * i as f64;
            [angle.cos(), angle.sin() * 0.3, 1.0 + 0.1 * i as f64]
        })
        .collect();
    ModeSet::plane_waves(&ks, 1.7).expect("bench mode set")
}

pub fn standard_atom() -> AtomSpec {
    use photon_detect_core::vec3::lift;
    AtomSpec::new(
        [0.2, -0.1, 0.4],
        0.0,
        vec![Transition {
            label: "e".into(),
            energy: 1.3,
            dipole_e: lift([0.5, -0.2, 0.3]),
            dipole_m: lift([0.1, 0.6, -0.4]),
        }],
        0.05,
    )
    .expect("bench atom")
}
