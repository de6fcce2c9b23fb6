//! Pointlike detector atoms and the photon detection operator.
//!
//! A detector atom sits at a fixed position with a ground level and one or
//! more excited levels. Each ground-to-excited transition carries an electric
//! dipole matrix element `d` and a magnetic dipole matrix element `m`; the
//! atom couples to the field through the current density
//! `J = d(d)/dt + curl m` localized at the atom position.
//!
//! The detection operator for a transition of energy gap `delta`, observed
//! over a finite time window, is assembled along two independent routes that
//! must agree entrywise:
//!
//! * **current route** — the plane-wave current matrix element
//!   `J_k = g (i delta d - i k x m) exp(i k.x0)` is contracted with each
//!   mode's polarization vector and the analytic window factor
//!   `W(nu) = integral of exp(i nu t) over the window`;
//! * **dipole route** — the electric and magnetic field coefficients at the
//!   atom position are contracted with `d` and `m` directly. The time
//!   integration by parts that converts `A . dd/dt` into `E . d` keeps its
//!   boundary term on a finite window, so the route carries that term
//!   explicitly; it vanishes in the long-window limit.
//!
//! Sign convention: the Heisenberg derivative of the dipole operator gives
//! `<excited| d(d)/dt |ground> = +i delta d` at time zero. Any globally
//! consistent choice leaves probabilities unchanged; the cross-route equality
//! tests pin internal consistency.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{annihilation_op, embed_atom_op, FockSpace, QOperator};
use crate::modes::{field_coefficient, FieldKind, FieldPart, FieldSpec, ModeSet};
use crate::vec3::{bilinear, cadd, cnorm, conj3, cross_rc, cscale, dot, scale, CVec3, Vec3, ZERO_C};

/// One ground-to-excited transition of a detector atom.
#[derive(Debug, Clone)]
pub struct Transition {
    /// Level label used to select the transition.
    pub label: String,
    /// Energy of the excited level (natural units).
    pub energy: f64,
    /// Electric dipole matrix element `<excited| d |ground>`.
    pub dipole_e: CVec3,
    /// Magnetic dipole matrix element `<excited| m |ground>`.
    pub dipole_m: CVec3,
}

/// A pointlike detector atom.
#[derive(Debug, Clone)]
pub struct AtomSpec {
    position: Vec3,
    ground_energy: f64,
    transitions: Vec<Transition>,
    coupling: f64,
}

impl AtomSpec {
    pub fn new(
        position: Vec3,
        ground_energy: f64,
        transitions: Vec<Transition>,
        coupling: f64,
    ) -> Result<Self> {
        if !(coupling >= 0.0) || !coupling.is_finite() {
            return Err(Error::Domain(format!(
                "coupling scale must be finite and >= 0, got {coupling}"
            )));
        }
        if transitions.is_empty() {
            return Err(Error::Config("an atom needs at least one transition".into()));
        }
        for (i, tr) in transitions.iter().enumerate() {
            if !(tr.energy > ground_energy) {
                return Err(Error::Domain(format!(
                    "level `{}` at energy {} does not lie above the ground energy {}",
                    tr.label, tr.energy, ground_energy
                )));
            }
            if cnorm(tr.dipole_e) == 0.0 && cnorm(tr.dipole_m) == 0.0 {
                return Err(Error::Config(format!(
                    "transition `{}` has neither an electric nor a magnetic dipole",
                    tr.label
                )));
            }
            if transitions[..i].iter().any(|prev| prev.label == tr.label) {
                return Err(Error::Config(format!(
                    "duplicate transition label `{}`",
                    tr.label
                )));
            }
        }
        Ok(Self {
            position,
            ground_energy,
            transitions,
            coupling,
        })
    }

    /// Two-level atom with an electric dipole transition labelled `"e"`.
    pub fn two_level_electric(
        position: Vec3,
        transition_energy: f64,
        dipole_e: CVec3,
        coupling: f64,
    ) -> Result<Self> {
        Self::new(
            position,
            0.0,
            vec![Transition {
                label: "e".into(),
                energy: transition_energy,
                dipole_e,
                dipole_m: ZERO_C,
            }],
            coupling,
        )
    }

    /// Two-level atom with a magnetic dipole transition labelled `"e"`.
    pub fn two_level_magnetic(
        position: Vec3,
        transition_energy: f64,
        dipole_m: CVec3,
        coupling: f64,
    ) -> Result<Self> {
        Self::new(
            position,
            0.0,
            vec![Transition {
                label: "e".into(),
                energy: transition_energy,
                dipole_e: ZERO_C,
                dipole_m,
            }],
            coupling,
        )
    }

    pub fn position(&self) -> Vec3 {
        self.position
    }

    pub fn ground_energy(&self) -> f64 {
        self.ground_energy
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Dimension of the atomic level space (ground + excited levels).
    pub fn level_dim(&self) -> usize {
        1 + self.transitions.len()
    }

    pub fn transition(&self, label: &str) -> Result<(usize, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .find(|(_, tr)| tr.label == label)
            .ok_or_else(|| Error::UnknownTransition(label.to_string()))
    }

    /// Transition energy gap `energy - ground_energy`.
    pub fn gap(&self, label: &str) -> Result<f64> {
        Ok(self.transition(label)?.1.energy - self.ground_energy)
    }
}

/// A finite observation window `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    t0: f64,
    t1: f64,
}

impl TimeWindow {
    pub fn new(t0: f64, t1: f64) -> Result<Self> {
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::Domain(format!(
                "time window requires finite t1 > t0, got [{t0}, {t1}]"
            )));
        }
        Ok(Self { t0, t1 })
    }

    /// Symmetric window `[-length/2, length/2]`.
    pub fn centered(length: f64) -> Result<Self> {
        Self::new(-0.5 * length, 0.5 * length)
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.t1
    }

    pub fn length(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.t0 + self.t1)
    }

    pub fn shifted(&self, tau: f64) -> Self {
        Self {
            t0: self.t0 + tau,
            t1: self.t1 + tau,
        }
    }

    /// The analytic window factor `W(nu) = integral_{t0}^{t1} exp(i nu t) dt
    /// = length * exp(i nu mid) * sinc(nu length / 2)`.
    pub fn factor(&self, nu: f64) -> Complex64 {
        let len = self.length();
        let half = 0.5 * nu * len;
        let s = if half.abs() < 1e-8 {
            1.0 - half * half / 6.0
        } else {
            half.sin() / half
        };
        Complex64::from_polar(1.0, nu * self.midpoint()) * (len * s)
    }

    /// `exp(i nu t1) - exp(i nu t0)`, the boundary term of integrating
    /// `exp(i nu t)` by parts; equals `i nu W(nu)` analytically.
    pub fn boundary_difference(&self, nu: f64) -> Complex64 {
        Complex64::from_polar(1.0, nu * self.t1) - Complex64::from_polar(1.0, nu * self.t0)
    }
}

/// The first-order photon detection operator of one transition, acting on the
/// photon space. With `rwa` set only the annihilation (photon-absorption)
/// part is kept and the operator annihilates the vacuum exactly.
#[derive(Debug, Clone)]
pub struct DetectionOperator {
    op: QOperator,
    transition: String,
    window: TimeWindow,
    rwa: bool,
}

impl DetectionOperator {
    pub fn op(&self) -> &QOperator {
        &self.op
    }

    pub fn transition(&self) -> &str {
        &self.transition
    }

    pub fn window(&self) -> TimeWindow {
        self.window
    }

    pub fn rwa(&self) -> bool {
        self.rwa
    }
}

/// Plane-wave Fourier component of the transition current matrix element,
/// `J_k = g (i delta d - i k x m) exp(i k . x0)` for the pointlike current
/// `J = d(d)/dt + curl m` at the atom position `x0`.
pub fn current_fourier(atom: &AtomSpec, transition: &str, k: Vec3) -> Result<CVec3> {
    let (_, tr) = atom.transition(transition)?;
    let delta = tr.energy - atom.ground_energy();
    let v = cadd(
        cscale(delta.into(), tr.dipole_e),
        cscale((-1.0).into(), cross_rc(k, tr.dipole_m)),
    );
    let phase = Complex64::from_polar(1.0, dot(k, atom.position()));
    Ok(cscale(Complex64::i() * atom.coupling() * phase, v))
}

fn check_detection_space(ms: &ModeSet, space: &FockSpace) -> Result<()> {
    if space.n_modes() != ms.len() {
        return Err(Error::Config(format!(
            "space has {} modes but the mode set has {}",
            space.n_modes(),
            ms.len()
        )));
    }
    if space.n_atoms() != 0 {
        return Err(Error::Config(
            "detection operators act on the photon space; drop the apparatus factors".into(),
        ));
    }
    Ok(())
}

fn assemble_detection(
    ms: &ModeSet,
    space: &FockSpace,
    transition: &str,
    window: TimeWindow,
    rwa: bool,
    coefficients: impl Fn(usize) -> Result<(Complex64, Complex64)>,
) -> Result<DetectionOperator> {
    let dim = space.dim();
    let mut matrix = Array2::<Complex64>::zeros((dim, dim));
    for m in 0..ms.len() {
        let (ann, cre) = coefficients(m)?;
        let lower = annihilation_op(space, m)?;
        matrix = matrix + lower.matrix().mapv(|z| z * ann);
        if !rwa {
            matrix = matrix + lower.adjoint().matrix().mapv(|z| z * cre);
        }
    }
    Ok(DetectionOperator {
        op: QOperator::new(space.clone(), matrix)?,
        transition: transition.to_string(),
        window,
        rwa,
    })
}

/// Detection operator assembled from the transition current:
/// `D = sum_m [ (eps . J_k) W(delta - w) a + (eps* . J_{-k}) W(delta + w) a† ]
/// / sqrt(2 w V)`, creation part dropped when `rwa` is set.
pub fn detection_operator_current(
    ms: &ModeSet,
    space: &FockSpace,
    atom: &AtomSpec,
    transition: &str,
    window: TimeWindow,
    rwa: bool,
) -> Result<DetectionOperator> {
    check_detection_space(ms, space)?;
    let delta = atom.gap(transition)?;
    let volume = ms.volume();
    assemble_detection(ms, space, transition, window, rwa, |m| {
        let mode = &ms.modes()[m];
        let omega = mode.omega();
        let root = 1.0 / (2.0 * omega * volume).sqrt();
        let j_plus = current_fourier(atom, transition, mode.k())?;
        let j_minus = current_fourier(atom, transition, scale(-1.0, mode.k()))?;
        let ann = bilinear(mode.eps(), j_plus) * window.factor(delta - omega) * root;
        let cre = bilinear(conj3(mode.eps()), j_minus) * window.factor(delta + omega) * root;
        Ok((ann, cre))
    })
}

/// Detection operator assembled from the electric and magnetic field
/// coefficients at the atom position, `g (E.d + B.m)` with the analytic
/// window factors, plus the boundary term `g (A.d) [exp(i nu t)]_{t0}^{t1}`
/// of the time integration by parts. Must agree with
/// [`detection_operator_current`] entrywise for any window.
pub fn detection_operator_dipole(
    ms: &ModeSet,
    space: &FockSpace,
    atom: &AtomSpec,
    transition: &str,
    window: TimeWindow,
    rwa: bool,
) -> Result<DetectionOperator> {
    check_detection_space(ms, space)?;
    let (_, tr) = atom.transition(transition)?;
    let delta = tr.energy - atom.ground_energy();
    let g: Complex64 = atom.coupling().into();
    let x0 = atom.position();
    let volume = ms.volume();
    assemble_detection(ms, space, transition, window, rwa, |m| {
        let mode = &ms.modes()[m];
        let omega = mode.omega();
        let mut out = [Complex64::ZERO; 2];
        for (slot, (part, nu)) in [
            (FieldPart::Plus, delta - omega),
            (FieldPart::Minus, delta + omega),
        ]
        .into_iter()
        .enumerate()
        {
            let e = field_coefficient(mode, volume, FieldSpec::new(FieldKind::Electric, part), x0, 0.0)?;
            let b = field_coefficient(mode, volume, FieldSpec::new(FieldKind::Magnetic, part), x0, 0.0)?;
            let a = field_coefficient(
                mode,
                volume,
                FieldSpec::new(FieldKind::VectorPotential, part),
                x0,
                0.0,
            )?;
            out[slot] = g
                * ((bilinear(e, tr.dipole_e) + bilinear(b, tr.dipole_m)) * window.factor(nu)
                    + bilinear(a, tr.dipole_e) * window.boundary_difference(nu));
        }
        Ok((out[0], out[1]))
    })
}

/// Interaction-picture Hamiltonian of the atom-field coupling at time `t`,
/// on the joint photon-and-atom space:
///
/// `H(t) = -g sum_r [ (i delta_r A(x0,t) . d_r + B(x0,t) . m_r)
///         (x) |r><0| exp(i delta_r t) + h.c. ]`
///
/// This is the minimal coupling `-A . J` evaluated for the pointlike dipole
/// current; its multipolar rewriting `-(E.d + B.m)` differs by a total time
/// derivative, so only this form reproduces the detection operators exactly
/// on finite windows. Hermitian by construction.
pub fn interaction_hamiltonian(
    ms: &ModeSet,
    joint: &FockSpace,
    atom: &AtomSpec,
    t: f64,
) -> Result<QOperator> {
    if joint.n_modes() != ms.len() {
        return Err(Error::Config(format!(
            "joint space has {} modes but the mode set has {}",
            joint.n_modes(),
            ms.len()
        )));
    }
    if joint.atom_dims() != [atom.level_dim()] {
        return Err(Error::Config(format!(
            "joint space needs exactly one apparatus factor of dimension {}, got {:?}",
            atom.level_dim(),
            joint.atom_dims()
        )));
    }
    let x0 = atom.position();
    let dim = joint.dim();
    let mut h = Array2::<Complex64>::zeros((dim, dim));
    for (r, tr) in atom.transitions().iter().enumerate() {
        let delta = tr.energy - atom.ground_energy();
        // photon-space part: i delta A(x0,t).d + B(x0,t).m, full fields
        let mut coupling = Array2::<Complex64>::zeros((dim, dim));
        for component in 0..3 {
            let weight_a = Complex64::new(0.0, delta) * tr.dipole_e[component];
            if weight_a != Complex64::ZERO {
                let a = crate::modes::field_operator(
                    ms,
                    joint,
                    FieldSpec::new(FieldKind::VectorPotential, FieldPart::Full),
                    component,
                    x0,
                    t,
                )?;
                coupling = coupling + a.matrix().mapv(|z| z * weight_a);
            }
            let weight_b = tr.dipole_m[component];
            if weight_b != Complex64::ZERO {
                let b = crate::modes::field_operator(
                    ms,
                    joint,
                    FieldSpec::new(FieldKind::Magnetic, FieldPart::Full),
                    component,
                    x0,
                    t,
                )?;
                coupling = coupling + b.matrix().mapv(|z| z * weight_b);
            }
        }
        let mut raise_local = Array2::<Complex64>::zeros((atom.level_dim(), atom.level_dim()));
        raise_local[[r + 1, 0]] = Complex64::ONE;
        let raise = embed_atom_op(joint, 0, &raise_local)?;
        let phase = Complex64::from_polar(atom.coupling(), delta * t) * (-1.0);
        let term = coupling.dot(raise.matrix()).mapv(|z| z * phase);
        let term_adj = crate::linalg::adjoint(&term);
        h = h + &term + &term_adj;
    }
    QOperator::new(joint.clone(), h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::QState;
    use crate::modes::{polarization_basis, Mode, Polarization};
    use crate::vec3::lift;
    use ndarray::Array1;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn test_modes() -> ModeSet {
        ModeSet::plane_waves(&[[0.0, 0.0, 1.2], [0.8, 0.3, -0.4]], 1.5).unwrap()
    }

    fn test_atom() -> AtomSpec {
        AtomSpec::new(
            [0.2, -0.1, 0.4],
            0.1,
            vec![Transition {
                label: "e".into(),
                energy: 1.4,
                dipole_e: [c(0.5, 0.1), c(-0.2, 0.0), c(0.3, -0.4)],
                dipole_m: [c(0.1, 0.0), c(0.6, -0.2), c(0.0, 0.3)],
            }],
            0.05,
        )
        .unwrap()
    }

    #[test]
    fn current_fourier_pure_electric_at_origin() {
        let atom = AtomSpec::two_level_electric(
            [0.0; 3],
            1.3,
            [c(0.7, 0.0), c(0.0, 0.2), c(0.0, 0.0)],
            2.0,
        )
        .unwrap();
        let j = current_fourier(&atom, "e", [0.4, 0.0, 0.9]).unwrap();
        // i * delta * g * d, independent of k direction
        let want0 = Complex64::i() * 1.3 * 2.0 * c(0.7, 0.0);
        assert!((j[0] - want0).norm() < 1e-15);
        let j2 = current_fourier(&atom, "e", [-4.0, 1.0, 0.0]).unwrap();
        for i in 0..3 {
            assert!((j[i] - j2[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn current_fourier_pure_magnetic_is_transverse() {
        let atom = AtomSpec::two_level_magnetic(
            [0.3, 0.0, -0.2],
            0.9,
            [c(0.2, 0.1), c(0.0, -0.5), c(0.8, 0.0)],
            1.1,
        )
        .unwrap();
        for k in [[1.0, 0.0, 0.0], [0.3, -0.7, 0.2], [0.0, 0.0, -2.0]] {
            let j = current_fourier(&atom, "e", k).unwrap();
            assert!(bilinear(lift(k), j).norm() < 1e-14 * cnorm(j).max(1.0));
        }
    }

    #[test]
    fn current_fourier_unknown_transition() {
        let atom = test_atom();
        assert!(matches!(
            current_fourier(&atom, "nope", [1.0, 0.0, 0.0]),
            Err(Error::UnknownTransition(_))
        ));
    }

    #[test]
    fn current_fourier_both_dipoles_hand_evaluated() {
        let atom = AtomSpec::new(
            [0.0, 0.0, 0.3],
            0.0,
            vec![Transition {
                label: "e".into(),
                energy: 1.3,
                dipole_e: [c(0.7, 0.0), c(0.0, 0.2), c(0.0, 0.0)],
                dipole_m: [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)],
            }],
            2.0,
        )
        .unwrap();
        let k = [0.0, 0.0, 2.0];
        let j = current_fourier(&atom, "e", k).unwrap();
        // by hand: k x m = (-1, 0, 0), k . x0 = 0.6,
        // J = i g e^{i 0.6} (1.3 d - k x m)
        let front = Complex64::i() * 2.0 * Complex64::from_polar(1.0, 0.6);
        let want = [
            front * c(1.3 * 0.7 + 1.0, 0.0),
            front * c(0.0, 1.3 * 0.2),
            Complex64::ZERO,
        ];
        for i in 0..3 {
            assert!((j[i] - want[i]).norm() < 1e-14, "component {i}");
        }
    }

    #[test]
    fn duplicate_transition_labels_rejected() {
        let tr = Transition {
            label: "e".into(),
            energy: 1.0,
            dipole_e: [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            dipole_m: ZERO_C,
        };
        let r = AtomSpec::new([0.0; 3], 0.0, vec![tr.clone(), tr], 1.0);
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn degenerate_window_rejected() {
        assert!(matches!(TimeWindow::new(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(TimeWindow::new(2.0, 1.0), Err(Error::Domain(_))));
        assert!(TimeWindow::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn window_factor_at_zero_is_length() {
        let w = TimeWindow::new(-0.3, 1.9).unwrap();
        assert!((w.factor(0.0) - c(2.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn window_factor_matches_boundary_identity() {
        // i nu W(nu) = exp(i nu t1) - exp(i nu t0)
        let w = TimeWindow::new(0.4, 3.1).unwrap();
        for nu in [-2.7, -0.01, 0.3, 5.0] {
            let lhs = Complex64::new(0.0, nu) * w.factor(nu);
            let rhs = w.boundary_difference(nu);
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn rwa_operator_annihilates_vacuum_exactly() {
        let ms = test_modes();
        let space = ms.photon_space(1).unwrap();
        let atom = test_atom();
        let w = TimeWindow::new(0.0, 2.0).unwrap();
        let d = detection_operator_current(&ms, &space, &atom, "e", w, true).unwrap();
        let mut vac = Array1::zeros(space.dim());
        vac[0] = Complex64::ONE;
        let out = d.op().apply(&vac).unwrap();
        let norm_sq: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        assert_eq!(norm_sq, 0.0);
    }

    #[test]
    fn resonant_coefficient_grows_linearly_with_window() {
        let ms = ModeSet::new(
            vec![Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap()],
            1.0,
        )
        .unwrap();
        let space = ms.photon_space(1).unwrap();
        let atom =
            AtomSpec::two_level_electric([0.0; 3], 1.0, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0.1)
                .unwrap();
        let d1 = detection_operator_current(&ms, &space, &atom, "e", TimeWindow::centered(1.0).unwrap(), true)
            .unwrap();
        let d2 = detection_operator_current(&ms, &space, &atom, "e", TimeWindow::centered(2.0).unwrap(), true)
            .unwrap();
        let c1 = d1.op().matrix()[[0, 1]].norm();
        let c2 = d2.op().matrix()[[0, 1]].norm();
        assert!((c2 - 2.0 * c1).abs() < 1e-14 * c1.max(1.0));
    }

    #[test]
    fn sinc_zero_kills_coefficient() {
        // symmetric window, nu * length / 2 = pi
        let omega = 1.0;
        let delta = omega + 2.0 * std::f64::consts::PI / 3.0; // nu = 2 pi / T with T = 3
        let ms = ModeSet::new(
            vec![Mode::new([0.0, 0.0, omega], Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap()],
            1.0,
        )
        .unwrap();
        let space = ms.photon_space(1).unwrap();
        let atom =
            AtomSpec::two_level_electric([0.0; 3], delta, [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1.0)
                .unwrap();
        let d = detection_operator_current(&ms, &space, &atom, "e", TimeWindow::centered(3.0).unwrap(), true)
            .unwrap();
        assert!(d.op().matrix()[[0, 1]].norm() < 1e-14);
    }

    #[test]
    fn orthogonal_polarization_gives_zero_operator() {
        // single mode polarized along x, electric dipole along y, no magnetic dipole
        let ms = ModeSet::new(
            vec![Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap()],
            1.0,
        )
        .unwrap();
        let space = ms.photon_space(1).unwrap();
        let atom =
            AtomSpec::two_level_electric([0.0; 3], 1.0, [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 1.0)
                .unwrap();
        let d = detection_operator_dipole(&ms, &space, &atom, "e", TimeWindow::new(0.0, 1.0).unwrap(), false)
            .unwrap();
        assert_eq!(d.op().max_abs(), 0.0);
    }

    #[test]
    fn magnetic_only_coefficient_modulus() {
        // m parallel to k x eps: |coeff| = g |m| |W(delta - w)| / sqrt(2 w V)
        let k = [0.0, 0.0, 2.0];
        let (e1, _) = polarization_basis(k).unwrap();
        let ms = ModeSet::new(vec![Mode::new(k, Polarization::S1, lift(e1)).unwrap()], 3.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let bhat = crate::vec3::normalize(crate::vec3::cross(k, e1)).unwrap();
        let m_len = 0.7;
        let atom = AtomSpec::two_level_magnetic(
            [0.0; 3],
            1.5,
            [
                c(m_len * bhat[0], 0.0),
                c(m_len * bhat[1], 0.0),
                c(m_len * bhat[2], 0.0),
            ],
            0.9,
        )
        .unwrap();
        let w = TimeWindow::new(-0.2, 1.1).unwrap();
        let d = detection_operator_dipole(&ms, &space, &atom, "e", w, true).unwrap();
        let omega = 2.0;
        // |k x eps| = omega, so the magnetic coupling carries a factor omega |m|
        let want = 0.9 * omega * m_len * w.factor(1.5 - omega).norm() / (2.0 * omega * 3.0).sqrt();
        assert!((d.op().matrix()[[0, 1]].norm() - want).abs() < 1e-14);
    }

    #[test]
    fn cross_route_equality_on_fixed_instance() {
        let ms = test_modes();
        let space = ms.photon_space(1).unwrap();
        let atom = test_atom();
        for rwa in [false, true] {
            for w in [
                TimeWindow::new(0.0, 1.7).unwrap(),
                TimeWindow::new(-2.3, -0.4).unwrap(),
                TimeWindow::centered(8.0).unwrap(),
            ] {
                let dc = detection_operator_current(&ms, &space, &atom, "e", w, rwa).unwrap();
                let dd = detection_operator_dipole(&ms, &space, &atom, "e", w, rwa).unwrap();
                let diff = dc.op().sub(dd.op()).unwrap().max_abs();
                assert!(diff <= 1e-12, "route difference {diff} (rwa = {rwa})");
            }
        }
    }

    #[test]
    fn entries_scale_linearly_with_coupling() {
        let ms = test_modes();
        let space = ms.photon_space(1).unwrap();
        let mut weak = test_atom();
        weak.coupling = 0.05;
        let mut strong = weak.clone();
        strong.coupling = 0.1;
        let w = TimeWindow::new(0.3, 2.9).unwrap();
        let dw = detection_operator_current(&ms, &space, &weak, "e", w, false).unwrap();
        let ds = detection_operator_current(&ms, &space, &strong, "e", w, false).unwrap();
        let rescaled = dw.op().scaled(c(2.0, 0.0));
        assert_eq!(ds.op().matrix(), rescaled.matrix());
    }

    #[test]
    fn window_shift_leaves_moduli_unchanged() {
        let ms = test_modes();
        let space = ms.photon_space(1).unwrap();
        let atom = test_atom();
        let w = TimeWindow::new(-0.7, 1.3).unwrap();
        let d0 = detection_operator_current(&ms, &space, &atom, "e", w, false).unwrap();
        let d1 = detection_operator_current(&ms, &space, &atom, "e", w.shifted(2.31), false).unwrap();
        let (m0, m1) = (d0.op().matrix(), d1.op().matrix());
        for (a, b) in m0.iter().zip(m1.iter()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * a.norm().max(1e-30));
        }
    }

    #[test]
    fn counter_rotating_vacuum_probability_bounded() {
        let ms = test_modes();
        let space = ms.photon_space(1).unwrap();
        let atom = test_atom();
        let delta = atom.gap("e").unwrap();

        let bound: f64 = ms
            .modes()
            .iter()
            .map(|mode| {
                let j = current_fourier(&atom, "e", scale(-1.0, mode.k())).unwrap();
                let amp = bilinear(conj3(mode.eps()), j).norm_sqr();
                amp * 4.0
                    / ((delta + mode.omega()).powi(2) * 2.0 * mode.omega() * ms.volume())
            })
            .sum();

        for t_len in [0.1, 1.0, 7.0, 40.0, 200.0] {
            let w = TimeWindow::centered(t_len).unwrap();
            let d = detection_operator_current(&ms, &space, &atom, "e", w, false).unwrap();
            let vac = QState::vacuum(&space);
            let p = crate::measure::detect_prob(&d, &vac).unwrap();
            assert!(
                p <= bound * (1.0 + 1e-12),
                "vacuum probability {p} exceeds bound {bound} at T = {t_len}"
            );
        }
    }

    #[test]
    fn interaction_hamiltonian_structure() {
        // 2 modes (cutoff 1) x 2-level atom: 8x8, couplings only between
        // (n, ground) and (n +- 1 in one mode, excited)
        let ms = ModeSet::plane_waves(&[[0.0, 0.0, 1.0]], 1.0).unwrap(); // one k, two polarizations
        let atom = test_atom();
        let joint = ms.joint_space(1, &[atom.level_dim()]).unwrap();
        assert_eq!(joint.dim(), 8);
        let h = interaction_hamiltonian(&ms, &joint, &atom, 0.4).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        for row in 0..8 {
            for col in 0..8 {
                let (occ_r, at_r) = joint.occupations(row);
                let (occ_c, at_c) = joint.occupations(col);
                let photon_change: i64 = occ_r
                    .iter()
                    .zip(&occ_c)
                    .map(|(&a, &b)| (a as i64 - b as i64).abs())
                    .sum();
                let allowed = at_r != at_c && photon_change == 1;
                if !allowed {
                    assert_eq!(
                        h.matrix()[[row, col]],
                        Complex64::ZERO,
                        "unexpected entry at ({row}, {col})"
                    );
                }
            }
        }
        // <vac, ground| H |vac, ground> = 0
        assert_eq!(h.matrix()[[0, 0]], Complex64::ZERO);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cross_route_equality_randomized(
            kx in -1.5..1.5f64, ky in -1.5..1.5f64, kz in -1.5..1.5f64,
            px in -1.0..1.0f64, py in -1.0..1.0f64, pz in -1.0..1.0f64,
            der in -1.0..1.0f64, dei in -1.0..1.0f64,
            dmr in -1.0..1.0f64, dmi in -1.0..1.0f64,
            delta in 0.2..2.5f64,
            g in 0.0..1.5f64,
            t0 in -2.0..2.0f64,
            len in 0.1..6.0f64,
            vol in 0.5..4.0f64,
            rwa in proptest::bool::ANY,
        ) {
            let k = [kx, ky, kz];
            prop_assume!(crate::vec3::norm(k) > 0.2);
            let ms = ModeSet::plane_waves(&[k], vol).unwrap();
            let space = ms.photon_space(1).unwrap();
            let atom = AtomSpec::new(
                [px, py, pz],
                0.0,
                vec![Transition {
                    label: "e".into(),
                    energy: delta,
                    dipole_e: [c(der, dei), c(-dei, der), c(0.3 * der, 0.1)],
                    dipole_m: [c(dmr, dmi), c(0.2, -dmr), c(dmi, 0.4)],
                }],
                g,
            ).unwrap();
            let w = TimeWindow::new(t0, t0 + len).unwrap();
            let dc = detection_operator_current(&ms, &space, &atom, "e", w, rwa).unwrap();
            let dd = detection_operator_dipole(&ms, &space, &atom, "e", w, rwa).unwrap();
            let diff = dc.op().sub(dd.op()).unwrap().max_abs();
            prop_assert!(diff <= 1e-12, "route difference {diff}");
        }
    }
}
