//! Discrete plane-wave modes in a quantization box and the quantized vector
//! potential, electric, and magnetic field operators evaluated at space-time
//! points.
//!
//! Conventions (natural units, `hbar = c = eps0 = 1`):
//!
//! * the coefficient of the annihilation operator of mode `(k, s)` in the
//!   vector potential is `eps * exp(i(k.x - w t)) / sqrt(2 w V)`,
//! * the electric field follows from `E = -dA/dt` (so `E+ = i w A+`),
//! * the magnetic field from `B = curl A` (so `B+ = i k x A+`),
//! * the creation-operator coefficient is the complex conjugate.
//!
//! The polarization convention is `eps1 = normalize(z x k_hat)` with the
//! fallback `eps1 = x_hat` when `k` is parallel to the z axis, and
//! `eps2 = k_hat x eps1`, fixed so that matrices are reproducible.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{annihilation_op, FockSpace, QOperator};
use crate::vec3::{
    bilinear, cross, cross_rc, cscale, dot, hermitian, lift, norm, normalize, CVec3, Vec3,
};

/// Transversality / orthonormality tolerance for mode data.
pub const MODE_TOL: f64 = 1e-14;

/// Polarization slot of a plane-wave mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    S1,
    S2,
}

impl Polarization {
    pub fn index(self) -> usize {
        match self {
            Polarization::S1 => 1,
            Polarization::S2 => 2,
        }
    }
}

/// Which field operator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// The vector potential A.
    VectorPotential,
    /// The electric field E = -dA/dt.
    Electric,
    /// The magnetic field B = curl A.
    Magnetic,
}

/// Positive-frequency (annihilation) part, negative-frequency (creation)
/// part, or their Hermitian sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPart {
    Plus,
    Minus,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub field: FieldKind,
    pub part: FieldPart,
}

impl FieldSpec {
    pub const fn new(field: FieldKind, part: FieldPart) -> Self {
        Self { field, part }
    }
}

/// A single box-quantized plane-wave mode.
#[derive(Debug, Clone)]
pub struct Mode {
    k: Vec3,
    polarization: Polarization,
    eps: CVec3,
    omega: f64,
}

impl Mode {
    /// Build a mode with `omega = |k|`; validates transversality and unit
    /// normalization of the polarization vector.
    pub fn new(k: Vec3, polarization: Polarization, eps: CVec3) -> Result<Self> {
        let omega = norm(k);
        if omega <= 0.0 {
            return Err(Error::Domain("mode wavevector must be nonzero".into()));
        }
        let k_hat = scale_inv(k, omega);
        let transversality = bilinear(lift(k_hat), eps).norm();
        if transversality > MODE_TOL {
            return Err(Error::Domain(format!(
                "polarization is not transverse (|k_hat . eps| = {transversality:.3e})"
            )));
        }
        let normsq = hermitian(eps, eps).re;
        if (normsq.sqrt() - 1.0).abs() > MODE_TOL {
            return Err(Error::Domain(format!(
                "polarization vector is not normalized (|eps| = {})",
                normsq.sqrt()
            )));
        }
        Ok(Self {
            k,
            polarization,
            eps,
            omega,
        })
    }

    pub fn k(&self) -> Vec3 {
        self.k
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn eps(&self) -> CVec3 {
        self.eps
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }
}

fn scale_inv(v: Vec3, s: f64) -> Vec3 {
    [v[0] / s, v[1] / s, v[2] / s]
}

/// A finite list of plane-wave modes sharing one quantization volume.
#[derive(Debug, Clone)]
pub struct ModeSet {
    modes: Vec<Mode>,
    volume: f64,
}

impl ModeSet {
    pub fn new(modes: Vec<Mode>, volume: f64) -> Result<Self> {
        if !(volume > 0.0) || !volume.is_finite() {
            return Err(Error::Config(format!(
                "quantization volume must be positive and finite, got {volume}"
            )));
        }
        if modes.is_empty() {
            return Err(Error::Config("mode set must not be empty".into()));
        }
        for (i, a) in modes.iter().enumerate() {
            for b in modes.iter().skip(i + 1) {
                if a.k == b.k && a.polarization == b.polarization {
                    return Err(Error::Config(format!(
                        "duplicate mode (k = {:?}, s = {})",
                        a.k,
                        a.polarization.index()
                    )));
                }
                if a.k == b.k {
                    let overlap = hermitian(a.eps, b.eps).norm();
                    if overlap > MODE_TOL {
                        return Err(Error::Config(format!(
                            "polarizations of k = {:?} are not orthogonal (overlap {overlap:.3e})",
                            a.k
                        )));
                    }
                }
            }
        }
        Ok(Self { modes, volume })
    }

    /// Both transverse polarizations for each listed wavevector.
    pub fn plane_waves(ks: &[Vec3], volume: f64) -> Result<Self> {
        let mut modes = Vec::with_capacity(2 * ks.len());
        for &k in ks {
            let (e1, e2) = polarization_basis(k)?;
            modes.push(Mode::new(k, Polarization::S1, lift(e1))?);
            modes.push(Mode::new(k, Polarization::S2, lift(e2))?);
        }
        Self::new(modes, volume)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Photon space with one factor per mode, uniform cutoff.
    pub fn photon_space(&self, cutoff: usize) -> Result<FockSpace> {
        FockSpace::new(&vec![cutoff; self.len()], &[])
    }

    /// Photon space tensored with the given apparatus factors.
    pub fn joint_space(&self, cutoff: usize, atom_dims: &[usize]) -> Result<FockSpace> {
        FockSpace::new(&vec![cutoff; self.len()], atom_dims)
    }
}

/// Orthonormal transverse pair for a wavevector.
pub fn polarization_basis(k: Vec3) -> Result<(Vec3, Vec3)> {
    let n = norm(k);
    if n <= 0.0 {
        return Err(Error::Domain(
            "polarization basis of a zero wavevector is undefined".into(),
        ));
    }
    let k_hat = scale_inv(k, n);
    let z_cross = cross([0.0, 0.0, 1.0], k_hat);
    let eps1 = if norm(z_cross) < 1e-12 {
        [1.0, 0.0, 0.0]
    } else {
        normalize(z_cross)?
    };
    let eps2 = cross(k_hat, eps1);
    Ok((eps1, eps2))
}

/// Coefficient of the annihilation operator (`part = Plus`) or creation
/// operator (`part = Minus`) of one mode in the requested field, at the given
/// space-time point. `part = Full` has no single coefficient.
pub fn field_coefficient(
    mode: &Mode,
    volume: f64,
    spec: FieldSpec,
    x: Vec3,
    t: f64,
) -> Result<CVec3> {
    if spec.part == FieldPart::Full {
        return Err(Error::Usage(
            "the full field is a sum of two coefficients; request Plus or Minus".into(),
        ));
    }
    let omega = mode.omega();
    let phase = Complex64::from_polar(1.0, dot(mode.k(), x) - omega * t);
    let amplitude = phase / (2.0 * omega * volume).sqrt();
    // E+ = i w A+ and B+ = i k x A+ hold bitwise by construction
    let potential = cscale(amplitude, mode.eps());
    let plus = match spec.field {
        FieldKind::VectorPotential => potential,
        FieldKind::Electric => cscale(Complex64::new(0.0, omega), potential),
        FieldKind::Magnetic => cscale(Complex64::i(), cross_rc(mode.k(), potential)),
    };
    Ok(match spec.part {
        FieldPart::Plus => plus,
        FieldPart::Minus => crate::vec3::conj3(plus),
        FieldPart::Full => unreachable!(),
    })
}

/// One Cartesian component of a field operator on the given space:
/// `Plus` gives `sum_m c_m a_m`, `Minus` its adjoint, `Full` their sum.
pub fn field_operator(
    ms: &ModeSet,
    space: &FockSpace,
    spec: FieldSpec,
    component: usize,
    x: Vec3,
    t: f64,
) -> Result<QOperator> {
    if component > 2 {
        return Err(Error::Index(format!(
            "field component {component} out of range 0..=2"
        )));
    }
    if space.n_modes() != ms.len() {
        return Err(Error::Config(format!(
            "space has {} modes but the mode set has {}",
            space.n_modes(),
            ms.len()
        )));
    }
    let dim = space.dim();
    let mut matrix = Array2::<Complex64>::zeros((dim, dim));
    for (m, mode) in ms.modes().iter().enumerate() {
        let plus = field_coefficient(
            mode,
            ms.volume(),
            FieldSpec::new(spec.field, FieldPart::Plus),
            x,
            t,
        )?[component];
        let lower = annihilation_op(space, m)?;
        match spec.part {
            FieldPart::Plus => {
                matrix = matrix + lower.matrix().mapv(|z| z * plus);
            }
            FieldPart::Minus => {
                matrix = matrix + lower.adjoint().matrix().mapv(|z| z * plus.conj());
            }
            FieldPart::Full => {
                matrix = matrix
                    + lower.matrix().mapv(|z| z * plus)
                    + lower.adjoint().matrix().mapv(|z| z * plus.conj());
            }
        }
    }
    QOperator::new(space.clone(), matrix)
}

/// Equal-time commutator `[E_j(x, t), B_k(y, t)]`.
///
/// Returns the matrix commutator on the truncated space together with the
/// c-number the same discrete mode sum gives on states below every cutoff:
/// the box-regularized derivative-of-delta commutator. On the sub-cutoff
/// subspace the matrix equals `analytic * identity`; at the truncation edge
/// the ladder commutator picks up its truncation artifact.
pub fn eb_commutator(
    ms: &ModeSet,
    space: &FockSpace,
    j: usize,
    k: usize,
    x: Vec3,
    y: Vec3,
    t: f64,
) -> Result<(QOperator, Complex64)> {
    if j > 2 || k > 2 {
        return Err(Error::Index(format!(
            "component pair ({j}, {k}) out of range 0..=2"
        )));
    }
    let e = field_operator(
        ms,
        space,
        FieldSpec::new(FieldKind::Electric, FieldPart::Full),
        j,
        x,
        t,
    )?;
    let b = field_operator(
        ms,
        space,
        FieldSpec::new(FieldKind::Magnetic, FieldPart::Full),
        k,
        y,
        t,
    )?;
    let numeric = e.commutator(&b)?;

    let mut analytic = Complex64::ZERO;
    for mode in ms.modes() {
        let ej = field_coefficient(
            mode,
            ms.volume(),
            FieldSpec::new(FieldKind::Electric, FieldPart::Plus),
            x,
            t,
        )?[j];
        let bk = field_coefficient(
            mode,
            ms.volume(),
            FieldSpec::new(FieldKind::Magnetic, FieldPart::Plus),
            y,
            t,
        )?[k];
        analytic += ej * bk.conj() - ej.conj() * bk;
    }
    Ok((numeric, analytic))
}

/// Largest deviation of `op` from `scalar * identity` on the subspace of
/// basis states strictly below every mode cutoff.
pub fn sub_cutoff_deviation(op: &QOperator, scalar: Complex64) -> f64 {
    let space = op.space();
    let m = op.matrix();
    let mut dev = 0.0_f64;
    for i in 0..space.dim() {
        if !space.is_sub_cutoff(i) {
            continue;
        }
        for jj in 0..space.dim() {
            if !space.is_sub_cutoff(jj) {
                continue;
            }
            let want = if i == jj { scalar } else { Complex64::ZERO };
            dev = dev.max((m[[i, jj]] - want).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3;
    use proptest::prelude::*;

    #[test]
    fn polarization_basis_fallback_on_z() {
        let (e1, e2) = polarization_basis([0.0, 0.0, 1.0]).unwrap();
        assert_eq!(e1, [1.0, 0.0, 0.0]);
        assert_eq!(e2, [0.0, 1.0, 0.0]);
    }

    #[test]
    fn polarization_basis_along_x() {
        // z x x_hat = y_hat, then x_hat x y_hat = z_hat
        let (e1, e2) = polarization_basis([1.0, 0.0, 0.0]).unwrap();
        assert!(vec3::norm([e1[0] - 0.0, e1[1] - 1.0, e1[2]]) < 1e-15);
        assert!(vec3::norm([e2[0], e2[1], e2[2] - 1.0]) < 1e-15);
    }

    #[test]
    fn polarization_basis_rejects_zero() {
        assert!(matches!(
            polarization_basis([0.0, 0.0, 0.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coefficient_at_origin_is_normalized_eps() {
        let k = [0.0, 0.0, 2.0];
        let mode = Mode::new(k, Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap();
        let vol = 3.0;
        let a = field_coefficient(
            &mode,
            vol,
            FieldSpec::new(FieldKind::VectorPotential, FieldPart::Plus),
            [0.0; 3],
            0.0,
        )
        .unwrap();
        let want = 1.0 / (2.0 * 2.0 * vol).sqrt();
        assert!((a[0] - Complex64::new(want, 0.0)).norm() < 1e-16);
        assert_eq!(a[1], Complex64::ZERO);
    }

    #[test]
    fn electric_coefficient_modulus() {
        let mode = Mode::new([0.4, -0.3, 1.1], Polarization::S1, {
            let (e1, _) = polarization_basis([0.4, -0.3, 1.1]).unwrap();
            lift(e1)
        })
        .unwrap();
        let vol = 2.5;
        let e = field_coefficient(
            &mode,
            vol,
            FieldSpec::new(FieldKind::Electric, FieldPart::Plus),
            [0.3, 0.9, -1.2],
            0.7,
        )
        .unwrap();
        let want = (mode.omega() / (2.0 * vol)).sqrt();
        assert!((vec3::cnorm(e) - want).abs() < 1e-14);
    }

    #[test]
    fn magnetic_coefficient_geometry() {
        let k = [0.8, 0.1, -0.5];
        let (e1, _) = polarization_basis(k).unwrap();
        let mode = Mode::new(k, Polarization::S1, lift(e1)).unwrap();
        let vol = 1.7;
        let spec_e = FieldSpec::new(FieldKind::Electric, FieldPart::Plus);
        let spec_b = FieldSpec::new(FieldKind::Magnetic, FieldPart::Plus);
        let x = [0.2, -0.4, 0.9];
        let e = field_coefficient(&mode, vol, spec_e, x, 1.3).unwrap();
        let b = field_coefficient(&mode, vol, spec_b, x, 1.3).unwrap();
        // B+ is perpendicular to k and to E+, with equal modulus
        assert!(bilinear(lift(k), b).norm() < 1e-15);
        assert!(hermitian(e, b).norm() < 1e-15);
        assert!((vec3::cnorm(b) - vec3::cnorm(e)).abs() < 1e-14);
    }

    #[test]
    fn full_part_has_no_coefficient() {
        let mode = Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap();
        let r = field_coefficient(
            &mode,
            1.0,
            FieldSpec::new(FieldKind::Electric, FieldPart::Full),
            [0.0; 3],
            0.0,
        );
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn plus_minus_algebraic_identities() {
        // E+ = i omega A+ and B+ = i k x A+, exactly
        let k = [1.2, -0.7, 0.4];
        let (_, e2) = polarization_basis(k).unwrap();
        let mode = Mode::new(k, Polarization::S2, lift(e2)).unwrap();
        let vol = 0.9;
        let x = [0.5, 0.5, -0.5];
        let t = 2.1;
        let a = field_coefficient(&mode, vol, FieldSpec::new(FieldKind::VectorPotential, FieldPart::Plus), x, t).unwrap();
        let e = field_coefficient(&mode, vol, FieldSpec::new(FieldKind::Electric, FieldPart::Plus), x, t).unwrap();
        let b = field_coefficient(&mode, vol, FieldSpec::new(FieldKind::Magnetic, FieldPart::Plus), x, t).unwrap();
        let iw = Complex64::new(0.0, mode.omega());
        for c in 0..3 {
            assert_eq!(e[c], iw * a[c]);
        }
        let kxa = cscale(Complex64::i(), cross_rc(k, a));
        for c in 0..3 {
            assert_eq!(b[c], kxa[c]);
        }
    }

    #[test]
    fn single_mode_full_electric_operator() {
        let ms = ModeSet::new(
            vec![Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([1.0, 0.0, 0.0])).unwrap()],
            1.0,
        )
        .unwrap();
        let space = ms.photon_space(1).unwrap();
        let x = [0.3, 0.0, 0.8];
        let t = 0.4;
        let op = field_operator(
            &ms,
            &space,
            FieldSpec::new(FieldKind::Electric, FieldPart::Full),
            0,
            x,
            t,
        )
        .unwrap();
        let c = field_coefficient(
            &ms.modes()[0],
            1.0,
            FieldSpec::new(FieldKind::Electric, FieldPart::Plus),
            x,
            t,
        )
        .unwrap()[0];
        assert_eq!(op.matrix()[[0, 1]], c);
        assert_eq!(op.matrix()[[1, 0]], c.conj());
        assert_eq!(op.matrix()[[0, 0]], Complex64::ZERO);
        assert_eq!(op.matrix()[[1, 1]], Complex64::ZERO);
    }

    #[test]
    fn plus_part_annihilates_vacuum() {
        let ms = ModeSet::plane_waves(&[[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]], 2.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let op = field_operator(
            &ms,
            &space,
            FieldSpec::new(FieldKind::Electric, FieldPart::Plus),
            1,
            [0.1, 0.2, 0.3],
            0.5,
        )
        .unwrap();
        let mut vac = ndarray::Array1::zeros(space.dim());
        vac[0] = Complex64::ONE;
        let out = op.apply(&vac).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn vacuum_field_fluctuation_matches_mode_sum() {
        // <vac| E_full^2 |vac> = sum_m |c_m(E+)|^2
        let ms = ModeSet::plane_waves(&[[0.0, 0.0, 1.3], [0.6, 0.0, 0.2]], 1.8).unwrap();
        let space = ms.photon_space(1).unwrap();
        let x = [0.4, -0.1, 0.0];
        let t = 1.1;
        let e = field_operator(
            &ms,
            &space,
            FieldSpec::new(FieldKind::Electric, FieldPart::Full),
            0,
            x,
            t,
        )
        .unwrap();
        let esq = e.matmul(&e).unwrap();
        let got = esq.matrix()[[0, 0]];
        let want: f64 = ms
            .modes()
            .iter()
            .map(|m| {
                field_coefficient(m, 1.8, FieldSpec::new(FieldKind::Electric, FieldPart::Plus), x, t)
                    .unwrap()[0]
                    .norm_sqr()
            })
            .sum();
        assert!((got - Complex64::new(want, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn full_operator_is_exactly_hermitian_and_adjoint_pairs() {
        let ms = ModeSet::plane_waves(&[[0.3, 0.4, 1.0]], 1.0).unwrap();
        let space = ms.photon_space(2).unwrap();
        let x = [1.0, 0.0, -2.0];
        for kind in [FieldKind::VectorPotential, FieldKind::Electric, FieldKind::Magnetic] {
            let full = field_operator(&ms, &space, FieldSpec::new(kind, FieldPart::Full), 2, x, 0.9).unwrap();
            assert!(full.hermiticity_defect() <= 1e-13);
            let plus = field_operator(&ms, &space, FieldSpec::new(kind, FieldPart::Plus), 2, x, 0.9).unwrap();
            let minus = field_operator(&ms, &space, FieldSpec::new(kind, FieldPart::Minus), 2, x, 0.9).unwrap();
            assert_eq!(plus.adjoint().matrix(), minus.matrix());
        }
    }

    #[test]
    fn mode_count_mismatch_rejected() {
        let ms = ModeSet::plane_waves(&[[0.0, 0.0, 1.0]], 1.0).unwrap();
        let space = FockSpace::new(&[1], &[]).unwrap(); // 1 factor, 2 modes
        let r = field_operator(
            &ms,
            &space,
            FieldSpec::new(FieldKind::Electric, FieldPart::Full),
            0,
            [0.0; 3],
            0.0,
        );
        assert!(matches!(r, Err(Error::Config(_))));
    }

    #[test]
    fn component_indices_out_of_range_rejected() {
        let ms = ModeSet::plane_waves(&[[0.0, 0.0, 1.0]], 1.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let r = field_operator(
            &ms,
            &space,
            FieldSpec::new(FieldKind::Electric, FieldPart::Full),
            3,
            [0.0; 3],
            0.0,
        );
        assert!(matches!(r, Err(Error::Index(_))));
        let r = eb_commutator(&ms, &space, 0, 3, [0.0; 3], [0.0; 3], 0.0);
        assert!(matches!(r, Err(Error::Index(_))));
    }

    #[test]
    fn mode_set_rejects_duplicates_and_bad_volume() {
        let (e1, _) = polarization_basis([0.0, 0.0, 1.0]).unwrap();
        let m = Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift(e1)).unwrap();
        assert!(matches!(
            ModeSet::new(vec![m.clone(), m.clone()], 1.0),
            Err(Error::Config(_))
        ));
        assert!(matches!(ModeSet::new(vec![m], -1.0), Err(Error::Config(_))));
    }

    #[test]
    fn mode_rejects_non_transverse_polarization() {
        let r = Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([0.0, 0.0, 1.0]));
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = Mode::new([0.0, 0.0, 1.0], Polarization::S1, lift([2.0, 0.0, 0.0]));
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn eb_commutator_matches_analytic_on_sub_cutoff_block() {
        let q = 1.4;
        let ks = [[q, 0.0, 0.0], [-q, 0.0, 0.0], [0.0, q, 0.0], [0.0, -q, 0.0]];
        let ms = ModeSet::plane_waves(&ks, 2.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let x = [0.3, -0.2, 0.5];
        let y = [0.0, 0.1, -0.4];
        for (j, k) in [(0usize, 1usize), (1, 2), (2, 0), (0, 0)] {
            let (numeric, analytic) = eb_commutator(&ms, &space, j, k, x, y, 0.0).unwrap();
            let dev = sub_cutoff_deviation(&numeric, analytic);
            assert!(dev <= 1e-12, "({j},{k}): deviation {dev}");
        }
    }

    #[test]
    fn eb_commutator_time_independent() {
        let ms = ModeSet::plane_waves(&[[0.9, 0.0, 0.0], [-0.9, 0.0, 0.0]], 1.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let x = [0.7, 0.0, 0.0];
        let y = [0.0; 3];
        let (n0, a0) = eb_commutator(&ms, &space, 1, 2, x, y, 0.0).unwrap();
        let (n1, a1) = eb_commutator(&ms, &space, 1, 2, x, y, 1.7).unwrap();
        assert!((a0 - a1).norm() < 1e-12);
        assert!(n0.sub(&n1).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn eb_commutator_vanishes_for_symmetric_diagonal_component() {
        // j = k on a reflection-symmetric grid: the odd mode sum cancels
        let ms = ModeSet::plane_waves(&[[1.1, 0.0, 0.0], [-1.1, 0.0, 0.0]], 1.0).unwrap();
        let space = ms.photon_space(1).unwrap();
        let (numeric, analytic) = eb_commutator(&ms, &space, 1, 1, [0.4, 0.0, 0.0], [0.0; 3], 0.3).unwrap();
        assert!(analytic.norm() < 1e-14);
        assert!(sub_cutoff_deviation(&numeric, Complex64::ZERO) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn polarization_basis_is_orthonormal_transverse(
            kx in -3.0..3.0f64, ky in -3.0..3.0f64, kz in -3.0..3.0f64,
        ) {
            let k = [kx, ky, kz];
            prop_assume!(norm(k) > 1e-3);
            let (e1, e2) = polarization_basis(k).unwrap();
            prop_assert!(dot(k, e1).abs() <= MODE_TOL * norm(k).max(1.0));
            prop_assert!(dot(k, e2).abs() <= MODE_TOL * norm(k).max(1.0));
            prop_assert!(dot(e1, e2).abs() <= MODE_TOL);
            prop_assert!((norm(e1) - 1.0).abs() <= MODE_TOL);
            prop_assert!((norm(e2) - 1.0).abs() <= MODE_TOL);
        }

        #[test]
        fn transversality_of_coefficients(
            kx in -2.0..2.0f64, ky in -2.0..2.0f64, kz in -2.0..2.0f64,
            x0 in -1.0..1.0f64, t in -2.0..2.0f64,
        ) {
            let k = [kx, ky, kz];
            prop_assume!(norm(k) > 0.05);
            let (e1, _) = polarization_basis(k).unwrap();
            let mode = Mode::new(k, Polarization::S1, lift(e1)).unwrap();
            let a = field_coefficient(
                &mode, 1.0,
                FieldSpec::new(FieldKind::VectorPotential, FieldPart::Plus),
                [x0, -x0, 0.5 * x0], t,
            ).unwrap();
            // |k . A+| <= 1e-14 relative to the coefficient scale
            let scale = vec3::cnorm(a) * norm(k);
            prop_assert!(bilinear(lift(k), a).norm() <= 1e-14 * scale.max(1e-30));
        }
    }
}
