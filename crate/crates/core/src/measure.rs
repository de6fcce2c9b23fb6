//! The indirect measurement model: exact interaction channel, first-order
//! approximation, and the detection-operator fast path.
//!
//! The object (photon) state `rho` and apparatus state `sigma` evolve under a
//! unitary built from the interaction Hamiltonian; reading a meter projector
//! on the apparatus yields an outcome probability and a conditional
//! post-measurement state of the object. The exact propagator is the
//! validation oracle for the first-order (detection-operator) treatment.

use ndarray::{linalg::kron, Array2};
use num_complex::Complex64;

use crate::atom::{interaction_hamiltonian, AtomSpec, DetectionOperator, TimeWindow};
use crate::error::{Error, Result};
use crate::fock::{partial_trace_apparatus, FockSpace, QOperator, QState};
use crate::linalg;
use crate::modes::ModeSet;

/// Tolerance for projector sums and Born-probability completeness.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Meter projectors must be Hermitian and idempotent within this tolerance.
pub const PROJECTOR_TOL: f64 = 1e-12;
/// A Born probability may carry at most this much imaginary residue.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;
/// Probabilities below this threshold cannot be conditioned on.
pub const OUTCOME_FLOOR: f64 = 1e-12;

/// A projective meter on the apparatus: a complete family of orthogonal
/// projectors with their readout values.
#[derive(Debug, Clone)]
pub struct Meter {
    projectors: Vec<QOperator>,
    values: Vec<f64>,
}

impl Meter {
    pub fn new(projectors: Vec<QOperator>, values: Vec<f64>) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::Config("a meter needs at least one projector".into()));
        }
        if projectors.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} projectors but {} meter values",
                projectors.len(),
                values.len()
            )));
        }
        let space = projectors[0].space().clone();
        let mut sum = Array2::<Complex64>::zeros((space.dim(), space.dim()));
        for p in &projectors {
            if p.space() != &space {
                return Err(Error::Shape("meter projectors live on different spaces".into()));
            }
            if p.hermiticity_defect() > PROJECTOR_TOL {
                return Err(Error::Numeric(format!(
                    "meter projector is not Hermitian (defect {:.3e})",
                    p.hermiticity_defect()
                )));
            }
            let idem = p.matmul(p)?.sub(p)?.max_abs();
            if idem > PROJECTOR_TOL {
                return Err(Error::Numeric(format!(
                    "meter projector is not idempotent (defect {idem:.3e})"
                )));
            }
            sum += p.matrix();
        }
        let completeness = linalg::max_abs(&(&sum - &Array2::<Complex64>::eye(space.dim())));
        if completeness > PROJECTOR_TOL {
            return Err(Error::Numeric(format!(
                "meter projectors do not sum to the identity (defect {completeness:.3e})"
            )));
        }
        for (a, pa) in projectors.iter().enumerate() {
            for pb in projectors.iter().skip(a + 1) {
                let overlap = pa.matmul(pb)?.max_abs();
                if overlap > PROJECTOR_TOL {
                    return Err(Error::Numeric(format!(
                        "meter projectors are not orthogonal (overlap {overlap:.3e})"
                    )));
                }
            }
        }
        Ok(Self { projectors, values })
    }

    /// Two-outcome meter {ground, any excited level} on a single atomic
    /// factor of the given dimension.
    pub fn ground_excited(level_dim: usize) -> Result<Self> {
        let space = FockSpace::apparatus_only(&[level_dim])?;
        let mut pg = Array2::<Complex64>::zeros((level_dim, level_dim));
        pg[[0, 0]] = Complex64::ONE;
        let mut pe = Array2::<Complex64>::zeros((level_dim, level_dim));
        for r in 1..level_dim {
            pe[[r, r]] = Complex64::ONE;
        }
        Self::new(
            vec![QOperator::new(space.clone(), pg)?, QOperator::new(space, pe)?],
            vec![0.0, 1.0],
        )
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn projector(&self, r: usize) -> &QOperator {
        &self.projectors[r]
    }

    pub fn value(&self, r: usize) -> f64 {
        self.values[r]
    }
}

/// Probability and conditional object state of one meter outcome.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub probability: f64,
    pub post_state: QState,
}

fn joint_space_of(rho: &QState, sigma: &QState) -> Result<FockSpace> {
    if rho.space().n_atoms() != 0 {
        return Err(Error::Shape(
            "the object state must live on a photon-only space".into(),
        ));
    }
    if sigma.space().n_modes() != 0 {
        return Err(Error::Shape(
            "the apparatus state must live on an apparatus-only space".into(),
        ));
    }
    FockSpace::new(rho.space().cutoffs(), sigma.space().atom_dims())
}

fn embed_apparatus_projector(projector: &QOperator, joint: &FockSpace) -> Result<Array2<Complex64>> {
    if projector.space().atom_dims() != joint.atom_dims() {
        return Err(Error::Shape(format!(
            "projector apparatus dimensions {:?} do not match the joint space {:?}",
            projector.space().atom_dims(),
            joint.atom_dims()
        )));
    }
    let eye = Array2::<Complex64>::eye(joint.photon_dim());
    Ok(kron(&eye, projector.matrix()))
}

/// Time-ordered propagator over the window, approximated as an ordered
/// product of midpoint-rule step exponentials `exp(-i H(t_mid) dt)`, later
/// steps applied on the left. Each factor is unitary to roundoff, so the
/// product stays unitary regardless of the step count; the step count
/// controls only the time-ordering accuracy (second order).
pub fn exact_propagator(
    ms: &ModeSet,
    joint: &FockSpace,
    atom: &AtomSpec,
    window: TimeWindow,
    steps: usize,
) -> Result<QOperator> {
    if steps < 1 {
        return Err(Error::Usage("the propagator needs at least one step".into()));
    }
    let dt = window.length() / steps as f64;
    let dim = joint.dim();
    let mut u = Array2::<Complex64>::eye(dim);
    for step in 0..steps {
        let t_mid = window.start() + (step as f64 + 0.5) * dt;
        let h = interaction_hamiltonian(ms, joint, atom, t_mid)?;
        if h.matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Numeric(format!(
                "interaction Hamiltonian has non-finite entries at t = {t_mid}"
            )));
        }
        let step_u = linalg::expm(&h.matrix().mapv(|z| z * Complex64::new(0.0, -dt)));
        u = step_u.dot(&u);
    }
    QOperator::new(joint.clone(), u)
}

fn born_raw(
    projector: &QOperator,
    u: &QOperator,
    rho: &QState,
    sigma: &QState,
) -> Result<(Complex64, Array2<Complex64>, FockSpace)> {
    let joint = joint_space_of(rho, sigma)?;
    if u.space() != &joint {
        return Err(Error::Shape(format!(
            "propagator acts on {:?} modes x {:?} atoms, expected the joint of the given states",
            u.space().cutoffs(),
            u.space().atom_dims()
        )));
    }
    let p_joint = embed_apparatus_projector(projector, &joint)?;
    let initial = kron(rho.density(), sigma.density());
    let evolved = u.matrix().dot(&initial).dot(&linalg::adjoint(u.matrix()));
    let mut tr = Complex64::ZERO;
    for i in 0..joint.dim() {
        for j in 0..joint.dim() {
            tr += p_joint[[i, j]] * evolved[[j, i]];
        }
    }
    Ok((tr, evolved, joint))
}

/// Born probability `Tr(P U (rho x sigma) U^dagger)` of reading the meter
/// outcome with apparatus projector `P`. Validates that the trace is real
/// and inside `[0, 1]` up to roundoff, then clips.
pub fn born_probability(
    projector: &QOperator,
    u: &QOperator,
    rho: &QState,
    sigma: &QState,
) -> Result<f64> {
    let (tr, _, _) = born_raw(projector, u, rho, sigma)?;
    validate_probability(tr)
}

fn validate_probability(tr: Complex64) -> Result<f64> {
    if tr.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Numeric(format!(
            "probability has imaginary residue {:.3e}",
            tr.im
        )));
    }
    let p = tr.re;
    if !(-OUTCOME_FLOOR..=1.0 + OUTCOME_FLOOR).contains(&p) {
        return Err(Error::Numeric(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Conditional object state after reading the outcome:
/// `T(rho) = Tr_apparatus(P U (rho x sigma) U^dagger P) / p`.
pub fn post_measurement_state(
    projector: &QOperator,
    u: &QOperator,
    rho: &QState,
    sigma: &QState,
) -> Result<MeasurementOutcome> {
    let (tr, evolved, joint) = born_raw(projector, u, rho, sigma)?;
    let probability = validate_probability(tr)?;
    if probability <= OUTCOME_FLOOR {
        return Err(Error::ImpossibleOutcome { probability });
    }
    let p_joint = embed_apparatus_projector(projector, &joint)?;
    // sandwiching keeps the reduced matrix positive under roundoff
    let selected = p_joint.dot(&evolved).dot(&p_joint);
    let reduced = partial_trace_apparatus(&QOperator::new(joint, selected)?)?;
    let normalized = reduced.matrix().mapv(|z| z / probability);
    let post_state = QState::from_density(rho.space().clone(), normalized)?;
    Ok(MeasurementOutcome {
        probability,
        post_state,
    })
}

/// First-order (single-interaction) outcome probability
/// `Tr(P K (rho x sigma) K^dagger)` with `K = integral of H(t) dt` evaluated
/// by composite Gauss-Legendre quadrature over the window. The result is
/// accepted only if doubling the panel count moves it by less than `1e-8`
/// relative.
#[allow(clippy::too_many_arguments)]
pub fn dyson_first_order_prob(
    ms: &ModeSet,
    joint: &FockSpace,
    atom: &AtomSpec,
    window: TimeWindow,
    projector: &QOperator,
    rho: &QState,
    sigma: &QState,
    quadrature_panels: usize,
) -> Result<f64> {
    if quadrature_panels < 1 {
        return Err(Error::Usage("quadrature needs at least one panel".into()));
    }
    // zeroth order must not contribute to this outcome
    let overlap = {
        let mut acc = Complex64::ZERO;
        let (pm, sm) = (projector.matrix(), sigma.density());
        for i in 0..projector.space().dim() {
            for j in 0..projector.space().dim() {
                acc += pm[[i, j]] * sm[[j, i]];
            }
        }
        acc
    };
    if overlap.norm() > 1e-12 {
        return Err(Error::Usage(format!(
            "the meter projector overlaps the apparatus initial state (Tr(P sigma) = {:.3e}); \
             the zeroth order would dominate",
            overlap.norm()
        )));
    }

    let coarse = dyson_prob_at(ms, joint, atom, window, projector, rho, sigma, quadrature_panels)?;
    let fine = dyson_prob_at(ms, joint, atom, window, projector, rho, sigma, 2 * quadrature_panels)?;
    if (fine - coarse).abs() > 1e-8 * fine.abs().max(1e-300) {
        return Err(Error::Numeric(format!(
            "quadrature did not converge: {coarse:.6e} vs {fine:.6e} after halving the step"
        )));
    }
    Ok(fine)
}

#[allow(clippy::too_many_arguments)]
fn dyson_prob_at(
    ms: &ModeSet,
    joint: &FockSpace,
    atom: &AtomSpec,
    window: TimeWindow,
    projector: &QOperator,
    rho: &QState,
    sigma: &QState,
    panels: usize,
) -> Result<f64> {
    let dim = joint.dim();
    let (nodes, weights) = linalg::gauss_legendre(10);
    let h_panel = window.length() / panels as f64;
    let mut k_op = Array2::<Complex64>::zeros((dim, dim));
    for panel in 0..panels {
        let a = window.start() + panel as f64 * h_panel;
        let mid = a + 0.5 * h_panel;
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + 0.5 * h_panel * x;
            let h = interaction_hamiltonian(ms, joint, atom, t)?;
            k_op = k_op + h.matrix().mapv(|z| z * (0.5 * h_panel * w));
        }
    }
    let joint_check = joint_space_of(rho, sigma)?;
    if &joint_check != joint {
        return Err(Error::Shape(
            "joint space does not match the object and apparatus states".into(),
        ));
    }
    let p_joint = embed_apparatus_projector(projector, joint)?;
    let initial = kron(rho.density(), sigma.density());
    let moved = k_op.dot(&initial).dot(&linalg::adjoint(&k_op));
    let mut tr = Complex64::ZERO;
    for i in 0..dim {
        for j in 0..dim {
            tr += p_joint[[i, j]] * moved[[j, i]];
        }
    }
    if tr.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Numeric(format!(
            "first-order probability has imaginary residue {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re.max(0.0))
}

/// Detection probability `Tr(D^dagger D rho)`. Perturbative: reported raw,
/// never renormalized; negative roundoff below `-1e-12` is an error.
pub fn detect_prob(d: &DetectionOperator, rho: &QState) -> Result<f64> {
    if d.op().space() != rho.space() {
        return Err(Error::Shape(
            "detection operator and state live on different spaces".into(),
        ));
    }
    let dm = d.op().matrix();
    let moved = dm.dot(rho.density());
    let mut tr = Complex64::ZERO;
    for i in 0..rho.space().dim() {
        for j in 0..rho.space().dim() {
            tr += dm[[i, j]].conj() * moved[[i, j]];
        }
    }
    if tr.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::Numeric(format!(
            "detection probability has imaginary residue {:.3e}",
            tr.im
        )));
    }
    if tr.re < -1e-12 {
        return Err(Error::Numeric(format!(
            "detection probability {:.3e} is negative beyond roundoff",
            tr.re
        )));
    }
    Ok(tr.re.max(0.0))
}

/// Conditional photon state after a detection, `D rho D^dagger / p`. The
/// unnormalized trace equals the detection probability.
pub fn detect_post(d: &DetectionOperator, rho: &QState) -> Result<QState> {
    let probability = detect_prob(d, rho)?;
    if probability <= 1e-15 {
        return Err(Error::ImpossibleOutcome { probability });
    }
    let dm = d.op().matrix();
    let moved = dm.dot(rho.density()).dot(&linalg::adjoint(dm));
    QState::from_density(rho.space().clone(), moved.mapv(|z| z / probability))
}
