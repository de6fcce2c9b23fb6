//! Truncated multimode Fock spaces and dense complex operators on them.
//!
//! A [`FockSpace`] is a tensor product of bosonic mode factors, each truncated
//! at a per-mode maximum occupation `n_max` (factor dimension `n_max + 1`),
//! optionally followed by finite-level apparatus factors (detector atoms).
//!
//! # Basis enumeration
//!
//! The basis is ordered mode-major with the apparatus factors appended last:
//! the factor list is `[mode 0, mode 1, ..., atom 0, atom 1, ...]`, mode 0 is
//! the slowest-varying index and the last atom the fastest. Concretely, for
//! cutoffs `[1, 1]` and one two-level atom the basis index of the state with
//! occupations `(n0, n1)` and atom level `a` is `((n0 * 2) + n1) * 2 + a`.
//! This ordering is fixed so that operator matrices are reproducible
//! bit-for-bit across runs.

use ndarray::{linalg::kron, Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Max-norm tolerance for Hermiticity checks on density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on `|Tr(rho) - 1|` for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Density-matrix eigenvalues may round below zero by at most this much.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// A truncated multimode bosonic Hilbert space, optionally tensored with
/// finite-level apparatus factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    cutoffs: Vec<usize>,
    atom_dims: Vec<usize>,
}

impl FockSpace {
    /// Space with the given per-mode photon-number cutoffs and appended
    /// apparatus dimensions. At least one mode is required and every entry
    /// must be >= 1.
    pub fn new(cutoffs: &[usize], atom_dims: &[usize]) -> Result<Self> {
        if cutoffs.is_empty() {
            return Err(Error::Config(
                "a Fock space needs at least one mode (empty cutoff list)".into(),
            ));
        }
        Self::build(cutoffs, atom_dims)
    }

    /// Apparatus-only space (no photon modes), used for meter projectors and
    /// apparatus initial states.
    pub fn apparatus_only(atom_dims: &[usize]) -> Result<Self> {
        if atom_dims.is_empty() {
            return Err(Error::Config(
                "an apparatus space needs at least one subsystem".into(),
            ));
        }
        Self::build(&[], atom_dims)
    }

    fn build(cutoffs: &[usize], atom_dims: &[usize]) -> Result<Self> {
        if let Some(&bad) = cutoffs.iter().find(|&&c| c < 1) {
            return Err(Error::Config(format!(
                "photon-number cutoffs must be >= 1, got {bad}"
            )));
        }
        if let Some(&bad) = atom_dims.iter().find(|&&d| d < 1) {
            return Err(Error::Config(format!(
                "apparatus dimensions must be >= 1, got {bad}"
            )));
        }
        Ok(Self {
            cutoffs: cutoffs.to_vec(),
            atom_dims: atom_dims.to_vec(),
        })
    }

    pub fn cutoffs(&self) -> &[usize] {
        &self.cutoffs
    }

    pub fn atom_dims(&self) -> &[usize] {
        &self.atom_dims
    }

    pub fn n_modes(&self) -> usize {
        self.cutoffs.len()
    }

    pub fn n_atoms(&self) -> usize {
        self.atom_dims.len()
    }

    /// Dimension of the photon part, `prod(cutoff + 1)`.
    pub fn photon_dim(&self) -> usize {
        self.cutoffs.iter().map(|c| c + 1).product()
    }

    /// Dimension of the apparatus part.
    pub fn apparatus_dim(&self) -> usize {
        self.atom_dims.iter().product()
    }

    /// Total dimension.
    pub fn dim(&self) -> usize {
        self.photon_dim() * self.apparatus_dim()
    }

    /// Factor dimensions in basis order: modes first, atoms appended.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.cutoffs
            .iter()
            .map(|c| c + 1)
            .chain(self.atom_dims.iter().copied())
            .collect()
    }

    /// Mode occupations and atom levels of the `index`-th basis state.
    pub fn occupations(&self, index: usize) -> (Vec<usize>, Vec<usize>) {
        let dims = self.factor_dims();
        let mut digits = vec![0usize; dims.len()];
        let mut rest = index;
        for (f, &d) in dims.iter().enumerate().rev() {
            digits[f] = rest % d;
            rest /= d;
        }
        let atoms = digits.split_off(self.n_modes());
        (digits, atoms)
    }

    /// Basis index of the state with the given occupations and atom levels.
    pub fn basis_index(&self, occupations: &[usize], atom_levels: &[usize]) -> Result<usize> {
        if occupations.len() != self.n_modes() || atom_levels.len() != self.n_atoms() {
            return Err(Error::Shape(format!(
                "basis label needs {} occupations and {} atom levels",
                self.n_modes(),
                self.n_atoms()
            )));
        }
        let mut index = 0usize;
        for ((&n, &c), mode) in occupations.iter().zip(&self.cutoffs).zip(0..) {
            if n > c {
                return Err(Error::Index(format!(
                    "occupation {n} exceeds cutoff {c} on mode {mode}"
                )));
            }
            index = index * (c + 1) + n;
        }
        for ((&a, &d), atom) in atom_levels.iter().zip(&self.atom_dims).zip(0..) {
            if a >= d {
                return Err(Error::Index(format!(
                    "level {a} exceeds dimension {d} on atom {atom}"
                )));
            }
            index = index * d + a;
        }
        Ok(index)
    }

    /// True when every mode occupation of basis state `index` lies strictly
    /// below its cutoff, i.e. the state is unaffected by truncation edges.
    pub fn is_sub_cutoff(&self, index: usize) -> bool {
        let (occ, _) = self.occupations(index);
        occ.iter().zip(&self.cutoffs).all(|(&n, &c)| n < c)
    }

    /// The photon part of this space (apparatus factors dropped).
    pub fn photon_space(&self) -> Result<FockSpace> {
        FockSpace::new(&self.cutoffs, &[])
    }
}

/// A dense complex operator attached to the space it acts on.
#[derive(Debug, Clone)]
pub struct QOperator {
    space: FockSpace,
    matrix: Array2<Complex64>,
}

impl QOperator {
    pub fn new(space: FockSpace, matrix: Array2<Complex64>) -> Result<Self> {
        let d = space.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::Shape(format!(
                "matrix is {}x{} but the space has dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { space, matrix })
    }

    pub fn identity(space: &FockSpace) -> Self {
        Self {
            space: space.clone(),
            matrix: Array2::eye(space.dim()),
        }
    }

    pub fn zeros(space: &FockSpace) -> Self {
        Self {
            space: space.clone(),
            matrix: Array2::zeros((space.dim(), space.dim())),
        }
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: linalg::adjoint(&self.matrix),
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.mapv(|m| m * z),
        }
    }

    fn check_same_space(&self, other: &Self, what: &str) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Shape(format!("{what} requires operators on the same space")));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "addition")?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "subtraction")?;
        Ok(Self {
            space: self.space.clone(),
            matrix: &self.matrix - &other.matrix,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "multiplication")?;
        Ok(Self {
            space: self.space.clone(),
            matrix: self.matrix.dot(&other.matrix),
        })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "commutator")?;
        Ok(Self {
            space: self.space.clone(),
            matrix: self.matrix.dot(&other.matrix) - other.matrix.dot(&self.matrix),
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.space.dim()).map(|i| self.matrix[[i, i]]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        linalg::max_abs(&self.matrix)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        linalg::hermiticity_defect(&self.matrix)
    }

    pub fn apply(&self, ket: &Array1<Complex64>) -> Result<Array1<Complex64>> {
        if ket.len() != self.space.dim() {
            return Err(Error::Shape(format!(
                "ket of length {} on a space of dimension {}",
                ket.len(),
                self.space.dim()
            )));
        }
        Ok(self.matrix.dot(ket))
    }
}

/// A density matrix attached to its space. Construction validates
/// Hermiticity, unit trace, and positivity within the module tolerances.
#[derive(Debug, Clone)]
pub struct QState {
    space: FockSpace,
    density: Array2<Complex64>,
}

impl QState {
    pub fn from_density(space: FockSpace, density: Array2<Complex64>) -> Result<Self> {
        let d = space.dim();
        if density.nrows() != d || density.ncols() != d {
            return Err(Error::Shape(format!(
                "density matrix is {}x{} but the space has dimension {d}",
                density.nrows(),
                density.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&density);
        if herm > HERMITICITY_TOL {
            return Err(Error::Numeric(format!(
                "density matrix is not Hermitian (defect {herm:.3e})"
            )));
        }
        let tr: Complex64 = (0..d).map(|i| density[[i, i]]).sum();
        if (tr - Complex64::ONE).norm() > TRACE_TOL {
            return Err(Error::Numeric(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        let min_eig = linalg::eigvalsh(&density)
            .into_iter()
            .next()
            .unwrap_or(0.0);
        if min_eig < EIGENVALUE_FLOOR {
            return Err(Error::Numeric(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { space, density })
    }

    /// Pure state from a ket, normalized internally. Fails on a zero ket.
    pub fn pure(space: FockSpace, ket: &Array1<Complex64>) -> Result<Self> {
        if ket.len() != space.dim() {
            return Err(Error::Shape(format!(
                "ket of length {} on a space of dimension {}",
                ket.len(),
                space.dim()
            )));
        }
        let norm_sq: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 1e-300 {
            return Err(Error::Domain("cannot normalize a zero ket".into()));
        }
        let scale = 1.0 / norm_sq;
        let d = space.dim();
        let mut density = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                density[[i, j]] = ket[i] * ket[j].conj() * scale;
            }
        }
        Ok(Self { space, density })
    }

    /// All modes in the vacuum, all atoms in their lowest level.
    pub fn vacuum(space: &FockSpace) -> Self {
        let d = space.dim();
        let mut density = Array2::zeros((d, d));
        density[[0, 0]] = Complex64::ONE;
        Self {
            space: space.clone(),
            density,
        }
    }

    /// Basis (number) state with the given occupations and atom levels.
    pub fn basis_state(space: &FockSpace, occupations: &[usize], atom_levels: &[usize]) -> Result<Self> {
        let idx = space.basis_index(occupations, atom_levels)?;
        let d = space.dim();
        let mut density = Array2::zeros((d, d));
        density[[idx, idx]] = Complex64::ONE;
        Ok(Self {
            space: space.clone(),
            density,
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn density(&self) -> &Array2<Complex64> {
        &self.density
    }

    /// `Tr(rho^2)`, equal to 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        let sq = self.density.dot(&self.density);
        (0..self.space.dim()).map(|i| sq[[i, i]].re).sum()
    }

    pub fn as_operator(&self) -> QOperator {
        QOperator {
            space: self.space.clone(),
            matrix: self.density.clone(),
        }
    }
}

/// Truncated single-mode lowering matrix of dimension `cutoff + 1`.
fn ladder_matrix(cutoff: usize) -> Array2<Complex64> {
    let d = cutoff + 1;
    let mut a = Array2::zeros((d, d));
    for n in 1..d {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn embed_factor(space: &FockSpace, factor: usize, local: &Array2<Complex64>) -> QOperator {
    let dims = space.factor_dims();
    let mut matrix = Array2::eye(1);
    for (f, &d) in dims.iter().enumerate() {
        if f == factor {
            matrix = kron(&matrix, local);
        } else {
            matrix = kron(&matrix, &Array2::eye(d));
        }
    }
    QOperator {
        space: space.clone(),
        matrix,
    }
}

/// Annihilation operator of the given mode: `a|n> = sqrt(n) |n-1>` on the
/// mode factor, identity on every other factor.
pub fn annihilation_op(space: &FockSpace, mode: usize) -> Result<QOperator> {
    if mode >= space.n_modes() {
        return Err(Error::Index(format!(
            "mode {mode} out of range (space has {} modes)",
            space.n_modes()
        )));
    }
    Ok(embed_factor(space, mode, &ladder_matrix(space.cutoffs()[mode])))
}

/// Creation operator, the adjoint of [`annihilation_op`].
pub fn creation_op(space: &FockSpace, mode: usize) -> Result<QOperator> {
    Ok(annihilation_op(space, mode)?.adjoint())
}

/// Embed an arbitrary local matrix on one mode factor.
pub fn embed_mode_op(space: &FockSpace, mode: usize, local: &Array2<Complex64>) -> Result<QOperator> {
    if mode >= space.n_modes() {
        return Err(Error::Index(format!(
            "mode {mode} out of range (space has {} modes)",
            space.n_modes()
        )));
    }
    let d = space.cutoffs()[mode] + 1;
    if local.nrows() != d || local.ncols() != d {
        return Err(Error::Shape(format!(
            "local matrix is {}x{} but mode {mode} has dimension {d}",
            local.nrows(),
            local.ncols()
        )));
    }
    Ok(embed_factor(space, mode, local))
}

/// Embed a local matrix on one apparatus factor, identity elsewhere.
pub fn embed_atom_op(space: &FockSpace, atom: usize, local: &Array2<Complex64>) -> Result<QOperator> {
    if atom >= space.n_atoms() {
        return Err(Error::Index(format!(
            "atom {atom} out of range (space has {} atoms)",
            space.n_atoms()
        )));
    }
    let d = space.atom_dims()[atom];
    if local.nrows() != d || local.ncols() != d {
        return Err(Error::Shape(format!(
            "local matrix is {}x{} but atom {atom} has dimension {d}",
            local.nrows(),
            local.ncols()
        )));
    }
    Ok(embed_factor(space, space.n_modes() + atom, local))
}

/// Trace out every apparatus factor, leaving an operator on the photon part.
/// Preserves the total trace exactly.
pub fn partial_trace_apparatus(op: &QOperator) -> Result<QOperator> {
    let space = op.space();
    if space.n_atoms() == 0 {
        return Err(Error::Config(
            "partial trace over the apparatus requires at least one apparatus factor".into(),
        ));
    }
    let photon = space.photon_space()?;
    let dp = photon.dim();
    let da = space.apparatus_dim();
    let m = op.matrix();
    let mut out = Array2::zeros((dp, dp));
    for i in 0..dp {
        for j in 0..dp {
            let mut acc = Complex64::ZERO;
            for a in 0..da {
                acc += m[[i * da + a, j * da + a]];
            }
            out[[i, j]] = acc;
        }
    }
    QOperator::new(photon, out)
}

/// `Tr(a b)` computed entrywise, without forming the full product.
pub fn trace_product(a: &QOperator, b: &QOperator) -> Result<Complex64> {
    if a.space() != b.space() {
        return Err(Error::Shape(
            "trace_product requires operators on the same space".into(),
        ));
    }
    let (ma, mb) = (a.matrix(), b.matrix());
    let d = a.space().dim();
    let mut acc = Complex64::ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += ma[[i, j]] * mb[[j, i]];
        }
    }
    Ok(acc)
}
