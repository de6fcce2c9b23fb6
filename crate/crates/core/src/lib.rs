//! Finite-mode simulator for photon detection in quantum electrodynamics.
//!
//! The crate models photons on a truncated multimode Fock space, couples them
//! to pointlike detector atoms through electric and magnetic dipole moments,
//! and treats photon detection as an indirect quantum measurement: the atom
//! is the apparatus, excitation of the atom is the meter readout. A
//! first-order detection operator gives detection probabilities and
//! post-detection states; an exact time-ordered propagator serves as the
//! validation oracle for the perturbative treatment.
//!
//! Everything is deterministic and pure: all values are immutable after
//! construction, so concurrent evaluation (for example one detector per film
//! pixel) is safe.
//!
//! Natural units are used throughout: `hbar = c = eps0 = 1`. Fields are
//! box-quantized on a finite mode set with normalization `1 / sqrt(2 w V)`.

// validation guards are written `!(x > 0.0)` so NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod linalg;
pub mod measure;
pub mod modes;
pub mod vec3;

pub use atom::{AtomSpec, DetectionOperator, TimeWindow, Transition};
pub use error::{Error, Result};
pub use fock::{FockSpace, QOperator, QState};
pub use measure::{Meter, MeasurementOutcome};
pub use modes::{FieldKind, FieldPart, FieldSpec, Mode, ModeSet, Polarization};
