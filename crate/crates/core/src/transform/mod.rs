//! The graphic Fourier transform `K̂` for scheme and Cayley kernels, its
//! right adjoint `Ǩ`, and the property checks built on them.
//!
//! Every direct sum and coend in this module is laid out in one frozen
//! order: source index ascending, then grid cell row-major, then tensor
//! factors left-major (as in [`Mat::kron`](crate::exactlin::Mat::kron)).
//! Morphism-level identities are therefore literal matrix equalities.

mod functor;
mod kernel;
mod monoidal;
mod objects;
mod properties;

pub use functor::{
    check_round_trip, check_split_mono, check_triangles, counit_eps, eta_left_inverse, kcheck,
    kcheck_morphism, khat, khat_morphism, unit_eta,
};
pub use kernel::{ComposeOrder, FusionKernel, Kernel, Membership, SchemeKernel, StarRoute};
pub use monoidal::{
    check_multiplicative, check_unit_preserved, convolve, convolve_morphisms, mat_compose,
    mat_compose_morphisms, unit_object,
};
pub use objects::{DimObject, MatMorphismFamily, MatObject, MorphismFamily};
pub use properties::{
    check_conservative, check_star_antimonoidal, check_star_preserved, dual_comparison,
    is_class_constant, is_regular, reflects_iso, star_source, star_source_morphism, star_target,
    star_target_morphism, wiener_membership, DualComparison,
};

use thiserror::Error;

use crate::exactlin::ShapeError;
use crate::tensor::TensorError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{what}: expected {expected}, found {found}")]
    IndexMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("component {index} has shape {found:?}, expected {expected:?}")]
    ComponentShape {
        index: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("morphism does not go {0}")]
    WrongEndpoints(&'static str),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("dimension overflow")]
    Overflow,
    #[error("precondition failed: {0}")]
    Precondition(String),
}
