//! Exact computations for association schemes, fusion rings, and the
//! Fourier-type transform they generate.
//!
//! All arithmetic is exact: matrices hold rationals, multiplicities are
//! arbitrary-precision naturals, and every check reports a witness on
//! failure.

pub mod exactlin;
pub mod fusion;
pub mod outcome;
pub mod scheme;
pub mod tensor;
pub mod transform;

pub use exactlin::{Mat, Scalar, ShapeError};
pub use fusion::{FusionData, FusionError, FusionRing, HomMap};
pub use outcome::{Outcome, Verdict, Witness};
pub use scheme::{AssociationScheme, ClassMatrix, SchemeError};
pub use tensor::{IntersectionTensor, Involution, TensorError};
