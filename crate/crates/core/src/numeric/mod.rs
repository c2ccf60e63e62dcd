//! Exact and floating-point rigidity matrices.
//!
//! Everything here is generic over [`Scalar`]; the randomized generic tests
//! run in [`Fp61`], user geometry runs in `f64`, and `BigRational` is
//! available for exact checks of hand-built configurations.

pub mod linalg;
pub mod rigidity;
pub mod scalar;

pub use linalg::{row_reduce, Echelon};
pub use rigidity::{
    all_inner_move, build_rigidity_matrix, generic_rank_randomized, motion_space, motion_support,
    Configuration, Framework, MotionBasis, RigidityMatrix,
};
pub use scalar::{Fp61, Scalar, FLOAT_PIVOT_TOLERANCE};
