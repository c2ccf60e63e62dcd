//! Combinatorial rigidity of planar pinned bar-and-joint graphs.
//!
//! * [`graph`]: multigraphs, pinned graphs, pin contraction and composition
//! * [`canon`]: canonical codes for isomorphism tests
//! * [`counting`]: mobility counts and exhaustive oracles
//! * [`pebble`]: the (2,3)-pebble game
//! * [`numeric`]: rigidity matrices and first-order motions
//! * [`assur`]: Assur tests and decomposition
//! * [`generate`]: construction moves, enumeration and certificates
//!
//! ```
//! use assur_core::{catalog, decompose, is_assur, AssurOptions};
//!
//! let v = is_assur(&catalog::triad(), &AssurOptions::default()).unwrap();
//! assert!(v.overall);
//! let scheme = decompose(&catalog::stacked_dyads()).unwrap();
//! assert_eq!(scheme.components.len(), 2);
//! ```

pub mod assur;
pub mod canon;
pub mod counting;
pub mod error;
pub mod generate;
pub mod graph;
pub mod numeric;
pub mod pebble;

use num_rational::BigRational;

pub use assur::{decompose, is_assur, recompose, AssurComponent, AssurMethod, AssurOptions, AssurScheme, AssurVerdict};
pub use canon::{canonical_code, CanonicalCode, Canonize};
pub use counting::{grubler_dof, remove_drivers, DofReport, LinkageSchema};
pub use error::{Error, Result};
pub use generate::{certify, verify_certificate, Certificate, ConstructionStep};
pub use graph::{catalog, compose, contract_pins, split_contracted_vertex, CompositionMap, Multigraph, PinnedGraph, VertexId, VertexKind};
pub use numeric::{Fp61, Scalar};
pub use pebble::{pebble_rank, pinned_isostatic, RankReport};

/// Rigidity matrix over the prime field used for generic rank.
pub type ExactMatrix = numeric::RigidityMatrix<Fp61>;
pub type FloatMatrix = numeric::RigidityMatrix<f64>;
pub type RationalMatrix = numeric::RigidityMatrix<BigRational>;

pub type ExactConfiguration = numeric::Configuration<Fp61>;
pub type FloatConfiguration = numeric::Configuration<f64>;
pub type RationalConfiguration = numeric::Configuration<BigRational>;

pub type ExactMotionBasis = numeric::MotionBasis<Fp61>;
pub type FloatMotionBasis = numeric::MotionBasis<f64>;
pub type RationalMotionBasis = numeric::MotionBasis<BigRational>;
