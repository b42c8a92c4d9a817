//! Graph-limit toolkit: homomorphism densities, step graphons, graph
//! parameters with Möbius and connection-matrix machinery, exchangeable
//! random graph models, quantum-graph algebra, and sum-of-squares
//! certificates for linear inequalities between subgraph densities.
//!
//! Every reported quantity is an exact rational ([`Rat`]); floating point
//! appears only inside the certificate search, whose output is re-verified
//! in exact arithmetic before anything is claimed.

// index loops mirror the matrix notation throughout the numeric code
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod num;
pub mod linalg;
pub mod graph;
pub mod density;
pub mod graphon;
pub mod parameter;
pub mod random_model;
pub mod algebra;
pub mod certify;
pub mod cli;

pub use error::{Error, Result};

/// Exact rational scalar used on every trusted path.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer backing [`Rat`].
pub type Int = num_bigint::BigInt;

pub use algebra::QuantumGraph;
pub use certify::{CertRequest, Certificate};
pub use graph::{CanonicalForm, Graph};
pub use graphon::{RandomGraphonModel, StepFn, StepGraphon};
pub use num::Scalar;
pub use parameter::{ConnectionMatrix, GraphParameter};
pub use random_model::{FiniteRandomModel, PrefixSampler};
