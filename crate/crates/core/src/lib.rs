//! Exact experiments in simultaneous p-adic Diophantine approximation.
//!
//! Approximation sets are built as exact clopen subsets of `Z_p^n`
//! ([`ClopenSet`]), so their Haar measures and box counts are exact
//! rationals and integers. On top of that sit a constructive p-adic
//! Minkowski solver, a Dirichlet-style solver on polynomial manifolds and
//! evaluators for the dimension formulas of the weighted theory.

pub mod error;
pub mod approx;
pub mod clopen;
pub mod dimension;
pub mod manifold;
pub mod exact;
pub mod minkowski;
pub mod padic;
pub mod poly;
pub mod psi;
pub mod scalar;

pub use error::{Error, Result};
pub use approx::{ApproxTuple, WeightVector};
pub use clopen::{BallSpec, ClopenSet};
pub use dimension::{jb_dimension, rynne_dimension, WWInstance, WWVariant};
pub use exact::PowerProduct;
pub use manifold::{DQEMap, DirichletInstance, RationalPoint};
pub use minkowski::{LinearFormSystem, MinkowskiSolution};
pub use padic::{euler_phi, norm_p, phi_sieve, valuation, PAdicInt, Params};
pub use poly::Poly;
pub use psi::Psi;
pub use scalar::Scalar;

/// Exact rationals: every measure, radius and formula value.
pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
