//! Finite-dimensional normed vector spaces and convex geometry.
//!
//! The crate computes norms, dual norms, nearest-point projections,
//! separating and supporting hyperplanes, dual cones, operator and trace
//! norms, quotient norms, and norm-preserving extensions of linear
//! functionals on `R^n` / `C^n`. Every numeric result is either exact
//! (closed form) or reported as a [`CertifiedValue`] interval with an
//! explicit exactness flag.
//!
//! Module map:
//!
//! * [`spaces`] — p-norms, inner products, and the classical inequality
//!   battery (Young, Hölder, Minkowski, norm comparisons, ball convexity).
//! * [`duality`] — dual norms, norming functionals, real/complex
//!   functional correspondence.
//! * [`convexgeo`] — projections onto closed convex sets, point and cone
//!   separation, supporting hyperplanes.
//! * [`cones`] — dual cones: the nonnegative orthant, finitely generated
//!   cones, and the PSD cone under the trace pairing.
//! * [`opnorm`] — operator norms with exact rules (ℓ1 source, ℓ∞ target,
//!   spectral) and certified estimates elsewhere.
//! * [`tracenorm`] — trace norms via rank-one decompositions.
//! * [`quotient`] — quotient norms and norm-preserving functional
//!   extension.
//! * [`vecfun`] — mixed (p, V)-norms on vector-valued functions over a
//!   finite set and operator lifting.
//! * [`selftest`] — a deterministic runtime battery exercising every
//!   invariant the modules promise.
//!
//! All operations are pure functions of their inputs; randomized
//! operations take an explicit seed and are reproducible.

// float-valued exponents are matched through guards rather than
// literal float patterns
#![allow(clippy::redundant_guards)]

pub mod certified;
pub mod cones;
pub mod convexgeo;
pub mod duality;
mod error;
pub mod matrix;
pub mod opnorm;
pub mod quotient;
pub mod realvec;
pub mod sampling;
pub mod scalar;
pub mod selftest;
pub mod spaces;
pub mod tolerance;
pub mod tracenorm;
pub mod vecfun;
pub mod vector;

pub use certified::CertifiedValue;
pub use error::{Error, Result};
pub use scalar::{Mode, Scalar};
pub use spaces::{Exponent, NormSpec};
pub use tolerance::ToleranceProfile;
pub use vector::Vector;
