//! Linear matroids from exact-rational vector configurations, their base
//! polytopes, cone-volume weight vectors, and the volume decomposition
//! functionals `X_k` evaluated by independent routes (brute force, subspace
//! recursion, closed forms) together with optimizers that locate the extremal
//! weight vectors over the base polytope.
//!
//! The crate is organized bottom-up:
//!
//! - [`scalar`]: exact rationals, rational parsing, and the [`scalar::Scalar`]
//!   abstraction that lets every evaluator run in `f64` or exact mode.
//! - [`linalg`]: exact Gaussian elimination (rank, span membership, affine
//!   dimension).
//! - [`matroid`]: the linear matroid of a configuration — rank, closure,
//!   flats, bases, circuits, connected components.
//! - [`polytope`]: the matroid base polytope in V- and H-representation,
//!   membership, relative interior, edges, boundary classification.
//! - [`concentration`]: weight vectors as discrete even measures and the
//!   subspace concentration condition.
//! - [`functionals`]: the `X_k` evaluators and the decomposition identity.
//! - [`maximize`]: greedy linear oracle, edge ascent, Frank-Wolfe, projected
//!   gradient, exhaustive vertex search.
//! - [`reproduce`]: named desk-scale experiment suites.

pub mod concentration;
pub mod functionals;
pub mod linalg;
pub mod matroid;
pub mod maximize;
pub mod polytope;
pub mod reproduce;
pub mod scalar;

pub use matroid::{IndexSet, LinearMatroid, VectorConfiguration};
pub use scalar::{parse_rational, Rational, Scalar};
