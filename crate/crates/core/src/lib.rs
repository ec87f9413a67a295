//! Exact computation of dilated sumsets `A + λA` for algebraic `λ`.
//!
//! A number `a_0 + a_1 α + … + a_{d-1} α^{d-1}` in `ℚ[α]` is identified with its
//! coefficient vector in `ℤ^d`, and multiplication by `α` becomes the companion
//! operator of the minimal polynomial. Everything else is built on that model:
//!
//! - [`algebra`]: integer polynomials, certified complex roots, companion
//!   operators, the constants `H(f)` and `H(T)`, small factorizations and the
//!   reduction of vector-valued sets to `ℚ[α]`.
//! - [`sumset`]: the lattice-set engine (`A + B`, `A + TA`, projection counts)
//!   and checkers for the Plünnecke–Ruzsa and Cauchy–Davenport inequalities.
//! - [`extremal`]: near-extremal constructions, proper progressions and
//!   exhaustive / local search for small minimizers of `|A + λA|`.
//! - [`continuous`]: exact rational convex polygons, Minkowski sums and the
//!   planar bound `area(K + TK) ≥ H(T)·area(K)`.

pub mod algebra;
pub mod continuous;
mod error;
pub mod extremal;
pub mod rational;
pub mod sumset;

pub use error::{Error, Result};
