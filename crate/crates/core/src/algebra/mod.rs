//! Exact and certified-approximate algebra over `ℤ[x]` and `ℚ[α]`.

mod constants;
mod factor;
mod matrix;
mod number_field;
mod poly;
mod roots;

pub use constants::{eigenvalues, h_of_operator, h_of_poly, Certified};
pub use factor::{factor_integer_poly, MAX_FACTOR_DEGREE};
pub use matrix::{char_poly, companion_operator, RationalMatrix, ScaledPolynomial};
pub use number_field::{alpha, reduce_to_number_field, NumberFieldVector, Reduction};
pub use poly::IntPolynomial;
pub use roots::{max_residual, roots, ComplexRoot, RootFinder};

