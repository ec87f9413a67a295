use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::matrix::RationalMatrix;
use super::poly::IntPolynomial;
use super::roots::{ComplexRoot, RootFinder};
use crate::{Error, Result};

/// A real value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

impl Certified {
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.error
    }
}

/// `∏ (1 + |r_i|)` with the error propagated from the isolation radii.
fn product_one_plus_abs(roots: &[ComplexRoot]) -> Certified {
    let mut value = 1.0;
    let mut upper = 1.0;
    for r in roots {
        let a = r.abs();
        value *= 1.0 + a;
        upper *= 1.0 + a + r.isolation_radius;
    }
    // Rounding of the f64 product itself: a few ulps per factor.
    let rounding = 4.0 * (roots.len() as f64 + 1.0) * f64::EPSILON * upper;
    Certified { value, error: (upper - value) + rounding }
}

/// `H(f) = ∏ (|a_i| + |b_i|)` over a complex factorization `f = ∏ (a_i x + b_i)`,
/// evaluated as `|lead f| · ∏ (1 + |r_i|)` over the roots `r_i`.
pub fn h_of_poly(f: &IntPolynomial, tol: f64) -> Result<Certified> {
    if f.degree() == 0 {
        return Err(Error::Precondition("H(f) needs degree >= 1".into()));
    }
    if !f.is_primitive() {
        return Err(Error::Precondition(format!("{f} is not primitive")));
    }
    let roots = RootFinder::default().roots(f, tol)?;
    let lead = f.leading().abs().to_f64().unwrap_or(f64::INFINITY);
    let p = product_one_plus_abs(&roots);
    Ok(Certified {
        value: lead * p.value,
        error: lead * p.error,
    })
}

/// `H(T) = ∏ (1 + |λ_i|)` over the eigenvalues of `m` with algebraic multiplicity.
pub fn h_of_operator(m: &RationalMatrix, tol: f64) -> Result<Certified> {
    if m.dim() == 0 {
        return Ok(Certified { value: 1.0, error: 0.0 });
    }
    let cp = m.char_poly_monic();
    let roots = RootFinder::default().roots_rational(&cp, tol)?;
    Ok(product_one_plus_abs(&roots))
}

/// Eigenvalues of `m` (roots of its characteristic polynomial).
pub fn eigenvalues(m: &RationalMatrix, tol: f64) -> Result<Vec<ComplexRoot>> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    RootFinder::default().roots_rational(&m.char_poly_monic(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::companion_operator;
    use num_traits::Signed;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    const SILVER_SQ: f64 = 5.828_427_124_746_19; // 3 + 2√2

    #[test]
    fn h_values() {
        let h = h_of_poly(&p("x^2-2"), 1e-12).unwrap();
        assert!((h.value - SILVER_SQ).abs() < 1e-12);
        assert!(h.error < 1e-10);
        assert_eq!(h_of_poly(&p("x-3"), 1e-12).unwrap().value, 4.0);
        assert!((h_of_poly(&p("3x-2"), 1e-12).unwrap().value - 5.0).abs() < 1e-12);
        assert!((h_of_poly(&p("x^2+1"), 1e-12).unwrap().value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn h_of_operator_examples() {
        let t: RationalMatrix = "0,2;1,0".parse().unwrap();
        assert!((h_of_operator(&t, 1e-12).unwrap().value - SILVER_SQ).abs() < 1e-12);
        assert_eq!(h_of_operator(&RationalMatrix::identity(2), 1e-12).unwrap().value, 4.0);
        let rot: RationalMatrix = "0,-1;1,0".parse().unwrap();
        let h = h_of_operator(&rot, 1e-12).unwrap();
        assert!((h.value - 4.0).abs() < 1e-12);
        let from_roots = h_of_poly(&p("x^2+1"), 1e-12).unwrap();
        assert!((h.value - from_roots.value).abs() < 1e-12);
    }

    #[test]
    fn h_requires_primitive() {
        assert!(h_of_poly(&p("2x-4"), 1e-9).is_err());
        assert!(h_of_poly(&p("7"), 1e-9).is_err());
    }

    #[test]
    fn poly_identity_against_companion() {
        for s in ["x^2-2", "3x-2", "2x^2-1", "x^3-x-1", "5x^3+2x-3", "4x^4-x^2+x+9"] {
            let f = p(s);
            let hf = h_of_poly(&f, 1e-12).unwrap();
            let ht = h_of_operator(&companion_operator(&f).unwrap(), 1e-12).unwrap();
            let c = f.leading().abs().to_f64().unwrap();
            assert!((hf.value - c * ht.value).abs() <= hf.error + c * ht.error + 1e-9, "{s}");
        }
    }
}
