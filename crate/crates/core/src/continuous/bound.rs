use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::polygon::{apply_linear, minkowski_sum, ConvexPolygon, Point2};
use crate::algebra::{h_of_operator, RationalMatrix};
use crate::rational::to_f64;
use crate::{Error, Result};

const ROOT_TOL: f64 = 1e-13;
const POLYGON_SIDES: usize = 64;
const MAX_PREC: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "area_K", with = "crate::rational::serde_fraction")]
    pub area_k: BigRational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub area_sum: BigRational,
    #[serde(rename = "h_T")]
    pub h_t: f64,
    #[serde(rename = "h_T_error")]
    pub h_t_error: f64,
    pub slack: f64,
    pub holds_within_tol: bool,
}

/// Compares `area(P + MP)` with `H(M)·area(P)`.
pub fn verify_bound(p: &ConvexPolygon, m: &RationalMatrix, tol: f64) -> Result<BoundReport> {
    let image = apply_linear(m, p)?;
    let sum = minkowski_sum(p, &image);
    let h = h_of_operator(m, ROOT_TOL)?;
    let area_k = p.area();
    let area_sum = sum.area();
    let slack = to_f64(&area_sum) - h.value * to_f64(&area_k);
    Ok(BoundReport {
        area_k,
        area_sum,
        h_t: h.value,
        h_t_error: h.error,
        slack,
        holds_within_tol: slack >= -tol,
    })
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// A rational within `10^-prec` of `√r`, taken from the continued fraction
/// expansion. Exact when `r` is a rational square.
pub fn sqrt_approx(r: &BigRational, prec: u32) -> BigRational {
    assert!(!r.is_negative(), "square root of a negative rational");
    if r.is_zero() {
        return BigRational::zero();
    }
    // √(p/q) = √(pq)/q
    let q = r.denom().clone();
    let n = r.numer() * &q;
    let a0 = n.sqrt();
    if &a0 * &a0 == n {
        return BigRational::new(a0, q);
    }
    let target = pow10(prec);
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        m = &d * &a - &m;
        d = (&n - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        // |√n − h/k| < 1/(k·k_next)
        if &q * &k * &k_next > target {
            return BigRational::new(h, k * &q);
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
    }
}

fn round_to(x: f64, prec: u32) -> BigRational {
    let scale = 10f64.powi(prec.min(15) as i32);
    let n = (x * scale).round();
    let num = BigInt::from(n as i64) * pow10(prec.saturating_sub(15));
    BigRational::new(num, pow10(prec))
}

/// A convex body `K` with `area(K + MK)` close to `H(M)·area(K)`.
///
/// Real eigenvalues give the parallelogram on rationalized eigenvectors;
/// complex ones give a 64-gon inscribed in the invariant ellipse. `prec` is
/// the number of decimal digits kept in the approximations.
pub fn equality_body(m: &RationalMatrix, prec: u32) -> Result<ConvexPolygon> {
    if m.dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: m.dim() });
    }
    if prec == 0 || prec > MAX_PREC {
        return Err(Error::Precondition(format!("prec must be in 1..={MAX_PREC}")));
    }
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    if b.is_zero() && c.is_zero() {
        // Diagonal: the axes are invariant.
        return Ok(ConvexPolygon::unit_square());
    }
    let two = BigRational::from_integer(2.into());
    let tr = a + d;
    let disc = &tr * &tr - BigRational::from_integer(4.into()) * m.determinant();
    if disc.is_zero() {
        return Err(Error::DefectiveOperator);
    }
    let zero = BigRational::zero();
    if disc.is_positive() {
        let s = sqrt_approx(&disc, prec);
        let eigvec = |lambda: BigRational| {
            if !b.is_zero() {
                Point2::new(b.clone(), lambda - a)
            } else {
                Point2::new(lambda - d, c.clone())
            }
        };
        let u = eigvec((&tr + &s) / &two);
        let v = eigvec((&tr - &s) / &two);
        let o = Point2::new(zero.clone(), zero);
        return ConvexPolygon::hull(vec![o, u.clone(), u.add(&v), v]);
    }
    // M acts as a rotation-homothety in the basis (re w, im w), w = (b, λ − a).
    let s = sqrt_approx(&(-disc), prec) / &two;
    let u = Point2::new(b.clone(), &tr / &two - a);
    let v = Point2::new(zero, s);
    let pts = (0..POLYGON_SIDES)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / POLYGON_SIDES as f64;
            u.scale(&round_to(t.cos(), prec)).add(&v.scale(&round_to(t.sin(), prec)))
        })
        .collect();
    ConvexPolygon::hull(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    fn sqrt2_op() -> RationalMatrix {
        mat(&[&[0, 2], &[1, 0]])
    }

    #[test]
    fn unit_square_under_sqrt2() {
        let r = verify_bound(&ConvexPolygon::unit_square(), &sqrt2_op(), 1e-9).unwrap();
        assert_eq!(r.area_sum, BigRational::from_integer(6.into()));
        assert!((r.slack - (6.0 - (3.0 + 2.0 * 2f64.sqrt()))).abs() < 1e-9);
        assert!(r.holds_within_tol);
    }

    #[test]
    fn identity_has_zero_slack() {
        let p = ConvexPolygon::hull(vec![
            Point2::from_i64s(0, 0),
            Point2::new(BigRational::new(7.into(), 3.into()), BigRational::one()),
            Point2::from_i64s(1, 5),
        ])
        .unwrap();
        let r = verify_bound(&p, &RationalMatrix::identity(2), 1e-9).unwrap();
        assert_eq!(r.area_sum, p.area() * BigRational::from_integer(4.into()));
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn sqrt_approximations() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(sqrt_approx(&r(9, 4), 5), r(3, 2));
        for prec in 1..12 {
            let s = to_f64(&sqrt_approx(&r(2, 1), prec));
            assert!((s - 2f64.sqrt()).abs() < 10f64.powi(-(prec as i32)));
            let s = to_f64(&sqrt_approx(&r(5, 3), prec));
            assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 10f64.powi(-(prec as i32)));
        }
    }

    #[test]
    fn equality_parallelogram_for_sqrt2() {
        let t = sqrt2_op();
        let mut last = f64::INFINITY;
        for prec in 3..=6 {
            let k = equality_body(&t, prec).unwrap();
            assert_eq!(k.vertices().len(), 4);
            let r = verify_bound(&k, &t, 1e-9).unwrap();
            assert!(r.slack >= 0.0 && r.slack < last, "prec {prec}: {}", r.slack);
            last = r.slack;
        }
        let k = equality_body(&t, 6).unwrap();
        let r = verify_bound(&k, &t, 1e-9).unwrap();
        assert!(r.slack.abs() < 1e-3 * to_f64(&r.area_k));
    }

    #[test]
    fn diagonal_is_exact() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        for prec in [1, 4, 9] {
            let k = equality_body(&m, prec).unwrap();
            let r = verify_bound(&k, &m, 1e-9).unwrap();
            assert_eq!(r.area_sum, k.area() * BigRational::from_integer(12.into()));
        }
        let tri = mat(&[&[2, 0], &[1, 3]]);
        let r = verify_bound(&equality_body(&tri, 3).unwrap(), &tri, 1e-9).unwrap();
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn rotation_homothety() {
        let m = mat(&[&[0, -2], &[2, 0]]);
        let k = equality_body(&m, 6).unwrap();
        let r = verify_bound(&k, &m, 1e-9).unwrap();
        let ratio = to_f64(&r.area_sum) / to_f64(&r.area_k);
        assert!((ratio - 9.0).abs() < 0.09);
        let m = mat(&[&[1, -1], &[1, 1]]);
        let r = verify_bound(&equality_body(&m, 6).unwrap(), &m, 1e-9).unwrap();
        assert!(r.slack.abs() < 1e-2 * to_f64(&r.area_k));
    }

    #[test]
    fn defective_and_scalar() {
        assert_eq!(equality_body(&mat(&[&[1, 1], &[0, 1]]), 4), Err(Error::DefectiveOperator));
        assert_eq!(equality_body(&mat(&[&[3, 0], &[0, 3]]), 4).unwrap(), ConvexPolygon::unit_square());
    }

    #[test]
    fn report_json() {
        let r = verify_bound(&ConvexPolygon::unit_square(), &sqrt2_op(), 1e-9).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["area_K"], "1/1");
        assert_eq!(v["area_sum"], "6/1");
        let back: BoundReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
