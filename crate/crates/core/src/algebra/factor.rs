//! Factorization of small integer polynomials by root clustering.
//!
//! Candidate factors are discovered numerically: for each subset of the
//! remaining roots, the monic polynomial with exactly those roots is scaled by
//! each divisor of the leading coefficient and rounded to integers. A candidate
//! is accepted only after exact division over `ℤ`, so the returned product is
//! always exact; subsets are tried smallest first, which makes every accepted
//! factor minimal among those visible at the working precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::IntPolynomial;
use super::roots::RootFinder;
use crate::{Error, Result};

pub const MAX_FACTOR_DEGREE: usize = 8;

/// Near-integrality that counts as strong numeric evidence of a factor.
const STRONG_EVIDENCE: f64 = 1e-6;

/// Irreducible primitive factors of a primitive `f` (degree ≤ 8) whose product
/// equals `f` up to sign. Factors are listed by increasing degree.
pub fn factor_integer_poly(f: &IntPolynomial, tol: f64) -> Result<Vec<IntPolynomial>> {
    if !f.is_primitive() {
        return Err(Error::Precondition(format!("{f} is not primitive")));
    }
    if f.degree() > MAX_FACTOR_DEGREE {
        return Err(Error::Precondition(format!(
            "factorization is limited to degree {MAX_FACTOR_DEGREE}, got {}",
            f.degree()
        )));
    }
    let mut remaining = f.primitive_part();
    let mut factors = Vec::new();
    while remaining.degree() > 0 {
        let factor = smallest_factor(&remaining, tol)?;
        remaining = remaining
            .exact_div(&factor)
            .expect("factor was certified by exact division")
            .primitive_part();
        factors.push(factor);
    }
    factors.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    Ok(factors)
}

fn smallest_factor(f: &IntPolynomial, tol: f64) -> Result<IntPolynomial> {
    let d = f.degree();
    if d == 1 {
        return Ok(f.clone());
    }
    let roots: Vec<Complex64> = RootFinder::default()
        .roots(f, tol)?
        .iter()
        .map(|r| r.to_complex())
        .collect();
    let leads = divisors(f.leading());
    for size in 1..d {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let monic = monic_from_roots(subset.iter().map(|&i| roots[i]));
            if monic.iter().all(|c| c.im.abs() <= 1e-6 * (1.0 + c.re.abs())) {
                for b in &leads {
                    let bf = b.to_f64().unwrap_or(f64::INFINITY);
                    let scaled: Vec<f64> = monic.iter().map(|c| c.re * bf).collect();
                    let near = scaled
                        .iter()
                        .map(|x| (x - x.round()).abs() / (1.0 + x.abs()))
                        .fold(0.0, f64::max);
                    if near > 0.25 {
                        continue;
                    }
                    let coeffs: Vec<BigInt> = scaled
                        .iter()
                        .map(|x| BigInt::from(x.round() as i128))
                        .collect();
                    let Ok(candidate) = IntPolynomial::new(coeffs) else { continue };
                    let candidate = candidate.primitive_part();
                    if candidate.degree() == size && f.exact_div(&candidate).is_some() {
                        return Ok(candidate);
                    }
                    if near < STRONG_EVIDENCE && candidate.degree() == size {
                        return Err(Error::FactorizationUnverified(format!(
                            "candidate {candidate} of {f} is numerically a factor but fails exact division"
                        )));
                    }
                }
            }
            if !next_combination(&mut subset, d) {
                break;
            }
        }
    }
    Ok(f.clone())
}

fn monic_from_roots(roots: impl Iterator<Item = Complex64>) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for r in roots {
        let mut next = vec![Complex64::zero(); c.len() + 1];
        for (k, a) in c.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * r;
        }
        c = next;
    }
    c
}

/// Positive divisors of `|n|` in increasing order (trial division; small `n`).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= n {
        if (&n % &k).is_zero() {
            let other = &n / &k;
            if other != k {
                large.push(other);
            }
            small.push(k.clone());
        }
        k += 1;
        if k > BigInt::from(1_000_000) {
            // Desk-scale guard: beyond this only ±1 and ±n are tried.
            small.truncate(1);
            large = vec![n.clone()];
            break;
        }
    }
    small.extend(large.into_iter().rev());
    small
}

/// Advances `subset` to the next `k`-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn product(fs: &[IntPolynomial]) -> IntPolynomial {
        fs.iter().fold(p("1"), |acc, g| acc.mul(g))
    }

    #[test]
    fn examples() {
        let f = p("x^2-2").mul(&p("x-3"));
        assert_eq!(factor_integer_poly(&f, 1e-10).unwrap(), vec![p("x-3"), p("x^2-2")]);
        assert_eq!(factor_integer_poly(&p("x^2-2"), 1e-10).unwrap(), vec![p("x^2-2")]);
        assert_eq!(factor_integer_poly(&p("x^2-1"), 1e-10).unwrap(), vec![p("x+1"), p("x-1")]);
    }

    #[test]
    fn non_monic_and_repeated_factors() {
        let f = p("2x-1").mul(&p("3x^2+1")).mul(&p("x+1")).mul(&p("x+1"));
        let fs = factor_integer_poly(&f, 1e-10).unwrap();
        assert_eq!(product(&fs), f);
        assert_eq!(fs.len(), 4);
        assert!(fs.iter().all(|g| g.is_primitive()));
    }

    #[test]
    fn degree_eight_products() {
        let f = p("x^3-x-1").mul(&p("x^2+x+1")).mul(&p("x^3-2"));
        let fs = factor_integer_poly(&f, 1e-10).unwrap();
        assert_eq!(fs, vec![p("x^2+x+1"), p("x^3-2"), p("x^3-x-1")]);
        // x^4+1 is irreducible over ℚ although it splits into real quadratics.
        assert_eq!(factor_integer_poly(&p("x^4+1"), 1e-10).unwrap(), vec![p("x^4+1")]);
        // x^8 - 1 = (x-1)(x+1)(x^2+1)(x^4+1)
        assert_eq!(factor_integer_poly(&p("x^8-1"), 1e-10).unwrap().len(), 4);
    }

    #[test]
    fn preconditions() {
        assert!(factor_integer_poly(&p("2x^2-4"), 1e-10).is_err());
        assert!(factor_integer_poly(&p("x^9-1"), 1e-10).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut s = vec![0, 1];
        let mut seen = vec![s.clone()];
        while next_combination(&mut s, 4) {
            seen.push(s.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
