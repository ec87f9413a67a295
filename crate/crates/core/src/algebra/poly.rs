use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A nonzero polynomial with integer coefficients, stored in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Builds a polynomial from ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::Precondition("the zero polynomial is not allowed".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The polynomial `x - r`.
    pub fn linear_root(r: i64) -> Self {
        Self::from_i64s(&[-r, 1]).expect("nonzero")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    /// Gcd of all coefficients (always positive).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// The primitive integer polynomial proportional to a nonzero rational one.
    /// Returns `(p, s)` with `q = s·p` and `lead(p) > 0`.
    pub fn from_rational(q: &[BigRational]) -> Result<(Self, BigRational)> {
        let den_lcm = q
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = q
            .iter()
            .map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let p = Self::new(ints)?;
        let prim = p.primitive_part();
        // q = p / den_lcm and p = g·prim, so s = g / den_lcm.
        let g = &p.leading().clone() / prim.leading();
        Ok((prim, BigRational::new(g, den_lcm)))
    }

    /// Exact division over `ℤ`: `Some(q)` iff `self = q·divisor` with `q ∈ ℤ[x]`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = rat_divrem(&self.to_rational(), &divisor.to_rational());
        if !r.is_empty() {
            return None;
        }
        if q.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Self::new(q.into_iter().map(|c| c.to_integer()).collect()).ok()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    f.write_str("x")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Accepts human forms such as `x^2-2`, `3x-2`, `x^3 - x - 1`, `2*x^2+1`.
    fn from_str(s: &str) -> Result<Self> {
        Parser { s: s.as_bytes(), pos: 0 }.parse()
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Some(text.parse().expect("digits"))
    }

    fn parse(mut self) -> Result<IntPolynomial> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let Some(c) = self.peek() else {
                if first {
                    return Err(self.err("empty polynomial"));
                }
                break;
            };
            let mut sign = BigInt::one();
            if c == b'+' || c == b'-' {
                if c == b'-' {
                    sign = -sign;
                }
                self.pos += 1;
            } else if !first {
                return Err(self.err(format!("expected '+' or '-', found {:?}", c as char)));
            }
            first = false;
            let coef = self.digits();
            if let Some(b'.' | b'/') = self.peek() {
                return Err(self.err("non-integer coefficient"));
            }
            if self.peek() == Some(b'*') {
                if coef.is_none() {
                    return Err(self.err("'*' without a coefficient"));
                }
                self.pos += 1;
                if !matches!(self.peek(), Some(b'x' | b'X')) {
                    return Err(self.err("expected 'x' after '*'"));
                }
            }
            let exp = match self.peek() {
                Some(b'x' | b'X') => {
                    self.pos += 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.digits().ok_or_else(|| self.err("expected exponent"))?;
                        usize::try_from(e).map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    }
                }
                _ => {
                    if coef.is_none() {
                        return Err(match self.peek() {
                            Some(ch) => self.err(format!("unexpected character {:?}", ch as char)),
                            None => self.err("dangling sign"),
                        });
                    }
                    0
                }
            };
            if exp > 4096 {
                return Err(self.err("exponent too large"));
            }
            let value = sign * coef.unwrap_or_else(BigInt::one);
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += value;
        }
        IntPolynomial::new(coeffs).map_err(|_| Error::Parse {
            position: 0,
            message: "polynomial is identically zero".into(),
        })
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

// Dense rational polynomial helpers (ascending, trimmed: no trailing zeros,
// the zero polynomial is the empty vector).

pub(crate) fn rat_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn rat_divrem(
    num: &[BigRational],
    den: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let den = rat_trim(den.to_vec());
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut rem = rat_trim(num.to_vec());
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead = den.last().unwrap().clone();
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &lead;
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] -= &factor * d;
        }
        quot[shift] = factor;
        rem.pop();
        rem = rat_trim(rem);
    }
    (rat_trim(quot), rem)
}

pub(crate) fn rat_monic(p: &[BigRational]) -> Vec<BigRational> {
    let lead = p.last().expect("nonzero").clone();
    p.iter().map(|c| c / &lead).collect()
}

pub(crate) fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = rat_trim(a.to_vec());
    let mut b = rat_trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = rat_divrem(&a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        rat_monic(&a)
    }
}

pub(crate) fn rat_derivative(p: &[BigRational]) -> Vec<BigRational> {
    rat_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

#[cfg(test)]
pub(crate) fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rat_trim(out)
}

/// Yun's square-free decomposition of a nonconstant rational polynomial:
/// `p = lead · ∏ g_k^k` with monic, pairwise coprime, square-free `g_k`.
/// Only factors of positive degree are returned, paired with multiplicity.
pub(crate) fn square_free_decomposition(p: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let p = rat_monic(&rat_trim(p.to_vec()));
    let dp = rat_derivative(&p);
    let mut out = Vec::new();
    if dp.is_empty() {
        return out;
    }
    let a0 = rat_gcd(&p, &dp);
    let mut b = rat_divrem(&p, &a0).0;
    let mut c = rat_divrem(&dp, &a0).0;
    let mut d = rat_sub(&c, &rat_derivative(&b));
    let mut k = 1;
    while b.len() > 1 {
        let a = rat_gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), k));
        }
        b = rat_divrem(&b, &a).0;
        c = rat_divrem(&d, &a).0;
        d = rat_sub(&c, &rat_derivative(&b));
        k += 1;
    }
    out
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    rat_trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn parses_human_forms() {
        assert_eq!(p("x^2-2"), IntPolynomial::from_i64s(&[-2, 0, 1]).unwrap());
        assert_eq!(p("3x-2"), IntPolynomial::from_i64s(&[-2, 3]).unwrap());
        assert_eq!(p("x^3-x-1"), IntPolynomial::from_i64s(&[-1, -1, 0, 1]).unwrap());
        assert_eq!(p(" 2*x^2 + 1 "), IntPolynomial::from_i64s(&[1, 0, 2]).unwrap());
        assert_eq!(p("-x+5"), IntPolynomial::from_i64s(&[5, -1]).unwrap());
        assert_eq!(p("x^2+x^2"), IntPolynomial::from_i64s(&[0, 0, 2]).unwrap());
    }

    #[test]
    fn rejects_non_integer_coefficients_with_position() {
        match "1.5x-2".parse::<IntPolynomial>() {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert!("x/2".parse::<IntPolynomial>().is_err());
        assert!("x^2-x^2".parse::<IntPolynomial>().is_err());
        assert!("".parse::<IntPolynomial>().is_err());
        assert!("x^2 2".parse::<IntPolynomial>().is_err());
        assert!("y+1".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^2-2", "3x-2", "x^3-x-1", "-x^2+2x", "5", "2x^4-x+7"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn content_and_primitive_part() {
        let f = p("-4x^2+6");
        assert_eq!(f.content(), BigInt::from(2));
        assert_eq!(f.primitive_part(), p("2x^2-3"));
        assert!(p("x^2-2").is_primitive());
    }

    #[test]
    fn from_rational_scales_to_primitive() {
        let coeffs = vec![BigRational::new((-1).into(), 2.into()), q(0), BigRational::new(3.into(), 4.into())];
        let (prim, s) = IntPolynomial::from_rational(&coeffs).unwrap();
        assert_eq!(prim, p("3x^2-2"));
        assert_eq!(s, BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn exact_division() {
        let f = p("x^2-2").mul(&p("x-3"));
        assert_eq!(f.exact_div(&p("x-3")), Some(p("x^2-2")));
        assert_eq!(f.exact_div(&p("x-2")), None);
        assert_eq!(p("x^2-1").exact_div(&p("2x-2")), None);
    }

    #[test]
    fn square_free_parts() {
        // (x-1)^2 (x+2)
        let f = p("x-1").mul(&p("x-1")).mul(&p("x+2"));
        let parts = square_free_decomposition(&f.to_rational());
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (vec![q(2), q(1)], 1));
        assert_eq!(parts[1], (vec![q(-1), q(1)], 2));
    }
}
