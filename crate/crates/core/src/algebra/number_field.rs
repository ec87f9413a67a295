use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::IntPolynomial;
use crate::rational::to_compact_string;
use crate::{Error, Result};

/// An element of `ℚ[α] = ℚ[x]/(f)` as coordinates in the basis `1, α, …, α^{d-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldVector {
    coords: Vec<BigRational>,
    field: Arc<IntPolynomial>,
}

impl NumberFieldVector {
    pub fn new(coords: Vec<BigRational>, field: Arc<IntPolynomial>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::WrongDimension {
                expected: field.degree(),
                found: coords.len(),
            });
        }
        Ok(Self { coords, field })
    }

    pub fn from_i64s(coords: &[i64], field: Arc<IntPolynomial>) -> Result<Self> {
        Self::new(
            coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            field,
        )
    }

    pub fn zero(field: Arc<IntPolynomial>) -> Self {
        Self {
            coords: vec![BigRational::zero(); field.degree()],
            field,
        }
    }

    pub fn from_rational(q: BigRational, field: Arc<IntPolynomial>) -> Self {
        let mut v = Self::zero(field);
        v.coords[0] = q;
        v
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn field(&self) -> &Arc<IntPolynomial> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
            field: self.field.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
            field: self.field.clone(),
        })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * s).collect(),
            field: self.field.clone(),
        }
    }

    /// Multiplication by `α`: shift up one degree and reduce `α^d` via `f(α) = 0`.
    pub fn mul_alpha(&self) -> Self {
        let d = self.coords.len();
        let top = self.coords[d - 1].clone();
        let mut out = vec![BigRational::zero(); d];
        out[1..d].clone_from_slice(&self.coords[..d - 1]);
        if !top.is_zero() {
            let lead = BigRational::from_integer(self.field.leading().clone());
            for (i, fi) in self.field.coeffs()[..d].iter().enumerate() {
                out[i] -= &top * BigRational::from_integer(fi.clone()) / &lead;
            }
        }
        Self {
            coords: out,
            field: self.field.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        // Horner in α over the coordinates of `other`.
        let mut acc = Self::zero(self.field.clone());
        for c in other.coords.iter().rev() {
            acc = acc.mul_alpha();
            let term = self.scale(c);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl PartialOrd for NumberFieldVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NumberFieldVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords
            .cmp(&other.coords)
            .then_with(|| self.field.to_string().cmp(&other.field.to_string()))
    }
}

impl fmt::Display for NumberFieldVector {
    /// Comma-separated coordinates, e.g. `1,1/2` for `1 + α/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(to_compact_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// A `ℚ[α]`-linear functional with integer weights and its image of a set of tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub weights: Vec<BigInt>,
    pub height: u64,
    pub attempts: usize,
    pub image: Vec<NumberFieldVector>,
}

const INITIAL_HEIGHT: u64 = 10;
const MAX_ATTEMPTS: usize = 64;

/// Maps a set of `k`-tuples over `ℚ[α]` into `ℚ[α]` by a linear functional
/// `φ(t) = Σ w_i t_i` that is injective on the set. Weights are nonzero integers
/// of absolute value at most the current height, drawn from a seeded generator;
/// every collision doubles the height. Since `φ` commutes with multiplication by
/// `α`, the image `B` satisfies `B + αB = φ(A + αA)`.
pub fn reduce_to_number_field(tuples: &[Vec<NumberFieldVector>], seed: u64) -> Result<Reduction> {
    let Some(first) = tuples.first() else {
        return Err(Error::Precondition("the set of tuples must be nonempty".into()));
    };
    let k = first.len();
    if k == 0 {
        return Err(Error::Precondition("tuples must have at least one component".into()));
    }
    let field = first[0].field().clone();
    for t in tuples {
        if t.len() != k {
            return Err(Error::WrongDimension { expected: k, found: t.len() });
        }
        if t.iter().any(|x| !x.same_field(&first[0])) {
            return Err(Error::MixedFields);
        }
    }
    let distinct: HashSet<&Vec<NumberFieldVector>> = tuples.iter().collect();
    if distinct.len() != tuples.len() {
        return Err(Error::Precondition("tuples must be distinct".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut height = INITIAL_HEIGHT;
    for attempt in 1..=MAX_ATTEMPTS {
        let h = height as i64;
        let weights: Vec<BigInt> = (0..k)
            .map(|_| {
                let mag = rng.random_range(1..=h);
                BigInt::from(if rng.random_bool(0.5) { mag } else { -mag })
            })
            .collect();
        let image = apply_functional(tuples, &weights, &field)?;
        let mut sorted = image.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() == tuples.len() {
            return Ok(Reduction { weights, height, attempts: attempt, image });
        }
        height = height.saturating_mul(2);
    }
    Err(Error::IterationCap(format!(
        "no injective functional found after {MAX_ATTEMPTS} attempts (height {height})"
    )))
}

fn apply_functional(
    tuples: &[Vec<NumberFieldVector>],
    weights: &[BigInt],
    field: &Arc<IntPolynomial>,
) -> Result<Vec<NumberFieldVector>> {
    tuples
        .iter()
        .map(|t| {
            t.iter().zip(weights).try_fold(
                NumberFieldVector::zero(field.clone()),
                |acc, (x, w)| acc.add(&x.scale(&BigRational::from_integer(w.clone()))),
            )
        })
        .collect()
}

/// `α` itself as a field element.
pub fn alpha(field: Arc<IntPolynomial>) -> NumberFieldVector {
    let mut v = NumberFieldVector::from_rational(BigRational::one(), field);
    v = v.mul_alpha();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> Arc<IntPolynomial> {
        Arc::new("x^2-2".parse().unwrap())
    }

    fn nf(c: &[i64], f: &Arc<IntPolynomial>) -> NumberFieldVector {
        NumberFieldVector::from_i64s(c, f.clone()).unwrap()
    }

    #[test]
    fn alpha_squared_is_two() {
        let f = sqrt2();
        let a = alpha(f.clone());
        assert_eq!(a, nf(&[0, 1], &f));
        assert_eq!(a.mul_alpha(), nf(&[2, 0], &f));
        assert_eq!(a.mul(&a).unwrap(), nf(&[2, 0], &f));
    }

    #[test]
    fn non_monic_reduction() {
        // 2α² = 1, so α·α = 1/2.
        let f: Arc<IntPolynomial> = Arc::new("2x^2-1".parse().unwrap());
        let a = alpha(f.clone());
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coords()[0], BigRational::new(1.into(), 2.into()));
        assert!(sq.coords()[1].is_zero());
    }

    #[test]
    fn multiplication_is_commutative_in_cubic_field() {
        let f: Arc<IntPolynomial> = Arc::new("x^3-x-1".parse().unwrap());
        let u = nf(&[1, -2, 3], &f);
        let v = nf(&[0, 5, -1], &f);
        assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap());
        // α³ = α + 1
        let a = alpha(f.clone());
        assert_eq!(a.mul(&a).unwrap().mul(&a).unwrap(), nf(&[1, 1, 0], &f));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f = sqrt2();
        let g: Arc<IntPolynomial> = Arc::new("x^2-3".parse().unwrap());
        assert_eq!(nf(&[1, 0], &f).add(&nf(&[1, 0], &g)), Err(Error::MixedFields));
    }

    #[test]
    fn single_component_is_a_nonzero_scaling() {
        let f = sqrt2();
        let a: Vec<Vec<NumberFieldVector>> = vec![vec![nf(&[0, 0], &f)], vec![nf(&[1, 2], &f)], vec![nf(&[3, -1], &f)]];
        for seed in 0..5 {
            let r = reduce_to_number_field(&a, seed).unwrap();
            assert_eq!(r.image.len(), 3);
            let w = BigRational::from_integer(r.weights[0].clone());
            assert!(!w.is_zero());
            for (t, b) in a.iter().zip(&r.image) {
                assert_eq!(t[0].scale(&w), *b);
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let f = sqrt2();
        let a = vec![vec![nf(&[1, 0], &f), nf(&[0, 0], &f)], vec![nf(&[0, 0], &f), nf(&[1, 0], &f)]];
        assert_eq!(reduce_to_number_field(&a, 7).unwrap(), reduce_to_number_field(&a, 7).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let f = sqrt2();
        assert!(reduce_to_number_field(&[], 0).is_err());
        let dup = vec![vec![nf(&[1, 0], &f)], vec![nf(&[1, 0], &f)]];
        assert!(reduce_to_number_field(&dup, 0).is_err());
    }
}
