//! Exact sumsets of lattice sets.
//!
//! Two interchangeable back ends compute `A + B`:
//!
//! - a hashing path that visits all `|A|·|B|` pairs, and
//! - a dense path that flattens the bounding box of `A + B` into one index
//!   range (mixed radix, so no index wraps) and reads the support of the
//!   indicator convolution off a complex FFT.
//!
//! The dense path is used only when an a-priori rounding bound keeps every
//! convolution value within 1/4 of an integer, and its output is checked
//! against that bound again; otherwise the hashing path runs. Both return the
//! same canonical `LatticeSet`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustfft::FftPlanner;

use super::lattice::LatticeSet;
use crate::algebra::RationalMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumsetStrategy {
    Auto,
    Hash,
    Dense,
}

/// Pair counts up to this are always hashed.
const HASH_PAIR_LIMIT: u128 = 1 << 22;
/// Largest FFT length the dense path will allocate.
const DENSE_MAX_LEN: u64 = 1 << 25;

/// `A + B = {a + b}`.
pub fn sumset(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    sumset_with(a, b, SumsetStrategy::Auto)
}

pub fn sumset_with(a: &LatticeSet, b: &LatticeSet, strategy: SumsetStrategy) -> Result<LatticeSet> {
    if a.dim() != b.dim() {
        return Err(Error::WrongDimension { expected: a.dim(), found: b.dim() });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(LatticeSet::empty(a.dim()));
    }
    let pairs = a.len() as u128 * b.len() as u128;
    let use_dense = match strategy {
        SumsetStrategy::Hash => false,
        SumsetStrategy::Dense => true,
        SumsetStrategy::Auto => {
            pairs > HASH_PAIR_LIMIT
                && dense_len(a, b).is_some_and(|n| (n as u128) <= pairs.saturating_mul(4))
        }
    };
    if use_dense {
        if let Some(s) = dense_sumset(a, b) {
            return Ok(s);
        }
    }
    hash_sumset(a, b)
}

fn hash_sumset(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    match a.dim() {
        1 => hash_sumset_fixed::<1>(a, b),
        2 => hash_sumset_fixed::<2>(a, b),
        3 => hash_sumset_fixed::<3>(a, b),
        4 => hash_sumset_fixed::<4>(a, b),
        d => {
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            for p in a.iter() {
                for q in b.iter() {
                    let s = p
                        .iter()
                        .zip(q)
                        .map(|(x, y)| x.checked_add(*y))
                        .collect::<Option<Vec<i64>>>()
                        .ok_or(Error::CoordinateOverflow("sumset"))?;
                    seen.insert(s);
                }
            }
            LatticeSet::from_points_dedup(d, seen)
        }
    }
}

fn hash_sumset_fixed<const D: usize>(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    let mut seen: HashSet<[i64; D]> = HashSet::with_capacity(a.len().max(b.len()) * 4);
    for p in a.iter() {
        for q in b.iter() {
            let mut s = [0i64; D];
            for k in 0..D {
                s[k] = p[k].checked_add(q[k]).ok_or(Error::CoordinateOverflow("sumset"))?;
            }
            seen.insert(s);
        }
    }
    let mut pts: Vec<[i64; D]> = seen.into_iter().collect();
    pts.sort_unstable();
    Ok(LatticeSet::from_sorted_flat(D, pts.into_iter().flatten().collect()))
}

struct DenseGrid {
    lo: Vec<i64>,
    ext: Vec<u64>,
    stride: Vec<u64>,
    total: u64,
}

fn dense_grid(a: &LatticeSet, b: &LatticeSet) -> Option<DenseGrid> {
    let (lo_a, hi_a) = a.bounding_box()?;
    let (lo_b, hi_b) = b.bounding_box()?;
    let d = a.dim();
    let mut ext = Vec::with_capacity(d);
    let mut lo = Vec::with_capacity(d);
    for k in 0..d {
        let span_a = (hi_a[k] as i128 - lo_a[k] as i128) as u128;
        let span_b = (hi_b[k] as i128 - lo_b[k] as i128) as u128;
        ext.push(u64::try_from(span_a + span_b + 1).ok()?);
        lo.push(lo_a[k].checked_add(lo_b[k])?);
        // Largest sum coordinate must also fit.
        hi_a[k].checked_add(hi_b[k])?;
    }
    let mut stride = vec![1u64; d];
    for k in (0..d.saturating_sub(1)).rev() {
        stride[k] = stride[k + 1].checked_mul(ext[k + 1])?;
    }
    let total = stride[0].checked_mul(ext[0])?;
    (total <= DENSE_MAX_LEN).then_some(DenseGrid { lo, ext, stride, total })
}

fn dense_len(a: &LatticeSet, b: &LatticeSet) -> Option<u64> {
    let g = dense_grid(a, b)?;
    let n = g.total.next_power_of_two();
    (n <= DENSE_MAX_LEN && dense_error_bound(a.len(), b.len(), n) < 0.25).then_some(n)
}

/// Conservative max-norm error of an FFT convolution of 0/1 vectors.
fn dense_error_bound(na: usize, nb: usize, n: u64) -> f64 {
    let log_n = (n as f64).log2().max(1.0);
    10.0 * (log_n + 1.0) * f64::EPSILON * ((na as f64) * (nb as f64)).sqrt()
}

fn dense_sumset(a: &LatticeSet, b: &LatticeSet) -> Option<LatticeSet> {
    let grid = dense_grid(a, b)?;
    let n = grid.total.next_power_of_two();
    if n > DENSE_MAX_LEN || dense_error_bound(a.len(), b.len(), n) >= 0.25 {
        return None;
    }
    let n = n as usize;
    let d = a.dim();
    let (lo_a, _) = a.bounding_box()?;
    let (lo_b, _) = b.bounding_box()?;
    let index = |p: &[i64], lo: &[i64]| -> usize {
        (0..d)
            .map(|k| (p[k] - lo[k]) as u64 * grid.stride[k])
            .sum::<u64>() as usize
    };

    // Pack both indicators into one complex signal: z = a + i·b.
    let mut buf = vec![Complex64::zero(); n];
    for p in a.iter() {
        buf[index(p, &lo_a)].re = 1.0;
    }
    for q in b.iter() {
        buf[index(q, &lo_b)].im = 1.0;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);

    // Split the spectrum into Â and B̂ and multiply, pairing k with n-k.
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    for k in 0..=n / 2 {
        let j = (n - k) % n;
        let (zk, zj) = (buf[k], buf[j]);
        let prod = |x: Complex64, y: Complex64| {
            let fa = (x + y.conj()) * half;
            let fb = (x - y.conj()) * minus_half_i;
            fa * fb
        };
        buf[k] = prod(zk, zj);
        buf[j] = prod(zj, zk);
    }
    planner.plan_fft_inverse(n).process(&mut buf);

    let scale = 1.0 / n as f64;
    let mut flat = Vec::new();
    for (idx, v) in buf[..grid.total as usize].iter().enumerate() {
        let count = v.re * scale;
        let nearest = count.round();
        if (count - nearest).abs() > 0.25 || nearest < 0.0 {
            return None;
        }
        if nearest >= 1.0 {
            let mut rest = idx as u64;
            for k in 0..d {
                let c = rest / grid.stride[k];
                rest %= grid.stride[k];
                debug_assert!(c < grid.ext[k]);
                flat.push(grid.lo[k] + c as i64);
            }
        }
    }
    Some(LatticeSet::from_sorted_flat(d, flat))
}

/// An integral form `N / den` of a rational matrix, with `N` in `i128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralForm {
    pub dim: usize,
    pub numer: Vec<i128>,
    pub denom: i128,
}

impl IntegralForm {
    pub fn of(m: &RationalMatrix) -> Option<Self> {
        let den = m
            .entries()
            .iter()
            .fold(BigInt::from(1), |l, e| l.lcm(e.denom()));
        let denom = den.to_i128()?;
        let numer = m
            .entries()
            .iter()
            .map(|e| (e * BigRational::from_integer(den.clone())).to_integer().to_i128())
            .collect::<Option<Vec<i128>>>()?;
        Some(Self { dim: m.dim(), numer, denom })
    }

    /// `N·p` without dividing by the denominator.
    pub fn apply_numer(&self, p: &[i64], out: &mut [i128]) -> Option<()> {
        let d = self.dim;
        for i in 0..d {
            let mut s: i128 = 0;
            for j in 0..d {
                s = s.checked_add(self.numer[i * d + j].checked_mul(p[j] as i128)?)?;
            }
            out[i] = s;
        }
        Some(())
    }
}

/// `{M·p : p ∈ A}`. Every image must be an integer point. A singular `M` may
/// merge points, so the result can be smaller than `A`.
pub fn apply_operator(m: &RationalMatrix, a: &LatticeSet) -> Result<LatticeSet> {
    if m.dim() != a.dim() {
        return Err(Error::WrongDimension { expected: a.dim(), found: m.dim() });
    }
    let d = a.dim();
    let mut flat = Vec::with_capacity(a.flat().len());
    match IntegralForm::of(m) {
        Some(form) => {
            let mut buf = vec![0i128; d];
            for p in a.iter() {
                form.apply_numer(p, &mut buf)
                    .ok_or(Error::CoordinateOverflow("operator image"))?;
                for &v in &buf {
                    if v % form.denom != 0 {
                        return Err(Error::NonIntegralImage { point: p.to_vec() });
                    }
                    let q = i64::try_from(v / form.denom)
                        .map_err(|_| Error::CoordinateOverflow("operator image"))?;
                    flat.push(q);
                }
            }
        }
        None => {
            for p in a.iter() {
                let v: Vec<BigRational> = p.iter().map(|&c| BigRational::from_integer(c.into())).collect();
                for c in m.mul_vec(&v) {
                    if !c.is_integer() {
                        return Err(Error::NonIntegralImage { point: p.to_vec() });
                    }
                    flat.push(
                        c.to_integer()
                            .to_i64()
                            .ok_or(Error::CoordinateOverflow("operator image"))?,
                    );
                }
            }
        }
    }
    Ok(LatticeSet::from_flat_dedup(d, flat))
}

/// `A + M·A`.
pub fn dilate_sumset(a: &LatticeSet, m: &RationalMatrix) -> Result<LatticeSet> {
    let image = apply_operator(m, a)?;
    sumset(a, &image)
}

pub fn dilate_sumset_with(a: &LatticeSet, m: &RationalMatrix, strategy: SumsetStrategy) -> Result<LatticeSet> {
    let image = apply_operator(m, a)?;
    sumset_with(a, &image, strategy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, pts: &[&[i64]]) -> LatticeSet {
        LatticeSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn t() -> RationalMatrix {
        "0,2;1,0".parse().unwrap()
    }

    fn boxed(n: i64, m: i64) -> LatticeSet {
        let pts = (0..n).flat_map(|x| (0..m).map(move |y| vec![x, y])).collect();
        LatticeSet::new(2, pts).unwrap()
    }

    #[test]
    fn one_dimensional_examples() {
        let a = set(1, &[&[0], &[1], &[2]]);
        assert_eq!(sumset(&a, &a).unwrap().to_vecs(), (0..=4).map(|x| vec![x]).collect::<Vec<_>>());
        let b = set(1, &[&[0], &[10]]);
        let c = set(1, &[&[0], &[1]]);
        assert_eq!(sumset(&c, &b).unwrap().len(), 4);
    }

    #[test]
    fn point_translates() {
        let a = set(2, &[&[3, -2]]);
        let b = set(2, &[&[0, 0], &[1, 5], &[7, 7]]);
        assert_eq!(sumset(&a, &b).unwrap(), b.translate(&[3, -2]).unwrap());
    }

    #[test]
    fn apply_operator_examples() {
        let a = boxed(2, 2);
        let img = apply_operator(&t(), &a).unwrap();
        assert_eq!(img.to_vecs(), vec![vec![0, 0], vec![0, 1], vec![2, 0], vec![2, 1]]);
        assert_eq!(apply_operator(&RationalMatrix::identity(2), &a).unwrap(), a);
        let half: RationalMatrix = "0,1/2;1,0".parse().unwrap();
        let err = apply_operator(&half, &set(2, &[&[0, 0], &[0, 1]])).unwrap_err();
        assert_eq!(err, Error::NonIntegralImage { point: vec![0, 1] });
    }

    #[test]
    fn singular_operator_collapses() {
        let proj: RationalMatrix = "1,0;0,0".parse().unwrap();
        assert_eq!(apply_operator(&proj, &boxed(3, 3)).unwrap().len(), 3);
    }

    #[test]
    fn two_by_two_box() {
        let s = dilate_sumset(&boxed(2, 2), &t()).unwrap();
        assert_eq!(s, boxed(4, 3));
    }

    #[test]
    fn box_closed_form_hash_and_dense_agree() {
        for (n, m) in [(7, 5), (2, 2), (5, 9), (12, 3)] {
            let a = boxed(n, m);
            let want = ((n + 2 * m - 2) * (n + m - 1)) as usize;
            let h = dilate_sumset_with(&a, &t(), SumsetStrategy::Hash).unwrap();
            let d = dilate_sumset_with(&a, &t(), SumsetStrategy::Dense).unwrap();
            assert_eq!(h.len(), want);
            assert_eq!(h, d);
        }
    }

    #[test]
    fn dense_matches_hash_in_three_dimensions() {
        let a = set(3, &[&[0, 0, 0], &[1, 2, -1], &[5, -3, 2], &[2, 2, 2]]);
        let b = set(3, &[&[0, 1, 0], &[-4, 0, 3], &[1, 1, 1]]);
        assert_eq!(
            sumset_with(&a, &b, SumsetStrategy::Dense).unwrap(),
            sumset_with(&a, &b, SumsetStrategy::Hash).unwrap()
        );
    }

    #[test]
    fn overflow_is_reported() {
        let a = set(1, &[&[i64::MAX]]);
        let b = set(1, &[&[1]]);
        assert_eq!(sumset_with(&a, &b, SumsetStrategy::Hash), Err(Error::CoordinateOverflow("sumset")));
        assert_eq!(sumset(&a, &b), Err(Error::CoordinateOverflow("sumset")));
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(sumset(&set(1, &[&[0]]), &set(2, &[&[0, 0]])).is_err());
    }
}
