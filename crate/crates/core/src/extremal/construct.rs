use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{IntPolynomial, RationalMatrix};
use crate::continuous::ConvexPolygon;
use crate::sumset::LatticeSet;
use crate::{Error, Result};

/// The box `{0..N-1} × {0..M-1}`.
pub fn box_construction(n: u64, m: u64) -> Result<LatticeSet> {
    if n == 0 || m == 0 {
        return Err(Error::Precondition("box sides must be at least 1".into()));
    }
    let n = i64::try_from(n).map_err(|_| Error::CoordinateOverflow("box side"))?;
    let m = i64::try_from(m).map_err(|_| Error::CoordinateOverflow("box side"))?;
    let len = (n as u128) * (m as u128) * 2;
    if len > isize::MAX as u128 {
        return Err(Error::CoordinateOverflow("box size"));
    }
    let mut flat = Vec::with_capacity(len as usize);
    for x in 0..n {
        for y in 0..m {
            flat.push(x);
            flat.push(y);
        }
    }
    Ok(LatticeSet::from_sorted_flat(2, flat))
}

/// A convex polytope `{x : a_i·x ≤ b_i}` with a known bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<(Vec<BigRational>, BigRational)>,
    lo: Vec<BigRational>,
    hi: Vec<BigRational>,
}

impl Polytope {
    /// The caller guarantees that `lo..=hi` bounds the halfspaces.
    pub fn new(
        halfspaces: Vec<(Vec<BigRational>, BigRational)>,
        lo: Vec<BigRational>,
        hi: Vec<BigRational>,
    ) -> Result<Self> {
        let dim = lo.len();
        if dim == 0 || hi.len() != dim {
            return Err(Error::Precondition("bounding box corners must share a positive dimension".into()));
        }
        if let Some((a, _)) = halfspaces.iter().find(|(a, _)| a.len() != dim) {
            return Err(Error::WrongDimension { expected: dim, found: a.len() });
        }
        Ok(Polytope { dim, halfspaces, lo, hi })
    }

    pub fn axis_box(lo: Vec<BigRational>, hi: Vec<BigRational>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::Precondition("box corners are not ordered".into()));
        }
        let d = lo.len();
        let mut halfspaces = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![BigRational::zero(); d];
            e[i] = BigRational::from_integer(1.into());
            halfspaces.push((e.iter().map(|v| -v).collect(), -&lo[i]));
            halfspaces.push((e, hi[i].clone()));
        }
        Self::new(halfspaces, lo, hi)
    }

    pub fn unit_cube(dim: usize) -> Result<Self> {
        Self::axis_box(
            vec![BigRational::zero(); dim],
            vec![BigRational::from_integer(1.into()); dim],
        )
    }

    pub fn from_polygon(p: &ConvexPolygon) -> Result<Self> {
        if p.is_degenerate() {
            return Err(Error::Precondition("the body must have positive area".into()));
        }
        let v = p.vertices();
        let n = v.len();
        let halfspaces = (0..n)
            .map(|i| {
                let e = v[(i + 1) % n].sub(&v[i]);
                let b = &e.y * &v[i].x - &e.x * &v[i].y;
                (vec![e.y.clone(), -e.x], b)
            })
            .collect();
        let lo = vec![
            v.iter().map(|p| p.x.clone()).min().expect("vertices"),
            v.iter().map(|p| p.y.clone()).min().expect("vertices"),
        ];
        let hi = vec![
            v.iter().map(|p| p.x.clone()).max().expect("vertices"),
            v.iter().map(|p| p.y.clone()).max().expect("vertices"),
        ];
        Self::new(halfspaces, lo, hi)
    }

    /// `{base + Σ t_j g_j : t ∈ [0,1]^d}` for `d` independent generators.
    pub fn parallelotope(base: Vec<BigRational>, generators: Vec<Vec<BigRational>>) -> Result<Self> {
        let d = base.len();
        if generators.len() != d || generators.iter().any(|g| g.len() != d) {
            return Err(Error::WrongDimension { expected: d, found: generators.len() });
        }
        // Columns of G are the generators.
        let g = RationalMatrix::new(
            d,
            (0..d).flat_map(|i| generators.iter().map(move |gen| gen[i].clone())).collect(),
        )?;
        let inv = g.inverse().ok_or(Error::SingularOperator)?;
        let mut halfspaces = Vec::with_capacity(2 * d);
        for i in 0..d {
            let r = inv.row(i).to_vec();
            let rb: BigRational = r.iter().zip(&base).map(|(a, b)| a * b).sum();
            halfspaces.push((r.iter().map(|v| -v).collect(), -rb.clone()));
            halfspaces.push((r, rb + BigRational::from_integer(1.into())));
        }
        let lo = (0..d)
            .map(|i| &base[i] + generators.iter().map(|gen| gen[i].clone().min(BigRational::zero())).sum::<BigRational>())
            .collect();
        let hi = (0..d)
            .map(|i| &base[i] + generators.iter().map(|gen| gen[i].clone().max(BigRational::zero())).sum::<BigRational>())
            .collect();
        Self::new(halfspaces, lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        self.halfspaces
            .iter()
            .all(|(a, b)| a.iter().zip(x).map(|(u, v)| u * v).sum::<BigRational>() <= *b)
    }

    /// Integer points of `scale·P` whose last coordinate is divisible by `step`.
    pub fn lattice_points(&self, scale: u64, step: u64) -> Result<LatticeSet> {
        let d = self.dim;
        let s = BigRational::from_integer(scale.into());
        let overflow = || Error::CoordinateOverflow("body enumeration");
        // Integer halfspaces a·x ≤ b for the scaled body.
        let mut rows: Vec<(Vec<i128>, i128)> = Vec::with_capacity(self.halfspaces.len());
        for (a, b) in &self.halfspaces {
            let den = a.iter().chain([b]).fold(BigInt::from(1), |l, q| l.lcm(q.denom()));
            let den = BigRational::from_integer(den);
            let ai = a
                .iter()
                .map(|q| (q * &den).to_integer().to_i128())
                .collect::<Option<Vec<i128>>>()
                .ok_or_else(overflow)?;
            let bi = (b * &den * &s).to_integer().to_i128().ok_or_else(overflow)?;
            if ai.iter().any(|v| v.unsigned_abs() > 1 << 62) {
                return Err(overflow());
            }
            rows.push((ai, bi));
        }
        let lo = self
            .lo
            .iter()
            .map(|q| (q * &s).ceil().to_integer().to_i64())
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(overflow)?;
        let hi = self
            .hi
            .iter()
            .map(|q| (q * &s).floor().to_integer().to_i64())
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(overflow)?;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(LatticeSet::empty(d));
        }
        let step = step.max(1) as i64;
        let mut flat = Vec::new();
        let mut prefix = lo.clone();
        loop {
            // Range of the last coordinate given the prefix.
            let (mut l, mut h) = (lo[d - 1] as i128, hi[d - 1] as i128);
            let mut ok = true;
            for (a, b) in &rows {
                let mut rhs = *b;
                for j in 0..d - 1 {
                    rhs = rhs.checked_sub(a[j].checked_mul(prefix[j] as i128).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
                let c = a[d - 1];
                if c > 0 {
                    h = h.min(Integer::div_floor(&rhs, &c));
                } else if c < 0 {
                    l = l.max(Integer::div_ceil(&rhs, &c));
                } else if rhs < 0 {
                    ok = false;
                    break;
                }
            }
            if ok && l <= h {
                let mut x = Integer::div_ceil(&l, &(step as i128)) * step as i128;
                while x <= h {
                    flat.extend_from_slice(&prefix[..d - 1]);
                    flat.push(x as i64);
                    x += step as i128;
                }
            }
            // Advance the prefix odometer.
            let mut k = d - 1;
            loop {
                if k == 0 {
                    return Ok(LatticeSet::from_sorted_flat(d, flat));
                }
                k -= 1;
                if prefix[k] < hi[k] {
                    prefix[k] += 1;
                    break;
                }
                prefix[k] = lo[k];
            }
        }
    }
}

/// Integer coefficient vectors `(a_0, …, a_{d-1})` in `M·K` with
/// `c | a_{d-1}`, where `c` is the leading coefficient of `f`.
pub fn omega_construction(f: &IntPolynomial, m: u64, body: &Polytope) -> Result<LatticeSet> {
    if f.degree() == 0 || !f.is_primitive() {
        return Err(Error::Precondition(format!("{f} must be primitive of degree >= 1")));
    }
    if body.dim() != f.degree() {
        return Err(Error::WrongDimension { expected: f.degree(), found: body.dim() });
    }
    if m == 0 {
        return Err(Error::Precondition("the scale must be at least 1".into()));
    }
    let c = f.leading().abs().to_u64().ok_or(Error::CoordinateOverflow("leading coefficient"))?;
    let set = body.lattice_points(m, c)?;
    if set.is_empty() {
        return Err(Error::EmptyConstruction);
    }
    Ok(set)
}

/// `{v_0 + Σ ℓ_j v_j : 0 ≤ ℓ_j < L_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperAP {
    base: Vec<i64>,
    generators: Vec<Vec<i64>>,
    lengths: Vec<u64>,
}

impl ProperAP {
    pub fn new(base: Vec<i64>, generators: Vec<Vec<i64>>, lengths: Vec<u64>) -> Result<Self> {
        if generators.len() != lengths.len() {
            return Err(Error::SizeMismatch { left: generators.len(), right: lengths.len() });
        }
        if let Some(g) = generators.iter().find(|g| g.len() != base.len()) {
            return Err(Error::WrongDimension { expected: base.len(), found: g.len() });
        }
        if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::Precondition("generators must be nonzero".into()));
        }
        if lengths.contains(&0) {
            return Err(Error::Precondition("lengths must be positive".into()));
        }
        Ok(ProperAP { base, generators, lengths })
    }

    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// `∏ L_j`, the size when every sum is distinct.
    pub fn nominal_size(&self) -> u128 {
        self.lengths.iter().map(|&l| l as u128).product()
    }
}

pub fn enumerate_ap(p: &ProperAP) -> Result<LatticeSet> {
    let d = p.base.len();
    let overflow = || Error::CoordinateOverflow("progression");
    let mut points: Vec<Vec<i64>> = vec![p.base.clone()];
    for (g, &len) in p.generators.iter().zip(&p.lengths) {
        let mut next = Vec::with_capacity(points.len() * len as usize);
        for q in &points {
            let mut cur = q.clone();
            for l in 0..len {
                if l > 0 {
                    for i in 0..d {
                        cur[i] = cur[i].checked_add(g[i]).ok_or_else(overflow)?;
                    }
                }
                next.push(cur.clone());
            }
        }
        points = next;
    }
    LatticeSet::from_points_dedup(d, points)
}

pub fn is_proper(p: &ProperAP) -> Result<bool> {
    Ok(enumerate_ap(p)?.len() as u128 == p.nominal_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::companion_operator;
    use crate::continuous::equality_body;
    use crate::sumset::dilate_sumset;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn boxes() {
        let b = box_construction(2, 2).unwrap();
        assert_eq!(b.to_vecs(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        let t = RationalMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]).unwrap();
        let b = box_construction(7, 5).unwrap();
        assert_eq!(b.len(), 35);
        assert_eq!(dilate_sumset(&b, &t).unwrap().len(), 165);
        assert!(box_construction(0, 3).is_err());
    }

    #[test]
    fn omega_unit_square() {
        let f: IntPolynomial = "x^2-2".parse().unwrap();
        let a = omega_construction(&f, 3, &Polytope::unit_cube(2).unwrap()).unwrap();
        assert_eq!(a.len(), 16);
        assert_eq!(a.bounding_box(), Some((vec![0, 0], vec![3, 3])));
    }

    #[test]
    fn omega_divisibility_filter() {
        let f: IntPolynomial = "2x^2-1".parse().unwrap();
        let body = Polytope::from_polygon(&ConvexPolygon::unit_square()).unwrap();
        let a = omega_construction(&f, 5, &body).unwrap();
        assert_eq!(a.len(), 18);
        assert!(a.iter().all(|p| p[1] % 2 == 0));
        let t = companion_operator(&f).unwrap();
        assert!(dilate_sumset(&a, &t).is_ok());
    }

    #[test]
    fn omega_matches_membership_scan() {
        let t = RationalMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]).unwrap();
        let k = equality_body(&t, 4).unwrap();
        let body = Polytope::from_polygon(&k).unwrap();
        let f: IntPolynomial = "x^2-2".parse().unwrap();
        let a = omega_construction(&f, 7, &body).unwrap();
        let mut naive = Vec::new();
        for x in -40..=40 {
            for y in -40..=40 {
                if body.contains(&[q(x) / q(7), q(y) / q(7)]) {
                    naive.push(vec![x, y]);
                }
            }
        }
        assert_eq!(a.to_vecs(), naive);
    }

    #[test]
    fn omega_empty() {
        let f: IntPolynomial = "x^2-2".parse().unwrap();
        let half = BigRational::new(1.into(), 3.into());
        let body = Polytope::axis_box(vec![half.clone(), half.clone()], vec![half.clone() * q(2), half * q(2)]).unwrap();
        assert_eq!(omega_construction(&f, 1, &body), Err(Error::EmptyConstruction));
    }

    #[test]
    fn parallelotope_points() {
        let p = Polytope::parallelotope(vec![q(0), q(0)], vec![vec![q(2), q(1)], vec![q(-1), q(1)]]).unwrap();
        let pts = p.lattice_points(1, 1).unwrap();
        let want = vec![vec![-1, 1], vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![2, 1]];
        assert_eq!(pts.to_vecs(), want);
    }

    #[test]
    fn progressions() {
        let ap = ProperAP::new(vec![0, 0], vec![vec![1, 0]], vec![5]).unwrap();
        assert_eq!(enumerate_ap(&ap).unwrap().len(), 5);
        assert!(is_proper(&ap).unwrap());
        let ap = ProperAP::new(vec![0, 0], vec![vec![1, 0], vec![2, 0]], vec![2, 2]).unwrap();
        assert_eq!(enumerate_ap(&ap).unwrap().len(), 4);
        assert!(is_proper(&ap).unwrap());
        let ap = ProperAP::new(vec![0, 0], vec![vec![1, 0], vec![2, 0]], vec![3, 2]).unwrap();
        assert_eq!(enumerate_ap(&ap).unwrap().len(), 5);
        assert!(!is_proper(&ap).unwrap());
        let ap = ProperAP::new(vec![0, 0], vec![vec![1, 0], vec![0, 1]], vec![3, 3]).unwrap();
        assert_eq!(enumerate_ap(&ap).unwrap().len(), 9);
        assert!(is_proper(&ap).unwrap());
        assert!(ProperAP::new(vec![0], vec![vec![0]], vec![2]).is_err());
        assert!(ProperAP::new(vec![0], vec![vec![1]], vec![0]).is_err());
    }
}
