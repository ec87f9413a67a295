use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::RationalMatrix;
use crate::rational::{parse_rational, to_compact_string};
use crate::{Error, Result};

/// A point of `ℚ²`. Ordered lexicographically by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point2 {
    #[serde(with = "crate::rational::serde_fraction")]
    pub x: BigRational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub y: BigRational,
}

impl Point2 {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point2 { x, y }
    }

    pub fn from_i64s(x: i64, y: i64) -> Self {
        Point2::new(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &BigRational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn cross(&self, o: &Point2) -> BigRational {
        &self.x * &o.y - &self.y * &o.x
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", to_compact_string(&self.x), to_compact_string(&self.y))
    }
}

/// `(b − a) × (c − a)`: positive for a left turn.
fn turn(a: &Point2, b: &Point2, c: &Point2) -> BigRational {
    b.sub(a).cross(&c.sub(a))
}

/// A convex polygon with exact rational vertices.
///
/// Canonical form: counterclockwise, no three consecutive vertices collinear,
/// lexicographically least vertex first. A degenerate polygon is a segment
/// stored as its two endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
    degenerate: bool,
}

impl ConvexPolygon {
    /// Builds a polygon from vertices listed in convex position, in either
    /// orientation. Collinear intermediate vertices are dropped.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let hull = Self::hull(vertices.clone())?;
        let mut cleaned = vertices;
        cleaned.dedup();
        if cleaned.len() > 1 && cleaned.first() == cleaned.last() {
            cleaned.pop();
        }
        let n = cleaned.len();
        let kept: Vec<Point2> = (0..n)
            .filter(|&i| !turn(&cleaned[(i + n - 1) % n], &cleaned[i], &cleaned[(i + 1) % n]).is_zero())
            .map(|i| cleaned[i].clone())
            .collect();
        let mut forward = kept.clone();
        rotate_to_min(&mut forward);
        let mut backward = kept;
        backward.reverse();
        rotate_to_min(&mut backward);
        if forward == hull.vertices || backward == hull.vertices {
            Ok(hull)
        } else {
            Err(Error::Precondition("vertices are not in convex position".into()))
        }
    }

    /// Convex hull of a point set. Fails if the points span no area.
    pub fn hull(mut points: Vec<Point2>) -> Result<Self> {
        points.sort();
        points.dedup();
        if points.len() < 3 {
            return Err(Error::Precondition("a polygon needs three non-collinear vertices".into()));
        }
        let mut lower: Vec<Point2> = Vec::new();
        for p in &points {
            while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point2> = Vec::new();
        for p in points.iter().rev() {
            while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        if lower.len() < 3 {
            return Err(Error::Precondition("a polygon needs three non-collinear vertices".into()));
        }
        Ok(ConvexPolygon { vertices: lower, degenerate: false })
    }

    /// The segment `[p, q]` as a degenerate polygon.
    pub fn segment(p: Point2, q: Point2) -> Result<Self> {
        match p.cmp(&q) {
            Ordering::Equal => Err(Error::Precondition("segment endpoints coincide".into())),
            Ordering::Less => Ok(ConvexPolygon { vertices: vec![p, q], degenerate: true }),
            Ordering::Greater => Ok(ConvexPolygon { vertices: vec![q, p], degenerate: true }),
        }
    }

    /// `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: BigRational, y0: BigRational, x1: BigRational, y1: BigRational) -> Result<Self> {
        Self::hull(vec![
            Point2::new(x0.clone(), y0.clone()),
            Point2::new(x1.clone(), y0.clone()),
            Point2::new(x1, y1.clone()),
            Point2::new(x0, y1),
        ])
    }

    pub fn unit_square() -> Self {
        let z = BigRational::zero();
        let o = BigRational::from_integer(1.into());
        Self::rectangle(z.clone(), z, o.clone(), o).expect("unit square")
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Shoelace area; zero for segments.
    pub fn area(&self) -> BigRational {
        if self.degenerate {
            return BigRational::zero();
        }
        let n = self.vertices.len();
        let twice: BigRational = (0..n).map(|i| self.vertices[i].cross(&self.vertices[(i + 1) % n])).sum();
        twice / BigRational::from_integer(BigInt::from(2))
    }

    /// Whether `p` lies in the closed polygon.
    pub fn contains(&self, p: &Point2) -> bool {
        let n = self.vertices.len();
        if self.degenerate {
            let (a, b) = (&self.vertices[0], &self.vertices[1]);
            return turn(a, b, p).is_zero() && a <= p && p <= b;
        }
        (0..n).all(|i| !turn(&self.vertices[i], &self.vertices[(i + 1) % n], p).is_negative())
    }

    fn edges(&self) -> Vec<Point2> {
        let n = self.vertices.len();
        (0..n).map(|i| self.vertices[(i + 1) % n].sub(&self.vertices[i])).collect()
    }

    /// Parses one `x,y` vertex per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::ParseLine { line: i + 1, message };
            let (x, y) = line.split_once(',').ok_or_else(|| bad("expected `x,y`".into()))?;
            let x = parse_rational(x).map_err(|e| bad(e.to_string()))?;
            let y = parse_rational(y).map_err(|e| bad(e.to_string()))?;
            pts.push(Point2::new(x, y));
        }
        if pts.len() == 2 {
            let q = pts.pop().expect("two points");
            let p = pts.pop().expect("two points");
            return Self::segment(p, q);
        }
        Self::new(pts)
    }

    pub fn to_text(&self) -> String {
        self.vertices.iter().map(|p| format!("{p}\n")).collect()
    }
}

impl fmt::Display for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|p| format!("({p})")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn rotate_to_min(v: &mut [Point2]) {
    if let Some(i) = (0..v.len()).min_by(|&a, &b| v[a].cmp(&v[b])) {
        v.rotate_left(i);
    }
}

/// Orders edge directions by angle measured counterclockwise from straight
/// down, in `(0, 2π]`. Canonical polygons list their edges in this order.
fn angle_cmp(a: &Point2, b: &Point2) -> Ordering {
    // Rotate by +90° so "straight down" becomes the positive x-axis.
    let half = |p: &Point2| {
        let (x, y) = (-&p.y, p.x.clone());
        if y.is_positive() || (y.is_zero() && x.is_negative()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.cross(b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Exact Minkowski sum by merging edge sequences.
pub fn minkowski_sum(p: &ConvexPolygon, q: &ConvexPolygon) -> ConvexPolygon {
    let (ep, eq) = (p.edges(), q.edges());
    let mut merged: Vec<Point2> = Vec::with_capacity(ep.len() + eq.len());
    let (mut i, mut j) = (0, 0);
    while i < ep.len() || j < eq.len() {
        let ord = match (ep.get(i), eq.get(j)) {
            (Some(a), Some(b)) => angle_cmp(a, b),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                merged.push(ep[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                merged.push(eq[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                merged.push(ep[i].add(&eq[j]));
                i += 1;
                j += 1;
            }
        }
    }
    let mut cur = p.vertices[0].add(&q.vertices[0]);
    let mut vertices = Vec::with_capacity(merged.len());
    for e in &merged[..merged.len() - 1] {
        vertices.push(cur.clone());
        cur = cur.add(e);
    }
    vertices.push(cur);
    if vertices.len() == 2 {
        return ConvexPolygon { vertices, degenerate: true };
    }
    ConvexPolygon { vertices, degenerate: false }
}

/// Image of `p` under a nonsingular 2×2 map.
pub fn apply_linear(m: &RationalMatrix, p: &ConvexPolygon) -> Result<ConvexPolygon> {
    if m.dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: m.dim() });
    }
    let det = m.determinant();
    if det.is_zero() {
        return Err(Error::SingularOperator);
    }
    let map = |v: &Point2| {
        Point2::new(
            m.get(0, 0) * &v.x + m.get(0, 1) * &v.y,
            m.get(1, 0) * &v.x + m.get(1, 1) * &v.y,
        )
    };
    let mut vertices: Vec<Point2> = p.vertices.iter().map(map).collect();
    if det.is_negative() && !p.degenerate {
        vertices.reverse();
    }
    if p.degenerate {
        vertices.sort();
    } else {
        rotate_to_min(&mut vertices);
    }
    Ok(ConvexPolygon { vertices, degenerate: p.degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn poly(pts: &[(i64, i64)]) -> ConvexPolygon {
        ConvexPolygon::new(pts.iter().map(|&(x, y)| Point2::from_i64s(x, y)).collect()).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = poly(&[(1, 1), (0, 1), (0, 0), (1, 0)]);
        let b = poly(&[(0, 0), (0, 1), (1, 1), (1, 0)]);
        assert_eq!(a, b);
        assert_eq!(a, ConvexPolygon::unit_square());
        assert_eq!(a.vertices()[0], Point2::from_i64s(0, 0));
        assert_eq!(a.vertices()[1], Point2::from_i64s(1, 0));
        let c = poly(&[(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]);
        assert_eq!(c.vertices().len(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        let pts = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| Point2::from_i64s(x, y)).collect::<Vec<_>>();
        assert!(ConvexPolygon::new(pts(&[(0, 0), (1, 1), (2, 2)])).is_err());
        assert!(ConvexPolygon::new(pts(&[(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])).is_err());
        assert!(ConvexPolygon::new(pts(&[(0, 0), (1, 1), (1, 0), (0, 1)])).is_err());
        assert!(ConvexPolygon::segment(Point2::from_i64s(1, 1), Point2::from_i64s(1, 1)).is_err());
    }

    #[test]
    fn areas() {
        assert_eq!(ConvexPolygon::unit_square().area(), q(1, 1));
        assert_eq!(poly(&[(0, 0), (1, 0), (0, 1)]).area(), q(1, 2));
        assert_eq!(poly(&[(0, 0), (3, 0), (3, 2), (0, 2)]).area(), q(6, 1));
    }

    #[test]
    fn minkowski_examples() {
        let sq = ConvexPolygon::unit_square();
        let s2 = minkowski_sum(&sq, &sq);
        assert_eq!(s2, poly(&[(0, 0), (2, 0), (2, 2), (0, 2)]));
        assert_eq!(s2.area(), q(4, 1));
        let seg = ConvexPolygon::segment(Point2::from_i64s(0, 0), Point2::from_i64s(1, 0)).unwrap();
        let r = minkowski_sum(&sq, &seg);
        assert_eq!(r, poly(&[(0, 0), (2, 0), (2, 1), (0, 1)]));
        let tri = poly(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(minkowski_sum(&tri, &tri).area(), q(2, 1));
        let seg2 = ConvexPolygon::segment(Point2::from_i64s(0, 0), Point2::from_i64s(0, 1)).unwrap();
        assert_eq!(minkowski_sum(&seg, &seg2), sq);
        let ss = minkowski_sum(&seg, &seg);
        assert!(ss.is_degenerate());
        assert_eq!(ss.vertices(), &[Point2::from_i64s(0, 0), Point2::from_i64s(2, 0)]);
    }

    #[test]
    fn minkowski_against_hull_of_pairwise_sums() {
        let a = poly(&[(0, 0), (3, 1), (2, 4), (-1, 2)]);
        let b = poly(&[(0, 0), (1, -2), (2, 0), (1, 1)]);
        let sums: Vec<Point2> = a.vertices().iter().flat_map(|p| b.vertices().iter().map(move |q| p.add(q))).collect();
        assert_eq!(minkowski_sum(&a, &b), ConvexPolygon::hull(sums).unwrap());
        assert_eq!(minkowski_sum(&a, &b), minkowski_sum(&b, &a));
    }

    #[test]
    fn linear_images() {
        let t = RationalMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]).unwrap();
        let img = apply_linear(&t, &ConvexPolygon::unit_square()).unwrap();
        assert_eq!(img, poly(&[(0, 0), (2, 0), (2, 1), (0, 1)]));
        assert_eq!(img.area(), q(2, 1));
        let p = poly(&[(0, 0), (3, 1), (2, 4)]);
        assert_eq!(apply_linear(&RationalMatrix::identity(2), &p).unwrap(), p);
        let s = q(7071, 5000);
        let d = RationalMatrix::from_rows(&[vec![s.clone(), q(0, 1)], vec![q(0, 1), s.clone()]]).unwrap();
        assert_eq!(apply_linear(&d, &ConvexPolygon::unit_square()).unwrap().area(), &s * &s);
        let sing = RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(apply_linear(&sing, &p), Err(Error::SingularOperator));
    }

    #[test]
    fn parse_round_trip() {
        let p = ConvexPolygon::parse("# triangle\n0,0\n1/2,0\n0,3/4\n").unwrap();
        assert_eq!(p.area(), q(3, 16));
        assert_eq!(ConvexPolygon::parse(&p.to_text()).unwrap(), p);
        assert!(matches!(ConvexPolygon::parse("0,0\nx,1\n1,1"), Err(Error::ParseLine { line: 2, .. })));
    }

    #[test]
    fn containment() {
        let p = poly(&[(0, 0), (4, 0), (0, 4)]);
        assert!(p.contains(&Point2::from_i64s(2, 2)));
        assert!(p.contains(&Point2::from_i64s(0, 0)));
        assert!(!p.contains(&Point2::from_i64s(3, 2)));
    }
}
