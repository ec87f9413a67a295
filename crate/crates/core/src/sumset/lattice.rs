use std::collections::HashMap;
use std::fmt;

use crate::{Error, Result};

/// A finite set of distinct points in `ℤ^dim`, kept in lexicographic order.
///
/// Points are stored as one flat coordinate buffer; `iter` yields `&[i64]`
/// slices of length `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSet {
    dim: usize,
    coords: Vec<i64>,
}

impl LatticeSet {
    /// Builds a set from distinct points; duplicates are an error.
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        check_dim(dim)?;
        let n = points.len();
        let mut flat = Vec::with_capacity(n * dim);
        for p in &points {
            if p.len() != dim {
                return Err(Error::WrongDimension { expected: dim, found: p.len() });
            }
            flat.extend_from_slice(p);
        }
        let set = Self::from_flat_dedup(dim, flat);
        if set.len() != n {
            let mut seen = HashMap::new();
            for p in &points {
                if seen.insert(p.as_slice(), ()).is_some() {
                    return Err(Error::Precondition(format!("duplicate point {p:?}")));
                }
            }
        }
        Ok(set)
    }

    /// Builds a set, silently merging repeated points.
    pub fn from_points_dedup(dim: usize, points: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        check_dim(dim)?;
        let mut flat = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::WrongDimension { expected: dim, found: p.len() });
            }
            flat.extend_from_slice(&p);
        }
        Ok(Self::from_flat_dedup(dim, flat))
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self { dim, coords: Vec::new() }
    }

    pub(crate) fn from_flat_dedup(dim: usize, mut flat: Vec<i64>) -> Self {
        debug_assert_eq!(flat.len() % dim, 0);
        match dim {
            1 => {
                flat.sort_unstable();
                flat.dedup();
            }
            2 => sort_dedup_fixed::<2>(&mut flat),
            3 => sort_dedup_fixed::<3>(&mut flat),
            4 => sort_dedup_fixed::<4>(&mut flat),
            _ => {
                let mut pts: Vec<&[i64]> = flat.chunks_exact(dim).collect();
                pts.sort_unstable();
                pts.dedup();
                flat = pts.concat();
            }
        }
        Self { dim, coords: flat }
    }

    /// Wraps a buffer that is already sorted and duplicate-free.
    pub(crate) fn from_sorted_flat(dim: usize, flat: Vec<i64>) -> Self {
        debug_assert!(flat
            .chunks_exact(dim)
            .zip(flat.chunks_exact(dim).skip(1))
            .all(|(a, b)| a < b));
        Self { dim, coords: flat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, i64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn flat(&self) -> &[i64] {
        &self.coords
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        if p.len() != self.dim {
            return false;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn to_vecs(&self) -> Vec<Vec<i64>> {
        self.iter().map(<[i64]>::to_vec).collect()
    }

    /// Componentwise minimum and maximum, or `None` when empty.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut it = self.iter();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.to_vec(), first.to_vec());
        for p in it {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        Some((lo, hi))
    }

    pub fn translate(&self, v: &[i64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::WrongDimension { expected: self.dim, found: v.len() });
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.checked_add(v[i % self.dim]).ok_or(Error::CoordinateOverflow("translate")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dim: self.dim, coords })
    }

    /// Number of distinct values taken by coordinate `axis`.
    pub fn distinct_along(&self, axis: usize) -> usize {
        let mut vals: Vec<i64> = self.iter().map(|p| p[axis]).collect();
        vals.sort_unstable();
        vals.dedup();
        vals.len()
    }

    /// Parses the point-set file format: one point per line, comma-separated
    /// integers, `#` starts a comment, dimension fixed by the first point.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut flat = Vec::new();
        let mut first_line: HashMap<Vec<i64>, usize> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let point = line
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<i64>, _>>()
                .map_err(|e| Error::ParseLine { line: line_no, message: format!("bad integer: {e}") })?;
            let d = *dim.get_or_insert(point.len());
            if point.len() != d {
                return Err(Error::ParseLine {
                    line: line_no,
                    message: format!("expected {d} coordinates, found {}", point.len()),
                });
            }
            if let Some(prev) = first_line.insert(point.clone(), line_no) {
                return Err(Error::ParseLine {
                    line: line_no,
                    message: format!("duplicate point {point:?} (first seen on line {prev})"),
                });
            }
            flat.extend(point);
        }
        let dim = dim.ok_or(Error::ParseLine { line: 0, message: "no points".into() })?;
        Ok(Self::from_flat_dedup(dim, flat))
    }

    /// Serializes in the point-set file format.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.coords.len() * 4);
        for p in self.iter() {
            let parts: Vec<String> = p.iter().map(i64::to_string).collect();
            out.push_str(&parts.join(","));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p:?}")?;
        }
        f.write_str("}")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Precondition("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn sort_dedup_fixed<const D: usize>(flat: &mut Vec<i64>) {
    let mut pts: Vec<[i64; D]> = flat
        .chunks_exact(D)
        .map(|c| c.try_into().expect("chunk of length D"))
        .collect();
    pts.sort_unstable();
    pts.dedup();
    flat.clear();
    flat.extend(pts.iter().flatten());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_duplicates() {
        let s = LatticeSet::new(2, vec![vec![1, 0], vec![0, 5], vec![0, -1]]).unwrap();
        assert_eq!(s.to_vecs(), vec![vec![0, -1], vec![0, 5], vec![1, 0]]);
        assert!(s.contains(&[0, 5]));
        assert!(!s.contains(&[5, 0]));
        assert!(LatticeSet::new(2, vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(LatticeSet::new(2, vec![vec![1, 1, 1]]).is_err());
    }

    #[test]
    fn high_dimension_sorting() {
        let pts = vec![vec![1, 0, 0, 0, 2], vec![0, 9, 9, 9, 9], vec![1, 0, 0, 0, 1], vec![0, 9, 9, 9, 9]];
        let s = LatticeSet::from_points_dedup(5, pts).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.point(0), &[0, 9, 9, 9, 9]);
        assert_eq!(s.point(1), &[1, 0, 0, 0, 1]);
    }

    #[test]
    fn parse_file_format() {
        let text = "# a comment\n0,0\n1, 0  # trailing\n\n0,1\n";
        let s = LatticeSet::parse(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(LatticeSet::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn parse_reports_line_numbers() {
        match LatticeSet::parse("0,0\n1,1\n0,0\n") {
            Err(Error::ParseLine { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match LatticeSet::parse("0,0\n1,1,1\n") {
            Err(Error::ParseLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match LatticeSet::parse("0,0\n1,x\n") {
            Err(Error::ParseLine { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(LatticeSet::parse("# nothing\n").is_err());
    }

    #[test]
    fn bounding_box_and_translate() {
        let s = LatticeSet::new(2, vec![vec![3, -1], vec![0, 4]]).unwrap();
        assert_eq!(s.bounding_box(), Some((vec![0, -1], vec![3, 4])));
        let t = s.translate(&[1, 1]).unwrap();
        assert_eq!(t.to_vecs(), vec![vec![1, 5], vec![4, 0]]);
        assert!(s.translate(&[i64::MAX, 0]).is_err());
    }
}
