use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::IntPolynomial;
use crate::rational::{parse_rational, to_compact_string};
use crate::{Error, Result};

/// A square matrix of exact rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(dim: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Precondition(format!(
                "a {dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Precondition("matrix is not square".into()));
        }
        Self::new(dim, rows.concat())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigRational::one();
        }
        m
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[BigRational] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.dim).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn determinant(&self) -> BigRational {
        let cp = self.char_poly_monic();
        let c0 = cp[0].clone();
        if self.dim % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &p;
                inv[col * n + j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let (x, y) = (a[col * n + j].clone(), inv[col * n + j].clone());
                    a[r * n + j] -= &factor * x;
                    inv[r * n + j] -= &factor * y;
                }
            }
        }
        Some(Self { dim: n, entries: inv })
    }

    /// Monic characteristic polynomial `det(xI - M)` in ascending order, by the
    /// Faddeev–LeVerrier recurrence (exact over `ℚ`).
    pub fn char_poly_monic(&self) -> Vec<BigRational> {
        let n = self.dim;
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        let mut aux = Self::zero(n);
        for k in 1..=n {
            // aux_k = M·aux_{k-1} + c_{n-k+1}·I
            let mut next = self.mul(&aux);
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            aux = next;
            let t = self.mul(&aux).trace();
            coeffs[n - k] = -t / BigRational::from_integer(BigInt::from(k));
        }
        coeffs
    }
}

/// A characteristic polynomial written as `scale · poly` with `poly` primitive
/// in `ℤ[x]` and a positive leading coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPolynomial {
    pub poly: IntPolynomial,
    pub scale: BigRational,
}

/// Exact characteristic polynomial of `m`.
pub fn char_poly(m: &RationalMatrix) -> ScaledPolynomial {
    let monic = m.char_poly_monic();
    let (poly, scale) = IntPolynomial::from_rational(&monic).expect("monic is nonzero");
    ScaledPolynomial { poly, scale }
}

/// Matrix of multiplication by `x` on `ℚ[x]/(f)` in the basis `1, x, …, x^{d-1}`.
/// Column `j` holds the coordinates of `x·x^j`.
pub fn companion_operator(f: &IntPolynomial) -> Result<RationalMatrix> {
    let d = f.degree();
    if d == 0 {
        return Err(Error::Precondition("companion operator needs degree >= 1".into()));
    }
    let lead = BigRational::from_integer(f.leading().clone());
    let mut m = RationalMatrix::zero(d);
    for j in 0..d - 1 {
        m.entries[(j + 1) * d + j] = BigRational::one();
    }
    for i in 0..d {
        m.entries[i * d + (d - 1)] = -BigRational::from_integer(f.coeffs()[i].clone()) / &lead;
    }
    Ok(m)
}

impl fmt::Display for RationalMatrix {
    /// Rows separated by `;`, entries by `,`, e.g. `0,2;1,0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(";")?;
            }
            let row: Vec<String> = self.row(i).iter().map(to_compact_string).collect();
            f.write_str(&row.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for RationalMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero(0));
        }
        let mut rows = Vec::new();
        let mut offset = 0;
        for row_text in s.split(';') {
            let mut row = Vec::new();
            let mut col_offset = offset;
            for entry in row_text.split(',') {
                let q = parse_rational(entry).map_err(|_| Error::Parse {
                    position: col_offset,
                    message: format!("bad matrix entry {:?}", entry.trim()),
                })?;
                row.push(q);
                col_offset += entry.len() + 1;
            }
            offset += row_text.len() + 1;
            rows.push(row);
        }
        Self::from_rows(&rows).map_err(|_| Error::Parse {
            position: 0,
            message: "matrix rows must all have as many entries as there are rows".into(),
        })
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
