use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

use super::engine::{dilate_sumset, sumset};
use super::lattice::LatticeSet;
use crate::algebra::RationalMatrix;
use crate::{Error, Result};

/// `(1 + √2)² = 3 + 2√2`.
pub const SILVER_SQUARED: f64 = 3.0 + 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Base2 => x.log2(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" | "ln" | "e" => Ok(LogBase::Natural),
            "base2" | "2" | "log2" => Ok(LogBase::Base2),
            _ => Err(Error::Parse { position: 0, message: format!("unknown log base {s:?}") }),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Natural => "natural",
            LogBase::Base2 => "base2",
        })
    }
}

fn require_plane(a: &LatticeSet) -> Result<()> {
    if a.dim() == 2 {
        Ok(())
    } else {
        Err(Error::WrongDimension { expected: 2, found: a.dim() })
    }
}

/// Number of distinct first coordinates.
pub fn phi_x(a: &LatticeSet) -> Result<usize> {
    require_plane(a)?;
    Ok(a.distinct_along(0))
}

/// Number of distinct second coordinates.
pub fn phi_y(a: &LatticeSet) -> Result<usize> {
    require_plane(a)?;
    Ok(a.distinct_along(1))
}

/// `(1+√2)²|A| − 60|A|^{1/2} − 6·log|A|·(φ_x(A) + φ_y(A))`.
pub fn main_lemma_bound(a: &LatticeSet, base: LogBase) -> Result<f64> {
    require_plane(a)?;
    if a.is_empty() {
        return Err(Error::Precondition("the bound needs |A| >= 1".into()));
    }
    let n = a.len() as f64;
    let phis = (a.distinct_along(0) + a.distinct_along(1)) as f64;
    Ok(SILVER_SQUARED * n - 60.0 * n.sqrt() - 6.0 * base.log(n) * phis)
}

/// The operator `(a, b) ↦ (2b, a)`, multiplication by `√2` on `ℤ[√2] ≅ ℤ²`.
pub fn sqrt2_operator() -> RationalMatrix {
    RationalMatrix::from_i64_rows(&[&[0, 2], &[1, 0]]).expect("2x2")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumsetReport {
    #[serde(rename = "size_A")]
    pub size_a: usize,
    pub size_sum: usize,
    #[serde(with = "crate::rational::serde_fraction")]
    pub ratio: BigRational,
    pub phi_x: Option<usize>,
    pub phi_y: Option<usize>,
    /// Present only for the `√2` operator on planar sets, where the lower
    /// bound is a theorem.
    pub lemma3_bound: Option<f64>,
    pub bound_satisfied: bool,
}

/// Sizes, ratio, projection counts and the lower-bound check for `A + M·A`.
pub fn analyze(a: &LatticeSet, m: &RationalMatrix, base: LogBase) -> Result<SumsetReport> {
    if a.is_empty() {
        return Err(Error::Precondition("cannot analyze an empty set".into()));
    }
    let sum = dilate_sumset(a, m)?;
    let planar = a.dim() == 2;
    let lemma3_bound = if planar && *m == sqrt2_operator() {
        Some(main_lemma_bound(a, base)?)
    } else {
        None
    };
    Ok(SumsetReport {
        size_a: a.len(),
        size_sum: sum.len(),
        ratio: BigRational::new(sum.len().into(), a.len().into()),
        phi_x: planar.then(|| a.distinct_along(0)),
        phi_y: planar.then(|| a.distinct_along(1)),
        lemma3_bound,
        bound_satisfied: lemma3_bound.is_none_or(|b| sum.len() as f64 >= b),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PluenneckeReport {
    #[serde(rename = "K", with = "crate::rational::serde_fraction")]
    pub k: BigRational,
    pub lhs: usize,
    #[serde(with = "crate::rational::serde_fraction")]
    pub rhs_bound: BigRational,
    pub holds: bool,
}

/// For `|A| = |B|` and `C = A + B` with `K = |C|/|A|`, checks `|C + C| ≤ K⁶|C|`.
pub fn pluennecke_report(a: &LatticeSet, b: &LatticeSet) -> Result<PluenneckeReport> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
    }
    if a.is_empty() {
        return Err(Error::Precondition("sets must be nonempty".into()));
    }
    let c = sumset(a, b)?;
    let k = BigRational::new(c.len().into(), a.len().into());
    let lhs = sumset(&c, &c)?.len();
    let rhs_bound = Pow::pow(&k, 6u32) * BigRational::from_integer(BigInt::from(c.len()));
    let holds = BigRational::from_integer(lhs.into()) <= rhs_bound;
    Ok(PluenneckeReport { k, lhs, rhs_bound, holds })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionBound {
    #[serde(rename = "phiB")]
    pub phi_b: usize,
    pub lower: usize,
    pub holds: bool,
}

/// `φ_x(A + M·A) ≥ φ_x(A) + φ_y(A) − 1`.
///
/// Requires the first row of `M` to be `(0, k)` with `k ≠ 0`, so the first
/// coordinate of `a + M·b` is `x(a) + k·y(b)` and the inequality is
/// Cauchy–Davenport on `ℤ`.
pub fn cd_projection_bound(a: &LatticeSet, m: &RationalMatrix) -> Result<ProjectionBound> {
    require_plane(a)?;
    if m.dim() != 2 {
        return Err(Error::WrongDimension { expected: 2, found: m.dim() });
    }
    if !m.get(0, 0).is_zero() || m.get(0, 1).is_zero() {
        return Err(Error::Precondition(
            "the first row of the operator must be (0, k) with k != 0".into(),
        ));
    }
    if a.is_empty() {
        return Err(Error::Precondition("the set must be nonempty".into()));
    }
    let b = dilate_sumset(a, m)?;
    let phi_b = b.distinct_along(0);
    let lower = a.distinct_along(0) + a.distinct_along(1) - 1;
    Ok(ProjectionBound { phi_b, lower, holds: phi_b >= lower })
}
