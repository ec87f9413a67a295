use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{char_poly, factor_integer_poly, h_of_poly, Certified, IntPolynomial, RationalMatrix, MAX_FACTOR_DEGREE};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorValue {
    pub factor: IntPolynomial,
    pub h: Certified,
}

/// `min H(g)` over irreducible integer divisors `g` of the characteristic
/// polynomial; `None` stands for infinity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjecturedConstant {
    #[serde(serialize_with = "finite_or_infinity")]
    pub value: Option<f64>,
    pub error: f64,
    pub factors: Vec<FactorValue>,
}

fn finite_or_infinity<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("infinity"),
    }
}

impl fmt::Display for ConjecturedConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{v:.12}"),
            None => f.write_str("infinity"),
        }
    }
}

pub fn conjectured_constant(m: &RationalMatrix, tol: f64) -> Result<ConjecturedConstant> {
    if m.dim() > MAX_FACTOR_DEGREE {
        return Err(Error::Precondition(format!(
            "operators are limited to dimension {MAX_FACTOR_DEGREE}, got {}",
            m.dim()
        )));
    }
    let p = char_poly(m).poly;
    if p.degree() == 0 {
        return Ok(ConjecturedConstant { value: None, error: 0.0, factors: Vec::new() });
    }
    let mut irreducible = factor_integer_poly(&p, tol)?;
    irreducible.dedup();
    let factors = irreducible
        .into_iter()
        .map(|g| Ok(FactorValue { h: h_of_poly(&g, tol)?, factor: g }))
        .collect::<Result<Vec<_>>>()?;
    let best = factors
        .iter()
        .min_by(|a, b| a.h.value.total_cmp(&b.h.value))
        .expect("at least one factor");
    Ok(ConjecturedConstant { value: Some(best.h.value), error: best.h.error, factors })
}
