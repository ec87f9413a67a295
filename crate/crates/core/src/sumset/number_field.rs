use std::collections::HashSet;

use crate::algebra::NumberFieldVector;
use crate::{Error, Result};

/// `A + αA` computed exactly in `ℚ[α]`; sorted and duplicate-free.
pub fn nf_dilate_sumset(a: &[NumberFieldVector]) -> Result<Vec<NumberFieldVector>> {
    let Some(first) = a.first() else { return Ok(Vec::new()) };
    if a.iter().any(|x| !x.same_field(first)) {
        return Err(Error::MixedFields);
    }
    let dilated: Vec<NumberFieldVector> = a.iter().map(NumberFieldVector::mul_alpha).collect();
    let mut out = HashSet::new();
    for x in a {
        for y in &dilated {
            out.insert(x.add(y)?);
        }
    }
    let mut out: Vec<NumberFieldVector> = out.into_iter().collect();
    out.sort();
    Ok(out)
}

/// `A + αA` for a set of `k`-tuples over `ℚ[α]`, componentwise.
pub fn nf_tuple_dilate_sumset(a: &[Vec<NumberFieldVector>]) -> Result<Vec<Vec<NumberFieldVector>>> {
    let Some(first) = a.first().and_then(|t| t.first()) else { return Ok(Vec::new()) };
    if a.iter().flatten().any(|x| !x.same_field(first)) {
        return Err(Error::MixedFields);
    }
    let dilated: Vec<Vec<NumberFieldVector>> = a
        .iter()
        .map(|t| t.iter().map(NumberFieldVector::mul_alpha).collect())
        .collect();
    let mut out = HashSet::new();
    for x in a {
        for y in &dilated {
            let s = x.iter().zip(y).map(|(u, v)| u.add(v)).collect::<Result<Vec<_>>>()?;
            out.insert(s);
        }
    }
    let mut out: Vec<Vec<NumberFieldVector>> = out.into_iter().collect();
    out.sort();
    Ok(out)
}
