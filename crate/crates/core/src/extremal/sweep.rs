use std::fmt::Write;

use num_rational::BigRational;

use super::construct::{box_construction, omega_construction, Polytope};
use crate::algebra::{companion_operator, IntPolynomial};
use crate::rational::{to_f64, to_fraction_string};
use crate::sumset::{dilate_sumset, sqrt2_operator, LatticeSet};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub param: String,
    pub size: usize,
    pub sum_size: usize,
    pub ratio: BigRational,
}

fn row(param: String, a: &LatticeSet, sum: &LatticeSet) -> SweepRow {
    SweepRow {
        param,
        size: a.len(),
        sum_size: sum.len(),
        ratio: BigRational::new(sum.len().into(), a.len().into()),
    }
}

/// `|A + TA|` for the `N × M` boxes under the `√2` operator.
pub fn box_sweep(sides: &[(u64, u64)]) -> Result<Vec<SweepRow>> {
    let t = sqrt2_operator();
    sides
        .iter()
        .map(|&(n, m)| {
            let a = box_construction(n, m)?;
            Ok(row(format!("{n}x{m}"), &a, &dilate_sumset(&a, &t)?))
        })
        .collect()
}

/// `|Ω_M + TΩ_M|` for each scale `M`.
pub fn omega_sweep(f: &IntPolynomial, body: &Polytope, scales: &[u64]) -> Result<Vec<SweepRow>> {
    let t = companion_operator(f)?;
    scales
        .iter()
        .map(|&m| {
            let a = omega_construction(f, m, body)?;
            Ok(row(m.to_string(), &a, &dilate_sumset(&a, &t)?))
        })
        .collect()
}

pub fn strictly_increasing(rows: &[SweepRow]) -> bool {
    rows.windows(2).all(|w| w[0].ratio < w[1].ratio)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("param,size,sum_size,ratio,ratio_exact\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.10},{}",
            r.param,
            r.size,
            r.sum_size,
            to_f64(&r.ratio),
            to_fraction_string(&r.ratio)
        );
    }
    let trend = if strictly_increasing(rows) { "increasing" } else { "not increasing" };
    let _ = writeln!(out, "# trend: {trend}");
    out
}
