//! Certified complex roots of integer polynomials.
//!
//! Roots are found in three stages: an exact square-free decomposition over
//! `ℚ`, Aberth iteration in `f64` on each square-free part, and a certification
//! loop in exact dyadic arithmetic. The certificate is the classical inclusion
//! disk bound: for monic `g` of degree `m` and distinct approximations `z_i`,
//! every connected union of the disks `|z - z_i| ≤ m·|g(z_i)| / |∏_{j≠i}(z_i - z_j)|`
//! holds as many roots as disks, so pairwise disjoint disks isolate one root
//! each. When a disk is too large, the approximations are refined by exact
//! Weierstrass steps at doubled precision.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{rat_monic, square_free_decomposition, IntPolynomial};
use crate::rational::{from_f64, round_dyadic, to_f64};
use crate::{Error, Result};

/// Radius reported for roots that are known exactly.
const EXACT_RADIUS: f64 = 1e-300;

/// One root of a polynomial together with a disk that isolates it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexRoot {
    #[serde(with = "crate::rational::serde_fraction")]
    pub re: BigRational,
    #[serde(with = "crate::rational::serde_fraction")]
    pub im: BigRational,
    /// Exactly one distinct root of the polynomial lies within this distance.
    pub isolation_radius: f64,
}

impl ComplexRoot {
    pub fn re_f64(&self) -> f64 {
        to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64(&self.im)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }

    pub fn abs(&self) -> f64 {
        self.re_f64().hypot(self.im_f64())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

#[derive(Debug, Clone)]
pub struct RootFinder {
    pub max_aberth_iterations: usize,
    pub initial_precision_bits: u32,
    pub max_precision_bits: u32,
}

impl Default for RootFinder {
    fn default() -> Self {
        Self {
            max_aberth_iterations: 2000,
            initial_precision_bits: 64,
            max_precision_bits: 4096,
        }
    }
}

/// All `deg f` complex roots of `f`, repeated by multiplicity, each within `tol`
/// of the true root and pairwise isolated. Sorted by real then imaginary part.
pub fn roots(f: &IntPolynomial, tol: f64) -> Result<Vec<ComplexRoot>> {
    RootFinder::default().roots(f, tol)
}

impl RootFinder {
    pub fn roots(&self, f: &IntPolynomial, tol: f64) -> Result<Vec<ComplexRoot>> {
        if f.degree() == 0 {
            return Err(Error::Precondition("root finding needs degree >= 1".into()));
        }
        if !(tol > 0.0) {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        self.roots_rational(&f.to_rational(), tol)
    }

    pub(crate) fn roots_rational(&self, p: &[BigRational], tol: f64) -> Result<Vec<ComplexRoot>> {
        let parts = square_free_decomposition(p);
        let mut factor_tol = tol;
        // Roots of distinct square-free parts are distinct, but may be close;
        // tighten the per-factor tolerance until they separate globally.
        for _ in 0..8 {
            let mut all: Vec<(ComplexRoot, usize)> = Vec::new();
            for (g, mult) in &parts {
                for r in self.square_free_roots(g, factor_tol)? {
                    all.push((r, *mult));
                }
            }
            if globally_isolated(all.iter().map(|(r, _)| r)) {
                let mut out: Vec<ComplexRoot> = all
                    .into_iter()
                    .flat_map(|(r, m)| std::iter::repeat_n(r, m))
                    .collect();
                out.sort_by(|a, b| {
                    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
                });
                return Ok(out);
            }
            factor_tol /= 1e3;
        }
        Err(Error::NonConvergence { best_residual: f64::NAN })
    }

    fn square_free_roots(&self, g: &[BigRational], tol: f64) -> Result<Vec<ComplexRoot>> {
        let g = rat_monic(g);
        let m = g.len() - 1;
        if m == 1 {
            return Ok(vec![ComplexRoot {
                re: -g[0].clone(),
                im: BigRational::zero(),
                isolation_radius: EXACT_RADIUS,
            }]);
        }
        let approx = aberth(&g, self.max_aberth_iterations);
        let mut prec = self.initial_precision_bits;
        let mut zs: Vec<CRat> = approx.iter().map(|z| CRat::from_complex(*z).round(prec)).collect();
        let mut best_residual = f64::INFINITY;
        loop {
            let cert = certify(&g, &zs);
            best_residual = best_residual.min(cert.max_residual);
            if let Some(roots) = isolate(&zs, &cert.radii, tol) {
                return Ok(roots);
            }
            if prec >= self.max_precision_bits {
                return Err(Error::NonConvergence { best_residual });
            }
            prec = (prec * 2).min(self.max_precision_bits);
            zs = weierstrass_step(&zs, &cert.corrections, prec);
        }
    }
}

/// Exact Gaussian rational.
#[derive(Debug, Clone, PartialEq)]
struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn from_complex(z: Complex64) -> Self {
        Self { re: from_f64(z.re), im: from_f64(z.im) }
    }

    fn round(&self, bits: u32) -> Self {
        Self { re: round_dyadic(&self.re, bits), im: round_dyadic(&self.im, bits) }
    }

    fn add_real(&self, r: &BigRational) -> Self {
        Self { re: &self.re + r, im: self.im.clone() }
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        Self {
            re: (&self.re * &o.re + &self.im * &o.im) / &n,
            im: (&self.im * &o.re - &self.re * &o.im) / n,
        }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

fn aberth(g: &[BigRational], max_iter: usize) -> Vec<Complex64> {
    let c: Vec<f64> = g.iter().map(to_f64).collect();
    let m = c.len() - 1;
    let dc: Vec<f64> = (1..=m).map(|k| k as f64 * c[k]).collect();
    let eval = |coef: &[f64], z: Complex64| {
        coef.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a)
    };
    let center = -c[m - 1] / m as f64;
    // Fujiwara-type radius for the shifted polynomial is overkill; this bound
    // on |root| suffices to start the circle outside all roots.
    let radius = (1..=m)
        .map(|k| (c[m - k].abs()).powf(1.0 / k as f64))
        .fold(0.0, f64::max)
        .max(1e-3)
        * 2.0;
    let mut zs: Vec<Complex64> = (0..m)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / m as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for k in 0..m {
            let z = zs[k];
            let pz = eval(&c, z);
            if pz.norm() == 0.0 {
                continue;
            }
            let ratio = pz / eval(&dc, z);
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| (z - zs[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                zs[k] = z - step;
                max_step = max_step.max(step.norm() / (1.0 + z.norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    zs
}

struct Certificate {
    radii: Vec<f64>,
    corrections: Vec<Option<CRat>>,
    max_residual: f64,
}

fn eval_exact(g: &[BigRational], z: &CRat) -> CRat {
    g.iter()
        .rev()
        .fold(CRat::zero(), |acc, a| acc.mul(z).add_real(a))
}

fn certify(g: &[BigRational], zs: &[CRat]) -> Certificate {
    let m = zs.len();
    let mut radii = Vec::with_capacity(m);
    let mut corrections = Vec::with_capacity(m);
    let mut max_residual: f64 = 0.0;
    for (i, z) in zs.iter().enumerate() {
        let value = eval_exact(g, z);
        max_residual = max_residual.max(to_f64(&value.norm_sqr()).sqrt());
        let mut denom = CRat { re: BigRational::from_integer(1.into()), im: BigRational::zero() };
        for (j, w) in zs.iter().enumerate() {
            if j != i {
                denom = denom.mul(&z.sub(w));
            }
        }
        if denom.norm_sqr().is_zero() {
            radii.push(f64::INFINITY);
            corrections.push(None);
            continue;
        }
        let w = value.div(&denom);
        // Upward-rounded m·|W_i|.
        let r = to_f64(&w.norm_sqr()).sqrt() * m as f64 * (1.0 + 1e-12);
        radii.push(if r == 0.0 { EXACT_RADIUS } else { r });
        corrections.push(Some(w));
    }
    Certificate { radii, corrections, max_residual }
}

fn weierstrass_step(zs: &[CRat], corrections: &[Option<CRat>], prec: u32) -> Vec<CRat> {
    zs.iter()
        .zip(corrections)
        .enumerate()
        .map(|(i, (z, w))| match w {
            Some(w) => z.sub(w).round(prec),
            // Coincident approximations: nudge apart deterministically.
            None => {
                let nudge = from_f64(1e-6 * (i as f64 + 1.0));
                CRat { re: &z.re + &nudge, im: &z.im + nudge }.round(prec)
            }
        })
        .collect()
}

/// Snaps near-real roots onto the real axis and makes conjugate pairs exact,
/// growing disks so each still contains its original disk. Returns `None`
/// unless every disk is within `tol` and all are well separated.
fn isolate(zs: &[CRat], radii: &[f64], tol: f64) -> Option<Vec<ComplexRoot>> {
    let m = zs.len();
    let mut centers: Vec<CRat> = zs.to_vec();
    let mut rad: Vec<f64> = radii.to_vec();
    let mut paired = vec![false; m];
    for i in 0..m {
        let im = to_f64(&zs[i].im).abs();
        if im <= rad[i] {
            centers[i].im = BigRational::zero();
            rad[i] += im;
            paired[i] = true;
        }
    }
    for i in 0..m {
        if paired[i] || !zs[i].im.is_positive() {
            continue;
        }
        let target = zs[i].to_complex().conj();
        let partner = (0..m)
            .filter(|&j| !paired[j] && zs[j].im.is_negative())
            .min_by(|&a, &b| {
                let da = (zs[a].to_complex() - target).norm();
                let db = (zs[b].to_complex() - target).norm();
                da.total_cmp(&db)
            })?;
        let shift = (zs[partner].to_complex() - target).norm();
        let r = rad[i].max(rad[partner] + shift);
        centers[partner] = CRat { re: zs[i].re.clone(), im: -zs[i].im.clone() };
        rad[i] = r;
        rad[partner] = r;
        paired[i] = true;
        paired[partner] = true;
    }
    if paired.iter().any(|p| !p) || rad.iter().any(|&r| !(r <= tol)) {
        return None;
    }
    let out: Vec<ComplexRoot> = centers
        .into_iter()
        .zip(rad)
        .map(|(c, r)| ComplexRoot { re: c.re, im: c.im, isolation_radius: r })
        .collect();
    globally_isolated(out.iter()).then_some(out)
}

/// Distinct roots are separated by more than twice the largest radius.
fn globally_isolated<'a>(roots: impl Iterator<Item = &'a ComplexRoot>) -> bool {
    let roots: Vec<&ComplexRoot> = roots.collect();
    let max_r = roots.iter().map(|r| r.isolation_radius).fold(0.0, f64::max);
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let dist = (a.to_complex() - b.to_complex()).norm();
            if !(dist > 2.0 * max_r * (1.0 + 1e-9)) {
                return false;
            }
        }
    }
    true
}

/// `max_i |f(r_i)|` evaluated in `f64`.
pub fn max_residual(f: &IntPolynomial, roots: &[ComplexRoot]) -> f64 {
    let c: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    roots
        .iter()
        .map(|r| {
            let z = r.to_complex();
            c.iter().rev().fold(Complex64::zero(), |acc, &a| acc * z + a).norm()
        })
        .fold(0.0, f64::max)
}
