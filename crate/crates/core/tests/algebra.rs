use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use dilset::algebra::{
    char_poly, companion_operator, factor_integer_poly, h_of_operator, h_of_poly, max_residual, reduce_to_number_field,
    roots, IntPolynomial, NumberFieldVector, RationalMatrix,
};
use dilset::sumset::{nf_dilate_sumset, nf_tuple_dilate_sumset};

fn primitive_poly(max_deg: usize) -> impl Strategy<Value = IntPolynomial> {
    (1..=max_deg)
        .prop_flat_map(|d| (prop::collection::vec(-6i64..=6, d), 1i64..=3))
        .prop_filter_map("primitive with nonzero constant", |(mut c, lead)| {
            c.push(lead);
            let f = IntPolynomial::from_i64s(&c).ok()?;
            (f.is_primitive() && c[0] != 0).then_some(f)
        })
}

fn small_matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((-5i64..=5, 1i64..=3), d * d).prop_map(move |e| {
            let entries = e.into_iter().map(|(n, q)| BigRational::new(n.into(), q.into())).collect();
            RationalMatrix::new(d, entries).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_text_round_trip(f in primitive_poly(6)) {
        let back: IntPolynomial = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn matrix_text_round_trip(m in small_matrix()) {
        let back: RationalMatrix = m.to_string().parse().unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn roots_have_small_residuals(f in primitive_poly(6)) {
        let r = roots(&f, 1e-10).unwrap();
        prop_assert_eq!(r.len(), f.degree());
        let scale: f64 = f.coeffs().iter().map(|c| c.to_string().parse::<f64>().unwrap().abs()).sum();
        prop_assert!(max_residual(&f, &r) <= 1e-6 * scale.max(1.0) * 10f64.powi(f.degree() as i32));
    }

    #[test]
    fn h_poly_equals_lead_times_h_companion(f in primitive_poly(5)) {
        let hf = h_of_poly(&f, 1e-12).unwrap();
        let ht = h_of_operator(&companion_operator(&f).unwrap(), 1e-12).unwrap();
        let c: f64 = f.leading().to_string().parse::<f64>().unwrap().abs();
        prop_assert!((hf.value - c * ht.value).abs() <= hf.error + c * ht.error + 1e-9 * hf.value);
    }

    #[test]
    fn companion_char_poly_recovers_f(f in primitive_poly(6)) {
        let p = char_poly(&companion_operator(&f).unwrap()).poly;
        let want = f.primitive_part();
        prop_assert!(p == want || p == want.neg());
    }

    #[test]
    fn char_poly_is_similarity_invariant(m in small_matrix()) {
        let d = m.dim();
        // A unipotent change of basis.
        let mut s = RationalMatrix::identity(d).entries().to_vec();
        for i in 0..d {
            for j in i + 1..d {
                s[i * d + j] = BigRational::from_integer(BigInt::from((i + 2 * j) as i64 - 2));
            }
        }
        let s = RationalMatrix::new(d, s).unwrap();
        let conj = s.mul(&m).mul(&s.inverse().unwrap());
        prop_assert_eq!(char_poly(&conj), char_poly(&m));
        prop_assert_eq!(conj.trace(), m.trace());
        prop_assert_eq!(conj.determinant(), m.determinant());
    }

    #[test]
    fn factors_multiply_back(a in primitive_poly(3), b in primitive_poly(3)) {
        let f = a.mul(&b).primitive_part();
        let factors = factor_integer_poly(&f, 1e-12).unwrap();
        let product = factors.iter().fold(IntPolynomial::from_i64s(&[1]).unwrap(), |acc, g| acc.mul(g));
        prop_assert!(product == f || product == f.neg());
        prop_assert!(factors.len() >= 2);
    }

    #[test]
    fn reduction_is_injective_and_commutes(
        pts in prop::collection::btree_set(prop::collection::vec(-4i64..=4, 4), 1..12),
        seed in 0u64..1000,
    ) {
        let field = Arc::new("x^2-2".parse::<IntPolynomial>().unwrap());
        let tuples: Vec<Vec<NumberFieldVector>> = pts
            .iter()
            .map(|p| vec![
                NumberFieldVector::from_i64s(&p[..2], field.clone()).unwrap(),
                NumberFieldVector::from_i64s(&p[2..], field.clone()).unwrap(),
            ])
            .collect();
        let r = reduce_to_number_field(&tuples, seed).unwrap();
        let mut image = r.image.clone();
        image.sort();
        image.dedup();
        prop_assert_eq!(image.len(), tuples.len());
        // φ(A + αA) = φ(A) + αφ(A).
        let mapped: std::collections::BTreeSet<_> = nf_tuple_dilate_sumset(&tuples)
            .unwrap()
            .iter()
            .map(|t| {
                t.iter().zip(&r.weights).fold(NumberFieldVector::zero(field.clone()), |acc, (x, w)| {
                    acc.add(&x.scale(&BigRational::from_integer(w.clone()))).unwrap()
                })
            })
            .collect();
        let direct: std::collections::BTreeSet<_> = nf_dilate_sumset(&r.image).unwrap().into_iter().collect();
        prop_assert_eq!(mapped, direct);
    }
}
