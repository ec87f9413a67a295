use proptest::prelude::*;

use dilset::algebra::RationalMatrix;
use dilset::extremal::box_construction;
use dilset::sumset::{
    analyze, apply_operator, cd_projection_bound, dilate_sumset, dilate_sumset_with, main_lemma_bound, phi_x, phi_y,
    pluennecke_report, sqrt2_operator, sumset, sumset_with, LatticeSet, LogBase, SumsetReport, SumsetStrategy,
};

fn lattice(dim: usize, max: usize, r: i64) -> impl Strategy<Value = LatticeSet> {
    prop::collection::vec(prop::collection::vec(-r..=r, dim), 1..=max)
        .prop_map(move |pts| LatticeSet::from_points_dedup(dim, pts).unwrap())
}

fn naive(a: &LatticeSet, b: &LatticeSet) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()))
        .collect();
    out.sort();
    out.dedup();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn sumset_matches_pairwise_loop((a, b) in (1usize..=4).prop_flat_map(|d| (lattice(d, 15, 6), lattice(d, 15, 6)))) {
        let want = naive(&a, &b);
        for strategy in [SumsetStrategy::Auto, SumsetStrategy::Hash, SumsetStrategy::Dense] {
            prop_assert_eq!(sumset_with(&a, &b, strategy).unwrap().to_vecs(), want.clone());
        }
    }

    #[test]
    fn sumset_is_commutative_and_translates(a in lattice(2, 20, 8), b in lattice(2, 20, 8), v in prop::collection::vec(-5i64..=5, 2)) {
        let ab = sumset(&a, &b).unwrap();
        prop_assert_eq!(&ab, &sumset(&b, &a).unwrap());
        prop_assert_eq!(sumset(&a.translate(&v).unwrap(), &b).unwrap(), ab.translate(&v).unwrap());
    }

    #[test]
    fn cauchy_davenport_on_the_line(a in lattice(1, 30, 40), b in lattice(1, 30, 40)) {
        prop_assert!(sumset(&a, &b).unwrap().len() + 1 >= a.len() + b.len());
    }

    #[test]
    fn dilate_sumset_strategies_agree(a in lattice(2, 25, 10)) {
        let t = sqrt2_operator();
        let hash = dilate_sumset_with(&a, &t, SumsetStrategy::Hash).unwrap();
        prop_assert_eq!(&hash, &dilate_sumset_with(&a, &t, SumsetStrategy::Dense).unwrap());
        prop_assert_eq!(&hash, &dilate_sumset(&a, &t).unwrap());
        let image = apply_operator(&t, &a).unwrap();
        prop_assert_eq!(image.len(), a.len());
    }

    #[test]
    fn lemma_bound_holds(a in lattice(2, 200, 30)) {
        let r = analyze(&a, &sqrt2_operator(), LogBase::Natural).unwrap();
        prop_assert!(r.bound_satisfied);
        prop_assert!(r.size_sum as f64 >= main_lemma_bound(&a, LogBase::Natural).unwrap());
        prop_assert_eq!(r.phi_x, Some(phi_x(&a).unwrap()));
        prop_assert_eq!(r.phi_y, Some(phi_y(&a).unwrap()));
    }

    #[test]
    fn report_round_trips(a in lattice(2, 40, 10)) {
        let r = analyze(&a, &sqrt2_operator(), LogBase::Base2).unwrap();
        let back: SumsetReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.ratio * num_rational::BigRational::from_integer(back.size_a.into()),
            num_rational::BigRational::from_integer(back.size_sum.into()));
    }

    #[test]
    fn pluennecke_and_projection(len in 1usize..20, a in lattice(2, 40, 10)) {
        let pts = a.to_vecs();
        let n = len.min(pts.len() / 2).max(1);
        if pts.len() >= 2 * n {
            let x = LatticeSet::new(2, pts[..n].to_vec()).unwrap();
            let y = LatticeSet::new(2, pts[n..2 * n].to_vec()).unwrap();
            prop_assert!(pluennecke_report(&x, &y).unwrap().holds);
        }
        prop_assert!(cd_projection_bound(&a, &sqrt2_operator()).unwrap().holds);
    }

    #[test]
    fn box_closed_form(n in 2u64..=30, m in 2u64..=30) {
        let a = box_construction(n, m).unwrap();
        let s = dilate_sumset(&a, &sqrt2_operator()).unwrap().len() as u64;
        prop_assert_eq!(s, (n + 2 * m - 2) * (n + m - 1));
    }

    #[test]
    fn lattice_text_round_trip(a in lattice(3, 30, 100)) {
        prop_assert_eq!(LatticeSet::parse(&a.to_text()).unwrap(), a);
    }
}

#[test]
fn box_ratio_tends_to_silver_square() {
    let limit = 3.0 + 2.0 * 2f64.sqrt();
    let mut last = 0.0;
    for m in [10u64, 40, 160] {
        let n = (m as f64 * 2f64.sqrt()).round() as u64;
        let a = box_construction(n, m).unwrap();
        let ratio = dilate_sumset(&a, &sqrt2_operator()).unwrap().len() as f64 / a.len() as f64;
        assert!(ratio > last && ratio < limit);
        last = ratio;
    }
    assert!(limit - last < 0.05);
}

#[test]
fn non_integral_images_are_rejected() {
    let half: RationalMatrix = "1/2,0;0,1".parse().unwrap();
    let a = LatticeSet::new(2, vec![vec![1, 0]]).unwrap();
    assert!(apply_operator(&half, &a).is_err());
}
