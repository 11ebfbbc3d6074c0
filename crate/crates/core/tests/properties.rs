use proptest::prelude::*;

use polya_spectra::counting::{count, weyl_leading, CountingFunction, Side};
use polya_spectra::polya::{verify_counting_bound, verify_dirichlet};
use polya_spectra::riesz::riesz_mean;
use polya_spectra::spectra::{
    box_spectrum, interval_spectrum, product_spectrum, sphere2_spectrum, tabulated_spectrum,
    triangle_neumann_counting,
};
use polya_spectra::{BoundaryCondition, DomainMeta, EigenvalueStream, Length};

use BoundaryCondition::{Dirichlet, Neumann};

fn bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![Just(Dirichlet), Just(Neumann)]
}

fn interval(a: f64, bc: BoundaryCondition, cutoff: f64) -> EigenvalueStream {
    interval_spectrum(a, bc, cutoff).unwrap()
}

fn pairs(s: &EigenvalueStream) -> Vec<(f64, u64)> {
    s.levels()
        .iter()
        .map(|l| (l.value, l.multiplicity))
        .collect()
}

fn same_multiset(a: &EigenvalueStream, b: &EigenvalueStream) -> bool {
    let (a, b) = (pairs(a), pairs(b));
    a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|(x, y)| x.1 == y.1 && (x.0 - y.0).abs() <= 1e-11 * x.0.max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_commutative(a in 0.2f64..2.0, b in 0.2f64..2.0, b1 in bc(), b2 in bc(),
                              cutoff in 5.0f64..400.0) {
        let (s1, s2) = (interval(a, b1, cutoff), interval(b, b2, cutoff));
        let p = product_spectrum(&s1, &s2, cutoff).unwrap();
        let q = product_spectrum(&s2, &s1, cutoff).unwrap();
        prop_assert!(same_multiset(&p, &q));
    }

    #[test]
    fn product_is_associative(a in 0.3f64..2.0, b in 0.3f64..2.0, bc1 in bc(),
                              cutoff in 5.0f64..200.0) {
        let s1 = interval(a, bc1, cutoff);
        let s2 = interval(b, Neumann, cutoff);
        let s3 = sphere2_spectrum(cutoff).unwrap();
        let left = product_spectrum(&product_spectrum(&s1, &s2, cutoff).unwrap(), &s3, cutoff).unwrap();
        let right = product_spectrum(&s1, &product_spectrum(&s2, &s3, cutoff).unwrap(), cutoff).unwrap();
        prop_assert!(same_multiset(&left, &right));
    }

    #[test]
    fn triangle_count_is_nondecreasing(x in 0.0f64..2000.0, dx in 0.0f64..50.0) {
        prop_assert!(triangle_neumann_counting(x).unwrap() <= triangle_neumann_counting(x + dx).unwrap());
    }

    #[test]
    fn counts_are_monotone(a in 0.2f64..3.0, b in bc(), x in 0.0f64..500.0, dx in 0.0f64..100.0) {
        let s = interval(a, b, 700.0);
        prop_assert!(count(&s, x).unwrap() <= count(&s, x + dx).unwrap());
    }

    #[test]
    fn dirichlet_below_neumann(w in 0.3f64..3.0, h in 0.3f64..3.0, x in 0.0f64..3000.0) {
        let sides = [Length::from(w), Length::from(h)];
        let sd = box_spectrum(&sides, Dirichlet, 3001.0).unwrap();
        let sn = box_spectrum(&sides, Neumann, 3001.0).unwrap();
        prop_assert!(count(&sd, x).unwrap() <= count(&sn, x).unwrap());
    }

    #[test]
    fn riesz_mean_nondecreasing(a in 0.2f64..3.0, g in 0.0f64..3.0, x in 0.0f64..500.0,
                                dx in 0.0f64..100.0) {
        let s = interval(a, Neumann, 700.0);
        prop_assert!(riesz_mean(&s, g, x).unwrap() <= riesz_mean(&s, g, x + dx).unwrap());
    }

    #[test]
    fn riesz_derivative(w in 0.5f64..2.0, g in prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0)],
                        x in 20.0f64..900.0) {
        let sides = [Length::from(w), Length::from(1.0)];
        let s = box_spectrum(&sides, Dirichlet, 1000.0).unwrap();
        let h = 1e-5 * x;
        // Stay clear of eigenvalues, where the lower-order mean has a jump or a kink.
        let gap = s.levels().iter().map(|l| (l.value - x).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e3 * h);
        let fd = (riesz_mean(&s, g, x + h).unwrap() - riesz_mean(&s, g, x - h).unwrap()) / (2.0 * h);
        let exact = g * riesz_mean(&s, g - 1.0, x).unwrap();
        prop_assume!(exact > 0.0);
        prop_assert!(((fd - exact) / exact).abs() < 1e-6, "{} vs {}", fd, exact);
    }

    #[test]
    fn riesz_log_convex_in_gamma(w in 0.5f64..2.0, g1 in 0.0f64..3.0, g2 in 0.0f64..3.0) {
        let sides = [Length::from(w), Length::from(1.0)];
        let s = box_spectrum(&sides, Dirichlet, 400.0).unwrap();
        let x = s.levels().last().unwrap().value + 1.0;
        let s = box_spectrum(&sides, Dirichlet, x + 1.0).unwrap();
        let mid = riesz_mean(&s, (g1 + g2) / 2.0, x).unwrap();
        let prod = riesz_mean(&s, g1, x).unwrap() * riesz_mean(&s, g2, x).unwrap();
        prop_assert!(mid * mid <= prod * (1.0 + 1e-12));
    }

    #[test]
    fn per_eigenvalue_and_counting_forms_agree(
        gaps in prop::collection::vec((0.01f64..3.0, 1u64..4), 1..60),
        volume in 0.2f64..5.0,
        d in 1u32..4,
    ) {
        let mut v = 0.0;
        let entries: Vec<(f64, u64)> = gaps.iter().map(|&(g, m)| { v += g; (v, m) }).collect();
        let cutoff = v + 1.0;
        let meta = DomainMeta::new(d, volume, Dirichlet).unwrap();
        let s = tabulated_spectrum(&entries, &meta, cutoff).unwrap();
        let per = verify_dirichlet(&s, &meta, s.total()).unwrap();
        let cf = CountingFunction::from_stream(s, meta.clone());
        let (counting, _) =
            verify_counting_bound(&cf, &|l| weyl_leading(&meta, l), (0.0, cutoff), Side::Upper).unwrap();
        prop_assert_eq!(per.holds(), counting.holds());
    }
}
