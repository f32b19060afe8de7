use proptest::prelude::*;

use motbiv_core::exactalg::{divide_exact, int, Direction, GradedClass, YPolynomial};
use motbiv_core::varmodel::*;

fn rings() -> Vec<Variety> {
    let p1 = make_proj(1);
    let h = p1.gen("h").unwrap();
    vec![
        make_proj(3),
        make_product(&p1, &make_proj(2)),
        make_blowup_linear(2, 0).unwrap(),
        make_blowup_linear(3, 1).unwrap(),
        make_proj_bundle(&p1, &[h.scale_rational(&int(2))]).unwrap(),
    ]
}

fn ypoly() -> impl Strategy<Value = YPolynomial> {
    prop::collection::vec(-4i64..=4, 0..=3).prop_map(|c| YPolynomial::from_ints(&c))
}

fn class_in(x: &Variety) -> impl Strategy<Value = GradedClass> {
    let x = x.clone();
    let total: usize = x.ring().betti().iter().sum();
    prop::collection::vec(ypoly(), total).prop_map(move |coords| {
        let mut c = GradedClass::zero(x.ring());
        let mut k = 0;
        for (d, r) in x.ring().betti().into_iter().enumerate() {
            c = &c + &GradedClass::from_component(x.ring(), d, coords[k..k + r].to_vec());
            k += r;
        }
        c
    })
}

fn triple() -> impl Strategy<Value = (GradedClass, GradedClass, GradedClass)> {
    (0..rings().len()).prop_flat_map(|i| {
        let x = rings()[i].clone();
        (class_in(&x), class_in(&x), class_in(&x))
    })
}

#[test]
fn betti_ranks_are_symmetric() {
    for x in rings() {
        let b = x.ring().betti();
        let rev: Vec<usize> = b.iter().rev().copied().collect();
        assert_eq!(b, rev, "{}", x.key());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&GradedClass::one(a.ring()) * &a, a);
    }

    #[test]
    fn truncation_commutes_with_products((a, b, _c) in triple(), d in 0usize..=4) {
        let t = |x: &GradedClass| x.truncate_above(d);
        prop_assert_eq!(t(&(&a * &b)), t(&(&t(&a) * &t(&b))));
        let n = a.ring().dim();
        prop_assert_eq!((&a * &b).truncate_above(n), &a.truncate_above(n) * &b.truncate_above(n));
    }

    #[test]
    fn exact_division_inverts_multiplication((a, _b, _c) in triple(), d in 0usize..=2) {
        let up = divide_exact(&a, d, Direction::Multiply).unwrap();
        let back = divide_exact(&up, d, Direction::Divide).unwrap();
        prop_assert_eq!(&back, &a);
        if let Ok(q) = divide_exact(&a, d, Direction::Divide) {
            prop_assert_eq!(divide_exact(&q, d, Direction::Multiply).unwrap(), a);
        }
    }

    #[test]
    fn division_by_one_plus_y_detects_remainders(p in ypoly(), k in 0usize..=3, r in 1i64..=4) {
        let m = &p * &YPolynomial::one_plus_y_pow(k);
        prop_assert_eq!(m.div_one_plus_y_pow(k).unwrap(), p.clone());
        let shifted = &(&p * &YPolynomial::one_plus_y()) + &YPolynomial::from_int(r);
        prop_assert!(shifted.div_one_plus_y().is_err());
    }
}
