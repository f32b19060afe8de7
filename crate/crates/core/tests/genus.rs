use motbiv_core::exactalg::{int, rat, Rational};
use motbiv_core::genus::*;
use motbiv_core::varmodel::*;
use motbiv_core::{GradedClass, YPolynomial};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Bernoulli numbers with `B_1 = -1/2`, from `Σ_{j<=m} C(m+1, j) B_j = 0`.
fn bernoulli(n: usize) -> Vec<Rational> {
    let binom = |n: usize, k: usize| {
        (0..k).fold(Rational::one(), |acc, i| {
            acc * int((n - i) as i64) / int(i as i64 + 1)
        })
    };
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let s = (0..m).fold(Rational::zero(), |acc, j| acc + binom(m + 1, j) * &b[j]);
        b.push(-s / int(m as i64 + 1));
    }
    b
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

#[test]
fn todd_coefficients_are_bernoulli_numbers() {
    let b = bernoulli(12);
    let t = GenusSeries::named(SeriesName::Todd, 12);
    for (k, bk) in b.iter().enumerate() {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        assert_eq!(
            t.coeff(k),
            YPolynomial::constant(sign * bk / factorial(k)),
            "α^{k}"
        );
    }
}

#[test]
fn l_class_coefficients_are_bernoulli_numbers() {
    let b = bernoulli(12);
    let l = GenusSeries::named(SeriesName::LClass, 12);
    for (k, bk) in b.iter().enumerate() {
        let expected = if k % 2 == 1 {
            Rational::zero()
        } else {
            int(2).pow(k as i32) * bk / factorial(k)
        };
        assert_eq!(l.coeff(k), YPolynomial::constant(expected), "α^{k}");
    }
}

#[test]
fn hirzebruch_series_specializes() {
    let h = GenusSeries::named(SeriesName::Hirzebruch, 10);
    for (y, name) in [
        (-1, SeriesName::Chern),
        (0, SeriesName::Todd),
        (1, SeriesName::LClass),
    ] {
        assert_eq!(h.eval_y(&int(y)), GenusSeries::named(name, 10), "y = {y}");
    }
}

fn line_classes(x: &Variety, coeffs: &[Vec<i64>]) -> Vec<GradedClass> {
    coeffs
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(GradedClass::zero(x.ring()), |acc, (j, &a)| {
                    &acc + &GradedClass::generator(x.ring(), j % x.ring().ngens())
                        .scale_rational(&int(a))
                })
        })
        .collect()
}

fn bases() -> Vec<Variety> {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    vec![
        p1.clone(),
        p2.clone(),
        make_proj(3),
        make_proj(4),
        make_product(&p1, &p2),
        make_product(&p2, &p2),
        make_blowup_linear(3, 1).unwrap(),
        make_proj_bundle(&p2, &[p2.gen("h").unwrap(), GradedClass::zero(p2.ring())]).unwrap(),
    ]
}

/// `∏ Q(l_i)` evaluated directly on explicit roots.
fn direct_product(q: &GenusSeries, x: &Variety, roots: &[GradedClass]) -> GradedClass {
    roots.iter().fold(GradedClass::one(x.ring()), |acc, l| {
        let ql = (0..=x.dim()).fold(GradedClass::zero(x.ring()), |s, k| {
            &s + &l.pow(k).scale(&q.coeff(k))
        });
        &acc * &ql
    })
}

fn lambda_direct(x: &Variety, roots: &[GradedClass]) -> GradedClass {
    let ring = x.ring();
    roots.iter().fold(GradedClass::one(ring), |acc, l| {
        let exp_neg = (0..=x.dim()).fold(GradedClass::zero(ring), |s, k| {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            &s + &l.pow(k).scale_rational(&(sign / factorial(k)))
        });
        &acc * &(&GradedClass::one(ring) + &exp_neg.scale(&YPolynomial::y()))
    })
}

fn split_strategy() -> impl Strategy<Value = (Variety, Vec<Vec<i64>>)> {
    (0..bases().len(), 0usize..=3).prop_flat_map(|(i, r)| {
        let x = bases()[i].clone();
        let n = x.ring().ngens();
        (
            Just(x),
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), r),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetrization_matches_explicit_roots((x, coeffs) in split_strategy()) {
        let roots = line_classes(&x, &coeffs);
        let e = BundleClass::split(&x, &roots).unwrap();
        for name in SeriesName::ALL {
            let q = GenusSeries::named(name, x.dim());
            prop_assert_eq!(multiplicative_class(&q, &e).unwrap(), direct_product(&q, &x, &roots), "{}", name);
        }
        prop_assert_eq!(lambda_y_chern_character(&e), lambda_direct(&x, &roots));
    }

    #[test]
    fn multiplicative_on_direct_sums((x, coeffs) in split_strategy(), cut in 0usize..=3) {
        let roots = line_classes(&x, &coeffs);
        let cut = cut.min(roots.len());
        let a = BundleClass::split(&x, &roots[..cut]).unwrap();
        let b = BundleClass::split(&x, &roots[cut..]).unwrap();
        let sum = a.direct_sum(&b).unwrap();
        for name in SeriesName::ALL {
            prop_assert_eq!(named_class(name, &sum), &named_class(name, &a) * &named_class(name, &b));
        }
        prop_assert_eq!(unnormalized_ty_class(&sum), &unnormalized_ty_class(&a) * &unnormalized_ty_class(&b));
    }

    #[test]
    fn renormalized_unnormalized_class_is_hirzebruch((x, coeffs) in split_strategy()) {
        let roots = line_classes(&x, &coeffs);
        let e = BundleClass::split(&x, &roots).unwrap();
        prop_assert_eq!(renormalize(&unnormalized_ty_class(&e), e.rank()).unwrap(), hirzebruch_class(&e));
    }
}

#[test]
fn tangent_bundles_specialize() {
    for x in bases() {
        let t = BundleClass::tangent(&x);
        let ty = hirzebruch_class(&t);
        assert_eq!(
            ty.eval_y(&int(-1)),
            named_class(SeriesName::Chern, &t),
            "{x}"
        );
        assert_eq!(ty.eval_y(&int(0)), named_class(SeriesName::Todd, &t), "{x}");
        assert_eq!(
            ty.eval_y(&int(1)),
            named_class(SeriesName::LClass, &t),
            "{x}"
        );
        assert_eq!(
            renormalize(&unnormalized_ty_class(&t), t.rank()).unwrap(),
            ty,
            "{x}"
        );
    }
}

#[test]
fn chi_y_of_projective_spaces() {
    for n in 0..=6 {
        let expected = YPolynomial::from_ints(
            &(0..=n)
                .map(|k| if k % 2 == 0 { 1 } else { -1 })
                .collect::<Vec<_>>(),
        );
        assert_eq!(chi_y(&make_proj(n)), expected, "P({n})");
        assert_eq!(chi_y(&make_proj(n)).eval(&int(0)), Rational::one());
    }
    assert_eq!(chi_y(&make_proj(2)).eval(&int(1)), Rational::one());
}

#[test]
fn chi_y_values() {
    for x in bases() {
        assert_eq!(
            chi_y(&x).eval(&int(-1)),
            int(x.euler_characteristic_oracle()),
            "{x}"
        );
        assert_eq!(chi_y(&x).eval(&int(0)), Rational::one(), "{x}");
    }
    let bases = bases();
    for a in &bases[..4] {
        for b in &bases[..4] {
            assert_eq!(chi_y(&make_product(a, b)), &chi_y(a) * &chi_y(b));
        }
    }
    assert_eq!(
        chi_y(&make_blowup_linear(2, 0).unwrap()),
        YPolynomial::from_ints(&[1, -2, 1])
    );
    assert_eq!(
        GenusSeries::named(SeriesName::Hirzebruch, 2).coeff(2),
        YPolynomial::from_coeffs(vec![rat(1, 12), rat(1, 6), rat(1, 12)])
    );
}
