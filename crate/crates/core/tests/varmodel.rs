use motbiv_core::exactalg::int;
use motbiv_core::varmodel::*;
use motbiv_core::{GradedClass, YPolynomial};
use proptest::prelude::*;

fn catalogue() -> Vec<Variety> {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let h1 = p1.gen("h").unwrap();
    let h2 = p2.gen("h").unwrap();
    let mut out = vec![
        make_point(),
        p1.clone(),
        p2.clone(),
        make_proj(3),
        make_proj(4),
    ];
    out.push(make_product(&p1, &p1));
    out.push(make_product(&p1, &p2));
    out.push(make_product(&make_product(&p1, &p1), &p1));
    out.push(
        make_proj_bundle(
            &p1,
            &[h1.scale_rational(&int(3)), GradedClass::zero(p1.ring())],
        )
        .unwrap(),
    );
    out.push(make_proj_bundle(&p2, &[h2.clone(), h2.pow(2)]).unwrap());
    out.push(
        make_proj_bundle(
            &p2,
            &[
                h2.scale_rational(&int(-1)),
                h2.pow(2),
                GradedClass::zero(p2.ring()),
            ],
        )
        .unwrap(),
    );
    for (n, m) in [(2, 0), (3, 0), (3, 1), (4, 0), (4, 1), (4, 2)] {
        out.push(make_blowup_linear(n, m).unwrap());
    }
    out
}

#[test]
fn euler_characteristic_matches_construction_tree() {
    for x in catalogue() {
        let top = x.tangent_chern().degree_part(x.dim());
        assert_eq!(
            x.integrate(&top).unwrap(),
            YPolynomial::from_int(x.euler_characteristic_oracle()),
            "{x}"
        );
    }
}

#[test]
fn betti_numbers_match_construction_tree() {
    for x in catalogue() {
        assert_eq!(x.ring().betti(), x.betti_oracle(), "{x}");
        assert!(x.ring().vanishes_above_dim(), "{x}");
        assert_eq!(x.integrate(&x.point_class()).unwrap(), YPolynomial::one());
    }
}

#[test]
fn blowup_self_intersection_agrees_with_exceptional_divisor() {
    for (n, m) in [(2, 0), (3, 0), (3, 1), (4, 0), (4, 1), (4, 2), (5, 2)] {
        let bl = make_blowup_linear(n, m).unwrap();
        let e = exceptional_divisor(n, m).unwrap();
        let lhs = bl.integrate(&bl.gen("e").unwrap().pow(n)).unwrap();
        let rhs = e.variety.integrate(&(-&e.zeta).pow(n - 1)).unwrap();
        assert_eq!(lhs, rhs, "Bl(P({n}),P({m}))");
    }
}

#[test]
fn blowdown_pushforward_of_exceptional_powers() {
    for (n, m) in [(2, 0), (3, 0), (3, 1), (4, 1), (4, 2)] {
        let bl = make_blowup_linear(n, m).unwrap();
        let q = blow_down(n, m).unwrap();
        let i = exceptional_inclusion(n, m).unwrap();
        let e = exceptional_divisor(n, m).unwrap();
        let center = center_embedding(m, n).unwrap();
        let ev = bl.gen("e").unwrap();
        for k in 1..=n {
            let direct = q.pushforward_class(&ev.pow(k)).unwrap();
            let restricted = i.pullback_class(&ev.pow(k - 1)).unwrap();
            let via_e = center
                .pushforward_class(&e.projection.pushforward_class(&restricted).unwrap())
                .unwrap();
            assert_eq!(direct, via_e, "Bl(P({n}),P({m})) e^{k}");
        }
        assert_eq!(
            q.pushforward_class(&GradedClass::one(bl.ring())).unwrap(),
            GradedClass::one(make_proj(n).ring())
        );
    }
}

#[test]
fn projection_formula_example() {
    let p1 = make_proj(1);
    let pd = product_with_projections(&[p1.clone(), p1.clone()]);
    let pr1 = &pd.projections[0];
    let h = p1.gen("h").unwrap();
    let b = pd.projections[1].pullback_class(&h).unwrap();
    let lhs = &h * &pr1.pushforward_class(&b).unwrap();
    assert_eq!(lhs, h);
    assert_eq!(
        pr1.pushforward_class(&(&pr1.pullback_class(&h).unwrap() * &b))
            .unwrap(),
        lhs
    );
}

#[test]
fn relative_tangent_examples() {
    let p1 = make_proj(1);
    let pd = product_with_projections(&[p1.clone(), p1.clone()]);
    let t = pd.projections[0].relative_tangent().unwrap();
    assert_eq!(t.rank(), 1);
    assert_eq!(t.total_chern().to_string(), "1 + 2*h2");
    assert_eq!(
        identity(&p1).relative_tangent().unwrap().total_chern(),
        &GradedClass::one(p1.ring())
    );
    assert_eq!(
        to_point(&make_proj(2))
            .relative_tangent()
            .unwrap()
            .total_chern()
            .to_string(),
        "1 + 3*h + 3*h^2"
    );
}

fn sample_maps() -> Vec<Morphism> {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let h2 = p2.gen("h").unwrap();
    let bundle = projectivize(&p2, &[h2.clone(), h2.pow(2)]).unwrap();
    let pd = product_with_projections(&[p1.clone(), p2.clone()]);
    vec![
        to_point(&p2),
        pd.projections[0].clone(),
        pd.projections[1].clone(),
        bundle.projection.clone(),
        compose(&to_point(&p2), &bundle.projection),
        blow_down(3, 1).unwrap(),
        blow_down(2, 0).unwrap(),
        exceptional_inclusion(3, 1).unwrap(),
        exceptional_inclusion(4, 0).unwrap(),
        linear_embedding(1, 3).unwrap(),
        exceptional_divisor(4, 1).unwrap().projection,
        product_map(&linear_embedding(0, 1).unwrap(), &identity(&p2)),
    ]
}

#[test]
fn whitney_rule_on_smooth_composites() {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let h2 = p2.gen("h").unwrap();
    let bundle = projectivize(&p2, &[h2.clone(), h2.pow(2)]).unwrap();
    let pd = product_with_projections(&[bundle.variety.clone(), p1.clone()]);
    let pairs = vec![
        (bundle.projection.clone(), to_point(&p2)),
        (pd.projections[0].clone(), bundle.projection.clone()),
        (
            pd.projections[0].clone(),
            compose(&to_point(&p2), &bundle.projection),
        ),
    ];
    for (f, g) in pairs {
        let gf = compose(&g, &f);
        let expected = f.relative_tangent().unwrap().total_chern()
            * &f.pullback_class(g.relative_tangent().unwrap().total_chern())
                .unwrap();
        assert_eq!(
            gf.relative_tangent().unwrap().total_chern(),
            &expected,
            "{gf}"
        );
        assert_eq!(gf.tangent_quotient(), expected, "{gf}");
    }
}

#[test]
fn catalogue_maps_are_ring_homomorphisms() {
    for m in sample_maps() {
        assert!(m.is_ring_hom(), "{m}");
    }
}

#[test]
fn stored_relative_tangents_agree_with_quotients() {
    for m in sample_maps().into_iter().filter(|m| m.is_smooth()) {
        assert_eq!(
            m.relative_tangent().unwrap().total_chern(),
            &m.tangent_quotient(),
            "{m}"
        );
    }
}

#[test]
fn fiber_squares_commute() {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let h2 = p2.gen("h").unwrap();
    let bundle = projectivize(&p2, &[h2.clone(), h2.pow(2)]).unwrap();
    let pd = product_with_projections(&[p1.clone(), p2.clone()]);
    let cases = vec![
        (bundle.projection.clone(), linear_embedding(1, 2).unwrap()),
        (bundle.projection.clone(), pd.projections[1].clone()),
        (blow_down(3, 1).unwrap(), linear_embedding(2, 3).unwrap()),
        (blow_down(3, 0).unwrap(), linear_embedding(1, 3).unwrap()),
        (blow_down(3, 1).unwrap(), center_embedding(1, 3).unwrap()),
        (pd.projections[1].clone(), blow_down(2, 0).unwrap()),
        (to_point(&p1), to_point(&bundle.variety)),
    ];
    for (f, g) in cases {
        let sq = fiber_product(&f, &g).unwrap();
        assert!(sq.to_x.is_ring_hom() && sq.to_w.is_ring_hom(), "{f} / {g}");
        for j in 0..f.target().ring().ngens() {
            let y = GradedClass::generator(f.target().ring(), j);
            let lhs = sq
                .to_x
                .pullback_class(&f.pullback_class(&y).unwrap())
                .unwrap();
            let rhs = sq
                .to_w
                .pullback_class(&g.pullback_class(&y).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "{f} / {g}");
        }
        // smoothness is stable under base change
        assert!(!f.is_smooth() || sq.to_w.is_smooth(), "{f} / {g}");
        assert!(!g.is_smooth() || sq.to_x.is_smooth(), "{f} / {g}");
    }
}

fn class_strategy(x: Variety) -> impl Strategy<Value = GradedClass> {
    let sizes: Vec<usize> = x.ring().betti();
    let total: usize = sizes.iter().sum();
    prop::collection::vec(-5i64..=5, total).prop_map(move |coeffs| {
        let mut c = GradedClass::zero(x.ring());
        let mut k = 0;
        for (d, &r) in sizes.iter().enumerate() {
            let v: Vec<YPolynomial> = coeffs[k..k + r]
                .iter()
                .map(|&a| YPolynomial::from_int(a))
                .collect();
            c = &c + &GradedClass::from_component(x.ring(), d, v);
            k += r;
        }
        c
    })
}

fn map_with_classes() -> impl Strategy<Value = (Morphism, GradedClass, GradedClass)> {
    (0..sample_maps().len()).prop_flat_map(|idx| {
        let f = sample_maps()[idx].clone();
        (
            Just(f.clone()),
            class_strategy(f.target().clone()),
            class_strategy(f.source().clone()),
        )
    })
}

fn variety_with_class() -> impl Strategy<Value = (Variety, GradedClass)> {
    (0..catalogue().len()).prop_flat_map(|idx| {
        let x = catalogue()[idx].clone();
        (Just(x.clone()), class_strategy(x))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_formula_holds((f, a, b) in map_with_classes()) {
        let lhs = f.pushforward_class(&(&f.pullback_class(&a).unwrap() * &b)).unwrap();
        let rhs = &a * &f.pushforward_class(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_to_point_is_integration((x, c) in variety_with_class()) {
        let pushed = to_point(&x).pushforward_class(&c).unwrap();
        prop_assert_eq!(pushed.constant_term(), x.integrate(&c).unwrap());
        if x.dim() > 0 {
            prop_assert_eq!(x.integrate(&c.truncate_above(x.dim() - 1)).unwrap(), YPolynomial::zero());
        }
    }
}
