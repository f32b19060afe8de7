use motbiv_core::bivariant::axioms::*;
use motbiv_core::bivariant::*;
use motbiv_core::report::CheckReport;
use motbiv_core::varmodel::*;
use motbiv_core::Error;

fn maps() -> Vec<Morphism> {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let pt = make_point();
    let pd = product_with_projections(&[p1.clone(), p1.clone()]);
    let h1 = p1.gen("h").unwrap();
    let bundle = projectivize(&p1, std::slice::from_ref(&h1)).unwrap();
    let spaces = [
        pt.clone(),
        p1.clone(),
        p2.clone(),
        pd.variety.clone(),
        bundle.variety.clone(),
        make_blowup_linear(2, 0).unwrap(),
    ];
    let mut out = Vec::new();
    for x in &spaces {
        out.push(identity(x));
        if !x.is_point() {
            out.push(to_point(x));
        }
    }
    out.extend(pd.projections.iter().cloned());
    out.push(bundle.projection.clone());
    out.push(linear_embedding(0, 1).unwrap());
    out.push(linear_embedding(0, 2).unwrap());
    out.push(linear_embedding(1, 2).unwrap());
    out.push(blow_down(2, 0).unwrap());
    out.push(compose(
        &pd.projections[0],
        &pairing(&p1, &pd.variety, vec![identity(&p1), identity(&p1)], None),
    ));
    out
}

fn composable<'a>(ms: &'a [Morphism], f: &'a Morphism) -> impl Iterator<Item = &'a Morphism> {
    ms.iter().filter(move |g| g.source() == f.target())
}

fn elements_over(ms: &[Morphism], f: &Morphism) -> Vec<BivariantElement> {
    let gens: Vec<BivariantElement> = ms
        .iter()
        .filter(|h| h.target() == f.source())
        .filter_map(|h| BivariantElement::generator(h, f).ok())
        .collect();
    let mut out: Vec<BivariantElement> = gens.iter().take(2).cloned().collect();
    if gens.len() >= 2 {
        out.push(gens[0].scale(2).sub(&gens[gens.len() - 1]).unwrap());
    }
    out
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: Vec<CheckReport>,
    unsupported: usize,
}

impl Tally {
    fn record(&mut self, r: Result<CheckReport, Error>) {
        match r {
            Ok(r) if r.pass => self.passed += 1,
            Ok(r) => self.failed.push(r),
            Err(Error::UnsupportedFiberProduct(_)) => self.unsupported += 1,
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    fn record_all(&mut self, r: Result<Vec<CheckReport>, Error>) {
        match r {
            Ok(v) => v.into_iter().for_each(|x| self.record(Ok(x))),
            Err(e) => self.record(Err(e)),
        }
    }

    fn finish(self, name: &str, min_passed: usize) {
        for f in &self.failed {
            eprintln!("{f}");
        }
        eprintln!(
            "{name}: {} passed, {} failed, {} unsupported",
            self.passed,
            self.failed.len(),
            self.unsupported
        );
        assert!(self.failed.is_empty(), "{name} has failures");
        assert!(
            self.passed >= min_passed,
            "{name} exercised only {} cases",
            self.passed
        );
    }
}

#[test]
fn associativity_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for g in composable(&ms, f) {
            for k in composable(&ms, g) {
                for a in elements_over(&ms, f).iter().take(2) {
                    for b in elements_over(&ms, g).iter().take(2) {
                        for c in elements_over(&ms, k).iter().take(1) {
                            t.record(associativity(a, b, c));
                        }
                    }
                }
            }
        }
    }
    t.finish("B1", 20);
}

#[test]
fn pushforward_functoriality_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for g in composable(&ms, f) {
            for h in composable(&ms, g) {
                for a in elements_over(&ms, &compose(&compose(h, g), f)) {
                    t.record(pushforward_functoriality(f, g, h, &a));
                }
            }
        }
    }
    t.finish("B2", 20);
}

#[test]
fn pullback_functoriality_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for a in elements_over(&ms, f) {
            for g in ms.iter().filter(|g| g.target() == f.target()) {
                for h in ms.iter().filter(|h| h.target() == g.source()) {
                    t.record(pullback_functoriality(g, h, &a));
                }
            }
        }
    }
    t.finish("B3", 20);
}

#[test]
fn product_pushforward_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for g in composable(&ms, f) {
            for h in composable(&ms, g) {
                for a in elements_over(&ms, &compose(g, f)).iter().take(2) {
                    for b in elements_over(&ms, h).iter().take(2) {
                        t.record(product_pushforward(f, g, a, b));
                    }
                }
            }
        }
    }
    t.finish("B4", 20);
}

#[test]
fn product_pullback_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for g in composable(&ms, f) {
            for h in ms.iter().filter(|h| h.target() == g.target()) {
                for a in elements_over(&ms, f).iter().take(2) {
                    for b in elements_over(&ms, g).iter().take(2) {
                        t.record(product_pullback(h, a, b));
                    }
                }
            }
        }
    }
    t.finish("B5", 20);
}

#[test]
fn pushforward_pullback_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for g in composable(&ms, f) {
            for h in ms.iter().filter(|h| h.target() == g.target()) {
                for a in elements_over(&ms, &compose(g, f)).iter().take(2) {
                    t.record(pushforward_pullback(f, g, h, a));
                }
            }
        }
    }
    t.finish("B6", 20);
}

#[test]
fn projection_formula_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for a in elements_over(&ms, f).iter().take(2) {
            for g in ms.iter().filter(|g| g.target() == f.target()) {
                for h in ms.iter().filter(|h| h.source() == f.target()).take(3) {
                    for b in elements_over(&ms, &compose(h, g)).iter().take(2) {
                        t.record(projection_formula(g, h, a, b));
                    }
                }
            }
        }
    }
    t.finish("B7", 20);
}

#[test]
fn unit_laws_on_catalogue() {
    let ms = maps();
    let mut t = Tally::default();
    for f in &ms {
        for a in elements_over(&ms, f) {
            for g in ms.iter().filter(|g| g.target() == f.target()).take(3) {
                t.record_all(unit_laws(&a, Some(g)));
            }
        }
    }
    t.finish("units", 20);
}

#[test]
fn theta_is_a_stable_orientation() {
    let ms = maps();
    let mut t = Tally::default();
    for f in ms.iter().filter(|f| f.is_smooth()) {
        for g in composable(&ms, f).filter(|g| g.is_smooth()) {
            t.record(theta_multiplicative(f, g));
        }
        for g in ms.iter().filter(|g| g.target() == f.target()) {
            t.record_all(theta_stability(f, g));
        }
    }
    t.finish("theta", 20);
}

#[test]
fn gysin_maps() {
    let p1 = make_proj(1);
    let p2 = make_proj(2);
    let pt = make_point();
    let b = BivariantElement::generator(&to_point(&p2), &identity(&pt)).unwrap();
    let pulled = gysin_pull(&to_point(&p1), &b).unwrap();
    assert_eq!(
        pulled,
        product(
            &BivariantElement::generator(&identity(&p1), &to_point(&p1)).unwrap(),
            &b
        )
        .unwrap()
    );
    assert_eq!(
        pulled.terms().next().unwrap().0.space(),
        &make_product(&p1, &p2)
    );
    assert_eq!(gysin_pull(&identity(&pt), &b).unwrap(), b);

    let pd = product_with_projections(&[p1.clone(), p1.clone()]);
    let f = to_point(&p1);
    let g = to_point(&p2);
    let two_step = gysin_pull(&pd.projections[0], &gysin_pull(&f, &b).unwrap()).unwrap();
    let one_step = gysin_pull(&compose(&f, &pd.projections[0]), &b).unwrap();
    assert_eq!(two_step, one_step);

    let a = BivariantElement::generator(&identity(&pt), &identity(&pt)).unwrap();
    assert_eq!(gysin_push(&identity(&pt), &identity(&pt), &a).unwrap(), a);
    let pushed = gysin_push(
        &g,
        &identity(&pt),
        &BivariantElement::generator(&identity(&p2), &identity(&p2)).unwrap(),
    )
    .unwrap();
    assert_eq!(pushed.reference().key(), identity(&pt).key());
    assert_eq!(pushed.terms().next().unwrap().0.space(), &p2);

    let h1 = p1.gen("h").unwrap();
    let bundle = projectivize(&p1, &[h1]).unwrap();
    let q = &bundle.projection;
    let over = BivariantElement::generator(&identity(&bundle.variety), &identity(&bundle.variety))
        .unwrap();
    let via_bundle = gysin_push(q, &identity(&p1), &over).unwrap();
    assert_eq!(via_bundle.terms().next().unwrap().0.map().key(), q.key());
    let staged = gysin_push(&f, &identity(&pt), &via_bundle).unwrap();
    let composite = gysin_push(&compose(&f, q), &identity(&pt), &over).unwrap();
    assert_eq!(staged, composite);
}

#[test]
fn commutativity_is_reported() {
    let ms = maps();
    let mut agree = 0;
    let mut differ = Vec::new();
    for f in &ms {
        for g in ms.iter().filter(|g| g.target() == f.target()) {
            for a in elements_over(&ms, f).iter().take(1) {
                for b in elements_over(&ms, g).iter().take(1) {
                    match commutativity(a, b) {
                        Ok(r) if r.pass => agree += 1,
                        Ok(r) => differ.push(r),
                        Err(_) => {}
                    }
                }
            }
        }
    }
    eprintln!("commutativity: {agree} agree, {} differ", differ.len());
    for r in differ.iter().take(5) {
        eprintln!("{r}");
    }
    assert!(agree > 0);
}
