use super::morphism::{
    center_embedding, compose, exceptional_divisor, exceptional_inclusion, factor_projection,
    identity, inverse_automorphism, lift, linear_embedding, pairing, product_projection,
    projectivize, restrict, strict_transform, support, Morphism, MorphismKind, MorphismModel,
};
use super::variety::{make_product_list, Construction, Variety};
use crate::{Error, GradedClass};

/// Fiber square of `f: X → Y` and `g: W → Y`:
///
/// ```text
///   P --to_w--> W
///   |           |
///  to_x         g
///   v           v
///   X ---f----> Y
/// ```
///
/// `to_w` is the base change of `f` along `g`, and `to_x` the base change of
/// `g` along `f`.
#[derive(Clone, Debug)]
pub struct FiberSquare {
    pub apex: Variety,
    pub to_x: Morphism,
    pub to_w: Morphism,
}

impl FiberSquare {
    fn swapped(self) -> Self {
        FiberSquare {
            apex: self.apex,
            to_x: self.to_w,
            to_w: self.to_x,
        }
    }
}

fn unsupported(f: &MorphismModel, g: &MorphismModel) -> Error {
    Error::UnsupportedFiberProduct(format!("{f} and {g}"))
}

/// `X ×_Y W` for the supported square catalogue.
pub fn fiber_product(f: &Morphism, g: &Morphism) -> Result<FiberSquare, Error> {
    if f.target() != g.target() {
        return Err(Error::AmbientMismatch(
            f.target().key().to_string(),
            g.target().key().to_string(),
        ));
    }
    if g.is_identity() {
        return Ok(FiberSquare {
            apex: f.source().clone(),
            to_x: identity(f.source()),
            to_w: f.clone(),
        });
    }
    if f.is_identity() {
        return Ok(FiberSquare {
            apex: g.source().clone(),
            to_x: g.clone(),
            to_w: identity(g.source()),
        });
    }
    if f.target().is_point() {
        return Ok(over_point(f, g));
    }
    if let MorphismKind::Automorphism { inverse } = f.kind() {
        let back = compose(&inverse_automorphism(f.source(), inverse), g);
        return Ok(FiberSquare {
            apex: g.source().clone(),
            to_x: back,
            to_w: identity(g.source()),
        });
    }
    if let MorphismKind::Automorphism { inverse } = g.kind() {
        let back = compose(&inverse_automorphism(g.source(), inverse), f);
        return Ok(FiberSquare {
            apex: f.source().clone(),
            to_x: identity(f.source()),
            to_w: back,
        });
    }
    type Rule = fn(&Morphism, &Morphism) -> Option<Result<FiberSquare, Error>>;
    let rules: [Rule; 5] = [
        product_rule,
        bundle_rule,
        blowup_rule,
        pairing_rule,
        bundle_map_rule,
    ];
    for rule in rules {
        if let Some(r) = rule(f, g) {
            return r;
        }
        if let Some(r) = rule(g, f) {
            return r.map(FiberSquare::swapped);
        }
    }
    if let Some(r) = composite_rule(f, g) {
        return r;
    }
    if let Some(r) = composite_rule(g, f) {
        return r.map(FiberSquare::swapped);
    }
    Err(unsupported(f, g))
}

fn over_point(f: &Morphism, g: &Morphism) -> FiberSquare {
    let (apex, pos) = make_product_list(&[f.source().clone(), g.source().clone()]);
    FiberSquare {
        to_x: product_projection(&apex, &pos[0]),
        to_w: product_projection(&apex, &pos[1]),
        apex,
    }
}

/// `f` drops some factors of a product: the fiber product keeps them.
fn product_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    let MorphismKind::ProductProjection { keep } = f.kind() else {
        return None;
    };
    let x = f.source();
    let factors = x.factors();
    let dropped: Vec<usize> = (0..factors.len()).filter(|i| !keep.contains(i)).collect();
    let mut pieces = vec![g.source().clone()];
    pieces.extend(dropped.iter().map(|&i| factors[i].clone()));
    let (apex, pos) = make_product_list(&pieces);
    let to_w = product_projection(&apex, &pos[0]);
    let gw = compose(g, &to_w);
    let comps = (0..factors.len())
        .map(|i| match keep.iter().position(|&k| k == i) {
            Some(j) => compose(&factor_projection(f.target(), j), &gw),
            None => {
                let t = dropped.iter().position(|&d| d == i).unwrap();
                product_projection(&apex, &pos[t + 1])
            }
        })
        .collect();
    let to_x = pairing(&apex, x, comps, Some(g.is_smooth()));
    Some(Ok(FiberSquare { apex, to_x, to_w }))
}

/// Base change of a projective bundle is the projectivized pulled-back bundle.
fn bundle_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    let MorphismKind::BundleProjection = f.kind() else {
        return None;
    };
    let Construction::ProjBundle { chern, .. } = f.source().construction() else {
        return None;
    };
    Some((|| {
        let pulled = chern
            .iter()
            .map(|c| g.pullback_class(c))
            .collect::<Result<Vec<_>, _>>()?;
        let pb = projectivize(g.source(), &pulled)?;
        let mut images = g
            .images()
            .iter()
            .map(|c| pb.projection.pullback_class(c))
            .collect::<Result<Vec<_>, _>>()?;
        images.push(pb.zeta.clone());
        let to_x = MorphismModel::bundle_map(&pb.variety, f.source(), g, &pb.projection, images);
        Ok(FiberSquare {
            apex: pb.variety.clone(),
            to_x,
            to_w: pb.projection,
        })
    })())
}

/// Base change of a linear blow-up along a linear subspace: the strict
/// transform when the subspace is general, the exceptional divisor over the
/// center, and the intersection of a general subspace with the center.
fn blowup_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    match (f.kind(), g.kind()) {
        (MorphismKind::BlowDown, MorphismKind::LinearEmbedding) => {
            let Construction::BlowupLinear { n, m } = *f.source().construction() else {
                return None;
            };
            let a = g.source().dim();
            Some(strict_transform(n, m, a).map(|(st, sbd)| FiberSquare {
                apex: st.source().clone(),
                to_x: st,
                to_w: sbd,
            }))
        }
        (MorphismKind::BlowDown, MorphismKind::CenterEmbedding) => {
            let Construction::BlowupLinear { n, m } = *f.source().construction() else {
                return None;
            };
            if g.source().dim() != m {
                return None;
            }
            Some((|| {
                let e = exceptional_divisor(n, m)?;
                Ok(FiberSquare {
                    apex: e.variety.clone(),
                    to_x: exceptional_inclusion(n, m)?,
                    to_w: e.projection,
                })
            })())
        }
        (MorphismKind::CenterEmbedding, MorphismKind::LinearEmbedding) => {
            let n = f.target().dim();
            let (m, a) = (f.source().dim(), g.source().dim());
            if a + m < n {
                return Some(Err(Error::UnsupportedFiberProduct(format!(
                    "P({a}) and P({m}) do not meet in P({n})"
                ))));
            }
            let k = a + m - n;
            Some((|| {
                let to_x = linear_embedding(k, m)?;
                Ok(FiberSquare {
                    apex: to_x.source().clone(),
                    to_x,
                    to_w: center_embedding(k, a)?,
                })
            })())
        }
        _ => None,
    }
}

/// Splits a map into a product along blocks of factors that the components
/// do not mix, and base-changes one block at a time.
fn pairing_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    let MorphismKind::Pairing(comps) = f.kind() else {
        return None;
    };
    let nx = f.source().factors().len();
    let supports: Vec<Vec<usize>> = comps.iter().map(|c| support(c)).collect();
    // the first block: X-factors and components connected to component 0
    let mut xs: Vec<usize> = supports[0].clone();
    let mut ts: Vec<usize> = vec![0];
    loop {
        let before = (xs.len(), ts.len());
        for (j, s) in supports.iter().enumerate() {
            if !ts.contains(&j) && s.iter().any(|i| xs.contains(i)) {
                ts.push(j);
                for &i in s {
                    if !xs.contains(&i) {
                        xs.push(i);
                    }
                }
            }
        }
        if (xs.len(), ts.len()) == before {
            break;
        }
    }
    xs.sort_unstable();
    ts.sort_unstable();
    if ts.len() == comps.len() && xs.len() == nx {
        return None;
    }
    Some(split_pairing(f, g, comps, &xs, &ts))
}

fn split_pairing(
    f: &Morphism,
    g: &Morphism,
    comps: &[Morphism],
    xs: &[usize],
    ts: &[usize],
) -> Result<FiberSquare, Error> {
    let x = f.source();
    let y = f.target();
    let x_factors = x.factors();
    let y_factors = y.factors();
    let xr: Vec<usize> = (0..x_factors.len()).filter(|i| !xs.contains(i)).collect();
    let tr: Vec<usize> = (0..y_factors.len()).filter(|j| !ts.contains(j)).collect();
    let sub = |ids: &[usize], fs: &[Variety]| {
        make_product_list(&ids.iter().map(|&i| fs[i].clone()).collect::<Vec<_>>()).0
    };
    let (x1, x2, y1, y2) = (
        sub(xs, &x_factors),
        sub(&xr, &x_factors),
        sub(ts, &y_factors),
        sub(&tr, &y_factors),
    );
    let block = |xids: &[usize], yids: &[usize], src: &Variety, tgt: &Variety| -> Morphism {
        let parts = yids
            .iter()
            .map(|&j| restrict_to(&comps[j], xids, x))
            .collect();
        pairing(src, tgt, parts, None)
    };
    let f1 = block(xs, ts, &x1, &y1);
    let f2 = block(&xr, &tr, &x2, &y2);
    let pr_t = product_projection(y, ts);
    let pr_r = product_projection(y, &tr);
    let s1 = fiber_product(&f1, &compose(&pr_t, g))?;
    let s2 = fiber_product(&f2, &compose(&pr_r, &compose(g, &s1.to_w)))?;
    let apex = s2.apex.clone();
    let to_w = compose(&s1.to_w, &s2.to_w);
    let into_x1 = compose(&s1.to_x, &s2.to_w);
    let into_x2 = s2.to_x.clone();
    let parts = (0..x_factors.len())
        .map(|i| match xs.iter().position(|&k| k == i) {
            Some(p) => compose(&factor_projection(&x1, p), &into_x1),
            None => {
                let p = xr.iter().position(|&k| k == i).unwrap();
                compose(&factor_projection(&x2, p), &into_x2)
            }
        })
        .collect();
    let to_x = pairing(&apex, x, parts, Some(g.is_smooth()));
    Ok(FiberSquare { apex, to_x, to_w })
}

/// Restricts `m` to the factors `ids` of `x`, which must contain its support.
fn restrict_to(m: &Morphism, ids: &[usize], x: &Variety) -> Morphism {
    if ids.len() == x.factors().len() {
        return m.clone();
    }
    restrict(m, ids)
}

/// `P(g*E) = B' ×_B P(E)`, so the square reduces to one over the base.
fn bundle_map_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    let MorphismKind::BundleMap { base_map, .. } = f.kind() else {
        return None;
    };
    let Construction::ProjBundle { chern, .. } = f.target().construction() else {
        return None;
    };
    Some((|| {
        let pi = super::morphism::bundle_projection(f.target())?;
        let base_sq = fiber_product(base_map, &compose(&pi, g))?;
        let pulled = chern
            .iter()
            .map(|c| base_map.pullback_class(c))
            .collect::<Result<Vec<_>, _>>()?;
        let pb = projectivize(base_map.source(), &pulled)?;
        let base_images: Vec<GradedClass> = (0..base_map.source().ring().ngens())
            .map(|i| {
                base_sq
                    .to_x
                    .pullback_class(&GradedClass::generator(base_map.source().ring(), i))
            })
            .collect::<Result<_, _>>()?;
        let zeta = GradedClass::generator(f.target().ring(), f.target().ring().ngens() - 1);
        let zeta_image = base_sq.to_w.pullback_class(&g.pullback_class(&zeta)?)?;
        let images = pb.lift_images(&base_images, &zeta_image);
        let to_x = lift(&base_sq.apex, f.source(), images, g.is_smooth());
        Ok(FiberSquare {
            apex: base_sq.apex.clone(),
            to_x,
            to_w: base_sq.to_w,
        })
    })())
}

fn composite_rule(f: &Morphism, g: &Morphism) -> Option<Result<FiberSquare, Error>> {
    let MorphismKind::Composite { outer, inner } = f.kind() else {
        return None;
    };
    Some((|| {
        let s1 = fiber_product(outer, g)?;
        let s2 = fiber_product(inner, &s1.to_x)?;
        Ok(FiberSquare {
            apex: s2.apex.clone(),
            to_x: s2.to_x,
            to_w: compose(&s1.to_w, &s2.to_w),
        })
    })())
}
