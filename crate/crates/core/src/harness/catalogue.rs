//! Seeded catalogue of bundles for the specialization checks.

use super::rng::SplitMix64;
use crate::genus::{hirzebruch_class, named_class, SeriesName};
use crate::report::CheckReport;
use crate::varmodel::{
    make_blowup_linear, make_point, make_product, make_product_list, make_proj, make_proj_bundle,
    BundleClass, Variety,
};
use crate::{exactalg::int, Error, GradedClass};

pub const MIN_CATALOGUE_BUNDLES: usize = 50;
pub const MAX_BUNDLE_BASE_DIM: usize = 4;
pub const MAX_BUNDLE_RANK: usize = 4;

/// A bundle with a readable description of how it was built.
#[derive(Clone, Debug)]
pub struct CatalogueBundle {
    pub label: String,
    pub bundle: BundleClass,
}

/// Every base of dimension at most four used by the catalogue.
pub fn catalogue_bases() -> Result<Vec<Variety>, Error> {
    let p = make_proj;
    let h1 = p(1).gen("h").expect("P(1) has h");
    let h2 = p(2).gen("h").expect("P(2) has h");
    Ok(vec![
        make_point(),
        p(1),
        p(2),
        p(3),
        p(4),
        make_product(&p(1), &p(1)),
        make_product(&p(1), &p(2)),
        make_product(&p(2), &p(2)),
        make_product(&p(1), &p(3)),
        make_product_list(&[p(1), p(1), p(1)]).0,
        make_blowup_linear(2, 0)?,
        make_blowup_linear(3, 0)?,
        make_blowup_linear(3, 1)?,
        make_blowup_linear(4, 1)?,
        make_proj_bundle(&p(1), &[h1, GradedClass::zero(p(1).ring())])?,
        make_proj_bundle(&p(2), &[h2, GradedClass::zero(p(2).ring())])?,
    ])
}

/// `count` bundles drawn from the seed: each base contributes its tangent
/// bundle, then seeded split bundles, some summed with the tangent bundle.
pub fn bundle_catalogue(seed: u64, count: usize) -> Result<Vec<CatalogueBundle>, Error> {
    let bases = catalogue_bases()?;
    let mut rng = SplitMix64::new(seed ^ 0xB0DD_1E5C_A7A1_0606);
    let mut out: Vec<CatalogueBundle> = bases
        .iter()
        .map(|x| CatalogueBundle {
            label: format!("T {x}"),
            bundle: BundleClass::tangent(x),
        })
        .collect();
    while out.len() < count {
        let x = rng.pick(&bases).expect("nonempty bases");
        let degree_one = x.ring().rank(1.min(x.dim()));
        let with_tangent = x.dim() > 0 && x.dim() < MAX_BUNDLE_RANK && rng.below(3) == 0;
        let max_lines = if with_tangent {
            MAX_BUNDLE_RANK - x.dim()
        } else {
            MAX_BUNDLE_RANK
        };
        let lines = 1 + rng.below(max_lines);
        let mut classes = Vec::with_capacity(lines);
        let mut names = Vec::with_capacity(lines);
        for _ in 0..lines {
            let coeffs: Vec<i64> = if x.dim() == 0 {
                Vec::new()
            } else {
                (0..degree_one).map(|_| rng.range(-2, 2)).collect()
            };
            let c = if x.dim() == 0 {
                GradedClass::zero(x.ring())
            } else {
                let rationals: Vec<_> = coeffs.iter().map(|&a| int(a)).collect();
                GradedClass::from_rational_component(x.ring(), 1, &rationals)
            };
            names.push(if c.is_zero() {
                "O".to_string()
            } else {
                format!("O({c})")
            });
            classes.push(c);
        }
        let split = BundleClass::split(x, &classes)?;
        let (bundle, label) = if with_tangent {
            (
                BundleClass::tangent(x).direct_sum(&split)?,
                format!("T {x} + {}", names.join(" + ")),
            )
        } else {
            (split, format!("{} on {x}", names.join(" + ")))
        };
        out.push(CatalogueBundle { label, bundle });
    }
    Ok(out)
}

/// `T*_y` at `y = -1, 0, 1` against the Chern, Todd and L classes.
pub fn bundle_specialization_checks(b: &CatalogueBundle) -> Vec<CheckReport> {
    let ty = hirzebruch_class(&b.bundle);
    [
        (-1, SeriesName::Chern),
        (0, SeriesName::Todd),
        (1, SeriesName::LClass),
    ]
    .into_iter()
    .map(|(y, name)| {
        CheckReport::compare(
            &format!("bundle-specialization/y={y}"),
            b.label.clone(),
            &ty.eval_y(&int(y)),
            &named_class(name, &b.bundle),
        )
    })
    .collect()
}
