//! Identity checks for the transformations: vanishing on blow-up relations,
//! the Riemann–Roch squares, the module property and the three
//! Grothendieck-transformation laws.

use super::{covariant_restrict, t_y_direct, BivariantTargetClass, CovariantClass, Transformation};
use crate::bivariant::{
    gysin_pull, gysin_push, product, pullback, pushforward, theta, BivariantElement,
};
use crate::genus::{chi_y, hirzebruch_class, named_class, unnormalized_ty_class, SeriesName};
use crate::motivic::{blowup_relation_element, BlowupDiagram};
use crate::report::CheckReport;
use crate::varmodel::{fiber_product, to_point, BundleClass, Morphism, Variety};
use crate::{Error, GradedClass};

/// The class a transformation attaches to a smooth map with relative
/// tangent `e`, computed from the genus directly.
pub fn orientation_class(which: Transformation, e: &BundleClass) -> GradedClass {
    match which {
        Transformation::Gamma(name) => named_class(name, e),
        Transformation::Lambda => unnormalized_ty_class(e),
        Transformation::Ty => hirzebruch_class(e),
    }
}

/// The transformation evaluated on the relation element of `d`; passes iff
/// the result is exactly zero.
pub fn check_blowup_vanishing(
    d: &BlowupDiagram,
    which: Transformation,
) -> Result<CheckReport, Error> {
    let rel = blowup_relation_element(d)?;
    let value = which.apply(rel.element())?;
    let zero = BivariantTargetClass::zero(d.reference());
    Ok(CheckReport::compare(
        &format!("blowup-vanishing/{which}"),
        d.to_string(),
        &value,
        &zero,
    ))
}

/// `cℓ(f^! β) = cℓ(T_f) · f^* cℓ(β)` for smooth `f: X → Y` and `β` over `Y → Z`.
pub fn verdier_rr_check(
    f: &Morphism,
    which: Transformation,
    b: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = which.apply(&gysin_pull(f, b)?)?;
    let factor = orientation_class(which, &f.relative_tangent()?);
    let rhs = BivariantTargetClass::new(
        lhs.reference(),
        &factor * &f.pullback_class(which.apply(b)?.carrier())?,
    )?;
    Ok(CheckReport::compare(
        &format!("verdier-rr/{which}"),
        format!("{f}; {b}"),
        &lhs,
        &rhs,
    ))
}

/// `cℓ(g_! α) = g'_*(cℓ(α) · f'^* cℓ(T_g))` for smooth `g: Y' → Y`, the square
/// with `f: X → Y`, and `α` over the base change `f'`.
pub fn sga6_rr_check(
    g: &Morphism,
    f: &Morphism,
    which: Transformation,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = which.apply(&gysin_push(g, f, a)?)?;
    let sq = fiber_product(f, g)?;
    let twist = sq
        .to_w
        .pullback_class(&orientation_class(which, &g.relative_tangent()?))?;
    let upstairs = &which.apply(a)?.carrier().clone() * &twist;
    let rhs = BivariantTargetClass::new(f, sq.to_x.pushforward_class(&upstairs)?)?;
    Ok(CheckReport::compare(
        &format!("sga6-rr/{which}"),
        format!("{g}; {f}; {a}"),
        &lhs,
        &rhs,
    ))
}

/// `cℓ(β ⌢ α) = β · cℓ(α)`, with `β ⌢ [V -h-> X]` evaluated on `V` as
/// `h_*(h^*β · cℓ(T_{fh}))`.
pub fn module_property_check(
    beta: &GradedClass,
    a: &BivariantElement,
    which: Transformation,
) -> Result<CheckReport, Error> {
    let x = a.reference().source();
    if !beta.same_ambient(&GradedClass::one(x.ring())) {
        return Err(Error::AmbientMismatch(
            beta.ring().key().to_string(),
            x.key().to_string(),
        ));
    }
    let mut lhs = GradedClass::zero(x.ring());
    for (g, c) in a.terms() {
        let h = g.map();
        let upstairs = &h.pullback_class(beta)?
            * &orientation_class(which, &g.composite().relative_tangent()?);
        lhs = &lhs
            + &h.pushforward_class(&upstairs)?
                .scale_rational(&crate::exactalg::int(c));
    }
    let value = match which {
        Transformation::Ty => t_y_direct(a)?,
        _ => which.apply(a)?,
    };
    let rhs = beta * value.carrier();
    let lhs = lhs.truncate_above(x.dim());
    let rhs = rhs.truncate_above(x.dim());
    Ok(CheckReport::compare(
        &format!("module/{which}"),
        format!("{beta}; {a}"),
        &lhs,
        &rhs,
    ))
}

/// Law (i): `γ(α•β) = γ(α)•γ(β)`.
pub fn law_product(
    which: Transformation,
    a: &BivariantElement,
    b: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = which.apply(&product(a, b)?)?;
    let rhs = which.apply(a)?.product(&which.apply(b)?)?;
    Ok(CheckReport::compare(
        &format!("law-product/{which}"),
        format!("{a}; {b}"),
        &lhs,
        &rhs,
    ))
}

/// Law (ii): `γ(f_*α) = f_*γ(α)`.
pub fn law_pushforward(
    which: Transformation,
    f: &Morphism,
    g: &Morphism,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = which.apply(&pushforward(f, g, a)?)?;
    let rhs = which.apply(a)?.pushforward(f, g)?;
    Ok(CheckReport::compare(
        &format!("law-pushforward/{which}"),
        format!("{f}; {a}"),
        &lhs,
        &rhs,
    ))
}

/// Law (iii): `γ(g^*α) = g^*γ(α)`, on squares without excess dimension.
pub fn law_pullback(
    which: Transformation,
    g: &Morphism,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let rhs = which.apply(a)?.pullback(g)?;
    let lhs = which.apply(&pullback(g, a)?)?;
    Ok(CheckReport::compare(
        &format!("law-pullback/{which}"),
        format!("{g}; {a}"),
        &lhs,
        &rhs,
    ))
}

/// `t_y` at `y = -1, 0, 1` against `γ` for the Chern, Todd and L classes,
/// and `λ` at `y = 0` against `γ(todd)`.
pub fn specialization_checks(a: &BivariantElement) -> Result<Vec<CheckReport>, Error> {
    let ty = Transformation::Ty.apply(a)?;
    let mut out = Vec::new();
    for (y, name) in [
        (-1, SeriesName::Chern),
        (0, SeriesName::Todd),
        (1, SeriesName::LClass),
    ] {
        let gamma = Transformation::Gamma(name).apply(a)?;
        out.push(CheckReport::compare(
            &format!("specialization/y={y}"),
            a.to_string(),
            &ty.eval_y(y),
            &gamma,
        ));
    }
    let lambda = Transformation::Lambda.apply(a)?.eval_y(0);
    let todd = Transformation::Gamma(SeriesName::Todd).apply(a)?;
    out.push(CheckReport::compare(
        "specialization/lambda-y=0",
        a.to_string(),
        &lambda,
        &todd,
    ));
    Ok(out)
}

/// `t_y` read covariantly against `h_*(T*_y(TV))` summed directly.
pub fn covariant_agreement_check(a: &BivariantElement) -> Result<CheckReport, Error> {
    let lhs = covariant_restrict(&Transformation::Ty.apply(a)?)?;
    let direct = t_y_direct(a)?;
    let rhs = CovariantClass::new(a.reference().source(), direct.carrier().clone())?;
    Ok(CheckReport::compare(
        "covariant-agreement",
        a.to_string(),
        &lhs,
        &rhs,
    ))
}

/// `∫_X t_y([X -id-> X] over X → pt) = χ_y(X)`.
pub fn genus_consistency_check(x: &Variety) -> Result<CheckReport, Error> {
    let a = theta(&to_point(x))?;
    let lhs = covariant_restrict(&Transformation::Ty.apply(&a)?)?.degree();
    Ok(CheckReport::compare(
        "genus-consistency",
        x.key(),
        &lhs,
        &chi_y(x),
    ))
}
