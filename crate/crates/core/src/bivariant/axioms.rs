//! Both sides of each bivariant axiom, evaluated on concrete data.
//!
//! Every check returns `Err(UnsupportedFiberProduct)` when a required square
//! lies outside the catalogue; callers count that as unsupported, not failed.

use std::fmt;
use std::str::FromStr;

use super::{align, product, pullback, pushforward, theta, unit, BivariantElement};
use crate::report::CheckReport;
use crate::varmodel::{compose, fiber_product, Morphism};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomCode {
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    B7,
    Units,
    ThetaStability,
    Commutativity,
}

impl AxiomCode {
    pub const ALL: [AxiomCode; 10] = [
        AxiomCode::B1,
        AxiomCode::B2,
        AxiomCode::B3,
        AxiomCode::B4,
        AxiomCode::B5,
        AxiomCode::B6,
        AxiomCode::B7,
        AxiomCode::Units,
        AxiomCode::ThetaStability,
        AxiomCode::Commutativity,
    ];

    /// The seven numbered axioms.
    pub const NUMBERED: [AxiomCode; 7] = [
        AxiomCode::B1,
        AxiomCode::B2,
        AxiomCode::B3,
        AxiomCode::B4,
        AxiomCode::B5,
        AxiomCode::B6,
        AxiomCode::B7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomCode::B1 => "B1",
            AxiomCode::B2 => "B2",
            AxiomCode::B3 => "B3",
            AxiomCode::B4 => "B4",
            AxiomCode::B5 => "B5",
            AxiomCode::B6 => "B6",
            AxiomCode::B7 => "B7",
            AxiomCode::Units => "units",
            AxiomCode::ThetaStability => "theta-stability",
            AxiomCode::Commutativity => "commutativity",
        }
    }
}

impl fmt::Display for AxiomCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        AxiomCode::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameters(format!("unknown axiom code {s}")))
    }
}

fn inputs(parts: &[&dyn fmt::Display]) -> String {
    parts
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `(α•β)•γ = α•(β•γ)`.
pub fn associativity(
    a: &BivariantElement,
    b: &BivariantElement,
    c: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = product(&product(a, b)?, c)?;
    let rhs = product(a, &product(b, c)?)?;
    Ok(CheckReport::compare(
        AxiomCode::B1.as_str(),
        inputs(&[a, b, c]),
        &lhs,
        &rhs,
    ))
}

/// `(g∘f)_* α = g_*(f_* α)` for `f: X → Y`, `g: Y → Z` and `α` over `h∘g∘f`.
pub fn pushforward_functoriality(
    f: &Morphism,
    g: &Morphism,
    h: &Morphism,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let lhs = pushforward(&compose(g, f), h, a)?;
    let rhs = pushforward(g, h, &pushforward(f, &compose(h, g), a)?)?;
    Ok(CheckReport::compare(
        AxiomCode::B2.as_str(),
        inputs(&[f, g, h, a]),
        &lhs,
        &rhs,
    ))
}

/// `(g∘h)^* α = h^*(g^* α)` for `h: Y'' → Y'`, `g: Y' → Y`.
pub fn pullback_functoriality(
    g: &Morphism,
    h: &Morphism,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let f = a.reference();
    let direct = fiber_product(f, &compose(g, h))?;
    let first = fiber_product(f, g)?;
    let second = fiber_product(&first.to_w, h)?;
    let lhs = pullback(&compose(g, h), a)?;
    let rhs = pullback(h, &pullback(g, a)?)?;
    let lhs = align(
        &lhs,
        &[direct.to_x],
        rhs.reference(),
        &[compose(&first.to_x, &second.to_x)],
    )?;
    Ok(CheckReport::compare(
        AxiomCode::B3.as_str(),
        inputs(&[g, h, a]),
        &lhs,
        &rhs,
    ))
}

/// `f_*(α•β) = (f_*α)•β` for `α` over `g∘f`, `β` over `h`.
pub fn product_pushforward(
    f: &Morphism,
    g: &Morphism,
    a: &BivariantElement,
    b: &BivariantElement,
) -> Result<CheckReport, Error> {
    let h = b.reference();
    let lhs = pushforward(f, &compose(h, g), &product(a, b)?)?;
    let rhs = product(&pushforward(f, g, a)?, b)?;
    Ok(CheckReport::compare(
        AxiomCode::B4.as_str(),
        inputs(&[f, a, b]),
        &lhs,
        &rhs,
    ))
}

/// `h^*(α•β) = h'^*α • h^*β` for `α` over `f: X → Y`, `β` over `g: Y → Z`
/// and `h: Z' → Z`, where `h'` is the base change of `h` along `g`.
pub fn product_pullback(
    h: &Morphism,
    a: &BivariantElement,
    b: &BivariantElement,
) -> Result<CheckReport, Error> {
    let sq = fiber_product(b.reference(), h)?;
    let direct = fiber_product(&compose(b.reference(), a.reference()), h)?;
    let inner = fiber_product(a.reference(), &sq.to_x)?;
    let lhs = pullback(h, &product(a, b)?)?;
    let rhs = product(&pullback(&sq.to_x, a)?, &pullback(h, b)?)?;
    let lhs = align(&lhs, &[direct.to_x], rhs.reference(), &[inner.to_x])?;
    Ok(CheckReport::compare(
        AxiomCode::B5.as_str(),
        inputs(&[h, a, b]),
        &lhs,
        &rhs,
    ))
}

/// `f'_*(h^*α) = h^*(f_*α)` for `f: X → Y`, `α` over `g∘f` and `h: Z' → Z`.
pub fn pushforward_pullback(
    f: &Morphism,
    g: &Morphism,
    h: &Morphism,
    a: &BivariantElement,
) -> Result<CheckReport, Error> {
    let outer = fiber_product(g, h)?;
    let inner = fiber_product(f, &outer.to_x)?;
    let direct = fiber_product(&compose(g, f), h)?;
    let pulled = align(
        &pullback(h, a)?,
        &[direct.to_x],
        &compose(&outer.to_w, &inner.to_w),
        &[inner.to_x],
    )?;
    let lhs = pushforward(&inner.to_w, &outer.to_w, &pulled)?;
    let rhs = pullback(h, &pushforward(f, g, a)?)?;
    Ok(CheckReport::compare(
        AxiomCode::B6.as_str(),
        inputs(&[f, g, h, a]),
        &lhs,
        &rhs,
    ))
}

/// `g'_*(g^*α • β) = α • g_*β` for `α` over `f: X → Y`, proper `g: Y' → Y`,
/// `h: Y → Z` and `β` over `h∘g`.
pub fn projection_formula(
    g: &Morphism,
    h: &Morphism,
    a: &BivariantElement,
    b: &BivariantElement,
) -> Result<CheckReport, Error> {
    let f = a.reference();
    let sq = fiber_product(f, g)?;
    let lhs = pushforward(&sq.to_x, &compose(h, f), &product(&pullback(g, a)?, b)?)?;
    let rhs = product(a, &pushforward(g, h, b)?)?;
    Ok(CheckReport::compare(
        AxiomCode::B7.as_str(),
        inputs(&[g, h, a, b]),
        &lhs,
        &rhs,
    ))
}

/// `1_X • α = α`, `α • 1_Y = α` and `g^* 1_Y = 1_{Y'}`.
pub fn unit_laws(a: &BivariantElement, g: Option<&Morphism>) -> Result<Vec<CheckReport>, Error> {
    let f = a.reference();
    let code = AxiomCode::Units.as_str();
    let mut out = vec![
        CheckReport::compare(
            code,
            inputs(&[&"left", a]),
            &product(&unit(f.source()), a)?,
            a,
        ),
        CheckReport::compare(
            code,
            inputs(&[&"right", a]),
            &product(a, &unit(f.target()))?,
            a,
        ),
    ];
    if let Some(g) = g {
        out.push(CheckReport::compare(
            code,
            inputs(&[&"pullback", g]),
            &pullback(g, &unit(g.target()))?,
            &unit(g.source()),
        ));
    }
    Ok(out)
}

/// `θ(g∘f) = θ(f)•θ(g)` for smooth `f`, `g`.
pub fn theta_multiplicative(f: &Morphism, g: &Morphism) -> Result<CheckReport, Error> {
    let lhs = theta(&compose(g, f))?;
    let rhs = product(&theta(f)?, &theta(g)?)?;
    Ok(CheckReport::compare(
        AxiomCode::ThetaStability.as_str(),
        inputs(&[&"composite", f, g]),
        &lhs,
        &rhs,
    ))
}

/// `θ(f') = g^*θ(f)` for smooth `f` and its base change `f'` along `g`, with
/// the relative tangent data of `f'` equal to the pullback of that of `f`.
pub fn theta_stability(f: &Morphism, g: &Morphism) -> Result<Vec<CheckReport>, Error> {
    let sq = fiber_product(f, g)?;
    let code = AxiomCode::ThetaStability.as_str();
    let f_prime = if sq.to_w.is_smooth() {
        sq.to_w.clone()
    } else {
        sq.to_w.assume_smooth()
    };
    let mut out = vec![CheckReport::compare(
        code,
        inputs(&[&"base change", f, g]),
        &pullback(g, &theta(f)?)?,
        &theta(&f_prime)?,
    )];
    if sq.to_w.is_smooth() {
        let t_prime = sq.to_w.relative_tangent()?.total_chern().clone();
        let pulled = sq
            .to_x
            .pullback_class(f.relative_tangent()?.total_chern())?;
        out.push(CheckReport::compare(
            code,
            inputs(&[&"tangent", f, g]),
            &t_prime,
            &pulled,
        ));
    }
    Ok(out)
}

/// `g^*(α)•β = f^*(β)•α` for `α` over `f: X → Y`, `β` over `g: Y' → Y`.
/// Reported, not asserted.
pub fn commutativity(a: &BivariantElement, b: &BivariantElement) -> Result<CheckReport, Error> {
    let (f, g) = (a.reference(), b.reference());
    let sq = fiber_product(f, g)?;
    let flipped = fiber_product(g, f)?;
    let lhs = product(&pullback(g, a)?, b)?;
    let rhs = product(&pullback(f, b)?, a)?;
    let lhs = align(
        &lhs,
        &[sq.to_x, sq.to_w],
        rhs.reference(),
        &[flipped.to_w, flipped.to_x],
    )?;
    Ok(CheckReport::compare(
        AxiomCode::Commutativity.as_str(),
        inputs(&[a, b]),
        &lhs,
        &rhs,
    ))
}
