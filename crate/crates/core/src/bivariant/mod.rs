//! The free bivariant theory of proper maps with smooth composites: its
//! generators, the three operations, units, the orientation and Gysin maps.

pub mod axioms;

use std::collections::BTreeMap;
use std::fmt;

use crate::varmodel::{compose, factor_automorphisms, fiber_product, identity, Morphism, Variety};
use crate::Error;

/// A generator `[V -h-> X]` over a reference `f: X → Y`, with `h` proper and
/// `f∘h` smooth.
#[derive(Clone, Debug)]
pub struct Generator {
    h: Morphism,
    reference: Morphism,
    composite: Morphism,
    class_key: String,
}

impl Generator {
    /// Validates a user-supplied generator.
    pub fn new(h: &Morphism, reference: &Morphism) -> Result<Self, Error> {
        if h.target() != reference.source() {
            return Err(Error::ReferenceMismatch {
                expected: reference.source().key().to_string(),
                found: h.target().key().to_string(),
            });
        }
        if !h.is_proper() {
            return Err(Error::NotProper(h.to_string()));
        }
        let composite = compose(reference, h);
        if !composite.is_smooth() {
            return Err(Error::CompositeNotSmooth(composite.to_string()));
        }
        Ok(Generator {
            h: h.clone(),
            reference: reference.clone(),
            composite,
            class_key: class_key(h),
        })
    }

    /// A generator produced by one of the operations, whose composite is
    /// smooth as a base change or composite of smooth maps even where the
    /// structural flags cannot see it.
    fn derived(h: &Morphism, reference: &Morphism) -> Self {
        let composite = compose(reference, h);
        let composite = if composite.is_smooth() {
            composite
        } else {
            composite.assume_smooth()
        };
        Generator {
            h: h.clone(),
            reference: reference.clone(),
            composite,
            class_key: class_key(h),
        }
    }

    pub fn map(&self) -> &Morphism {
        &self.h
    }

    pub fn space(&self) -> &Variety {
        self.h.source()
    }

    pub fn reference(&self) -> &Morphism {
        &self.reference
    }

    /// The smooth composite `f∘h`.
    pub fn composite(&self) -> &Morphism {
        &self.composite
    }

    /// Identity of the generator up to isomorphism over `X`: the least key
    /// of `h∘σ` over the factor automorphisms `σ` of `V`.
    pub fn key(&self) -> &str {
        &self.class_key
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.class_key)
    }
}

fn class_key(h: &Morphism) -> String {
    factor_automorphisms(h.source())
        .iter()
        .map(|s| compose(h, s).key().to_string())
        .min()
        .expect("identity is always an automorphism")
}

/// A finite ℤ-combination of generators sharing one reference.
#[derive(Clone, Debug)]
pub struct BivariantElement {
    reference: Morphism,
    terms: BTreeMap<String, (Generator, i64)>,
}

impl BivariantElement {
    pub fn zero(reference: &Morphism) -> Self {
        BivariantElement {
            reference: reference.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_generator(g: Generator) -> Self {
        let mut e = Self::zero(&g.reference);
        e.add_term(g, 1);
        e
    }

    /// `[V -h-> X]` over `reference`, validated.
    pub fn generator(h: &Morphism, reference: &Morphism) -> Result<Self, Error> {
        Ok(Self::from_generator(Generator::new(h, reference)?))
    }

    pub fn reference(&self) -> &Morphism {
        &self.reference
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, i64)> {
        self.terms.values().map(|(g, c)| (g, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, g: Generator, c: i64) {
        if c == 0 {
            return;
        }
        let key = g.key().to_string();
        let entry = self.terms.entry(key.clone()).or_insert((g, 0));
        entry.1 += c;
        if entry.1 == 0 {
            self.terms.remove(&key);
        }
    }

    fn check_reference(&self, other: &BivariantElement) -> Result<(), Error> {
        if !self.reference.same(&other.reference) {
            return Err(Error::ReferenceMismatch {
                expected: self.reference.key().to_string(),
                found: other.reference.key().to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &BivariantElement) -> Result<Self, Error> {
        self.check_reference(other)?;
        let mut out = self.clone();
        for (g, c) in other.terms() {
            out.add_term(g.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BivariantElement) -> Result<Self, Error> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero(&self.reference);
        for (g, c) in self.terms() {
            out.add_term(g.clone(), c * k);
        }
        out
    }
}

impl PartialEq for BivariantElement {
    fn eq(&self, other: &Self) -> bool {
        self.reference.same(&other.reference)
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((k1, (_, c1)), (k2, (_, c2)))| k1 == k2 && c1 == c2)
    }
}

impl fmt::Display for BivariantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 over {}", self.reference.key());
        }
        for (i, (g, c)) in self.terms().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, " over {}", self.reference.key())
    }
}

fn generator_product(p: &Generator, k: &Generator) -> Result<Generator, Error> {
    // X' = X ×_Y W, then V' = V ×_X X'
    let f = p.reference();
    let outer = fiber_product(f, k.map())?;
    let inner = fiber_product(p.map(), &outer.to_x)?;
    let h = compose(p.map(), &inner.to_x);
    Ok(Generator::derived(&h, &compose(k.reference(), f)))
}

/// `α • β` for `α` over `f: X → Y` and `β` over `g: Y → Z`; the result is
/// over `g∘f`.
pub fn product(a: &BivariantElement, b: &BivariantElement) -> Result<BivariantElement, Error> {
    let (f, g) = (a.reference(), b.reference());
    if f.target() != g.source() {
        return Err(Error::ReferenceMismatch {
            expected: f.target().key().to_string(),
            found: g.source().key().to_string(),
        });
    }
    let mut out = BivariantElement::zero(&compose(g, f));
    for (p, c) in a.terms() {
        for (k, d) in b.terms() {
            out.add_term(generator_product(p, k)?, c * d);
        }
    }
    Ok(out)
}

/// `f_*` from elements over `g∘f` to elements over `g`.
pub fn pushforward(
    f: &Morphism,
    g: &Morphism,
    a: &BivariantElement,
) -> Result<BivariantElement, Error> {
    let gf = compose(g, f);
    if !a.reference().same(&gf) {
        return Err(Error::ReferenceMismatch {
            expected: gf.key().to_string(),
            found: a.reference().key().to_string(),
        });
    }
    if !f.is_proper() {
        return Err(Error::NotProper(f.to_string()));
    }
    let mut out = BivariantElement::zero(g);
    for (p, c) in a.terms() {
        out.add_term(Generator::derived(&compose(f, p.map()), g), c);
    }
    Ok(out)
}

/// `g^*` along `g: Y' → Y` for elements over `f: X → Y`; the result is over
/// the base change `f': X' → Y'`.
pub fn pullback(g: &Morphism, a: &BivariantElement) -> Result<BivariantElement, Error> {
    let f = a.reference();
    let sq = fiber_product(f, g)?;
    let mut out = BivariantElement::zero(&sq.to_w);
    for (p, c) in a.terms() {
        let inner = fiber_product(p.map(), &sq.to_x)?;
        out.add_term(Generator::derived(&inner.to_w, &sq.to_w), c);
    }
    Ok(out)
}

/// `θ(f) = [X -id-> X]` over a smooth `f`.
pub fn theta(f: &Morphism) -> Result<BivariantElement, Error> {
    if !f.is_smooth() {
        return Err(Error::NotSmooth(f.to_string()));
    }
    Ok(BivariantElement::from_generator(Generator::derived(
        &identity(f.source()),
        f,
    )))
}

/// The unit `1_X = θ(id_X)`.
pub fn unit(x: &Variety) -> BivariantElement {
    theta(&identity(x)).expect("identity is smooth")
}

/// `f^!(α) = θ(f) • α` for smooth `f: X → Y` and `α` over `g: Y → Z`.
pub fn gysin_pull(f: &Morphism, a: &BivariantElement) -> Result<BivariantElement, Error> {
    product(&theta(f)?, a)
}

/// `g_!(α) = g'_*(α • θ(g))` for the square of `f: X → Y` and a smooth `g: Y' → Y`,
/// with `α` over the base change `f': X' → Y'`.
pub fn gysin_push(
    g: &Morphism,
    f: &Morphism,
    a: &BivariantElement,
) -> Result<BivariantElement, Error> {
    if !g.is_smooth() {
        return Err(Error::NotSmooth(g.to_string()));
    }
    let sq = fiber_product(f, g)?;
    if !a.reference().same(&sq.to_w) {
        return Err(Error::ReferenceMismatch {
            expected: sq.to_w.key().to_string(),
            found: a.reference().key().to_string(),
        });
    }
    let twisted = product(a, &theta(g)?)?;
    let relabelled = relabel(&twisted, &compose(f, &sq.to_x))?;
    pushforward(&sq.to_x, f, &relabelled)
}

/// The same element viewed over an equal reference built another way.
fn relabel(a: &BivariantElement, reference: &Morphism) -> Result<BivariantElement, Error> {
    if !a.reference().same(reference) {
        return Err(Error::ReferenceMismatch {
            expected: reference.key().to_string(),
            found: a.reference().key().to_string(),
        });
    }
    let mut out = BivariantElement::zero(reference);
    for (p, c) in a.terms() {
        out.add_term(Generator::derived(p.map(), reference), c);
    }
    Ok(out)
}

/// Moves `a`, over `f_a: X → Y'` with further legs `p_a`, to another
/// representation `(f_b, p_b)` of the same fiber product. The comparison
/// isomorphism is the factor automorphism `ρ` with `f_b∘ρ = f_a` and
/// `p_b∘ρ = p_a` leg by leg; generators `[V -h-> X]` become `[V -ρ∘h-> X]`.
pub fn align(
    a: &BivariantElement,
    p_a: &[Morphism],
    f_b: &Morphism,
    p_b: &[Morphism],
) -> Result<BivariantElement, Error> {
    let f_a = a.reference();
    let mismatch = || Error::ReferenceMismatch {
        expected: f_b.key().to_string(),
        found: f_a.key().to_string(),
    };
    let x = f_a.source();
    if f_b.source() != x || p_a.len() != p_b.len() || p_a.iter().chain(p_b).any(|p| p.source() != x)
    {
        return Err(mismatch());
    }
    let rho = factor_automorphisms(x)
        .into_iter()
        .find(|r| {
            compose(f_b, r).same(f_a) && p_a.iter().zip(p_b).all(|(pa, pb)| compose(pb, r).same(pa))
        })
        .ok_or_else(mismatch)?;
    let mut out = BivariantElement::zero(f_b);
    for (g, c) in a.terms() {
        out.add_term(Generator::derived(&compose(&rho, g.map()), f_b), c);
    }
    Ok(out)
}
