//! Blow-up relations and the quotient of the free bivariant theory by them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::bivariant::{self, BivariantElement, Generator};
use crate::exactalg::linalg::rref;
use crate::exactalg::{int, Rational};
use crate::genus::chi_y;
use crate::varmodel::{
    blow_down, center_embedding, compose, exceptional_divisor, exceptional_inclusion, identity,
    linear_embedding, make_blowup_linear, make_proj, to_point, Construction, Morphism, Variety,
};
use crate::{Error, YPolynomial};

/// `S = P^m ⊂ X' = P^n` blown up, mapped to `X` by `h` and referenced over
/// `f: X → Y`, with the derived corners `Bl`, `E`, `q`, `q'`, `i'`.
#[derive(Clone, Debug)]
pub struct BlowupDiagram {
    n: usize,
    m: usize,
    h: Morphism,
    f: Morphism,
    i: Morphism,
    blowup: Variety,
    q: Morphism,
    exceptional: Variety,
    q_prime: Morphism,
    i_prime: Morphism,
}

impl BlowupDiagram {
    pub fn new(n: usize, m: usize, h: &Morphism, f: &Morphism) -> Result<Self, Error> {
        let invalid = |msg: String| Error::InvalidDiagram(msg);
        if m >= n {
            return Err(invalid(format!(
                "center P({m}) must be a proper subspace of P({n})"
            )));
        }
        if h.source() != &make_proj(n) {
            return Err(invalid(format!(
                "h must start at P({n}), found {}",
                h.source()
            )));
        }
        if h.target() != f.source() {
            return Err(invalid(format!(
                "h lands in {} but f starts at {}",
                h.target(),
                f.source()
            )));
        }
        if !h.is_proper() {
            return Err(invalid(format!("h is not proper: {h}")));
        }
        let i = center_embedding(m, n)?;
        let fh = compose(f, h);
        if !fh.is_smooth() {
            return Err(invalid(format!("f∘h is not smooth: {fh}")));
        }
        if !compose(&fh, &i).is_smooth() {
            return Err(invalid(format!(
                "f∘h∘i is not smooth for the center P({m})"
            )));
        }
        let e = exceptional_divisor(n, m)?;
        Ok(BlowupDiagram {
            n,
            m,
            h: h.clone(),
            f: f.clone(),
            i,
            blowup: make_blowup_linear(n, m)?,
            q: blow_down(n, m)?,
            exceptional: e.variety.clone(),
            q_prime: e.projection.clone(),
            i_prime: exceptional_inclusion(n, m)?,
        })
    }

    /// `P^m ⊂ P^n` over `P^n → pt` with `h = id`.
    pub fn absolute(n: usize, m: usize) -> Result<Self, Error> {
        let x = make_proj(n);
        Self::new(n, m, &identity(&x), &to_point(&x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> &Morphism {
        &self.h
    }

    pub fn reference(&self) -> &Morphism {
        &self.f
    }

    pub fn center(&self) -> &Morphism {
        &self.i
    }

    pub fn blowup(&self) -> &Variety {
        &self.blowup
    }

    pub fn blow_down(&self) -> &Morphism {
        &self.q
    }

    pub fn exceptional(&self) -> &Variety {
        &self.exceptional
    }

    pub fn exceptional_projection(&self) -> &Morphism {
        &self.q_prime
    }

    pub fn exceptional_inclusion(&self) -> &Morphism {
        &self.i_prime
    }

    /// The same blow-up seen over `g` after pushing along `f₁`, i.e. with
    /// `h` replaced by `f₁∘h` and reference `g`, where `f = g∘f₁`.
    pub fn pushed(&self, f1: &Morphism, g: &Morphism) -> Result<Self, Error> {
        if !compose(g, f1).same(&self.f) {
            return Err(Error::ReferenceMismatch {
                expected: self.f.key().to_string(),
                found: compose(g, f1).key().to_string(),
            });
        }
        Self::new(self.n, self.m, &compose(f1, &self.h), g)
    }

    /// The four corner maps to `X` with their signs.
    pub fn corners(&self) -> [(Morphism, i64); 4] {
        let hi = compose(&self.h, &self.i);
        [
            (compose(&self.h, &self.q), 1),
            (compose(&hi, &self.q_prime), -1),
            (self.h.clone(), -1),
            (hi, 1),
        ]
    }
}

impl fmt::Display for BlowupDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bl(P({}),P({})) via {} over {}",
            self.n,
            self.m,
            self.h.key(),
            self.f.key()
        )
    }
}

/// `[Bl → X] − [E → X] − [X' → X] + [S → X]` over the diagram's reference.
#[derive(Clone, Debug)]
pub struct RelationElement {
    diagram: BlowupDiagram,
    element: BivariantElement,
}

impl RelationElement {
    pub fn diagram(&self) -> &BlowupDiagram {
        &self.diagram
    }

    pub fn element(&self) -> &BivariantElement {
        &self.element
    }
}

impl fmt::Display for RelationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.element)
    }
}

pub fn blowup_relation_element(d: &BlowupDiagram) -> Result<RelationElement, Error> {
    let mut element = BivariantElement::zero(&d.f);
    for (map, sign) in d.corners() {
        let g = Generator::new(&map, &d.f)
            .map_err(|e| Error::InvalidDiagram(format!("corner {map}: {e}")))?;
        element = element.add(&BivariantElement::from_generator(g).scale(sign))?;
    }
    Ok(RelationElement {
        diagram: d.clone(),
        element,
    })
}

/// For `Y = pt`: the relation together with its reading as the classical
/// blow-up relation in the relative Grothendieck group of `X`.
pub fn point_specialization_pair(d: &BlowupDiagram) -> Result<(RelationElement, String), Error> {
    if !d.f.target().is_point() {
        return Err(Error::InvalidDiagram(format!(
            "reference target {} is not a point",
            d.f.target()
        )));
    }
    let rel = blowup_relation_element(d)?;
    let x = d.f.source().key();
    let desc = format!(
        "[{} -> {x}] - [{} -> {x}] = [{} -> {x}] - [{} -> {x}]",
        d.blowup.key(),
        d.exceptional.key(),
        d.h.source().key(),
        d.i.source().key()
    );
    Ok((rel, desc))
}

/// `Σ c · χ_y(V)` over the generators of `a`.
pub fn chi_y_shadow(a: &BivariantElement) -> YPolynomial {
    a.terms().fold(YPolynomial::zero(), |acc, (g, c)| {
        &acc + &chi_y(g.space()).scale(&int(c))
    })
}

/// Diagrams over `f` with `dim X' ≤ max_n` whose `h` is a linear embedding,
/// the identity, or the map to a point, as the shape of `X` allows.
pub fn diagrams_over(f: &Morphism, max_n: usize) -> Vec<BlowupDiagram> {
    let x = f.source();
    let mut out = Vec::new();
    for n in 1..=max_n {
        let h = match x.construction() {
            Construction::Point => to_point(&make_proj(n)),
            Construction::Proj(big) if n == *big => identity(x),
            Construction::Proj(big) if n < *big => match linear_embedding(n, *big) {
                Ok(h) => h,
                Err(_) => continue,
            },
            _ => continue,
        };
        for m in 0..n {
            if let Ok(d) = BlowupDiagram::new(n, m, &h, f) {
                out.push(d);
            }
        }
    }
    out
}

/// An element of the quotient by blow-up relations, held by a representative.
#[derive(Clone, Debug)]
pub struct K0Element {
    representative: BivariantElement,
}

pub fn k0_project(a: &BivariantElement) -> K0Element {
    K0Element {
        representative: a.clone(),
    }
}

impl K0Element {
    pub fn representative(&self) -> &BivariantElement {
        &self.representative
    }

    pub fn unit(x: &Variety) -> Self {
        k0_project(&bivariant::unit(x))
    }

    pub fn product(&self, other: &K0Element) -> Result<Self, Error> {
        Ok(k0_project(&bivariant::product(
            &self.representative,
            &other.representative,
        )?))
    }

    pub fn pushforward(&self, f: &Morphism, g: &Morphism) -> Result<Self, Error> {
        Ok(k0_project(&bivariant::pushforward(
            f,
            g,
            &self.representative,
        )?))
    }

    pub fn pullback(&self, g: &Morphism) -> Result<Self, Error> {
        Ok(k0_project(&bivariant::pullback(g, &self.representative)?))
    }

    pub fn sub(&self, other: &K0Element) -> Result<Self, Error> {
        Ok(k0_project(&self.representative.sub(&other.representative)?))
    }

    /// Integer coefficients `c` with `representative = Σ c_j relations_j`,
    /// if the bounded search finds them.
    pub fn zero_witness(&self, relations: &[RelationElement]) -> Option<Vec<i64>> {
        find_witness(&self.representative, relations)
    }

    /// Equality in the quotient, witnessed by relations; `false` means no
    /// witness was found, not that the classes differ.
    pub fn witnessed_equal(
        &self,
        other: &K0Element,
        relations: &[RelationElement],
    ) -> Result<bool, Error> {
        Ok(self.sub(other)?.zero_witness(relations).is_some())
    }
}

/// Free coefficients tried when the rational solution is not integral.
const WITNESS_SEARCH_BOUND: i64 = 2;
const WITNESS_SEARCH_FREE: usize = 4;

fn find_witness(a: &BivariantElement, relations: &[RelationElement]) -> Option<Vec<i64>> {
    if relations
        .iter()
        .any(|r| !r.element.reference().same(a.reference()))
    {
        return None;
    }
    let mut keys: BTreeMap<String, usize> = BTreeMap::new();
    for (g, _) in a
        .terms()
        .chain(relations.iter().flat_map(|r| r.element.terms()))
    {
        let k = keys.len();
        keys.entry(g.key().to_string()).or_insert(k);
    }
    let k = relations.len();
    let mut rows = vec![vec![Rational::zero(); k + 1]; keys.len()];
    for (j, r) in relations.iter().enumerate() {
        for (g, c) in r.element.terms() {
            rows[keys[g.key()]][j] = int(c);
        }
    }
    for (g, c) in a.terms() {
        rows[keys[g.key()]][k] = int(c);
    }
    let pivots = rref(&mut rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let free: Vec<usize> = (0..k).filter(|j| !pivots.contains(j)).collect();
    let solve = |free_vals: &[i64]| -> Option<Vec<i64>> {
        let mut x = vec![Rational::zero(); k];
        for (&j, &v) in free.iter().zip(free_vals) {
            x[j] = int(v);
        }
        for (row, &p) in rows.iter().zip(&pivots) {
            let mut v = row[k].clone();
            for &j in &free {
                v -= &row[j] * &x[j];
            }
            x[p] = v;
        }
        x.iter()
            .map(|v| {
                if v.is_integer() {
                    v.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    };
    let searched = free.len().min(WITNESS_SEARCH_FREE);
    let width = (2 * WITNESS_SEARCH_BOUND + 1) as usize;
    (0..width.pow(searched as u32)).find_map(|mut code| {
        let mut vals = vec![0i64; free.len()];
        for v in vals.iter_mut().take(searched) {
            *v = (code % width) as i64 - WITNESS_SEARCH_BOUND;
            code /= width;
        }
        solve(&vals)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_point_relation_has_four_terms() {
        let d = BlowupDiagram::absolute(2, 0).unwrap();
        let rel = blowup_relation_element(&d).unwrap();
        assert_eq!(rel.element().len(), 4);
        let spaces: Vec<(String, i64)> = rel
            .element()
            .terms()
            .map(|(g, c)| (g.space().key().to_string(), c))
            .collect();
        assert!(spaces.contains(&("blowup(P(2),P(0))".into(), 1)));
        assert!(spaces.contains(&("P(2)".into(), -1)));
        assert!(spaces.contains(&("pt".into(), 1)));
        assert!(spaces.contains(&("P(1)".into(), -1)));
        assert!(chi_y_shadow(rel.element()).is_zero());
    }

    #[test]
    fn invalid_diagrams_are_rejected() {
        let p2 = make_proj(2);
        assert!(matches!(
            BlowupDiagram::new(2, 0, &identity(&p2), &identity(&p2)),
            Err(Error::InvalidDiagram(_))
        ));
        assert!(matches!(
            BlowupDiagram::new(2, 2, &identity(&p2), &to_point(&p2)),
            Err(Error::InvalidDiagram(_))
        ));
        assert!(matches!(
            BlowupDiagram::new(3, 0, &identity(&p2), &to_point(&p2)),
            Err(Error::InvalidDiagram(_))
        ));
    }

    #[test]
    fn relation_projects_to_zero() {
        let d = BlowupDiagram::absolute(3, 1).unwrap();
        let rel = blowup_relation_element(&d).unwrap();
        let twice = k0_project(&rel.element().scale(-2));
        assert_eq!(
            twice.zero_witness(std::slice::from_ref(&rel)),
            Some(vec![-2])
        );
        let p3 = make_proj(3);
        let other =
            k0_project(&BivariantElement::generator(&identity(&p3), &to_point(&p3)).unwrap());
        assert_eq!(other.zero_witness(&[rel]), None);
    }

    #[test]
    fn point_specialization_reads_as_classical_relation() {
        let (_, desc) = point_specialization_pair(&BlowupDiagram::absolute(2, 0).unwrap()).unwrap();
        assert_eq!(
            desc,
            "[blowup(P(2),P(0)) -> P(2)] - [P(1) -> P(2)] = [P(2) -> P(2)] - [pt -> P(2)]"
        );
    }
}
