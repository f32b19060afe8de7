//! Grothendieck transformations out of the free bivariant theory into
//! `CH*(X) ⊗ ℚ[y]` on smooth sources, and the Riemann–Roch squares.

pub mod checks;

use std::fmt;

use crate::bivariant::BivariantElement;
use crate::exactalg::int;
use crate::genus::{
    hirzebruch_class, multiplicative_class, unnormalized_ty_class, GenusSeries, SeriesName,
};
use crate::varmodel::{compose, fiber_product, BundleClass, Morphism, Variety};
use crate::{Error, GradedClass, YPolynomial};

/// A target class over `f: X → Y`, carried by a class on `X`. The
/// orientation `[f]` sits in bivariant degree `-rank`, `rank = dim X - dim Y`.
#[derive(Clone, Debug)]
pub struct BivariantTargetClass {
    reference: Morphism,
    carrier: GradedClass,
    rank: i64,
}

impl BivariantTargetClass {
    pub fn new(reference: &Morphism, carrier: GradedClass) -> Result<Self, Error> {
        let x = reference.source();
        if !carrier.same_ambient(&GradedClass::one(x.ring())) {
            return Err(Error::AmbientMismatch(
                carrier.ring().key().to_string(),
                x.key().to_string(),
            ));
        }
        Ok(BivariantTargetClass {
            reference: reference.clone(),
            carrier: carrier.truncate_above(x.dim()),
            rank: reference.relative_dim(),
        })
    }

    pub fn zero(reference: &Morphism) -> Self {
        Self::new(reference, GradedClass::zero(reference.source().ring()))
            .expect("zero lives on the source")
    }

    pub fn reference(&self) -> &Morphism {
        &self.reference
    }

    pub fn carrier(&self) -> &GradedClass {
        &self.carrier
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.carrier.is_zero()
    }

    /// Bivariant degree of the codimension-`c` part.
    pub fn bivariant_degree(&self, codim: usize) -> i64 {
        codim as i64 - self.rank
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if !self.reference.same(&other.reference) {
            return Err(Error::ReferenceMismatch {
                expected: self.reference.key().to_string(),
                found: other.reference.key().to_string(),
            });
        }
        Self::new(&self.reference, &self.carrier + &other.carrier)
    }

    pub fn eval_y(&self, y: i64) -> Self {
        BivariantTargetClass {
            carrier: self.carrier.eval_y(&int(y)),
            ..self.clone()
        }
    }

    /// `α • β = α · f*β` over `g∘f`.
    pub fn product(&self, other: &Self) -> Result<Self, Error> {
        let f = &self.reference;
        if f.target() != other.reference.source() {
            return Err(Error::ReferenceMismatch {
                expected: f.target().key().to_string(),
                found: other.reference.source().key().to_string(),
            });
        }
        Self::new(
            &compose(&other.reference, f),
            &self.carrier * &f.pullback_class(&other.carrier)?,
        )
    }

    /// `f_*` from classes over `g∘f` to classes over `g`.
    pub fn pushforward(&self, f: &Morphism, g: &Morphism) -> Result<Self, Error> {
        let gf = compose(g, f);
        if !self.reference.same(&gf) {
            return Err(Error::ReferenceMismatch {
                expected: gf.key().to_string(),
                found: self.reference.key().to_string(),
            });
        }
        Self::new(g, f.pushforward_class(&self.carrier)?)
    }

    /// Pullback along the base change of `g`. Only squares without excess
    /// dimension are modelled; others report `UnsupportedFiberProduct`.
    pub fn pullback(&self, g: &Morphism) -> Result<Self, Error> {
        let f = &self.reference;
        let sq = fiber_product(f, g)?;
        if !is_dimensionally_transverse(f, g, sq.to_x.source()) {
            return Err(Error::UnsupportedFiberProduct(format!(
                "excess intersection for {f} and {g}"
            )));
        }
        Self::new(&sq.to_w, sq.to_x.pullback_class(&self.carrier)?)
    }
}

impl PartialEq for BivariantTargetClass {
    fn eq(&self, other: &Self) -> bool {
        self.reference.same(&other.reference)
            && self.rank == other.rank
            && self.carrier == other.carrier
    }
}

impl fmt::Display for BivariantTargetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.carrier, self.reference.key())
    }
}

/// `dim X' = dim X + dim Y' - dim Y` for the square of `f: X → Y`, `g: Y' → Y`.
pub fn is_dimensionally_transverse(f: &Morphism, g: &Morphism, apex: &Variety) -> bool {
    apex.dim() as i64 == f.source().dim() as i64 + g.source().dim() as i64 - f.target().dim() as i64
}

/// A class on `X` read in homological grading: the dimension-`d` part is
/// the codimension `dim X - d` part of the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovariantClass {
    variety: Variety,
    carrier: GradedClass,
}

impl CovariantClass {
    pub fn new(variety: &Variety, carrier: GradedClass) -> Result<Self, Error> {
        if !carrier.same_ambient(&GradedClass::one(variety.ring())) {
            return Err(Error::AmbientMismatch(
                carrier.ring().key().to_string(),
                variety.key().to_string(),
            ));
        }
        Ok(CovariantClass {
            variety: variety.clone(),
            carrier,
        })
    }

    pub fn variety(&self) -> &Variety {
        &self.variety
    }

    pub fn carrier(&self) -> &GradedClass {
        &self.carrier
    }

    /// Coordinates of the dimension-`d` part.
    pub fn component(&self, d: usize) -> Vec<YPolynomial> {
        let n = self.variety.dim();
        if d > n {
            return vec![];
        }
        let codim = n - d;
        (0..self.variety.ring().rank(codim))
            .map(|i| self.carrier.coord(codim, i))
            .collect()
    }

    /// Degree of the dimension-0 part.
    pub fn degree(&self) -> YPolynomial {
        self.variety
            .integrate(&self.carrier)
            .expect("carrier lives on the variety")
    }

    pub fn eval_y(&self, y: i64) -> Self {
        CovariantClass {
            variety: self.variety.clone(),
            carrier: self.carrier.eval_y(&int(y)),
        }
    }
}

impl fmt::Display for CovariantClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.variety.ring();
        let n = self.variety.dim();
        let mut terms: Vec<(YPolynomial, String)> = Vec::new();
        for d in (0..=n).rev() {
            let codim = n - d;
            if d == 0 {
                let deg = self.degree();
                if !deg.is_zero() {
                    terms.push((deg, "[pt]".into()));
                }
                continue;
            }
            for (i, c) in self.component(d).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let label = if codim == 0 {
                    format!("[{}]", self.variety.key())
                } else {
                    format!("[{}]", ring.render_monomial(&ring.basis(codim)[i]))
                };
                terms.push((c, label));
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, label)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{label}")?;
            } else if c.term_count() > 1 {
                write!(f, "({c})*{label}")?;
            } else {
                write!(f, "{c}*{label}")?;
            }
        }
        Ok(())
    }
}

/// The transformations available on the free theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Transformation {
    Gamma(SeriesName),
    Lambda,
    Ty,
}

impl Transformation {
    pub fn apply(self, a: &BivariantElement) -> Result<BivariantTargetClass, Error> {
        match self {
            Transformation::Gamma(name) => gamma_named(a, name),
            Transformation::Lambda => lambda_mot_image(a),
            Transformation::Ty => t_y(a),
        }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformation::Gamma(name) => write!(f, "gamma({name})"),
            Transformation::Lambda => write!(f, "lambda"),
            Transformation::Ty => write!(f, "ty"),
        }
    }
}

fn generatorwise(
    a: &BivariantElement,
    class_of: impl Fn(&BundleClass) -> Result<GradedClass, Error>,
) -> Result<BivariantTargetClass, Error> {
    let f = a.reference();
    let mut carrier = GradedClass::zero(f.source().ring());
    for (g, c) in a.terms() {
        let upstairs = class_of(&g.composite().relative_tangent()?)?;
        carrier = &carrier
            + &g.map()
                .pushforward_class(&upstairs)?
                .scale_rational(&int(c));
    }
    BivariantTargetClass::new(f, carrier)
}

/// `γ_cℓ(Σ c [V -h-> X]) = Σ c · h_*(cℓ(T_{fh}))` for the multiplicative
/// class of `q`.
pub fn gamma_cl(a: &BivariantElement, q: &GenusSeries) -> Result<BivariantTargetClass, Error> {
    generatorwise(a, |t| multiplicative_class(q, t))
}

fn gamma_named(a: &BivariantElement, name: SeriesName) -> Result<BivariantTargetClass, Error> {
    let order = a.terms().map(|(g, _)| g.space().dim()).max().unwrap_or(0);
    gamma_cl(a, &GenusSeries::named(name, order))
}

/// The Chern-character image of the motivic class: `h_*(ch(λ_y T*_{fh}) td(T_{fh}))`.
pub fn lambda_mot_image(a: &BivariantElement) -> Result<BivariantTargetClass, Error> {
    generatorwise(a, |t| Ok(unnormalized_ty_class(t)))
}

/// The `(1+y)` renormalization over `f`: bivariant degree `i` scaled by `(1+y)^i`.
pub fn renormalize_target(c: &BivariantTargetClass) -> Result<BivariantTargetClass, Error> {
    let carrier = c
        .carrier
        .rescale_by_degree(|codim| c.bivariant_degree(codim))?;
    BivariantTargetClass::new(&c.reference, carrier)
}

/// The Hirzebruch transformation, as the renormalized `lambda_mot_image`.
pub fn t_y(a: &BivariantElement) -> Result<BivariantTargetClass, Error> {
    renormalize_target(&lambda_mot_image(a)?)
}

/// `Σ c · h_*(T*_y(T_{fh}))`, computed without renormalizing.
pub fn t_y_direct(a: &BivariantElement) -> Result<BivariantTargetClass, Error> {
    generatorwise(a, |t| Ok(hirzebruch_class(t)))
}

/// Reads a target class over `X → pt` homologically.
pub fn covariant_restrict(c: &BivariantTargetClass) -> Result<CovariantClass, Error> {
    if !c.reference.target().is_point() {
        return Err(Error::ReferenceNotPoint(c.reference.to_string()));
    }
    CovariantClass::new(c.reference.source(), c.carrier.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bivariant::theta;
    use crate::varmodel::{identity, make_point, make_proj, to_point};

    #[test]
    fn p1_normalization() {
        let p1 = make_proj(1);
        let a = BivariantElement::generator(&identity(&p1), &to_point(&p1)).unwrap();
        assert_eq!(
            lambda_mot_image(&a).unwrap().carrier().to_string(),
            "(1 + y) + (1 - y)*h"
        );
        let t = t_y(&a).unwrap();
        assert_eq!(t.carrier().to_string(), "1 + (1 - y)*h");
        let cov = covariant_restrict(&t).unwrap();
        assert_eq!(cov.to_string(), "[P(1)] + (1 - y)*[pt]");
        assert_eq!(cov.degree(), YPolynomial::from_ints(&[1, -1]));
        let chern = gamma_named(&a, SeriesName::Chern).unwrap();
        assert_eq!(chern.carrier().to_string(), "1 + 2*h");
    }

    #[test]
    fn point_generator_is_one() {
        let pt = make_point();
        let a = theta(&identity(&pt)).unwrap();
        assert_eq!(
            lambda_mot_image(&a).unwrap().carrier(),
            &GradedClass::one(pt.ring())
        );
        assert_eq!(t_y(&a).unwrap().carrier(), &GradedClass::one(pt.ring()));
    }

    #[test]
    fn restriction_needs_point_target() {
        let p1 = make_proj(1);
        let a = theta(&identity(&p1)).unwrap();
        assert!(matches!(
            covariant_restrict(&t_y(&a).unwrap()),
            Err(Error::ReferenceNotPoint(_))
        ));
    }

    #[test]
    fn lambda_degree_zero_is_power_of_one_plus_y() {
        let p2 = make_proj(2);
        let a = BivariantElement::generator(&identity(&p2), &to_point(&p2)).unwrap();
        assert_eq!(
            lambda_mot_image(&a).unwrap().carrier().constant_term(),
            YPolynomial::one_plus_y_pow(2)
        );
    }
}
