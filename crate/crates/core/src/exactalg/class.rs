use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::Zero;

use super::poly::{monomial_degree, Monomial};
use super::ring::PresentedRing;
use super::{Rational, YPolynomial};
use crate::Error;

/// Element of a presented ring tensored with ℚ[y], stored sparsely by degree.
#[derive(Clone)]
pub struct GradedClass {
    ring: Arc<PresentedRing>,
    comps: BTreeMap<usize, Vec<YPolynomial>>,
}

/// Direction of a `(1+y)` rescale in [`divide_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Multiply,
    Divide,
}

pub(crate) fn same_ring(a: &Arc<PresentedRing>, b: &Arc<PresentedRing>) -> bool {
    Arc::ptr_eq(a, b) || a.key() == b.key()
}

impl GradedClass {
    pub fn zero(ring: &Arc<PresentedRing>) -> Self {
        GradedClass {
            ring: ring.clone(),
            comps: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PresentedRing>) -> Self {
        Self::from_component(ring, 0, vec![YPolynomial::one()])
    }

    pub fn constant(ring: &Arc<PresentedRing>, c: YPolynomial) -> Self {
        Self::from_component(ring, 0, vec![c])
    }

    /// Class with a single homogeneous component given in basis coordinates.
    pub fn from_component(ring: &Arc<PresentedRing>, d: usize, coords: Vec<YPolynomial>) -> Self {
        let mut out = Self::zero(ring);
        out.set_component(d, coords);
        out
    }

    pub fn from_rational_component(
        ring: &Arc<PresentedRing>,
        d: usize,
        coords: &[Rational],
    ) -> Self {
        Self::from_component(
            ring,
            d,
            coords
                .iter()
                .map(|c| YPolynomial::constant(c.clone()))
                .collect(),
        )
    }

    /// Normal form of `c * m`; zero when `m` exceeds the dimension.
    pub fn monomial(ring: &Arc<PresentedRing>, m: &Monomial, c: YPolynomial) -> Self {
        match ring.normal_form(m) {
            None => Self::zero(ring),
            Some(nf) => {
                let coords = nf.iter().map(|a| c.scale(a)).collect();
                Self::from_component(ring, monomial_degree(m), coords)
            }
        }
    }

    pub fn generator(ring: &Arc<PresentedRing>, i: usize) -> Self {
        let mut m = vec![0; ring.ngens()];
        m[i] = 1;
        Self::monomial(ring, &m, YPolynomial::one())
    }

    pub fn generator_by_name(ring: &Arc<PresentedRing>, name: &str) -> Option<Self> {
        ring.gen_names()
            .iter()
            .position(|g| g == name)
            .map(|i| Self::generator(ring, i))
    }

    /// Basis element `i` of degree `d`.
    pub fn basis_element(ring: &Arc<PresentedRing>, d: usize, i: usize) -> Self {
        let mut coords = vec![YPolynomial::zero(); ring.rank(d)];
        coords[i] = YPolynomial::one();
        Self::from_component(ring, d, coords)
    }

    fn set_component(&mut self, d: usize, coords: Vec<YPolynomial>) {
        if d > self.ring.dim() || coords.iter().all(|c| c.is_zero()) {
            self.comps.remove(&d);
            return;
        }
        debug_assert_eq!(coords.len(), self.ring.rank(d));
        self.comps.insert(d, coords);
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn same_ambient(&self, other: &GradedClass) -> bool {
        same_ring(&self.ring, &other.ring)
    }

    pub fn component(&self, d: usize) -> Option<&Vec<YPolynomial>> {
        self.comps.get(&d)
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Vec<YPolynomial>)> {
        self.comps.iter().map(|(d, v)| (*d, v))
    }

    /// Coordinate `i` of the degree-`d` component (zero if absent).
    pub fn coord(&self, d: usize, i: usize) -> YPolynomial {
        self.comps.get(&d).map(|v| v[i].clone()).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn degree_part(&self, d: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        if let Some(v) = self.comps.get(&d) {
            out.comps.insert(d, v.clone());
        }
        out
    }

    /// Drops every component of degree greater than `d`.
    pub fn truncate_above(&self, d: usize) -> Self {
        GradedClass {
            ring: self.ring.clone(),
            comps: self
                .comps
                .range(..=d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &YPolynomial) -> Self {
        let mut out = Self::zero(&self.ring);
        for (d, v) in &self.comps {
            out.set_component(*d, v.iter().map(|a| a * c).collect());
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&YPolynomial::constant(c.clone()))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(&self.ring);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes a rational value for `y`.
    pub fn eval_y(&self, y: &Rational) -> Self {
        let mut out = Self::zero(&self.ring);
        for (d, v) in &self.comps {
            out.set_component(
                *d,
                v.iter().map(|a| YPolynomial::constant(a.eval(y))).collect(),
            );
        }
        out
    }

    /// Maps every coordinate through `f`.
    pub fn map_coords(&self, mut f: impl FnMut(&YPolynomial) -> YPolynomial) -> Self {
        let mut out = Self::zero(&self.ring);
        for (d, v) in &self.comps {
            out.set_component(*d, v.iter().map(&mut f).collect());
        }
        out
    }

    /// Multiplies the degree-`d` component by `(1+y)^exponent(d)`, dividing
    /// exactly where the exponent is negative.
    pub fn rescale_by_degree(&self, exponent: impl Fn(usize) -> i64) -> Result<Self, Error> {
        let mut out = Self::zero(&self.ring);
        for (d, v) in &self.comps {
            let k = exponent(*d);
            let coords = v
                .iter()
                .map(|a| a.scale_one_plus_y(k))
                .collect::<Result<Vec<_>, _>>()?;
            out.set_component(*d, coords);
        }
        Ok(out)
    }

    /// Inverse of a class whose degree-0 part is 1.
    pub fn inverse_unipotent(&self) -> Self {
        let one = Self::one(&self.ring);
        debug_assert!(self.degree_part(0) == one);
        let nil = self - &one;
        let mut term = one.clone();
        let mut out = one;
        for k in 1..=self.ring.dim() {
            term = &term * &nil;
            out = if k % 2 == 1 {
                &out - &term
            } else {
                &out + &term
            };
        }
        out
    }

    /// Total degree-0 coefficient.
    pub fn constant_term(&self) -> YPolynomial {
        self.coord(0, 0)
    }

    fn render_term(&self, d: usize, i: usize, c: &YPolynomial, single: bool) -> (bool, String) {
        let mono = self.ring.render_monomial(&self.ring.basis(d)[i]);
        if d == 0 {
            if c.term_count() > 1 && !single {
                return (false, format!("({c})"));
            }
            return if c.is_negative_monomial() {
                (true, (-c).to_string())
            } else {
                (false, c.to_string())
            };
        }
        if c.term_count() > 1 {
            return (false, format!("({c})*{mono}"));
        }
        let (neg, mag) = if c.is_negative_monomial() {
            (true, -c)
        } else {
            (false, c.clone())
        };
        if mag.is_one() {
            (neg, mono)
        } else {
            (neg, format!("{mag}*{mono}"))
        }
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, usize, &YPolynomial)> = self
            .comps
            .iter()
            .flat_map(|(d, v)| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(move |(i, c)| (*d, i, c))
            })
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let single = terms.len() == 1;
        for (k, (d, i, c)) in terms.iter().enumerate() {
            let (neg, body) = self.render_term(*d, *i, c, single);
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.ring.key(), self)
    }
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        self.same_ambient(other) && self.comps == other.comps
    }
}

impl Eq for GradedClass {}

fn check_same(a: &GradedClass, b: &GradedClass) -> Result<(), Error> {
    if a.same_ambient(b) {
        Ok(())
    } else {
        Err(Error::AmbientMismatch(
            a.ring.key().to_string(),
            b.ring.key().to_string(),
        ))
    }
}

/// Componentwise sum.
pub fn ring_add(a: &GradedClass, b: &GradedClass) -> Result<GradedClass, Error> {
    check_same(a, b)?;
    let mut out = a.clone();
    for (d, v) in &b.comps {
        let coords = match a.comps.get(d) {
            Some(u) => u.iter().zip(v).map(|(x, y)| x + y).collect(),
            None => v.clone(),
        };
        out.set_component(*d, coords);
    }
    Ok(out)
}

/// Product in the presented ring, truncated above the dimension.
pub fn ring_mul(a: &GradedClass, b: &GradedClass) -> Result<GradedClass, Error> {
    check_same(a, b)?;
    let ring = &a.ring;
    let dim = ring.dim();
    let mut acc: BTreeMap<usize, Vec<YPolynomial>> = BTreeMap::new();
    for (da, va) in &a.comps {
        for (db, vb) in &b.comps {
            let d = da + db;
            if d > dim {
                continue;
            }
            let slot = acc
                .entry(d)
                .or_insert_with(|| vec![YPolynomial::zero(); ring.rank(d)]);
            for (i, x) in va.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in vb.iter().enumerate() {
                    if y.is_zero() {
                        continue;
                    }
                    let m: Monomial = ring.basis(*da)[i]
                        .iter()
                        .zip(&ring.basis(*db)[j])
                        .map(|(p, q)| p + q)
                        .collect();
                    let xy = x * y;
                    for (k, c) in ring
                        .normal_form(&m)
                        .expect("degree within bound")
                        .iter()
                        .enumerate()
                    {
                        if !c.is_zero() {
                            slot[k] = &slot[k] + &xy.scale(c);
                        }
                    }
                }
            }
        }
    }
    let mut out = GradedClass::zero(ring);
    for (d, v) in acc {
        out.set_component(d, v);
    }
    Ok(out)
}

/// Rescales the degree-`k` component by `(1+y)^(k·d)`, multiplying or
/// dividing exactly according to `direction`.
pub fn divide_exact(p: &GradedClass, d: usize, direction: Direction) -> Result<GradedClass, Error> {
    p.rescale_by_degree(|k| {
        let e = (k * d) as i64;
        match direction {
            Direction::Multiply => e,
            Direction::Divide => -e,
        }
    })
}

impl Add for &GradedClass {
    type Output = GradedClass;
    fn add(self, rhs: &GradedClass) -> GradedClass {
        ring_add(self, rhs).expect("ambient mismatch in class sum")
    }
}

impl Sub for &GradedClass {
    type Output = GradedClass;
    fn sub(self, rhs: &GradedClass) -> GradedClass {
        self + &(-rhs)
    }
}

impl Neg for &GradedClass {
    type Output = GradedClass;
    fn neg(self) -> GradedClass {
        self.map_coords(|c| -c)
    }
}

impl Mul for &GradedClass {
    type Output = GradedClass;
    fn mul(self, rhs: &GradedClass) -> GradedClass {
        ring_mul(self, rhs).expect("ambient mismatch in class product")
    }
}
