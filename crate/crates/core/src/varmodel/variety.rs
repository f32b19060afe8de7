use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::exactalg::{Monomial, Poly, PresentedRing, Rational};
use crate::{Error, GradedClass, YPolynomial};

pub type Variety = Arc<VarietyModel>;

/// Canonical construction tree of a variety.
#[derive(Debug)]
pub enum Construction {
    Point,
    Proj(usize),
    /// At least two factors, none a point, none a product, sorted by key.
    Product(Vec<Variety>),
    /// Projective bundle of lines in a bundle with Chern classes `c_1..c_r`.
    ProjBundle {
        base: Variety,
        chern: Vec<GradedClass>,
    },
    /// Blow-up of `P^n` along a linear `P^m`.
    BlowupLinear {
        n: usize,
        m: usize,
    },
}

pub struct VarietyModel {
    construction: Construction,
    key: String,
    ring: Arc<PresentedRing>,
    tangent: GradedClass,
    factor_offsets: Vec<usize>,
}

static CACHE: OnceLock<Mutex<HashMap<String, Variety>>> = OnceLock::new();

fn intern(
    key: String,
    build: impl FnOnce(String) -> Result<VarietyModel, Error>,
) -> Result<Variety, Error> {
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let built = Arc::new(build(key.clone())?);
    Ok(cache.lock().unwrap().entry(key).or_insert(built).clone())
}

fn unique_names(names: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for name in names {
        let mut candidate = name.clone();
        let mut k = 2;
        while out.contains(&candidate) {
            candidate = format!("{name}{k}");
            k += 1;
        }
        out.push(candidate);
    }
    out
}

/// Rewrites a class into another ring, sending generator `j` to generator `gen_map[j]`.
pub(crate) fn embed_class(
    class: &GradedClass,
    target: &Arc<PresentedRing>,
    gen_map: &[usize],
) -> GradedClass {
    let src = class.ring().clone();
    let mut out = GradedClass::zero(target);
    for (d, coords) in class.components() {
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = vec![0u32; target.ngens()];
            for (j, e) in src.basis(d)[i].iter().enumerate() {
                m[gen_map[j]] += e;
            }
            out = &out + &GradedClass::monomial(target, &m, c.clone());
        }
    }
    out
}

fn class_to_poly(class: &GradedClass, nvars: usize, gen_map: &[usize]) -> Poly {
    let src = class.ring().clone();
    let mut out = Poly::zero(nvars);
    for (d, coords) in class.components() {
        for (i, c) in coords.iter().enumerate() {
            let r = c.coeff(0);
            if r.is_zero() {
                continue;
            }
            let mut m = vec![0u32; nvars];
            for (j, e) in src.basis(d)[i].iter().enumerate() {
                m[gen_map[j]] += e;
            }
            out.add_term(m, r);
        }
    }
    out
}

fn embed_poly(p: &Poly, nvars: usize, gen_map: &[usize]) -> Poly {
    let mut out = Poly::zero(nvars);
    for (m, c) in p.terms() {
        let mut mm = vec![0u32; nvars];
        for (j, e) in m.iter().enumerate() {
            mm[gen_map[j]] += e;
        }
        out.add_term(mm, c.clone());
    }
    out
}

fn one_plus(class: &GradedClass) -> GradedClass {
    &GradedClass::one(class.ring()) + class
}

/// The point.
pub fn make_point() -> Variety {
    intern("pt".into(), |key| {
        let ring = Arc::new(PresentedRing::new(key.clone(), vec![], 0, vec![], &vec![])?);
        Ok(VarietyModel {
            construction: Construction::Point,
            key,
            tangent: GradedClass::one(&ring),
            ring,
            factor_offsets: vec![0],
        })
    })
    .expect("point ring is valid")
}

/// Projective space `P^n`; `P^0` is the point.
pub fn make_proj(n: usize) -> Variety {
    if n == 0 {
        return make_point();
    }
    intern(format!("P({n})"), |key| {
        let h = Poly::var(1, 0);
        let ring = Arc::new(PresentedRing::new(
            key.clone(),
            vec!["h".into()],
            n,
            vec![h.pow(n + 1)],
            &vec![n as u32],
        )?);
        let tangent = one_plus(&GradedClass::generator(&ring, 0)).pow(n + 1);
        Ok(VarietyModel {
            construction: Construction::Proj(n),
            key,
            ring,
            tangent,
            factor_offsets: vec![0],
        })
    })
    .expect("projective space ring is valid")
}

/// Blow-up of `P^n` along a linear `P^m`, `m < n`.
///
/// Generated by the pulled-back hyperplane `h` and the exceptional class `e`
/// subject to `h^(m+1)·e = 0` and `(h-e)^(n-m) = 0`; the second relation is
/// the hyperplane class of the `P^(n-m-1)` that the blow-up fibres over.
pub fn make_blowup_linear(n: usize, m: usize) -> Result<Variety, Error> {
    if m >= n {
        return Err(Error::InvalidParameters(format!(
            "blowup(P({n}),P({m})) needs m < n"
        )));
    }
    intern(format!("blowup(P({n}),P({m}))"), |key| {
        let h = Poly::var(2, 0);
        let e = Poly::var(2, 1);
        let rels = vec![&h.pow(m + 1) * &e, (&h - &e).pow(n - m)];
        let ring = Arc::new(PresentedRing::new(
            key.clone(),
            vec!["h".into(), "e".into()],
            n,
            rels,
            &vec![n as u32, 0],
        )?);
        let hc = GradedClass::generator(&ring, 0);
        let ec = GradedClass::generator(&ring, 1);
        let tangent =
            &(&one_plus(&hc).pow(m + 1) * &one_plus(&ec)) * &one_plus(&(&hc - &ec)).pow(n - m);
        Ok(VarietyModel {
            construction: Construction::BlowupLinear { n, m },
            key,
            ring,
            tangent,
            factor_offsets: vec![0],
        })
    })
}

/// Product of an already sorted list of at least two non-point atomic factors.
fn product_of_sorted(factors: Vec<Variety>) -> Variety {
    let key = factors
        .iter()
        .rev()
        .skip(1)
        .fold(factors.last().unwrap().key.clone(), |acc, f| {
            format!("prod({},{acc})", f.key)
        });
    intern(key, |key| {
        let mut offsets = Vec::new();
        let mut names = Vec::new();
        let mut point = Monomial::new();
        for f in &factors {
            offsets.push(names.len());
            names.extend(f.ring.gen_names().iter().cloned());
        }
        let nvars = names.len();
        let mut rels = Vec::new();
        for (f, &off) in factors.iter().zip(&offsets) {
            let map: Vec<usize> = (off..off + f.ring.ngens()).collect();
            rels.extend(
                f.ring
                    .relations()
                    .iter()
                    .map(|r| embed_poly(r, nvars, &map)),
            );
            point.extend(f.point_monomial());
        }
        let dim = factors.iter().map(|f| f.dim()).sum();
        let ring = Arc::new(PresentedRing::new(
            key.clone(),
            unique_names(names),
            dim,
            rels,
            &point,
        )?);
        let mut tangent = GradedClass::one(&ring);
        for (f, &off) in factors.iter().zip(&offsets) {
            let map: Vec<usize> = (off..off + f.ring.ngens()).collect();
            tangent = &tangent * &embed_class(&f.tangent, &ring, &map);
        }
        Ok(VarietyModel {
            construction: Construction::Product(factors),
            key,
            ring,
            tangent,
            factor_offsets: offsets,
        })
    })
    .expect("product of valid rings is valid")
}

/// Product of several varieties with the positions each piece's factors
/// occupy in the canonical (flattened, sorted) factor list.
pub fn make_product_list(pieces: &[Variety]) -> (Variety, Vec<Vec<usize>>) {
    let mut tagged: Vec<(Variety, usize)> = Vec::new();
    for (p, piece) in pieces.iter().enumerate() {
        for f in piece.factors() {
            tagged.push((f, p));
        }
    }
    tagged.sort_by(|a, b| a.0.key.cmp(&b.0.key));
    let mut positions = vec![Vec::new(); pieces.len()];
    for (pos, (_, p)) in tagged.iter().enumerate() {
        positions[*p].push(pos);
    }
    let factors: Vec<Variety> = tagged.into_iter().map(|(f, _)| f).collect();
    let v = match factors.len() {
        0 => make_point(),
        1 => factors[0].clone(),
        _ => product_of_sorted(factors),
    };
    (v, positions)
}

pub fn make_product(a: &Variety, b: &Variety) -> Variety {
    make_product_list(&[a.clone(), b.clone()]).0
}

/// What a generator of a projective bundle's ring is in terms of the base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum GenRole {
    Base(usize),
    Zeta,
}

/// How a projective bundle was normalized.
#[derive(Clone, Debug)]
pub(crate) enum BundleShape {
    /// Rank one: the base itself.
    Base,
    /// Over the point: a projective space.
    Fibre,
    /// A genuine `Construction::ProjBundle` over the given base.
    Genuine,
    /// The bundle is pulled back from the base factors at `support`; it is
    /// built over their product `sub` and multiplied by the other factors.
    /// `positions` are those of `make_product_list([bundle, others..])`.
    Split {
        sub: Variety,
        sub_positions: Vec<Vec<usize>>,
        sub_chern: Vec<GradedClass>,
        support: Vec<usize>,
        positions: Vec<Vec<usize>>,
    },
    /// The base is `P(E) → B`, the bundle `F` is pulled back from `B` and
    /// sorts before `E`; the result is `P(E)` over `P(F) → B`.
    Swapped {
        lower: Variety,
        lower_chern: Vec<GradedClass>,
        inner: Variety,
        pulled: Vec<GradedClass>,
    },
}

/// A normalized projective bundle: the variety, what each of its generators
/// is relative to the requested base, and how it was built.
#[derive(Clone, Debug)]
pub(crate) struct BundleBuild {
    pub variety: Variety,
    pub roles: Vec<GenRole>,
    pub shape: BundleShape,
}

/// Projective bundle of lines in a bundle with the given Chern classes
/// `c_1..c_r` on `base`.
///
/// Rank one returns the base and a point base returns `P^(r-1)`. A bundle
/// pulled back from some of the base's factors is built over those factors
/// and multiplied by the rest (so vanishing Chern classes give the product
/// with `P^(r-1)`). Over a tower `P(E) → B`, a bundle pulled back from `B`
/// whose Chern classes render before those of `E` becomes the lower level.
pub fn make_proj_bundle(base: &Variety, chern: &[GradedClass]) -> Result<Variety, Error> {
    Ok(build_proj_bundle(base, chern)?.variety)
}

pub(crate) fn build_proj_bundle(
    base: &Variety,
    chern: &[GradedClass],
) -> Result<BundleBuild, Error> {
    let r = chern.len();
    if r == 0 {
        return Err(Error::InvalidParameters(
            "projective bundle of rank 0".into(),
        ));
    }
    for (i, c) in chern.iter().enumerate() {
        if !c.same_ambient(&GradedClass::one(&base.ring)) {
            return Err(Error::AmbientMismatch(
                c.ring().key().to_string(),
                base.key.clone(),
            ));
        }
        if c.components()
            .any(|(d, v)| d != i + 1 || v.iter().any(|p| p.degree().unwrap_or(0) > 0))
        {
            return Err(Error::InvalidParameters(format!(
                "c_{} must be a y-free class of degree {}",
                i + 1,
                i + 1
            )));
        }
    }
    let nb = base.ring.ngens();
    let base_roles = || (0..nb).map(GenRole::Base);
    if r == 1 {
        return Ok(BundleBuild {
            variety: base.clone(),
            roles: base_roles().collect(),
            shape: BundleShape::Base,
        });
    }
    if base.dim() == 0 {
        return Ok(BundleBuild {
            variety: make_proj(r - 1),
            roles: vec![GenRole::Zeta],
            shape: BundleShape::Fibre,
        });
    }
    if let Some(b) = split_off_factors(base, chern)? {
        return Ok(b);
    }
    if let Some(b) = reorder_tower(base, chern)? {
        return Ok(b);
    }
    let rendered: Vec<String> = chern.iter().map(|c| c.to_string()).collect();
    let key = format!("projbundle({};{})", base.key, rendered.join(","));
    let owned_base = base.clone();
    let owned_chern = chern.to_vec();
    let variety = intern(key, move |key| {
        let (base, chern) = (owned_base, owned_chern);
        let nvars = nb + 1;
        let map: Vec<usize> = (0..nb).collect();
        let mut names: Vec<String> = base.ring.gen_names().to_vec();
        names.push("z".into());
        let names = unique_names(names);
        let mut rels: Vec<Poly> = base
            .ring
            .relations()
            .iter()
            .map(|p| embed_poly(p, nvars, &map))
            .collect();
        let z = Poly::var(nvars, nb);
        let mut bundle_rel = z.pow(r);
        for (i, c) in chern.iter().enumerate() {
            bundle_rel = &bundle_rel + &(&class_to_poly(c, nvars, &map) * &z.pow(r - 1 - i));
        }
        rels.push(bundle_rel);
        let mut point = base.point_monomial();
        point.push((r - 1) as u32);
        let dim = base.dim() + r - 1;
        let ring = Arc::new(PresentedRing::new(key.clone(), names, dim, rels, &point)?);
        let zc = GradedClass::generator(&ring, nb);
        let mut fibre = GradedClass::zero(&ring);
        for i in 0..=r {
            let ci = if i == 0 {
                GradedClass::one(&ring)
            } else {
                embed_class(&chern[i - 1], &ring, &map)
            };
            fibre = &fibre + &(&ci * &one_plus(&zc).pow(r - i));
        }
        let tangent = &embed_class(&base.tangent, &ring, &map) * &fibre;
        Ok(VarietyModel {
            construction: Construction::ProjBundle { base, chern },
            key,
            ring,
            tangent,
            factor_offsets: vec![0],
        })
    })?;
    let mut roles: Vec<GenRole> = base_roles().collect();
    roles.push(GenRole::Zeta);
    Ok(BundleBuild {
        variety,
        roles,
        shape: BundleShape::Genuine,
    })
}

/// `c` written on `to`, whose generator `a` is generator `to_from[a]` of
/// `c`'s ring; `None` unless `c` is exactly the pullback of the result.
fn descend(c: &GradedClass, to: &Variety, to_from: &[usize]) -> Option<GradedClass> {
    let from = c.ring().clone();
    let mut out = GradedClass::zero(&to.ring);
    for (d, coords) in c.components() {
        for (i, x) in coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mut local = vec![0u32; to.ring.ngens()];
            for (g, &e) in from.basis(d)[i].iter().enumerate() {
                if e > 0 {
                    local[to_from.iter().position(|&b| b == g)?] = e;
                }
            }
            out = &out + &GradedClass::monomial(&to.ring, &local, x.clone());
        }
    }
    (embed_class(&out, &from, to_from) == *c).then_some(out)
}

fn split_off_factors(base: &Variety, chern: &[GradedClass]) -> Result<Option<BundleBuild>, Error> {
    let factors = base.factors();
    let owner = |g: usize| (0..factors.len()).find(|&i| base.gen_range_of_factor(i).contains(&g));
    let mut support: Vec<usize> = Vec::new();
    for c in chern {
        for (d, coords) in c.components() {
            for (i, x) in coords.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (g, &e) in base.ring.basis(d)[i].iter().enumerate() {
                    if e > 0 {
                        support.extend(owner(g));
                    }
                }
            }
        }
    }
    support.sort_unstable();
    support.dedup();
    if support.len() == factors.len() {
        return Ok(None);
    }
    let (sub, sub_positions) = make_product_list(
        &support
            .iter()
            .map(|&i| factors[i].clone())
            .collect::<Vec<_>>(),
    );
    let mut to_base = vec![0; sub.ring.ngens()];
    for (k, &i) in support.iter().enumerate() {
        for (a, b) in sub
            .gen_range_of_factor(sub_positions[k][0])
            .zip(base.gen_range_of_factor(i))
        {
            to_base[a] = b;
        }
    }
    let mut sub_chern = Vec::with_capacity(chern.len());
    for c in chern {
        match descend(c, &sub, &to_base) {
            Some(d) => sub_chern.push(d),
            None => return Ok(None),
        }
    }
    let inner = build_proj_bundle(&sub, &sub_chern)?;
    let rest: Vec<usize> = (0..factors.len())
        .filter(|i| !support.contains(i))
        .collect();
    let mut pieces = vec![inner.variety.clone()];
    pieces.extend(rest.iter().map(|&i| factors[i].clone()));
    let (variety, positions) = make_product_list(&pieces);
    let mut roles = vec![GenRole::Zeta; variety.ring.ngens()];
    for (f, &p) in positions[0].iter().enumerate() {
        for (a, b) in inner
            .variety
            .gen_range_of_factor(f)
            .zip(variety.gen_range_of_factor(p))
        {
            roles[b] = match inner.roles[a] {
                GenRole::Base(j) => GenRole::Base(to_base[j]),
                GenRole::Zeta => GenRole::Zeta,
            };
        }
    }
    for (t, &i) in rest.iter().enumerate() {
        for (a, b) in base
            .gen_range_of_factor(i)
            .zip(variety.gen_range_of_factor(positions[t + 1][0]))
        {
            roles[b] = GenRole::Base(a);
        }
    }
    let shape = BundleShape::Split {
        sub,
        sub_positions,
        sub_chern,
        support,
        positions,
    };
    Ok(Some(BundleBuild {
        variety,
        roles,
        shape,
    }))
}

fn render(classes: &[GradedClass]) -> String {
    classes
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn reorder_tower(base: &Variety, chern: &[GradedClass]) -> Result<Option<BundleBuild>, Error> {
    let Construction::ProjBundle {
        base: lower,
        chern: lower_chern,
    } = &base.construction
    else {
        return Ok(None);
    };
    let nl = lower.ring.ngens();
    let identity_map: Vec<usize> = (0..nl).collect();
    let mut descended = Vec::with_capacity(chern.len());
    for c in chern {
        match descend(c, lower, &identity_map) {
            Some(d) => descended.push(d),
            None => return Ok(None),
        }
    }
    if render(&descended) >= render(lower_chern) {
        return Ok(None);
    }
    let inner = build_proj_bundle(lower, &descended)?;
    let inner_map: Vec<usize> = (0..nl)
        .map(|j| {
            inner
                .roles
                .iter()
                .position(|r| *r == GenRole::Base(j))
                .expect("every base generator has a role")
        })
        .collect();
    let pulled: Vec<GradedClass> = lower_chern
        .iter()
        .map(|c| embed_class(c, &inner.variety.ring, &inner_map))
        .collect();
    let outer = build_proj_bundle(&inner.variety, &pulled)?;
    let roles = outer
        .roles
        .iter()
        .map(|r| match r {
            GenRole::Zeta => GenRole::Base(nl),
            GenRole::Base(j) => inner.roles[*j],
        })
        .collect();
    let shape = BundleShape::Swapped {
        lower: lower.clone(),
        lower_chern: descended,
        inner: inner.variety.clone(),
        pulled,
    };
    Ok(Some(BundleBuild {
        variety: outer.variety,
        roles,
        shape,
    }))
}

impl VarietyModel {
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn ring(&self) -> &Arc<PresentedRing> {
        &self.ring
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn is_point(&self) -> bool {
        matches!(self.construction, Construction::Point)
    }

    /// Total Chern class of the tangent bundle.
    pub fn tangent_chern(&self) -> &GradedClass {
        &self.tangent
    }

    /// Factors in the canonical product order; empty for the point.
    pub fn factors(self: &Arc<Self>) -> Vec<Variety> {
        match &self.construction {
            Construction::Point => vec![],
            Construction::Product(fs) => fs.clone(),
            _ => vec![self.clone()],
        }
    }

    fn point_monomial(&self) -> Monomial {
        match &self.construction {
            Construction::Point => vec![],
            Construction::Proj(n) => vec![*n as u32],
            Construction::BlowupLinear { n, .. } => vec![*n as u32, 0],
            Construction::Product(fs) => fs.iter().flat_map(|f| f.point_monomial()).collect(),
            Construction::ProjBundle { base, chern } => {
                let mut m = base.point_monomial();
                m.push((chern.len() - 1) as u32);
                m
            }
        }
    }

    /// The top-degree class with integral one.
    pub fn point_class(&self) -> GradedClass {
        let top = GradedClass::basis_element(&self.ring, self.dim(), 0);
        top.scale_rational(&(Rational::from_integer(1.into()) / self.ring.top_integral()))
    }

    pub fn gen(&self, name: &str) -> Option<GradedClass> {
        GradedClass::generator_by_name(&self.ring, name)
    }

    /// Degree of the top component.
    pub fn integrate(&self, c: &GradedClass) -> Result<YPolynomial, Error> {
        if !c.same_ambient(&GradedClass::one(&self.ring)) {
            return Err(Error::AmbientMismatch(
                c.ring().key().to_string(),
                self.key.clone(),
            ));
        }
        Ok(c.coord(self.dim(), 0).scale(self.ring.top_integral()))
    }

    /// Euler characteristic computed from the construction tree alone.
    pub fn euler_characteristic_oracle(&self) -> i64 {
        match &self.construction {
            Construction::Point => 1,
            Construction::Proj(n) => *n as i64 + 1,
            Construction::Product(fs) => {
                fs.iter().map(|f| f.euler_characteristic_oracle()).product()
            }
            Construction::ProjBundle { base, chern } => {
                chern.len() as i64 * base.euler_characteristic_oracle()
            }
            Construction::BlowupLinear { n, m } => {
                let (n, m) = (*n as i64, *m as i64);
                (n + 1) - (m + 1) + (m + 1) * (n - m)
            }
        }
    }

    /// Even Betti numbers computed from the construction tree alone.
    pub fn betti_oracle(&self) -> Vec<usize> {
        fn mul(a: &[usize], b: &[usize]) -> Vec<usize> {
            let mut out = vec![0; a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        match &self.construction {
            Construction::Point => vec![1],
            Construction::Proj(n) => vec![1; n + 1],
            Construction::Product(fs) => fs
                .iter()
                .fold(vec![1], |acc, f| mul(&acc, &f.betti_oracle())),
            Construction::ProjBundle { base, chern } => {
                mul(&base.betti_oracle(), &vec![1; chern.len()])
            }
            Construction::BlowupLinear { n, m } => {
                let mut out = vec![1; n + 1];
                let fibre: Vec<usize> = (0..n - m).map(|k| usize::from(k > 0)).collect();
                for (k, b) in mul(&vec![1; m + 1], &fibre).iter().enumerate() {
                    out[k] += b;
                }
                out
            }
        }
    }

    pub(crate) fn gen_range_of_factor(&self, i: usize) -> std::ops::Range<usize> {
        let start = self.factor_offsets[i];
        let end = self
            .factor_offsets
            .get(i + 1)
            .copied()
            .unwrap_or(self.ring.ngens());
        start..end
    }
}

impl fmt::Display for VarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)
    }
}

impl fmt::Debug for VarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)
    }
}

impl PartialEq for VarietyModel {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for VarietyModel {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::int;

    #[test]
    fn projective_plane() {
        let p2 = make_proj(2);
        assert_eq!(p2.dim(), 2);
        assert_eq!(p2.ring().betti(), vec![1, 1, 1]);
        assert_eq!(p2.tangent_chern().to_string(), "1 + 3*h + 3*h^2");
        let h = p2.gen("h").unwrap();
        assert_eq!(p2.integrate(&h.pow(2)).unwrap(), YPolynomial::one());
        assert_eq!(p2.integrate(&h).unwrap(), YPolynomial::zero());
    }

    #[test]
    fn point_is_trivial() {
        let pt = make_point();
        assert_eq!(pt.dim(), 0);
        assert_eq!(pt.tangent_chern().to_string(), "1");
        assert!(Arc::ptr_eq(&make_proj(0), &pt));
    }

    #[test]
    fn blowup_of_plane_at_point() {
        let bl = make_blowup_linear(2, 0).unwrap();
        assert_eq!(bl.ring().betti(), vec![1, 2, 1]);
        let top = bl.tangent_chern().degree_part(2);
        assert_eq!(bl.integrate(&top).unwrap(), YPolynomial::from_int(4));
        assert!(make_blowup_linear(2, 2).is_err());
    }

    #[test]
    fn product_is_canonical() {
        let a = make_product(&make_proj(1), &make_proj(2));
        let b = make_product(&make_proj(2), &make_proj(1));
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.key(), "prod(P(1),P(2))");
        assert_eq!(a.ring().gen_names(), &["h".to_string(), "h2".to_string()]);
        let c = make_product(&a, &make_proj(1));
        assert_eq!(c.key(), "prod(P(1),prod(P(1),P(2)))");
        assert!(Arc::ptr_eq(&make_product(&a, &make_point()), &a));
    }

    #[test]
    fn bundle_normalisations() {
        let p1 = make_proj(1);
        let h = p1.gen("h").unwrap();
        let zero = GradedClass::zero(p1.ring());
        assert!(Arc::ptr_eq(
            &make_proj_bundle(&p1, std::slice::from_ref(&h)).unwrap(),
            &p1
        ));
        let trivial = make_proj_bundle(&p1, &[zero.clone(), zero.clone()]).unwrap();
        assert_eq!(trivial.key(), "prod(P(1),P(1))");
        let pt = make_point();
        let zp = GradedClass::zero(pt.ring());
        assert_eq!(
            make_proj_bundle(&pt, &[zp.clone(), zp.clone(), zp])
                .unwrap()
                .key(),
            "P(2)"
        );
        let hirz = make_proj_bundle(&p1, &[h.clone(), zero]).unwrap();
        assert_eq!(hirz.key(), "projbundle(P(1);h,0)");
        assert_eq!(hirz.ring().betti(), vec![1, 2, 1]);
        assert_eq!(
            hirz.integrate(&hirz.tangent_chern().degree_part(2))
                .unwrap(),
            YPolynomial::from_int(4)
        );
        let bad = make_proj_bundle(
            &p1,
            &[GradedClass::one(p1.ring()), h.scale_rational(&int(0))],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn bundle_pulled_back_from_one_factor_splits_off() {
        let (p1, p2) = (make_proj(1), make_proj(2));
        let base = make_product(&p1, &p2);
        let h = base.gen("h").unwrap();
        let x = make_proj_bundle(&base, &[h, GradedClass::zero(base.ring())]).unwrap();
        let hirz =
            make_proj_bundle(&p1, &[p1.gen("h").unwrap(), GradedClass::zero(p1.ring())]).unwrap();
        assert!(Arc::ptr_eq(&x, &make_product(&hirz, &p2)));
        assert_eq!(x.dim(), 4);
    }

    #[test]
    fn tower_levels_are_sorted() {
        let p1 = make_proj(1);
        let h = p1.gen("h").unwrap();
        let zero = GradedClass::zero(p1.ring());
        let (e, f) = ([h.scale_rational(&int(3)), zero.clone()], [h, zero]);
        let over = |lower: &[GradedClass], upper: &[GradedClass]| {
            let b = make_proj_bundle(&p1, lower).unwrap();
            let map = [0];
            let pulled: Vec<GradedClass> = upper
                .iter()
                .map(|c| embed_class(c, b.ring(), &map))
                .collect();
            make_proj_bundle(&b, &pulled).unwrap()
        };
        let a = over(&e, &f);
        let b = over(&f, &e);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.key(), "projbundle(projbundle(P(1);3*h,0);h,0)");
    }
}
