use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_traits::{One, Zero};

use super::bundle::BundleClass;
use super::variety::{
    build_proj_bundle, make_blowup_linear, make_point, make_product_list, make_proj, BundleBuild,
    BundleShape, Construction, GenRole, Variety,
};
use crate::exactalg::{int, Rational};
use crate::{Error, GradedClass, YPolynomial};

pub type Morphism = Arc<MorphismModel>;

/// Structural tag of a morphism. Tags drive composition rules, smoothness
/// and the fiber-product catalogue; the ring map is authoritative for
/// everything else.
#[derive(Clone, Debug)]
pub enum MorphismKind {
    Identity,
    ToPoint,
    /// Projection of a product onto the factors at the given positions.
    ProductProjection {
        keep: Vec<usize>,
    },
    BundleProjection,
    /// `P(g*E) → P(E)` over `g`, with the projection of the source bundle.
    BundleMap {
        base_map: Morphism,
        source_projection: Morphism,
    },
    /// Linear subspace in general position.
    LinearEmbedding,
    /// Linear subspace that is the center of a blow-up.
    CenterEmbedding,
    ExceptionalInclusion,
    BlowDown,
    /// Strict transform of a general linear subspace under a linear blow-up,
    /// with `blowdown ∘ this = embedding ∘ source_blowdown`.
    StrictTransform {
        embedding: Morphism,
        source_blowdown: Morphism,
    },
    /// Section of a projective bundle through a trivial line summand.
    ZeroSection,
    /// Map into a product given by one component per factor.
    Pairing(Vec<Morphism>),
    /// Map into a fiber product given by its ring map.
    Lift,
    Composite {
        outer: Morphism,
        inner: Morphism,
    },
    /// Permutation of the generators; `inverse` is the inverse permutation.
    Automorphism {
        inverse: Vec<usize>,
    },
}

/// A structural morphism between catalogue varieties, carried by the
/// pullback images of the target's generators.
pub struct MorphismModel {
    source: Variety,
    target: Variety,
    kind: MorphismKind,
    images: Vec<GradedClass>,
    smooth: bool,
    corrupt: bool,
    key: OnceLock<String>,
    pullback_table: OnceLock<Vec<Vec<GradedClass>>>,
    pushforward_table: Vec<OnceLock<Vec<Vec<Rational>>>>,
    tangent: OnceLock<Option<BundleClass>>,
}

impl MorphismModel {
    fn build(
        source: &Variety,
        target: &Variety,
        kind: MorphismKind,
        images: Vec<GradedClass>,
        smooth: bool,
    ) -> Morphism {
        debug_assert_eq!(images.len(), target.ring().ngens());
        Arc::new(MorphismModel {
            source: source.clone(),
            target: target.clone(),
            kind,
            images,
            smooth,
            corrupt: false,
            key: OnceLock::new(),
            pullback_table: OnceLock::new(),
            pushforward_table: (0..=source.dim()).map(|_| OnceLock::new()).collect(),
            tangent: OnceLock::new(),
        })
    }

    pub(crate) fn bundle_map(
        source: &Variety,
        target: &Variety,
        base_map: &Morphism,
        source_projection: &Morphism,
        images: Vec<GradedClass>,
    ) -> Morphism {
        let kind = MorphismKind::BundleMap {
            base_map: base_map.clone(),
            source_projection: source_projection.clone(),
        };
        Self::build(source, target, kind, images, base_map.is_smooth())
    }

    pub fn source(&self) -> &Variety {
        &self.source
    }

    pub fn target(&self) -> &Variety {
        &self.target
    }

    pub fn kind(&self) -> &MorphismKind {
        &self.kind
    }

    /// Pullbacks of the target generators.
    pub fn images(&self) -> &[GradedClass] {
        &self.images
    }

    /// All catalogue varieties are complete, so every morphism is proper.
    pub fn is_proper(&self) -> bool {
        true
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, MorphismKind::Identity)
    }

    /// `dim source − dim target`.
    pub fn relative_dim(&self) -> i64 {
        self.source.dim() as i64 - self.target.dim() as i64
    }

    /// Identity key: endpoints plus the ring map.
    pub fn key(&self) -> &str {
        self.key.get_or_init(|| {
            let imgs: Vec<String> = self.images.iter().map(|c| c.to_string()).collect();
            format!(
                "{}->{}[{}]",
                self.source.key(),
                self.target.key(),
                imgs.join("; ")
            )
        })
    }

    pub fn same(&self, other: &MorphismModel) -> bool {
        self.key() == other.key()
    }

    /// Copy whose pushforward table is deliberately wrong, for fault injection.
    pub fn with_corrupted_pushforward(&self) -> Morphism {
        self.variant(self.smooth, true)
    }

    /// Copy flagged smooth, for composites that are smooth by construction
    /// but assembled from non-smooth pieces.
    pub(crate) fn assume_smooth(&self) -> Morphism {
        self.variant(true, self.corrupt)
    }

    fn variant(&self, smooth: bool, corrupt: bool) -> Morphism {
        Arc::new(MorphismModel {
            source: self.source.clone(),
            target: self.target.clone(),
            kind: self.kind.clone(),
            images: self.images.clone(),
            smooth,
            corrupt,
            key: OnceLock::new(),
            pullback_table: OnceLock::new(),
            pushforward_table: (0..=self.source.dim()).map(|_| OnceLock::new()).collect(),
            tangent: OnceLock::new(),
        })
    }

    fn pullback_table(&self) -> &Vec<Vec<GradedClass>> {
        self.pullback_table.get_or_init(|| {
            let tr = self.target.ring();
            let one = GradedClass::one(self.source.ring());
            (0..=tr.dim())
                .map(|d| {
                    tr.basis(d)
                        .iter()
                        .map(|m| {
                            m.iter().enumerate().fold(one.clone(), |acc, (j, &e)| {
                                &acc * &self.images[j].pow(e as usize)
                            })
                        })
                        .collect()
                })
                .collect()
        })
    }

    /// Ring-map image of a class on the target.
    pub fn pullback_class(&self, c: &GradedClass) -> Result<GradedClass, Error> {
        if !c.same_ambient(&GradedClass::one(self.target.ring())) {
            return Err(Error::AmbientMismatch(
                c.ring().key().to_string(),
                self.target.key().to_string(),
            ));
        }
        let table = self.pullback_table();
        let mut out = GradedClass::zero(self.source.ring());
        for (d, coords) in c.components() {
            for (i, a) in coords.iter().enumerate() {
                if !a.is_zero() {
                    out = &out + &table[d][i].scale(a);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the pushforward on source degree `d`: row `k` holds the
    /// coordinates of the image of basis element `k`.
    fn pushforward_matrix(&self, d: usize) -> &Vec<Vec<Rational>> {
        self.pushforward_table[d].get_or_init(|| {
            let xr = self.source.ring();
            let yr = self.target.ring();
            let dy = self.target.dim() as i64;
            let dt = d as i64 - self.relative_dim();
            if dt < 0 || dt > dy {
                return vec![vec![]; xr.rank(d)];
            }
            let dt = dt as usize;
            let codual = self.target.dim() - dt;
            let pulled: Vec<GradedClass> = (0..yr.rank(codual))
                .map(|j| {
                    self.pullback_class(&GradedClass::basis_element(yr, codual, j))
                        .unwrap()
                })
                .collect();
            let inv = yr.pairing_inverse(dt);
            let mut rows: Vec<Vec<Rational>> = (0..xr.rank(d))
                .map(|k| {
                    let b = GradedClass::basis_element(xr, d, k);
                    let v: Vec<Rational> = pulled
                        .iter()
                        .map(|a| self.source.integrate(&(&b * a)).unwrap().coeff(0))
                        .collect();
                    (0..yr.rank(dt))
                        .map(|i| {
                            v.iter()
                                .enumerate()
                                .fold(Rational::zero(), |acc, (j, vj)| acc + vj * &inv[j][i])
                        })
                        .collect()
                })
                .collect();
            if self.corrupt {
                if let Some(x) = rows.first_mut().and_then(|r| r.first_mut()) {
                    *x += Rational::one();
                }
            }
            rows
        })
    }

    /// Gysin pushforward, determined by `∫_Y f_*(b)·a = ∫_X b·f*(a)`.
    pub fn pushforward_class(&self, c: &GradedClass) -> Result<GradedClass, Error> {
        if !c.same_ambient(&GradedClass::one(self.source.ring())) {
            return Err(Error::AmbientMismatch(
                c.ring().key().to_string(),
                self.source.key().to_string(),
            ));
        }
        let yr = self.target.ring();
        let mut out = GradedClass::zero(yr);
        for (d, coords) in c.components() {
            let dt = d as i64 - self.relative_dim();
            if dt < 0 || dt > self.target.dim() as i64 {
                continue;
            }
            let dt = dt as usize;
            let m = self.pushforward_matrix(d);
            let mut acc = vec![YPolynomial::zero(); yr.rank(dt)];
            for (k, a) in coords.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (i, x) in m[k].iter().enumerate() {
                    if !x.is_zero() {
                        acc[i] = &acc[i] + &a.scale(x);
                    }
                }
            }
            out = &out + &GradedClass::from_component(yr, dt, acc);
        }
        Ok(out)
    }

    /// True when every relation of the target maps to zero.
    pub fn is_ring_hom(&self) -> bool {
        let one = GradedClass::one(self.source.ring());
        self.target.ring().relations().iter().all(|rel| {
            let mut acc = GradedClass::zero(self.source.ring());
            for (m, c) in rel.terms() {
                let t = m.iter().enumerate().fold(one.clone(), |a, (j, &e)| {
                    &a * &self.images[j].pow(e as usize)
                });
                acc = &acc + &t.scale_rational(c);
            }
            acc.is_zero()
        })
    }

    /// `c(TX) · f*c(TY)^{-1}`, the Chern class of the relative tangent
    /// bundle of a smooth map.
    pub fn tangent_quotient(&self) -> GradedClass {
        let pulled = self.pullback_class(self.target.tangent_chern()).unwrap();
        self.source.tangent_chern() * &pulled.inverse_unipotent()
    }

    fn compute_tangent(&self) -> GradedClass {
        let xr = self.source.ring();
        match &self.kind {
            MorphismKind::Identity => GradedClass::one(xr),
            MorphismKind::ToPoint => self.source.tangent_chern().clone(),
            MorphismKind::ProductProjection { keep } => {
                let mut out = GradedClass::one(xr);
                for i in (0..self.source.factors().len()).filter(|i| !keep.contains(i)) {
                    let pr = factor_projection(&self.source, i);
                    out = &out * &pr.pullback_class(pr.target.tangent_chern()).unwrap();
                }
                out
            }
            MorphismKind::BundleProjection => {
                let Construction::ProjBundle { chern, .. } = self.source.construction() else {
                    unreachable!("bundle projection from a projective bundle")
                };
                let r = chern.len();
                let z = GradedClass::generator(xr, xr.ngens() - 1);
                let one_z = &GradedClass::one(xr) + &z;
                let mut out = one_z.pow(r);
                for (i, c) in chern.iter().enumerate() {
                    out = &out + &(&self.pullback_class(c).unwrap() * &one_z.pow(r - 1 - i));
                }
                out
            }
            MorphismKind::Composite { outer, inner } if outer.smooth && inner.smooth => {
                let tf = inner.relative_tangent().unwrap();
                let tg = outer.relative_tangent().unwrap();
                tf.total_chern() * &inner.pullback_class(tg.total_chern()).unwrap()
            }
            _ => self.tangent_quotient(),
        }
    }

    /// Relative tangent bundle of a smooth morphism.
    pub fn relative_tangent(&self) -> Result<BundleClass, Error> {
        self.tangent
            .get_or_init(|| {
                self.smooth.then(|| {
                    BundleClass::new_unchecked(
                        &self.source,
                        self.relative_dim() as usize,
                        self.compute_tangent(),
                    )
                })
            })
            .clone()
            .ok_or_else(|| Error::NotSmooth(self.to_string()))
    }

    fn describe(&self) -> String {
        match &self.kind {
            MorphismKind::Identity => "id".into(),
            MorphismKind::ToPoint => "to-point".into(),
            MorphismKind::ProductProjection { keep } => format!("pr{keep:?}"),
            MorphismKind::BundleProjection => "bundle-projection".into(),
            MorphismKind::BundleMap { .. } => "bundle-map".into(),
            MorphismKind::LinearEmbedding => "linear-embedding".into(),
            MorphismKind::CenterEmbedding => "center-embedding".into(),
            MorphismKind::ExceptionalInclusion => "exceptional-inclusion".into(),
            MorphismKind::BlowDown => "blow-down".into(),
            MorphismKind::StrictTransform { .. } => "strict-transform".into(),
            MorphismKind::ZeroSection => "zero-section".into(),
            MorphismKind::Pairing(cs) => {
                format!(
                    "({})",
                    cs.iter()
                        .map(|c| c.describe())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            }
            MorphismKind::Lift => "lift".into(),
            MorphismKind::Composite { outer, inner } => {
                format!("{}∘{}", outer.describe(), inner.describe())
            }
            MorphismKind::Automorphism { inverse } => format!("permutation{inverse:?}"),
        }
    }
}

impl fmt::Display for MorphismModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            self.describe(),
            self.source.key(),
            self.target.key()
        )
    }
}

impl fmt::Debug for MorphismModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn gens(x: &Variety) -> Vec<GradedClass> {
    (0..x.ring().ngens())
        .map(|i| GradedClass::generator(x.ring(), i))
        .collect()
}

pub fn identity(x: &Variety) -> Morphism {
    MorphismModel::build(x, x, MorphismKind::Identity, gens(x), true)
}

pub fn to_point(x: &Variety) -> Morphism {
    if x.is_point() {
        return identity(x);
    }
    MorphismModel::build(x, &make_point(), MorphismKind::ToPoint, vec![], true)
}

/// Projection of a product onto the factors at `keep` (sorted positions).
pub fn product_projection(x: &Variety, keep: &[usize]) -> Morphism {
    let factors = x.factors();
    if keep.is_empty() {
        return to_point(x);
    }
    if keep.len() == factors.len() {
        debug_assert!(keep.iter().enumerate().all(|(i, &k)| i == k));
        return identity(x);
    }
    let kept: Vec<Variety> = keep.iter().map(|&i| factors[i].clone()).collect();
    let (target, _) = make_product_list(&kept);
    let mut images = Vec::new();
    for &i in keep {
        for g in x.gen_range_of_factor(i) {
            images.push(GradedClass::generator(x.ring(), g));
        }
    }
    MorphismModel::build(
        x,
        &target,
        MorphismKind::ProductProjection {
            keep: keep.to_vec(),
        },
        images,
        true,
    )
}

/// Projection onto the factor at position `i` (identity for a non-product).
pub fn factor_projection(x: &Variety, i: usize) -> Morphism {
    if x.factors().len() <= 1 {
        return identity(x);
    }
    product_project_single(x, i)
}

fn product_project_single(x: &Variety, i: usize) -> Morphism {
    product_projection(x, &[i])
}

/// A product together with its projections onto each piece.
pub struct ProductData {
    pub variety: Variety,
    pub projections: Vec<Morphism>,
    pub positions: Vec<Vec<usize>>,
}

pub fn product_with_projections(pieces: &[Variety]) -> ProductData {
    let (variety, positions) = make_product_list(pieces);
    let projections = positions
        .iter()
        .map(|p| product_projection(&variety, p))
        .collect();
    ProductData {
        variety,
        projections,
        positions,
    }
}

/// Automorphisms of `x` that permute its generators, the identity first:
/// exchanges of equal factors, together with the group they generate with
/// every transposition of generators that respects the relations (such as
/// two levels of a tower built from the same bundle).
pub fn factor_automorphisms(x: &Variety) -> Vec<Morphism> {
    let factor_perms = factor_permutations(x);
    let group = generator_permutations(x, &factor_perms);
    group
        .iter()
        .map(|p| match factor_perms.iter().find(|(q, _)| q == p) {
            Some((_, m)) => m.clone(),
            None => permutation(x, p),
        })
        .collect()
}

const MAX_AUTOMORPHISMS: usize = 5040;

fn generator_index(x: &Variety, c: &GradedClass) -> usize {
    (0..x.ring().ngens())
        .find(|&j| *c == GradedClass::generator(x.ring(), j))
        .expect("a generator")
}

/// Factor exchanges with their generator permutations, the identity first.
fn factor_permutations(x: &Variety) -> Vec<(Vec<usize>, Morphism)> {
    let factors = x.factors();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        match groups.iter_mut().find(|g| factors[g[0]] == *f) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let id = identity(x);
    if groups.iter().all(|g| g.len() == 1) {
        return vec![((0..x.ring().ngens()).collect(), id)];
    }
    groups
        .iter()
        .map(|g| g.iter().copied().permutations(g.len()).collect::<Vec<_>>())
        .multi_cartesian_product()
        .map(|choice| {
            let mut perm = vec![0; factors.len()];
            for (g, p) in groups.iter().zip(&choice) {
                for (&slot, &src) in g.iter().zip(p) {
                    perm[slot] = src;
                }
            }
            let comps = perm.iter().map(|&i| factor_projection(x, i)).collect();
            let m = pairing(x, x, comps, Some(true));
            (m.images.iter().map(|c| generator_index(x, c)).collect(), m)
        })
        .collect()
}

/// The automorphism pulling generator `i` back to generator `perm[i]`.
fn permutation(x: &Variety, perm: &[usize]) -> Morphism {
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    let images = perm
        .iter()
        .map(|&p| GradedClass::generator(x.ring(), p))
        .collect();
    MorphismModel::build(x, x, MorphismKind::Automorphism { inverse }, images, true)
}

/// Closure of the factor exchanges and the admissible transpositions,
/// cached per variety. The factor exchanges are always all present; the
/// closure stops growing at `MAX_AUTOMORPHISMS` elements.
fn generator_permutations(x: &Variety, factor_perms: &[(Vec<usize>, Morphism)]) -> Vec<Vec<usize>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Vec<Vec<usize>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("automorphism cache").get(x.key()) {
        return g.clone();
    }
    let n = x.ring().ngens();
    let mut group: Vec<Vec<usize>> = factor_perms.iter().map(|(p, _)| p.clone()).collect();
    let mut seen: HashSet<Vec<usize>> = group.iter().cloned().collect();
    let mut extra = Vec::new();
    for (i, j) in (0..n).tuple_combinations() {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, j);
        if !seen.contains(&p) && permutation(x, &p).is_ring_hom() {
            extra.push(p);
        }
    }
    if !extra.is_empty() {
        let gens: Vec<Vec<usize>> = group.iter().skip(1).cloned().chain(extra).collect();
        let mut frontier = group.clone();
        while !frontier.is_empty() && group.len() < MAX_AUTOMORPHISMS {
            let mut next = Vec::new();
            for a in &frontier {
                for b in &gens {
                    let c: Vec<usize> = a.iter().map(|&i| b[i]).collect();
                    if group.len() < MAX_AUTOMORPHISMS && seen.insert(c.clone()) {
                        group.push(c.clone());
                        next.push(c);
                    }
                }
            }
            frontier = next;
        }
    }
    cache
        .lock()
        .expect("automorphism cache")
        .insert(x.key().to_string(), group.clone());
    group
}

/// The inverse of a generator-permutation automorphism.
pub(crate) fn inverse_automorphism(x: &Variety, inverse: &[usize]) -> Morphism {
    permutation(x, inverse)
}

/// Factor positions of the source that the morphism depends on.
pub(crate) fn support(m: &MorphismModel) -> Vec<usize> {
    match &m.kind {
        MorphismKind::ToPoint => vec![],
        MorphismKind::ProductProjection { keep } => keep.clone(),
        MorphismKind::Composite { inner, .. } => support(inner),
        MorphismKind::Pairing(cs) => {
            let mut s: Vec<usize> = cs.iter().flat_map(|c| support(c)).collect();
            s.sort_unstable();
            s.dedup();
            s
        }
        _ => (0..m.source.factors().len()).collect(),
    }
}

/// Factors `m` through the projection onto the factors at `s ⊇ support(m)`.
pub(crate) fn restrict(m: &Morphism, s: &[usize]) -> Morphism {
    let nf = m.source.factors().len();
    if s.len() == nf {
        return m.clone();
    }
    let factors = m.source.factors();
    let (xs, _) = make_product_list(&s.iter().map(|&i| factors[i].clone()).collect::<Vec<_>>());
    let local = |i: &usize| {
        s.iter()
            .position(|j| j == i)
            .expect("support inside restriction")
    };
    match &m.kind {
        MorphismKind::ToPoint => to_point(&xs),
        MorphismKind::ProductProjection { keep } => {
            product_projection(&xs, &keep.iter().map(local).collect::<Vec<_>>())
        }
        MorphismKind::Composite { outer, inner } => compose(outer, &restrict(inner, s)),
        MorphismKind::Pairing(cs) => {
            let parts = cs.iter().map(|c| restrict(c, s)).collect();
            pairing(&xs, &m.target, parts, None)
        }
        _ => unreachable!("morphism with full support restricted to a proper subset"),
    }
}

fn infer_pairing_smooth(comps: &[Morphism]) -> bool {
    let supports: Vec<Vec<usize>> = comps.iter().map(|c| support(c)).collect();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if supports[i].iter().any(|a| supports[j].contains(a)) {
                return false;
            }
        }
    }
    comps
        .iter()
        .zip(&supports)
        .all(|(c, s)| restrict(c, s).smooth)
}

/// Map into a product from one component per factor of `target`.
pub fn pairing(
    source: &Variety,
    target: &Variety,
    comps: Vec<Morphism>,
    smooth: Option<bool>,
) -> Morphism {
    let tf = target.factors();
    assert_eq!(comps.len(), tf.len(), "one component per factor");
    if tf.is_empty() {
        return to_point(source);
    }
    if tf.len() == 1 {
        return comps.into_iter().next().unwrap();
    }
    if source == target
        && comps
            .iter()
            .enumerate()
            .all(|(k, c)| c.same(&factor_projection(source, k)))
    {
        return identity(source);
    }
    if let Some(m) = as_projection(source, target, &comps).or_else(|| common_inner(target, &comps))
    {
        return m;
    }
    let images = comps
        .iter()
        .flat_map(|c| c.images.iter().cloned())
        .collect();
    let smooth = smooth.unwrap_or_else(|| infer_pairing_smooth(&comps));
    MorphismModel::build(source, target, MorphismKind::Pairing(comps), images, smooth)
}

/// Components that are projections onto increasing single factors.
fn as_projection(source: &Variety, target: &Variety, comps: &[Morphism]) -> Option<Morphism> {
    let mut keep = Vec::with_capacity(comps.len());
    for c in comps {
        match &c.kind {
            MorphismKind::ProductProjection { keep: k }
                if k.len() == 1 && keep.last().is_none_or(|&p| p < k[0]) =>
            {
                keep.push(k[0])
            }
            _ => return None,
        }
    }
    let m = product_projection(source, &keep);
    (m.target == *target).then_some(m)
}

/// Components `pr_k ∘ h` for one `h` into the target.
fn common_inner(target: &Variety, comps: &[Morphism]) -> Option<Morphism> {
    let mut common: Option<&Morphism> = None;
    for (k, c) in comps.iter().enumerate() {
        let MorphismKind::Composite { outer, inner } = &c.kind else {
            return None;
        };
        if inner.target != *target
            || !outer.same(&factor_projection(target, k))
            || common.is_some_and(|h| !h.same(inner))
        {
            return None;
        }
        common = Some(inner);
    }
    common.cloned()
}

/// `f × g : A×B → C×D`.
pub fn product_map(f: &Morphism, g: &Morphism) -> Morphism {
    let ab = product_with_projections(&[f.source.clone(), g.source.clone()]);
    let cd = product_with_projections(&[f.target.clone(), g.target.clone()]);
    let fa = compose(f, &ab.projections[0]);
    let gb = compose(g, &ab.projections[1]);
    let n = cd.variety.factors().len();
    let comps = (0..n)
        .map(|p| {
            if let Some(i) = cd.positions[0].iter().position(|&q| q == p) {
                compose(&factor_projection(&f.target, i), &fa)
            } else {
                let i = cd.positions[1].iter().position(|&q| q == p).unwrap();
                compose(&factor_projection(&g.target, i), &gb)
            }
        })
        .collect();
    pairing(&ab.variety, &cd.variety, comps, Some(f.smooth && g.smooth))
}

/// A projective bundle with its projection and the class `ζ = c_1(O(1))`.
pub struct ProjectiveBundle {
    pub variety: Variety,
    pub projection: Morphism,
    pub zeta: GradedClass,
    roles: Vec<GenRole>,
}

impl ProjectiveBundle {
    /// Images of the bundle's generators under a map into it, given the
    /// images of the base generators and of `ζ`.
    pub(crate) fn lift_images(&self, base: &[GradedClass], zeta: &GradedClass) -> Vec<GradedClass> {
        self.roles
            .iter()
            .map(|r| match r {
                GenRole::Base(j) => base[*j].clone(),
                GenRole::Zeta => zeta.clone(),
            })
            .collect()
    }
}

/// Projective bundle of lines in a bundle with Chern classes `c_1..c_r`.
pub fn projectivize(base: &Variety, chern: &[GradedClass]) -> Result<ProjectiveBundle, Error> {
    let BundleBuild {
        variety,
        roles,
        shape,
    } = build_proj_bundle(base, chern)?;
    let nb = base.ring().ngens();
    let zeta = match roles.iter().position(|r| *r == GenRole::Zeta) {
        Some(g) => GradedClass::generator(variety.ring(), g),
        None => -&chern[0],
    };
    let base_images = || -> Vec<GradedClass> {
        (0..nb)
            .map(|j| {
                let g = roles
                    .iter()
                    .position(|r| *r == GenRole::Base(j))
                    .expect("every base generator has a role");
                GradedClass::generator(variety.ring(), g)
            })
            .collect()
    };
    let projection = match &shape {
        BundleShape::Base => identity(base),
        BundleShape::Fibre => to_point(&variety),
        BundleShape::Genuine => MorphismModel::build(
            &variety,
            base,
            MorphismKind::BundleProjection,
            base_images(),
            true,
        ),
        BundleShape::Split {
            sub,
            sub_positions,
            sub_chern,
            support,
            positions,
        } => {
            let inner = projectivize(sub, sub_chern)?;
            let to_sub = compose(
                &inner.projection,
                &product_projection(&variety, &positions[0]),
            );
            let mut rest = 0;
            let comps = (0..base.factors().len())
                .map(|i| match support.iter().position(|&k| k == i) {
                    Some(k) => compose(&factor_projection(sub, sub_positions[k][0]), &to_sub),
                    None => {
                        rest += 1;
                        factor_projection(&variety, positions[rest][0])
                    }
                })
                .collect();
            pairing(&variety, base, comps, Some(true))
        }
        BundleShape::Swapped {
            lower,
            lower_chern,
            inner,
            pulled,
        } => {
            let down = projectivize(lower, lower_chern)?.projection;
            let up = projectivize(inner, pulled)?.projection;
            MorphismModel::bundle_map(&variety, base, &down, &up, base_images())
        }
    };
    debug_assert!(projection.images().len() == nb && projection.source() == &variety);
    Ok(ProjectiveBundle {
        variety,
        projection,
        zeta,
        roles,
    })
}

/// Projection of a genuine projective-bundle construction onto its base.
pub fn bundle_projection(x: &Variety) -> Result<Morphism, Error> {
    let Construction::ProjBundle { base, chern } = x.construction() else {
        return Err(Error::UnsupportedMorphism(format!(
            "{} is not a projective bundle",
            x.key()
        )));
    };
    Ok(projectivize(base, chern)?.projection)
}

/// Linear `P^a ⊂ P^n` in general position.
pub fn linear_embedding(a: usize, n: usize) -> Result<Morphism, Error> {
    linear(a, n, MorphismKind::LinearEmbedding)
}

/// Linear `P^m ⊂ P^n` serving as a blow-up center.
pub fn center_embedding(m: usize, n: usize) -> Result<Morphism, Error> {
    linear(m, n, MorphismKind::CenterEmbedding)
}

fn linear(a: usize, n: usize, kind: MorphismKind) -> Result<Morphism, Error> {
    if a > n || n == 0 {
        return Err(Error::InvalidParameters(format!(
            "no linear embedding P({a}) -> P({n})"
        )));
    }
    let (src, tgt) = (make_proj(a), make_proj(n));
    if a == n {
        return Ok(identity(&tgt));
    }
    let img = if a == 0 {
        GradedClass::zero(src.ring())
    } else {
        GradedClass::generator(src.ring(), 0)
    };
    Ok(MorphismModel::build(&src, &tgt, kind, vec![img], false))
}

pub fn blow_down(n: usize, m: usize) -> Result<Morphism, Error> {
    let bl = make_blowup_linear(n, m)?;
    let pn = make_proj(n);
    Ok(MorphismModel::build(
        &bl,
        &pn,
        MorphismKind::BlowDown,
        vec![GradedClass::generator(bl.ring(), 0)],
        false,
    ))
}

/// Exceptional divisor `P(N)` of the blow-up of `P^n` along `P^m`, where the
/// normal bundle has total Chern class `(1+h)^(n-m)`.
pub fn exceptional_divisor(n: usize, m: usize) -> Result<ProjectiveBundle, Error> {
    if m >= n {
        return Err(Error::InvalidParameters(format!(
            "no exceptional divisor for P({m}) in P({n})"
        )));
    }
    let pm = make_proj(m);
    let h = if m == 0 {
        GradedClass::zero(pm.ring())
    } else {
        GradedClass::generator(pm.ring(), 0)
    };
    let chern: Vec<GradedClass> = (1..=n - m)
        .map(|i| h.pow(i).scale_rational(&binomial(n - m, i)))
        .collect();
    projectivize(&pm, &chern)
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| {
        acc * int((n - i) as i64) / int(i as i64 + 1)
    })
}

/// Inclusion of the exceptional divisor, with `e` restricting to `-ζ`.
pub fn exceptional_inclusion(n: usize, m: usize) -> Result<Morphism, Error> {
    let e = exceptional_divisor(n, m)?;
    let bl = make_blowup_linear(n, m)?;
    let pm = make_proj(m);
    let h = if m == 0 {
        GradedClass::zero(e.variety.ring())
    } else {
        e.projection
            .pullback_class(&GradedClass::generator(pm.ring(), 0))?
    };
    Ok(MorphismModel::build(
        &e.variety,
        &bl,
        MorphismKind::ExceptionalInclusion,
        vec![h, -&e.zeta],
        false,
    ))
}

/// Strict transform of a general `P^a ⊂ P^n` under the blow-up along `P^m`,
/// returned with its own blow-down to `P^a`.
pub(crate) fn strict_transform(
    n: usize,
    m: usize,
    a: usize,
) -> Result<(Morphism, Morphism), Error> {
    let bl = make_blowup_linear(n, m)?;
    let embedding = linear_embedding(a, n)?;
    let (source, source_blowdown) = if a + m < n {
        let pa = make_proj(a);
        (pa.clone(), identity(&pa))
    } else {
        let q = blow_down(a, a + m - n)?;
        (q.source.clone(), q)
    };
    let images = if a + m < n {
        let h = if a == 0 {
            GradedClass::zero(source.ring())
        } else {
            GradedClass::generator(source.ring(), 0)
        };
        vec![h, GradedClass::zero(source.ring())]
    } else {
        gens(&source)
    };
    let st = MorphismModel::build(
        &source,
        &bl,
        MorphismKind::StrictTransform {
            embedding,
            source_blowdown: source_blowdown.clone(),
        },
        images,
        false,
    );
    Ok((st, source_blowdown))
}

/// Section `B → P(E)` through a trivial line summand; needs `c_r(E) = 0`.
pub fn zero_section(x: &Variety) -> Result<Morphism, Error> {
    let Construction::ProjBundle { base, chern } = x.construction() else {
        return Err(Error::UnsupportedMorphism(format!(
            "{} is not a projective bundle",
            x.key()
        )));
    };
    if !chern.last().unwrap().is_zero() {
        return Err(Error::InvalidParameters(
            "zero section needs a vanishing top Chern class".into(),
        ));
    }
    let mut images = gens(base);
    images.push(GradedClass::zero(base.ring()));
    Ok(MorphismModel::build(
        base,
        x,
        MorphismKind::ZeroSection,
        images,
        false,
    ))
}

/// Map into a fiber product, given directly by its ring map.
pub(crate) fn lift(
    source: &Variety,
    target: &Variety,
    images: Vec<GradedClass>,
    smooth: bool,
) -> Morphism {
    MorphismModel::build(source, target, MorphismKind::Lift, images, smooth)
}

fn is_identity_map(source: &Variety, target: &Variety, images: &[GradedClass]) -> bool {
    source == target
        && images
            .iter()
            .enumerate()
            .all(|(i, c)| *c == GradedClass::generator(source.ring(), i))
}

fn try_rules(outer: &Morphism, inner: &Morphism) -> Option<Morphism> {
    use MorphismKind as K;
    if inner.is_identity() {
        return Some(outer.clone());
    }
    if outer.is_identity() {
        return Some(inner.clone());
    }
    if outer.target.is_point() {
        return Some(to_point(&inner.source));
    }
    match (&outer.kind, &inner.kind) {
        (K::ProductProjection { keep }, K::ProductProjection { keep: keep2 }) => {
            Some(product_projection(
                &inner.source,
                &keep.iter().map(|&i| keep2[i]).collect::<Vec<_>>(),
            ))
        }
        (K::ProductProjection { keep }, K::Pairing(cs)) => {
            let selected = keep.iter().map(|&i| cs[i].clone()).collect();
            Some(pairing(&inner.source, &outer.target, selected, None))
        }
        (K::Pairing(cs), _) => {
            let comps = cs.iter().map(|c| compose(c, inner)).collect();
            let smooth = (outer.smooth && inner.smooth).then_some(true);
            Some(pairing(&inner.source, &outer.target, comps, smooth))
        }
        (K::BundleProjection, K::ZeroSection) => Some(identity(&inner.source)),
        (
            K::BundleProjection,
            K::BundleMap {
                base_map,
                source_projection,
            },
        ) => Some(compose(base_map, source_projection)),
        (
            K::BlowDown,
            K::StrictTransform {
                embedding,
                source_blowdown,
            },
        ) => Some(compose(embedding, source_blowdown)),
        (K::BlowDown, K::ExceptionalInclusion) => {
            let Construction::BlowupLinear { n, m } = *outer.source.construction() else {
                return None;
            };
            let e = exceptional_divisor(n, m).ok()?;
            Some(compose(&center_embedding(m, n).ok()?, &e.projection))
        }
        _ => None,
    }
}

/// `outer ∘ inner`, normalized by the structural composition rules.
pub fn compose(outer: &Morphism, inner: &Morphism) -> Morphism {
    assert!(
        outer.source == inner.target,
        "cannot compose {outer} after {inner}"
    );
    if let Some(m) = try_rules(outer, inner) {
        return m;
    }
    if let MorphismKind::Composite { outer: a, inner: b } = &outer.kind {
        return compose(a, &compose(b, inner));
    }
    if let MorphismKind::Composite { outer: c, inner: d } = &inner.kind {
        if let Some(oc) = try_rules(outer, c) {
            return compose(&oc, d);
        }
    }
    let images: Vec<GradedClass> = outer
        .images
        .iter()
        .map(|c| inner.pullback_class(c).unwrap())
        .collect();
    if is_identity_map(&inner.source, &outer.target, &images) {
        return identity(&inner.source);
    }
    let smooth = outer.smooth && inner.smooth;
    MorphismModel::build(
        &inner.source,
        &outer.target,
        MorphismKind::Composite {
            outer: outer.clone(),
            inner: inner.clone(),
        },
        images,
        smooth,
    )
}

/// `outer ∘ inner`, or an error when the endpoints do not match.
pub fn try_compose(outer: &Morphism, inner: &Morphism) -> Result<Morphism, Error> {
    if outer.source != inner.target {
        return Err(Error::ReferenceMismatch {
            expected: outer.source.key().to_string(),
            found: inner.target.key().to_string(),
        });
    }
    Ok(compose(outer, inner))
}
