//! Seeded scenarios over the catalogue and the suite that runs every
//! identity check on them.

mod catalogue;
mod oracles;
mod rng;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub use catalogue::{
    bundle_catalogue, bundle_specialization_checks, catalogue_bases, CatalogueBundle,
    MAX_BUNDLE_BASE_DIM, MAX_BUNDLE_RANK, MIN_CATALOGUE_BUNDLES,
};
pub use oracles::blowup_model_oracles;
pub use rng::{SplitMix64, GOLDEN_GAMMA, MIX_1, MIX_2};

use crate::bivariant::axioms::{self, AxiomCode};
use crate::bivariant::{pullback, BivariantElement, Generator};
use crate::genus::SeriesName;
use crate::motivic::{blowup_relation_element, chi_y_shadow, diagrams_over, BlowupDiagram};
use crate::report::CheckReport;
use crate::transforms::checks::{
    check_blowup_vanishing, covariant_agreement_check, law_product, law_pullback, law_pushforward,
    module_property_check, sga6_rr_check, specialization_checks, verdier_rr_check,
};
use crate::transforms::Transformation;
use crate::varmodel::{
    blow_down, bundle_projection, center_embedding, compose, exceptional_divisor,
    exceptional_inclusion, factor_projection, identity, linear_embedding, make_blowup_linear,
    make_point, make_product, make_proj, make_proj_bundle, to_point, BundleClass, Construction,
    Morphism, MorphismKind, Variety,
};
use crate::{exactalg::int, Error, GradedClass, YPolynomial};

/// Budget used when none is given.
pub const DEFAULT_BUDGET: usize = 3;
/// Hard caps on generated scenarios.
pub const MAX_DIM: usize = 3;
pub const MAX_CHAIN: usize = 3;
pub const MAX_RANK: usize = 3;
/// Instances of each check family drawn per scenario.
pub const CHECKS_PER_FAMILY: usize = 4;
/// Window over which every numbered axiom must be exercised.
pub const COVERAGE_WINDOW: usize = 100;

/// The transformations whose laws the suite checks.
pub const LAW_TRANSFORMATIONS: [Transformation; 3] = [
    Transformation::Gamma(SeriesName::Todd),
    Transformation::Gamma(SeriesName::Chern),
    Transformation::Ty,
];

const ALL_TRANSFORMATIONS: [Transformation; 5] = [
    Transformation::Gamma(SeriesName::Chern),
    Transformation::Gamma(SeriesName::Todd),
    Transformation::Gamma(SeriesName::LClass),
    Transformation::Lambda,
    Transformation::Ty,
];

/// One family of checks a scenario can request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    Axiom(AxiomCode),
    Laws,
    RiemannRoch,
    Module,
    Specializations,
    Blowup,
    Duality,
}

impl CheckKind {
    /// Every family the suite runs by default, in execution order.
    pub fn all() -> Vec<CheckKind> {
        let mut out: Vec<CheckKind> = AxiomCode::ALL
            .into_iter()
            .filter(|c| *c != AxiomCode::Commutativity)
            .map(CheckKind::Axiom)
            .collect();
        out.extend([
            CheckKind::Laws,
            CheckKind::RiemannRoch,
            CheckKind::Module,
            CheckKind::Specializations,
            CheckKind::Blowup,
            CheckKind::Duality,
        ]);
        out
    }

    /// The bivariant axioms, unit laws and orientation checks.
    pub fn axioms() -> Vec<CheckKind> {
        Self::all()
            .into_iter()
            .filter(|k| matches!(k, CheckKind::Axiom(_)))
            .collect()
    }

    /// Names accepted in scripts: single families plus the groups `axioms`
    /// and `all`.
    pub fn parse_group(s: &str) -> Result<Vec<CheckKind>, Error> {
        match s {
            "all" => Ok(Self::all()),
            "axioms" => Ok(Self::axioms()),
            _ => Ok(vec![s.parse()?]),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::Axiom(c) => c.as_str(),
            CheckKind::Laws => "laws",
            CheckKind::RiemannRoch => "rr",
            CheckKind::Module => "module",
            CheckKind::Specializations => "specializations",
            CheckKind::Blowup => "blowup",
            CheckKind::Duality => "duality",
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if let Some(k) = Self::all()
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
        {
            return Ok(k);
        }
        Err(Error::InvalidParameters(format!("unknown check {s:?}")))
    }
}

/// Spaces, maps between them, elements over those maps, and the checks to run.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub seed: u64,
    pub spaces: Vec<Variety>,
    pub morphisms: Vec<Morphism>,
    pub elements: Vec<BivariantElement>,
    pub script: Vec<CheckKind>,
}

impl Scenario {
    /// Validates that every map has listed endpoints and every element is
    /// over a listed map.
    pub fn new(
        seed: u64,
        spaces: Vec<Variety>,
        morphisms: Vec<Morphism>,
        elements: Vec<BivariantElement>,
        script: Vec<CheckKind>,
    ) -> Result<Self, Error> {
        for m in &morphisms {
            for end in [m.source(), m.target()] {
                if !spaces.contains(end) {
                    return Err(Error::InvalidParameters(format!(
                        "{m}: {end} is not a listed space"
                    )));
                }
            }
        }
        for e in &elements {
            if !morphisms.iter().any(|m| m.same(e.reference())) {
                return Err(Error::InvalidParameters(format!(
                    "{e}: reference is not a listed morphism"
                )));
            }
        }
        Ok(Scenario {
            seed,
            spaces,
            morphisms,
            elements,
            script,
        })
    }

    /// The same scenario with the pushforward table of morphism `index`
    /// deliberately broken, everywhere that map occurs.
    pub fn with_corrupted_pushforward(&self, index: usize) -> Result<Self, Error> {
        let target = self
            .morphisms
            .get(index)
            .ok_or_else(|| Error::InvalidParameters(format!("no morphism at index {index}")))?;
        let bad = target.with_corrupted_pushforward();
        let swap = |m: &Morphism| {
            if m.same(target) {
                bad.clone()
            } else {
                m.clone()
            }
        };
        let morphisms = self.morphisms.iter().map(swap).collect();
        let mut elements = Vec::with_capacity(self.elements.len());
        for e in &self.elements {
            let mut out = BivariantElement::zero(&swap(e.reference()));
            for (g, c) in e.terms() {
                let g = Generator::new(&swap(g.map()), &swap(g.reference()))?;
                out = out.add(&BivariantElement::from_generator(g).scale(c))?;
            }
            elements.push(out);
        }
        Ok(Scenario {
            morphisms,
            elements,
            ..self.clone()
        })
    }
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        writeln!(
            f,
            "spaces: {}",
            self.spaces
                .iter()
                .map(|x| x.key())
                .collect::<Vec<_>>()
                .join(", ")
        )?;
        for m in &self.morphisms {
            writeln!(f, "map {m}")?;
        }
        for e in &self.elements {
            writeln!(f, "element {e}")?;
        }
        write!(
            f,
            "script: {}",
            self.script
                .iter()
                .map(|k| k.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// A reproducible scenario. Budget 0 gives the point alone; otherwise the
/// dimension, chain-length and rank caps are `min(budget, 3)`.
pub fn generate(seed: u64, budget: usize) -> Scenario {
    let pt = make_point();
    if budget == 0 {
        let id = identity(&pt);
        let e = BivariantElement::generator(&id, &id).expect("identity generator");
        return Scenario {
            seed,
            spaces: vec![pt],
            morphisms: vec![id],
            elements: vec![e],
            script: CheckKind::all(),
        };
    }
    let dim_cap = budget.min(MAX_DIM);
    let chain_cap = budget.min(MAX_CHAIN);
    let rank_cap = budget.min(MAX_RANK);
    let mut rng = SplitMix64::new(seed);
    let draws = if budget >= 2 { 2 + rng.below(2) } else { 1 };
    let mut base_maps: Vec<Morphism> = Vec::new();
    for _ in 0..draws {
        let x = draw_space(&mut rng, dim_cap, rank_cap);
        base_maps.extend(structural_maps(&mut rng, &x));
    }
    let mut morphisms: Vec<Morphism> = Vec::new();
    let push = |ms: &mut Vec<Morphism>, m: Morphism| {
        if !ms.iter().any(|k| k.same(&m)) {
            ms.push(m);
        }
    };
    for m in &base_maps {
        push(&mut morphisms, m.clone());
    }
    let mut ends: Vec<Variety> = vec![pt.clone()];
    for m in &base_maps {
        for end in [m.source(), m.target()] {
            if !ends.contains(end) {
                ends.push(end.clone());
            }
        }
    }
    for x in &ends {
        push(&mut morphisms, identity(x));
        if !x.is_point() {
            push(&mut morphisms, crate::varmodel::to_point(x));
        }
    }
    let movers: Vec<Morphism> = morphisms
        .iter()
        .filter(|m| !m.is_identity())
        .cloned()
        .collect();
    for _ in 0..4 {
        let Some(first) = rng.pick(&movers) else {
            break;
        };
        let mut chain = first.clone();
        let length = 2 + rng.below(chain_cap.max(2) - 1);
        for _ in 1..length.min(chain_cap) {
            let next: Vec<Morphism> = movers
                .iter()
                .filter(|g| g.source() == chain.target())
                .cloned()
                .collect();
            match rng.pick(&next) {
                Some(g) => chain = compose(g, &chain),
                None => break,
            }
        }
        push(&mut morphisms, chain);
    }
    let mut elements: Vec<BivariantElement> = Vec::new();
    let mut references: Vec<Morphism> = Vec::new();
    if let Some(x) = rng.pick(&ends) {
        references.push(identity(x));
    }
    let to_pt: Vec<Morphism> = morphisms
        .iter()
        .filter(|m| m.target().is_point())
        .cloned()
        .collect();
    references.extend(rng.pick(&to_pt).cloned());
    let extra = 2 + rng.below(3);
    references.extend(rng.sample(&morphisms, extra));
    for f in references {
        let gens: Vec<Generator> = morphisms
            .iter()
            .filter(|h| h.target() == f.source())
            .filter_map(|h| Generator::new(h, &f).ok())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let mut e = BivariantElement::zero(&f);
        let terms = 1 + rng.below(2);
        for g in rng.sample(&gens, terms) {
            let c = [-2, -1, 1, 2][rng.below(4)];
            e = e
                .add(&BivariantElement::from_generator(g).scale(c))
                .expect("same reference");
        }
        if !e.is_zero() && !elements.iter().any(|x| x == &e) {
            elements.push(e);
        }
    }
    let mut spaces = ends;
    spaces.sort_by(|a, b| a.key().cmp(b.key()));
    Scenario {
        seed,
        spaces,
        morphisms,
        elements,
        script: CheckKind::all(),
    }
}

fn draw_space(rng: &mut SplitMix64, dim_cap: usize, rank_cap: usize) -> Variety {
    let mut kinds = vec![0];
    if dim_cap >= 2 {
        kinds.extend([1, 2, 3]);
    }
    match kinds[rng.below(kinds.len())] {
        1 => {
            let a = 1 + rng.below(dim_cap - 1);
            let b = 1 + rng.below(dim_cap - a);
            make_product(&make_proj(a), &make_proj(b))
        }
        2 => {
            let r = 2 + rng.below(rank_cap.min(dim_cap) - 1);
            let a = 1 + rng.below(dim_cap + 1 - r);
            let base = make_proj(a);
            let h = base.gen("h").expect("projective space has h");
            let lines: Vec<GradedClass> = (0..r)
                .map(|_| h.scale_rational(&int(rng.range(-1, 2))))
                .collect();
            let split = BundleClass::split(&base, &lines).expect("line classes of degree one");
            let chern: Vec<GradedClass> = (1..=r).map(|i| split.chern(i)).collect();
            make_proj_bundle(&base, &chern).expect("split bundle over projective space")
        }
        3 => {
            let n = 2 + rng.below(dim_cap - 1);
            let m = rng.below(n - 1);
            make_blowup_linear(n, m).expect("linear center of codimension at least two")
        }
        _ => make_proj(1 + rng.below(dim_cap)),
    }
}

fn structural_maps(rng: &mut SplitMix64, x: &Variety) -> Vec<Morphism> {
    let mut out = vec![identity(x)];
    match x.construction() {
        Construction::Proj(n) if *n >= 1 => {
            let a = rng.below(*n);
            out.extend(linear_embedding(a, *n).ok());
        }
        Construction::Product(fs) => {
            for i in 0..fs.len() {
                out.push(factor_projection(x, i));
            }
        }
        Construction::ProjBundle { .. } => out.extend(bundle_projection(x).ok()),
        Construction::BlowupLinear { n, m } => {
            out.extend(blow_down(*n, *m).ok());
            out.extend(exceptional_inclusion(*n, *m).ok());
            out.extend(exceptional_divisor(*n, *m).ok().map(|e| e.projection));
            out.extend(center_embedding(*m, *n).ok());
        }
        _ => {}
    }
    out
}

/// Outcome of one scenario.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub executed: usize,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
    pub failures: Vec<CheckReport>,
    #[serde(skip)]
    pub coverage: BTreeMap<String, usize>,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Counts a check; unsupported squares are counted apart, other errors
    /// become failures.
    pub fn record(&mut self, family: &str, r: Result<CheckReport, Error>) {
        match r {
            Ok(r) => self.tally(family, r),
            Err(Error::UnsupportedFiberProduct(_)) => self.unsupported += 1,
            Err(e) => self.tally(
                family,
                CheckReport {
                    check: family.to_string(),
                    inputs: String::new(),
                    lhs: "error".into(),
                    rhs: e.to_string(),
                    pass: false,
                },
            ),
        }
    }

    pub fn tally(&mut self, family: &str, r: CheckReport) {
        self.executed += 1;
        *self.coverage.entry(family.to_string()).or_default() += 1;
        if r.pass {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(r);
        }
    }

    fn absorb(&mut self, other: &Summary) {
        self.executed += other.executed;
        self.passed += other.passed;
        self.failed += other.failed;
        self.unsupported += other.unsupported;
        self.failures.extend(other.failures.iter().cloned());
        for (k, v) in &other.coverage {
            *self.coverage.entry(k.clone()).or_default() += v;
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "seed {}: {} executed, {} passed, {} failed, {} unsupported",
            self.seed, self.executed, self.passed, self.failed, self.unsupported
        )?;
        for r in &self.failures {
            write!(f, "\n{r}")?;
        }
        Ok(())
    }
}

struct Runner<'a> {
    s: &'a Scenario,
    rng: SplitMix64,
    over: HashMap<String, Vec<BivariantElement>>,
    summary: Summary,
}

impl<'a> Runner<'a> {
    fn record(&mut self, family: &str, r: Result<CheckReport, Error>) {
        self.summary.record(family, r);
    }

    fn record_all(&mut self, family: &str, r: Result<Vec<CheckReport>, Error>) {
        match r {
            Ok(v) => v.into_iter().for_each(|x| self.summary.tally(family, x)),
            Err(e) => self.record(family, Err(e)),
        }
    }

    fn maps(&self) -> &'a [Morphism] {
        &self.s.morphisms
    }

    /// Scenario elements over `f`, then generators drawn from the scenario's
    /// maps and one integer combination of them.
    fn over(&mut self, f: &Morphism) -> Vec<BivariantElement> {
        if let Some(v) = self.over.get(f.key()) {
            return v.clone();
        }
        let mut out: Vec<BivariantElement> = self
            .s
            .elements
            .iter()
            .filter(|e| e.reference().same(f))
            .cloned()
            .collect();
        let gens: Vec<BivariantElement> = self
            .maps()
            .iter()
            .filter(|h| h.target() == f.source())
            .filter_map(|h| BivariantElement::generator(h, f).ok())
            .collect();
        if gens.len() >= 2 {
            out.push(
                gens[0]
                    .scale(2)
                    .sub(&gens[gens.len() - 1])
                    .expect("same reference"),
            );
        }
        out.extend(gens);
        self.over.insert(f.key().to_string(), out.clone());
        out
    }

    fn pick_over(&mut self, f: &Morphism) -> Option<BivariantElement> {
        let v = self.over(f);
        self.rng.pick(&v).cloned()
    }

    fn sample<T: Clone>(&mut self, candidates: Vec<T>) -> Vec<T> {
        self.rng.sample(&candidates, CHECKS_PER_FAMILY)
    }

    fn chains2(&self) -> Vec<(Morphism, Morphism)> {
        let ms = self.maps();
        let mut out = Vec::new();
        for f in ms {
            for g in ms.iter().filter(|g| g.source() == f.target()) {
                out.push((f.clone(), g.clone()));
            }
        }
        out
    }

    fn chains3(&self) -> Vec<(Morphism, Morphism, Morphism)> {
        let ms = self.maps();
        let mut out = Vec::new();
        for (f, g) in self.chains2() {
            for h in ms.iter().filter(|h| h.source() == g.target()) {
                out.push((f.clone(), g.clone(), h.clone()));
            }
        }
        out
    }

    /// `(f, g)` with a common target.
    fn cospans(&self) -> Vec<(Morphism, Morphism)> {
        let ms = self.maps();
        let mut out = Vec::new();
        for f in ms {
            for g in ms.iter().filter(|g| g.target() == f.target()) {
                out.push((f.clone(), g.clone()));
            }
        }
        out
    }

    fn axiom(&mut self, code: AxiomCode) {
        let name = code.as_str();
        match code {
            AxiomCode::B1 => {
                for (f, g, k) in self.sample(self.chains3()) {
                    if let (Some(a), Some(b), Some(c)) =
                        (self.pick_over(&f), self.pick_over(&g), self.pick_over(&k))
                    {
                        self.record(name, axioms::associativity(&a, &b, &c));
                    }
                }
            }
            AxiomCode::B2 => {
                for (f, g, h) in self.sample(self.chains3()) {
                    if let Some(a) = self.pick_over(&compose(&compose(&h, &g), &f)) {
                        self.record(name, axioms::pushforward_functoriality(&f, &g, &h, &a));
                    }
                }
            }
            AxiomCode::B3 => {
                let mut cands = Vec::new();
                for (f, g) in self.cospans() {
                    for h in self.maps().iter().filter(|h| h.target() == g.source()) {
                        cands.push((f.clone(), g.clone(), h.clone()));
                    }
                }
                for (f, g, h) in self.sample(cands) {
                    if let Some(a) = self.pick_over(&f) {
                        self.record(name, axioms::pullback_functoriality(&g, &h, &a));
                    }
                }
            }
            AxiomCode::B4 => {
                for (f, g, h) in self.sample(self.chains3()) {
                    if let (Some(a), Some(b)) =
                        (self.pick_over(&compose(&g, &f)), self.pick_over(&h))
                    {
                        self.record(name, axioms::product_pushforward(&f, &g, &a, &b));
                    }
                }
            }
            AxiomCode::B5 | AxiomCode::B6 => {
                let mut cands = Vec::new();
                for (f, g) in self.chains2() {
                    for h in self.maps().iter().filter(|h| h.target() == g.target()) {
                        cands.push((f.clone(), g.clone(), h.clone()));
                    }
                }
                for (f, g, h) in self.sample(cands) {
                    if code == AxiomCode::B5 {
                        if let (Some(a), Some(b)) = (self.pick_over(&f), self.pick_over(&g)) {
                            self.record(name, axioms::product_pullback(&h, &a, &b));
                        }
                    } else if let Some(a) = self.pick_over(&compose(&g, &f)) {
                        self.record(name, axioms::pushforward_pullback(&f, &g, &h, &a));
                    }
                }
            }
            AxiomCode::B7 => {
                let mut cands = Vec::new();
                for (f, g) in self.cospans() {
                    for h in self.maps().iter().filter(|h| h.source() == f.target()) {
                        cands.push((f.clone(), g.clone(), h.clone()));
                    }
                }
                for (f, g, h) in self.sample(cands) {
                    if let (Some(a), Some(b)) =
                        (self.pick_over(&f), self.pick_over(&compose(&h, &g)))
                    {
                        self.record(name, axioms::projection_formula(&g, &h, &a, &b));
                    }
                }
            }
            AxiomCode::Units => {
                for (f, g) in self.sample(self.cospans()) {
                    if let Some(a) = self.pick_over(&f) {
                        self.record_all(name, axioms::unit_laws(&a, Some(&g)));
                    }
                }
            }
            AxiomCode::ThetaStability => {
                let smooth: Vec<(Morphism, Morphism)> = self
                    .chains2()
                    .into_iter()
                    .filter(|(f, g)| f.is_smooth() && g.is_smooth())
                    .collect();
                for (f, g) in self.sample(smooth) {
                    self.record(name, axioms::theta_multiplicative(&f, &g));
                }
                let stable: Vec<(Morphism, Morphism)> = self
                    .cospans()
                    .into_iter()
                    .filter(|(f, _)| f.is_smooth())
                    .collect();
                for (f, g) in self.sample(stable) {
                    self.record_all(name, axioms::theta_stability(&f, &g));
                }
            }
            AxiomCode::Commutativity => {}
        }
    }

    fn laws(&mut self) {
        for which in LAW_TRANSFORMATIONS {
            for (f, g) in self.sample(self.chains2()) {
                if let (Some(a), Some(b)) = (self.pick_over(&f), self.pick_over(&g)) {
                    self.record("laws", law_product(which, &a, &b));
                }
                if let Some(a) = self.pick_over(&compose(&g, &f)) {
                    self.record("laws", law_pushforward(which, &f, &g, &a));
                }
            }
            for (f, g) in self.sample(self.cospans()) {
                if let Some(a) = self.pick_over(&f) {
                    self.record("laws", law_pullback(which, &g, &a));
                }
            }
        }
    }

    fn riemann_roch(&mut self) {
        let ms = self.maps();
        let mut pulls = Vec::new();
        let mut pushes = Vec::new();
        for f in ms.iter().filter(|f| f.is_smooth() && !f.is_identity()) {
            for g in ms.iter().filter(|g| g.source() == f.target()) {
                pulls.push((f.clone(), g.clone()));
            }
            for other in ms.iter().filter(|o| o.target() == f.target()) {
                pushes.push((f.clone(), other.clone()));
            }
        }
        let pulls = self.sample(pulls);
        let pushes = self.sample(pushes);
        for which in LAW_TRANSFORMATIONS {
            for (f, g) in &pulls {
                if let Some(b) = self.pick_over(g) {
                    self.record("rr", verdier_rr_check(f, which, &b));
                }
            }
            for (g, f) in &pushes {
                let Some(b) = self.pick_over(f) else { continue };
                match pullback(g, &b) {
                    Ok(a) => self.record("rr", sga6_rr_check(g, f, which, &a)),
                    Err(e) => self.record("rr", Err(e)),
                }
            }
        }
    }

    fn module(&mut self) {
        let elements = self.sample(self.s.elements.clone());
        for a in elements {
            let x = a.reference().source();
            let d = self.rng.below(x.dim() + 1);
            let i = self.rng.below(x.ring().rank(d));
            let beta = GradedClass::basis_element(x.ring(), d, i);
            for which in LAW_TRANSFORMATIONS {
                self.record("module", module_property_check(&beta, &a, which));
            }
        }
    }

    fn specializations(&mut self) {
        for a in &self.s.elements {
            self.record_all("specializations", specialization_checks(a));
            if a.reference().target().is_point() {
                self.record("specializations", covariant_agreement_check(a));
            }
        }
    }

    /// Every bundle or product projection against every map out of its
    /// target and every map into it, on every element over those maps.
    fn riemann_roch_projections(&mut self) -> usize {
        let ms = self.maps();
        let projections: Vec<&Morphism> = ms
            .iter()
            .filter(|f| {
                matches!(
                    f.kind(),
                    MorphismKind::BundleProjection | MorphismKind::ProductProjection { .. }
                )
            })
            .collect();
        for f in &projections {
            for g in ms.iter().filter(|g| g.source() == f.target()) {
                for b in self.over(g) {
                    for which in LAW_TRANSFORMATIONS {
                        self.record("rr", verdier_rr_check(f, which, &b));
                    }
                }
            }
            for other in ms.iter().filter(|o| o.target() == f.target()) {
                for b in self.over(other) {
                    match pullback(f, &b) {
                        Ok(a) => {
                            for which in LAW_TRANSFORMATIONS {
                                self.record("rr", sga6_rr_check(f, other, which, &a));
                            }
                        }
                        Err(e) => self.record("rr", Err(e)),
                    }
                }
            }
        }
        projections.len()
    }

    /// Every element against every basis class of its source.
    fn module_all(&mut self) -> usize {
        let mut pairs = 0;
        for a in &self.s.elements {
            let x = a.reference().source();
            for d in 0..=x.dim() {
                for i in 0..x.ring().rank(d) {
                    let beta = GradedClass::basis_element(x.ring(), d, i);
                    pairs += 1;
                    for which in LAW_TRANSFORMATIONS {
                        self.record("module", module_property_check(&beta, a, which));
                    }
                }
            }
        }
        pairs
    }

    fn blowup(&mut self) {
        let mut diagrams = Vec::new();
        for f in self.maps() {
            diagrams.extend(diagrams_over(f, MAX_DIM));
        }
        diagrams.sort_by_key(|d| d.to_string());
        diagrams.dedup_by_key(|d| d.to_string());
        for d in self.sample(diagrams) {
            for which in ALL_TRANSFORMATIONS {
                self.record("blowup", check_blowup_vanishing(&d, which));
            }
            let shadow = blowup_relation_element(&d).map(|rel| {
                CheckReport::compare(
                    "blowup-genus-shadow",
                    d.to_string(),
                    &chi_y_shadow(rel.element()),
                    &YPolynomial::zero(),
                )
            });
            self.record("blowup", shadow);
        }
    }

    fn duality(&mut self) {
        for f in self.maps() {
            self.record("duality", duality_check(f));
        }
    }
}

/// `∫_Y f_*(b)·a = ∫_X b·f^*(a)` on all basis pairs.
pub fn duality_check(f: &Morphism) -> Result<CheckReport, Error> {
    let (x, y) = (f.source(), f.target());
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for d in 0..=x.dim() {
        for i in 0..x.ring().rank(d) {
            let b = GradedClass::basis_element(x.ring(), d, i);
            let pushed = f.pushforward_class(&b)?;
            for e in 0..=y.dim() {
                if d + e != x.dim() {
                    continue;
                }
                for j in 0..y.ring().rank(e) {
                    let a = GradedClass::basis_element(y.ring(), e, j);
                    lhs.push(y.integrate(&(&pushed * &a))?);
                    rhs.push(x.integrate(&(&b * &f.pullback_class(&a)?))?);
                }
            }
        }
    }
    Ok(CheckReport::compare(
        "pushforward-duality",
        f.to_string(),
        &Values(lhs),
        &Values(rhs),
    ))
}

#[derive(PartialEq)]
struct Values(Vec<YPolynomial>);

impl fmt::Display for Values {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Runs the scenario's script. Unsupported squares are counted, not failed.
pub fn run_suite(s: &Scenario) -> Summary {
    let mut r = Runner {
        s,
        rng: SplitMix64::new(s.seed ^ 0x5EED_0F5C_4E4A_1210),
        over: HashMap::new(),
        summary: Summary {
            seed: s.seed,
            ..Summary::default()
        },
    };
    for kind in &s.script {
        match kind {
            CheckKind::Axiom(code) => r.axiom(*code),
            CheckKind::Laws => r.laws(),
            CheckKind::RiemannRoch => r.riemann_roch(),
            CheckKind::Module => r.module(),
            CheckKind::Specializations => r.specializations(),
            CheckKind::Blowup => r.blowup(),
            CheckKind::Duality => r.duality(),
        }
    }
    r.summary
}

/// Riemann–Roch squares on every projection of a scenario, and the module
/// property on every (basis class, element) pair.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RiemannRochReport {
    pub projections: usize,
    pub module_pairs: usize,
    pub summary: Summary,
}

pub fn riemann_roch_suite(s: &Scenario) -> RiemannRochReport {
    let mut r = Runner {
        s,
        rng: SplitMix64::new(s.seed ^ 0x5EED_0F5C_4E4A_1210),
        over: HashMap::new(),
        summary: Summary {
            seed: s.seed,
            ..Summary::default()
        },
    };
    let projections = r.riemann_roch_projections();
    let module_pairs = r.module_all();
    RiemannRochReport {
        projections,
        module_pairs,
        summary: r.summary,
    }
}

/// `riemann_roch_suite` over the generated scenarios for `seeds`, merged.
pub fn riemann_roch_seeds(seeds: &[u64], budget: usize) -> RiemannRochReport {
    let mut parts: Vec<RiemannRochReport> = seeds
        .par_iter()
        .map(|&seed| riemann_roch_suite(&generate(seed, budget)))
        .collect();
    parts.sort_by_key(|r| r.summary.seed);
    let mut out = RiemannRochReport {
        summary: Summary {
            seed: seeds.first().copied().unwrap_or(0),
            ..Summary::default()
        },
        ..Default::default()
    };
    for p in &parts {
        out.projections += p.projections;
        out.module_pairs += p.module_pairs;
        out.summary.absorb(&p.summary);
    }
    out
}

/// The blow-up diagrams of `P^m ⊂ P^n` checked on their own: over
/// `P^n → pt`, through a hyperplane of `P^(n+1)`, and through the point.
pub fn blowup_diagrams(n: usize, m: usize) -> Result<Vec<BlowupDiagram>, Error> {
    let x = make_proj(n);
    let big = make_proj(n + 1);
    Ok(vec![
        BlowupDiagram::absolute(n, m)?,
        BlowupDiagram::new(n, m, &linear_embedding(n, n + 1)?, &to_point(&big))?,
        BlowupDiagram::new(n, m, &to_point(&x), &identity(&make_point()))?,
    ])
}

/// Vanishing of every transformation and of the genus shadow on the
/// relation elements of `blowup_diagrams(n, m)`.
pub fn blowup_suite(n: usize, m: usize) -> Summary {
    let mut out = Summary::default();
    match blowup_diagrams(n, m) {
        Ok(diagrams) => {
            for d in diagrams {
                for which in ALL_TRANSFORMATIONS {
                    out.record("blowup", check_blowup_vanishing(&d, which));
                }
                let shadow = blowup_relation_element(&d).map(|rel| {
                    CheckReport::compare(
                        "blowup-genus-shadow",
                        d.to_string(),
                        &chi_y_shadow(rel.element()),
                        &YPolynomial::zero(),
                    )
                });
                out.record("blowup", shadow);
            }
        }
        Err(e) => out.record("blowup", Err(e)),
    }
    out
}

/// Generates the scenarios for `seeds` and runs `script` on each, in parallel.
pub fn run_seeds_with(seeds: &[u64], budget: usize, script: &[CheckKind]) -> SuiteReport {
    let summaries: Vec<Summary> = seeds
        .par_iter()
        .map(|&seed| {
            let mut s = generate(seed, budget);
            s.script = script.to_vec();
            run_suite(&s)
        })
        .collect();
    SuiteReport::from_summaries(summaries)
}

/// Summaries of many scenarios, with totals and coverage warnings.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub scenarios: usize,
    pub executed: usize,
    pub passed: usize,
    pub failed: usize,
    pub unsupported: usize,
    pub coverage: BTreeMap<String, usize>,
    pub warnings: Vec<String>,
    pub summaries: Vec<Summary>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn from_summaries(mut summaries: Vec<Summary>) -> Self {
        summaries.sort_by_key(|s| s.seed);
        let mut total = Summary::default();
        for s in &summaries {
            total.absorb(s);
        }
        let mut warnings = Vec::new();
        for window in summaries.chunks(COVERAGE_WINDOW) {
            let mut seen = BTreeMap::<&str, usize>::new();
            for s in window {
                for (k, v) in &s.coverage {
                    *seen.entry(k.as_str()).or_default() += v;
                }
            }
            for code in AxiomCode::NUMBERED {
                if seen.get(code.as_str()).copied().unwrap_or(0) == 0 {
                    let (lo, hi) = (window[0].seed, window[window.len() - 1].seed);
                    warnings.push(format!(
                        "coverage: {code} not exercised in seeds {lo}..={hi}"
                    ));
                }
            }
        }
        SuiteReport {
            scenarios: summaries.len(),
            executed: total.executed,
            passed: total.passed,
            failed: total.failed,
            unsupported: total.unsupported,
            coverage: total.coverage,
            warnings,
            summaries,
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} scenarios: {} executed, {} passed, {} failed, {} unsupported",
            self.scenarios, self.executed, self.passed, self.failed, self.unsupported
        )?;
        for (k, v) in &self.coverage {
            write!(f, "\n  {k}: {v}")?;
        }
        for w in &self.warnings {
            write!(f, "\nwarning: {w}")?;
        }
        for s in self.summaries.iter().filter(|s| !s.ok()) {
            write!(f, "\n{s}")?;
        }
        Ok(())
    }
}

/// Generates and runs the scenarios for `seeds` in parallel.
pub fn run_seeds(seeds: &[u64], budget: usize) -> SuiteReport {
    let summaries: Vec<Summary> = seeds
        .par_iter()
        .map(|&seed| run_suite(&generate(seed, budget)))
        .collect();
    SuiteReport::from_summaries(summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_zero_is_the_point() {
        let s = generate(5, 0);
        assert_eq!(s.spaces.len(), 1);
        assert!(s.spaces[0].is_point());
        let summary = run_suite(&s);
        assert!(summary.ok(), "{summary}");
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(generate(11, DEFAULT_BUDGET), generate(11, DEFAULT_BUDGET));
        assert_eq!(
            generate(0, DEFAULT_BUDGET).to_string(),
            generate(0, DEFAULT_BUDGET).to_string()
        );
    }

    #[test]
    fn check_names_round_trip() {
        for k in CheckKind::all() {
            assert_eq!(k.as_str().parse::<CheckKind>().unwrap(), k);
        }
        assert_eq!(CheckKind::parse_group("axioms").unwrap().len(), 9);
        assert!("commutativity".parse::<CheckKind>().is_err());
    }
}
