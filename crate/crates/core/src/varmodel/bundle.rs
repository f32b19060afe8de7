use super::Variety;
use crate::{Error, GradedClass};

/// A vector bundle known through its rank and total Chern class.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleClass {
    base: Variety,
    rank: usize,
    total: GradedClass,
}

impl BundleClass {
    /// Checks that the class lives on `base`, is y-free, starts with 1 and has
    /// no Chern classes above the rank.
    pub fn new(base: &Variety, rank: usize, total: GradedClass) -> Result<Self, Error> {
        if !total.same_ambient(&GradedClass::one(base.ring())) {
            return Err(Error::AmbientMismatch(
                total.ring().key().to_string(),
                base.key().to_string(),
            ));
        }
        if total.degree_part(0) != GradedClass::one(base.ring()) {
            return Err(Error::InvalidParameters(
                "total Chern class must start with 1".into(),
            ));
        }
        if total
            .components()
            .any(|(d, v)| d > rank || v.iter().any(|p| p.degree().unwrap_or(0) > 0))
        {
            return Err(Error::InvalidParameters(format!(
                "not the Chern class of a rank {rank} bundle: {total}"
            )));
        }
        Ok(BundleClass {
            base: base.clone(),
            rank,
            total,
        })
    }

    pub(crate) fn new_unchecked(base: &Variety, rank: usize, total: GradedClass) -> Self {
        BundleClass {
            base: base.clone(),
            rank,
            total,
        }
    }

    pub fn trivial(base: &Variety, rank: usize) -> Self {
        Self::new_unchecked(base, rank, GradedClass::one(base.ring()))
    }

    /// Tangent bundle of a variety.
    pub fn tangent(x: &Variety) -> Self {
        Self::new_unchecked(x, x.dim(), x.tangent_chern().clone())
    }

    /// Bundle split into line bundles with the given first Chern classes.
    pub fn split(base: &Variety, line_classes: &[GradedClass]) -> Result<Self, Error> {
        let one = GradedClass::one(base.ring());
        let total = line_classes
            .iter()
            .fold(one.clone(), |acc, l| &acc * &(&one + l));
        Self::new(base, line_classes.len(), total)
    }

    pub fn base(&self) -> &Variety {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn total_chern(&self) -> &GradedClass {
        &self.total
    }

    /// The Chern class `c_i`.
    pub fn chern(&self, i: usize) -> GradedClass {
        self.total.degree_part(i)
    }

    pub fn direct_sum(&self, other: &BundleClass) -> Result<Self, Error> {
        if self.base != other.base {
            return Err(Error::AmbientMismatch(
                self.base.key().to_string(),
                other.base.key().to_string(),
            ));
        }
        Ok(Self::new_unchecked(
            &self.base,
            self.rank + other.rank,
            &self.total * &other.total,
        ))
    }
}
