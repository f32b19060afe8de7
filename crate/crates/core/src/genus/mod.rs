//! Normalized power series, the multiplicative characteristic classes they
//! define through Chern roots, and the χ_y genus.

mod series;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use crate::exactalg::{int, Rational};
use crate::varmodel::{BundleClass, Variety};
use crate::{Error, GradedClass, YPolynomial};
use series::Series;

/// The named series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesName {
    /// `1 + α`
    Chern,
    /// `α / (1 - e^(-α))`
    Todd,
    /// `α / tanh α`
    LClass,
    /// `α(1+y) / (1 - e^(-α(1+y))) - αy`
    Hirzebruch,
}

impl SeriesName {
    pub const ALL: [SeriesName; 4] = [
        SeriesName::Chern,
        SeriesName::Todd,
        SeriesName::LClass,
        SeriesName::Hirzebruch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeriesName::Chern => "chern",
            SeriesName::Todd => "todd",
            SeriesName::LClass => "lclass",
            SeriesName::Hirzebruch => "hirzebruch",
        }
    }
}

impl fmt::Display for SeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        SeriesName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown series {s:?}")))
    }
}

/// A normalized power series `Q(α) = 1 + q_1 α + q_2 α² + …` over ℚ[y],
/// known up to a finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusSeries {
    coeffs: Vec<YPolynomial>,
}

fn compute_named(name: SeriesName, order: usize) -> Series {
    let todd = || series::reciprocal(&series::factorial_series(order, -1, 1), order);
    match name {
        SeriesName::Chern => (0..=order)
            .map(|k| {
                if k <= 1 {
                    YPolynomial::one()
                } else {
                    YPolynomial::zero()
                }
            })
            .collect(),
        SeriesName::Todd => todd(),
        SeriesName::LClass => {
            let even = |s: Series| -> Series {
                s.into_iter()
                    .enumerate()
                    .map(|(k, c)| if k % 2 == 0 { c } else { YPolynomial::zero() })
                    .collect()
            };
            let cosh = even(series::factorial_series(order, 1, 0));
            let sinh_over = even(series::factorial_series(order, 1, 1));
            series::mul(&cosh, &series::reciprocal(&sinh_over, order), order)
        }
        SeriesName::Hirzebruch => {
            let mut s = series::stretch(&todd());
            if order >= 1 {
                s[1] = &s[1] - &YPolynomial::y();
            }
            s
        }
    }
}

static NAMED: OnceLock<Mutex<HashMap<SeriesName, GenusSeries>>> = OnceLock::new();

impl GenusSeries {
    /// Validates that the constant term is exactly 1.
    pub fn new(coeffs: Vec<YPolynomial>) -> Result<Self, Error> {
        if !coeffs.first().is_some_and(|c| c.is_one()) {
            return Err(Error::InvalidParameters(
                "series must have constant term 1".into(),
            ));
        }
        Ok(GenusSeries { coeffs })
    }

    /// Exact Taylor coefficients of a named series up to `order`.
    pub fn named(name: SeriesName, order: usize) -> Self {
        let cache = NAMED.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(s) = cache.lock().unwrap().get(&name) {
            if s.order() >= order {
                return s.truncate(order);
            }
        }
        let s = GenusSeries {
            coeffs: compute_named(name, order),
        };
        cache.lock().unwrap().insert(name, s.clone());
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[YPolynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> YPolynomial {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        GenusSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Substitutes a rational value for `y` in every coefficient.
    pub fn eval_y(&self, y: &Rational) -> Self {
        GenusSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| YPolynomial::constant(c.eval(y)))
                .collect(),
        }
    }

    fn log(&self, order: usize) -> Series {
        series::log(&self.coeffs, order)
    }
}

/// Power sums `p_1..p_n` of the Chern roots, by Newton's identities.
fn power_sums(e: &BundleClass) -> Vec<GradedClass> {
    let n = e.base().dim();
    let c: Vec<GradedClass> = (0..=n).map(|i| e.chern(i)).collect();
    let mut p: Vec<GradedClass> = vec![GradedClass::constant(
        e.base().ring(),
        YPolynomial::from_int(e.rank() as i64),
    )];
    for k in 1..=n {
        let sign = |i: usize| if i % 2 == 1 { int(1) } else { int(-1) };
        let mut pk = c[k].scale_rational(&(sign(k) * int(k as i64)));
        for i in 1..k {
            pk = &pk + &(&c[i] * &p[k - i]).scale_rational(&sign(i));
        }
        p.push(pk);
    }
    p
}

/// `exp(Σ_k l_k p_k)` truncated at the base dimension.
fn exp_of_log_series(e: &BundleClass, l: &[YPolynomial]) -> GradedClass {
    let ring = e.base().ring();
    let n = e.base().dim();
    let p = power_sums(e);
    let mut x = GradedClass::zero(ring);
    for k in 1..=n {
        x = &x + &p[k].scale(&l[k]);
    }
    let mut term = GradedClass::one(ring);
    let mut out = term.clone();
    for j in 1..=n {
        term = (&term * &x).scale_rational(&(Rational::from_integer(1.into()) / int(j as i64)));
        out = &out + &term;
    }
    out
}

/// `∏ Q(α_i)` over the Chern roots of `e`, truncated at the base dimension.
pub fn multiplicative_class(q: &GenusSeries, e: &BundleClass) -> Result<GradedClass, Error> {
    let n = e.base().dim();
    if q.order() < n {
        return Err(Error::InsufficientOrder {
            order: q.order(),
            required: n,
        });
    }
    Ok(exp_of_log_series(e, &q.log(n)))
}

/// Named class with the series order fitted to the base.
pub fn named_class(name: SeriesName, e: &BundleClass) -> GradedClass {
    multiplicative_class(&GenusSeries::named(name, e.base().dim()), e)
        .expect("order fitted to base")
}

/// `∏ (1 + y e^(-α_j))`, the Chern character of `λ_y(E*)`.
///
/// Symmetrized with `u = y/(1+y)`: each factor is `(1+y)(1 + u(e^(-α) - 1))`,
/// and a degree-`j` power of `u` times `(1+y)^rank` is `y^j (1+y)^(rank-j)`.
pub fn lambda_y_chern_character(e: &BundleClass) -> GradedClass {
    let n = e.base().dim();
    let r = e.rank();
    let mut factor = series::factorial_series(n, -1, 0);
    factor[0] = YPolynomial::zero();
    let factor: Vec<YPolynomial> = factor
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k == 0 {
                YPolynomial::one()
            } else {
                c * &YPolynomial::y()
            }
        })
        .collect();
    let in_u = exp_of_log_series(e, &series::log(&factor, n));
    in_u.map_coords(|p| {
        p.coeffs()
            .iter()
            .enumerate()
            .fold(YPolynomial::zero(), |acc, (j, a)| {
                assert!(
                    j <= r || a.is_zero(),
                    "λ_y of a rank {r} bundle has y-degree at most {r}"
                );
                &acc + &(&YPolynomial::y().pow(j)
                    * &YPolynomial::one_plus_y_pow(r.saturating_sub(j)))
                    .scale(a)
            })
    })
}

/// `ch(λ_y(E*)) · td(E)`.
pub fn unnormalized_ty_class(e: &BundleClass) -> GradedClass {
    &lambda_y_chern_character(e) * &named_class(SeriesName::Todd, e)
}

/// `T*_y(E)`, the Hirzebruch class.
pub fn hirzebruch_class(e: &BundleClass) -> GradedClass {
    named_class(SeriesName::Hirzebruch, e)
}

/// `χ_y(X) = ∫_X T*_y(TX)`.
pub fn chi_y(x: &Variety) -> YPolynomial {
    x.integrate(&hirzebruch_class(&BundleClass::tangent(x)))
        .expect("class lives on x")
}

/// The `(1+y)` renormalization: the degree-`k` part of the unnormalized
/// class times `(1+y)^(k - rank)`.
pub fn renormalize(unnormalized: &GradedClass, rank: usize) -> Result<GradedClass, Error> {
    unnormalized.rescale_by_degree(|k| k as i64 - rank as i64)
}

/// Whether the class has any coordinate depending on `y`.
pub fn involves_y(c: &GradedClass) -> bool {
    c.components().any(|(_, v)| {
        v.iter()
            .any(|p| p.degree().unwrap_or(0) > 0 && !p.is_zero())
    })
}
