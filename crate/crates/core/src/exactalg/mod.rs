//! Exact arithmetic: rationals, polynomials in `y`, presented graded rings
//! and their elements.

mod class;
pub mod linalg;
mod poly;
mod ring;
mod ypoly;

pub use class::{divide_exact, ring_add, ring_mul, Direction, GradedClass};
pub use poly::{monomial_degree, Monomial, Poly};
pub use ring::PresentedRing;
pub use ypoly::YPolynomial;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
