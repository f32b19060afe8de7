use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::Error;

/// Polynomial in the parameter `y` with exact rational coefficients.
///
/// Coefficients are indexed by power of `y` and never carry trailing zeros,
/// so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct YPolynomial {
    coeffs: Vec<Rational>,
}

impl YPolynomial {
    pub fn zero() -> Self {
        YPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    /// The monomial `y`.
    pub fn y() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `1 + y`.
    pub fn one_plus_y() -> Self {
        Self::from_ints(&[1, 1])
    }

    pub fn one_plus_y_pow(k: usize) -> Self {
        Self::one_plus_y().pow(k)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        YPolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `y^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        YPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    /// Exact division by `1 + y` via synthetic division at `y = -1`.
    pub fn div_one_plus_y(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let n = self.coeffs.len();
        let mut quotient = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for k in (1..n).rev() {
            carry = &self.coeffs[k] - &carry;
            quotient[k - 1] = carry.clone();
        }
        let remainder = &self.coeffs[0] - &carry;
        if !remainder.is_zero() {
            return Err(Error::NotDivisible(self.to_string()));
        }
        Ok(Self::from_coeffs(quotient))
    }

    pub fn div_one_plus_y_pow(&self, k: usize) -> Result<Self, Error> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out
                .div_one_plus_y()
                .map_err(|_| Error::NotDivisible(self.to_string()))?;
        }
        Ok(out)
    }

    /// Multiplies by `(1+y)^k`, dividing exactly when `k` is negative.
    pub fn scale_one_plus_y(&self, k: i64) -> Result<Self, Error> {
        if k >= 0 {
            Ok(self * &Self::one_plus_y_pow(k as usize))
        } else {
            self.div_one_plus_y_pow(k.unsigned_abs() as usize)
        }
    }

    /// Number of nonzero coefficients.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True when the polynomial is a single term with negative coefficient.
    pub(crate) fn is_negative_monomial(&self) -> bool {
        self.term_count() == 1 && self.coeffs.iter().any(|c| c.is_negative())
    }
}

fn render_y_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "y".to_string(),
        _ => format!("y^{k}"),
    }
}

impl fmt::Display for YPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let var = render_y_power(k);
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl Add for &YPolynomial {
    type Output = YPolynomial;
    fn add(self, rhs: &YPolynomial) -> YPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        YPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &YPolynomial {
    type Output = YPolynomial;
    fn sub(self, rhs: &YPolynomial) -> YPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        YPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &YPolynomial {
    type Output = YPolynomial;
    fn neg(self) -> YPolynomial {
        YPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &YPolynomial {
    type Output = YPolynomial;
    fn mul(self, rhs: &YPolynomial) -> YPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return YPolynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        YPolynomial::from_coeffs(out)
    }
}

impl Add for YPolynomial {
    type Output = YPolynomial;
    fn add(self, rhs: YPolynomial) -> YPolynomial {
        &self + &rhs
    }
}

impl Sub for YPolynomial {
    type Output = YPolynomial;
    fn sub(self, rhs: YPolynomial) -> YPolynomial {
        &self - &rhs
    }
}

impl Mul for YPolynomial {
    type Output = YPolynomial;
    fn mul(self, rhs: YPolynomial) -> YPolynomial {
        &self * &rhs
    }
}

impl Neg for YPolynomial {
    type Output = YPolynomial;
    fn neg(self) -> YPolynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn renders_ascending() {
        assert_eq!(
            YPolynomial::from_ints(&[1, -1, 1, -1]).to_string(),
            "1 - y + y^2 - y^3"
        );
        assert_eq!(YPolynomial::from_ints(&[0, -2]).to_string(), "-2*y");
        assert_eq!(YPolynomial::zero().to_string(), "0");
        let half = YPolynomial::from_coeffs(vec![rat(1, 2), rat(-1, 2)]);
        assert_eq!(half.to_string(), "1/2 - 1/2*y");
    }

    #[test]
    fn trailing_zeros_dropped() {
        let p = YPolynomial::from_ints(&[1, 0, 0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(YPolynomial::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_by_one_plus_y() {
        assert_eq!(
            YPolynomial::one_plus_y().div_one_plus_y().unwrap(),
            YPolynomial::one()
        );
        let one_minus_y2 = YPolynomial::from_ints(&[1, 0, -1]);
        assert_eq!(
            one_minus_y2.div_one_plus_y().unwrap(),
            YPolynomial::from_ints(&[1, -1])
        );
        assert!(matches!(
            YPolynomial::one().div_one_plus_y(),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn eval_matches_horner() {
        let p = YPolynomial::from_ints(&[1, -2, 1]);
        assert_eq!(p.eval(&rat(1, 1)), rat(0, 1));
        assert_eq!(p.eval(&rat(-1, 1)), rat(4, 1));
    }
}
