//! Truncated power series in `α` with coefficients in ℚ[y].

use num_traits::{One, Zero};

use crate::exactalg::{int, Rational};
use crate::YPolynomial;

pub(crate) type Series = Vec<YPolynomial>;

fn get(a: &[YPolynomial], k: usize) -> YPolynomial {
    a.get(k).cloned().unwrap_or_default()
}

pub(crate) fn mul(a: &[YPolynomial], b: &[YPolynomial], order: usize) -> Series {
    (0..=order)
        .map(|k| {
            (0..=k).fold(YPolynomial::zero(), |acc, i| {
                &acc + &(&get(a, i) * &get(b, k - i))
            })
        })
        .collect()
}

/// Reciprocal of a series whose constant term is a nonzero rational.
pub(crate) fn reciprocal(a: &[YPolynomial], order: usize) -> Series {
    let a0 = a[0].coeff(0);
    assert!(
        a[0].degree() == Some(0) && !a0.is_zero(),
        "constant term must be a nonzero rational"
    );
    let inv0 = Rational::one() / a0;
    let mut out: Series = vec![YPolynomial::constant(inv0.clone())];
    for k in 1..=order {
        let s = (1..=k).fold(YPolynomial::zero(), |acc, i| {
            &acc + &(&get(a, i) * &out[k - i])
        });
        out.push((-&s).scale(&inv0));
    }
    out
}

/// `log a` for a series with constant term 1, via `(log a)' = a'/a`.
pub(crate) fn log(a: &[YPolynomial], order: usize) -> Series {
    assert!(get(a, 0).is_one(), "log needs constant term 1");
    let deriv: Series = (0..order)
        .map(|k| get(a, k + 1).scale(&int(k as i64 + 1)))
        .collect();
    let q = mul(&deriv, &reciprocal(a, order), order);
    let mut out = vec![YPolynomial::zero()];
    for k in 1..=order {
        out.push(get(&q, k - 1).scale(&(Rational::one() / int(k as i64))));
    }
    out
}

/// `Σ c_k α^k` with `c_k = sign^k / (k + shift)!`.
pub(crate) fn factorial_series(order: usize, sign: i64, shift: usize) -> Series {
    let mut fact = (1..=shift).fold(Rational::one(), |acc, i| acc * int(i as i64));
    let mut out = Vec::new();
    for k in 0..=order {
        if k > 0 {
            fact *= int((k + shift) as i64);
        }
        out.push(YPolynomial::constant(
            int(sign.pow(k as u32)) / fact.clone(),
        ));
    }
    out
}

/// The series with `α^k` scaled by `(1+y)^k`.
pub(crate) fn stretch(a: &[YPolynomial]) -> Series {
    a.iter()
        .enumerate()
        .map(|(k, c)| c * &YPolynomial::one_plus_y_pow(k))
        .collect()
}
