//! Structural checks on the blow-up model, run before anything uses it.

use crate::report::CheckReport;
use crate::varmodel::{
    blow_down, center_embedding, exceptional_divisor, exceptional_inclusion, make_blowup_linear,
    make_proj,
};
use crate::{Error, GradedClass, YPolynomial};

/// Betti ranks, `∫ c_top = χ`, the self-intersection `e^n` against the
/// exceptional bundle, and the blow-down pushforward table against the
/// route through `E → S → P^n`.
pub fn blowup_model_oracles(n: usize, m: usize) -> Result<Vec<CheckReport>, Error> {
    let bl = make_blowup_linear(n, m)?;
    let label = bl.key().to_string();
    let mut out = vec![CheckReport::compare(
        "oracle/betti",
        label.clone(),
        &Ranks(bl.ring().betti()),
        &Ranks(bl.betti_oracle()),
    )];
    let top = bl.tangent_chern().degree_part(n);
    out.push(CheckReport::compare(
        "oracle/euler",
        label.clone(),
        &bl.integrate(&top)?,
        &YPolynomial::from_int(bl.euler_characteristic_oracle()),
    ));
    let e = exceptional_divisor(n, m)?;
    let ev = bl
        .gen("e")
        .ok_or_else(|| Error::InvalidParameters(format!("{label} has no exceptional class")))?;
    out.push(CheckReport::compare(
        "oracle/self-intersection",
        label.clone(),
        &bl.integrate(&ev.pow(n))?,
        &e.variety.integrate(&(-&e.zeta).pow(n - 1))?,
    ));
    let q = blow_down(n, m)?;
    let i = exceptional_inclusion(n, m)?;
    let center = center_embedding(m, n)?;
    for k in 1..=n {
        let direct = q.pushforward_class(&ev.pow(k))?;
        let via_e = center.pushforward_class(
            &e.projection
                .pushforward_class(&i.pullback_class(&ev.pow(k - 1))?)?,
        )?;
        out.push(CheckReport::compare(
            "oracle/pushforward-table",
            format!("{label}; e^{k}"),
            &direct,
            &via_e,
        ));
    }
    out.push(CheckReport::compare(
        "oracle/pushforward-table",
        format!("{label}; 1"),
        &q.pushforward_class(&GradedClass::one(bl.ring()))?,
        &GradedClass::one(make_proj(n).ring()),
    ));
    Ok(out)
}

#[derive(PartialEq)]
struct Ranks(Vec<usize>);

impl std::fmt::Display for Ranks {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
