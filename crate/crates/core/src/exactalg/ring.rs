use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::linalg;
use super::poly::{monomial_degree, Monomial, Poly};
use super::Rational;
use crate::Error;

/// A graded ℚ-algebra generated in degree one, presented by homogeneous
/// relations and truncated above its dimension.
///
/// Normal forms are computed degree by degree from the Macaulay matrix of
/// all monomial multiples of the relations. The monomial order makes later
/// generators dominant, so leading terms eliminate the last generator first.
/// Standard (non-pivot) monomials form the basis.
#[derive(Debug)]
pub struct PresentedRing {
    key: String,
    gen_names: Vec<String>,
    dim: usize,
    relations: Vec<Poly>,
    basis: Vec<Vec<Monomial>>,
    normal_forms: Vec<HashMap<Monomial, Vec<Rational>>>,
    top_integral: Rational,
    pairing_inverse: Vec<OnceLock<Vec<Vec<Rational>>>>,
}

pub(crate) fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    fn rec(nvars: usize, left: usize, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e as u32);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

fn order_key(m: &Monomial) -> Vec<u32> {
    m.iter().rev().copied().collect()
}

struct DegreeReduction {
    columns: Vec<Monomial>,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

fn reduce_degree(nvars: usize, relations: &[Poly], d: usize) -> DegreeReduction {
    let mut columns = monomials_of_degree(nvars, d);
    columns.sort_by_key(|m| std::cmp::Reverse(order_key(m)));
    let col_index: HashMap<&Monomial, usize> =
        columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for rel in relations {
        let Some(e) = rel.homogeneous_degree() else {
            continue;
        };
        if e > d {
            continue;
        }
        for shift in monomials_of_degree(nvars, d - e) {
            let mut row = vec![Rational::zero(); columns.len()];
            for (m, c) in rel.terms() {
                let prod: Monomial = m.iter().zip(&shift).map(|(a, b)| a + b).collect();
                row[col_index[&prod]] += c;
            }
            rows.push(row);
        }
    }
    let pivots = linalg::rref(&mut rows, columns.len());
    DegreeReduction {
        columns,
        rows,
        pivots,
    }
}

impl PresentedRing {
    /// Builds the ring, checking that the top degree is one-dimensional,
    /// that `point` is a nonzero top class, and that the intersection pairing
    /// is perfect in every degree.
    pub fn new(
        key: impl Into<String>,
        gen_names: Vec<String>,
        dim: usize,
        relations: Vec<Poly>,
        point: &Monomial,
    ) -> Result<Self, Error> {
        let key = key.into();
        let nvars = gen_names.len();
        if relations
            .iter()
            .any(|r| r.nvars() != nvars || (!r.is_zero() && r.homogeneous_degree().is_none()))
        {
            return Err(Error::InvalidParameters(format!(
                "{key}: relations must be homogeneous"
            )));
        }
        let mut basis = Vec::with_capacity(dim + 1);
        let mut normal_forms = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            let red = reduce_degree(nvars, &relations, d);
            let mut standard: Vec<Monomial> = red
                .columns
                .iter()
                .enumerate()
                .filter(|(i, _)| !red.pivots.contains(i))
                .map(|(_, m)| m.clone())
                .collect();
            standard.sort_by_key(order_key);
            let std_index: HashMap<&Monomial, usize> =
                standard.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let col_of: HashMap<&Monomial, usize> = red
                .columns
                .iter()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let mut nf = HashMap::new();
            for m in &standard {
                let mut v = vec![Rational::zero(); standard.len()];
                v[std_index[m]] = Rational::one();
                nf.insert(m.clone(), v);
            }
            for (row, &p) in red.rows.iter().zip(&red.pivots) {
                let mut v = vec![Rational::zero(); standard.len()];
                for s in &standard {
                    let c = &row[col_of[s]];
                    if !c.is_zero() {
                        v[std_index[s]] = -c;
                    }
                }
                nf.insert(red.columns[p].clone(), v);
            }
            basis.push(standard);
            normal_forms.push(nf);
        }
        if basis[0].len() != 1 || basis[dim].len() != 1 {
            return Err(Error::InvalidParameters(format!(
                "{key}: presentation does not have one-dimensional bottom and top degrees"
            )));
        }
        if monomial_degree(point) != dim {
            return Err(Error::InvalidParameters(format!(
                "{key}: point class has wrong degree"
            )));
        }
        let value = normal_forms[dim][point][0].clone();
        if value.is_zero() {
            return Err(Error::InvalidParameters(format!(
                "{key}: point class vanishes"
            )));
        }
        let ring = PresentedRing {
            key,
            gen_names,
            dim,
            relations,
            basis,
            normal_forms,
            top_integral: Rational::one() / value,
            pairing_inverse: (0..=dim).map(|_| OnceLock::new()).collect(),
        };
        for d in 0..=dim {
            if ring.basis[d].len() != ring.basis[dim - d].len() {
                return Err(Error::InvalidParameters(format!(
                    "{}: Betti ranks not symmetric",
                    ring.key
                )));
            }
            if linalg::inverse(&ring.pairing_matrix(d)).is_none() {
                return Err(Error::InvalidParameters(format!(
                    "{}: degenerate pairing in degree {d}",
                    ring.key
                )));
            }
        }
        Ok(ring)
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn ngens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn basis(&self, d: usize) -> &[Monomial] {
        self.basis.get(d).map(|b| b.as_slice()).unwrap_or(&[])
    }

    pub fn rank(&self, d: usize) -> usize {
        self.basis(d).len()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    /// Coordinates of a monomial in the basis; `None` above the dimension.
    pub fn normal_form(&self, m: &Monomial) -> Option<&Vec<Rational>> {
        self.normal_forms.get(monomial_degree(m)).map(|nf| &nf[m])
    }

    /// Integral of the unique top-degree basis element.
    pub fn top_integral(&self) -> &Rational {
        &self.top_integral
    }

    /// True when every monomial of degree `dim + 1` lies in the relation ideal.
    pub fn vanishes_above_dim(&self) -> bool {
        let d = self.dim + 1;
        let red = reduce_degree(self.ngens(), &self.relations, d);
        red.pivots.len() == red.columns.len()
    }

    /// `∫ b_i · b'_j` for `b` in degree `d` and `b'` in the complementary degree.
    pub fn pairing_matrix(&self, d: usize) -> Vec<Vec<Rational>> {
        let top = &self.normal_forms[self.dim];
        self.basis[d]
            .iter()
            .map(|a| {
                self.basis[self.dim - d]
                    .iter()
                    .map(|b| {
                        let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        &top[&m][0] * &self.top_integral
                    })
                    .collect()
            })
            .collect()
    }

    pub fn pairing_inverse(&self, d: usize) -> &Vec<Vec<Rational>> {
        self.pairing_inverse[d].get_or_init(|| {
            linalg::inverse(&self.pairing_matrix(d)).expect("pairing checked at construction")
        })
    }

    pub fn render_monomial(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.gen_names)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, name)| {
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn projective(n: usize) -> PresentedRing {
        let h = Poly::var(1, 0);
        PresentedRing::new(
            format!("P({n})"),
            vec!["h".into()],
            n,
            vec![h.pow(n + 1)],
            &vec![n as u32],
        )
        .unwrap()
    }

    #[test]
    fn projective_space_basis() {
        let r = projective(3);
        assert_eq!(r.betti(), vec![1, 1, 1, 1]);
        assert!(r.vanishes_above_dim());
        assert_eq!(r.top_integral(), &Rational::one());
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(0, 0).len(), 1);
        assert_eq!(monomials_of_degree(0, 1).len(), 0);
    }

    #[test]
    fn blowup_of_point_in_plane() {
        // generators h, e with h*e = 0 and (h - e)^2 = 0
        let h = Poly::var(2, 0);
        let e = Poly::var(2, 1);
        let rels = vec![&h * &e, (&h - &e).pow(2)];
        let r =
            PresentedRing::new("bl", vec!["h".into(), "e".into()], 2, rels, &vec![2, 0]).unwrap();
        assert_eq!(r.betti(), vec![1, 2, 1]);
        assert_eq!(r.basis(1), &[vec![1, 0], vec![0, 1]]);
        // e^2 = -h^2
        assert_eq!(r.normal_form(&vec![0, 2]).unwrap(), &vec![-Rational::one()]);
        assert!(r.vanishes_above_dim());
    }

    #[test]
    fn rejects_degenerate_presentation() {
        let h = Poly::var(1, 0);
        let err = PresentedRing::new("bad", vec!["h".into()], 2, vec![h.pow(2)], &vec![2]);
        assert!(err.is_err());
    }
}
