//! Matrix differential operators, the bracket they define on local
//! functionals, and the flows of Hamiltonians.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diffalg::{DiffPoly, LocalFunctional, Truncation};
use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::scalar::Scalar;

/// One summand `coef * dx^dx_pow`; `coef` carries its own h-powers.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct OpTerm {
    pub coef: DiffPoly,
    pub dx_pow: u32,
}

/// `N x N` matrix of operators `sum_{i,j} f_{i,j} h^i dx^j`.
#[derive(Clone, PartialEq, Debug)]
pub struct HamOperator {
    dim: usize,
    entries: Vec<Vec<Vec<OpTerm>>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DegreeViolation {
    pub row: usize,
    pub col: usize,
    pub hpow: u32,
    pub dx_pow: u32,
    pub found: u32,
    pub expected: i64,
}

impl HamOperator {
    pub fn zero(dim: usize) -> Self {
        HamOperator {
            dim,
            entries: vec![vec![Vec::new(); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &[OpTerm] {
        &self.entries[row][col]
    }

    pub fn push(&mut self, row: usize, col: usize, coef: DiffPoly, dx_pow: u32) {
        assert_eq!(coef.dim(), self.dim, "coefficient dimension");
        if !coef.is_zero() {
            self.entries[row][col].push(OpTerm { coef, dx_pow });
        }
    }

    /// `eta dx` for a symmetric constant matrix.
    pub fn eta_dx(eta: &Matrix) -> Result<Self> {
        let n = matrix::check_square(eta)?;
        if !matrix::is_symmetric(eta) {
            return Err(Error::NonSymmetric);
        }
        let mut k = Self::zero(n);
        for (a, row) in eta.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                k.push(a, b, DiffPoly::constant(n, c.clone()), 1);
            }
        }
        Ok(k)
    }

    /// `(K v)^a = sum_b K^{ab} v_b`.
    pub fn apply(&self, v: &[DiffPoly], trunc: &Truncation) -> Result<Vec<DiffPoly>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim);
        for row in &self.entries {
            let mut acc = DiffPoly::zero(self.dim);
            for (b, terms) in row.iter().enumerate() {
                for t in terms {
                    acc = &acc + &t.coef.mul_trunc(&v[b].dx_n(t.dx_pow), trunc);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Terms violating `deg_dif f_{i,j} = 2i - j + 1`.
    pub fn validate(&self) -> Vec<DegreeViolation> {
        let mut out = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, terms) in row.iter().enumerate() {
                for t in terms {
                    for k in t.coef.terms().keys() {
                        let expected = 2 * k.hpow as i64 - t.dx_pow as i64 + 1;
                        let found = k.mono.diff_degree();
                        if found as i64 != expected {
                            out.push(DegreeViolation {
                                row: r,
                                col: c,
                                hpow: k.hpow,
                                dx_pow: t.dx_pow,
                                found,
                                expected,
                            });
                        }
                    }
                }
            }
        }
        out.dedup();
        out
    }
}

fn check_dims(k: &HamOperator, fs: &[&LocalFunctional]) -> Result<()> {
    for f in fs {
        if f.dim() != k.dim() {
            return Err(Error::DimensionMismatch {
                left: k.dim(),
                right: f.dim(),
            });
        }
    }
    Ok(())
}

/// `{g, h}_K = int sum delta g/delta u^a K^{ab} delta h/delta u^b dx`.
pub fn bracket(
    g: &LocalFunctional,
    h: &LocalFunctional,
    k: &HamOperator,
    trunc: &Truncation,
) -> Result<LocalFunctional> {
    check_dims(k, &[g, h])?;
    let kh = k.apply(&h.var_gradient(), trunc)?;
    let mut acc = DiffPoly::zero(k.dim());
    for (dg, khb) in g.var_gradient().iter().zip(&kh) {
        acc = &acc + &dg.mul_trunc(khb, trunc);
    }
    Ok(LocalFunctional::new(acc))
}

/// Right-hand sides `u^a_t = sum_b K^{ab} delta h/delta u^b`.
pub fn flows(h: &LocalFunctional, k: &HamOperator, trunc: &Truncation) -> Result<Vec<DiffPoly>> {
    check_dims(k, &[h])?;
    k.apply(&h.var_gradient(), trunc)
}

/// `{{f,g},h} + {{g,h},f} + {{h,f},g}`.
pub fn jacobi_defect(
    f: &LocalFunctional,
    g: &LocalFunctional,
    h: &LocalFunctional,
    k: &HamOperator,
    trunc: &Truncation,
) -> Result<LocalFunctional> {
    let fg = bracket(f, g, k, trunc)?;
    let gh = bracket(g, h, k, trunc)?;
    let hf = bracket(h, f, k, trunc)?;
    let a = bracket(&fg, h, k, trunc)?;
    let b = bracket(&gh, f, k, trunc)?;
    let c = bracket(&hf, g, k, trunc)?;
    Ok(&(&a + &b) + &c)
}

/// Time derivative of a density along `u^a_t = x[a]`:
/// `sum_{a,n} d f/d u^a_n * dx^n x[a]`.
pub fn lie_derivative(f: &DiffPoly, x: &[DiffPoly], trunc: &Truncation) -> DiffPoly {
    let mut acc = DiffPoly::zero(f.dim());
    for (a, xa) in x.iter().enumerate() {
        let Some(top) = f.max_order(a) else { continue };
        let mut jet = xa.clone();
        for n in 0..=top {
            let d = f.jet_derivative(a, n);
            if !d.is_zero() {
                acc = &acc + &d.mul_trunc(&jet, trunc);
            }
            jet = jet.dx();
        }
    }
    acc
}

/// A family of evolution equations `u^b_{t} = rhs[b]`, one per time label.
#[derive(Clone, PartialEq, Debug, Default, Serialize)]
pub struct EvolutionSystem {
    pub dim: usize,
    pub flows: BTreeMap<(usize, u32), Vec<DiffPoly>>,
}

impl EvolutionSystem {
    pub fn new(dim: usize) -> Self {
        EvolutionSystem {
            dim,
            flows: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, alpha: usize, d: u32, rhs: Vec<DiffPoly>) {
        assert_eq!(rhs.len(), self.dim);
        self.flows.insert((alpha, d), rhs);
    }

    pub fn get(&self, alpha: usize, d: u32) -> Option<&[DiffPoly]> {
        self.flows.get(&(alpha, d)).map(Vec::as_slice)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    row: usize,
    col: usize,
    terms: Vec<OpTerm>,
}

#[derive(Serialize, Deserialize)]
struct OperatorDoc {
    dim: usize,
    entries: Vec<EntryDoc>,
}

impl Serialize for HamOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, terms) in row.iter().enumerate() {
                if !terms.is_empty() {
                    entries.push(EntryDoc {
                        row: r + 1,
                        col: c + 1,
                        terms: terms.clone(),
                    });
                }
            }
        }
        OperatorDoc {
            dim: self.dim,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HamOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = OperatorDoc::deserialize(d)?;
        let mut k = HamOperator::zero(doc.dim);
        for e in doc.entries {
            if e.row == 0 || e.col == 0 || e.row > doc.dim || e.col > doc.dim {
                return Err(D::Error::custom("operator entry index out of range"));
            }
            for t in e.terms {
                if t.coef.dim() != doc.dim {
                    return Err(D::Error::custom("coefficient dimension mismatch"));
                }
                k.push(e.row - 1, e.col - 1, t.coef, t.dx_pow);
            }
        }
        Ok(k)
    }
}

/// Scalar multiple of the identity metric, convenient for one color.
pub fn scalar_metric(c: Scalar) -> Matrix {
    vec![vec![c]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::parse_poly;

    fn lf(s: &str) -> LocalFunctional {
        LocalFunctional::new(parse_poly(s, 1).unwrap())
    }

    fn dx1() -> HamOperator {
        HamOperator::eta_dx(&scalar_metric(Scalar::one())).unwrap()
    }

    #[test]
    fn eta_dx_shapes() {
        let k = HamOperator::eta_dx(&matrix::identity(2)).unwrap();
        assert_eq!(k.entry(0, 0).len(), 1);
        assert!(k.entry(0, 1).is_empty());
        let bad = vec![
            vec![Scalar::one(), Scalar::one()],
            vec![Scalar::zero(), Scalar::one()],
        ];
        assert!(matches!(HamOperator::eta_dx(&bad), Err(Error::NonSymmetric)));
        let two = HamOperator::eta_dx(&scalar_metric(Scalar::from_int(2))).unwrap();
        let t = Truncation::unbounded();
        assert_eq!(
            two.apply(&[parse_poly("u", 1).unwrap()], &t).unwrap()[0],
            parse_poly("2*u_1", 1).unwrap()
        );
    }

    #[test]
    fn bracket_examples() {
        let t = Truncation::unbounded();
        let k = dx1();
        assert!(bracket(&lf("1/2*u^2"), &lf("1/2*u^2"), &k, &t).unwrap().is_zero());
        let b = bracket(&lf("1/6*u^3"), &lf("1/2*u^2"), &k, &t).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn flow_examples() {
        let t = Truncation::unbounded();
        let k = dx1();
        assert_eq!(flows(&lf("1/2*u^2"), &k, &t).unwrap()[0], parse_poly("u_1", 1).unwrap());
        assert_eq!(
            flows(&lf("1/6*u^3 + 1/24*h*u*u_2"), &k, &t).unwrap()[0],
            parse_poly("u*u_1 + 1/12*h*u_3", 1).unwrap()
        );
        assert!(flows(&lf("u"), &k, &t).unwrap()[0].is_zero());
    }

    #[test]
    fn validator_examples() {
        assert!(dx1().validate().is_empty());
        let mut k = HamOperator::zero(1);
        k.push(0, 0, parse_poly("u", 1).unwrap(), 1);
        assert!(k.validate().is_empty());
        k.push(0, 0, parse_poly("h*u_1", 1).unwrap(), 1);
        let v = k.validate();
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].found, v[0].expected), (1, 2));
    }

    #[test]
    fn broken_operator_fails_jacobi() {
        // u^2 dx is not skew-adjoint, so the bracket is not Lie
        let mut k = HamOperator::zero(1);
        k.push(0, 0, parse_poly("u^2", 1).unwrap(), 1);
        let t = Truncation::unbounded();
        let d = jacobi_defect(&lf("u_1^2"), &lf("u^3"), &lf("u^2*u_1^2"), &k, &t).unwrap();
        assert!(!d.is_zero());
        let d = jacobi_defect(&lf("u_1^2"), &lf("u^3"), &lf("u^2*u_1^2"), &dx1(), &t).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn lie_derivative_matches_bracket() {
        let t = Truncation::unbounded();
        let k = dx1();
        let h1 = lf("1/6*u^3 + u_1^2");
        let h2 = lf("u^2*u_2 + h*u*u_4");
        let x = flows(&h1, &k, &t).unwrap();
        let ddt = LocalFunctional::new(lie_derivative(h2.rep(), &x, &t));
        assert!(ddt.lf_equal(&bracket(&h2, &h1, &k, &t).unwrap()));
    }

    #[test]
    fn operator_json_round_trip() {
        let mut k = HamOperator::eta_dx(&matrix::identity(2)).unwrap();
        k.push(0, 1, parse_poly("h*u2_2 + u1", 2).unwrap(), 1);
        let s = serde_json::to_string(&k).unwrap();
        let back: HamOperator = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
    }
}
