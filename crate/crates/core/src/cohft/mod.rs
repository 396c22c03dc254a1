//! CohFT metadata and suppliers of DR-cycle integrals.
//!
//! An oracle answers `int_{DR_g(0,a_1..a_n)} lambda_g psi_1^d c_{g,n+1}(e_alpha, e_{alpha_1}, ..)`
//! as a polynomial in `a_1..a_n` (graded by the Hodge parameter), or says
//! it does not know. Unknown is never treated as zero.

pub mod builtin;
pub mod hain;
pub mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::multinomial_terms;
use crate::matrix::{self, Matrix};

pub use builtin::{bernoulli, genus0_correlator, hodge_oracle, trivial_oracle, BuiltinOracle};
pub use hain::{hain_dr1_two_point, hain_dr1_two_point_at, HainExpansion};
pub use table::{export_table, table_oracle, TableDoc, TableOracle};

/// Identifies one integral `int_{DR_g(0,a_1..a_n)} lambda_g psi_1^d c(e_alpha, e_{alpha_1}, ...)`.
/// Colors are zero-based; insertions are sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct OracleKey {
    pub g: u32,
    pub d: u32,
    pub alpha: usize,
    pub insertions: Vec<usize>,
}

impl OracleKey {
    pub fn new(g: u32, d: u32, alpha: usize, mut insertions: Vec<usize>) -> Self {
        insertions.sort_unstable();
        OracleKey {
            g,
            d,
            alpha,
            insertions,
        }
    }

    pub fn n(&self) -> usize {
        self.insertions.len()
    }
}

impl fmt::Display for OracleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.insertions.iter().map(|c| (c + 1).to_string()).collect();
        write!(
            f,
            "(g={}, d={}, alpha={}, insertions=[{}])",
            self.g,
            self.d,
            self.alpha + 1,
            ins.join(",")
        )
    }
}

/// Polynomial in `a_1..a_n` with an extra Hodge-parameter grading:
/// `(epow, exponents) -> coefficient`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DrPoly {
    n: usize,
    terms: BTreeMap<(u32, Vec<u32>), BigRational>,
}

impl DrPoly {
    pub fn zero(n: usize) -> Self {
        DrPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut p = Self::zero(n);
        p.add(0, vec![0; n], c);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<(u32, Vec<u32>), BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, epow: u32, exps: Vec<u32>, c: BigRational) {
        assert_eq!(exps.len(), self.n, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let key = (epow, exps);
        let e = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &BigRational) -> DrPoly {
        let mut out = DrPoly::zero(self.n);
        for ((e, x), v) in &self.terms {
            out.add(*e, x.clone(), v * c);
        }
        out
    }

    /// Whether every term has total degree `deg`.
    pub fn is_homogeneous(&self, deg: u32) -> bool {
        self.terms.keys().all(|(_, x)| x.iter().sum::<u32>() == deg)
    }

    pub fn eps_part(&self, epow: u32) -> DrPoly {
        DrPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|((e, _), _)| *e == epow)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Swaps the variables `a_i` and `a_j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> DrPoly {
        let mut out = DrPoly::zero(self.n);
        for ((e, x), v) in &self.terms {
            let mut y = x.clone();
            y.swap(i, j);
            out.add(*e, y, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &DrPoly) -> DrPoly {
        let mut out = self.clone();
        for ((e, x), v) in &other.terms {
            out.add(*e, x.clone(), -v.clone());
        }
        out
    }

    /// Reduction modulo `a_1 + .. + a_n`: substitutes
    /// `a_n = -(a_1 + .. + a_{n-1})`. Injective on the quotient.
    pub fn reduce_zero_sum(&self) -> BTreeMap<(u32, Vec<u32>), BigRational> {
        let mut out: BTreeMap<(u32, Vec<u32>), BigRational> = BTreeMap::new();
        if self.n == 0 {
            return self.terms.clone();
        }
        for ((e, x), v) in &self.terms {
            let last = x[self.n - 1];
            let sign = if last % 2 == 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            for (c, w) in multinomial_terms(self.n - 1, last) {
                let y: Vec<u32> = (0..self.n - 1).map(|r| x[r] + c[r]).collect();
                let entry = out.entry((*e, y)).or_insert_with(BigRational::zero);
                *entry += v * &sign * BigRational::from_integer(w);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    pub fn is_zero_mod_sum(&self) -> bool {
        self.reduce_zero_sum().is_empty()
    }

    /// Value at `a = values` with the Hodge parameter kept symbolic.
    pub fn evaluate(&self, values: &[BigInt]) -> BTreeMap<u32, BigRational> {
        let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
        for ((e, x), v) in &self.terms {
            let mut t = v.clone();
            for (a, &k) in values.iter().zip(x) {
                t *= BigRational::from_integer(num_traits::pow(a.clone(), k as usize));
            }
            *out.entry(*e).or_insert_with(BigRational::zero) += t;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Answer to one oracle query.
#[derive(Clone, PartialEq, Debug)]
pub enum Query {
    Known(DrPoly),
    Unknown,
}

/// Metric, unit and Hodge-parameter usage of a CohFT.
#[derive(Clone, PartialEq, Debug)]
pub struct CohFTSpec {
    pub name: String,
    pub dim: usize,
    pub eta: Matrix,
    pub unit: usize,
    pub uses_eps: bool,
}

impl CohFTSpec {
    pub fn new(name: &str, eta: Matrix, unit: usize, uses_eps: bool) -> Result<Self> {
        let dim = matrix::check_square(&eta)?;
        if dim == 0 {
            return Err(Error::Invalid("empty metric".into()));
        }
        if !matrix::is_symmetric(&eta) {
            return Err(Error::NonSymmetric);
        }
        matrix::invert(&eta)?;
        if unit >= dim {
            return Err(Error::Invalid(format!("unit {} outside 1..={dim}", unit + 1)));
        }
        Ok(CohFTSpec {
            name: name.to_string(),
            dim,
            eta,
            unit,
            uses_eps,
        })
    }

    /// `eta^{ab}`, the inverse metric used by the hierarchy's operator.
    pub fn eta_inverse(&self) -> Matrix {
        matrix::invert(&self.eta).expect("validated at construction")
    }
}

pub trait DrOracle: Send + Sync {
    fn spec(&self) -> &CohFTSpec;

    fn dr_poly(&self, key: &OracleKey) -> Query;

    /// `int_{DR_g(a_1..a_n)} lambda_g c_{g,n}(e_{alpha_1}, ..)`, recovered
    /// from the psi-pointed integral with the unit inserted:
    /// the pointed integral equals `(2g - 2 + n)` times this one.
    fn unpointed(&self, g: u32, insertions: &[usize]) -> Query {
        let n = insertions.len() as i64;
        let chi = 2 * g as i64 - 2 + n;
        if chi <= 0 {
            return Query::Known(DrPoly::zero(insertions.len()));
        }
        let key = OracleKey::new(g, 1, self.spec().unit, insertions.to_vec());
        match self.dr_poly(&key) {
            Query::Known(p) => Query::Known(p.scale(&BigRational::new(
                BigInt::one(),
                BigInt::from(chi),
            ))),
            Query::Unknown => Query::Unknown,
        }
    }
}

/// Checks the structural axioms on one answer: homogeneity of degree
/// `2g`, symmetry under swapping equal-colored insertions (modulo the
/// zero-sum relation), and forgetful vanishing for the unit with no psi.
pub fn check_answer(spec: &CohFTSpec, key: &OracleKey, p: &DrPoly) -> std::result::Result<(), String> {
    if p.n() != key.n() {
        return Err(format!("polynomial has {} variables, key has {}", p.n(), key.n()));
    }
    if !p.is_homogeneous(2 * key.g) {
        return Err(format!("not homogeneous of degree {}", 2 * key.g));
    }
    for i in 1..key.n() {
        if key.insertions[i] == key.insertions[i - 1] && !p.sub(&p.swap_vars(i - 1, i)).is_zero_mod_sum() {
            return Err(format!("not symmetric under swapping insertions {} and {}", i, i + 1));
        }
    }
    let chi = 2 * key.g as i64 - 2 + key.n() as i64;
    if key.alpha == spec.unit && key.d == 0 && chi > 0 && !p.is_zero_mod_sum() {
        return Err("unit insertion without psi must vanish".into());
    }
    if key.g == 0 && key.d == 0 && key.alpha == spec.unit && key.n() == 2 {
        let want = &spec.eta[key.insertions[0]][key.insertions[1]];
        let got = p.eps_part(0).evaluate(&[BigInt::one(), -BigInt::one()]);
        let got_s = crate::scalar::Scalar::from_rational(got.get(&0).cloned().unwrap_or_default());
        if &got_s != want || p.terms().keys().any(|(e, _)| *e > 0) {
            return Err("two-point genus-0 unit value must equal the metric".into());
        }
    }
    Ok(())
}
