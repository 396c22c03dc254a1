//! Assembly of the DR hierarchy from an oracle, with verification of its
//! structural identities.

pub mod miura;
pub mod report;
pub mod string_solution;
pub mod verify;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cohft::{CohFTSpec, DrOracle, DrPoly, OracleKey, Query};
use crate::diffalg::{DiffPoly, JetVar, LocalFunctional, Truncation};
use crate::error::{Error, Result};
use crate::fourier::{mode_key, q_inverse, BSeries};
use crate::poisson::{flows, EvolutionSystem, HamOperator};
use crate::scalar::{factorial, Scalar};

pub use miura::{miura_apply, miura_invert, miura_substitute};
pub use report::{Check, Report, Window};
pub use string_solution::{string_solution, verify_string_solution, TaylorSolution};
pub use verify::{
    omega_genus0, verify_all, verify_commutativity, verify_dilaton, verify_first_derivative,
    verify_genus0, verify_string,
};

/// Sorted color lists of length `n` over `dim` colors.
pub fn color_multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(dim: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in lo..dim {
            cur.push(c);
            rec(dim, n, c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, n, 0, &mut Vec::new(), &mut out);
    out
}

/// `1 / prod_c m_c!` for the color multiplicities of a sorted list: the
/// ordered sum over colors with `1/n!` collapses to this per multiset.
fn multiset_weight(colors: &[usize]) -> BigRational {
    let mut den = BigInt::one();
    let mut run = 0u32;
    for i in 0..colors.len() {
        run = if i > 0 && colors[i] == colors[i - 1] { run + 1 } else { 1 };
        den *= BigInt::from(run);
    }
    BigRational::new(BigInt::one(), den)
}

fn add_block(
    out: &mut BSeries,
    g: u32,
    colors: &[usize],
    p: &DrPoly,
    trunc: &Truncation,
) {
    let sign = if g.is_multiple_of(2) { 1 } else { -1 };
    let w = multiset_weight(colors) * BigRational::from_integer(BigInt::from(sign));
    for ((e, exps), c) in p.terms() {
        if *e > trunc.eps_max {
            continue;
        }
        let modes: Vec<(usize, u32)> = colors.iter().copied().zip(exps.iter().copied()).collect();
        out.add_term(mode_key(g, *e, &modes), Scalar::from_rational(c * &w));
    }
}

fn checked(oracle: &dyn DrOracle, key: &OracleKey) -> Result<Option<DrPoly>> {
    match oracle.dr_poly(key) {
        Query::Unknown => Ok(None),
        Query::Known(p) => {
            if p.n() != key.n() {
                return Err(Error::OracleViolation {
                    key: key.clone(),
                    reason: format!("answer has {} variables", p.n()),
                });
            }
            if !p.is_homogeneous(2 * key.g) {
                return Err(Error::OracleViolation {
                    key: key.clone(),
                    reason: format!("answer is not homogeneous of degree {}", 2 * key.g),
                });
            }
            Ok(Some(p))
        }
    }
}

/// The mode series `g_{alpha,d}` within `trunc`, together with every key
/// the oracle could not answer.
pub fn collect_series(
    oracle: &dyn DrOracle,
    alpha: usize,
    d: u32,
    trunc: &Truncation,
) -> Result<(BSeries, Vec<OracleKey>)> {
    let dim = oracle.spec().dim;
    if alpha >= dim {
        return Err(Error::Invalid(format!("alpha {} outside 1..={dim}", alpha + 1)));
    }
    let mut out = BSeries::zero(dim);
    let mut missing = Vec::new();
    for g in 0..=trunc.genus_max {
        for n in 2..=trunc.deg_max as usize {
            for colors in color_multisets(dim, n) {
                let key = OracleKey::new(g, d, alpha, colors.clone());
                match checked(oracle, &key)? {
                    Some(p) => add_block(&mut out, g, &colors, &p, trunc),
                    None => missing.push(key),
                }
            }
        }
    }
    Ok((out, missing))
}

/// `g_{alpha,d}`; fails with the full list of keys the oracle lacks.
pub fn g_series(oracle: &dyn DrOracle, alpha: usize, d: u32, trunc: &Truncation) -> Result<BSeries> {
    let (s, missing) = collect_series(oracle, alpha, d, trunc)?;
    if !missing.is_empty() {
        return Err(Error::MissingOracleData { keys: missing });
    }
    Ok(s)
}

fn to_functional(s: &BSeries) -> Result<LocalFunctional> {
    let h = q_inverse(s)?;
    h.rep().ensure_real()?;
    if !h.rep().has_extended_degree(0) {
        return Err(Error::Invalid(
            "Hamiltonian density has a term of the wrong differential degree".into(),
        ));
    }
    Ok(h)
}

/// `gbar_{alpha,d} = Q(g_{alpha,d})`.
pub fn hamiltonian(
    oracle: &dyn DrOracle,
    alpha: usize,
    d: u32,
    trunc: &Truncation,
) -> Result<LocalFunctional> {
    to_functional(&g_series(oracle, alpha, d, trunc)?)
}

/// Mode series of `gbar` from the unpointed integrals.
pub fn collect_total_series(oracle: &dyn DrOracle, trunc: &Truncation) -> (BSeries, Vec<OracleKey>) {
    let spec = oracle.spec();
    let mut out = BSeries::zero(spec.dim);
    let mut missing = Vec::new();
    for g in 0..=trunc.genus_max {
        for n in 2..=trunc.deg_max as usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            for colors in color_multisets(spec.dim, n) {
                match oracle.unpointed(g, &colors) {
                    Query::Known(p) => add_block(&mut out, g, &colors, &p, trunc),
                    Query::Unknown => missing.push(OracleKey::new(g, 1, spec.unit, colors)),
                }
            }
        }
    }
    (out, missing)
}

/// `gbar = Q(g)`, the generating functional of the unpointed integrals.
pub fn g_total(oracle: &dyn DrOracle, trunc: &Truncation) -> Result<LocalFunctional> {
    let (s, missing) = collect_total_series(oracle, trunc);
    if !missing.is_empty() {
        return Err(Error::MissingOracleData { keys: missing });
    }
    to_functional(&s)
}

/// How to react to keys the oracle cannot answer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BuildMode {
    /// Any missing key is an error.
    Strict,
    /// Each Hamiltonian is kept up to the largest genus below its first
    /// missing key; a Hamiltonian missing genus-zero data is skipped.
    Windowed,
}

/// A built functional together with the genus up to which all of its
/// oracle data was present.
#[derive(Clone, Debug)]
pub struct Built {
    pub functional: LocalFunctional,
    pub series: BSeries,
    pub genus_complete: u32,
}

fn window_from(series: BSeries, missing: &[OracleKey], trunc: &Truncation, mode: BuildMode) -> Result<Option<Built>> {
    let complete = match missing.iter().map(|k| k.g).min() {
        None => trunc.genus_max,
        Some(g) => {
            if mode == BuildMode::Strict {
                return Err(Error::MissingOracleData {
                    keys: missing.to_vec(),
                });
            }
            if g == 0 {
                return Ok(None);
            }
            g - 1
        }
    };
    let mut kept = BSeries::zero(series.dim());
    for (k, c) in series.terms() {
        if k.hpow <= complete {
            kept.add_term(k.clone(), c.clone());
        }
    }
    Ok(Some(Built {
        functional: to_functional(&kept)?,
        series: kept,
        genus_complete: complete,
    }))
}

pub struct Hierarchy {
    pub oracle: Arc<dyn DrOracle>,
    pub trunc: Truncation,
    pub d_max: u32,
    pub hams: BTreeMap<(usize, u32), Built>,
    /// Hamiltonians that could not be built at all, with their missing keys.
    pub skipped: BTreeMap<(usize, u32), Vec<OracleKey>>,
    pub gbar: Option<Built>,
    pub op: HamOperator,
}

impl Hierarchy {
    /// Builds `gbar_{alpha,d}` for all colors and `d <= d_max`, and `gbar`.
    pub fn build(
        oracle: Arc<dyn DrOracle>,
        trunc: Truncation,
        d_max: u32,
        mode: BuildMode,
    ) -> Result<Self> {
        let spec = oracle.spec().clone();
        let op = HamOperator::eta_dx(&spec.eta_inverse())?;
        let mut hams = BTreeMap::new();
        let mut skipped = BTreeMap::new();
        for alpha in 0..spec.dim {
            for d in 0..=d_max {
                let (s, missing) = collect_series(oracle.as_ref(), alpha, d, &trunc)?;
                match window_from(s, &missing, &trunc, mode)? {
                    Some(b) => {
                        hams.insert((alpha, d), b);
                    }
                    None => {
                        skipped.insert((alpha, d), missing);
                    }
                }
            }
        }
        let (s, missing) = collect_total_series(oracle.as_ref(), &trunc);
        let gbar = window_from(s, &missing, &trunc, mode)?;
        Ok(Hierarchy {
            oracle,
            trunc,
            d_max,
            hams,
            skipped,
            gbar,
            op,
        })
    }

    pub fn spec(&self) -> &CohFTSpec {
        self.oracle.spec()
    }

    pub fn dim(&self) -> usize {
        self.spec().dim
    }

    pub fn ham(&self, alpha: usize, d: u32) -> Option<&LocalFunctional> {
        self.hams.get(&(alpha, d)).map(|b| &b.functional)
    }

    /// `u^b_{t^alpha_d} = sum_mu eta^{b mu} dx delta gbar_{alpha,d} / delta u^mu`.
    pub fn dr_flow(&self, alpha: usize, d: u32) -> Result<Vec<DiffPoly>> {
        let h = self
            .ham(alpha, d)
            .ok_or_else(|| Error::Invalid(format!("Hamiltonian ({}, {d}) not built", alpha + 1)))?;
        flows(h, &self.op, &self.trunc)
    }

    pub fn system(&self) -> Result<EvolutionSystem> {
        let mut sys = EvolutionSystem::new(self.dim());
        for &(alpha, d) in self.hams.keys() {
            sys.insert(alpha, d, self.dr_flow(alpha, d)?);
        }
        Ok(sys)
    }

    pub fn genus_complete(&self, alpha: usize, d: u32) -> Option<u32> {
        self.hams.get(&(alpha, d)).map(|b| b.genus_complete)
    }
}

/// `int sum_mu eta_{alpha mu} u^mu dx`.
pub fn metric_linear(spec: &CohFTSpec, alpha: usize) -> LocalFunctional {
    let mut p = DiffPoly::zero(spec.dim);
    for mu in 0..spec.dim {
        p = &p + &DiffPoly::monomial(spec.dim, spec.eta[alpha][mu].clone(), 0, 0, vec![JetVar::new(mu, 0)]);
    }
    LocalFunctional::new(p)
}

/// `1/2 int sum eta_{ab} u^a u^b dx`.
pub fn metric_quadratic(spec: &CohFTSpec) -> LocalFunctional {
    let mut p = DiffPoly::zero(spec.dim);
    let half = Scalar::frac(1, 2);
    for a in 0..spec.dim {
        for b in 0..spec.dim {
            let c = &spec.eta[a][b] * &half;
            p = &p + &DiffPoly::monomial(spec.dim, c, 0, 0, vec![JetVar::new(a, 0), JetVar::new(b, 0)]);
        }
    }
    LocalFunctional::new(p)
}

/// `|B_{2g}| / (2 (2g)!)`, the coefficient of `h^g e^{g-1} u u_{2g}` in the
/// first Hodge Hamiltonian.
pub fn hodge_coefficient(g: u32) -> BigRational {
    use num_traits::Signed;
    crate::cohft::bernoulli(2 * g).abs()
        / BigRational::from_integer(BigInt::from(2) * factorial(2 * g))
}
