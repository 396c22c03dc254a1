//! Mode series: the Poisson algebra of Fourier modes `p^a_n`, the zero-mode
//! map from local functionals and its normalized inverse.
//!
//! A series is stored in the basis
//! `s^{a_1..a_k}_{d_1..d_k} = sum_{a_1+..+a_k=0, a_r != 0} prod a_r^{d_r} p^{a_r}_{a_r}`,
//! which only depends on the multiset of (color, exponent) pairs. A key is
//! therefore a [`TermKey`] whose jet variables are read as (color,
//! exponent) pairs; the sum over mode tuples makes every key symmetric by
//! construction. Different keys can still be dependent through the
//! relation `a_1 + .. + a_k = 0`; [`b_equal`] decides equality modulo it.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diffalg::{normal_form, JetVar, LocalFunctional, Monomial, TermKey};
use crate::diffalg::DiffPoly;
use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct BSeries {
    dim: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

/// Mode key with exponents per position, used when building series from
/// explicit polynomials.
pub fn mode_key(hpow: u32, epow: u32, modes: &[(usize, u32)]) -> TermKey {
    TermKey::new(
        hpow,
        epow,
        Monomial::from_vars(modes.iter().map(|&(c, e)| JetVar::new(c, e)).collect()),
    )
}

impl BSeries {
    pub fn zero(dim: usize) -> Self {
        BSeries {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        assert!(key.mono.vars().iter().all(|v| v.color < self.dim));
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> BSeries {
        let mut out = BSeries::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn has_linear_block(&self) -> bool {
        self.terms.keys().any(|k| k.mono.arity() == 1)
    }

    pub fn hbar_part(&self, hpow: u32) -> BSeries {
        BSeries {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.hpow == hpow)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Whether every `h^i` block has polynomial degree `2i`.
    pub fn is_graded_pol(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.mono.diff_degree() == 2 * k.hpow)
    }

    /// Canonical form: per (h, e, sorted colors), the symmetrized block
    /// polynomial with `a_k = -(a_1 + .. + a_{k-1})` substituted. Arity-1
    /// blocks are zero as series and are dropped.
    pub fn canonical(&self) -> BTreeMap<(u32, u32, Vec<usize>), BTreeMap<Vec<u32>, Scalar>> {
        let mut out: BTreeMap<(u32, u32, Vec<usize>), BTreeMap<Vec<u32>, Scalar>> =
            BTreeMap::new();
        for (k, c) in &self.terms {
            let arity = k.mono.arity();
            if arity == 1 {
                continue;
            }
            let block = out
                .entry((k.hpow, k.epow, k.mono.colors()))
                .or_default();
            for (exps, w) in canonical_poly(&k.mono) {
                let e = block.entry(exps).or_default();
                *e += &c.scale(&w);
            }
        }
        for block in out.values_mut() {
            block.retain(|_, v| !v.is_zero());
        }
        out.retain(|_, b| !b.is_empty());
        out
    }
}

impl<'a> Add<&'a BSeries> for &'a BSeries {
    type Output = BSeries;
    fn add(self, rhs: &BSeries) -> BSeries {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BSeries> for &'a BSeries {
    type Output = BSeries;
    fn sub(self, rhs: &BSeries) -> BSeries {
        self + &(-rhs)
    }
}

impl Neg for &BSeries {
    type Output = BSeries;
    fn neg(self) -> BSeries {
        self.scale(&-Scalar::one())
    }
}

/// Distinct arrangements of a multiset of exponents.
fn arrangements(exps: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = exps.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next_permutation over the sorted multiset
    let mut cur = sorted;
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

/// All `(c_1..c_n)` with sum `total`, weighted by `total! / prod c_r!`.
pub fn multinomial_terms(n: usize, total: u32) -> Vec<(Vec<u32>, BigInt)> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if total == 0 {
            vec![(Vec::new(), BigInt::one())]
        } else {
            Vec::new()
        };
    }
    let mut comps = Vec::new();
    rec(n, total, &mut Vec::new(), &mut comps);
    let tf = factorial(total);
    comps
        .into_iter()
        .map(|c| {
            let den = c.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
            let w = &tf / den;
            (c, w)
        })
        .collect()
}

/// Symmetrized, zero-sum-reduced polynomial of one key, in the variables
/// `a_1..a_{k-1}`.
fn canonical_poly(mono: &Monomial) -> BTreeMap<Vec<u32>, BigRational> {
    let vars = mono.vars();
    let k = vars.len();
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    if k == 0 {
        out.insert(Vec::new(), BigRational::one());
        return out;
    }
    // color groups are contiguous because vars are sorted by color first
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut last = None;
    for v in vars {
        if last != Some(v.color) {
            groups.push(Vec::new());
            last = Some(v.color);
        }
        groups.last_mut().expect("group").push(v.order);
    }
    let per_group: Vec<Vec<Vec<u32>>> = groups.iter().map(|g| arrangements(g)).collect();
    let total: usize = per_group.iter().map(Vec::len).product();
    let weight = BigRational::new(BigInt::one(), BigInt::from(total));
    let mut idx = vec![0usize; per_group.len()];
    loop {
        let exps: Vec<u32> = idx
            .iter()
            .zip(&per_group)
            .flat_map(|(&i, g)| g[i].iter().copied())
            .collect();
        let last = exps[k - 1];
        let sign = if last.is_multiple_of(2) {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        for (c, w) in multinomial_terms(k - 1, last) {
            let mono: Vec<u32> = (0..k - 1).map(|r| exps[r] + c[r]).collect();
            let e = out.entry(mono).or_insert_with(BigRational::zero);
            *e += &weight * &sign * BigRational::from_integer(w);
        }
        // odometer
        let mut pos = per_group.len();
        loop {
            if pos == 0 {
                out.retain(|_, v| !v.is_zero());
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_group[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Equality modulo the zero-sum relation in every block.
pub fn b_equal(f: &BSeries, g: &BSeries) -> bool {
    f.dim == g.dim && (f - g).canonical().is_empty()
}

/// Zero mode of the Fourier substitution `u^a_k -> sum_n (i n)^k p^a_n e^{inx}`.
///
/// Constants map to constants and linear densities to zero.
pub fn t0(h: &LocalFunctional) -> BSeries {
    let mut out = BSeries::zero(h.dim());
    for (k, c) in h.rep().terms() {
        if k.mono.arity() == 1 {
            continue;
        }
        let phase = Scalar::i_pow(k.mono.diff_degree() as i64);
        out.add_term(k.clone(), c * &phase);
    }
    out
}

/// Inverse of [`t0`] on series without linear blocks, normalized to have
/// no linear part; returns the canonical representative.
pub fn q_inverse(f: &BSeries) -> Result<LocalFunctional> {
    if f.has_linear_block() {
        return Err(Error::HasLinearBlock);
    }
    let mut rep = DiffPoly::zero(f.dim);
    for (k, c) in &f.terms {
        let phase = Scalar::i_pow(-(k.mono.diff_degree() as i64));
        rep.add_term(k.clone(), c * &phase);
    }
    let out = LocalFunctional::new(normal_form(&rep));
    debug_assert!(b_equal(&t0(&out), f));
    Ok(out)
}

/// Series whose modes range over all integers, zero included.
#[derive(Clone, PartialEq, Debug)]
pub struct ZSeries(BSeries);

pub fn z_extend(f: &BSeries) -> ZSeries {
    ZSeries(f.clone())
}

impl ZSeries {
    pub fn source(&self) -> &BSeries {
        &self.0
    }

    /// `d/dp^color_0`, then all zero modes set to zero.
    ///
    /// Only positions with exponent zero survive the evaluation at a zero
    /// mode; results of arity one vanish as series.
    pub fn partial_p0(&self, color: usize) -> BSeries {
        let var = JetVar::new(color, 0);
        let mut out = BSeries::zero(self.0.dim);
        for (k, c) in &self.0.terms {
            let m = k.mono.multiplicity(var);
            if m == 0 || k.mono.arity() <= 2 {
                continue;
            }
            let rest = k.mono.remove_one(var).expect("present");
            out.add_term(
                TermKey::new(k.hpow, k.epow, rest),
                c * &Scalar::from_int(m as i64),
            );
        }
        out
    }
}

/// Bracket induced by `{p^a_m, p^b_n} = i m eta^{ab} delta_{m+n,0}`.
///
/// Contracting position `r` of a key of `f` (mode `m`) with position `t` of
/// a key of `g` (mode `-m`) gives the weight `i eta m^{1+d_r} (-m)^{e_t}`
/// with `m` equal to the sum of the remaining modes of `g`; expanding that
/// power multinomially lands back in the basis.
pub fn p_bracket(f: &BSeries, g: &BSeries, eta: &Matrix) -> Result<BSeries> {
    let n = matrix::check_square(eta)?;
    if f.dim != g.dim || f.dim != n {
        return Err(Error::DimensionMismatch {
            left: f.dim,
            right: if f.dim != g.dim { g.dim } else { n },
        });
    }
    if !matrix::is_symmetric(eta) {
        return Err(Error::NonSymmetric);
    }
    let mut out = BSeries::zero(n);
    for (kf, cf) in &f.terms {
        let vf = kf.mono.vars();
        if vf.len() < 2 {
            continue;
        }
        for (kg, cg) in &g.terms {
            let vg = kg.mono.vars();
            if vg.len() < 2 {
                continue;
            }
            let base = &(cf * cg) * &Scalar::i();
            for r in 0..vf.len() {
                let rest_a: Vec<JetVar> =
                    vf.iter().enumerate().filter(|&(i, _)| i != r).map(|(_, v)| *v).collect();
                for t in 0..vg.len() {
                    let e = &eta[vf[r].color][vg[t].color];
                    if e.is_zero() {
                        continue;
                    }
                    let rest_b: Vec<JetVar> = vg
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != t)
                        .map(|(_, v)| *v)
                        .collect();
                    let power = 1 + vf[r].order + vg[t].order;
                    let sign = if vg[t].order % 2 == 0 { 1 } else { -1 };
                    let coef = &(&base * e) * &Scalar::from_int(sign);
                    for (c, w) in multinomial_terms(rest_b.len(), power) {
                        let mut vars = rest_a.clone();
                        vars.extend(
                            rest_b
                                .iter()
                                .zip(&c)
                                .map(|(v, &ci)| JetVar::new(v.color, v.order + ci)),
                        );
                        out.add_term(
                            TermKey::new(
                                kf.hpow + kg.hpow,
                                kf.epow + kg.epow,
                                Monomial::from_vars(vars),
                            ),
                            coef.scale(&BigRational::from_integer(w)),
                        );
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `sum_n (i n)^k p^beta_n d/dp^alpha_n` applied to a series: the zero mode
/// of `int delta h/delta u^alpha * u^beta_k dx` when `f = t0(h)`.
pub fn mode_pairing(f: &BSeries, alpha: usize, beta: usize, k: u32) -> BSeries {
    let phase = Scalar::i_pow(k as i64);
    let mut out = BSeries::zero(f.dim);
    for (key, c) in &f.terms {
        let vars = key.mono.vars();
        if vars.len() < 2 {
            continue;
        }
        for (r, v) in vars.iter().enumerate() {
            if v.color != alpha {
                continue;
            }
            let mut nv = vars.to_vec();
            nv[r] = JetVar::new(beta, v.order + k);
            out.add_term(
                TermKey::new(key.hpow, key.epow, Monomial::from_vars(nv)),
                c * &phase,
            );
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct BlockDoc {
    h: u32,
    e: u32,
    modes: Vec<(usize, u32)>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct BSeriesDoc {
    dim: usize,
    blocks: Vec<BlockDoc>,
}

impl Serialize for BSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BSeriesDoc {
            dim: self.dim,
            blocks: self
                .terms
                .iter()
                .map(|(k, c)| BlockDoc {
                    h: k.hpow,
                    e: k.epow,
                    modes: k.mono.vars().iter().map(|v| (v.color + 1, v.order)).collect(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = BSeriesDoc::deserialize(d)?;
        let mut out = BSeries::zero(doc.dim);
        for b in doc.blocks {
            if b.modes.iter().any(|&(c, _)| c == 0 || c > doc.dim) {
                return Err(D::Error::custom("mode color out of range"));
            }
            let modes: Vec<(usize, u32)> = b.modes.iter().map(|&(c, e)| (c - 1, e)).collect();
            out.add_term(mode_key(b.h, b.e, &modes), b.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::parse_poly;
    use crate::poisson::{bracket, scalar_metric, HamOperator};
    use crate::diffalg::Truncation;

    fn lf(s: &str) -> LocalFunctional {
        LocalFunctional::new(parse_poly(s, 1).unwrap())
    }

    fn key(modes: &[(usize, u32)]) -> TermKey {
        mode_key(0, 0, modes)
    }

    fn series(terms: &[(&[(usize, u32)], Scalar)]) -> BSeries {
        let mut s = BSeries::zero(1);
        for (m, c) in terms {
            s.add_term(key(m), c.clone());
        }
        s
    }

    #[test]
    fn t0_examples() {
        let sq = t0(&lf("u^2"));
        assert!(b_equal(&sq, &series(&[(&[(0, 0), (0, 0)], Scalar::one())])));
        // -a1 a2 = a1^2 on the zero-sum line
        let ux2 = t0(&lf("u_1^2"));
        assert!(b_equal(&ux2, &series(&[(&[(0, 1), (0, 1)], -Scalar::one())])));
        assert!(b_equal(&ux2, &series(&[(&[(0, 2), (0, 0)], Scalar::one())])));
        assert!(t0(&lf("u_1*u_2 + u*u_3")).canonical().is_empty());
        assert!(t0(&lf("u")).is_zero());
    }

    #[test]
    fn b_equal_examples() {
        let a1a2 = series(&[(&[(0, 1), (0, 1)], Scalar::one())]);
        let m_a1sq = series(&[(&[(0, 2), (0, 0)], -Scalar::one())]);
        assert!(b_equal(&a1a2, &m_a1sq));
        let a1 = series(&[(&[(0, 1), (0, 0)], Scalar::one())]);
        assert!(b_equal(&a1, &BSeries::zero(1)));
        let a1sq = series(&[(&[(0, 2), (0, 0)], Scalar::one())]);
        assert!(!b_equal(&a1sq, &BSeries::zero(1)));
    }

    #[test]
    fn q_inverse_examples() {
        let one = series(&[(&[(0, 0), (0, 0)], Scalar::one())]);
        assert!(q_inverse(&one).unwrap().lf_equal(&lf("u^2")));
        let a1sq = series(&[(&[(0, 2), (0, 0)], Scalar::one())]);
        let h = q_inverse(&a1sq).unwrap();
        assert!(h.lf_equal(&lf("u_1^2")));
        assert_eq!(h.rep(), &parse_poly("-u*u_2", 1).unwrap());
        assert!(q_inverse(&BSeries::zero(1)).unwrap().rep().is_zero());
        let lin = series(&[(&[(0, 3)], Scalar::one())]);
        assert!(matches!(q_inverse(&lin), Err(Error::HasLinearBlock)));
    }

    #[test]
    fn z_map_examples() {
        let cube = z_extend(&t0(&lf("u^3")));
        assert!(b_equal(&cube.partial_p0(0), &t0(&lf("3*u^2"))));
        assert!(z_extend(&t0(&lf("u_1^2"))).partial_p0(0).is_zero());
        assert!(z_extend(&BSeries::zero(1)).partial_p0(0).is_zero());
    }

    #[test]
    fn p_bracket_matches_functional_bracket() {
        let eta = scalar_metric(Scalar::one());
        let k = HamOperator::eta_dx(&eta).unwrap();
        let t = Truncation::unbounded();
        let (f, g) = (lf("1/2*u^2"), lf("1/6*u^3"));
        let lhs = t0(&bracket(&f, &g, &k, &t).unwrap());
        let rhs = p_bracket(&t0(&f), &t0(&g), &eta).unwrap();
        assert!(b_equal(&lhs, &rhs));
        let (f, g) = (lf("u*u_1^2 + u^2"), lf("u^2*u_2 + h*u_3^2"));
        let lhs = t0(&bracket(&f, &g, &k, &t).unwrap());
        let rhs = p_bracket(&t0(&f), &t0(&g), &eta).unwrap();
        assert!(b_equal(&lhs, &rhs));
        let ff = p_bracket(&t0(&f), &t0(&f), &eta).unwrap();
        assert!(b_equal(&ff, &BSeries::zero(1)));
    }

    #[test]
    fn multinomials() {
        let t = multinomial_terms(2, 2);
        assert_eq!(t.len(), 3);
        assert_eq!(t.iter().map(|(_, w)| w.clone()).sum::<BigInt>(), BigInt::from(4));
        assert_eq!(arrangements(&[0, 1, 1]).len(), 3);
    }

    #[test]
    fn json_round_trip() {
        let f = t0(&lf("u^2*u_2 + h*(1/2)*u_3^2"));
        let s = serde_json::to_string(&f).unwrap();
        let back: BSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
