use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use super::jet::{JetVar, Monomial, TermKey};
use super::truncation::Truncation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Element of the (h, e)-graded ring of differential polynomials in
/// `N` colors.
///
/// Terms are kept in canonical order with no zero coefficients. The
/// `clipped` flag records that some truncation dropped terms while this
/// value (or one of its inputs) was produced; it does not take part in
/// equality.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    dim: usize,
    terms: BTreeMap<TermKey, Scalar>,
    clipped: bool,
}

impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.terms == other.terms
    }
}

impl Eq for DiffPoly {}

impl DiffPoly {
    pub fn zero(dim: usize) -> Self {
        DiffPoly {
            dim,
            terms: BTreeMap::new(),
            clipped: false,
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(TermKey::new(0, 0, Monomial::one()), c);
        p
    }

    /// `u^color_order`.
    pub fn var(dim: usize, color: usize, order: u32) -> Self {
        assert!(color < dim, "color {color} out of range for dimension {dim}");
        Self::monomial(dim, Scalar::one(), 0, 0, vec![JetVar::new(color, order)])
    }

    pub fn monomial(dim: usize, c: Scalar, hpow: u32, epow: u32, vars: Vec<JetVar>) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(TermKey::new(hpow, epow, Monomial::from_vars(vars)), c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (TermKey, Scalar)>) -> Self {
        let mut p = Self::zero(dim);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_clipped(&self) -> bool {
        self.clipped
    }

    pub(crate) fn mark_clipped(mut self, clipped: bool) -> Self {
        self.clipped |= clipped;
        self
    }

    pub fn coeff(&self, key: &TermKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        for v in key.mono.vars() {
            assert!(v.color < self.dim, "color out of range");
        }
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

    fn check_dim(&self, other: &DiffPoly) {
        assert_eq!(
            self.dim, other.dim,
            "differential polynomials of different dimension"
        );
    }

    pub fn scale(&self, c: &Scalar) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(self.dim).mark_clipped(self.clipped);
        }
        DiffPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            clipped: self.clipped,
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> DiffPoly {
        self.scale(&Scalar::from_rational(r.clone()))
    }

    /// Multiplies by `h^dh e^de`.
    pub fn shift(&self, dh: u32, de: u32) -> DiffPoly {
        DiffPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (TermKey::new(k.hpow + dh, k.epow + de, k.mono.clone()), v.clone()))
                .collect(),
            clipped: self.clipped,
        }
    }

    pub fn mul_trunc(&self, other: &DiffPoly, trunc: &Truncation) -> DiffPoly {
        self.check_dim(other);
        let mut out = DiffPoly::zero(self.dim);
        let mut clipped = self.clipped || other.clipped;
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let (h, e) = (ka.hpow + kb.hpow, ka.epow + kb.epow);
                let arity = ka.mono.arity() + kb.mono.arity();
                if !trunc.admits(h, e, arity) {
                    clipped = true;
                    continue;
                }
                out.add_term(TermKey::new(h, e, ka.mono.mul(&kb.mono)), ca * cb);
            }
        }
        out.mark_clipped(clipped)
    }

    pub fn pow_trunc(&self, k: u32, trunc: &Truncation) -> DiffPoly {
        let mut acc = DiffPoly::constant(self.dim, Scalar::one());
        for _ in 0..k {
            acc = acc.mul_trunc(self, trunc);
        }
        acc
    }

    /// Drops every term outside `trunc`.
    pub fn truncate(&self, trunc: &Truncation) -> DiffPoly {
        self.filter_terms(|k| trunc.admits(k.hpow, k.epow, k.mono.arity()), true)
    }

    /// Keeps the terms with `hpow <= genus_max` and arity `<= deg_max`.
    /// Unlike [`truncate`](Self::truncate) this is a projection onto a
    /// window and does not mark the result as clipped.
    pub fn restrict(&self, genus_max: u32, deg_max: u32) -> DiffPoly {
        self.filter_terms(
            |k| k.hpow <= genus_max && k.mono.arity() as u64 <= deg_max as u64,
            false,
        )
    }

    pub fn filter_terms(&self, keep: impl Fn(&TermKey) -> bool, mark: bool) -> DiffPoly {
        let mut dropped = false;
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| {
                let ok = keep(k);
                dropped |= !ok;
                ok
            })
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        DiffPoly {
            dim: self.dim,
            terms,
            clipped: self.clipped || (mark && dropped),
        }
    }

    /// Part with the given h-power.
    pub fn hbar_part(&self, hpow: u32) -> DiffPoly {
        self.filter_terms(|k| k.hpow == hpow, false)
    }

    pub fn arity_part(&self, arity: usize) -> DiffPoly {
        self.filter_terms(|k| k.mono.arity() == arity, false)
    }

    /// Total x-derivative `sum u^a_{s+1} d/du^a_s`.
    pub fn dx(&self) -> DiffPoly {
        let mut out = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            for idx in 0..k.mono.arity() {
                out.add_term(
                    TermKey::new(k.hpow, k.epow, k.mono.raise_at(idx)),
                    c.clone(),
                );
            }
        }
        out.mark_clipped(self.clipped)
    }

    pub fn dx_n(&self, n: u32) -> DiffPoly {
        (0..n).fold(self.clone(), |acc, _| acc.dx())
    }

    /// Formal partial derivative in `u^color_order`.
    pub fn jet_derivative(&self, color: usize, order: u32) -> DiffPoly {
        let var = JetVar::new(color, order);
        let mut out = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            let m = k.mono.multiplicity(var);
            if m == 0 {
                continue;
            }
            let rest = k.mono.remove_one(var).expect("present");
            out.add_term(
                TermKey::new(k.hpow, k.epow, rest),
                c * &Scalar::from_int(m as i64),
            );
        }
        out.mark_clipped(self.clipped)
    }

    /// Highest jet order of `color` occurring, if any.
    pub fn max_order(&self, color: usize) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|k| k.mono.vars().iter())
            .filter(|v| v.color == color)
            .map(|v| v.order)
            .max()
    }

    pub fn max_arity(&self) -> usize {
        self.terms.keys().map(|k| k.mono.arity()).max().unwrap_or(0)
    }

    pub fn max_hpow(&self) -> u32 {
        self.terms.keys().map(|k| k.hpow).max().unwrap_or(0)
    }

    pub fn max_epow(&self) -> u32 {
        self.terms.keys().map(|k| k.epow).max().unwrap_or(0)
    }

    /// Differential degree if every term has the same one; `None` for the
    /// zero polynomial (homogeneous of every degree) is reported as
    /// `Some(None)`, mixed degrees as `None`.
    pub fn homogeneous_degree(&self) -> Option<Option<u32>> {
        let mut degs = self.terms.keys().map(|k| k.mono.diff_degree());
        match degs.next() {
            None => Some(None),
            Some(d) => degs.all(|e| e == d).then_some(Some(d)),
        }
    }

    /// Whether every `h^i` term has differential degree `2i + shift`.
    pub fn has_extended_degree(&self, shift: u32) -> bool {
        self.terms
            .keys()
            .all(|k| k.mono.diff_degree() == 2 * k.hpow + shift)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn ensure_real(&self) -> Result<()> {
        match self.terms.iter().find(|(_, c)| !c.is_real()) {
            None => Ok(()),
            Some((k, c)) => Err(Error::NotReal(format!("{c} at {k:?}"))),
        }
    }

    /// Multiplies each term by its number of jet variables.
    pub fn euler(&self) -> DiffPoly {
        self.weighted(|k| k.mono.arity() as i64)
    }

    pub fn weighted(&self, w: impl Fn(&TermKey) -> i64) -> DiffPoly {
        let mut out = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * &Scalar::from_int(w(k)));
        }
        out.mark_clipped(self.clipped)
    }

    /// Replaces every `u^g_n` by `dx^n(images[g])` and expands under `trunc`.
    pub fn substitute(&self, images: &[DiffPoly], trunc: &Truncation) -> Result<DiffPoly> {
        if images.len() < self.dim {
            return Err(Error::Invalid(format!(
                "substitution needs {} images, got {}",
                self.dim,
                images.len()
            )));
        }
        let target_dim = images.first().map(|p| p.dim).unwrap_or(self.dim);
        if images.iter().any(|p| p.dim != target_dim) {
            return Err(Error::Invalid("images of different dimension".into()));
        }
        let mut jets: BTreeMap<JetVar, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero(target_dim).mark_clipped(self.clipped);
        for (k, c) in &self.terms {
            if !trunc.admits(k.hpow, k.epow, 0) {
                out.clipped = true;
                continue;
            }
            let mut acc = DiffPoly::monomial(target_dim, c.clone(), k.hpow, k.epow, vec![]);
            for (var, mult) in k.mono.powers() {
                jets.entry(var).or_insert_with(|| {
                    
                    images[var.color].dx_n(var.order)
                });
                let jet = &jets[&var];
                for _ in 0..mult {
                    acc = acc.mul_trunc(jet, trunc);
                }
                if acc.is_zero() {
                    break;
                }
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Formal antiderivative in the single variable `var`:
    /// `var^k -> var^{k+1}/(k+1)`.
    pub fn integrate_var(&self, var: JetVar) -> DiffPoly {
        let mut out = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            let m = k.mono.multiplicity(var) as i64;
            out.add_term(
                TermKey::new(k.hpow, k.epow, k.mono.with_var(var)),
                c * &Scalar::frac(1, m + 1),
            );
        }
        out.mark_clipped(self.clipped)
    }

    /// Terms whose monomial contains `var`, split as `var * rest`; only
    /// valid when `var` occurs at most linearly.
    pub(crate) fn split_linear(&self, var: JetVar) -> Option<(DiffPoly, DiffPoly)> {
        let mut coeff = DiffPoly::zero(self.dim);
        let mut rest = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            match k.mono.multiplicity(var) {
                0 => rest.add_term(k.clone(), c.clone()),
                1 => coeff.add_term(
                    TermKey::new(k.hpow, k.epow, k.mono.remove_one(var).expect("present")),
                    c.clone(),
                ),
                _ => return None,
            }
        }
        Some((coeff, rest))
    }

    /// Largest variable by `(order, color)` over all terms.
    pub fn top_var(&self) -> Option<JetVar> {
        self.terms
            .keys()
            .filter_map(|k| k.mono.max_var())
            .max_by_key(|v| v.rank())
    }

    pub fn map_coeffs(&self, f: impl Fn(&TermKey, &Scalar) -> Scalar) -> DiffPoly {
        let mut out = DiffPoly::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(k, c));
        }
        out.mark_clipped(self.clipped)
    }

    /// Re-embeds into a space with more colors.
    pub fn with_dim(&self, dim: usize) -> DiffPoly {
        assert!(dim >= self.dim);
        DiffPoly {
            dim,
            terms: self.terms.clone(),
            clipped: self.clipped,
        }
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out.mark_clipped(rhs.clipped)
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: DiffPoly) -> DiffPoly {
        &self + &rhs
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out.mark_clipped(rhs.clipped)
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.mul_trunc(rhs, &Truncation::unbounded())
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Scalar::one())
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
