//! Local functionals: differential polynomials modulo total x-derivatives.
//!
//! Equality is decided through the variational complex: a density is a
//! total derivative iff all its variational derivatives vanish and it has
//! no constant term. A separate, purely linear-algebraic normal form picks
//! a canonical representative for printing; it is also used in tests as an
//! independent decision procedure.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::jet::{JetVar, Monomial, TermKey};
use super::poly::DiffPoly;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct LocalFunctional {
    rep: DiffPoly,
}

impl LocalFunctional {
    pub fn new(rep: DiffPoly) -> Self {
        LocalFunctional { rep }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(DiffPoly::zero(dim))
    }

    pub fn rep(&self) -> &DiffPoly {
        &self.rep
    }

    pub fn into_rep(self) -> DiffPoly {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// `sum_i (-dx)^i d rep / d u^color_i`.
    pub fn var_derivative(&self, color: usize) -> DiffPoly {
        var_derivative(&self.rep, color)
    }

    pub fn var_gradient(&self) -> Vec<DiffPoly> {
        (0..self.dim()).map(|a| self.var_derivative(a)).collect()
    }

    /// `int d rep / d u^color dx`; independent of the representative
    /// because `d/du^a_0` commutes with `dx`.
    pub fn partial_u(&self, color: usize) -> LocalFunctional {
        LocalFunctional::new(self.rep.jet_derivative(color, 0))
    }

    /// Equality modulo the image of `dx`.
    pub fn lf_equal(&self, other: &LocalFunctional) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        is_total_derivative(&(&self.rep - &other.rep))
    }

    pub fn is_zero(&self) -> bool {
        is_total_derivative(&self.rep)
    }

    /// Canonical representative; see [`normal_form`].
    pub fn normal_form(&self) -> DiffPoly {
        normal_form(&self.rep)
    }

    pub fn normalized(&self) -> LocalFunctional {
        LocalFunctional::new(self.normal_form())
    }

    pub fn scale(&self, c: &Scalar) -> LocalFunctional {
        LocalFunctional::new(self.rep.scale(c))
    }

    pub fn restrict(&self, genus_max: u32, deg_max: u32) -> LocalFunctional {
        LocalFunctional::new(self.rep.restrict(genus_max, deg_max))
    }

    pub fn hbar_part(&self, hpow: u32) -> LocalFunctional {
        LocalFunctional::new(self.rep.hbar_part(hpow))
    }
}

impl PartialEq for LocalFunctional {
    fn eq(&self, other: &Self) -> bool {
        self.lf_equal(other)
    }
}

impl<'a> Add<&'a LocalFunctional> for &'a LocalFunctional {
    type Output = LocalFunctional;
    fn add(self, rhs: &LocalFunctional) -> LocalFunctional {
        LocalFunctional::new(&self.rep + &rhs.rep)
    }
}

impl<'a> Sub<&'a LocalFunctional> for &'a LocalFunctional {
    type Output = LocalFunctional;
    fn sub(self, rhs: &LocalFunctional) -> LocalFunctional {
        LocalFunctional::new(&self.rep - &rhs.rep)
    }
}

impl Neg for &LocalFunctional {
    type Output = LocalFunctional;
    fn neg(self) -> LocalFunctional {
        LocalFunctional::new(-&self.rep)
    }
}

pub fn var_derivative(f: &DiffPoly, color: usize) -> DiffPoly {
    let Some(top) = f.max_order(color) else {
        return DiffPoly::zero(f.dim());
    };
    // Horner: f_0 - dx(f_1 - dx(f_2 - ...))
    let mut acc = f.jet_derivative(color, top);
    for i in (0..top).rev() {
        acc = &f.jet_derivative(color, i) - &acc.dx();
    }
    acc
}

/// Whether `f` lies in the image of `dx`.
pub fn is_total_derivative(f: &DiffPoly) -> bool {
    if f.terms().keys().any(|k| k.mono.arity() == 0) {
        return false;
    }
    (0..f.dim()).all(|a| var_derivative(f, a).is_zero())
}

/// Returns `g` with `dx(g) = f` and no constant term.
///
/// Peels the top variable repeatedly: in a total derivative the largest
/// jet `w = u^b_n` (by order, then color) occurs linearly with a
/// coefficient free of anything above `u^b_{n-1}`; integrating that
/// coefficient in `u^b_{n-1}` removes `w` from the remainder.
pub fn antiderivative(f: &DiffPoly) -> Result<DiffPoly> {
    let not_exact = |r: &DiffPoly| Error::NotExact {
        remainder: format!("{} term(s), e.g. {:?}", r.len(), r.terms().iter().next()),
    };
    if f.terms().keys().any(|k| k.mono.arity() == 0) {
        return Err(not_exact(f));
    }
    let mut rem = f.clone();
    let mut g = DiffPoly::zero(f.dim());
    while let Some(top) = rem.top_var() {
        if top.order == 0 {
            return Err(not_exact(&rem));
        }
        let (coeff, _) = rem.split_linear(top).ok_or_else(|| not_exact(&rem))?;
        let lowered = JetVar::new(top.color, top.order - 1);
        if let Some(v) = coeff.top_var() {
            if v.rank() > lowered.rank() {
                return Err(not_exact(&rem));
            }
        }
        let piece = coeff.integrate_var(lowered);
        rem = &rem - &piece.dx();
        g = &g + &piece;
    }
    Ok(g)
}

/// Canonical representative of `int f dx`.
///
/// Constants are kept; linear terms `u^a_k` with `k >= 1` are dropped. In
/// every other graded piece (fixed h, e, color multiset and differential
/// degree) the density is reduced against the reduced row echelon basis of
/// the image of `dx`, eliminating the lexicographically largest monomials
/// first. For quadratic pieces this leaves `u * u_{2k}`.
pub fn normal_form(f: &DiffPoly) -> DiffPoly {
    let mut groups: BTreeMap<(Vec<usize>, u32), Vec<(&TermKey, &Scalar)>> = BTreeMap::new();
    let mut out = DiffPoly::zero(f.dim());
    for (k, c) in f.terms() {
        match k.mono.arity() {
            0 => out.add_term(k.clone(), c.clone()),
            1 => {
                if k.mono.vars()[0].order == 0 {
                    out.add_term(k.clone(), c.clone());
                }
            }
            _ => groups
                .entry((k.mono.colors(), k.mono.diff_degree()))
                .or_default()
                .push((k, c)),
        }
    }
    for ((colors, degree), terms) in groups {
        let reducer = if degree == 0 {
            None
        } else {
            Some(dx_image_basis(&colors, degree))
        };
        let mut by_grade: BTreeMap<(u32, u32), BTreeMap<Monomial, Scalar>> = BTreeMap::new();
        for (k, c) in terms {
            by_grade
                .entry((k.hpow, k.epow))
                .or_default()
                .insert(k.mono.clone(), c.clone());
        }
        for ((h, e), mut vec) in by_grade {
            if let Some(basis) = &reducer {
                for (pivot, row) in basis.iter() {
                    let Some(c) = vec.get(pivot).cloned() else {
                        continue;
                    };
                    for (m, r) in row {
                        let entry = vec.entry(m.clone()).or_default();
                        *entry -= &c.scale(r);
                    }
                    vec.retain(|_, v| !v.is_zero());
                }
            }
            for (m, c) in vec {
                out.add_term(TermKey::new(h, e, m), c);
            }
        }
    }
    out.mark_clipped(f.is_clipped())
}

type EchelonBasis = Vec<(Monomial, BTreeMap<Monomial, BigRational>)>;

fn basis_cache() -> &'static Mutex<HashMap<(Vec<usize>, u32), Arc<EchelonBasis>>> {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<usize>, u32), Arc<EchelonBasis>>>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Reduced echelon basis of `dx` applied to all monomials with the given
/// colors and differential degree `degree - 1`; pivots are the largest
/// monomials possible.
fn dx_image_basis(colors: &[usize], degree: u32) -> Arc<EchelonBasis> {
    let key = (colors.to_vec(), degree);
    if let Some(b) = basis_cache().lock().expect("cache poisoned").get(&key) {
        return b.clone();
    }
    let dim = colors.iter().max().map_or(1, |m| m + 1);
    let mut rows: Vec<(Monomial, BTreeMap<Monomial, BigRational>)> = Vec::new();
    for m in monomials_with(colors, degree - 1) {
        let image = DiffPoly::from_terms(dim, [(TermKey::new(0, 0, m), Scalar::one())]).dx();
        let mut row: BTreeMap<Monomial, BigRational> = image
            .terms()
            .iter()
            .map(|(k, c)| (k.mono.clone(), c.re().clone()))
            .collect();
        // reduce against existing rows by leading (largest) monomial
        while let Some(lead) = row.keys().next_back().cloned() {
            match rows.iter().find(|(p, _)| *p == lead) {
                Some((_, prow)) => {
                    let c = row[&lead].clone();
                    for (m, r) in prow {
                        let e = row.entry(m.clone()).or_insert_with(BigRational::zero);
                        *e -= &c * r;
                    }
                    row.retain(|_, v| !v.is_zero());
                }
                None => {
                    let inv = BigRational::one() / row[&lead].clone();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    rows.push((lead, row));
                    break;
                }
            }
        }
    }
    // interreduce so each pivot column is zero in every other row
    for i in 0..rows.len() {
        let (pivot, prow) = rows[i].clone();
        for (j, (_, row)) in rows.iter_mut().enumerate() {
            if j == i {
                continue;
            }
            if let Some(c) = row.get(&pivot).cloned() {
                for (m, r) in &prow {
                    let e = row.entry(m.clone()).or_insert_with(BigRational::zero);
                    *e -= &c * r;
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
    }
    let basis = Arc::new(rows);
    basis_cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, basis.clone());
    basis
}

/// All monomials whose sorted colors are `colors` and whose jet orders sum
/// to `degree`.
pub fn monomials_with(colors: &[usize], degree: u32) -> Vec<Monomial> {
    fn rec(
        colors: &[usize],
        idx: usize,
        left: u32,
        min_order: u32,
        cur: &mut Vec<JetVar>,
        out: &mut Vec<Monomial>,
    ) {
        if idx == colors.len() {
            if left == 0 {
                out.push(Monomial::from_vars(cur.clone()));
            }
            return;
        }
        let same_as_prev = idx > 0 && colors[idx] == colors[idx - 1];
        let lo = if same_as_prev { min_order } else { 0 };
        for o in lo..=left {
            cur.push(JetVar::new(colors[idx], o));
            rec(colors, idx + 1, left - o, o, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(colors, 0, degree, 0, &mut Vec::new(), &mut out);
    out
}
