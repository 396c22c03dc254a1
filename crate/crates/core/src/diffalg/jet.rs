use std::cmp::Ordering;
use std::fmt;

/// The jet variable `u^color_order`. Colors are zero-based internally and
/// rendered one-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub color: usize,
    pub order: u32,
}

impl JetVar {
    pub fn new(color: usize, order: u32) -> Self {
        JetVar { color, order }
    }

    /// `u^color_{order+1}`.
    pub fn raised(self) -> Self {
        JetVar {
            order: self.order + 1,
            ..self
        }
    }

    /// Ranking used to find the top variable of a polynomial: order first,
    /// then color.
    pub fn rank(self) -> (u32, usize) {
        (self.order, self.color)
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}_{}", self.color + 1, self.order)
    }
}

/// A monomial in jet variables, kept as a sorted multiset.
///
/// Ordered by arity first, then lexicographically on the sorted variables.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<JetVar>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_vars(mut vars: Vec<JetVar>) -> Self {
        vars.sort_unstable();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[JetVar] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Sum of jet orders.
    pub fn diff_degree(&self) -> u32 {
        self.0.iter().map(|v| v.order).sum()
    }

    pub fn multiplicity(&self, var: JetVar) -> usize {
        self.0.iter().filter(|&&v| v == var).count()
    }

    pub fn contains(&self, var: JetVar) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                out.push(self.0[i]);
                i += 1;
            } else {
                out.push(other.0[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes one occurrence of `var`; `None` if absent.
    pub fn remove_one(&self, var: JetVar) -> Option<Monomial> {
        let pos = self.0.binary_search(&var).ok()?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Monomial(v))
    }

    pub fn with_var(&self, var: JetVar) -> Monomial {
        let mut v = self.0.clone();
        let pos = v.binary_search(&var).unwrap_or_else(|p| p);
        v.insert(pos, var);
        Monomial(v)
    }

    /// Replaces the occurrence at `idx` by its raised variable.
    pub fn raise_at(&self, idx: usize) -> Monomial {
        let mut v = self.0.clone();
        v[idx] = v[idx].raised();
        v.sort_unstable();
        Monomial(v)
    }

    pub fn max_var(&self) -> Option<JetVar> {
        self.0.iter().copied().max_by_key(|v| v.rank())
    }

    /// Distinct variables with their multiplicities, in sorted order.
    pub fn powers(&self) -> Vec<(JetVar, u32)> {
        let mut out: Vec<(JetVar, u32)> = Vec::new();
        for &v in &self.0 {
            match out.last_mut() {
                Some((w, k)) if *w == v => *k += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn colors(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.0.iter().map(|v| v.color).collect();
        c.sort_unstable();
        c
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Key of one term of a differential polynomial: `h^hpow e^epow * mono`.
///
/// The derived order is the canonical term order
/// `(hpow, epow, arity, sorted jets)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TermKey {
    pub hpow: u32,
    pub epow: u32,
    pub mono: Monomial,
}

impl TermKey {
    pub fn new(hpow: u32, epow: u32, mono: Monomial) -> Self {
        TermKey { hpow, epow, mono }
    }
}
