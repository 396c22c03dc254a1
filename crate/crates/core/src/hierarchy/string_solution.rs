//! Taylor expansion in the times of the solution with initial value
//! `u^a = delta_{a,unit} x`.
//!
//! With `E = sum_tau t_tau d/dt_tau`, the flows give `E u = sum_tau t_tau f_tau(u)`,
//! so the part of `u` of total t-degree `k` is
//! `u_k = (1/k) sum_tau t_tau [f_tau(u_0 + .. + u_{k-1})]_{k-1}`.

use std::collections::BTreeMap;

use super::report::{Check, Report, Window};
use super::Hierarchy;
use crate::cohft::Query;
use crate::diffalg::{DiffPoly, Truncation};
use crate::error::{Error, Result};
use crate::hierarchy::color_multisets;
use crate::scalar::Scalar;

/// Guards against runaway growth of the x-degree.
pub const DEFAULT_X_CAP: u32 = 256;

/// Exponents of `x`, `h`, `e` and of each retained time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Mono {
    t: Vec<u32>,
    x: u32,
    h: u32,
    e: u32,
}

/// Polynomial in `x`, `h`, `e` and the retained times.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct TaylorPoly {
    terms: BTreeMap<Mono, Scalar>,
}

struct Caps {
    t: u32,
    h: u32,
    e: u32,
    x: u32,
}

impl TaylorPoly {
    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&mut self, other: &TaylorPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale(&self, c: &Scalar) -> TaylorPoly {
        let mut out = TaylorPoly::default();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    fn mul(&self, other: &TaylorPoly, caps: &Caps) -> Result<TaylorPoly> {
        let mut out = TaylorPoly::default();
        for (a, ca) in &self.terms {
            let ta: u32 = a.t.iter().sum();
            for (b, cb) in &other.terms {
                let (h, e) = (a.h + b.h, a.e + b.e);
                if h > caps.h || e > caps.e || ta + b.t.iter().sum::<u32>() > caps.t {
                    continue;
                }
                let x = a.x + b.x;
                if x > caps.x {
                    return Err(Error::DegreeCap(caps.x));
                }
                let t = a.t.iter().zip(&b.t).map(|(p, q)| p + q).collect();
                out.add_term(Mono { t, x, h, e }, ca * cb);
            }
        }
        Ok(out)
    }

    fn dx(&self) -> TaylorPoly {
        let mut out = TaylorPoly::default();
        for (m, c) in &self.terms {
            if m.x > 0 {
                let mut n = m.clone();
                n.x -= 1;
                out.add_term(n, c * &Scalar::from_int(m.x as i64));
            }
        }
        out
    }

    /// Derivative in the time with index `j`.
    pub fn dt(&self, j: usize) -> TaylorPoly {
        let mut out = TaylorPoly::default();
        for (m, c) in &self.terms {
            if m.t[j] > 0 {
                let mut n = m.clone();
                n.t[j] -= 1;
                out.add_term(n, c * &Scalar::from_int(m.t[j] as i64));
            }
        }
        out
    }

    fn times_t(&self, j: usize) -> TaylorPoly {
        let mut out = TaylorPoly::default();
        for (m, c) in &self.terms {
            let mut n = m.clone();
            n.t[j] += 1;
            out.add_term(n, c.clone());
        }
        out
    }

    /// The part of total t-degree `k`.
    fn t_degree(&self, k: u32) -> TaylorPoly {
        self.filter(|m| m.t.iter().sum::<u32>() == k)
    }

    fn up_to(&self, k: u32) -> TaylorPoly {
        self.filter(|m| m.t.iter().sum::<u32>() <= k)
    }

    fn filter(&self, keep: impl Fn(&Mono) -> bool) -> TaylorPoly {
        TaylorPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `x^x h^h e^e prod t_j^{t_j}`.
    pub fn coeff(&self, t: &[u32], x: u32, h: u32, e: u32) -> Scalar {
        let m = Mono {
            t: t.to_vec(),
            x,
            h,
            e,
        };
        self.terms.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(time exponents, x, h, e, coefficient)`.
    pub fn iter(&self) -> impl Iterator<Item = (&[u32], u32, u32, u32, &Scalar)> {
        self.terms.iter().map(|(m, c)| (m.t.as_slice(), m.x, m.h, m.e, c))
    }
}

/// `f(u)` with `u^c_n` read as `d^n u^c / dx^n`.
fn evaluate(f: &DiffPoly, u: &[TaylorPoly], caps: &Caps, ntimes: usize) -> Result<TaylorPoly> {
    let mut jets: BTreeMap<(usize, u32), TaylorPoly> = BTreeMap::new();
    let mut out = TaylorPoly::default();
    for (k, c) in f.terms() {
        if k.hpow > caps.h || k.epow > caps.e {
            continue;
        }
        let mut term = TaylorPoly::default();
        term.add_term(
            Mono {
                t: vec![0; ntimes],
                x: 0,
                h: k.hpow,
                e: k.epow,
            },
            c.clone(),
        );
        for v in k.mono.vars() {
            jets.entry((v.color, v.order)).or_insert_with(|| {
                let mut j = u[v.color].clone();
                for _ in 0..v.order {
                    j = j.dx();
                }
                j
            });
            term = term.mul(&jets[&(v.color, v.order)], caps)?;
            if term.is_zero() {
                break;
            }
        }
        out.add(&term);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TaylorSolution {
    pub dim: usize,
    pub unit: usize,
    /// Retained times `(color, d)`; index `j` in a monomial refers to `times[j]`.
    pub times: Vec<(usize, u32)>,
    pub order: u32,
    pub trunc: Truncation,
    pub flows: Vec<Vec<DiffPoly>>,
    pub components: Vec<TaylorPoly>,
    x_cap: u32,
}

/// Times whose Hamiltonians are complete: all genera up to the cap are
/// present, the oracle reports zero for every key one arity beyond the
/// cap, and every lower `d` of the same color is retained as well.
pub fn default_times(h: &Hierarchy) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for alpha in 0..h.dim() {
        for d in 0..=h.d_max {
            if !complete(h, alpha, d) {
                break;
            }
            out.push((alpha, d));
        }
    }
    out
}

fn complete(h: &Hierarchy, alpha: usize, d: u32) -> bool {
    if h.genus_complete(alpha, d) != Some(h.trunc.genus_max) {
        return false;
    }
    let n = h.trunc.deg_max as usize + 1;
    (0..=h.trunc.genus_max).all(|g| {
        color_multisets(h.dim(), n).into_iter().all(|colors| {
            let key = crate::cohft::OracleKey::new(g, d, alpha, colors);
            matches!(h.oracle.dr_poly(&key), Query::Known(p) if p.is_zero_mod_sum())
        })
    })
}

/// Builds the solution through total t-degree `order` over `times`
/// (default: [`default_times`]).
pub fn string_solution(h: &Hierarchy, order: u32, times: Option<&[(usize, u32)]>) -> Result<TaylorSolution> {
    string_solution_capped(h, order, times, DEFAULT_X_CAP)
}

pub fn string_solution_capped(
    h: &Hierarchy,
    order: u32,
    times: Option<&[(usize, u32)]>,
    x_cap: u32,
) -> Result<TaylorSolution> {
    let times: Vec<(usize, u32)> = match times {
        Some(t) => t.to_vec(),
        None => default_times(h),
    };
    let unit = h.spec().unit;
    if !times.contains(&(unit, 0)) {
        return Err(Error::Invalid("the unit time t(unit,0) must be retained".into()));
    }
    let mut flows = Vec::with_capacity(times.len());
    for &(alpha, d) in &times {
        flows.push(h.dr_flow(alpha, d)?);
    }
    let nt = times.len();
    let dim = h.dim();
    let mut u: Vec<TaylorPoly> = vec![TaylorPoly::default(); dim];
    u[unit].add_term(
        Mono {
            t: vec![0; nt],
            x: 1,
            h: 0,
            e: 0,
        },
        Scalar::one(),
    );
    for k in 1..=order {
        let caps = Caps {
            t: k - 1,
            h: h.trunc.genus_max,
            e: h.trunc.eps_max,
            x: x_cap,
        };
        let mut next = vec![TaylorPoly::default(); dim];
        for (j, rhs) in flows.iter().enumerate() {
            for (c, f) in rhs.iter().enumerate() {
                let val = evaluate(f, &u, &caps, nt)?.t_degree(k - 1);
                next[c].add(&val.times_t(j));
            }
        }
        let inv = Scalar::frac(1, k as i64);
        for c in 0..dim {
            u[c].add(&next[c].scale(&inv));
        }
    }
    Ok(TaylorSolution {
        dim,
        unit,
        times,
        order,
        trunc: h.trunc,
        flows,
        components: u,
        x_cap,
    })
}

impl TaylorSolution {
    pub fn time_index(&self, alpha: usize, d: u32) -> Option<usize> {
        self.times.iter().position(|&t| t == (alpha, d))
    }
}

/// Each retained flow through t-degree `order - 1`, and
/// `du/dt(unit,0) = sum t(mu,d+1) du/dt(mu,d) + delta_{a,unit}`.
pub fn verify_string_solution(sol: &TaylorSolution) -> Result<Report> {
    let mut report = Report::default();
    let top = sol.order.saturating_sub(1);
    let window = Window {
        genus_max: sol.trunc.genus_max,
        deg_max: sol.trunc.deg_max,
    };
    let caps = Caps {
        t: top,
        h: sol.trunc.genus_max,
        e: sol.trunc.eps_max,
        x: sol.x_cap,
    };
    let nt = sol.times.len();
    for (j, &(alpha, d)) in sol.times.iter().enumerate() {
        let mut residue = TaylorPoly::default();
        for c in 0..sol.dim {
            let lhs = sol.components[c].dt(j).up_to(top);
            let rhs = evaluate(&sol.flows[j][c], &sol.components, &caps, nt)?.up_to(top);
            residue.add(&lhs);
            residue.add(&rhs.scale(&-Scalar::one()));
        }
        report.push(Check {
            name: format!("string solution flow t({},{d})", alpha + 1),
            property: "solution satisfies the flow".into(),
            window,
            passed: residue.is_zero(),
            witness: describe(&residue, sol),
        });
    }
    let u0 = sol.time_index(sol.unit, 0).expect("unit time retained");
    for c in 0..sol.dim {
        let mut residue = sol.components[c].dt(u0).up_to(top);
        for (j, &(mu, d)) in sol.times.iter().enumerate() {
            if let Some(next) = sol.time_index(mu, d + 1) {
                let term = sol.components[c].dt(j).times_t(next).up_to(top);
                residue.add(&term.scale(&-Scalar::one()));
            }
        }
        if c == sol.unit {
            residue.add_term(
                Mono {
                    t: vec![0; nt],
                    x: 0,
                    h: 0,
                    e: 0,
                },
                -Scalar::one(),
            );
        }
        report.push(Check {
            name: format!("string solution color {}", c + 1),
            property: "unit time derivative shifts the descendants".into(),
            window,
            passed: residue.is_zero(),
            witness: describe(&residue, sol),
        });
    }
    Ok(report)
}

fn describe(p: &TaylorPoly, sol: &TaylorSolution) -> Option<String> {
    let (m, c) = p.terms.iter().next()?;
    let mut parts = vec![format!("{c}")];
    for (j, &e) in m.t.iter().enumerate() {
        if e > 0 {
            let (a, d) = sol.times[j];
            parts.push(format!("t({},{d})^{e}", a + 1));
        }
    }
    if m.x > 0 {
        parts.push(format!("x^{}", m.x));
    }
    if m.h > 0 {
        parts.push(format!("h^{}", m.h));
    }
    if m.e > 0 {
        parts.push(format!("e^{}", m.e));
    }
    Some(parts.join("*"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohft::trivial_oracle;
    use crate::hierarchy::BuildMode;
    use std::sync::Arc;

    fn trivial() -> Hierarchy {
        Hierarchy::build(
            Arc::new(trivial_oracle()),
            Truncation::genus_deg(1, 3),
            1,
            BuildMode::Windowed,
        )
        .unwrap()
    }

    #[test]
    fn low_order_coefficients() {
        let h = trivial();
        let s = string_solution(&h, 1, None).unwrap();
        assert_eq!(s.times, vec![(0, 0), (0, 1)]);
        let u = &s.components[0];
        assert_eq!(u.coeff(&[0, 0], 1, 0, 0), Scalar::one());
        assert_eq!(u.coeff(&[1, 0], 0, 0, 0), Scalar::one());
        assert_eq!(u.coeff(&[0, 1], 1, 0, 0), Scalar::one());
        assert_eq!(u.len(), 3);
        let s0 = string_solution(&h, 0, None).unwrap();
        assert_eq!(s0.components[0].len(), 1);
    }

    #[test]
    fn identity_holds() {
        let h = trivial();
        let s = string_solution(&h, 4, None).unwrap();
        let r = verify_string_solution(&s).unwrap();
        assert!(r.all_passed(), "{}", r.to_plain());
    }

    #[test]
    fn incomplete_times_are_excluded() {
        let h = Hierarchy::build(
            Arc::new(trivial_oracle()),
            Truncation::genus_deg(0, 3),
            3,
            BuildMode::Windowed,
        )
        .unwrap();
        assert_eq!(default_times(&h), vec![(0, 0), (0, 1)]);
        // forcing an arity-truncated time breaks the identity
        let s = string_solution(&h, 3, Some(&[(0, 0), (0, 1), (0, 2)])).unwrap();
        assert!(!verify_string_solution(&s).unwrap().all_passed());
    }

    #[test]
    fn x_cap_is_enforced() {
        let h = trivial();
        assert!(matches!(
            string_solution_capped(&h, 4, None, 0),
            Err(Error::DegreeCap(0))
        ));
    }
}
