//! Checks of the structural identities of a built hierarchy, each on the
//! window where the truncated data determines both sides.

use super::report::{Check, Report, Window};
use super::{color_multisets, metric_linear, metric_quadratic, multiset_weight, Hierarchy};
use crate::cohft::{DrOracle, OracleKey, Query};
use crate::diffalg::{to_plain, DiffPoly, JetVar, LocalFunctional, Truncation};
use crate::error::{Error, Result};
use crate::fourier::p_bracket;
use crate::poisson::bracket;
use crate::scalar::Scalar;

fn label(alpha: usize, d: u32) -> String {
    format!("g({},{d})", alpha + 1)
}

/// Compares two functionals on a window; the witness is the normal form
/// of the difference.
fn compare(
    name: String,
    property: &str,
    lhs: &LocalFunctional,
    rhs: &LocalFunctional,
    window: Window,
) -> Check {
    let diff = &lhs.restrict(window.genus_max, window.deg_max)
        - &rhs.restrict(window.genus_max, window.deg_max);
    let passed = diff.is_zero();
    Check {
        name,
        property: property.to_string(),
        window,
        passed,
        witness: (!passed).then(|| to_plain(&diff.normal_form())),
    }
}

fn gbar_window(h: &Hierarchy) -> Option<u32> {
    h.gbar.as_ref().map(|b| b.genus_complete)
}

/// `{gbar_a, gbar_b} = 0` for each pair, computed both on densities and on
/// mode series, plus the grading audit of the density bracket.
pub fn verify_commutativity(h: &Hierarchy, pairs: &[((usize, u32), (usize, u32))]) -> Result<Report> {
    let mut report = Report::default();
    let eta_inv = h.spec().eta_inverse();
    for &(a, b) in pairs {
        let (Some(ba), Some(bb)) = (h.hams.get(&a), h.hams.get(&b)) else {
            continue;
        };
        let window = Window {
            genus_max: ba.genus_complete.min(bb.genus_complete),
            deg_max: h.trunc.deg_max.saturating_sub(1),
        };
        let t = Truncation::new(window.genus_max, window.deg_max, h.trunc.eps_max);
        let name = format!("commute {} {}", label(a.0, a.1), label(b.0, b.1));

        let br = bracket(&ba.functional, &bb.functional, &h.op, &t)?;
        let zero = LocalFunctional::zero(h.dim());
        report.push(compare(name.clone(), "bracket vanishes", &br, &zero, window));

        let graded = br.rep().has_extended_degree(1);
        report.push(Check {
            name: name.clone(),
            property: "bracket density has degree 2i+1 at h^i".into(),
            window,
            passed: graded,
            witness: (!graded).then(|| to_plain(br.rep())),
        });

        let keep = |s: &crate::fourier::BSeries| {
            let mut out = crate::fourier::BSeries::zero(s.dim());
            for (k, c) in s.terms() {
                if k.hpow <= window.genus_max && k.mono.arity() <= window.deg_max as usize + 1 {
                    out.add_term(k.clone(), c.clone());
                }
            }
            out
        };
        let pb = p_bracket(&keep(&ba.series), &keep(&bb.series), &eta_inv)?;
        let mut inside = crate::fourier::BSeries::zero(h.dim());
        for (k, c) in pb.terms() {
            if k.hpow <= window.genus_max && k.mono.arity() <= window.deg_max as usize {
                inside.add_term(k.clone(), c.clone());
            }
        }
        let residue = inside.canonical();
        report.push(Check {
            name,
            property: "mode-series bracket vanishes".into(),
            window,
            passed: residue.is_empty(),
            witness: residue.iter().next().map(|(k, v)| format!("{k:?}: {v:?}")),
        });
    }
    Ok(report)
}

/// All unordered pairs of built Hamiltonians.
pub fn all_pairs(h: &Hierarchy) -> Vec<((usize, u32), (usize, u32))> {
    let keys: Vec<_> = h.hams.keys().copied().collect();
    let mut out = Vec::new();
    for i in 0..keys.len() {
        for j in i..keys.len() {
            out.push((keys[i], keys[j]));
        }
    }
    out
}

/// `gbar_{unit,0} = 1/2 int eta_{ab} u^a u^b dx`.
pub fn verify_unit_hamiltonian(h: &Hierarchy) -> Report {
    let mut report = Report::default();
    let unit = h.spec().unit;
    if let Some(b) = h.hams.get(&(unit, 0)) {
        let window = Window {
            genus_max: b.genus_complete,
            deg_max: h.trunc.deg_max,
        };
        report.push(compare(
            label(unit, 0),
            "unit Hamiltonian is half the metric",
            &b.functional,
            &metric_quadratic(h.spec()),
            window,
        ));
    }
    report
}

/// `d gbar_{a,d} / d u^unit = gbar_{a,d-1}`, and `int eta_{a mu} u^mu dx` for `d = 0`.
pub fn verify_string(h: &Hierarchy) -> Report {
    let mut report = Report::default();
    let unit = h.spec().unit;
    for (&(alpha, d), b) in &h.hams {
        let lhs = b.functional.partial_u(unit);
        let deg_max = h.trunc.deg_max.saturating_sub(1);
        let (rhs, genus_max) = if d == 0 {
            (metric_linear(h.spec(), alpha), b.genus_complete)
        } else {
            match h.hams.get(&(alpha, d - 1)) {
                Some(prev) => (prev.functional.clone(), b.genus_complete.min(prev.genus_complete)),
                None => continue,
            }
        };
        report.push(compare(
            format!("string {}", label(alpha, d)),
            "unit derivative lowers d",
            &lhs,
            &rhs,
            Window { genus_max, deg_max },
        ));
    }
    report
}

/// `d gbar / d u^a = gbar_{a,0}`.
pub fn verify_first_derivative(h: &Hierarchy) -> Report {
    let mut report = Report::default();
    let (Some(gbar), Some(gg)) = (&h.gbar, gbar_window(h)) else {
        return report;
    };
    for alpha in 0..h.dim() {
        let Some(b) = h.hams.get(&(alpha, 0)) else { continue };
        report.push(compare(
            format!("first derivative color {}", alpha + 1),
            "derivative of gbar is g(a,0)",
            &gbar.functional.partial_u(alpha),
            &b.functional,
            Window {
                genus_max: gg.min(b.genus_complete),
                deg_max: h.trunc.deg_max.saturating_sub(1),
            },
        ));
    }
    report
}

/// `O = 2 h d/dh - 2 + sum u^c_n d/du^c_n`.
pub fn dilaton_operator(f: &DiffPoly) -> DiffPoly {
    f.weighted(|k| 2 * k.hpow as i64 - 2 + k.mono.arity() as i64)
}

/// `O gbar = gbar_{unit,1}`.
pub fn verify_dilaton(h: &Hierarchy) -> Report {
    let mut report = Report::default();
    let unit = h.spec().unit;
    let (Some(gbar), Some(gg)) = (&h.gbar, gbar_window(h)) else {
        return report;
    };
    let Some(b) = h.hams.get(&(unit, 1)) else {
        return report;
    };
    report.push(compare(
        "dilaton".into(),
        "O gbar equals the unit d=1 Hamiltonian",
        &LocalFunctional::new(dilaton_operator(gbar.functional.rep())),
        &b.functional,
        Window {
            genus_max: gg.min(b.genus_complete),
            deg_max: h.trunc.deg_max,
        },
    ));
    report
}

/// `Omega_{a,d}(u) = sum_n 1/n! <tau_d(e_a) tau_0(e_b1) .. tau_0(e_bn)>_0 u^b1 .. u^bn`
/// through arity `deg_max`, read from the genus-zero oracle data.
pub fn omega_genus0(oracle: &dyn DrOracle, alpha: usize, d: u32, deg_max: u32) -> Result<DiffPoly> {
    let dim = oracle.spec().dim;
    let mut out = DiffPoly::zero(dim);
    let mut missing = Vec::new();
    for n in 2..=deg_max as usize {
        for colors in color_multisets(dim, n) {
            let key = OracleKey::new(0, d, alpha, colors.clone());
            match oracle.dr_poly(&key) {
                Query::Unknown => missing.push(key),
                Query::Known(p) => {
                    if !p.is_homogeneous(0) {
                        return Err(Error::OracleViolation {
                            key,
                            reason: "genus-zero answer is not constant".into(),
                        });
                    }
                    let Some(c) = p.terms().get(&(0, vec![0; n])) else { continue };
                    let vars = colors.iter().map(|&c| JetVar::new(c, 0)).collect();
                    let coef = Scalar::from_rational(c * multiset_weight(&colors));
                    out.add_term(crate::diffalg::TermKey::new(0, 0, crate::diffalg::Monomial::from_vars(vars)), coef);
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingOracleData { keys: missing });
    }
    Ok(out)
}

/// `gbar_{a,d}|_{h=0} = int d Omega_{a,d+1} / d u^unit dx`.
pub fn verify_genus0(h: &Hierarchy) -> Result<Report> {
    let mut report = Report::default();
    let unit = h.spec().unit;
    let deg_max = h.trunc.deg_max;
    for (&(alpha, d), b) in &h.hams {
        let omega = omega_genus0(h.oracle.as_ref(), alpha, d + 1, deg_max + 1)?;
        let rhs = LocalFunctional::new(omega.jet_derivative(unit, 0));
        report.push(compare(
            format!("genus zero {}", label(alpha, d)),
            "genus-zero part is the integrated two-point function",
            &b.functional.hbar_part(0),
            &rhs,
            Window { genus_max: 0, deg_max },
        ));
    }
    Ok(report)
}

/// Every verifier except the string solution, with all pairs of built
/// Hamiltonians for commutativity.
pub fn verify_all(h: &Hierarchy) -> Result<Report> {
    let mut r = verify_unit_hamiltonian(h);
    r.extend(verify_string(h));
    r.extend(verify_first_derivative(h));
    r.extend(verify_dilaton(h));
    r.extend(verify_genus0(h)?);
    r.extend(verify_commutativity(h, &all_pairs(h))?);
    Ok(r)
}
