use std::fmt::Write as _;
use std::path::PathBuf;

use drh_core::diffalg::render::{functional_latex, jet_name};
use drh_core::diffalg::{to_latex, to_plain};
use drh_core::hierarchy::string_solution::TaylorPoly;
use drh_core::hierarchy::TaylorSolution;
use drh_core::DiffPoly;
use serde_json::{json, Value};

pub fn emit(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn poly_json(p: &DiffPoly) -> Value {
    json!({
        "plain": to_plain(p),
        "poly": serde_json::to_value(p).expect("polynomial serializes"),
    })
}

pub fn functional_text(p: &DiffPoly, latex: bool) -> String {
    if latex {
        functional_latex(p)
    } else {
        to_plain(p)
    }
}

/// `u^c_{t(alpha,d)}`.
pub fn flow_lhs(color: usize, dim: usize, alpha: usize, d: u32, latex: bool) -> String {
    if latex {
        let up = if dim > 1 { format!("^{{{}}}", color + 1) } else { String::new() };
        format!("\\frac{{\\partial u{up}}}{{\\partial t^{{{}}}_{{{d}}}}}", alpha + 1)
    } else {
        format!("{}_t({},{d})", jet_name(drh_core::JetVar::new(color, 0), dim), alpha + 1)
    }
}

pub fn flow_rhs(p: &DiffPoly, latex: bool) -> String {
    if latex {
        to_latex(p)
    } else {
        to_plain(p)
    }
}

fn factors(t: &[u32], x: u32, h: u32, e: u32, times: &[(usize, u32)]) -> Vec<String> {
    let pow = |base: String, k: u32| if k == 1 { base } else { format!("{base}^{k}") };
    let mut parts = Vec::new();
    if h > 0 {
        parts.push(pow("h".into(), h));
    }
    if e > 0 {
        parts.push(pow("e".into(), e));
    }
    for (j, &k) in t.iter().enumerate() {
        if k > 0 {
            let (a, d) = times[j];
            parts.push(pow(format!("t{}_{d}", a + 1), k));
        }
    }
    if x > 0 {
        parts.push(pow("x".into(), x));
    }
    parts
}

/// Terms in stable order, coefficients as `p/q`.
pub fn taylor_plain(p: &TaylorPoly, times: &[(usize, u32)]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (idx, (t, x, h, e, c)) in p.iter().enumerate() {
        let parts = factors(t, x, h, e, times);
        let negative = c.is_negative_real();
        let mag = if negative { -c } else { c.clone() };
        match (idx, negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let mut all = Vec::new();
        if !mag.is_one() || parts.is_empty() {
            all.push(mag.to_string());
        }
        all.extend(parts);
        s.push_str(&all.join("*"));
    }
    s
}

pub fn taylor_json(sol: &TaylorSolution) -> Value {
    let comps: Vec<Value> = sol
        .components
        .iter()
        .map(|p| {
            Value::Array(
                p.iter()
                    .map(|(t, x, h, e, c)| json!({"t": t, "x": x, "h": h, "e": e, "coeff": c}))
                    .collect(),
            )
        })
        .collect();
    json!({
        "times": sol.times.iter().map(|(a, d)| json!([a + 1, d])).collect::<Vec<_>>(),
        "order": sol.order,
        "components": comps,
    })
}

pub fn taylor_text(sol: &TaylorSolution) -> String {
    let mut s = String::new();
    for (c, p) in sol.components.iter().enumerate() {
        let name = jet_name(drh_core::JetVar::new(c, 0), sol.dim);
        let _ = writeln!(s, "{name} = {}", taylor_plain(p, &sol.times));
    }
    s
}
