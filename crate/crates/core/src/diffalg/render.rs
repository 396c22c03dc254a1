//! Plain-text and LaTeX rendering of differential polynomials.
//!
//! Plain grammar (also accepted by [`super::parse`]):
//! terms joined by ` + ` / ` - `, each `coeff*h^i*e^j*jet^m*...`, with `h`
//! for the genus parameter, `e` for the Hodge parameter, jets `u`, `u_k`
//! when there is one color and `u1`, `u2_k`, ... otherwise. Coefficients
//! are `p/q`, `i`, `3*i` or `(p/q+r/s*i)`.

use num_traits::{One, Signed, Zero};

use super::jet::{JetVar, TermKey};
use super::poly::DiffPoly;
use crate::scalar::Scalar;

pub fn jet_name(v: JetVar, dim: usize) -> String {
    let base = if dim == 1 {
        "u".to_string()
    } else {
        format!("u{}", v.color + 1)
    };
    if v.order == 0 {
        base
    } else {
        format!("{base}_{}", v.order)
    }
}

fn latex_jet(v: JetVar, dim: usize, power: u32) -> String {
    let mut s = "u".to_string();
    if dim > 1 {
        s.push_str(&format!("^{{{}}}", v.color + 1));
    }
    if v.order > 0 {
        s.push_str(&format!("_{{{}}}", v.order));
    }
    if power > 1 {
        if dim > 1 {
            s = format!("({s})^{{{power}}}");
        } else {
            s.push_str(&format!("^{{{power}}}"));
        }
    }
    s
}

/// Splits a coefficient into a sign and a magnitude that reads naturally
/// after ` + ` / ` - `.
fn sign_split(c: &Scalar) -> (bool, Scalar) {
    let negative = if c.re().is_zero() {
        c.im().is_negative()
    } else {
        c.is_real() && c.re().is_negative()
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn plain_factors(k: &TermKey, dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    match k.hpow {
        0 => {}
        1 => out.push("h".to_string()),
        n => out.push(format!("h^{n}")),
    }
    match k.epow {
        0 => {}
        1 => out.push("e".to_string()),
        n => out.push(format!("e^{n}")),
    }
    for (v, m) in k.mono.powers() {
        let name = jet_name(v, dim);
        out.push(if m == 1 { name } else { format!("{name}^{m}") });
    }
    out
}

pub fn to_plain(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (idx, (k, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = sign_split(c);
        match (idx, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let mut parts = plain_factors(k, p.dim());
        if !mag.is_one() || parts.is_empty() {
            parts.insert(0, mag.to_string());
        }
        s.push_str(&parts.join("*"));
    }
    s
}

fn latex_rational(r: &num_rational::BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn latex_scalar(c: &Scalar) -> String {
    let im = |r: &num_rational::BigRational| {
        if r.is_one() {
            "i".to_string()
        } else {
            format!("{} i", latex_rational(r))
        }
    };
    match (c.re().is_zero(), c.im().is_zero()) {
        (_, true) => latex_rational(c.re()),
        (true, false) => im(c.im()),
        (false, false) => {
            let sign = if c.im().is_negative() { "-" } else { "+" };
            format!("\\left({} {} {}\\right)", latex_rational(c.re()), sign, im(&c.im().abs()))
        }
    }
}

pub fn to_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (idx, (k, c)) in p.terms().iter().enumerate() {
        let (neg, mag) = sign_split(c);
        match (idx, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let mut parts = Vec::new();
        match k.hpow {
            0 => {}
            1 => parts.push("\\hbar".to_string()),
            n => parts.push(format!("\\hbar^{{{n}}}")),
        }
        match k.epow {
            0 => {}
            1 => parts.push("\\varepsilon".to_string()),
            n => parts.push(format!("\\varepsilon^{{{n}}}")),
        }
        for (v, m) in k.mono.powers() {
            parts.push(latex_jet(v, p.dim(), m));
        }
        if !mag.is_one() || parts.is_empty() {
            parts.insert(0, latex_scalar(&mag));
        }
        s.push_str(&parts.join(" "));
    }
    s
}

/// `\int (...) dx` around the LaTeX density.
pub fn functional_latex(p: &DiffPoly) -> String {
    format!("\\int \\left({}\\right) dx", to_latex(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(o: u32) -> DiffPoly {
        DiffPoly::var(1, 0, o)
    }

    #[test]
    fn kdv_hamiltonian_renders() {
        let p = &(&(&u(0) * &u(0)) * &u(0)).scale(&Scalar::frac(1, 6))
            + &(&u(0) * &u(2)).shift(1, 0).scale(&Scalar::frac(1, 24));
        assert_eq!(to_plain(&p), "1/6*u^3 + 1/24*h*u*u_2");
        assert_eq!(to_latex(&p), "\\frac{1}{6} u^{3} + \\frac{1}{24} \\hbar u u_{2}");
    }

    #[test]
    fn signs_and_colors() {
        let a = DiffPoly::var(2, 0, 0);
        let b = DiffPoly::var(2, 1, 3);
        let p = &(-&a) - &(&b * &b).shift(0, 2);
        assert_eq!(to_plain(&p), "-u1 - e^2*u2_3^2");
        assert_eq!(to_plain(&DiffPoly::zero(2)), "0");
        assert_eq!(to_plain(&DiffPoly::constant(1, -Scalar::one())), "-1");
        let z = u(1).scale(&Scalar::new(
            crate::scalar::rational(1, 2),
            crate::scalar::rational(3, 1),
        ));
        assert_eq!(to_plain(&z), "(1/2+3*i)*u_1");
        assert_eq!(to_plain(&u(0).scale(&-Scalar::i())), "-i*u");
    }
}
