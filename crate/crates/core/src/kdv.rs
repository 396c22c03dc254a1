//! The KdV hierarchy `u_t = u u_x + h/12 u_xxx` from the Lenard recursion,
//! built independently of any intersection data.
//!
//! The classical pair for `v_t = 6 v v_x + v_xxx` is `K1 = dx` and
//! `K2 = dx^3 + 4 v dx + 2 v_x`. With `u = 6 v` and time rescaled so that
//! the dispersive term carries `h/12`, the second operator becomes
//! `K2 = h/12 dx^3 + 2/3 u dx + 1/3 u_x`; then `K2 u = u u_x + h/12 u_xxx`
//! is the flow of `h_1`.

use crate::diffalg::{antiderivative, DiffPoly, JetVar, LocalFunctional, Truncation};
use crate::error::{Error, Result};
use crate::poisson::HamOperator;
use crate::scalar::{factorial, Scalar};

pub const DEFAULT_DEPTH: u32 = 5;

/// `dx`.
pub fn first_structure() -> HamOperator {
    let mut k = HamOperator::zero(1);
    k.push(0, 0, DiffPoly::constant(1, Scalar::one()), 1);
    k
}

/// `h/12 dx^3 + 2/3 u dx + 1/3 u_x`.
pub fn second_structure() -> HamOperator {
    let mut k = HamOperator::zero(1);
    k.push(0, 0, DiffPoly::monomial(1, Scalar::frac(1, 12), 1, 0, vec![]), 3);
    k.push(0, 0, DiffPoly::monomial(1, Scalar::frac(2, 3), 0, 0, vec![JetVar::new(0, 0)]), 1);
    k.push(0, 0, DiffPoly::monomial(1, Scalar::frac(1, 3), 0, 0, vec![JetVar::new(0, 1)]), 0);
    k
}

/// A functional with the given variational derivative: for a gradient
/// `w` with arity-`n` parts `w_n`, `int sum_n u w_n / (n + 1) dx`.
fn from_gradient(w: &DiffPoly) -> LocalFunctional {
    let u = DiffPoly::var(1, 0, 0);
    let scaled = w.map_coeffs(|k, c| c * &Scalar::frac(1, k.mono.arity() as i64 + 1));
    LocalFunctional::new(&u * &scaled).normalized()
}

/// `h_{d+1}` from `h_d`, where `d` is the index of `h`: solves
/// `dx delta h_{d+1} = c K2 delta h_d` with `c` fixed by the leading term
/// `u^{d+3}/(d+3)!`.
pub fn lenard_next(h: &LocalFunctional, d: u32) -> Result<LocalFunctional> {
    let unbounded = Truncation::unbounded();
    let r = second_structure().apply(&h.var_gradient(), &unbounded)?;
    let w = antiderivative(&r[0])?;
    let next = from_gradient(&w);
    let lead = DiffPoly::monomial(1, Scalar::one(), 0, 0, vec![JetVar::new(0, 0); d as usize + 3]);
    let key = lead.terms().keys().next().expect("one term").clone();
    let got = next.rep().coeff(&key);
    if got.is_zero() {
        return Err(Error::NotExact {
            remainder: format!("no u^{} term after the Lenard step", d + 3),
        });
    }
    let want = Scalar::from_rational(num_rational::BigRational::new(1.into(), factorial(d + 3)));
    Ok(next.scale(&(&want / &got)))
}

/// `h_0 = int u^2/2 dx` through `h_depth`.
pub fn chain(depth: u32) -> Result<Vec<LocalFunctional>> {
    let mut out = vec![LocalFunctional::new(DiffPoly::monomial(
        1,
        Scalar::frac(1, 2),
        0,
        0,
        vec![JetVar::new(0, 0); 2],
    ))];
    for d in 0..depth {
        let next = lenard_next(&out[d as usize], d)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::{parse_poly, to_plain};
    use crate::poisson::{bracket, flows};

    #[test]
    fn operators() {
        assert!(second_structure().validate().is_empty());
        let u = parse_poly("u", 1).unwrap();
        let k2u = second_structure().apply(&[u], &Truncation::unbounded()).unwrap();
        assert_eq!(k2u[0], parse_poly("u*u_1 + 1/12*h*u_3", 1).unwrap());
    }

    #[test]
    fn first_members() {
        let c = chain(2).unwrap();
        assert_eq!(to_plain(c[0].rep()), "1/2*u^2");
        assert_eq!(to_plain(c[1].rep()), "1/6*u^3 + 1/24*h*u*u_2");
        assert_eq!(c[2].rep().hbar_part(0), parse_poly("1/24*u^4", 1).unwrap());
        let f = flows(&c[0], &first_structure(), &Truncation::unbounded()).unwrap();
        assert_eq!(f[0], parse_poly("u_1", 1).unwrap());
    }

    #[test]
    fn chain_commutes() {
        let c = chain(DEFAULT_DEPTH).unwrap();
        let k1 = first_structure();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                assert!(bracket(&c[i], &c[j], &k1, &Truncation::unbounded()).unwrap().is_zero(), "{i} {j}");
            }
        }
        for (d, h) in c.iter().enumerate() {
            assert!(h.rep().has_extended_degree(0), "{d}");
        }
    }
}
