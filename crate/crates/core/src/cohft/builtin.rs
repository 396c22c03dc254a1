//! The trivial and Hodge CohFTs in one dimension.
//!
//! Both answer from two sources only: the dimension count, which makes most
//! integrals vanish, and the closed forms for genus zero and for two
//! insertions with one psi class. Everything else is Unknown.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{CohFTSpec, DrOracle, DrPoly, OracleKey, Query};
use crate::scalar::{binomial, factorial, Scalar};

/// Bernoulli number `B_n` with `B_1 = -1/2`, from
/// `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
pub fn bernoulli(n: u32) -> BigRational {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binomial(m + 1, k as u32)) * bk;
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b.pop().expect("nonempty")
}

/// `<tau_{d_1} .. tau_{d_m}>_0 = (m-3)! / prod d_i!` when `sum d_i = m - 3`.
pub fn genus0_correlator(d: &[u32]) -> BigRational {
    let m = d.len();
    if m < 3 || d.iter().sum::<u32>() as usize != m - 3 {
        return BigRational::zero();
    }
    let den = d.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
    BigRational::new(factorial(m as u32 - 3), den)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Trivial,
    Hodge,
}

pub struct BuiltinOracle {
    spec: CohFTSpec,
    kind: Kind,
}

pub fn trivial_oracle() -> BuiltinOracle {
    BuiltinOracle {
        spec: CohFTSpec::new("trivial", vec![vec![Scalar::one()]], 0, false)
            .expect("valid metric"),
        kind: Kind::Trivial,
    }
}

pub fn hodge_oracle() -> BuiltinOracle {
    BuiltinOracle {
        spec: CohFTSpec::new("hodge", vec![vec![Scalar::one()]], 0, true).expect("valid metric"),
        kind: Kind::Hodge,
    }
}

/// `(-a_1 a_2)^g`, which is `a^{2g}` at `(a, -a)`.
fn two_point_power(g: u32, c: BigRational, epow: u32) -> DrPoly {
    let mut p = DrPoly::zero(2);
    let sign = if g.is_multiple_of(2) { c } else { -c };
    p.add(epow, vec![g, g], sign);
    p
}

impl BuiltinOracle {
    /// Genus-zero answer: DR_0 is the fundamental class, so the integral
    /// is `<tau_d tau_0^n>_0`.
    fn genus0(key: &OracleKey) -> DrPoly {
        let mut ds = vec![key.d];
        ds.extend(std::iter::repeat_n(0, key.n()));
        DrPoly::constant(key.n(), genus0_correlator(&ds))
    }
}

impl DrOracle for BuiltinOracle {
    fn spec(&self) -> &CohFTSpec {
        &self.spec
    }

    fn dr_poly(&self, key: &OracleKey) -> Query {
        let n = key.n();
        if key.alpha != 0 || key.insertions.iter().any(|&c| c != 0) || n == 0 {
            return Query::Known(DrPoly::zero(n));
        }
        if key.g == 0 {
            return Query::Known(Self::genus0(key));
        }
        let g = key.g;
        // the DR cycle in M_{g,n+1} has dimension 2g-2+n; the integrand
        // lambda_g lambda_j psi^d has degree g+j+d, with lambda_g^2 = 0
        let js: Vec<u32> = match self.kind {
            Kind::Trivial => vec![0],
            Kind::Hodge => (0..g).collect(),
        };
        let fits: Vec<u32> = js
            .into_iter()
            .filter(|&j| (g + j + key.d) as usize == 2 * g as usize - 2 + n)
            .collect();
        if fits.is_empty() {
            return Query::Known(DrPoly::zero(n));
        }
        if key.d == 1 && n == 2 {
            // only j = g-1 can fit here
            let value = match self.kind {
                Kind::Trivial => BigRational::new(BigInt::one(), BigInt::from(12)),
                Kind::Hodge => {
                    bernoulli(2 * g).abs() / BigRational::from_integer(factorial(2 * g))
                }
            };
            let epow = if self.kind == Kind::Hodge { g - 1 } else { 0 };
            return Query::Known(two_point_power(g, value, epow));
        }
        Query::Unknown
    }
}
