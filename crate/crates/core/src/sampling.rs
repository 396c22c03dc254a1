//! Deterministic random inputs for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffalg::{DiffPoly, JetVar, LocalFunctional, Monomial, TermKey};
use crate::fourier::BSeries;
use crate::scalar::Scalar;

/// Seed used by the property suites.
pub const SEED: u64 = 0x5eed_d0c5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in `-3..=3`.
pub fn coeff(rng: &mut impl Rng) -> Scalar {
    Scalar::from_int(rng.gen_range(-3..=3))
}

/// Nonzero, uniform in `-3..=3` without zero.
pub fn nonzero_coeff(rng: &mut impl Rng) -> Scalar {
    let c = *[-3i64, -2, -1, 1, 2, 3].choose(rng).expect("nonempty");
    Scalar::from_int(c)
}

/// Shape of random differential polynomials.
#[derive(Clone, Debug)]
pub struct Shape {
    pub dim: usize,
    pub terms: usize,
    pub min_arity: usize,
    pub max_arity: usize,
    /// With `Some(s)`, every `h^i` term has differential degree `2i + s`;
    /// otherwise orders are drawn up to `max_order`.
    pub graded: Option<u32>,
    pub max_order: u32,
    pub genus_max: u32,
    pub eps_max: u32,
}

impl Shape {
    pub fn new(dim: usize) -> Self {
        Shape {
            dim,
            terms: 4,
            min_arity: 1,
            max_arity: 3,
            graded: None,
            max_order: 3,
            genus_max: 0,
            eps_max: 0,
        }
    }
}

/// Distributes `total` jet orders over `arity` positions.
fn split_orders(rng: &mut impl Rng, arity: usize, total: u32) -> Vec<u32> {
    let mut v = vec![0; arity];
    for _ in 0..total {
        let i = rng.gen_range(0..arity);
        v[i] += 1;
    }
    v
}

pub fn monomial(rng: &mut impl Rng, shape: &Shape, hpow: u32) -> Monomial {
    let arity = rng.gen_range(shape.min_arity..=shape.max_arity);
    if arity == 0 {
        return Monomial::one();
    }
    let orders = match shape.graded {
        Some(s) => split_orders(rng, arity, 2 * hpow + s),
        None => (0..arity).map(|_| rng.gen_range(0..=shape.max_order)).collect(),
    };
    Monomial::from_vars(
        orders
            .into_iter()
            .map(|o| JetVar::new(rng.gen_range(0..shape.dim), o))
            .collect(),
    )
}

pub fn poly(rng: &mut impl Rng, shape: &Shape) -> DiffPoly {
    let mut p = DiffPoly::zero(shape.dim);
    for _ in 0..shape.terms {
        let h = rng.gen_range(0..=shape.genus_max);
        let e = rng.gen_range(0..=shape.eps_max);
        let m = monomial(rng, shape, h);
        p.add_term(TermKey::new(h, e, m), nonzero_coeff(rng));
    }
    p
}

pub fn functional(rng: &mut impl Rng, shape: &Shape) -> LocalFunctional {
    LocalFunctional::new(poly(rng, shape))
}

/// Random mode series with blocks of arity at least two; modes are
/// read from the jet orders.
pub fn series(rng: &mut impl Rng, shape: &Shape) -> BSeries {
    let shape = Shape {
        min_arity: shape.min_arity.max(2),
        max_arity: shape.max_arity.max(2),
        ..shape.clone()
    };
    let mut s = BSeries::zero(shape.dim);
    for _ in 0..shape.terms {
        let h = rng.gen_range(0..=shape.genus_max);
        let e = rng.gen_range(0..=shape.eps_max);
        let m = monomial(rng, &shape, h);
        s.add_term(TermKey::new(h, e, m), nonzero_coeff(rng));
    }
    s
}
