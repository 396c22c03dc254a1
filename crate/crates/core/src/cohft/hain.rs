//! Hain's formula for the compact-type DR cycle in genus one with two
//! points, paired against `lambda_1`.
//!
//! In genus one the formula reduces to
//! `DR_1(a_1, a_2) = sum_j a_j^2 psi_j^dagger / 2 - a_1 a_2 delta_0^{12}`
//! (there are no `delta_h` with `1 <= h <= g-1`). Pairing with `lambda_1`:
//! `lambda_1 psi_j^dagger` is pulled back from the one-dimensional
//! `M_{1,1}` and has degree two, so it integrates to zero; `delta_0^{12}`
//! is `M_{1,1} x M_{0,3}`, on which `lambda_1` integrates to `1/24`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Classes appearing in the genus-one, two-point expansion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HainClass {
    PsiDagger(usize),
    Delta0Both,
}

/// Expansion `sum coefficient(a) * class` with coefficients that are
/// quadratic forms `c11 a_1^2 + c12 a_1 a_2 + c22 a_2^2`.
#[derive(Clone, Debug)]
pub struct HainExpansion {
    pub terms: Vec<(HainClass, [BigRational; 3])>,
}

fn q(c11: i64, c12: i64, c22: i64, den: i64) -> [BigRational; 3] {
    let d = BigInt::from(den);
    [
        BigRational::new(BigInt::from(c11), d.clone()),
        BigRational::new(BigInt::from(c12), d.clone()),
        BigRational::new(BigInt::from(c22), d),
    ]
}

impl HainExpansion {
    pub fn genus_one_two_point() -> Self {
        HainExpansion {
            terms: vec![
                (HainClass::PsiDagger(1), q(1, 0, 0, 2)),
                (HainClass::PsiDagger(2), q(0, 0, 1, 2)),
                (HainClass::Delta0Both, q(0, -1, 0, 1)),
            ],
        }
    }

    fn lambda1_pairing(class: HainClass) -> BigRational {
        match class {
            HainClass::PsiDagger(_) => BigRational::zero(),
            HainClass::Delta0Both => BigRational::new(BigInt::one(), BigInt::from(24)),
        }
    }

    /// Coefficient of `a^2` in `int_{DR_1(a,-a)} lambda_1`.
    pub fn pair_lambda1_at_opposite(&self) -> BigRational {
        let mut total = BigRational::zero();
        for (class, [c11, c12, c22]) in &self.terms {
            // a_1 = a, a_2 = -a
            let coeff = c11 - c12 + c22;
            total += coeff * Self::lambda1_pairing(*class);
        }
        total
    }
}

/// Coefficient of `a^2` in `int_{DR_1(a,-a)} lambda_1`; equals `1/24`.
pub fn hain_dr1_two_point() -> BigRational {
    HainExpansion::genus_one_two_point().pair_lambda1_at_opposite()
}

/// `int_{DR_1(a,-a)} lambda_1` at a concrete `a`.
pub fn hain_dr1_two_point_at(a: i64) -> BigRational {
    hain_dr1_two_point() * BigRational::from_integer(BigInt::from(a) * BigInt::from(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn values() {
        assert_eq!(hain_dr1_two_point(), rational(1, 24));
        assert_eq!(hain_dr1_two_point_at(0), BigRational::zero());
        assert_eq!(hain_dr1_two_point_at(1), rational(1, 24));
        assert_eq!(hain_dr1_two_point_at(-3), rational(9, 24));
    }
}
