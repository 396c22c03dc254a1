//! Changes of variables `u -> M(u) = u + O(h)` applied to evolution systems.

use crate::diffalg::{DiffPoly, Truncation};
use crate::error::{Error, Result};
use crate::poisson::{lie_derivative, EvolutionSystem};

fn check_leading(m: &[DiffPoly]) -> Result<()> {
    for (c, p) in m.iter().enumerate() {
        if p.hbar_part(0) != DiffPoly::var(p.dim(), c, 0) {
            return Err(Error::NonUnitLeading { color: c + 1 });
        }
    }
    Ok(())
}

/// `f(images)`, with jets of the images taken by `dx`.
pub fn miura_substitute(f: &DiffPoly, images: &[DiffPoly], trunc: &Truncation) -> Result<DiffPoly> {
    f.substitute(images, trunc)
}

/// The inverse map `w` with `M(w(u)) = u` within `trunc`.
///
/// Fixed point of `w = u - (M - id)(w)`; each pass fixes one more power of `h`.
pub fn miura_invert(m: &[DiffPoly], trunc: &Truncation) -> Result<Vec<DiffPoly>> {
    check_leading(m)?;
    let dim = m.len();
    let id: Vec<DiffPoly> = (0..dim).map(|c| DiffPoly::var(dim, c, 0)).collect();
    let rest: Vec<DiffPoly> = m.iter().zip(&id).map(|(p, u)| p - u).collect();
    if trunc.genus_max == u32::MAX {
        return Err(Error::Invalid("inverting a Miura map needs a finite genus cap".into()));
    }
    let mut w = id.clone();
    for _ in 0..=trunc.genus_max {
        let mut next = Vec::with_capacity(dim);
        for c in 0..dim {
            next.push(&id[c] - &rest[c].substitute(&w, trunc)?);
        }
        if next == w {
            break;
        }
        w = next;
    }
    Ok(w)
}

/// The system in the variables `v = M(u)`:
/// `v_t = sum_n dM/du_n dx^n(rhs)`, rewritten through `u = M^{-1}(v)`.
pub fn miura_apply(sys: &EvolutionSystem, m: &[DiffPoly], trunc: &Truncation) -> Result<EvolutionSystem> {
    if m.len() != sys.dim {
        return Err(Error::DimensionMismatch {
            left: sys.dim,
            right: m.len(),
        });
    }
    let inv = miura_invert(m, trunc)?;
    let mut out = EvolutionSystem::new(sys.dim);
    for (&(alpha, d), rhs) in &sys.flows {
        let mut new_rhs = Vec::with_capacity(sys.dim);
        for mc in m {
            let in_u = lie_derivative(mc, rhs, trunc);
            new_rhs.push(in_u.substitute(&inv, trunc)?);
        }
        out.insert(alpha, d, new_rhs);
    }
    Ok(out)
}
