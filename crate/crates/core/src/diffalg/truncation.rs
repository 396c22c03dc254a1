use serde::{Deserialize, Serialize};

/// Caps on the h-order (genus), the number of jet variables per monomial
/// and the e-order. Terms beyond any cap are dropped.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Truncation {
    pub genus_max: u32,
    pub deg_max: u32,
    pub eps_max: u32,
}

impl Truncation {
    pub fn new(genus_max: u32, deg_max: u32, eps_max: u32) -> Self {
        Truncation {
            genus_max,
            deg_max,
            eps_max,
        }
    }

    /// Genus and arity caps with the e-cap tied to the genus cap.
    pub fn genus_deg(genus_max: u32, deg_max: u32) -> Self {
        Self::new(genus_max, deg_max, genus_max)
    }

    pub fn unbounded() -> Self {
        Self::new(u32::MAX, u32::MAX, u32::MAX)
    }

    pub fn admits(&self, hpow: u32, epow: u32, arity: usize) -> bool {
        hpow <= self.genus_max && epow <= self.eps_max && arity as u64 <= self.deg_max as u64
    }

    pub fn with_genus(self, genus_max: u32) -> Self {
        Truncation { genus_max, ..self }
    }

    pub fn with_deg(self, deg_max: u32) -> Self {
        Truncation { deg_max, ..self }
    }

    /// Componentwise minimum.
    pub fn meet(self, other: Truncation) -> Self {
        Truncation {
            genus_max: self.genus_max.min(other.genus_max),
            deg_max: self.deg_max.min(other.deg_max),
            eps_max: self.eps_max.min(other.eps_max),
        }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Self::unbounded()
    }
}
