//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use drh_core::cohft::{hodge_oracle, trivial_oracle};
use drh_core::sampling::{self, Shape, SEED};
use drh_core::{BuildMode, Hierarchy, LocalFunctional, Truncation};

pub fn trivial(genus_max: u32, deg_max: u32, d_max: u32) -> Hierarchy {
    Hierarchy::build(
        Arc::new(trivial_oracle()),
        Truncation::genus_deg(genus_max, deg_max),
        d_max,
        BuildMode::Windowed,
    )
    .expect("trivial hierarchy builds")
}

pub fn hodge(genus_max: u32, deg_max: u32, d_max: u32) -> Hierarchy {
    Hierarchy::build(
        Arc::new(hodge_oracle()),
        Truncation::genus_deg(genus_max, deg_max),
        d_max,
        BuildMode::Windowed,
    )
    .expect("hodge hierarchy builds")
}

/// Seeded one-color functionals of arity 2..=4.
pub fn functionals(count: usize) -> Vec<LocalFunctional> {
    let mut rng = sampling::rng(SEED);
    let shape = Shape { terms: 5, min_arity: 2, max_arity: 4, ..Shape::new(1) };
    (0..count).map(|_| sampling::functional(&mut rng, &shape)).collect()
}
