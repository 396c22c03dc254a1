pub mod cohft;
pub mod diffalg;
pub mod error;
pub mod fourier;
pub mod hierarchy;
pub mod kdv;
pub mod matrix;
pub mod poisson;
pub mod sampling;
pub mod scalar;

pub use cohft::{CohFTSpec, DrOracle, DrPoly, OracleKey, Query};
pub use diffalg::{DiffPoly, JetVar, LocalFunctional, Monomial, TermKey, Truncation};
pub use error::{Error, Result};
pub use fourier::BSeries;
pub use hierarchy::{BuildMode, Hierarchy, Report};
pub use poisson::{EvolutionSystem, HamOperator};
pub use scalar::Scalar;
