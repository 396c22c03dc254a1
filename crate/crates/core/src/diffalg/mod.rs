//! Differential polynomials, local functionals and their text/JSON forms.

pub mod functional;
pub mod jet;
pub mod parse;
pub mod poly;
pub mod render;
pub mod serial;
pub mod truncation;

pub use functional::{antiderivative, is_total_derivative, normal_form, var_derivative, LocalFunctional};
pub use jet::{JetVar, Monomial, TermKey};
pub use parse::parse_poly;
pub use poly::DiffPoly;
pub use render::{to_latex, to_plain};
pub use truncation::Truncation;
