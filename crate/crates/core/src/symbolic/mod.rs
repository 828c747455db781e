//! Exact scalars, sparse multivariate polynomials and Laurent polynomials in `t`.

mod error;
pub mod laurent;
pub mod parse;
pub mod poly;
pub mod scalar;

pub use error::SymbolicError;
pub use laurent::{LaurentPoly, DEFORMATION_VAR};
pub use parse::{parse_laurent, parse_poly};
pub use poly::{Mono, MultiPoly};
pub use scalar::Scalar;
