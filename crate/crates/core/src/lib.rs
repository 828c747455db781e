//! Exact verification toolkit for identities and degenerations of low-dimensional algebras.

pub mod algebra;
pub mod catalog;
pub mod deformation;
pub mod groebner;
pub mod identity;
pub mod linalg;
pub mod report;
pub mod symbolic;

pub use symbolic::{LaurentPoly, MultiPoly, Scalar};

pub type Rational = num_rational::BigRational;
pub type Poly = MultiPoly<Rational>;
pub type Laurent = LaurentPoly<Rational>;
pub type Tensor = algebra::StructureTensor<Rational>;
