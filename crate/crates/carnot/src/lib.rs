//! Computable geometric measure theory on stratified (Carnot) groups:
//! exact polynomial group laws, homogeneous quasi-distances and coverings,
//! multivector degree calculus, submanifold charts with characteristic-set
//! classification, intrinsic measures, blow-ups and Hausdorff-dimension
//! estimation.
//!
//! The numeric core is generic over [`scalar::Scalar`]; instantiate with
//! `f64` for measurements or with `BigRational` to run the same formulas
//! as exact, threshold-free oracles. The aliases below fix the `f64`
//! instantiation used by the CLI.

pub mod algebra;
pub mod error;
pub mod exterior;
pub mod gmt;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod metric;
pub mod parallel;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};

/// Exact rational scalar re-export used by the oracle instantiations.
pub use num_rational::BigRational;

pub type Algebra = algebra::StratifiedAlgebra<f64>;
pub type Point = algebra::GroupPoint<f64>;
pub type Multivector = exterior::Multivector<f64>;
pub type Chart = manifold::Chart<f64>;
pub type QuasiNorm = metric::HomogeneousQuasiNorm<f64>;

pub type ExactAlgebra = algebra::StratifiedAlgebra<BigRational>;
pub type ExactPoint = algebra::GroupPoint<BigRational>;
pub type ExactMultivector = exterior::Multivector<BigRational>;
pub type ExactChart = manifold::Chart<BigRational>;
