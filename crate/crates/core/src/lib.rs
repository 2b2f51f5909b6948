//! Numerical certification of higher-order Glaeser inequalities and of the
//! weak-Lp regularity of roots `|f|^(k+alpha) = |g|`.
//!
//! The math modules are generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix it to `f64`, which is what the CLI and the
//! acceptance suite use.

pub mod decompose;
pub mod error;
pub mod examples;
pub mod funcspace;
pub mod glaeser;
pub mod magic;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod weaklp;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid = funcspace::GridFunction<f64>;
pub type Holder = funcspace::HolderEstimate<f64>;
pub type WeakNorm = weaklp::WeakNormResult<f64>;
pub type Glaeser = glaeser::GlaeserReport<f64>;
pub type Poly = magic::Polynomial<f64>;
pub type Magic = magic::MagicEstimate<f64>;
pub type Decomposition = decompose::Decomposition<f64>;
pub type Aggregate = decompose::AggregateReport<f64>;
