//! Exact symbolic calculus for projectively equivariant symbol calculus on
//! `R^n`: phase-space polynomials, differential operators on densities,
//! the equivariant symbol map and quantization, their cohomological
//! obstructions, the induced star product and the one-dimensional
//! pseudodifferential case.

pub mod diffop;
pub mod error;
pub mod exactnum;
pub mod onedim;
pub mod poly;
pub mod projsym;
pub mod scalar;
pub mod starprod;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rationals, the default scalar field.
pub type Rational = num_rational::BigRational;
pub type PhasePoly = poly::PhasePoly<Rational>;
pub type VectorField = poly::VectorField<Rational>;
pub type DiffOp = diffop::DiffOp<Rational>;
pub type Density = diffop::Density<Rational>;
pub type PsiDO = onedim::PsiDO<Rational>;
pub type UniPoly = exactnum::UniPoly<Rational>;
pub type HbarSeries = starprod::HbarSeries<Rational>;
