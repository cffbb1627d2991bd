//! Exact Chern-character arithmetic, central charges, tilt slopes and wall
//! computations on threefolds fibred over a curve, with a dedicated module
//! for projective bundles `P(E)` of rank-3 bundles.
//!
//! Every routine is generic over [`Scalar`]. Use [`Rational`] (arbitrary
//! precision) for anything whose answer matters; the `f64` aliases exist for
//! fast approximate sweeps.
//!
//! ```
//! use fibtilt::{chern, Geometry, Class, Rational, Scalar};
//!
//! let geom = Geometry::projective_bundle(0, 0).unwrap();
//! let oh = chern::contract(&chern::line_bundle(&fibtilt::Divisor::h(), &geom).unwrap(), &geom).unwrap();
//! assert_eq!(chern::euler_char(&oh, &geom).unwrap(), Rational::from_int(3));
//! # let _ = Class::zero();
//! ```

pub mod charge;
pub mod chern;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod pbundle;
pub mod scalar;
pub mod slopes;
pub mod tilt;
pub mod walls;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rationals, the default scalar.
pub type Rational = num_rational::BigRational;

pub type Geometry = geometry::FibredGeometry<Rational>;
pub type Divisor = geometry::DivisorClass<Rational>;
pub type Class = chern::ContractedClass<Rational>;
pub type Chow = chern::ChowClass<Rational>;
pub type Charge = charge::ChargeValue<Rational>;
pub type RationalSlope = charge::Slope<Rational>;
pub type Params = tilt::TiltParams<Rational>;
pub type Lattice = slopes::SubobjectLattice<Rational>;

pub type GeometryF64 = geometry::FibredGeometry<f64>;
pub type ClassF64 = chern::ContractedClass<f64>;
pub type ParamsF64 = tilt::TiltParams<f64>;
