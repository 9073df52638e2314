//! Fluctuation-induced interactions between a polarizable particle and a
//! planar surface.
//!
//! The quadrature and summation engines in [`numerics`] are generic over the
//! scalar type; the physics layers work in SI units with `f64`, because
//! products such as `ħ²` (≈1e-68) underflow single precision.

// `!(x > 0.0)` is the NaN-rejecting form used throughout input validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom_state;
pub mod equilibrium;
pub mod error;
pub mod friction;
pub mod green_planar;
pub mod io;
pub mod materials;
pub mod noneq_field;
pub mod numerics;
pub mod observables;
pub mod response;

pub use error::{PolderError, Result};

/// Scalar type of the physics layers.
pub type Real = f64;
pub type Complex = num_complex::Complex64;
pub type Tolerance = numerics::Tolerance<f64>;
pub type QuadratureResult<V> = numerics::QuadratureResult<f64, V>;
pub type MatsubaraOptions = numerics::MatsubaraOptions<f64>;
