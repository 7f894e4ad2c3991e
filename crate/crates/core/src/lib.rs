//! Fractal calculus on Cantor-type supports.
//!
//! Functions on a fractal support `F` are handled through the integral
//! staircase `S = S_F^α`: every operator and transform here is evaluated in
//! the variable `u = S(t)`, where it becomes its classical counterpart.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod descriptor;
pub mod econ;
pub mod error;
pub mod expr;
pub mod format;
pub mod operators;
mod quad;
pub mod special;
pub mod staircase;
pub mod support;
pub mod transforms;
pub mod verify;

pub use descriptor::FunctionDescriptor;
pub use error::{Error, Result};
pub use expr::{GenPoly, TransformExpr};
pub use special::{MLSign, MLSpec};
pub use staircase::Staircase;
pub use support::{FractalSupport, MassConfig, MassEstimate, Partition, SupportKind};
