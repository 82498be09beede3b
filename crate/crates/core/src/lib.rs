//! Sampled-function numerics for the generalized Boehmian space built on
//! `L¹(ℝ)` with the non-commutative convolution
//!
//! ```text
//! (f # g)(x) = ½ ∫ [f(x+y) + f(x−y)] g(y) dy
//! ```
//!
//! Functions live on uniform grids ([`GridFunction`]) with a declared support.
//! On top of that the crate provides:
//!
//! * [`sharp`]: `#`, the classical convolution `∗`, and algebraic-law residuals;
//! * [`transforms`]: the Hartley transform `𝓗`, the full-line cosine transform
//!   `𝓒` and the Fourier transform `𝓕`, evaluated by direct quadrature;
//! * [`delta`]: delta sequences with checks of the unit-mass, bounded-mass and
//!   shrinking-support properties;
//! * [`boehmian`]: quotients, equivalence, Boehmian arithmetic, the axiom suite
//!   and δ-/Δ-convergence verifiers;
//! * [`ext_hartley`]: the Hartley transform extended to Boehmians.
//!
//! Every infinite statement (all `n`, all `m, n`) is verified on a finite prefix
//! only. Reports say so.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod boehmian;
pub mod delta;
mod error;
pub mod ext_hartley;
pub mod grid;
mod math;
pub mod preset;
pub mod quadrature;
pub mod sharp;
mod tolerances;
pub mod transforms;

pub use crate::boehmian::{Boehmian, Quotient};
pub use crate::delta::{DeltaSequence, FamilyKind};
pub use crate::error::{Error, Result};
pub use crate::grid::{GridFunction, GridSpec};
pub use crate::preset::Preset;
pub use crate::sharp::Product;
pub use crate::tolerances::Tolerances;
pub use crate::transforms::{TableValues, TransformKind, TransformTable};
