//! Numerical verification toolkit for minimal Legendrian submanifolds of
//! the unit sphere `S^{2n+1}`.
//!
//! The algebra lives on the cubic form `sigma(X, Y, Z) = <B(X, Y), J Z>`,
//! stored as a [`SymCubic`]. On top of it the crate computes the maximum
//! `theta` of the form on the unit sphere with its adapted spectrum, the
//! algebraic curvature and Simons-formula terms, the `n = 3` normal form,
//! and the pinching gaps. Closed-form immersions can be sampled with
//! finite differences to recover `sigma` pointwise.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod catalog;
pub mod curvature;
pub mod error;
pub mod g2;
pub mod immersion;
pub mod linalg;
pub mod pinching;
pub mod report;
pub mod spectrum;
pub mod tensor;

pub use canonical::{canonical3, Canonical3};
pub use curvature::{algebraic_curvature, simons_gap, simons_rhs, AlgCurvature};
pub use catalog::CatalogEntry;
pub use error::{Error, Result};
pub use immersion::{Immersion, ImmersionJet};
pub use pinching::{pinching_report, PinchReport};
pub use spectrum::{theta, AdaptedSpectrum, ThetaOptions};
pub use tensor::{Invariants, SymCubic};
