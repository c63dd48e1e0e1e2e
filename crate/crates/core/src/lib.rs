//! Numerical laboratory for the octonionic binormal curve flow in R^7.
//!
//! The crate provides:
//!
//! - exact octonion algebra and the 7-dimensional cross product
//!   ([`octonion`]),
//! - moving orthonormal 7-frames along curves, their invariants, the
//!   complexified frame and the Hasimoto-type fields ([`frame`]),
//! - time integration of the binormal flow `γ_t = γ_s × γ_ss`, the sphere
//!   map flow `u_t = u × u_ss`, and the modified flow twisted by an
//!   orthogonal matrix ([`flow`]),
//! - the equivalent three-field nonlinear Schrödinger system with its
//!   nonlocal terms, plus the curve/NLSS cross-validation ([`nlss`]),
//! - fundamental-form diagnostics of the surface swept by the moving curve
//!   ([`surface`]).

pub mod csvio;
pub mod curve;
pub mod error;
pub mod flow;
pub mod frame;
pub mod grid;
pub mod nlss;
pub mod octonion;
pub mod surface;

pub use error::{Error, Result};
