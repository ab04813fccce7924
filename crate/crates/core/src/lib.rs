//! Numerical core for the singular quasilinear Dirichlet problem
//!
//! ```text
//! −div(|∇u|^{p−2}∇u) + |u|^{p−2}u = f / u^α   in Ω,   u = 0 on ∂Ω
//! ```
//!
//! on intervals and radially symmetric balls. The crate is `no_std` and only
//! needs `alloc`; IO, configuration and the command line live in the
//! `singular-plap` companion crate.
//!
//! * [`mesh`]: uniform 1-D grids with radial weights, quadrature and gradients.
//! * [`pde`]: the smoothed p-Laplacian operator, its tridiagonal Jacobian, a
//!   damped Newton solver for frozen sources and the first eigenpair of −Δ_p.
//! * [`regularization`]: truncated sources, the frozen-source map, Picard
//!   levels and monotone sweeps over the regularization schedule.
//! * [`analysis`]: Lebesgue, Sobolev, sup and negative-power functionals.
//! * [`theory`]: closed-form critical exponents, the regime classifier and the
//!   Moser iteration bound.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
mod error;
pub mod mesh;
pub mod pde;
pub mod regularization;
pub mod theory;

pub use error::{Error, Result};
pub use mesh::{GridFunction, Mesh, MeshKind};
