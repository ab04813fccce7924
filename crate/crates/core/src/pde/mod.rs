//! Discrete p-Laplacian with lower-order term, damped Newton for frozen
//! sources and the first eigenpair of −Δ_p.
//!
//! The discretization is conservative and variational: for a grid function
//! `u` the operator is the gradient of
//!
//! ```text
//! J(u) = |S| Σ_cells W_i A(δ_i) + |S| Σ_nodes V_j (B(u_j) − g_j u_j)
//! ```
//!
//! with `δ_i` the cell slope, `W_i = ∫_cell r^{N−1}`, `V_j` the trapezoidal
//! dual weight, `A(s) = (s² + ε²)^{p/2}/p` and `B(u) = (u² + ε₀²)^{p/2}/p`.
//! Each row is divided by a positive node volume, so rows read as the strong
//! form `−(1/w)(w a(u′)u′)′ + b(u) − g`. Dirichlet rows hold `u_j`.

mod eigen;
mod newton;
mod operator;
mod tridiag;

pub use eigen::{first_eigenpair, first_eigenpair_from, Eigenpair};
pub use newton::{solve_frozen, solve_frozen_from};
pub use operator::{energy, jacobian, residual, row_volumes};
pub use tridiag::Tridiagonal;

pub(crate) use newton::newton_continued;
pub(crate) use operator::{assemble_jacobian, assemble_residual, Load};

use crate::{Error, Result};

/// Backtracking parameters of the damped Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Damping {
    pub initial_step: f64,
    pub factor: f64,
    pub min_step: f64,
}

impl Default for Damping {
    fn default() -> Self {
        Damping {
            initial_step: 1.0,
            factor: 0.5,
            min_step: 1.0 / (1u64 << 20) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// ε in `(|∇u|² + ε²)^{(p−2)/2}`.
    pub eps_grad: f64,
    /// Same smoothing applied to `|u|^{p−2}u`.
    pub eps_zero: f64,
    /// Residual sup-norm tolerance, relative to `1 + ‖source‖_∞`.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    pub damping: Damping,
    /// Solve once at `eps = 1e−4` before the target smoothing when `p ≠ 2`.
    pub continuation: bool,
    /// Relative L^p increment that stops the Picard loop.
    pub picard_tol: f64,
    pub max_picard_iters: usize,
    /// Switch to Newton on the coupled singular residual when Picard oscillates.
    pub coupled_fallback: bool,
    pub eig_tol: f64,
    pub max_eig_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps_grad: 1e-8,
            eps_zero: 1e-8,
            newton_tol: 1e-10,
            max_newton_iters: 200,
            damping: Damping::default(),
            continuation: true,
            picard_tol: 1e-8,
            max_picard_iters: 200,
            coupled_fallback: true,
            eig_tol: 1e-11,
            max_eig_iters: 1000,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_grad > 0.0 && self.eps_grad < 1.0) {
            return Err(Error::InvalidProblem("eps_grad must lie in (0, 1)"));
        }
        if !(self.eps_zero > 0.0 && self.eps_zero < 1.0) {
            return Err(Error::InvalidProblem("eps_zero must lie in (0, 1)"));
        }
        if !(self.newton_tol > 0.0) || !(self.picard_tol > 0.0) || !(self.eig_tol > 0.0) {
            return Err(Error::InvalidProblem("tolerances must be positive"));
        }
        if self.max_newton_iters == 0 || self.max_picard_iters == 0 || self.max_eig_iters == 0 {
            return Err(Error::InvalidProblem("iteration limits must be positive"));
        }
        let d = &self.damping;
        if !(d.initial_step > 0.0 && d.factor > 0.0 && d.factor < 1.0 && d.min_step > 0.0) {
            return Err(Error::InvalidProblem("invalid damping parameters"));
        }
        Ok(())
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::DomainError("p must be a finite real > 1"));
    }
    Ok(())
}
