//! Truncated sources, the frozen singular right-hand side, the fixed-point
//! map `Γ` and the monotone sweep over the regularization levels `n`.
//!
//! Level `n` solves
//!
//! ```text
//! −Δ_p u + |u|^{p−2}u = f_n / (|u| + 1/n)^α,   f_n = min(f, n)
//! ```
//!
//! by Picard iteration on `Γ(1, ·)`, where `Γ(σ, w)` is the frozen-source
//! solution with right side `σ f_n / (|w| + 1/n)^α`. When the Picard
//! increments stop decreasing the level switches to damped Newton on the
//! coupled residual.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::analysis::{lebesgue_norm, NormTable, INTERIOR_MARGIN};
use crate::mesh::{cell_gradient, integrate, integrate_cells, GridFunction, Mesh};
use crate::pde::{
    first_eigenpair, newton_continued, solve_frozen, solve_frozen_from, Load, SolverOptions,
};
use crate::{Error, Result};

/// Picard increments inspected before declaring oscillation.
const OSCILLATION_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// `f ≡ c`.
    Constant(f64),
    /// `f = |x|^{−γ}` on an interval, `r^{−γ}` on a ball, capped at the
    /// value one node away from the singular point.
    PowerCusp(f64),
    /// `f = Φ^β` with Φ the first eigenfunction of `−Δ_p`.
    EigenfunctionPower(f64),
    Nodal(GridFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub p: f64,
    /// Singularity exponent; `0` decouples the source from the solution.
    pub alpha: f64,
    pub source: Source,
    /// Strictly increasing regularization levels.
    pub schedule: Vec<u64>,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidProblem("p must be a finite real > 1"));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidProblem(
                "alpha must be finite and nonnegative",
            ));
        }
        if self.schedule.is_empty() || self.schedule[0] == 0 {
            return Err(Error::InvalidProblem("schedule must hold positive levels"));
        }
        if self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProblem(
                "schedule must be strictly increasing",
            ));
        }
        match &self.source {
            Source::Constant(c) if !(*c > 0.0 && c.is_finite()) => {
                Err(Error::InvalidProblem("constant source must be positive"))
            }
            Source::PowerCusp(g) if !(*g > 0.0 && g.is_finite()) => {
                Err(Error::InvalidProblem("cusp exponent must be positive"))
            }
            Source::EigenfunctionPower(b) if !(*b > 0.0 && b.is_finite()) => Err(
                Error::InvalidProblem("eigenfunction power must be positive"),
            ),
            _ => Ok(()),
        }
    }

    /// Nodal values of `f` on `mesh`.
    pub fn realize_source(&self, mesh: &Mesh, opts: &SolverOptions) -> Result<GridFunction> {
        self.validate()?;
        let f = match &self.source {
            Source::Constant(c) => GridFunction::constant(mesh, *c),
            Source::PowerCusp(gamma) => {
                let x = mesh.nodes();
                let cap = x[1].powf(-gamma);
                GridFunction::from_fn(mesh, |r| if r < x[1] { cap } else { r.powf(-gamma) })
            }
            Source::EigenfunctionPower(beta) => {
                let phi = first_eigenpair(mesh, self.p, opts)?.phi;
                phi.map(|v| v.powf(*beta))
            }
            Source::Nodal(g) => {
                mesh.check(g)?;
                g.clone()
            }
        };
        if !f.is_finite() || f.values().iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidProblem(
                "source must be finite and nonnegative",
            ));
        }
        if f.values()
            .iter()
            .enumerate()
            .all(|(j, v)| *v == 0.0 || mesh.is_dirichlet(j))
        {
            return Err(Error::InvalidProblem("source vanishes identically"));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSolution {
    pub n: u64,
    pub u: GridFunction,
    pub picard_iters: usize,
    pub converged: bool,
    /// Coupled Newton took over from Picard.
    pub fallback_used: bool,
    /// `‖Γ(1, u) − u‖_{L^p}`.
    pub fixed_point_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFailure {
    pub n: u64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub levels: Vec<LevelSolution>,
    /// Filled by [`crate::analysis::attach_norms`].
    pub norms: Option<NormTable>,
    /// `max (u_n − u_{n+1})₊` over nodes and consecutive levels.
    pub monotonicity_violation: f64,
    /// Minimum of each level over the interior subdomain.
    pub interior_min: Vec<f64>,
    /// First level that failed; later levels were not attempted.
    pub failure: Option<LevelFailure>,
}

impl SweepReport {
    pub fn is_partial(&self) -> bool {
        self.failure.is_some()
    }
}

/// Nodewise `min(f, n)`.
pub fn truncate_source(f: &GridFunction, n: u64) -> GridFunction {
    let cap = n as f64;
    f.map(|v| v.min(cap))
}

/// Nodewise `f_n / (|w| + 1/n)^α`.
pub fn singular_rhs(f_n: &GridFunction, w: &GridFunction, n: u64, alpha: f64) -> GridFunction {
    let shift = 1.0 / n as f64;
    f_n.zip_map(w, |f, w| f / (w.abs() + shift).powf(alpha))
}

/// `T_ε(τ) = max(min(τ, ε), −ε)`.
pub fn t_eps(tau: f64, eps: f64) -> f64 {
    tau.min(eps).max(-eps)
}

fn check_level(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidProblem("level must be positive"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn gamma_with(
    mesh: &Mesh,
    w: &GridFunction,
    f_n: &GridFunction,
    n: u64,
    alpha: f64,
    p: f64,
    sigma: f64,
    warm: Option<&GridFunction>,
    opts: &SolverOptions,
) -> Result<GridFunction> {
    if sigma == 0.0 {
        return Ok(GridFunction::zeros(mesh));
    }
    let g = singular_rhs(f_n, w, n, alpha).map(|v| sigma * v);
    match warm {
        Some(init) => solve_frozen_from(mesh, &g, p, init, opts),
        None => solve_frozen(mesh, &g, p, opts),
    }
}

/// `Γ(σ, w)`: the frozen-source solution for `σ f_n / (|w| + 1/n)^α`.
pub fn gamma_map(
    mesh: &Mesh,
    w: &GridFunction,
    spec: &ProblemSpec,
    n: u64,
    sigma: f64,
    opts: &SolverOptions,
) -> Result<GridFunction> {
    check_level(n)?;
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::DomainError("sigma must lie in [0, 1]"));
    }
    mesh.check(w)?;
    if !w.is_finite() {
        return Err(Error::NumericError("w has non-finite entries"));
    }
    let f_n = truncate_source(&spec.realize_source(mesh, opts)?, n);
    gamma_with(mesh, w, &f_n, n, spec.alpha, spec.p, sigma, None, opts)
}

fn lp_distance(mesh: &Mesh, a: &GridFunction, b: &GridFunction, p: f64) -> Result<f64> {
    lebesgue_norm(mesh, &a.zip_map(b, |x, y| x - y), p)
}

fn oscillating(increments: &[f64]) -> bool {
    if increments.len() < OSCILLATION_WINDOW {
        return false;
    }
    let tail = &increments[increments.len() - OSCILLATION_WINDOW..];
    tail.windows(2).any(|w| w[1] >= w[0])
}

fn solve_level_with(
    mesh: &Mesh,
    spec: &ProblemSpec,
    f: &GridFunction,
    n: u64,
    u_init: &GridFunction,
    opts: &SolverOptions,
) -> Result<LevelSolution> {
    let (p, alpha) = (spec.p, spec.alpha);
    let f_n = truncate_source(f, n);
    let relative_gap = |mesh: &Mesh, next: &GridFunction, prev: &GridFunction| -> Result<f64> {
        let scale = lebesgue_norm(mesh, next, p)?.max(1.0);
        Ok(lp_distance(mesh, next, prev, p)? / scale)
    };

    let mut v = u_init.clone();
    let mut increments = Vec::new();
    let mut picard_iters = 0;
    let mut picard_done = false;
    while picard_iters < opts.max_picard_iters {
        let next = gamma_with(mesh, &v, &f_n, n, alpha, p, 1.0, Some(&v), opts)?;
        picard_iters += 1;
        let inc = relative_gap(mesh, &next, &v)?;
        v = next;
        increments.push(inc);
        if inc <= opts.picard_tol {
            picard_done = true;
            break;
        }
        if opts.coupled_fallback && oscillating(&increments) {
            break;
        }
    }

    let mut fallback_used = false;
    if !picard_done {
        if !opts.coupled_fallback {
            return Err(Error::PicardStalled {
                iterations: picard_iters,
                increment: increments.last().copied().unwrap_or(f64::NAN),
            });
        }
        // the Picard iterate may be far off after oscillating; the initial
        // guess is the previous level
        let load = Load::Singular {
            f: f_n.values(),
            shift: 1.0 / n as f64,
            alpha,
            scale: 1.0,
        };
        v = newton_continued(mesh, p, &load, u_init.values(), opts)?.into();
        fallback_used = true;
    }

    let image = gamma_with(mesh, &v, &f_n, n, alpha, p, 1.0, Some(&v), opts)?;
    let fixed_point_residual = lp_distance(mesh, &image, &v, p)?;
    let scale = lebesgue_norm(mesh, &v, p)?.max(1.0);
    let converged = fixed_point_residual <= opts.picard_tol * scale;
    Ok(LevelSolution {
        n,
        u: v,
        picard_iters,
        converged,
        fallback_used,
        fixed_point_residual,
    })
}

/// Solves level `n` from `u_init`.
pub fn solve_level(
    mesh: &Mesh,
    spec: &ProblemSpec,
    n: u64,
    u_init: &GridFunction,
    opts: &SolverOptions,
) -> Result<LevelSolution> {
    check_level(n)?;
    opts.validate()?;
    mesh.check(u_init)?;
    if u_init
        .values()
        .iter()
        .any(|v| !(*v >= 0.0) || !v.is_finite())
    {
        return Err(Error::DomainError(
            "initial guess must be finite and nonnegative",
        ));
    }
    let f = spec.realize_source(mesh, opts)?;
    solve_level_with(mesh, spec, &f, n, u_init, opts)
}

fn interior_minimum(mesh: &Mesh, u: &GridFunction) -> Result<f64> {
    let range = mesh.subdomain(INTERIOR_MARGIN * mesh.extent())?;
    Ok(u.values()[range]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

/// Solves every level of the schedule, warm-starting each from the last.
///
/// The first level starts from the frozen solution with source `f_{n₁}`. A
/// failing level stops the sweep and is recorded in [`SweepReport::failure`].
pub fn sweep_levels(mesh: &Mesh, spec: &ProblemSpec, opts: &SolverOptions) -> Result<SweepReport> {
    opts.validate()?;
    let f = spec.realize_source(mesh, opts)?;
    let mut report = SweepReport {
        levels: Vec::new(),
        norms: None,
        monotonicity_violation: 0.0,
        interior_min: Vec::new(),
        failure: None,
    };
    for &n in &spec.schedule {
        let start = match report.levels.last() {
            Some(prev) => Ok(prev.u.clone()),
            None => solve_frozen(mesh, &truncate_source(&f, n), spec.p, opts),
        };
        let level = start.and_then(|s| solve_level_with(mesh, spec, &f, n, &s, opts));
        match level {
            Ok(level) => {
                if let Some(prev) = report.levels.last() {
                    let drop = prev.u.zip_map(&level.u, |a, b| a - b).max().max(0.0);
                    report.monotonicity_violation = report.monotonicity_violation.max(drop);
                }
                report.interior_min.push(interior_minimum(mesh, &level.u)?);
                report.levels.push(level);
            }
            Err(error) => {
                report.failure = Some(LevelFailure { n, error });
                break;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDiagnostic {
    /// `∫|∇(u_{n_{k+1}} − u_{n_k})|` per consecutive pair.
    pub l1_gradient_gaps: Vec<f64>,
    /// `|{|u_{n_{k+1}} − u_{n_k}| > ε}|` per consecutive pair.
    pub exceedance_measures: Vec<f64>,
}

/// Cauchy diagnostics of consecutive levels in `W^{1,1}` and in measure.
pub fn cauchy_gradient_diagnostic(
    mesh: &Mesh,
    levels: &[LevelSolution],
    eps: f64,
) -> Result<CauchyDiagnostic> {
    if levels.len() < 2 {
        return Err(Error::InvalidProblem("at least two levels are required"));
    }
    if !(eps > 0.0) {
        return Err(Error::DomainError("eps must be positive"));
    }
    let mut gaps = Vec::with_capacity(levels.len() - 1);
    let mut measures = Vec::with_capacity(levels.len() - 1);
    for pair in levels.windows(2) {
        let d = pair[1].u.zip_map(&pair[0].u, |a, b| a - b);
        let grad: Vec<f64> = cell_gradient(mesh, &d)?.iter().map(|s| s.abs()).collect();
        gaps.push(integrate_cells(mesh, &grad)?);
        // measure of the cells whose interpolant leaves [−ε, ε] at either end
        let out: Vec<f64> = d
            .values()
            .windows(2)
            .map(|w| {
                if w[0].abs() > eps || w[1].abs() > eps {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        measures.push(integrate_cells(mesh, &out)?);
    }
    Ok(CauchyDiagnostic {
        l1_gradient_gaps: gaps,
        exceedance_measures: measures,
    })
}

/// `∫ f_n u_n / (u_n + 1/n)`, bounded by `∫ f_n`.
pub fn alpha_one_work(mesh: &Mesh, f_n: &GridFunction, u: &GridFunction, n: u64) -> Result<f64> {
    let shift = 1.0 / n as f64;
    integrate(mesh, &f_n.zip_map(u, |f, u| f * u / (u + shift)))
}
