use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{
    assemble_jacobian, assemble_residual, check_exponent, row_volumes, Load, SolverOptions,
};
use crate::mesh::{GridFunction, Mesh};
use crate::{Error, Result};

const CONTINUATION_EPS: f64 = 1e-4;

fn sup(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn merit(r: &[f64], scale: &[f64]) -> f64 {
    r.iter().zip(scale).map(|(r, s)| s * r * r).sum()
}

fn project(mesh: &Mesh, u: &mut [f64]) {
    for (j, v) in u.iter_mut().enumerate() {
        if *v < 0.0 || mesh.is_dirichlet(j) {
            *v = 0.0;
        }
    }
}

/// Damped Newton on the projected iterate `u ≥ 0`. Returns the solution and
/// the number of Newton steps taken.
pub(crate) fn newton(
    mesh: &Mesh,
    p: f64,
    load: &Load<'_>,
    init: &[f64],
    eps_grad: f64,
    eps_zero: f64,
    opts: &SolverOptions,
) -> Result<(Vec<f64>, usize)> {
    let scale = row_volumes(mesh);
    let mut u = init.to_vec();
    project(mesh, &mut u);
    let mut r = assemble_residual(mesh, &u, load, p, eps_grad, eps_zero, &scale);
    for it in 0..opts.max_newton_iters {
        let source = (0..u.len()).fold(0.0f64, |m, j| m.max(load.value(j, u[j]).abs()));
        let rn = sup(&r);
        if !rn.is_finite() {
            return Err(Error::NumericError("residual overflow"));
        }
        if rn <= opts.newton_tol * (1.0 + source) {
            return Ok((u, it));
        }
        let jac = assemble_jacobian(mesh, &u, load, p, eps_grad, eps_zero, &scale);
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = jac.solve(&rhs)?;
        // the correction is below round-off of the iterate: residual is at its floor
        if sup(&step) <= 64.0 * f64::EPSILON * sup(&u) {
            return Ok((u, it));
        }
        let m0 = merit(&r, &scale);
        let mut t = opts.damping.initial_step;
        loop {
            let mut trial: Vec<f64> = u.iter().zip(&step).map(|(a, d)| a + t * d).collect();
            project(mesh, &mut trial);
            let rt = assemble_residual(mesh, &trial, load, p, eps_grad, eps_zero, &scale);
            let mt = merit(&rt, &scale);
            if mt.is_finite() && mt < m0 {
                u = trial;
                r = rt;
                break;
            }
            t *= opts.damping.factor;
            if t < opts.damping.min_step {
                return Err(Error::NewtonDiverged {
                    iterations: it + 1,
                    residual: rn,
                });
            }
        }
    }
    Err(Error::NewtonDiverged {
        iterations: opts.max_newton_iters,
        residual: sup(&r),
    })
}

/// Newton with one continuation step in the smoothing parameter when the
/// operator is degenerate or singular (`p ≠ 2`).
pub(crate) fn newton_continued(
    mesh: &Mesh,
    p: f64,
    load: &Load<'_>,
    init: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<f64>> {
    let mut start = init.to_vec();
    if p != 2.0 && opts.continuation && opts.eps_grad.max(opts.eps_zero) < CONTINUATION_EPS {
        let coarse = CONTINUATION_EPS;
        start = newton(mesh, p, load, &start, coarse, coarse, opts)?.0;
    }
    Ok(newton(mesh, p, load, &start, opts.eps_grad, opts.eps_zero, opts)?.0)
}

fn check_source(mesh: &Mesh, g: &GridFunction) -> Result<()> {
    mesh.check(g)?;
    if !g.is_finite() {
        return Err(Error::NumericError("source has non-finite entries"));
    }
    if g.values().iter().any(|&v| v < 0.0) {
        return Err(Error::DomainError("frozen source must be nonnegative"));
    }
    Ok(())
}

/// Minimizer of `(1/p)∫|∇v|^p + (1/p)∫|v|^p − ∫ g v` over nonnegative grid
/// functions vanishing on the Dirichlet boundary.
///
/// The iteration starts from the `p = 2` solution of the same source.
pub fn solve_frozen(
    mesh: &Mesh,
    g: &GridFunction,
    p: f64,
    opts: &SolverOptions,
) -> Result<GridFunction> {
    check_exponent(p)?;
    opts.validate()?;
    check_source(mesh, g)?;
    let load = Load::Frozen(g.values());
    let zeros = alloc::vec![0.0; mesh.n_nodes()];
    let linear = newton(mesh, 2.0, &load, &zeros, opts.eps_grad, opts.eps_zero, opts)?.0;
    if p == 2.0 {
        return Ok(linear.into());
    }
    Ok(newton_continued(mesh, p, &load, &linear, opts)?.into())
}

/// As [`solve_frozen`], warm-started from `init`.
pub fn solve_frozen_from(
    mesh: &Mesh,
    g: &GridFunction,
    p: f64,
    init: &GridFunction,
    opts: &SolverOptions,
) -> Result<GridFunction> {
    check_exponent(p)?;
    opts.validate()?;
    check_source(mesh, g)?;
    mesh.check(init)?;
    let load = Load::Frozen(g.values());
    if p == 2.0 {
        return Ok(newton(
            mesh,
            p,
            &load,
            init.values(),
            opts.eps_grad,
            opts.eps_zero,
            opts,
        )?
        .0
        .into());
    }
    Ok(newton_continued(mesh, p, &load, init.values(), opts)?.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_interval_mesh, build_radial_mesh};
    use crate::pde::{energy, residual};
    use core::f64::consts::PI;

    #[test]
    fn zero_source_gives_zero() {
        let m = build_interval_mesh(16, 1.0).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let v =
                solve_frozen(&m, &GridFunction::zeros(&m), p, &SolverOptions::default()).unwrap();
            assert!(v.values().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn linear_sine() {
        let m = build_interval_mesh(256, PI).unwrap();
        let g = GridFunction::from_fn(&m, |x| 2.0 * x.sin());
        let v = solve_frozen(&m, &g, 2.0, &SolverOptions::default()).unwrap();
        let err = m
            .nodes()
            .iter()
            .zip(v.values())
            .fold(0.0f64, |e, (x, v)| e.max((x.sin() - v).abs()));
        assert!(err <= 1e-3, "{err}");
    }

    #[test]
    fn nonlinear_solutions_meet_tolerance() {
        let opts = SolverOptions::default();
        for (mesh, p) in [
            (build_interval_mesh(128, 1.0).unwrap(), 1.5),
            (build_interval_mesh(128, 1.0).unwrap(), 3.0),
            (build_radial_mesh(3, 128, 1.0).unwrap(), 1.5),
            (build_radial_mesh(3, 128, 1.0).unwrap(), 4.0),
        ] {
            let g = GridFunction::constant(&mesh, 1.0);
            let v = solve_frozen(&mesh, &g, p, &opts).unwrap();
            let r = residual(&mesh, &v, &g, p, &opts).unwrap();
            assert!(
                sup(r.values()) <= 2.0 * opts.newton_tol,
                "p={p} r={}",
                sup(r.values())
            );
            assert!(v.values().iter().all(|&x| x >= 0.0));
            assert_eq!(v.values()[mesh.n_cells()], 0.0);
        }
    }

    #[test]
    fn warm_start_reaches_same_point() {
        let m = build_interval_mesh(64, 1.0).unwrap();
        let g = GridFunction::from_fn(&m, |x| 1.0 + x);
        let opts = SolverOptions::default();
        let a = solve_frozen(&m, &g, 3.0, &opts).unwrap();
        let b = solve_frozen_from(&m, &g, 3.0, &GridFunction::constant(&m, 0.3), &opts).unwrap();
        let d = a.zip_map(&b, |x, y| x - y);
        assert!(sup(d.values()) < 1e-8);
    }

    #[test]
    fn solution_minimizes_energy() {
        let m = build_interval_mesh(64, 1.0).unwrap();
        let g = GridFunction::constant(&m, 1.0);
        let v = solve_frozen(&m, &g, 2.5, &SolverOptions::default()).unwrap();
        let e0 = energy(&m, &v, &g, 2.5).unwrap();
        let bump = GridFunction::from_fn(&m, |x| (PI * x).sin());
        for t in [-0.05, -0.01, 0.01, 0.05] {
            let w = v.zip_map(&bump, |a, b| (a + t * b).max(0.0));
            assert!(energy(&m, &w, &g, 2.5).unwrap() >= e0);
        }
    }

    #[test]
    fn negative_source_is_rejected() {
        let m = build_interval_mesh(8, 1.0).unwrap();
        let g = GridFunction::constant(&m, -1.0);
        assert!(solve_frozen(&m, &g, 2.0, &SolverOptions::default()).is_err());
    }
}
