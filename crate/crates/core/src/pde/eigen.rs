use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::newton::{newton, newton_continued};
use super::{check_exponent, Load, SolverOptions};
use crate::mesh::{cell_gradient, integrate, integrate_cells, GridFunction, Mesh, MeshKind};
use crate::{Error, Result};

/// First Dirichlet eigenpair of `−Δ_p Φ = λ Φ^{p−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub lambda: f64,
    /// Nonnegative, zero on the Dirichlet boundary, `max Φ = 1`.
    pub phi: GridFunction,
}

pub(crate) fn rayleigh_quotient(mesh: &Mesh, phi: &GridFunction, p: f64) -> Result<f64> {
    let grad: Vec<f64> = cell_gradient(mesh, phi)?
        .iter()
        .map(|s| s.abs().powf(p))
        .collect();
    let num = integrate_cells(mesh, &grad)?;
    let den = integrate(mesh, &phi.map(|v| v.abs().powf(p)))?;
    if !(den > 0.0) {
        return Err(Error::DomainError("eigenfunction iterate vanished"));
    }
    Ok(num / den)
}

fn normalized(mut v: Vec<f64>) -> Result<GridFunction> {
    let top = v.iter().fold(0.0f64, |m, x| m.max(*x));
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::DomainError("eigenfunction iterate is not positive"));
    }
    v.iter_mut().for_each(|x| *x = (*x / top).max(0.0));
    Ok(v.into())
}

/// Positive profile vanishing on the Dirichlet boundary.
fn dirichlet_profile(mesh: &Mesh) -> GridFunction {
    let l = mesh.extent();
    match mesh.kind() {
        MeshKind::Interval => {
            GridFunction::from_fn(mesh, |x| (core::f64::consts::PI * x / l).sin())
        }
        MeshKind::RadialBall => {
            GridFunction::from_fn(mesh, |r| (0.5 * core::f64::consts::PI * r / l).cos())
        }
    }
}

/// First eigenpair, started from the first Dirichlet Laplacian mode.
///
/// The Laplacian mode is itself computed on the mesh (the `p = 2` problem)
/// before the `p`-dependent descent starts.
pub fn first_eigenpair(mesh: &Mesh, p: f64, opts: &SolverOptions) -> Result<Eigenpair> {
    check_exponent(p)?;
    let start = dirichlet_profile(mesh);
    if p == 2.0 {
        return first_eigenpair_from(mesh, p, &start, opts);
    }
    let laplace = first_eigenpair_from(mesh, 2.0, &start, opts)?;
    first_eigenpair_from(mesh, p, &laplace.phi, opts)
}

/// Rayleigh-quotient descent from a nonnegative initial guess.
///
/// The descent direction is the inverse-iteration update: `v` solves
/// `−Δ_p v + v^{p−1} = Φ^{p−1}` and the candidate is the sup-normalized
/// `Φ + t (v/‖v‖_∞ − Φ)`, with `t` halved until the quotient does not
/// increase. Both sides of the shifted operator are `(p−1)`-homogeneous, so
/// its fixed points are exactly the eigenfunctions.
pub fn first_eigenpair_from(
    mesh: &Mesh,
    p: f64,
    init: &GridFunction,
    opts: &SolverOptions,
) -> Result<Eigenpair> {
    check_exponent(p)?;
    opts.validate()?;
    mesh.check(init)?;
    if init.values().iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::DomainError(
            "initial eigenfunction guess must be nonnegative",
        ));
    }
    let mut start = init.clone();
    for j in 0..mesh.n_nodes() {
        if mesh.is_dirichlet(j) {
            start.values_mut()[j] = 0.0;
        }
    }
    let mut phi = normalized(start.into_values())?;
    let mut lambda = rayleigh_quotient(mesh, &phi, p)?;
    let mut v_prev = phi.clone();
    for it in 0..opts.max_eig_iters {
        let rhs: Vec<f64> = phi.values().iter().map(|x| x.powf(p - 1.0)).collect();
        let load = Load::Frozen(&rhs);
        let v = if it == 0 && p != 2.0 {
            newton_continued(mesh, p, &load, v_prev.values(), opts)?
        } else {
            newton(
                mesh,
                p,
                &load,
                v_prev.values(),
                opts.eps_grad,
                opts.eps_zero,
                opts,
            )?
            .0
        };
        let target = normalized(v.clone())?;
        v_prev = v.into();
        let mut t = 1.0;
        let (cand, cand_lambda) = loop {
            let c = normalized(phi.zip_map(&target, |a, b| a + t * (b - a)).into_values())?;
            let l = rayleigh_quotient(mesh, &c, p)?;
            if l <= lambda * (1.0 + 1e-13) || t < opts.damping.min_step {
                break (c, l);
            }
            t *= opts.damping.factor;
        };
        let change = cand
            .zip_map(&phi, |a, b| a - b)
            .values()
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()));
        let dl = (lambda - cand_lambda).abs();
        phi = cand;
        lambda = cand_lambda;
        if dl <= opts.eig_tol * lambda && change <= opts.eig_tol.sqrt() {
            return Ok(Eigenpair { lambda, phi });
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_eig_iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_interval_mesh, build_radial_mesh};
    use core::f64::consts::PI;

    #[test]
    fn laplace_interval() {
        let m = build_interval_mesh(256, 1.0).unwrap();
        let e = first_eigenpair(&m, 2.0, &SolverOptions::default()).unwrap();
        assert!((e.lambda / (PI * PI) - 1.0).abs() < 0.005);
        let err = m
            .nodes()
            .iter()
            .zip(e.phi.values())
            .fold(0.0f64, |a, (x, v)| a.max(((PI * x).sin() - v).abs()));
        assert!(err < 1e-3, "{err}");
        assert_eq!(e.phi.max(), 1.0);
    }

    #[test]
    fn laplace_ball() {
        let m = build_radial_mesh(3, 256, 1.0).unwrap();
        let e = first_eigenpair(&m, 2.0, &SolverOptions::default()).unwrap();
        assert!((e.lambda / (PI * PI) - 1.0).abs() < 0.01);
        let err = m
            .nodes()
            .iter()
            .zip(e.phi.values())
            .skip(1)
            .fold(0.0f64, |a, (r, v)| {
                a.max(((PI * r).sin() / (PI * r) - v).abs())
            });
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn scale_of_initial_guess_is_irrelevant() {
        let m = build_interval_mesh(64, 1.0).unwrap();
        let g = GridFunction::from_fn(&m, |x| x * (1.0 - x));
        let opts = SolverOptions::default();
        let a = first_eigenpair_from(&m, 1.7, &g, &opts).unwrap();
        let b = first_eigenpair_from(&m, 1.7, &g.map(|v| 4.0 * v), &opts).unwrap();
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.phi, b.phi);
    }
}
