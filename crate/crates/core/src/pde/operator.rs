use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_exponent, SolverOptions, Tridiagonal};
use crate::mesh::{cell_gradient, integrate, integrate_cells, GridFunction, Mesh};
use crate::{Error, Result};

/// Right-hand side of the lower-order balance at each node.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Load<'a> {
    Frozen(&'a [f64]),
    /// `scale · f / (|u| + shift)^α`, coupled to the unknown.
    Singular {
        f: &'a [f64],
        shift: f64,
        alpha: f64,
        scale: f64,
    },
}

impl Load<'_> {
    #[inline]
    pub(crate) fn value(&self, i: usize, u: f64) -> f64 {
        match *self {
            Load::Frozen(g) => g[i],
            Load::Singular {
                f,
                shift,
                alpha,
                scale,
            } => scale * f[i] / (u.abs() + shift).powf(alpha),
        }
    }

    /// Derivative of the load with respect to `u`.
    #[inline]
    pub(crate) fn slope(&self, i: usize, u: f64) -> f64 {
        match *self {
            Load::Frozen(_) => 0.0,
            Load::Singular {
                f,
                shift,
                alpha,
                scale,
            } => {
                let sign = if u < 0.0 { -1.0 } else { 1.0 };
                -sign * alpha * scale * f[i] / (u.abs() + shift).powf(alpha + 1.0)
            }
        }
    }
}

#[inline]
fn flux(s: f64, p: f64, eps: f64) -> f64 {
    if p == 2.0 {
        return s;
    }
    (s * s + eps * eps).powf(0.5 * (p - 2.0)) * s
}

#[inline]
fn flux_slope(s: f64, p: f64, eps: f64) -> f64 {
    if p == 2.0 {
        return 1.0;
    }
    let q = s * s + eps * eps;
    q.powf(0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps)
}

/// Positive volume each residual row is divided by: the trapezoidal node
/// weight, or the exact dual volume `(h/2)^N / N` at the centre of a ball.
pub fn row_volumes(mesh: &Mesh) -> Vec<f64> {
    let v = mesh.node_weights();
    let h0 = mesh.cell_widths()[0];
    let n = mesh.dimension();
    v.iter()
        .map(|&w| {
            if w > 0.0 {
                w
            } else {
                (0.5 * h0).powi(n as i32) / n as f64
            }
        })
        .collect()
}

pub(crate) fn assemble_residual(
    mesh: &Mesh,
    u: &[f64],
    load: &Load<'_>,
    p: f64,
    eps_grad: f64,
    eps_zero: f64,
    scale: &[f64],
) -> Vec<f64> {
    let h = mesh.cell_widths();
    let w = mesh.cell_weights();
    let v = mesh.node_weights();
    let n = u.len();
    let mut r = alloc::vec![0.0; n];
    for i in 0..n - 1 {
        let s = (u[i + 1] - u[i]) / h[i];
        let q = w[i] * flux(s, p, eps_grad) / h[i];
        r[i] -= q;
        r[i + 1] += q;
    }
    for j in 0..n {
        if mesh.is_dirichlet(j) {
            r[j] = u[j];
        } else {
            r[j] = (r[j] + v[j] * (flux(u[j], p, eps_zero) - load.value(j, u[j]))) / scale[j];
        }
    }
    r
}

pub(crate) fn assemble_jacobian(
    mesh: &Mesh,
    u: &[f64],
    load: &Load<'_>,
    p: f64,
    eps_grad: f64,
    eps_zero: f64,
    scale: &[f64],
) -> Tridiagonal {
    let h = mesh.cell_widths();
    let w = mesh.cell_weights();
    let v = mesh.node_weights();
    let n = u.len();
    let k: Vec<f64> = (0..n - 1)
        .map(|i| {
            let s = (u[i + 1] - u[i]) / h[i];
            w[i] * flux_slope(s, p, eps_grad) / (h[i] * h[i])
        })
        .collect();
    let mut m = Tridiagonal::zeros(n);
    for j in 0..n {
        if mesh.is_dirichlet(j) {
            m.diag[j] = 1.0;
            continue;
        }
        let mut d = v[j] * (flux_slope(u[j], p, eps_zero) - load.slope(j, u[j]));
        if j > 0 {
            d += k[j - 1];
            m.lower[j - 1] = -k[j - 1] / scale[j];
        }
        if j + 1 < n {
            d += k[j];
            m.upper[j] = -k[j] / scale[j];
        }
        m.diag[j] = d / scale[j];
    }
    m
}

fn check_inputs(mesh: &Mesh, u: &GridFunction, g: Option<&GridFunction>, p: f64) -> Result<()> {
    check_exponent(p)?;
    mesh.check(u)?;
    if !u.is_finite() {
        return Err(Error::NumericError("u has non-finite entries"));
    }
    if let Some(g) = g {
        mesh.check(g)?;
        if !g.is_finite() {
            return Err(Error::NumericError("source has non-finite entries"));
        }
    }
    Ok(())
}

/// Nodal residual of `−Δ_p u + |u|^{p−2}u − g` with the smoothing in `opts`.
pub fn residual(
    mesh: &Mesh,
    u: &GridFunction,
    g: &GridFunction,
    p: f64,
    opts: &SolverOptions,
) -> Result<GridFunction> {
    check_inputs(mesh, u, Some(g), p)?;
    let scale = row_volumes(mesh);
    let load = Load::Frozen(g.values());
    Ok(assemble_residual(
        mesh,
        u.values(),
        &load,
        p,
        opts.eps_grad,
        opts.eps_zero,
        &scale,
    )
    .into())
}

/// Exact derivative of [`residual`] with respect to the nodal values.
pub fn jacobian(
    mesh: &Mesh,
    u: &GridFunction,
    p: f64,
    opts: &SolverOptions,
) -> Result<Tridiagonal> {
    check_inputs(mesh, u, None, p)?;
    let scale = row_volumes(mesh);
    let zeros = alloc::vec![0.0; mesh.n_nodes()];
    let load = Load::Frozen(&zeros);
    Ok(assemble_jacobian(
        mesh,
        u.values(),
        &load,
        p,
        opts.eps_grad,
        opts.eps_zero,
        &scale,
    ))
}

/// `J(v) = (1/p)∫|∇v|^p + (1/p)∫|v|^p − ∫ g v`, unsmoothed.
pub fn energy(mesh: &Mesh, v: &GridFunction, g: &GridFunction, p: f64) -> Result<f64> {
    check_inputs(mesh, v, Some(g), p)?;
    let grad: Vec<f64> = cell_gradient(mesh, v)?
        .iter()
        .map(|s| s.abs().powf(p))
        .collect();
    let dirichlet = integrate_cells(mesh, &grad)?;
    let mass = integrate(mesh, &v.map(|x| x.abs().powf(p)))?;
    let work = integrate(mesh, &v.zip_map(g, |a, b| a * b))?;
    Ok((dirichlet + mass) / p - work)
}
