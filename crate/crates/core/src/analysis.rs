//! Norms and integral functionals of grid functions.
//!
//! Zero-order integrals use the trapezoidal rule of [`crate::mesh::integrate`];
//! gradient integrals are exact for the piecewise-linear interpolant, since
//! the cell slope is constant and the cell weight is the exact radial moment.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::mesh::{
    cell_gradient, integrate, integrate_cell_range, integrate_nodes, GridFunction, Mesh,
};
use crate::regularization::{LevelSolution, SweepReport};
use crate::{Error, Result};

/// Default interior margin as a fraction of the domain extent.
pub const INTERIOR_MARGIN: f64 = 0.1;

fn check_exponent(s: f64) -> Result<()> {
    if !(s >= 1.0 && s.is_finite()) {
        return Err(Error::DomainError(
            "norm exponent must be a finite real ≥ 1",
        ));
    }
    Ok(())
}

/// `(∫|u|^s)^{1/s}`.
pub fn lebesgue_norm(mesh: &Mesh, u: &GridFunction, s: f64) -> Result<f64> {
    check_exponent(s)?;
    let total = integrate(mesh, &u.map(|v| v.abs().powf(s)))?;
    Ok(total.max(0.0).powf(1.0 / s))
}

/// `(∫_{Ω′}|∇u|^q)^{1/q}` over the subdomain at distance `≥ margin` from the
/// boundary.
pub fn gradient_norm(mesh: &Mesh, u: &GridFunction, q: f64, margin: f64) -> Result<f64> {
    check_exponent(q)?;
    let nodes = mesh.subdomain(margin)?;
    let grad: Vec<f64> = cell_gradient(mesh, u)?
        .iter()
        .map(|s| s.abs().powf(q))
        .collect();
    Ok(integrate_cell_range(mesh, &grad, *nodes.start()..*nodes.end()).powf(1.0 / q))
}

/// `(∫_{Ω′}|∇u|^q + ∫_{Ω′}|u|^q)^{1/q}`; `Ω′ = Ω` when `margin = 0`.
pub fn sobolev_norm(mesh: &Mesh, u: &GridFunction, q: f64, margin: f64) -> Result<f64> {
    check_exponent(q)?;
    let nodes = mesh.subdomain(margin)?;
    let grad: Vec<f64> = cell_gradient(mesh, u)?
        .iter()
        .map(|s| s.abs().powf(q))
        .collect();
    let dirichlet = integrate_cell_range(mesh, &grad, *nodes.start()..*nodes.end());
    let abs: Vec<f64> = u.values().iter().map(|v| v.abs().powf(q)).collect();
    let mass = integrate_nodes(mesh, &abs, nodes);
    Ok((dirichlet + mass).powf(1.0 / q))
}

pub fn sup_norm(u: &GridFunction) -> f64 {
    u.values().iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Nodewise `u^β` for nonnegative `u`.
pub fn power_transform(u: &GridFunction, beta: f64) -> Result<GridFunction> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::DomainError("power must be positive and finite"));
    }
    if u.values().iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::DomainError(
            "power transform needs nonnegative values",
        ));
    }
    Ok(u.map(|v| v.powf(beta)))
}

// Mean of x^{−r} over the segment between a and b (a, b ≥ 0, not both 0).
fn cell_mean_negative_power(a: f64, b: f64, r: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi - lo <= 1e-12 * hi {
        return (0.5 * (lo + hi)).powf(-r);
    }
    if lo == 0.0 && r >= 1.0 {
        // divergent on the cell: midpoint value
        return (0.5 * hi).powf(-r);
    }
    if r == 1.0 {
        (hi / lo).ln() / (hi - lo)
    } else {
        (hi.powf(1.0 - r) - lo.powf(1.0 - r)) / ((1.0 - r) * (hi - lo))
    }
}

/// `∫ u^{−r}` for `u ≥ 0` vanishing only on the Dirichlet boundary.
///
/// Each cell contributes the exact mean of `x^{−r}` along the linear
/// interpolant of its endpoint values, times the cell's radial moment. When
/// that mean is infinite (a zero endpoint with `r ≥ 1`) the midpoint value
/// `((u_i + u_{i+1})/2)^{−r}` is used, so a divergent integral stays finite
/// on every grid and shows up as growth under refinement.
pub fn negative_power_integral(mesh: &Mesh, u: &GridFunction, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::DomainError("exponent must be positive and finite"));
    }
    if !u.is_finite() {
        return Err(Error::NumericError("u has non-finite entries"));
    }
    let v = u.values();
    mesh.check(u)?;
    if v.iter().any(|x| *x < 0.0) {
        return Err(Error::DomainError("negative-power integral needs u ≥ 0"));
    }
    if let Some(node) = (0..v.len()).find(|&j| !mesh.is_dirichlet(j) && v[j] <= 0.0) {
        return Err(Error::InteriorZero { node });
    }
    let w = mesh.cell_weights();
    let mut sum = 0.0;
    for i in 0..mesh.n_cells() {
        if v[i] == 0.0 && v[i + 1] == 0.0 {
            return Err(Error::InteriorZero { node: i });
        }
        sum += w[i] * cell_mean_negative_power(v[i], v[i + 1], r);
    }
    Ok(mesh.volume_constant() * sum)
}

/// Exponents requested for a [`NormTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormRequest {
    pub p: f64,
    pub alpha: f64,
    /// Lebesgue exponents `s`.
    pub lebesgue: Vec<f64>,
    /// Sobolev exponents `q`.
    pub sobolev: Vec<f64>,
    /// Negative-power exponents `r`.
    pub negative_powers: Vec<f64>,
    /// Absolute margin of the interior `W^{1,p}` norm.
    pub margin: f64,
}

impl NormRequest {
    /// `W^{1,p}` plus the default interior margin; no extra exponents.
    pub fn basic(mesh: &Mesh, p: f64, alpha: f64) -> Self {
        NormRequest {
            p,
            alpha,
            lebesgue: Vec::new(),
            sobolev: alloc::vec![p],
            negative_powers: Vec::new(),
            margin: INTERIOR_MARGIN * mesh.extent(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormRow {
    pub n: u64,
    /// `(s, ‖u‖_{L^s})`.
    pub lebesgue: Vec<(f64, f64)>,
    /// `(q, ‖u‖_{W^{1,q}})`.
    pub sobolev: Vec<(f64, f64)>,
    pub w1p_interior: f64,
    pub sup: f64,
    /// `‖u^{(p+α−1)/p}‖_{W^{1,p}}`.
    pub transformed_w1p: f64,
    /// `(r, ∫u^{−r})`; NaN when `u` has an interior zero.
    pub negative_powers: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NormTable {
    pub rows: Vec<NormRow>,
}

impl NormTable {
    /// Column names: `n, L{s}, W1{q}, W1p_loc, sup, TW1p, NPI{r}`.
    pub fn header(&self) -> Vec<alloc::string::String> {
        use alloc::format;
        let mut h = alloc::vec![alloc::string::String::from("n")];
        if let Some(row) = self.rows.first() {
            h.extend(row.lebesgue.iter().map(|(s, _)| format!("L{s}")));
            h.extend(row.sobolev.iter().map(|(q, _)| format!("W1{q}")));
            h.push("W1p_loc".into());
            h.push("sup".into());
            h.push("TW1p".into());
            h.extend(row.negative_powers.iter().map(|(r, _)| format!("NPI{r}")));
        }
        h
    }
}

pub fn norm_row(mesh: &Mesh, n: u64, u: &GridFunction, req: &NormRequest) -> Result<NormRow> {
    let p = req.p;
    let lebesgue = req
        .lebesgue
        .iter()
        .map(|&s| Ok((s, lebesgue_norm(mesh, u, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let sobolev = req
        .sobolev
        .iter()
        .map(|&q| Ok((q, sobolev_norm(mesh, u, q, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    let transformed = power_transform(&u.map(|v| v.max(0.0)), (p + req.alpha - 1.0) / p)?;
    let negative_powers = req
        .negative_powers
        .iter()
        .map(|&r| match negative_power_integral(mesh, u, r) {
            Ok(v) => Ok((r, v)),
            Err(Error::InteriorZero { .. }) => Ok((r, f64::NAN)),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormRow {
        n,
        lebesgue,
        sobolev,
        w1p_interior: sobolev_norm(mesh, u, p, req.margin)?,
        sup: sup_norm(u),
        transformed_w1p: sobolev_norm(mesh, &transformed, p, 0.0)?,
        negative_powers,
    })
}

pub fn norm_table(mesh: &Mesh, levels: &[LevelSolution], req: &NormRequest) -> Result<NormTable> {
    let rows = levels
        .iter()
        .map(|l| norm_row(mesh, l.n, &l.u, req))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormTable { rows })
}

/// Fills `report.norms` from its levels.
pub fn attach_norms(mesh: &Mesh, report: &mut SweepReport, req: &NormRequest) -> Result<()> {
    report.norms = Some(norm_table(mesh, &report.levels, req)?);
    Ok(())
}
