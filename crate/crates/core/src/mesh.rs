//! Uniform 1-D grids for intervals and radially symmetric balls.
//!
//! A radial mesh discretizes the radius `r ∈ [0, R]` of the ball
//! `B_R ⊂ R^N`. Integrals over the ball are reduced to
//! `|S^{N−1}| ∫_0^R g(r) r^{N−1} dr`, so every quadrature here carries the
//! radial weight and the surface measure of the unit sphere.

use alloc::vec::Vec;
use core::ops::{Index, RangeInclusive};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    /// `(0, L)` with Dirichlet conditions at both ends.
    Interval,
    /// Ball of radius `R` in `R^N`, symmetry at the centre, Dirichlet at `r = R`.
    RadialBall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    kind: MeshKind,
    dimension: usize,
    extent: f64,
    nodes: Vec<f64>,
    cell_widths: Vec<f64>,
    radial_weight: Vec<f64>,
    volume_constant: f64,
    // ∫_cell r^{N−1} dr, exact
    cell_weight: Vec<f64>,
    // trapezoidal dual weight per node
    node_weight: Vec<f64>,
}

/// Surface measure of the unit sphere `S^{N−1}`: `2 π^{N/2} / Γ(N/2)`.
pub fn unit_sphere_surface(dimension: usize) -> f64 {
    let half = dimension as f64 / 2.0;
    2.0 * core::f64::consts::PI.powf(half) / libm::tgamma(half)
}

pub fn build_interval_mesh(n_cells: usize, length: f64) -> Result<Mesh> {
    if n_cells < 2 {
        return Err(Error::InvalidMesh("at least two cells are required"));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidMesh("length must be positive and finite"));
    }
    Ok(Mesh::uniform(MeshKind::Interval, 1, n_cells, length, 1.0))
}

pub fn build_radial_mesh(dimension: usize, n_cells: usize, radius: f64) -> Result<Mesh> {
    if dimension < 1 {
        return Err(Error::InvalidMesh("dimension must be at least one"));
    }
    if n_cells < 2 {
        return Err(Error::InvalidMesh("at least two cells are required"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidMesh("radius must be positive and finite"));
    }
    let c = unit_sphere_surface(dimension);
    Ok(Mesh::uniform(
        MeshKind::RadialBall,
        dimension,
        n_cells,
        radius,
        c,
    ))
}

impl Mesh {
    fn uniform(
        kind: MeshKind,
        dimension: usize,
        n_cells: usize,
        extent: f64,
        volume_constant: f64,
    ) -> Self {
        let h = extent / n_cells as f64;
        let mut nodes: Vec<f64> = (0..=n_cells).map(|i| i as f64 * h).collect();
        nodes[n_cells] = extent;
        let cell_widths: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();
        let exponent = (dimension - 1) as i32;
        let radial_weight: Vec<f64> = match kind {
            MeshKind::Interval => alloc::vec![1.0; n_cells + 1],
            MeshKind::RadialBall => nodes.iter().map(|r| r.powi(exponent)).collect(),
        };
        let cell_weight: Vec<f64> = match kind {
            MeshKind::Interval => cell_widths.clone(),
            MeshKind::RadialBall => {
                let n = dimension as i32;
                nodes
                    .windows(2)
                    .map(|w| (w[1].powi(n) - w[0].powi(n)) / dimension as f64)
                    .collect()
            }
        };
        let mut node_weight = alloc::vec![0.0; n_cells + 1];
        for (i, h) in cell_widths.iter().enumerate() {
            node_weight[i] += 0.5 * h * radial_weight[i];
            node_weight[i + 1] += 0.5 * h * radial_weight[i + 1];
        }
        Mesh {
            kind,
            dimension,
            extent,
            nodes,
            cell_widths,
            radial_weight,
            volume_constant,
            cell_weight,
            node_weight,
        }
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_widths(&self) -> &[f64] {
        &self.cell_widths
    }

    pub fn radial_weight(&self) -> &[f64] {
        &self.radial_weight
    }

    pub fn volume_constant(&self) -> f64 {
        self.volume_constant
    }

    /// Exact `∫_cell r^{N−1} dr` for each cell (the cell width on intervals).
    pub fn cell_weights(&self) -> &[f64] {
        &self.cell_weight
    }

    /// Trapezoidal dual weight of each node, without the volume constant.
    pub fn node_weights(&self) -> &[f64] {
        &self.node_weight
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cell_widths.len()
    }

    /// Nodes carrying a homogeneous Dirichlet constraint.
    pub fn is_dirichlet(&self, node: usize) -> bool {
        let last = self.n_cells();
        match self.kind {
            MeshKind::Interval => node == 0 || node == last,
            MeshKind::RadialBall => node == last,
        }
    }

    /// Exact measure of the domain.
    pub fn measure(&self) -> f64 {
        match self.kind {
            MeshKind::Interval => self.extent,
            MeshKind::RadialBall => {
                self.volume_constant * self.extent.powi(self.dimension as i32)
                    / self.dimension as f64
            }
        }
    }

    /// Distance of a node to the boundary of the domain.
    pub fn boundary_distance(&self, node: usize) -> f64 {
        let x = self.nodes[node];
        match self.kind {
            MeshKind::Interval => x.min(self.extent - x),
            MeshKind::RadialBall => self.extent - x,
        }
    }

    /// Inclusive node range of the subdomain at distance `≥ margin` from the
    /// boundary. A zero margin gives the whole mesh.
    pub fn subdomain(&self, margin: f64) -> Result<RangeInclusive<usize>> {
        if !(margin >= 0.0) || margin >= 0.5 * self.extent {
            return Err(Error::InvalidSubdomain { margin });
        }
        if margin == 0.0 {
            return Ok(0..=self.n_cells());
        }
        // tolerate round-off in node placement
        let slack = 1e-9 * self.extent;
        let inside: Vec<usize> = (0..self.n_nodes())
            .filter(|&i| self.boundary_distance(i) + slack >= margin)
            .collect();
        match (inside.first(), inside.last()) {
            (Some(&a), Some(&b)) if b > a => Ok(a..=b),
            _ => Err(Error::InvalidSubdomain { margin }),
        }
    }

    pub(crate) fn check(&self, g: &GridFunction) -> Result<()> {
        if g.len() != self.n_nodes() {
            return Err(Error::MeshMismatch {
                expected: self.n_nodes(),
                found: g.len(),
            });
        }
        Ok(())
    }
}

/// Nodal values on a [`Mesh`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GridFunction {
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        GridFunction { values }
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        GridFunction {
            values: alloc::vec![0.0; mesh.n_nodes()],
        }
    }

    pub fn constant(mesh: &Mesh, c: f64) -> Self {
        GridFunction {
            values: alloc::vec![c; mesh.n_nodes()],
        }
    }

    pub fn from_fn(mesh: &Mesh, f: impl Fn(f64) -> f64) -> Self {
        GridFunction {
            values: mesh.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        GridFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

impl From<Vec<f64>> for GridFunction {
    fn from(values: Vec<f64>) -> Self {
        GridFunction { values }
    }
}

impl Index<usize> for GridFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

/// Trapezoidal quadrature of `g` against the radial weight, scaled by the
/// volume constant.
pub fn integrate(mesh: &Mesh, g: &GridFunction) -> Result<f64> {
    mesh.check(g)?;
    Ok(integrate_nodes(mesh, g.values(), 0..=mesh.n_cells()))
}

/// Trapezoidal quadrature restricted to the cells spanned by `nodes`.
pub(crate) fn integrate_nodes(mesh: &Mesh, g: &[f64], nodes: RangeInclusive<usize>) -> f64 {
    let (a, b) = (*nodes.start(), *nodes.end());
    let w = mesh.radial_weight();
    let h = mesh.cell_widths();
    let sum: f64 = (a..b)
        .map(|i| 0.5 * h[i] * (g[i] * w[i] + g[i + 1] * w[i + 1]))
        .sum();
    mesh.volume_constant() * sum
}

/// Integral of a piecewise-constant cell quantity; exact for it.
pub fn integrate_cells(mesh: &Mesh, cell_values: &[f64]) -> Result<f64> {
    if cell_values.len() != mesh.n_cells() {
        return Err(Error::MeshMismatch {
            expected: mesh.n_cells(),
            found: cell_values.len(),
        });
    }
    Ok(integrate_cell_range(mesh, cell_values, 0..mesh.n_cells()))
}

pub(crate) fn integrate_cell_range(
    mesh: &Mesh,
    cell_values: &[f64],
    cells: core::ops::Range<usize>,
) -> f64 {
    let w = mesh.cell_weights();
    mesh.volume_constant() * cells.map(|i| w[i] * cell_values[i]).sum::<f64>()
}

/// Forward difference `(u_{i+1} − u_i) / h_i` per cell.
pub fn cell_gradient(mesh: &Mesh, u: &GridFunction) -> Result<Vec<f64>> {
    mesh.check(u)?;
    Ok(u.values()
        .windows(2)
        .zip(mesh.cell_widths())
        .map(|(w, h)| (w[1] - w[0]) / h)
        .collect())
}
