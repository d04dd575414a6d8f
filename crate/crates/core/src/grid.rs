//! Uniform grid, sinc-DVR kinetic matrix and double-well potential samples.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Centred uniform mesh with an odd number of points, so that `x = 0` is a
/// node and reflection `x -> -x` maps node `i` to node `n - 1 - i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    spacing: f64,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, spacing: f64) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "number of points must be odd and at least 3, got {n}"
            )));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        let centre = ((n - 1) / 2) as i64;
        let points = (0..n)
            .map(|i| (i as i64 - centre) as f64 * spacing)
            .collect();
        Ok(Grid { n, spacing, points })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Largest coordinate, `(n - 1) / 2 * h`.
    pub fn half_span(&self) -> f64 {
        self.points[self.n - 1]
    }

    /// Index of the mirror node of `i`.
    #[inline]
    pub fn mirror(&self, i: usize) -> usize {
        self.n - 1 - i
    }
}

/// Convenience alias matching [`Grid::new`].
pub fn make_grid(n: usize, spacing: f64) -> Result<Grid> {
    Grid::new(n, spacing)
}

/// Sinc-DVR (Colbert-Miller) representation of `-1/2 d^2/dx^2`.
pub fn kinetic_matrix(grid: &Grid) -> DMatrix<f64> {
    let n = grid.len();
    let h2 = grid.spacing() * grid.spacing();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            PI * PI / (6.0 * h2)
        } else {
            let d = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            sign / (h2 * d * d)
        }
    })
}

/// Quartic double well `V(x) = x^4 - kappa x^2` sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSamples {
    pub values: Vec<f64>,
    pub kappa: f64,
}

pub fn double_well(x: f64, kappa: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 - kappa * x2
}

pub fn potential_vector(grid: &Grid, kappa: f64) -> PotentialSamples {
    PotentialSamples {
        values: grid.points().iter().map(|&x| double_well(x, kappa)).collect(),
        kappa,
    }
}

/// Location and depth of the double-well minima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellGeometry {
    pub x_min: f64,
    pub v_min: f64,
    /// Set when `kappa < 0`: the potential has a single minimum at the origin.
    pub single_well: bool,
}

pub fn well_geometry(kappa: f64) -> WellGeometry {
    if kappa < 0.0 {
        return WellGeometry {
            x_min: 0.0,
            v_min: 0.0,
            single_well: true,
        };
    }
    WellGeometry {
        x_min: (kappa / 2.0).sqrt(),
        v_min: -kappa * kappa / 4.0,
        single_well: false,
    }
}
