//! One particle in the double well on the DVR grid.

use nalgebra::DMatrix;

use crate::eigen::dense_symmetric;
use crate::error::{Error, Result};
use crate::grid::{kinetic_matrix, potential_vector, Grid};

/// Eigenvalues closer than this are treated as one degenerate subspace.
const DEGENERACY_TOL: f64 = 1e-10;
/// Max-abs tolerance for `u(x) = +/- u(-x)`.
const PARITY_TOL: f64 = 1e-8;
/// Relative threshold for the first "significant" amplitude in sign fixing.
const SIGN_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn from_sign(sign: f64) -> Self {
        if sign >= 0.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl std::ops::Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        Parity::from_sign(self.sign() * rhs.sign())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    pub index: usize,
    pub energy: f64,
    /// Orbital values `u(x_j)`, normalized so that `h sum_j u_j^2 = 1`.
    pub orbital: Vec<f64>,
    pub parity: Parity,
}

/// Lowest `n_states` eigenstates of `-1/2 d^2/dx^2 + x^4 - kappa x^2`.
pub fn solve_single(grid: &Grid, kappa: f64, n_states: usize) -> Result<Vec<SingleParticleState>> {
    let v = potential_vector(grid, kappa).values;
    solve_with_potential(grid, &v, n_states)
}

/// Single-particle Hamiltonian matrix `T + diag(V)` in the DVR basis.
pub fn hamiltonian(grid: &Grid, potential: &[f64]) -> DMatrix<f64> {
    let mut h = kinetic_matrix(grid);
    for (i, v) in potential.iter().enumerate() {
        h[(i, i)] += v;
    }
    h
}

/// Solver for an arbitrary even potential sampled on the grid.
pub(crate) fn solve_with_potential(grid: &Grid, potential: &[f64], n_states: usize) -> Result<Vec<SingleParticleState>> {
    let n = grid.len();
    if n_states > n {
        return Err(Error::Precondition(format!(
            "requested {n_states} states from a {n}-point grid"
        )));
    }
    let pairs = dense_symmetric(hamiltonian(grid, potential))?;
    let mut values = pairs.values;
    let mut vectors = pairs.vectors;

    // Take one extra state so a degenerate partner of the last wanted state
    // is rotated together with it.
    let mut take = n_states;
    while take < n && take > 0 && (values[take] - values[take - 1]).abs() < DEGENERACY_TOL {
        take += 1;
    }
    values.truncate(take);
    vectors.truncate(take);
    restore_parity(grid, &values, &mut vectors);

    let norm = 1.0 / grid.spacing().sqrt();
    let mut states = Vec::with_capacity(n_states);
    for (index, (energy, c)) in values.into_iter().zip(vectors).enumerate().take(n_states) {
        let mut orbital: Vec<f64> = c.iter().map(|x| x * norm).collect();
        fix_sign(&mut orbital);
        let parity = classify_parity(grid, &orbital).ok_or_else(|| Error::Classification {
            index,
            reason: "orbital has no definite parity".into(),
        })?;
        states.push(SingleParticleState {
            index,
            energy,
            orbital,
            parity,
        });
    }
    Ok(states)
}

/// Flips the sign so the first amplitude above `1e-6 max|u|` is positive.
pub fn fix_sign(values: &mut [f64]) {
    let max = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = values.iter().find(|x| x.abs() > SIGN_THRESHOLD * max) {
        if *first < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Parity of a grid function, if it is even or odd to within `1e-8`.
pub fn classify_parity(grid: &Grid, u: &[f64]) -> Option<Parity> {
    let mut even_dev = 0.0f64;
    let mut odd_dev = 0.0f64;
    for i in 0..grid.len() {
        let r = u[grid.mirror(i)];
        even_dev = even_dev.max((u[i] - r).abs());
        odd_dev = odd_dev.max((u[i] + r).abs());
    }
    if even_dev <= PARITY_TOL {
        Some(Parity::Even)
    } else if odd_dev <= PARITY_TOL {
        Some(Parity::Odd)
    } else {
        None
    }
}

/// Replaces every cluster of (numerically) degenerate eigenvectors by an
/// orthonormal basis of its even and odd projections.
fn restore_parity(grid: &Grid, values: &[f64], vectors: &mut [Vec<f64>]) {
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && (values[end] - values[end - 1]).abs() < DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            let mut projected = Vec::new();
            for sign in [1.0, -1.0] {
                for v in &vectors[start..end] {
                    let p: Vec<f64> = (0..v.len())
                        .map(|i| 0.5 * (v[i] + sign * v[grid.mirror(i)]))
                        .collect();
                    projected.push(p);
                }
            }
            let basis = gram_schmidt(projected, end - start);
            for (slot, b) in vectors[start..end].iter_mut().zip(basis) {
                *slot = b;
            }
        }
        start = end;
    }
}

/// Orthonormalizes candidates in order, dropping those that are (nearly)
/// dependent, and keeps the first `keep` survivors.
fn gram_schmidt(candidates: Vec<Vec<f64>>, keep: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(keep);
    for mut c in candidates {
        for _ in 0..2 {
            for b in &out {
                let d: f64 = b.iter().zip(&c).map(|(x, y)| x * y).sum();
                c.iter_mut().zip(b).for_each(|(ci, bi)| *ci -= d * bi);
            }
        }
        let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            c.iter_mut().for_each(|x| *x /= n);
            out.push(c);
        }
        if out.len() == keep {
            break;
        }
    }
    out
}
