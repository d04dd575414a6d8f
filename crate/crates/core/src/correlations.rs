//! Reduced single-particle density matrix and the quantities derived from
//! it: natural orbitals, occupations, momentum distribution and entropy.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::eigen::dense_symmetric;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::two_particle::TwoBodyState;

/// Occupations below this are dropped from the entropy sum.
pub const ENTROPY_CUTOFF: f64 = 1e-14;
/// Largest negative occupation tolerated as round-off.
const NEGATIVE_TOL: f64 = 1e-10;

/// `rho(x_i, x_j)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Rspdm {
    pub matrix: DMatrix<f64>,
    pub band_index: Option<usize>,
    pub spacing: f64,
}

impl Rspdm {
    /// `h sum_i rho_ii`, equal to one for a normalized state.
    pub fn trace(&self) -> f64 {
        self.spacing * self.matrix.trace()
    }

    /// Single-particle density `rho(x_i, x_i)`.
    pub fn density(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }
}

/// Occupations in descending order and the matching natural orbitals,
/// normalized as `h sum phi^2 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub occupations: Vec<f64>,
    pub orbitals: Vec<Vec<f64>>,
    pub spacing: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumDistribution {
    pub k_values: Vec<f64>,
    pub n_values: Vec<f64>,
}

impl MomentumDistribution {
    /// Trapezoid rule over the stored k points.
    pub fn integral(&self) -> f64 {
        self.k_values
            .windows(2)
            .zip(self.n_values.windows(2))
            .map(|(k, n)| 0.5 * (k[1] - k[0]) * (n[0] + n[1]))
            .sum()
    }

    /// Number of strict interior local maxima with `k > 0`.
    pub fn positive_k_maxima(&self) -> usize {
        let n = &self.n_values;
        (1..n.len().saturating_sub(1))
            .filter(|&i| self.k_values[i] > 0.0 && n[i] > n[i - 1] && n[i] > n[i + 1])
            .count()
    }
}

/// `rho = h Psi Psi^T`, the quadrature of `int Psi(x, x2) Psi(x', x2) dx2`.
pub fn rspdm(state: &TwoBodyState, grid: &Grid) -> Rspdm {
    let h = grid.spacing();
    let mut matrix = &state.psi * state.psi.transpose() * h;
    // Exact symmetry for the eigensolver.
    matrix = (&matrix + matrix.transpose()) * 0.5;
    Rspdm {
        matrix,
        band_index: state.band_index,
        spacing: h,
    }
}

/// Eigen-decomposition of the kernel `h rho`, whose eigenvalues are the
/// dimensionless occupations.
pub fn natural_orbitals(rho: &Rspdm) -> Result<SpectralDecomposition> {
    let h = rho.spacing;
    let pairs = dense_symmetric(&rho.matrix * h)?;
    let scale = 1.0 / h.sqrt();
    let mut occupations = Vec::with_capacity(pairs.values.len());
    let mut orbitals = Vec::with_capacity(pairs.values.len());
    for (lambda, v) in pairs.values.into_iter().zip(pairs.vectors).rev() {
        if lambda < -NEGATIVE_TOL {
            return Err(Error::Precondition(format!(
                "density matrix has a negative occupation {lambda:e}"
            )));
        }
        occupations.push(lambda.max(0.0));
        let mut phi: Vec<f64> = v.iter().map(|x| x * scale).collect();
        crate::single_particle::fix_sign(&mut phi);
        orbitals.push(phi);
    }
    Ok(SpectralDecomposition {
        occupations,
        orbitals,
        spacing: h,
    })
}

/// `-sum lambda log2 lambda`, skipping occupations at or below `1e-14`.
/// Rounding residue below zero is clamped.
pub fn entropy_of(occupations: &[f64]) -> f64 {
    let s = -occupations
        .iter()
        .filter(|&&l| l > ENTROPY_CUTOFF)
        .map(|&l| l * l.log2())
        .sum::<f64>();
    s.max(0.0)
}

pub fn von_neumann_entropy(d: &SpectralDecomposition) -> f64 {
    entropy_of(&d.occupations)
}

/// Number of occupations strictly above `threshold`.
pub fn schmidt_number(d: &SpectralDecomposition, threshold: f64) -> usize {
    d.occupations.iter().filter(|&&l| l > threshold).count()
}

/// `4N` uniform points spanning the grid's Nyquist band `[-pi/h, pi/h]`.
pub fn default_k_grid(grid: &Grid) -> Vec<f64> {
    k_grid(grid, 4 * grid.len())
}

pub fn k_grid(grid: &Grid, points: usize) -> Vec<f64> {
    let kmax = PI / grid.spacing();
    if points < 2 {
        return vec![0.0; points];
    }
    let step = 2.0 * kmax / (points - 1) as f64;
    (0..points)
        .map(|i| {
            // Mirror the upper half so k_j = -k_{M-1-j} holds exactly.
            let j = points - 1 - i;
            if i <= j {
                -kmax + i as f64 * step
            } else {
                kmax - j as f64 * step
            }
        })
        .collect()
}

/// `n(k) = sum_j lambda_j |mu_j(k)|^2` with the orbital transforms
/// `mu_j(k) = (2 pi)^(-1/2) h sum_m phi_j(x_m) exp(-i k x_m)`.
pub fn momentum_distribution(d: &SpectralDecomposition, grid: &Grid, k_grid: &[f64]) -> MomentumDistribution {
    let x = grid.points();
    let h = grid.spacing();
    let pref = h * h / (2.0 * PI);
    let mut n_values = Vec::with_capacity(k_grid.len());
    let mut cos = vec![0.0; x.len()];
    let mut sin = vec![0.0; x.len()];
    for &k in k_grid {
        for (m, &xm) in x.iter().enumerate() {
            let (s, c) = (k * xm).sin_cos();
            cos[m] = c;
            sin[m] = s;
        }
        let mut total = 0.0;
        for (lambda, phi) in d.occupations.iter().zip(&d.orbitals) {
            if *lambda == 0.0 {
                continue;
            }
            let re: f64 = phi.iter().zip(&cos).map(|(p, c)| p * c).sum();
            let im: f64 = phi.iter().zip(&sin).map(|(p, s)| p * s).sum();
            total += lambda * (re * re + im * im);
        }
        n_values.push(pref * total);
    }
    MomentumDistribution {
        k_values: k_grid.to_vec(),
        n_values,
    }
}

/// Double quadrature `n(k) = (2 pi)^(-1) h^2 sum_ij rho_ij exp(-i k (x_i - x_j))`.
pub fn momentum_distribution_direct(rho: &Rspdm, grid: &Grid, k_grid: &[f64]) -> MomentumDistribution {
    let x = grid.points();
    let h = grid.spacing();
    let n = grid.len();
    let pref = h * h / (2.0 * PI);
    let n_values = k_grid
        .iter()
        .map(|&k| {
            let mut sum = 0.0;
            for j in 0..n {
                for i in 0..n {
                    // rho is real symmetric, so the sine part cancels.
                    sum += rho.matrix[(i, j)] * (k * (x[i] - x[j])).cos();
                }
            }
            pref * sum
        })
        .collect();
    MomentumDistribution {
        k_values: k_grid.to_vec(),
        n_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single_particle::solve_single;
    use crate::two_particle::{noninteracting_reference, solve_band, BandMember};

    fn grid() -> Grid {
        Grid::new(41, 0.2).unwrap()
    }

    #[test]
    fn product_state_is_pure() {
        let g = grid();
        let s = solve_single(&g, 1.0, 2).unwrap();
        let refs = noninteracting_reference(&g, &s[0], &s[1]);
        let rho = rspdm(&refs[0], &g);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        let d = natural_orbitals(&rho).unwrap();
        assert!((d.occupations[0] - 1.0).abs() < 1e-12);
        assert!(d.occupations[1].abs() < 1e-12);
        assert!(von_neumann_entropy(&d).abs() < 1e-10);
        assert_eq!(schmidt_number(&d, 1e-6), 1);
        let overlap: f64 = g.spacing() * d.orbitals[0].iter().zip(&s[0].orbital).map(|(a, b)| a * b).sum::<f64>();
        assert!((overlap.abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn antisymmetric_pair_has_unit_entropy() {
        let g = grid();
        let s = solve_single(&g, 3.0, 2).unwrap();
        let refs = noninteracting_reference(&g, &s[0], &s[1]);
        let rho = rspdm(&refs[1], &g);
        let expected = DMatrix::from_fn(g.len(), g.len(), |i, j| {
            0.5 * (s[0].orbital[i] * s[0].orbital[j] + s[1].orbital[i] * s[1].orbital[j])
        });
        assert!((&rho.matrix - expected).amax() < 1e-12);
        let d = natural_orbitals(&rho).unwrap();
        assert!((d.occupations[0] - 0.5).abs() < 1e-12);
        assert!((d.occupations[1] - 0.5).abs() < 1e-12);
        assert!((von_neumann_entropy(&d) - 1.0).abs() < 1e-10);
        assert_eq!(schmidt_number(&d, 1e-6), 2);
    }

    #[test]
    fn entropy_anchors() {
        assert_eq!(entropy_of(&[1.0, 0.0, 0.0]), 0.0);
        assert!((entropy_of(&[0.5, 0.5, 0.0]) - 1.0).abs() < 1e-15);
        assert_eq!(entropy_of(&[1.0, 1e-15]), 0.0);
    }

    #[test]
    fn k_grid_is_symmetric() {
        let g = grid();
        let k = default_k_grid(&g);
        assert_eq!(k.len(), 4 * g.len());
        for i in 0..k.len() {
            assert_eq!(k[i], -k[k.len() - 1 - i]);
        }
        assert_eq!(k[0], -PI / g.spacing());
    }

    #[test]
    fn both_momentum_paths_agree_and_normalize() {
        let g = grid();
        let spec = solve_band(&g, 2.0, 1.5, 4).unwrap();
        let k = default_k_grid(&g);
        for m in BandMember::ALL {
            let rho = rspdm(spec.member(m), &g);
            let d = natural_orbitals(&rho).unwrap();
            let a = momentum_distribution(&d, &g, &k);
            let b = momentum_distribution_direct(&rho, &g, &k);
            let diff = a.n_values.iter().zip(&b.n_values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-8, "{m:?}: {diff}");
            assert!((a.integral() - 1.0).abs() < 1e-6);
            assert!(a.n_values.iter().all(|&v| v >= 0.0));
            for i in 0..k.len() {
                assert!((a.n_values[i] - a.n_values[k.len() - 1 - i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gaussian_orbital_has_gaussian_momentum() {
        let g = Grid::new(121, 0.15).unwrap();
        let x = g.points();
        let norm = PI.powf(-0.25);
        let phi: Vec<f64> = x.iter().map(|&xi| norm * (-0.5 * xi * xi).exp()).collect();
        let rho = Rspdm {
            matrix: DMatrix::from_fn(g.len(), g.len(), |i, j| phi[i] * phi[j]),
            band_index: None,
            spacing: g.spacing(),
        };
        let k = [0.0, 0.5, 1.0, 2.0];
        let n = momentum_distribution_direct(&rho, &g, &k);
        for (ki, ni) in k.iter().zip(&n.n_values) {
            let exact = (-ki * ki).exp() / PI.sqrt();
            assert!((ni - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn negative_occupation_is_rejected() {
        let g = Grid::new(3, 1.0).unwrap();
        let rho = Rspdm {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.5, -0.5])),
            band_index: None,
            spacing: g.spacing(),
        };
        assert!(natural_orbitals(&rho).is_err());
    }
}
