//! Two contact-interacting bosons in a one-dimensional quartic double well.
//!
//! The crate discretizes the scaled two-body Hamiltonian
//! `H = sum_i [-1/2 d^2/dx_i^2 + x_i^4 - kappa x_i^2] + g1d delta(x1 - x2)`
//! on a uniform sinc-DVR grid and derives spectra, reduced single-particle
//! density matrices, natural orbitals, momentum distributions and von Neumann
//! entropies from its lowest eigenstates. A closed-form two-site
//! Bose-Hubbard model and finite-difference reference solvers sit alongside.

pub mod bose_hubbard;
pub mod correlations;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod scaling;
pub mod single_particle;
pub mod sweep;
pub mod two_particle;

pub use error::{Error, Result};
pub use grid::Grid;
