//! Two bosons on two sites: the closed-form Bose-Hubbard dimer.
//!
//! Fock basis order is `(|20>, |11>, |02>)`. The hopping enters with a plus
//! sign and the on-site term as `U n (n - 1)`, so the matrix is
//! `[[2e + 2U, r2 J, 0], [r2 J, 2e, r2 J], [0, r2 J, 2e + 2U]]`.

use nalgebra::Matrix3;

use crate::correlations::entropy_of;
use crate::error::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub j: f64,
    pub u: f64,
    pub eps: f64,
}

impl HubbardParams {
    pub fn new(j: f64, u: f64, eps: f64) -> Self {
        HubbardParams { j, u, eps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerEigensystem {
    pub e_minus: f64,
    pub e_mid: f64,
    pub e_plus: f64,
    pub v_minus: [f64; 3],
    pub v_mid: [f64; 3],
    pub v_plus: [f64; 3],
    /// Set for `J = 0`, where the closed-form vectors are replaced by
    /// basis-aligned ones.
    pub degenerate_limit: bool,
}

pub fn hamiltonian_matrix(p: &HubbardParams) -> Matrix3<f64> {
    let d = 2.0 * p.eps + 2.0 * p.u;
    let t = SQRT_2 * p.j;
    Matrix3::new(d, t, 0.0, t, 2.0 * p.eps, t, 0.0, t, d)
}

fn root(p: &HubbardParams) -> f64 {
    (p.u * p.u + 4.0 * p.j * p.j).sqrt()
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

/// `E -/+ = 2e + U -/+ sqrt(U^2 + 4 J^2)`, `E_mid = 2e + 2U` and the
/// matching eigenvectors `N (1, 2 r2 J / (U -/+ s), 1)`, `(1, 0, -1)/r2`.
pub fn analytic_eigensystem(p: &HubbardParams) -> DimerEigensystem {
    let s = root(p);
    let e_minus = 2.0 * p.eps + p.u - s;
    let e_plus = 2.0 * p.eps + p.u + s;
    let e_mid = 2.0 * p.eps + 2.0 * p.u;
    let v_mid = normalized([1.0, 0.0, -1.0]);
    if p.j == 0.0 {
        let pair = normalized([1.0, 0.0, 1.0]);
        let single = [0.0, 1.0, 0.0];
        let (v_minus, v_plus) = if p.u >= 0.0 { (single, pair) } else { (pair, single) };
        return DimerEigensystem {
            e_minus,
            e_mid,
            e_plus,
            v_minus,
            v_mid,
            v_plus,
            degenerate_limit: true,
        };
    }
    let b = |den: f64| 2.0 * SQRT_2 * p.j / den;
    DimerEigensystem {
        e_minus,
        e_mid,
        e_plus,
        v_minus: normalized([1.0, b(p.u - s), 1.0]),
        v_mid,
        v_plus: normalized([1.0, b(p.u + s), 1.0]),
        degenerate_limit: false,
    }
}

/// Ground-state occupations `(lambda1, lambda2)`, `lambda1 >= lambda2`,
/// from `N^2 [1 + 4J^2/(U - s)^2 -/+ 4J/(U - s)]`.
pub fn ground_rspdm_occupations(p: &HubbardParams) -> Result<(f64, f64)> {
    if p.j == 0.0 && p.u == 0.0 {
        return Err(Error::UndefinedGround);
    }
    if p.j == 0.0 {
        // Ground state is |11> (U > 0) or an equal |20>, |02> mixture.
        return Ok((0.5, 0.5));
    }
    let s = root(p);
    let d = p.u - s;
    let q = 4.0 * p.j * p.j / (d * d);
    let norm_sq = 1.0 / (2.0 + 2.0 * q);
    let cross = 4.0 * p.j / d;
    let a = norm_sq * (1.0 + q - cross);
    let b = norm_sq * (1.0 + q + cross);
    Ok(if a >= b { (a, b) } else { (b, a) })
}

pub fn ground_entropy(p: &HubbardParams) -> Result<f64> {
    let (a, b) = ground_rspdm_occupations(p)?;
    Ok(entropy_of(&[a, b]))
}

/// `S(J, U)` with rows indexed by `J` and columns by `U`. Points whose
/// occupations are undefined hold NaN and are listed in `failures`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySurface {
    pub j_values: Vec<f64>,
    pub u_values: Vec<f64>,
    pub eps: f64,
    pub values: Vec<Vec<f64>>,
    pub failures: Vec<(usize, usize, String)>,
}

pub fn entropy_surface(j_grid: &[f64], u_grid: &[f64], eps: f64) -> Result<EntropySurface> {
    if j_grid.is_empty() || u_grid.is_empty() {
        return Err(Error::Precondition("entropy surface needs non-empty J and U grids".into()));
    }
    if let Some(j) = j_grid.iter().find(|&&j| !(j > 0.0)) {
        return Err(Error::Precondition(format!("J must be positive, got {j}")));
    }
    let mut failures = Vec::new();
    let values = j_grid
        .iter()
        .enumerate()
        .map(|(a, &j)| {
            u_grid
                .iter()
                .enumerate()
                .map(|(b, &u)| match ground_entropy(&HubbardParams::new(j, u, eps)) {
                    Ok(s) => s,
                    Err(e) => {
                        failures.push((a, b, e.to_string()));
                        f64::NAN
                    }
                })
                .collect()
        })
        .collect();
    Ok(EntropySurface {
        j_values: j_grid.to_vec(),
        u_values: u_grid.to_vec(),
        eps,
        values,
        failures,
    })
}
