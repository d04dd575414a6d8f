//! Two bosons with contact repulsion on the product DVR grid.
//!
//! The Hamiltonian `h1 (x) 1 + 1 (x) h1 + (g1d / h) delta_ij` commutes with
//! particle exchange `(i, j) -> (j, i)` and with reflection
//! `(i, j) -> (n-1-i, n-1-j)`. The solver works in each of the four joint
//! eigenspaces separately, so every returned state carries exact labels.

use nalgebra::DMatrix;

use crate::eigen::{dense_from_operator, lanczos_lowest, EigenPairs, LanczosOptions};
use crate::error::{Error, Result};
use crate::grid::{potential_vector, Grid};
use crate::single_particle::{self, Parity, SingleParticleState};

/// Max-abs tolerance used when verifying exchange and parity labels.
const LABEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exchange {
    Symmetric,
    Antisymmetric,
}

impl Exchange {
    pub fn sign(self) -> f64 {
        match self {
            Exchange::Symmetric => 1.0,
            Exchange::Antisymmetric => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Exchange::Symmetric => "sym",
            Exchange::Antisymmetric => "antisym",
        }
    }
}

/// Members of the lowest band, identified by their symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandMember {
    /// Lowest symmetric, even state.
    Ground,
    /// Lowest antisymmetric state (odd).
    First,
    /// Lowest symmetric, odd state.
    Second,
    /// Second-lowest symmetric, even state.
    Third,
}

impl BandMember {
    pub const ALL: [BandMember; 4] = [
        BandMember::Ground,
        BandMember::First,
        BandMember::Second,
        BandMember::Third,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Expected `(exchange, parity)` labels.
    pub fn labels(self) -> (Exchange, Parity) {
        match self {
            BandMember::Ground => (Exchange::Symmetric, Parity::Even),
            BandMember::First => (Exchange::Antisymmetric, Parity::Odd),
            BandMember::Second => (Exchange::Symmetric, Parity::Odd),
            BandMember::Third => (Exchange::Symmetric, Parity::Even),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyState {
    pub energy: f64,
    /// `psi[(i, j)] = Psi(x_i, x_j)` with `h^2 sum psi^2 = 1`.
    pub psi: DMatrix<f64>,
    pub exchange: Exchange,
    pub parity: Parity,
    pub band_index: Option<usize>,
    pub grid: Grid,
}

impl TwoBodyState {
    /// Quadrature inner product `h^2 sum_ij a_ij b_ij`.
    pub fn overlap(&self, other: &TwoBodyState) -> f64 {
        let h = self.grid.spacing();
        h * h * self.psi.dot(&other.psi)
    }

    pub fn norm_sq(&self) -> f64 {
        self.overlap(self)
    }

    /// Checks both labels numerically against the stored amplitudes.
    pub fn verify_labels(&self) -> bool {
        let n = self.grid.len();
        let ex = self.exchange.sign();
        let par = self.parity.sign();
        for i in 0..n {
            for j in 0..n {
                let v = self.psi[(i, j)];
                if (v - ex * self.psi[(j, i)]).abs() > LABEL_TOL {
                    return false;
                }
                if (v - par * self.psi[(n - 1 - i, n - 1 - j)]).abs() > LABEL_TOL {
                    return false;
                }
            }
        }
        true
    }
}

/// Two-body Hamiltonian in matrix-free form.
#[derive(Debug, Clone)]
pub struct TwoBodyHamiltonian {
    grid: Grid,
    kappa: f64,
    g1d: f64,
    /// Single-particle `T + diag(V)`.
    h1: DMatrix<f64>,
}

pub fn build_hamiltonian(grid: &Grid, kappa: f64, g1d: f64) -> TwoBodyHamiltonian {
    let v = potential_vector(grid, kappa).values;
    TwoBodyHamiltonian {
        grid: grid.clone(),
        kappa,
        g1d,
        h1: single_particle::hamiltonian(grid, &v),
    }
}

impl TwoBodyHamiltonian {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn g1d(&self) -> f64 {
        self.g1d
    }

    /// Diagonal weight of the discretized delta function, `g1d / h`.
    pub fn contact(&self) -> f64 {
        self.g1d / self.grid.spacing()
    }

    /// `H psi` for an arbitrary grid matrix.
    pub fn apply(&self, psi: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = &self.h1 * psi + psi * &self.h1;
        let c = self.contact();
        for i in 0..self.grid.len() {
            out[(i, i)] += c * psi[(i, i)];
        }
        out
    }

    /// Same as [`apply`](Self::apply) for `psi = sign * psi^T`, using a
    /// single matrix product.
    fn apply_exchange_definite(&self, psi: &DMatrix<f64>, sign: f64, scratch: &mut DMatrix<f64>, out: &mut DMatrix<f64>) {
        self.h1.mul_to(psi, scratch);
        let n = self.grid.len();
        let c = self.contact();
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] = scratch[(i, j)] + sign * scratch[(j, i)];
            }
            out[(j, j)] += c * psi[(j, j)];
        }
    }

    /// Dense `n^2 x n^2` matrix with flat index `i * n + j`. Only sensible
    /// for small grids.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.grid.len();
        let dim = n * n;
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in 0..n {
                let row = i * n + j;
                for k in 0..n {
                    m[(row, k * n + j)] += self.h1[(i, k)];
                    m[(row, i * n + k)] += self.h1[(j, k)];
                }
                if i == j {
                    m[(row, row)] += self.contact();
                }
            }
        }
        m
    }

    /// `<psi|H|psi>` with quadrature weights.
    pub fn expectation(&self, state: &TwoBodyState) -> f64 {
        let h = self.grid.spacing();
        h * h * state.psi.dot(&self.apply(&state.psi))
    }
}

/// Orthonormal basis of one `(exchange, parity)` subspace of the product
/// grid, stored as orbits of grid pairs with their projection weights.
#[derive(Debug, Clone)]
pub struct Sector {
    n: usize,
    pub exchange: Exchange,
    pub parity: Parity,
    offsets: Vec<usize>,
    members: Vec<(usize, usize, f64)>,
}

impl Sector {
    pub fn new(n: usize, exchange: Exchange, parity: Parity) -> Self {
        let s = exchange.sign();
        let p = parity.sign();
        let mut offsets = vec![0];
        let mut members = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let images = [
                    ((i, j), 1.0),
                    ((j, i), s),
                    ((n - 1 - i, n - 1 - j), p),
                    ((n - 1 - j, n - 1 - i), s * p),
                ];
                if images.iter().any(|&((a, b), _)| (a, b) < (i, j)) {
                    continue;
                }
                let mut orbit: Vec<(usize, usize, f64)> = Vec::with_capacity(4);
                for &((a, b), w) in &images {
                    match orbit.iter_mut().find(|m| m.0 == a && m.1 == b) {
                        Some(m) => m.2 += w,
                        None => orbit.push((a, b, w)),
                    }
                }
                orbit.retain(|m| m.2 != 0.0);
                let norm = orbit.iter().map(|m| m.2 * m.2).sum::<f64>().sqrt();
                if norm == 0.0 {
                    continue;
                }
                members.extend(orbit.into_iter().map(|(a, b, w)| (a, b, w / norm)));
                offsets.push(members.len());
            }
        }
        Sector {
            n,
            exchange,
            parity,
            offsets,
            members,
        }
    }

    pub fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    fn orbit(&self, k: usize) -> &[(usize, usize, f64)] {
        &self.members[self.offsets[k]..self.offsets[k + 1]]
    }

    /// Writes the flat DVR coefficients of `c` into `out` (zeroed first).
    pub fn embed_into(&self, c: &[f64], out: &mut DMatrix<f64>) {
        out.fill(0.0);
        for (k, &ck) in c.iter().enumerate() {
            for &(a, b, w) in self.orbit(k) {
                out[(a, b)] += w * ck;
            }
        }
    }

    pub fn embed(&self, c: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        self.embed_into(c, &mut out);
        out
    }

    pub fn restrict_into(&self, m: &DMatrix<f64>, out: &mut [f64]) {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.orbit(k).iter().map(|&(a, b, w)| w * m[(a, b)]).sum();
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Method {
    Lanczos(LanczosOptions),
    /// Dense diagonalization of every sector block.
    Dense,
}

impl Default for Method {
    fn default() -> Self {
        Method::Lanczos(LanczosOptions::default())
    }
}

/// Lowest `count` eigenstates within one symmetry sector.
pub fn solve_sector(ham: &TwoBodyHamiltonian, exchange: Exchange, parity: Parity, count: usize, method: &Method) -> Result<Vec<TwoBodyState>> {
    let n = ham.grid.len();
    let sector = Sector::new(n, exchange, parity);
    let sign = exchange.sign();
    let mut full = DMatrix::zeros(n, n);
    let mut scratch = DMatrix::zeros(n, n);
    let mut image = DMatrix::zeros(n, n);
    let apply = |c: &[f64], out: &mut [f64]| {
        sector.embed_into(c, &mut full);
        ham.apply_exchange_definite(&full, sign, &mut scratch, &mut image);
        sector.restrict_into(&image, out);
    };
    let pairs: EigenPairs = match method {
        Method::Lanczos(opts) => lanczos_lowest(sector.dim(), count, apply, opts)?,
        Method::Dense => dense_from_operator(sector.dim(), count.min(sector.dim()), apply)?,
    };

    if pairs.values.iter().any(|e| !e.is_finite()) {
        return Err(Error::NoConvergence {
            iterations: pairs.iterations,
            residual: f64::NAN,
        });
    }
    let h = ham.grid.spacing();
    let mut states = Vec::with_capacity(pairs.values.len());
    for (energy, c) in pairs.values.iter().zip(&pairs.vectors) {
        let mut psi = sector.embed(c) / h;
        fix_sign(&mut psi);
        let state = TwoBodyState {
            energy: *energy,
            psi,
            exchange,
            parity,
            band_index: None,
            grid: ham.grid.clone(),
        };
        if !state.verify_labels() {
            return Err(Error::Classification {
                index: states.len(),
                reason: format!(
                    "state in the {}/{} sector lost its symmetry",
                    exchange.label(),
                    parity.label()
                ),
            });
        }
        states.push(state);
    }
    Ok(states)
}

/// Row-major sign convention: the first amplitude above `1e-6 max|psi|`
/// is made positive.
fn fix_sign(psi: &mut DMatrix<f64>) {
    let max = psi.amax();
    let n = psi.nrows();
    'scan: for i in 0..n {
        for j in 0..psi.ncols() {
            let v = psi[(i, j)];
            if v.abs() > 1e-6 * max {
                if v < 0.0 {
                    psi.neg_mut();
                }
                break 'scan;
            }
        }
    }
}

/// Lowest states of the two-body problem together with the labelled band.
#[derive(Debug, Clone)]
pub struct TwoBodySpectrum {
    pub kappa: f64,
    pub g1d: f64,
    /// The `n_states` lowest states in ascending energy.
    pub states: Vec<TwoBodyState>,
    /// Ground, first, second and third band members, in that order.
    pub band: Vec<TwoBodyState>,
}

impl TwoBodySpectrum {
    pub fn member(&self, m: BandMember) -> &TwoBodyState {
        &self.band[m.index()]
    }

    pub fn band_energies(&self) -> [f64; 4] {
        [0, 1, 2, 3].map(|i| self.band[i].energy)
    }
}

pub fn solve_band(grid: &Grid, kappa: f64, g1d: f64, n_states: usize) -> Result<TwoBodySpectrum> {
    solve_band_with(grid, kappa, g1d, n_states, &Method::default())
}

pub fn solve_band_with(grid: &Grid, kappa: f64, g1d: f64, n_states: usize, method: &Method) -> Result<TwoBodySpectrum> {
    if n_states < 4 {
        return Err(Error::Precondition(format!(
            "the lowest band has four states, requested {n_states}"
        )));
    }
    let ham = build_hamiltonian(grid, kappa, g1d);
    let mut sectors = Vec::new();
    for (exchange, parity) in [
        (Exchange::Symmetric, Parity::Even),
        (Exchange::Antisymmetric, Parity::Odd),
        (Exchange::Symmetric, Parity::Odd),
        (Exchange::Antisymmetric, Parity::Even),
    ] {
        sectors.push(solve_sector(&ham, exchange, parity, n_states, method)?);
    }

    let pick = |m: BandMember, rank: usize| -> Result<TwoBodyState> {
        let (exchange, parity) = m.labels();
        let states = sectors
            .iter()
            .find(|s| s.first().is_some_and(|st| st.exchange == exchange && st.parity == parity))
            .ok_or(Error::Classification {
                index: m.index(),
                reason: "symmetry sector is empty".into(),
            })?;
        let mut st = states.get(rank).cloned().ok_or(Error::Classification {
            index: m.index(),
            reason: "not enough states in sector".into(),
        })?;
        st.band_index = Some(m.index());
        Ok(st)
    };
    let band = vec![
        pick(BandMember::Ground, 0)?,
        pick(BandMember::First, 0)?,
        pick(BandMember::Second, 0)?,
        pick(BandMember::Third, 1)?,
    ];

    let mut all: Vec<TwoBodyState> = sectors.into_iter().flatten().collect();
    for st in all.iter_mut() {
        st.band_index = band
            .iter()
            .find(|b| b.exchange == st.exchange && b.parity == st.parity && b.energy == st.energy)
            .and_then(|b| b.band_index);
    }
    all.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    all.truncate(n_states);
    Ok(TwoBodySpectrum {
        kappa,
        g1d,
        states: all,
        band,
    })
}

/// Exchange-symmetrized products of the two lowest orbitals, ordered as the
/// band: `u0 u0`, antisymmetric pair, symmetric pair, `u1 u1`.
pub fn noninteracting_reference(grid: &Grid, u0: &SingleParticleState, u1: &SingleParticleState) -> Vec<TwoBodyState> {
    let n = grid.len();
    let a = &u0.orbital;
    let b = &u1.orbital;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let make = |energy: f64, exchange: Exchange, parity: Parity, m: BandMember, f: &dyn Fn(usize, usize) -> f64| TwoBodyState {
        energy,
        psi: DMatrix::from_fn(n, n, f),
        exchange,
        parity,
        band_index: Some(m.index()),
        grid: grid.clone(),
    };
    let mixed = u0.parity * u1.parity;
    vec![
        make(2.0 * u0.energy, Exchange::Symmetric, Parity::Even, BandMember::Ground, &|i, j| a[i] * a[j]),
        make(u0.energy + u1.energy, Exchange::Antisymmetric, mixed, BandMember::First, &|i, j| {
            r * (a[i] * b[j] - b[i] * a[j])
        }),
        make(u0.energy + u1.energy, Exchange::Symmetric, mixed, BandMember::Second, &|i, j| {
            r * (a[i] * b[j] + b[i] * a[j])
        }),
        make(2.0 * u1.energy, Exchange::Symmetric, Parity::Even, BandMember::Third, &|i, j| b[i] * b[j]),
    ]
}

/// Bosonic state `|Psi_F|` built from an antisymmetric (fermionic) state.
pub fn fermi_bose_map(state: &TwoBodyState) -> Result<TwoBodyState> {
    if state.exchange != Exchange::Antisymmetric {
        return Err(Error::Precondition(
            "Fermi-Bose map needs an antisymmetric state".into(),
        ));
    }
    let mut mapped = state.clone();
    mapped.psi = state.psi.abs();
    let norm = mapped.norm_sq().sqrt();
    mapped.psi /= norm;
    mapped.exchange = Exchange::Symmetric;
    // |f(-x1, -x2)| = |f(x1, x2)| for a state of definite parity.
    mapped.parity = Parity::Even;
    mapped.band_index = None;
    Ok(mapped)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMoments {
    /// `<a| x1 + x2 |b>`
    pub dipole: f64,
    /// `<a| x1^2 + x2^2 |b>`
    pub quadrupole: f64,
}

pub fn transition_moments(a: &TwoBodyState, b: &TwoBodyState, grid: &Grid) -> Result<TransitionMoments> {
    if &a.grid != grid || &b.grid != grid {
        return Err(Error::Precondition(
            "transition moments need both states on the given grid".into(),
        ));
    }
    let x = grid.points();
    let h = grid.spacing();
    let mut dipole = 0.0;
    let mut quadrupole = 0.0;
    for j in 0..grid.len() {
        for i in 0..grid.len() {
            let w = a.psi[(i, j)] * b.psi[(i, j)];
            dipole += w * (x[i] + x[j]);
            quadrupole += w * (x[i] * x[i] + x[j] * x[j]);
        }
    }
    Ok(TransitionMoments {
        dipole: h * h * dipole,
        quadrupole: h * h * quadrupole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::dense_symmetric;
    use crate::single_particle::solve_single;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_exchange_definite(n: usize, sign: f64, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5);
        &m + m.transpose() * sign
    }

    #[test]
    fn sector_dimensions_partition_the_space() {
        for n in [3, 5, 7, 61] {
            let total: usize = [
                (Exchange::Symmetric, Parity::Even),
                (Exchange::Symmetric, Parity::Odd),
                (Exchange::Antisymmetric, Parity::Even),
                (Exchange::Antisymmetric, Parity::Odd),
            ]
            .iter()
            .map(|&(e, p)| Sector::new(n, e, p).dim())
            .sum();
            assert_eq!(total, n * n);
            let sym = Sector::new(n, Exchange::Symmetric, Parity::Even).dim()
                + Sector::new(n, Exchange::Symmetric, Parity::Odd).dim();
            assert_eq!(sym, n * (n + 1) / 2);
        }
    }

    #[test]
    fn sector_basis_is_orthonormal() {
        let n = 7;
        let s = Sector::new(n, Exchange::Antisymmetric, Parity::Even);
        let mut c = vec![0.0; s.dim()];
        let mut back = vec![0.0; s.dim()];
        for k in 0..s.dim() {
            c.fill(0.0);
            c[k] = 1.0;
            let m = s.embed(&c);
            assert!((m.norm() - 1.0).abs() < 1e-14);
            s.restrict_into(&m, &mut back);
            for (l, v) in back.iter().enumerate() {
                assert!((v - if l == k { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hamiltonian_preserves_exchange_symmetry() {
        let g = Grid::new(21, 0.3).unwrap();
        let ham = build_hamiltonian(&g, 2.0, 3.0);
        for (sign, seed) in [(1.0, 1), (-1.0, 2)] {
            let v = random_exchange_definite(21, sign, seed);
            let hv = ham.apply(&v);
            let dev = (&hv - hv.transpose() * sign).amax();
            assert!(dev < 1e-10, "sign {sign}: {dev}");
        }
    }

    #[test]
    fn contact_term_ignores_antisymmetric_vectors() {
        let g = Grid::new(21, 0.3).unwrap();
        let v = random_exchange_definite(21, -1.0, 5);
        let with = build_hamiltonian(&g, 1.0, 7.5).apply(&v);
        let without = build_hamiltonian(&g, 1.0, 0.0).apply(&v);
        assert_eq!(with, without);
    }

    #[test]
    fn separable_limit_gives_pair_sums() {
        let g = Grid::new(15, 0.5).unwrap();
        let ham = build_hamiltonian(&g, 1.5, 0.0);
        let full = dense_symmetric(ham.to_dense()).unwrap();
        let single = solve_single(&g, 1.5, 15).unwrap();
        let mut sums: Vec<f64> = single
            .iter()
            .flat_map(|a| single.iter().map(move |b| a.energy + b.energy))
            .collect();
        sums.sort_by(f64::total_cmp);
        for (e, s) in full.values.iter().zip(&sums) {
            assert!((e - s).abs() < 1e-9);
        }
    }

    #[test]
    fn sector_solves_reproduce_the_full_spectrum() {
        let g = Grid::new(15, 0.5).unwrap();
        let ham = build_hamiltonian(&g, 2.5, 1.7);
        let full = dense_symmetric(ham.to_dense()).unwrap();
        let mut blocked: Vec<f64> = Vec::new();
        for e in [Exchange::Symmetric, Exchange::Antisymmetric] {
            for p in [Parity::Even, Parity::Odd] {
                let states = solve_sector(&ham, e, p, 400, &Method::Dense).unwrap();
                blocked.extend(states.iter().map(|s| s.energy));
            }
        }
        blocked.sort_by(f64::total_cmp);
        assert_eq!(blocked.len(), full.values.len());
        for (a, b) in blocked.iter().zip(&full.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lanczos_matches_dense_sector_solve() {
        let g = Grid::new(31, 0.3).unwrap();
        let ham = build_hamiltonian(&g, 4.0, 2.0);
        for e in [Exchange::Symmetric, Exchange::Antisymmetric] {
            for p in [Parity::Even, Parity::Odd] {
                let dense = solve_sector(&ham, e, p, 3, &Method::Dense).unwrap();
                let lz = solve_sector(&ham, e, p, 3, &Method::default()).unwrap();
                for (a, b) in dense.iter().zip(&lz) {
                    assert!((a.energy - b.energy).abs() < 1e-10);
                    assert!((a.overlap(b) - 1.0).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn band_labels_and_normalization() {
        let g = Grid::new(31, 0.3).unwrap();
        let spec = solve_band(&g, 3.0, 1.0, 6).unwrap();
        assert_eq!(spec.states.len(), 6);
        for w in spec.states.windows(2) {
            assert!(w[0].energy <= w[1].energy);
        }
        for m in BandMember::ALL {
            let st = spec.member(m);
            assert_eq!((st.exchange, st.parity), m.labels());
            assert_eq!(st.band_index, Some(m.index()));
            assert!((st.norm_sq() - 1.0).abs() < 1e-12);
            assert!(st.verify_labels());
        }
        assert!(solve_band(&g, 3.0, 1.0, 3).is_err());
    }

    #[test]
    fn references_match_separable_solution() {
        let g = Grid::new(31, 0.3).unwrap();
        let single = solve_single(&g, 2.0, 2).unwrap();
        let refs = noninteracting_reference(&g, &single[0], &single[1]);
        let spec = solve_band(&g, 2.0, 0.0, 4).unwrap();
        for m in BandMember::ALL {
            let r = &refs[m.index()];
            let s = spec.member(m);
            assert!(r.verify_labels());
            assert!((r.energy - s.energy).abs() < 1e-9);
            assert!(r.overlap(s).abs() > 1.0 - 1e-8);
        }
        let anti = &refs[1].psi;
        assert_eq!(anti, &(-anti.transpose()));
        assert_eq!(refs[1].energy, single[0].energy + single[1].energy);
    }

    #[test]
    fn fermi_bose_map_is_symmetric() {
        let g = Grid::new(31, 0.3).unwrap();
        let spec = solve_band(&g, 1.0, 0.0, 4).unwrap();
        let mapped = fermi_bose_map(spec.member(BandMember::First)).unwrap();
        assert_eq!(mapped.psi, mapped.psi.transpose());
        assert!((mapped.norm_sq() - 1.0).abs() < 1e-12);
        assert!(mapped.verify_labels());
        assert!(matches!(
            fermi_bose_map(spec.member(BandMember::Ground)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn moment_selection_rules() {
        let g = Grid::new(31, 0.3).unwrap();
        let spec = solve_band(&g, 3.0, 1.0, 4).unwrap();
        let m = |a, b| transition_moments(spec.member(a), spec.member(b), &g).unwrap();
        assert!(m(BandMember::Ground, BandMember::Third).dipole.abs() < 1e-10);
        assert!(m(BandMember::Ground, BandMember::Second).quadrupole.abs() < 1e-10);
        assert!(m(BandMember::Ground, BandMember::First).dipole.abs() < 1e-10);
        assert!(m(BandMember::Ground, BandMember::Second).dipole.abs() > 1e-3);
        let other = Grid::new(31, 0.31).unwrap();
        assert!(transition_moments(spec.member(BandMember::Ground), spec.member(BandMember::First), &other).is_err());
    }
}
