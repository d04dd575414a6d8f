//! Brute-force reference solvers.
//!
//! These deliberately avoid the sinc-DVR code: kinetic energy is the
//! three-point central difference on a Dirichlet box, and the symmetry
//! blocking of the two-body problem is rebuilt here from scratch. They are
//! slow and only meant to cross-check the main path.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, Matrix2};

use crate::eigen::tridiagonal_ql;
use crate::error::{Error, Result};
use crate::grid::double_well;

/// Smallest single-particle grid accepted as "refined".
pub const MIN_SINGLE_POINTS: usize = 801;
/// Largest two-body grid for which the dense product-space solve is allowed.
pub const MAX_TWO_BODY_POINTS: usize = 121;
/// Pinned oracle settings used for the committed fixtures.
pub const SINGLE_POINTS: usize = 2001;
pub const SINGLE_HALF_SPAN: f64 = 6.0;
pub const TWO_BODY_POINTS: usize = 101;
pub const TWO_BODY_HALF_SPAN: f64 = 4.8;

/// Interior nodes of the Dirichlet box `[-L, L]` with `n` unknowns.
fn box_nodes(half_span: f64, n: usize) -> (Vec<f64>, f64) {
    let step = 2.0 * half_span / (n + 1) as f64;
    let centre = (n / 2) as f64;
    ((0..n).map(|a| (a as f64 - centre) * step).collect(), step)
}

/// Lowest `n_states` energies of `-1/2 d^2/dx^2 + V` by central
/// differences on `n_fine` interior nodes of `[-half_span, half_span]`.
pub fn fd_single_spectrum_with<V: Fn(f64) -> f64>(potential: V, half_span: f64, n_fine: usize, n_states: usize) -> Result<Vec<f64>> {
    if n_fine < MIN_SINGLE_POINTS {
        return Err(Error::Precondition(format!(
            "oracle needs at least {MIN_SINGLE_POINTS} points, got {n_fine}"
        )));
    }
    if !(half_span > 0.0) {
        return Err(Error::Precondition(format!("box half-width must be positive, got {half_span}")));
    }
    let (x, step) = box_nodes(half_span, n_fine);
    let k = 1.0 / (step * step);
    let diag: Vec<f64> = x.iter().map(|&xi| k + potential(xi)).collect();
    let off = vec![-0.5 * k; n_fine - 1];
    let (mut values, _) = tridiagonal_ql(&diag, &off, &[])?;
    values.truncate(n_states);
    Ok(values)
}

pub fn fd_single_spectrum(kappa: f64, half_span: f64, n_fine: usize, n_states: usize) -> Result<Vec<f64>> {
    fd_single_spectrum_with(|x| double_well(x, kappa), half_span, n_fine, n_states)
}

/// Lowest states of the finite-difference two-body problem, one per
/// band label.
#[derive(Debug, Clone, PartialEq)]
pub struct FdBand {
    /// Ground, antisymmetric, symmetric-odd and second symmetric-even
    /// energies, in that order.
    pub energies: [f64; 4],
    /// The same four energies in ascending order with their labels
    /// `(exchange sign, parity sign)`.
    pub ordered: Vec<(f64, i8, i8)>,
    pub n_fine: usize,
    pub half_span: f64,
}

pub fn fd_two_body_band(kappa: f64, g1d: f64, n_fine: usize) -> Result<FdBand> {
    fd_two_body_band_in(kappa, g1d, n_fine, TWO_BODY_HALF_SPAN)
}

pub fn fd_two_body_band_in(kappa: f64, g1d: f64, n_fine: usize, half_span: f64) -> Result<FdBand> {
    if n_fine.is_multiple_of(2) || !(3..=MAX_TWO_BODY_POINTS).contains(&n_fine) {
        return Err(Error::Precondition(format!(
            "two-body oracle needs an odd point count in 3..={MAX_TWO_BODY_POINTS}, got {n_fine}"
        )));
    }
    let (x, step) = box_nodes(half_span, n_fine);
    let v: Vec<f64> = x.iter().map(|&xi| double_well(xi, kappa)).collect();
    let lowest = |ex: i8, par: i8, count: usize| -> Vec<f64> {
        let block = symmetric_block(&v, step, g1d, ex, par);
        let mut e: Vec<f64> = block.symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e.truncate(count);
        e
    };
    let se = lowest(1, 1, 2);
    let ao = lowest(-1, -1, 1);
    let so = lowest(1, -1, 1);
    let energies = [se[0], ao[0], so[0], se[1]];
    let mut ordered = vec![(se[0], 1, 1), (ao[0], -1, -1), (so[0], 1, -1), (se[1], 1, 1)];
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(FdBand {
        energies,
        ordered,
        n_fine,
        half_span,
    })
}

/// Ground-state energy alone: only the symmetric, even block is solved.
pub fn fd_two_body_ground(kappa: f64, g1d: f64, n_fine: usize) -> Result<f64> {
    if n_fine.is_multiple_of(2) || !(3..=MAX_TWO_BODY_POINTS).contains(&n_fine) {
        return Err(Error::Precondition(format!(
            "two-body oracle needs an odd point count in 3..={MAX_TWO_BODY_POINTS}, got {n_fine}"
        )));
    }
    let (x, step) = box_nodes(TWO_BODY_HALF_SPAN, n_fine);
    let v: Vec<f64> = x.iter().map(|&xi| double_well(xi, kappa)).collect();
    let block = symmetric_block(&v, step, g1d, 1, 1);
    Ok(block.symmetric_eigenvalues().min())
}

/// Dense Hamiltonian block for exchange sign `ex` and parity sign `par`.
fn symmetric_block(v: &[f64], step: f64, g1d: f64, ex: i8, par: i8) -> DMatrix<f64> {
    let n = v.len();
    let (s, p) = (ex as f64, par as f64);
    // Each basis vector: list of (pair index, weight). `slot[a * n + b]`
    // records which basis vector the pair belongs to and with what weight.
    let mut basis: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut slot: Vec<Option<(usize, f64)>> = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            if slot[a * n + b].is_some() {
                continue;
            }
            let ra = n - 1 - a;
            let rb = n - 1 - b;
            let mut acc: Vec<(usize, f64)> = Vec::new();
            for (pa, pb, w) in [(a, b, 1.0), (b, a, s), (ra, rb, p), (rb, ra, s * p)] {
                let idx = pa * n + pb;
                if let Some(e) = acc.iter_mut().find(|e| e.0 == idx) {
                    e.1 += w;
                } else {
                    acc.push((idx, w));
                }
            }
            acc.retain(|e| e.1 != 0.0);
            let norm = acc.iter().map(|e| e.1 * e.1).sum::<f64>().sqrt();
            if norm > 0.0 {
                for e in acc.iter_mut() {
                    e.1 /= norm;
                    slot[e.0] = Some((basis.len(), e.1));
                }
                basis.push(acc);
            } else {
                // Pair belongs to no vector of this block; mark it visited.
                for (pa, pb) in [(a, b), (b, a), (ra, rb), (rb, ra)] {
                    slot[pa * n + pb] = Some((usize::MAX, 0.0));
                }
            }
        }
    }

    let dim = basis.len();
    let k = 1.0 / (step * step);
    let hop = -0.5 * k;
    let contact = g1d / step;
    let mut m = DMatrix::zeros(dim, dim);
    let add = |col: usize, pair: usize, amp: f64, m: &mut DMatrix<f64>| {
        if let Some((row, w)) = slot[pair] {
            if row != usize::MAX {
                m[(row, col)] += w * amp;
            }
        }
    };
    for (col, members) in basis.iter().enumerate() {
        for &(pair, w) in members {
            let (a, b) = (pair / n, pair % n);
            let mut diag = 2.0 * k + v[a] + v[b];
            if a == b {
                diag += contact;
            }
            add(col, pair, w * diag, &mut m);
            if a > 0 {
                add(col, pair - n, w * hop, &mut m);
            }
            if a + 1 < n {
                add(col, pair + n, w * hop, &mut m);
            }
            if b > 0 {
                add(col, pair - 1, w * hop, &mut m);
            }
            if b + 1 < n {
                add(col, pair + 1, w * hop, &mut m);
            }
        }
    }
    m
}

/// One-site occupations of a dimer state given in `(|20>, |11>, |02>)`.
///
/// The state is written as a symmetric two-particle amplitude
/// `C = [[c20, c11 / r2], [c11 / r2, c02]]` over site pairs, and the
/// eigenvalues of `C C^T` are returned in descending order.
pub fn dimer_partial_trace(v: &[f64; 3]) -> (f64, f64) {
    let off = v[1] / std::f64::consts::SQRT_2;
    let c = Matrix2::new(v[0], off, off, v[2]);
    let rho = c * c.transpose();
    let e = rho.symmetric_eigenvalues();
    let (a, b) = (e[0], e[1]);
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Comparison of one quantity between the main solver and an oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub main_value: f64,
    pub oracle_value: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
    pub main_grid: String,
    pub oracle_grid: String,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, main_value: f64, oracle_value: f64, main_grid: impl Into<String>, oracle_grid: impl Into<String>) -> Self {
        let abs_diff = (main_value - oracle_value).abs();
        let scale = oracle_value.abs();
        OracleReport {
            quantity: quantity.into(),
            main_value,
            oracle_value,
            abs_diff,
            rel_diff: if scale > 0.0 { abs_diff / scale } else { abs_diff },
            main_grid: main_grid.into(),
            oracle_grid: oracle_grid.into(),
        }
    }
}

pub const FIXTURE_COLUMNS: &str = "quantity,main_value,oracle_value,abs_diff,rel_diff,main_grid,oracle_grid";

/// Renders reports as CSV with a `#` provenance header.
pub fn render_fixture(reports: &[OracleReport], provenance: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# dwell {}", env!("CARGO_PKG_VERSION"));
    for line in provenance {
        let _ = writeln!(out, "# {line}");
    }
    let _ = writeln!(out, "{FIXTURE_COLUMNS}");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{:.15e},{:.15e},{:.6e},{:.6e},{},{}",
            r.quantity,
            r.main_value,
            r.oracle_value,
            r.abs_diff,
            r.rel_diff,
            r.main_grid.replace(',', " "),
            r.oracle_grid.replace(',', " ")
        );
    }
    out
}

pub fn write_fixture(path: &Path, reports: &[OracleReport], provenance: &[String]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, render_fixture(reports, provenance)).map_err(|e| Error::io(path, e))
}

/// Parses a fixture written by [`render_fixture`].
pub fn read_fixture(text: &str) -> Result<Vec<OracleReport>> {
    let mut reports = Vec::new();
    let mut seen_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            seen_header = true;
            if line != FIXTURE_COLUMNS {
                return Err(Error::Config {
                    line: lineno + 1,
                    message: "unexpected fixture columns".into(),
                });
            }
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        let num = |i: usize| -> Result<f64> {
            f.get(i).and_then(|s| s.parse().ok()).ok_or(Error::Config {
                line: lineno + 1,
                message: format!("bad number in column {}", i + 1),
            })
        };
        if f.len() != 7 {
            return Err(Error::Config {
                line: lineno + 1,
                message: format!("expected 7 columns, found {}", f.len()),
            });
        }
        reports.push(OracleReport {
            quantity: f[0].to_string(),
            main_value: num(1)?,
            oracle_value: num(2)?,
            abs_diff: num(3)?,
            rel_diff: num(4)?,
            main_grid: f[5].to_string(),
            oracle_grid: f[6].to_string(),
        });
    }
    Ok(reports)
}

fn single_label() -> String {
    format!("fd n={SINGLE_POINTS} L={SINGLE_HALF_SPAN}")
}

fn two_body_label() -> String {
    format!("fd n={TWO_BODY_POINTS} L={TWO_BODY_HALF_SPAN}")
}

/// Reports for the pinned oracle runs: harmonic calibration, quartic
/// single-particle levels and two-body energies on the default DVR grid.
/// The two-body finite-difference solves take tens of seconds each.
pub fn standard_reports() -> Result<Vec<OracleReport>> {
    use crate::single_particle::solve_single;
    use crate::two_particle::solve_band;

    let grid = crate::Grid::new(61, 0.16)?;
    let dvr = "dvr N=61 h=0.16";
    let mut out = Vec::new();

    let harmonic = fd_single_spectrum_with(|x| 0.5 * x * x, 10.0, SINGLE_POINTS, 4)?;
    for (i, e) in harmonic.iter().enumerate() {
        out.push(OracleReport::new(
            format!("harmonic E{i}"),
            i as f64 + 0.5,
            *e,
            "exact",
            format!("fd n={SINGLE_POINTS} L=10"),
        ));
    }
    for kappa in [0.0, 5.0] {
        let fd = fd_single_spectrum(kappa, SINGLE_HALF_SPAN, SINGLE_POINTS, 2)?;
        let main = solve_single(&grid, kappa, 2)?;
        for i in 0..2 {
            out.push(OracleReport::new(
                format!("single kappa={kappa} E{i}"),
                main[i].energy,
                fd[i],
                dvr,
                single_label(),
            ));
        }
        let e0 = solve_band(&grid, kappa, 0.0, 4)?.band[0].energy;
        out.push(OracleReport::new(
            format!("pair kappa={kappa} g1d=0 E0"),
            e0,
            2.0 * fd[0],
            dvr,
            format!("{} pair sum", single_label()),
        ));
        let e0 = solve_band(&grid, kappa, 2.0, 4)?.band[0].energy;
        out.push(OracleReport::new(
            format!("pair kappa={kappa} g1d=2 E0"),
            e0,
            fd_two_body_ground(kappa, 2.0, TWO_BODY_POINTS)?,
            dvr,
            two_body_label(),
        ));
    }
    let band = fd_two_body_band(5.0, 1.0, TWO_BODY_POINTS)?;
    let main = solve_band(&grid, 5.0, 1.0, 4)?;
    for (i, name) in ["ground", "first", "second", "third"].iter().enumerate() {
        out.push(OracleReport::new(
            format!("pair kappa=5 g1d=1 {name}"),
            main.band[i].energy,
            band.energies[i],
            dvr,
            two_body_label(),
        ));
    }
    Ok(out)
}

pub fn standard_provenance() -> Vec<String> {
    vec![
        "main solver: sinc DVR".to_string(),
        format!("single-particle oracle: central differences, Dirichlet box, n={SINGLE_POINTS}, L={SINGLE_HALF_SPAN}"),
        format!("two-body oracle: central differences, Dirichlet box, n={TWO_BODY_POINTS}, L={TWO_BODY_HALF_SPAN}, contact g1d/h_f"),
    ]
}
