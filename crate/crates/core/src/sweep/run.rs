//! Sweep execution and file emission.
//!
//! Points are solved concurrently on a dedicated thread pool; results are
//! collected in canonical point order and written by a single thread, so
//! the CSV and plot files depend only on the configuration. The run
//! timestamp is recorded in the manifest alone.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::bose_hubbard::{entropy_surface, ground_rspdm_occupations, HubbardParams};
use crate::correlations::{self, default_k_grid, k_grid};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::single_particle::solve_single;
use crate::sweep::config::{emit_config, KGridSpec, Observable, SweepConfig};
use crate::sweep::output::{col, emit_gnuplot_data, int_col, render_csv, Provenance, ResultRow, VERSION};
use crate::two_particle::{solve_band, transition_moments, BandMember, TwoBodySpectrum};

/// Number of single-particle levels listed with the spectrum.
const SINGLE_LEVELS: usize = 6;
/// Occupation thresholds reported by the `schmidt` observable.
const SCHMIDT_THRESHOLDS: [f64; 2] = [1e-3, 1e-6];
pub const MANIFEST_NAME: &str = "manifest.txt";
pub const DEFAULT_OUT: &str = "results";

/// A requested `(point, observable)` that produced no data.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub point: String,
    pub observable: Observable,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub records: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub config: SweepConfig,
    pub out_dir: PathBuf,
    pub created: String,
    pub files: Vec<ManifestEntry>,
    pub failures: Vec<PointFailure>,
}

impl Manifest {
    pub fn is_partial(&self) -> bool {
        !self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# dwell {VERSION} sweep manifest");
        let _ = writeln!(out, "# created {}", self.created);
        out.push_str("[config]\n");
        out.push_str(&emit_config(&self.config));
        out.push_str("[files]\n");
        for f in &self.files {
            let _ = writeln!(out, "{} sha256={} records={}", f.file, f.sha256, f.records);
        }
        out.push_str("[failures]\n");
        for f in &self.failures {
            let _ = writeln!(out, "{} observable={} error={}", f.point, f.observable, f.message);
        }
        out
    }
}

/// The `[config]` section of a rendered manifest.
pub fn manifest_config(text: &str) -> Option<&str> {
    let start = text.find("[config]\n")? + "[config]\n".len();
    let end = text[start..].find("[files]")? + start;
    Some(&text[start..end])
}

fn provenance(cfg: &SweepConfig) -> Provenance {
    Provenance {
        version: VERSION,
        grid: cfg.grid_label(),
    }
}

fn point_label(kappa: f64, g1d: f64) -> String {
    format!("kappa={kappa} g1d={g1d}")
}

/// Rows for every per-point observable at one `(kappa, g1d)`.
fn point_rows(cfg: &SweepConfig, grid: &Grid, kappa: f64, g1d: f64) -> Result<Vec<ResultRow>> {
    let prov = provenance(cfg);
    let params = vec![("kappa", kappa), ("g1d", g1d)];
    let row = |observable, table, band: Option<usize>, columns, records| ResultRow {
        observable,
        table,
        params: params.clone(),
        band_index: band,
        columns,
        records,
        provenance: prov.clone(),
    };
    let spec: TwoBodySpectrum = solve_band(grid, kappa, g1d, 4)?;
    let x = grid.points();
    let n = grid.len();
    let mut rows = Vec::new();

    if cfg.wants(Observable::Spectrum) {
        for (rank, st) in spec.states.iter().enumerate() {
            rows.push(row(
                Observable::Spectrum,
                "spectrum",
                st.band_index,
                vec![int_col("rank"), col("energy"), int_col("exchange"), int_col("parity")],
                vec![vec![rank as f64, st.energy, st.exchange.sign(), st.parity.sign()]],
            ));
        }
        for s in solve_single(grid, kappa, SINGLE_LEVELS)? {
            rows.push(row(
                Observable::Spectrum,
                "single_particle",
                None,
                vec![int_col("level"), col("energy"), int_col("parity")],
                vec![vec![s.index as f64, s.energy, s.parity.sign()]],
            ));
        }
    }

    let ks = match &cfg.kgrid {
        KGridSpec::Nyquist { points: None } => default_k_grid(grid),
        KGridSpec::Nyquist { points: Some(p) } => k_grid(grid, *p),
        KGridSpec::Range { start, stop, step } => {
            crate::sweep::config::parse_range(&format!("{start}:{stop}:{step}")).map_err(Error::Usage)?
        }
    };

    for &b in &cfg.states {
        let member = BandMember::from_index(b).ok_or(Error::Precondition(format!("no band member {b}")))?;
        let st = spec.member(member);
        let band = Some(b);
        if cfg.wants(Observable::Wavefunction) {
            let records = (0..n)
                .flat_map(|j| (0..n).map(move |i| (i, j)))
                .map(|(i, j)| vec![x[i], x[j], st.psi[(i, j)]])
                .collect();
            rows.push(row(Observable::Wavefunction, "wavefunction", band, vec![col("x1"), col("x2"), col("psi")], records));
        }
        let needs_rho = [Observable::Rspdm, Observable::Momentum, Observable::Entropy, Observable::Schmidt]
            .iter()
            .any(|&o| cfg.wants(o));
        if needs_rho {
            let rho = correlations::rspdm(st, grid);
            if cfg.wants(Observable::Rspdm) {
                let records = (0..n)
                    .flat_map(|j| (0..n).map(move |i| (i, j)))
                    .map(|(i, j)| vec![x[i], x[j], rho.matrix[(i, j)]])
                    .collect();
                rows.push(row(Observable::Rspdm, "rspdm", band, vec![col("x"), col("x_prime"), col("rho")], records));
            }
            let d = correlations::natural_orbitals(&rho)?;
            if cfg.wants(Observable::Momentum) {
                let m = correlations::momentum_distribution(&d, grid, &ks);
                let records = m.k_values.iter().zip(&m.n_values).map(|(k, v)| vec![*k, *v]).collect();
                rows.push(row(Observable::Momentum, "momentum", band, vec![col("k"), col("n_k")], records));
            }
            if cfg.wants(Observable::Entropy) {
                let occ = |i: usize| d.occupations.get(i).copied().unwrap_or(0.0);
                rows.push(row(
                    Observable::Entropy,
                    "entropy",
                    band,
                    vec![col("entropy"), col("lambda1"), col("lambda2")],
                    vec![vec![correlations::von_neumann_entropy(&d), occ(0), occ(1)]],
                ));
            }
            if cfg.wants(Observable::Schmidt) {
                rows.push(row(
                    Observable::Schmidt,
                    "schmidt",
                    band,
                    vec![int_col("schmidt_1e-3"), int_col("schmidt_1e-6")],
                    vec![SCHMIDT_THRESHOLDS.map(|t| correlations::schmidt_number(&d, t) as f64).to_vec()],
                ));
            }
        }
        if cfg.wants(Observable::Moments) && b != 0 {
            let m = transition_moments(spec.member(BandMember::Ground), st, grid)?;
            rows.push(row(
                Observable::Moments,
                "moments",
                band,
                vec![col("dipole"), col("quadrupole")],
                vec![vec![m.dipole, m.quadrupole]],
            ));
        }
    }
    Ok(rows)
}

fn hubbard_rows(cfg: &SweepConfig) -> Result<(Vec<ResultRow>, Vec<PointFailure>)> {
    let hs = &cfg.hubbard;
    let surface = entropy_surface(&hs.j, &hs.u, hs.eps)?;
    let prov = provenance(cfg);
    let mut rows = Vec::new();
    for (a, &j) in hs.j.iter().enumerate() {
        let records = hs
            .u
            .iter()
            .enumerate()
            .map(|(b, &u)| {
                let (l1, l2) = ground_rspdm_occupations(&HubbardParams::new(j, u, hs.eps)).unwrap_or((f64::NAN, f64::NAN));
                vec![u, l1, l2, surface.values[a][b]]
            })
            .collect();
        rows.push(ResultRow {
            observable: Observable::HubbardSurface,
            table: "hubbard_surface",
            params: vec![("J", j), ("eps", hs.eps)],
            band_index: None,
            columns: vec![col("U"), col("lambda1"), col("lambda2"), col("entropy")],
            records,
            provenance: prov.clone(),
        });
    }
    let failures = surface
        .failures
        .iter()
        .map(|(a, b, m)| PointFailure {
            point: format!("J={} U={}", hs.j[*a], hs.u[*b]),
            observable: Observable::HubbardSurface,
            message: m.clone(),
        })
        .collect();
    Ok((rows, failures))
}

/// All rows of a sweep in canonical order plus the flagged failures,
/// without touching the file system.
pub fn compute_rows(cfg: &SweepConfig) -> Result<(Vec<ResultRow>, Vec<PointFailure>)> {
    compute_rows_with(cfg, point_rows)
}

fn compute_rows_with<F>(cfg: &SweepConfig, solve: F) -> Result<(Vec<ResultRow>, Vec<PointFailure>)>
where
    F: Fn(&SweepConfig, &Grid, f64, f64) -> Result<Vec<ResultRow>> + Sync,
{
    cfg.validate()?;
    let grid = Grid::new(cfg.n, cfg.h)?;
    let mut per_point: Vec<Observable> = cfg.observables.iter().copied().filter(|o| o.per_point()).collect();
    per_point.sort();
    per_point.dedup();
    let mut rows = Vec::new();
    let mut failures = Vec::new();

    if !per_point.is_empty() {
        let workers = cfg
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Usage(format!("cannot start {workers} workers: {e}")))?;
        let points = cfg.points();
        let results: Vec<Result<Vec<ResultRow>>> =
            pool.install(|| points.par_iter().map(|&(k, g)| solve(cfg, &grid, k, g)).collect());
        for ((k, g), res) in points.into_iter().zip(results) {
            match res {
                Ok(r) => rows.extend(r),
                Err(e) => failures.extend(per_point.iter().map(|&o| PointFailure {
                    point: point_label(k, g),
                    observable: o,
                    message: e.to_string(),
                })),
            }
        }
    }
    if cfg.wants(Observable::HubbardSurface) {
        let (r, f) = hubbard_rows(cfg)?;
        rows.extend(r);
        failures.extend(f);
    }
    Ok((rows, failures))
}

/// Header lines shared by every data file. Worker count and output
/// directory are left out because they do not affect the numbers.
fn data_header(cfg: &SweepConfig, table: &str) -> Vec<String> {
    let mut echo = cfg.clone();
    echo.workers = None;
    echo.out = None;
    let mut lines = vec![
        format!("dwell {VERSION}"),
        format!("table {table}"),
        format!("grid {}", cfg.grid_label()),
    ];
    lines.extend(emit_config(&echo).lines().map(|l| format!("config: {l}")));
    lines
}

fn write_file(dir: &Path, name: &str, text: &str, records: usize) -> Result<ManifestEntry> {
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(ManifestEntry {
        file: name.to_string(),
        sha256: hex::encode(Sha256::digest(text.as_bytes())),
        records,
    })
}

/// Runs the sweep and writes one CSV and one plot file per table, plus a
/// manifest, into the configured output directory.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Manifest> {
    let out_dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let (rows, failures) = compute_rows(cfg)?;
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let mut tables: Vec<(Observable, &'static str)> = rows.iter().map(|r| (r.observable, r.table)).collect();
    tables.sort();
    tables.dedup();
    let mut files = Vec::new();
    for (obs, table) in tables {
        let subset: Vec<ResultRow> = rows.iter().filter(|r| r.observable == obs && r.table == table).cloned().collect();
        let records = subset.iter().map(|r| r.records.len()).sum();
        let csv = render_csv(&subset, &data_header(cfg, table))?;
        files.push(write_file(&out_dir, &format!("{table}.csv"), &csv, records)?);
        let plot = emit_gnuplot_data(&subset)?;
        files.push(write_file(&out_dir, &format!("{table}.dat"), &plot, records)?);
    }

    let manifest = Manifest {
        config: cfg.clone(),
        out_dir: out_dir.clone(),
        created: humantime::format_rfc3339_seconds(std::time::SystemTime::now()).to_string(),
        files,
        failures,
    };
    let path = out_dir.join(MANIFEST_NAME);
    std::fs::write(&path, manifest.render()).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
