//! Result rows and their CSV and gnuplot renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sweep::config::Observable;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: &'static str,
    /// Printed without a fractional part.
    pub integer: bool,
}

pub const fn col(name: &'static str) -> Column {
    Column { name, integer: false }
}

pub const fn int_col(name: &'static str) -> Column {
    Column { name, integer: true }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: &'static str,
    pub grid: String,
}

/// Output of one observable at one parameter point. Scalar results have a
/// single record; array results (wavefunctions, momentum curves) have one
/// record per sample, in column-major order of the underlying array.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub observable: Observable,
    /// Output file stem; an observable may fill more than one table.
    pub table: &'static str,
    /// Labelled parameters of the point, e.g. `kappa` and `g1d`.
    pub params: Vec<(&'static str, f64)>,
    pub band_index: Option<usize>,
    pub columns: Vec<Column>,
    pub records: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

fn fmt_value(v: f64, integer: bool) -> String {
    if integer {
        format!("{}", v as i64)
    } else {
        format!("{v:.12e}")
    }
}

fn fmt_param(v: f64) -> String {
    format!("{v}")
}

/// CSV body (header line and records) for rows of one table.
pub fn render_csv(rows: &[ResultRow], header: &[String]) -> Result<String> {
    let first = rows.first().ok_or(Error::Usage("no rows to write".into()))?;
    check_single_table(rows)?;
    let mut out = String::new();
    for line in header {
        let _ = writeln!(out, "# {line}");
    }
    let mut names: Vec<&str> = first.params.iter().map(|p| p.0).collect();
    names.push("band");
    names.extend(first.columns.iter().map(|c| c.name));
    let _ = writeln!(out, "{}", names.join(","));
    for row in rows {
        let prefix: Vec<String> = row
            .params
            .iter()
            .map(|p| fmt_param(p.1))
            .chain(std::iter::once(row.band_index.map(|b| b.to_string()).unwrap_or_default()))
            .collect();
        let prefix = prefix.join(",");
        for rec in &row.records {
            let cells: Vec<String> = rec
                .iter()
                .zip(&row.columns)
                .map(|(v, c)| fmt_value(*v, c.integer))
                .collect();
            let _ = writeln!(out, "{prefix},{}", cells.join(","));
        }
    }
    Ok(out)
}

fn check_single_table(rows: &[ResultRow]) -> Result<()> {
    let first = &rows[0];
    if rows.iter().any(|r| r.observable != first.observable || r.table != first.table) {
        return Err(Error::Usage("rows mix several observables".into()));
    }
    Ok(())
}

/// Whitespace-separated plot data, one block per curve, blocks separated by
/// two blank lines so each can be addressed with gnuplot's `index`.
///
/// Scalar rows are joined into curves along the parameter with the most
/// distinct values; curves are keyed by band and the remaining parameters
/// and emitted in ascending key order. Array rows become one block each.
pub fn emit_gnuplot_data(rows: &[ResultRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Usage("no rows to plot".into()));
    }
    check_single_table(rows)?;
    let first = &rows[0];
    let mut out = String::new();
    let _ = writeln!(out, "# dwell {} {} ({})", VERSION, first.table, first.provenance.grid);

    let scalar = rows.iter().all(|r| r.records.len() == 1);
    if !scalar {
        let names: Vec<&str> = first.columns.iter().map(|c| c.name).collect();
        for (i, row) in rows.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# {}", block_label(&row.params, row.band_index));
            let _ = writeln!(out, "# {}", names.join(" "));
            for rec in &row.records {
                let cells: Vec<String> = rec.iter().zip(&row.columns).map(|(v, c)| fmt_value(*v, c.integer)).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        return Ok(out);
    }

    let n_params = first.params.len();
    // Ties go to the last parameter.
    let axis = (0..n_params)
        .max_by_key(|&p| {
            let mut vals: Vec<u64> = rows.iter().map(|r| r.params[p].1.to_bits()).collect();
            vals.sort_unstable();
            vals.dedup();
            vals.len()
        })
        .unwrap_or(0);

    // Curve key: band, then the remaining parameters.
    let mut curves: BTreeMap<(Option<usize>, Vec<OrdF64>), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        let key: Vec<OrdF64> = r
            .params
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != axis)
            .map(|(_, p)| OrdF64(p.1))
            .collect();
        curves.entry((r.band_index, key)).or_default().push(r);
    }
    let mut names = vec![first.params.get(axis).map(|p| p.0).unwrap_or("x")];
    names.extend(first.columns.iter().map(|c| c.name));
    for (i, (_, mut members)) in curves.into_iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        members.sort_by(|a, b| a.params[axis].1.total_cmp(&b.params[axis].1));
        let label_params: Vec<(&str, f64)> = members[0]
            .params
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != axis)
            .map(|(_, p)| *p)
            .collect();
        let _ = writeln!(out, "# {}", block_label(&label_params, members[0].band_index));
        let _ = writeln!(out, "# {}", names.join(" "));
        for r in members {
            let mut cells = vec![fmt_param(r.params[axis].1)];
            cells.extend(r.records[0].iter().zip(&r.columns).map(|(v, c)| fmt_value(*v, c.integer)));
            let _ = writeln!(out, "{}", cells.join(" "));
        }
    }
    Ok(out)
}

fn block_label(params: &[(&str, f64)], band: Option<usize>) -> String {
    let mut parts: Vec<String> = params.iter().map(|(n, v)| format!("{n}={}", fmt_param(*v))).collect();
    if let Some(b) = band {
        parts.push(format!("band={b}"));
    }
    parts.join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
