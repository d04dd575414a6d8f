//! Line-oriented sweep configuration.
//!
//! ```text
//! # comments start with '#'
//! preset = fig5
//! N = 61
//! h = 0.16
//! kappa = 0, 1, 2:5:1
//! g1d = 0:10:0.5
//! states = 0, 3
//! observables = entropy, momentum
//! kgrid = default        # or a point count over [-pi/h, pi/h], or start:stop:step
//! J = 0.1:2:0.1
//! U = 0:10:0.5
//! eps = 0
//! ```
//!
//! A `preset` line is applied first wherever it appears; every other key
//! overrides the preset.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sweep::presets;

pub const DEFAULT_N: usize = 61;
pub const DEFAULT_H: f64 = 0.16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    Spectrum,
    Wavefunction,
    Rspdm,
    Momentum,
    Entropy,
    Schmidt,
    Moments,
    HubbardSurface,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::Spectrum,
        Observable::Wavefunction,
        Observable::Rspdm,
        Observable::Momentum,
        Observable::Entropy,
        Observable::Schmidt,
        Observable::Moments,
        Observable::HubbardSurface,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::Spectrum => "spectrum",
            Observable::Wavefunction => "wavefunction",
            Observable::Rspdm => "rspdm",
            Observable::Momentum => "momentum",
            Observable::Entropy => "entropy",
            Observable::Schmidt => "schmidt",
            Observable::Moments => "moments",
            Observable::HubbardSurface => "hubbard-surface",
        }
    }

    /// Whether the observable needs the two-body solve at each sweep point.
    pub fn per_point(self) -> bool {
        self != Observable::HubbardSurface
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown observable '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum KGridSpec {
    /// `points` uniform samples of `[-pi/h, pi/h]`; `None` means `4N`.
    Nyquist { points: Option<usize> },
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HubbardSpec {
    pub j: Vec<f64>,
    pub u: Vec<f64>,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub preset: Option<String>,
    pub n: usize,
    pub h: f64,
    pub kappa: Vec<f64>,
    pub g1d: Vec<f64>,
    /// Band indices: 0 ground, 1 first, 2 second, 3 third excited.
    pub states: Vec<usize>,
    pub observables: Vec<Observable>,
    pub kgrid: KGridSpec,
    pub hubbard: HubbardSpec,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            preset: None,
            n: DEFAULT_N,
            h: DEFAULT_H,
            kappa: vec![0.0],
            g1d: vec![0.0],
            states: vec![0, 1, 2, 3],
            observables: vec![Observable::Spectrum],
            kgrid: KGridSpec::Nyquist { points: None },
            hubbard: HubbardSpec {
                j: vec![1.0],
                u: vec![0.0],
                eps: 0.0,
            },
            out: None,
            workers: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config { line: 0, message: m });
        if self.n < 3 || self.n.is_multiple_of(2) {
            return bad(format!("N must be odd and at least 3, got {}", self.n));
        }
        if !(self.h > 0.0) || !self.h.is_finite() {
            return bad(format!("h must be positive, got {}", self.h));
        }
        for (name, list) in [("kappa", &self.kappa), ("g1d", &self.g1d), ("J", &self.hubbard.j), ("U", &self.hubbard.u)] {
            if list.is_empty() {
                return bad(format!("{name} list is empty"));
            }
            if list.iter().any(|v| !v.is_finite()) {
                return bad(format!("{name} list has a non-finite entry"));
            }
        }
        if self.states.is_empty() {
            return bad("states list is empty".into());
        }
        if let Some(s) = self.states.iter().find(|&&s| s > 3) {
            return bad(format!("band index {s} outside 0..=3"));
        }
        if self.observables.is_empty() {
            return bad("observables list is empty".into());
        }
        if self.observables.contains(&Observable::HubbardSurface) && self.hubbard.j.iter().any(|&j| !(j > 0.0)) {
            return bad("hubbard-surface needs J > 0".into());
        }
        if let KGridSpec::Nyquist { points: Some(p) } = self.kgrid {
            if p < 2 {
                return bad(format!("kgrid needs at least 2 points, got {p}"));
            }
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    /// `(kappa, g1d)` pairs in canonical order: kappa outer, g1d inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.kappa
            .iter()
            .flat_map(|&k| self.g1d.iter().map(move |&g| (k, g)))
            .collect()
    }

    pub fn grid_label(&self) -> String {
        format!("N={} h={}", self.n, self.h)
    }
}

/// Canonical text form; `parse_config(&emit_config(c)) == c`.
pub fn emit_config(c: &SweepConfig) -> String {
    let list = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    if let Some(p) = &c.preset {
        out.push_str(&format!("preset = {p}\n"));
    }
    out.push_str(&format!("N = {}\n", c.n));
    out.push_str(&format!("h = {:?}\n", c.h));
    out.push_str(&format!("kappa = {}\n", list(&c.kappa)));
    out.push_str(&format!("g1d = {}\n", list(&c.g1d)));
    out.push_str(&format!(
        "states = {}\n",
        c.states.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
    ));
    out.push_str(&format!(
        "observables = {}\n",
        c.observables.iter().map(|o| o.name()).collect::<Vec<_>>().join(", ")
    ));
    match &c.kgrid {
        KGridSpec::Nyquist { points: None } => out.push_str("kgrid = default\n"),
        KGridSpec::Nyquist { points: Some(p) } => out.push_str(&format!("kgrid = {p}\n")),
        KGridSpec::Range { start, stop, step } => out.push_str(&format!("kgrid = {start:?}:{stop:?}:{step:?}\n")),
    }
    out.push_str(&format!("J = {}\n", list(&c.hubbard.j)));
    out.push_str(&format!("U = {}\n", list(&c.hubbard.u)));
    out.push_str(&format!("eps = {:?}\n", c.hubbard.eps));
    if let Some(o) = &c.out {
        out.push_str(&format!("out = {}\n", o.display()));
    }
    if let Some(w) = c.workers {
        out.push_str(&format!("workers = {w}\n"));
    }
    out
}

pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(Error::Config {
            line,
            message: format!("expected 'key = value', got '{content}'"),
        })?;
        entries.push((line, key.trim().to_string(), value.trim().to_string()));
    }

    let mut cfg = SweepConfig::default();
    let mut preset_line = None;
    for (line, key, value) in &entries {
        if key == "preset" {
            if preset_line.is_some() {
                return Err(Error::Config {
                    line: *line,
                    message: "preset given twice".into(),
                });
            }
            cfg = presets::preset(value).ok_or(Error::Config {
                line: *line,
                message: format!("unknown preset '{value}'"),
            })?;
            preset_line = Some(*line);
        }
    }
    let mut last_line = preset_line.unwrap_or(0);
    for (line, key, value) in &entries {
        let line = *line;
        let err = |m: String| Error::Config { line, message: m };
        match key.as_str() {
            "preset" => {}
            "N" => cfg.n = value.parse().map_err(|_| err(format!("N must be an integer, got '{value}'")))?,
            "h" => cfg.h = parse_f64(value).map_err(err)?,
            "kappa" => cfg.kappa = parse_list(value).map_err(err)?,
            "g1d" => cfg.g1d = parse_list(value).map_err(err)?,
            "states" => {
                cfg.states = split_items(value)
                    .map(|s| s.parse::<usize>().map_err(|_| err(format!("bad band index '{s}'"))))
                    .collect::<Result<_>>()?
            }
            "observables" => {
                cfg.observables = split_items(value)
                    .map(|s| s.parse::<Observable>().map_err(err))
                    .collect::<Result<_>>()?
            }
            "kgrid" => cfg.kgrid = parse_kgrid(value).map_err(err)?,
            "J" => cfg.hubbard.j = parse_list(value).map_err(err)?,
            "U" => cfg.hubbard.u = parse_list(value).map_err(err)?,
            "eps" => cfg.hubbard.eps = parse_f64(value).map_err(err)?,
            "out" => cfg.out = Some(PathBuf::from(value)),
            "workers" => {
                cfg.workers = Some(value.parse().map_err(|_| err(format!("workers must be an integer, got '{value}'")))?)
            }
            other => return Err(err(format!("unknown key '{other}'"))),
        }
        // Remember where the key that broke validation came from.
        if let Err(Error::Config { message, .. }) = cfg.validate() {
            if !message.is_empty() && affects(key, &message) {
                return Err(err(message));
            }
        }
        last_line = last_line.max(line);
    }
    cfg.validate().map_err(|e| match e {
        Error::Config { message, .. } => Error::Config {
            line: last_line,
            message,
        },
        other => other,
    })?;
    Ok(cfg)
}

/// Whether a validation message concerns the given key, so the error can
/// point at that key's line.
fn affects(key: &str, message: &str) -> bool {
    let subject = message.split_whitespace().next().unwrap_or("");
    match key {
        "N" => subject == "N",
        "h" => subject == "h",
        "kappa" | "g1d" | "J" | "U" | "states" | "observables" | "kgrid" | "workers" => subject == key,
        _ => false,
    }
}

fn split_items(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

/// Inclusive `start:stop:step` range.
pub fn parse_range(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range '{s}' must be start:stop:step"));
    }
    let (start, stop, step) = (parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?);
    if !(step > 0.0) {
        return Err(format!("range step must be positive in '{s}'"));
    }
    if stop < start {
        return Err(format!("range stop below start in '{s}'"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Comma-separated numbers and ranges.
pub fn parse_list(value: &str) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in split_items(value) {
        if item.contains(':') {
            out.extend(parse_range(item)?);
        } else {
            out.push(parse_f64(item)?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

fn parse_kgrid(value: &str) -> std::result::Result<KGridSpec, String> {
    if value == "default" {
        return Ok(KGridSpec::Nyquist { points: None });
    }
    if value.contains(':') {
        let r = parse_range(value)?;
        let parts: Vec<f64> = value.split(':').map(|p| p.trim().parse().unwrap_or(0.0)).collect();
        debug_assert!(!r.is_empty());
        return Ok(KGridSpec::Range {
            start: parts[0],
            stop: parts[1],
            step: parts[2],
        });
    }
    value
        .parse::<usize>()
        .map(|p| KGridSpec::Nyquist { points: Some(p) })
        .map_err(|_| format!("kgrid must be 'default', a point count or start:stop:step, got '{value}'"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(r: Result<SweepConfig>) -> usize {
        match r {
            Err(Error::Config { line, .. }) => line,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c, SweepConfig::default());
        assert_eq!((c.n, c.h), (61, 0.16));
        assert_eq!(c.points(), vec![(0.0, 0.0)]);
        assert_eq!(c.observables, vec![Observable::Spectrum]);
    }

    #[test]
    fn even_grid_is_rejected_with_line() {
        assert_eq!(line_of(parse_config("# grid\nN = 62\n")), 2);
        assert_eq!(line_of(parse_config("h = 0.1\nh = -1\n")), 2);
    }

    #[test]
    fn unknown_key_and_malformed_values() {
        assert_eq!(line_of(parse_config("kappa = 1\nfoo = 2")), 2);
        assert_eq!(line_of(parse_config("kappa = 1, x")), 1);
        assert_eq!(line_of(parse_config("\n\nobservables = spectrum, heat")), 3);
        assert_eq!(line_of(parse_config("g1d = 5:1:1")), 1);
        assert_eq!(line_of(parse_config("states = 4")), 1);
        assert_eq!(line_of(parse_config("just text")), 1);
        assert_eq!(line_of(parse_config("preset = fig99")), 1);
    }

    #[test]
    fn ranges_and_lists() {
        let c = parse_config("kappa = 0:1:0.25, 3\ng1d=2").unwrap();
        assert_eq!(c.kappa, vec![0.0, 0.25, 0.5, 0.75, 1.0, 3.0]);
        assert_eq!(c.g1d, vec![2.0]);
        assert_eq!(parse_range("0:10:0.5").unwrap().len(), 21);
        assert_eq!(parse_range("0:1:0.1").unwrap().len(), 11);
    }

    #[test]
    fn figure_two_preset() {
        let c = parse_config("preset = fig2").unwrap();
        assert_eq!(c.g1d, vec![0.0, 1.0, 2.0, 10.0]);
        assert_eq!(c.kappa.len(), 21);
        assert_eq!(c.kappa[0], 0.0);
        assert_eq!(*c.kappa.last().unwrap(), 5.0);
        assert!((c.kappa[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn keys_override_preset_regardless_of_order() {
        let c = parse_config("g1d = 7\npreset = fig2\n").unwrap();
        assert_eq!(c.g1d, vec![7.0]);
        assert_eq!(c.preset.as_deref(), Some("fig2"));
    }

    #[test]
    fn kgrid_forms() {
        assert_eq!(parse_config("kgrid = 100").unwrap().kgrid, KGridSpec::Nyquist { points: Some(100) });
        assert_eq!(
            parse_config("kgrid = -5:5:0.5").unwrap().kgrid,
            KGridSpec::Range { start: -5.0, stop: 5.0, step: 0.5 }
        );
        assert!(parse_config("kgrid = 1").is_err());
    }

    #[test]
    fn hubbard_needs_positive_tunnelling() {
        assert!(parse_config("observables = hubbard-surface\nJ = 0, 1").is_err());
        assert!(parse_config("observables = hubbard-surface\nJ = 0.5, 1").is_ok());
    }

    #[test]
    fn round_trip_for_every_preset() {
        for name in presets::NAMES {
            let c = parse_config(&format!("preset = {name}\nworkers = 3\nout = /tmp/x")).unwrap();
            assert_eq!(parse_config(&emit_config(&c)).unwrap(), c, "{name}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn emit_then_parse_is_identity(
                half in 1usize..60,
                h in 0.01f64..1.0,
                kappa in proptest::collection::vec(-5.0f64..10.0, 1..6),
                g in proptest::collection::vec(-3.0f64..100.0, 1..6),
                states in proptest::collection::vec(0usize..4, 1..4),
                obs in proptest::collection::vec(0usize..7, 1..4),
                eps in -2.0f64..2.0,
            ) {
                let c = SweepConfig {
                    n: 2 * half + 1,
                    h,
                    kappa,
                    g1d: g,
                    states,
                    observables: obs.into_iter().map(|i| Observable::ALL[i]).collect(),
                    hubbard: HubbardSpec { j: vec![0.5, 1.5], u: vec![0.0, 2.0], eps },
                    ..SweepConfig::default()
                };
                prop_assert_eq!(parse_config(&emit_config(&c)).unwrap(), c);
            }
        }
    }
}
