use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dwell::oracle;
use dwell::sweep::config::parse_list;
use dwell::sweep::{parse_config, run_sweep, Observable, SweepConfig};
use dwell::Error;

/// Two bosons in a quartic double well: spectra, wavefunctions, momentum
/// distributions, entropies and the Bose-Hubbard dimer.
#[derive(Parser)]
#[command(name = "dwell", version)]
struct Cli {
    /// Sweep configuration file (`key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory. Defaults to `results/<command>`.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true, value_name = "INT")]
    workers: Option<usize>,
    /// Grid as `N,h`, e.g. `61,0.16`.
    #[arg(long, global = true, value_name = "N,h")]
    grid: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Points {
    /// Barrier heights: list and/or start:stop:step ranges.
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Interaction strengths: list and/or ranges.
    #[arg(long, allow_hyphen_values = true)]
    g1d: Option<String>,
    /// Band indices (0 ground ... 3 third excited).
    #[arg(long)]
    states: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Band energies and single-particle levels.
    Spectrum(Points),
    /// Two-body wavefunctions on the grid.
    Wavefunction(Points),
    /// Momentum distributions.
    Momentum {
        #[command(flatten)]
        points: Points,
        /// `default`, a point count over [-pi/h, pi/h], or start:stop:step.
        #[arg(long, allow_hyphen_values = true)]
        kgrid: Option<String>,
    },
    /// Von Neumann entropy and the leading occupations.
    Entropy(Points),
    /// Dipole and quadrupole moments between the ground state and the band.
    Moments(Points),
    /// Ground-state entropy surface of the Bose-Hubbard dimer.
    Hubbard {
        #[arg(long = "j")]
        j: Option<String>,
        #[arg(long = "u")]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<f64>,
    },
    /// Compare the main solver with the finite-difference oracles and write
    /// the fixture table.
    Oracle,
    /// Run a figure preset (fig1 ... fig11).
    Reproduce { preset: String },
}

fn flag_error(flag: &str, message: String) -> Error {
    Error::Usage(format!("--{flag}: {message}"))
}

fn apply_points(cfg: &mut SweepConfig, p: &Points) -> Result<(), Error> {
    if let Some(k) = &p.kappa {
        cfg.kappa = parse_list(k).map_err(|m| flag_error("kappa", m))?;
    }
    if let Some(g) = &p.g1d {
        cfg.g1d = parse_list(g).map_err(|m| flag_error("g1d", m))?;
    }
    if let Some(s) = &p.states {
        cfg.states = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| flag_error("states", format!("bad band index '{x}'"))))
            .collect::<Result<_, _>>()?;
    }
    Ok(())
}

fn load(cli: &Cli, preset: Option<&str>) -> Result<SweepConfig, Error> {
    let mut text = String::new();
    if let Some(p) = preset {
        text.push_str(&format!("preset = {p}\n"));
    }
    if let Some(path) = &cli.config {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        if preset.is_some() && body.lines().any(|l| l.split('#').next().unwrap_or("").trim_start().starts_with("preset")) {
            return Err(Error::Usage("the config file sets a preset as well".into()));
        }
        text.push_str(&body);
    }
    parse_config(&text)
}

fn build(cli: &Cli) -> Result<(SweepConfig, String), Error> {
    let (mut cfg, name) = match &cli.command {
        Command::Reproduce { preset } => (load(cli, Some(preset))?, preset.clone()),
        Command::Oracle => (SweepConfig::default(), "oracle".into()),
        _ => (load(cli, None)?, String::new()),
    };
    let name = match &cli.command {
        Command::Spectrum(p) => {
            apply_points(&mut cfg, p)?;
            cfg.observables = vec![Observable::Spectrum];
            "spectrum".to_string()
        }
        Command::Wavefunction(p) => {
            apply_points(&mut cfg, p)?;
            cfg.observables = vec![Observable::Wavefunction];
            "wavefunction".to_string()
        }
        Command::Momentum { points, kgrid } => {
            apply_points(&mut cfg, points)?;
            if let Some(k) = kgrid {
                let spec = parse_config(&format!("kgrid = {k}")).map_err(|e| flag_error("kgrid", e.to_string()))?;
                cfg.kgrid = spec.kgrid;
            }
            cfg.observables = vec![Observable::Momentum];
            "momentum".to_string()
        }
        Command::Entropy(p) => {
            apply_points(&mut cfg, p)?;
            cfg.observables = vec![Observable::Entropy];
            "entropy".to_string()
        }
        Command::Moments(p) => {
            apply_points(&mut cfg, p)?;
            cfg.observables = vec![Observable::Moments];
            "moments".to_string()
        }
        Command::Hubbard { j, u, eps } => {
            if let Some(j) = j {
                cfg.hubbard.j = parse_list(j).map_err(|m| flag_error("j", m))?;
            }
            if let Some(u) = u {
                cfg.hubbard.u = parse_list(u).map_err(|m| flag_error("u", m))?;
            }
            if let Some(e) = eps {
                cfg.hubbard.eps = *e;
            }
            cfg.observables = vec![Observable::HubbardSurface];
            "hubbard".to_string()
        }
        _ => name,
    };
    if let Some(g) = &cli.grid {
        let (n, h) = g.split_once(',').ok_or(flag_error("grid", format!("expected N,h, got '{g}'")))?;
        cfg.n = n.trim().parse().map_err(|_| flag_error("grid", format!("bad N '{n}'")))?;
        cfg.h = h.trim().parse().map_err(|_| flag_error("grid", format!("bad h '{h}'")))?;
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    if let Some(o) = &cli.out {
        cfg.out = Some(o.clone());
    } else if cfg.out.is_none() {
        cfg.out = Some(PathBuf::from("results").join(&name));
    }
    cfg.validate()?;
    Ok((cfg, name))
}

fn run_oracle(cli: &Cli) -> Result<ExitCode, Error> {
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
    let reports = oracle::standard_reports()?;
    for r in &reports {
        println!(
            "{:<28} main {:>18.10} oracle {:>18.10} |diff| {:.3e}",
            r.quantity, r.main_value, r.oracle_value, r.abs_diff
        );
    }
    let path = dir.join("oracle_equivalence.csv");
    oracle::write_fixture(&path, &reports, &oracle::standard_provenance())?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let (cfg, _) = build(cli)?;
    if matches!(cli.command, Command::Oracle) {
        return run_oracle(cli);
    }
    let manifest = run_sweep(&cfg)?;
    for f in &manifest.files {
        println!("wrote {} ({} records)", manifest.out_dir.join(&f.file).display(), f.records);
    }
    println!("wrote {}", manifest.out_dir.join(dwell::sweep::run::MANIFEST_NAME).display());
    if manifest.is_partial() {
        for f in &manifest.failures {
            eprintln!("failed: {} {}: {}", f.point, f.observable, f.message);
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("dwell: {e}");
            match e {
                Error::Config { .. } | Error::Usage(_) | Error::InvalidGrid(_) | Error::InvalidParameter(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
