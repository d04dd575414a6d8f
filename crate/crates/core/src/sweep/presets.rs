//! Parameter sets for each figure of the study.
//!
//! Numbering: fig1 single-particle levels, fig2 band energies, fig3 ground
//! wavefunctions, fig4 ground momentum distributions, fig5 and fig6 ground
//! entropy against `g1d` and `kappa`, fig7 the dimer entropy surface,
//! fig8 excited wavefunctions, fig9 momentum distributions of the second
//! and third excited states, fig10 and fig11 band entropies against `g1d`
//! and `kappa`.

use crate::sweep::config::{parse_range, HubbardSpec, Observable, SweepConfig};

pub const NAMES: [&str; 11] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11",
];

fn range(s: &str) -> Vec<f64> {
    parse_range(s).expect("preset ranges are valid")
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    let base = SweepConfig {
        preset: Some(name.to_string()),
        ..SweepConfig::default()
    };
    let four = vec![0.0, 1.0, 2.0, 5.0];
    let cfg = match name {
        "fig1" => SweepConfig {
            kappa: range("0:5:0.25"),
            g1d: vec![0.0],
            observables: vec![Observable::Spectrum],
            ..base
        },
        "fig2" => SweepConfig {
            kappa: range("0:5:0.25"),
            g1d: vec![0.0, 1.0, 2.0, 10.0],
            observables: vec![Observable::Spectrum],
            ..base
        },
        "fig3" => SweepConfig {
            n: 81,
            h: 0.14,
            kappa: four.clone(),
            g1d: four,
            states: vec![0],
            observables: vec![Observable::Wavefunction],
            ..base
        },
        "fig4" => SweepConfig {
            kappa: four.clone(),
            g1d: four,
            states: vec![0],
            observables: vec![Observable::Momentum],
            ..base
        },
        "fig5" => SweepConfig {
            kappa: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            g1d: range("0:10:0.5"),
            states: vec![0],
            observables: vec![Observable::Entropy],
            ..base
        },
        "fig6" => SweepConfig {
            kappa: range("0:5:0.25"),
            g1d: vec![1.0, 2.0, 5.0, 10.0],
            states: vec![0],
            observables: vec![Observable::Entropy],
            ..base
        },
        "fig7" => SweepConfig {
            observables: vec![Observable::HubbardSurface],
            hubbard: HubbardSpec {
                j: range("0.05:2:0.05"),
                u: range("0:10:0.25"),
                eps: 0.0,
            },
            ..base
        },
        "fig8" => SweepConfig {
            n: 81,
            h: 0.14,
            kappa: four.clone(),
            g1d: four,
            states: vec![1, 2, 3],
            observables: vec![Observable::Wavefunction],
            ..base
        },
        "fig9" => SweepConfig {
            kappa: four.clone(),
            g1d: four,
            states: vec![2, 3],
            observables: vec![Observable::Momentum],
            ..base
        },
        "fig10" => SweepConfig {
            kappa: vec![0.0, 2.0, 4.0, 5.0],
            g1d: range("0:10:0.5"),
            observables: vec![Observable::Entropy],
            ..base
        },
        "fig11" => SweepConfig {
            kappa: range("0:5:0.25"),
            g1d: vec![1.0, 2.0, 5.0, 10.0],
            observables: vec![Observable::Entropy],
            ..base
        },
        _ => return None,
    };
    Some(cfg)
}
