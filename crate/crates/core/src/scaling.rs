//! Conversion between physical trap parameters and the dimensionless units
//! used by every solver in this crate.
//!
//! Lengths are measured in units of `alpha = (hbar^2 / (A m))^(1/6)`, which
//! makes the quartic amplitude unity. Downstream code only ever sees
//! [`ScaledParams`].

use crate::error::{Error, Result};

/// Constant of the confinement-induced resonance in the quasi-1D coupling.
pub const OLSHANII_C: f64 = 1.4603;

/// Relative tolerance at which `1 - C a3d / d_perp` is treated as zero.
const RESONANCE_TOL: f64 = 1e-12;

/// Trap and interaction parameters in physical units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub mass: f64,
    pub hbar: f64,
    /// Quartic amplitude `A` of `V(x) = A (x^4 - kappa x^2)`.
    pub amplitude: f64,
    pub kappa: f64,
    pub g1d: f64,
    pub a3d: Option<f64>,
    pub d_perp: Option<f64>,
    pub omega_perp: Option<f64>,
}

impl PhysicalParams {
    pub fn new(mass: f64, hbar: f64, amplitude: f64, kappa: f64, g1d: f64) -> Self {
        PhysicalParams {
            mass,
            hbar,
            amplitude,
            kappa,
            g1d,
            a3d: None,
            d_perp: None,
            omega_perp: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("amplitude", self.amplitude),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if let Some(d) = self.d_perp {
            if !(d > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "d_perp must be positive, got {d}"
                )));
            }
        }
        Ok(())
    }

    /// Length unit `alpha` with `A m alpha^6 / hbar^2 = 1`.
    pub fn alpha(&self) -> Result<f64> {
        self.validate()?;
        Ok((self.hbar * self.hbar / (self.amplitude * self.mass)).powf(1.0 / 6.0))
    }

    /// Factor `m alpha^2 / hbar^2` converting energies to scaled units.
    fn energy_factor(&self) -> Result<f64> {
        let alpha = self.alpha()?;
        Ok(self.mass * alpha * alpha / (self.hbar * self.hbar))
    }
}

/// Dimensionless parameters consumed by the solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams {
    pub kappa: f64,
    pub g1d: f64,
    /// Length unit used for the scaling.
    pub alpha: f64,
}

pub fn to_scaled(p: &PhysicalParams) -> Result<ScaledParams> {
    let alpha = p.alpha()?;
    let kappa = (p.amplitude * p.mass / (p.hbar * p.hbar)).cbrt() * p.kappa;
    let g1d = p.mass / (p.hbar * p.hbar) * alpha * p.g1d;
    Ok(ScaledParams { kappa, g1d, alpha })
}

pub fn scale_energy(energy: f64, p: &PhysicalParams) -> Result<f64> {
    Ok(energy * p.energy_factor()?)
}

pub fn unscale_energy(energy_bar: f64, p: &PhysicalParams) -> Result<f64> {
    Ok(energy_bar / p.energy_factor()?)
}

pub fn unscale_kappa(kappa_bar: f64, p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    Ok(kappa_bar / (p.amplitude * p.mass / (p.hbar * p.hbar)).cbrt())
}

pub fn unscale_g1d(g_bar: f64, p: &PhysicalParams) -> Result<f64> {
    let alpha = p.alpha()?;
    Ok(g_bar * p.hbar * p.hbar / (p.mass * alpha))
}

pub fn unscale_length(x_bar: f64, p: &PhysicalParams) -> Result<f64> {
    Ok(x_bar * p.alpha()?)
}

/// Quasi-1D coupling from the 3D scattering length with the default
/// resonance constant.
pub fn g1d_from_3d(a3d: f64, d_perp: f64, mass: f64, hbar: f64) -> Result<f64> {
    g1d_from_3d_with(a3d, d_perp, mass, hbar, OLSHANII_C)
}

/// Quasi-1D coupling `g1d = -2 hbar^2 / (m a1d)` with
/// `a1d = -(d_perp^2 / 2 a3d) (1 - C a3d / d_perp)`.
pub fn g1d_from_3d_with(a3d: f64, d_perp: f64, mass: f64, hbar: f64, c: f64) -> Result<f64> {
    if !(mass > 0.0) || !(hbar > 0.0) {
        return Err(Error::InvalidParameter(
            "mass and hbar must be positive".into(),
        ));
    }
    if !(d_perp > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "d_perp must be positive, got {d_perp}"
        )));
    }
    if a3d == 0.0 {
        return Ok(0.0);
    }
    let denominator = 1.0 - c * a3d / d_perp;
    if denominator.abs() < RESONANCE_TOL {
        return Err(Error::Singularity { denominator });
    }
    let a1d = -d_perp * d_perp / (2.0 * a3d) * denominator;
    Ok(-2.0 * hbar * hbar / (mass * a1d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn unit_scaling_is_identity() {
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 2.0, 5.0);
        let s = to_scaled(&p).unwrap();
        assert_eq!(s.kappa, 2.0);
        assert_eq!(s.g1d, 5.0);
        assert_eq!(s.alpha, 1.0);
        assert_eq!(unscale_energy(1.0, &p).unwrap(), 1.0);
    }

    #[test]
    fn amplitude_eight_halves_lengths() {
        // alpha = 8^(-1/6) = 1/sqrt(2); kappa_bar = 8^(1/3) kappa; g_bar = alpha g
        let p = PhysicalParams::new(1.0, 1.0, 8.0, 1.0, 1.0);
        let s = to_scaled(&p).unwrap();
        assert!(close(s.kappa, 2.0, 1e-14));
        assert!(close(s.alpha, std::f64::consts::FRAC_1_SQRT_2, 1e-14));
        assert!(close(s.g1d, std::f64::consts::FRAC_1_SQRT_2, 1e-14));
        // E_bar = 8^(-1/3) E = E / 2
        assert!(close(unscale_energy(3.0, &p).unwrap(), 6.0, 1e-14));
        assert_eq!(unscale_energy(0.0, &p).unwrap(), 0.0);
    }

    #[test]
    fn rejects_non_positive_parameters() {
        for p in [
            PhysicalParams::new(0.0, 1.0, 1.0, 0.0, 0.0),
            PhysicalParams::new(1.0, -1.0, 1.0, 0.0, 0.0),
            PhysicalParams::new(1.0, 1.0, 0.0, 0.0, 0.0),
        ] {
            assert!(matches!(to_scaled(&p), Err(Error::InvalidParameter(_))));
            assert!(unscale_energy(1.0, &p).is_err());
        }
        let mut p = PhysicalParams::new(1.0, 1.0, 1.0, 0.0, 0.0);
        p.d_perp = Some(0.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn coupling_from_scattering_length() {
        assert_eq!(g1d_from_3d(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(matches!(
            g1d_from_3d(1.0 / OLSHANII_C, 1.0, 1.0, 1.0),
            Err(Error::Singularity { .. })
        ));
        // Hand evaluation of the two chained relations.
        let a1d = -1.0 / (2.0 * 0.01) * (1.0 - 1.4603 * 0.01);
        let expected = -2.0 / a1d;
        let g = g1d_from_3d(0.01, 1.0, 1.0, 1.0).unwrap();
        assert!(close(g, expected, 1e-14));
        assert!(close(g, 0.040_592_776_312_491_31, 1e-12));
    }

    #[test]
    fn coupling_is_odd_in_small_scattering_length() {
        let d = 2.5;
        let plus = g1d_from_3d(1e-6 * d, d, 1.3, 0.7).unwrap();
        let minus = g1d_from_3d(-1e-6 * d, d, 1.3, 0.7).unwrap();
        assert!(plus > 0.0 && minus < 0.0);
        assert!(close(plus.abs(), minus.abs(), 1e-4));
    }

    #[test]
    fn resonance_constant_is_configurable() {
        let g = g1d_from_3d_with(0.5, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!(close(g, 4.0 * 0.5, 1e-14));
        assert!(g1d_from_3d_with(0.5, 1.0, 1.0, 1.0, 2.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_recovers_inputs(
                m in 0.01f64..100.0,
                hbar in 0.01f64..10.0,
                a in 0.01f64..100.0,
                kappa in -10.0f64..10.0,
                g in -20.0f64..20.0,
                e in -50.0f64..50.0,
            ) {
                let p = PhysicalParams::new(m, hbar, a, kappa, g);
                let s = to_scaled(&p).unwrap();
                let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300);
                prop_assert!(rel(unscale_kappa(s.kappa, &p).unwrap(), kappa));
                prop_assert!(rel(unscale_g1d(s.g1d, &p).unwrap(), g));
                let e_bar = scale_energy(e, &p).unwrap();
                prop_assert!(rel(unscale_energy(e_bar, &p).unwrap(), e));
                prop_assert!(rel(s.alpha.powi(6), hbar * hbar / (a * m)));
            }
        }
    }
}
