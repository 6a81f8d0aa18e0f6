//! Regime classification and closed-form feasibility estimates.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::gaussian::bound_state_width;
use crate::potentials::{ModelVariant, PotentialModel};
use crate::sphere::{PhysicalConstants, RegimeBoundaries, RegimeLabel, SphereSpec};

/// Eigenvalue of the Choquard ground state in units of `G²M⁵/ħ²`.
pub const CHOQUARD_E0: f64 = 0.163;
/// Prefactor of the numerically observed collapse threshold, `1.14³`.
pub const VAN_METER_FACTOR: f64 = 1.14 * 1.14 * 1.14;

/// Regime boundaries for a sphere: `2·r_nucleus`, `(6/5)·R/N` and `2R`.
///
/// The atomic limit is raised to the nuclear limit when the crossover falls
/// below it, which leaves the atomic regime empty instead of overlapping.
pub fn regime_boundaries(spec: &SphereSpec) -> RegimeBoundaries {
    let nuclear_max = 2.0 * spec.nucleus_radius();
    let crossover = 1.2 * spec.radius() / spec.atom_count();
    RegimeBoundaries {
        nuclear_max,
        atomic_max: crossover.max(nuclear_max),
        mesoscopic_max: 2.0 * spec.radius(),
    }
}

/// Regime that governs the self-interaction at `width`.
pub fn classify(spec: &SphereSpec, width: f64) -> Result<RegimeLabel> {
    if !(width > 0.0) {
        return Err(invalid(format!("width must be positive, got {width}")));
    }
    let boundaries = regime_boundaries(spec);
    Ok(RegimeLabel {
        regime: boundaries.regime_of(width),
        boundaries,
    })
}

/// Radius at which `ħ²/(GM³) = R` for a sphere of density `rho`.
pub fn mesoscopic_radius(rho: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(invalid(format!("density must be positive, got {rho}")));
    }
    let c = 4.0 * PI / 3.0;
    Ok((constants.hbar.powi(2) / (constants.g * rho.powi(3) * c.powi(3))).powf(0.1))
}

/// Atom numbers above which the atomic and nuclear kernels bind the
/// centre of mass to within a lattice constant or a nucleus radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalAtomNumbers {
    pub atomic: f64,
    pub nuclear: f64,
}

/// `N_atomic = √(ħ²/(G·m³·δ))`, `N_nuclear = N_atomic·√(δ/r_nucleus)`.
pub fn critical_atom_numbers(spec: &SphereSpec, constants: &PhysicalConstants) -> CriticalAtomNumbers {
    let m = spec.atom_mass();
    let delta = spec.lattice_constant();
    let atomic = (constants.hbar.powi(2) / (constants.g * m.powi(3) * delta)).sqrt();
    CriticalAtomNumbers {
        atomic,
        nuclear: atomic * (delta / spec.nucleus_radius()).sqrt(),
    }
}

/// `1.14³·ħ²/(GM³)`.
pub fn van_meter_threshold(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(invalid(format!("mass must be positive, got {mass}")));
    }
    Ok(VAN_METER_FACTOR * constants.hbar.powi(2) / (constants.g * mass.powi(3)))
}

/// Decoherence threshold: `G⁴M¹¹/ħ⁷` when `width > 2R`, else `GM²R⁻³/ħ`.
///
/// The two branches are quoted as is. They do not share units, so compare
/// each only against `lambda_deco` within its own branch.
pub fn lambda_crit(spec: &SphereSpec, width: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(width > 0.0) {
        return Err(invalid(format!("width must be positive, got {width}")));
    }
    let (g, m, hbar) = (constants.g, spec.mass(), constants.hbar);
    if width > 2.0 * spec.radius() {
        Ok(g.powi(4) * m.powi(11) / hbar.powi(7))
    } else {
        Ok(g * m * m / spec.radius().powi(3) / hbar)
    }
}

/// `Λ_deco = γ·α` from a localisation rate and an inverse squared length.
pub fn lambda_deco(gamma: f64, alpha_loc: f64) -> f64 {
    gamma * alpha_loc
}

/// True when decoherence stays below the self-gravity threshold.
pub fn is_robust(lambda_deco: f64, lambda_crit: f64) -> bool {
    lambda_deco / lambda_crit < 1.0
}

/// `ħ³/(0.163·G²M⁵)`.
pub fn dp_collapse_time(mass: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(invalid(format!("mass must be positive, got {mass}")));
    }
    Ok(constants.hbar.powi(3) / (CHOQUARD_E0 * constants.g.powi(2) * mass.powi(5)))
}

/// Upper bound `(6GM²t/(5ħR))²` on the linear entropy between centre of
/// mass and relative coordinates after time `t`.
pub fn entanglement_bound(spec: &SphereSpec, t: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(invalid(format!("time must be non-negative, got {t}")));
    }
    let rate = 6.0 * constants.g * spec.mass().powi(2) / (5.0 * constants.hbar * spec.radius());
    Ok((rate * t).powi(2))
}

/// Everything the regime subcommand reports for one sphere and width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub label: RegimeLabel,
    /// Stationary width with the homogeneous kernel, m.
    pub bound_width: f64,
    /// Radius at which `ħ²/(GM³) = R` for this density, m.
    pub mesoscopic_radius: f64,
    #[serde(rename = "N_c_atomic")]
    pub n_c_atomic: f64,
    #[serde(rename = "N_c_nuclear")]
    pub n_c_nuclear: f64,
    pub van_meter_width: f64,
    pub lambda_crit: f64,
    pub dp_collapse_time: f64,
    /// Entanglement bound at `entanglement_time`.
    pub entanglement_bound: f64,
    pub entanglement_time: f64,
}

pub fn regime_report(
    spec: &SphereSpec,
    width: f64,
    entanglement_time: f64,
    constants: &PhysicalConstants,
) -> Result<RegimeReport> {
    let label = classify(spec, width)?;
    let model = PotentialModel::new(ModelVariant::ExactHomogeneous, *spec, *constants)?;
    let n_c = critical_atom_numbers(spec, constants);
    let mass = spec.mass();
    Ok(RegimeReport {
        label,
        bound_width: bound_state_width(&model)?,
        mesoscopic_radius: mesoscopic_radius(spec.density(), constants)?,
        n_c_atomic: n_c.atomic,
        n_c_nuclear: n_c.nuclear,
        van_meter_width: van_meter_threshold(mass, constants)?,
        lambda_crit: lambda_crit(spec, width, constants)?,
        dp_collapse_time: dp_collapse_time(mass, constants)?,
        entanglement_bound: entanglement_bound(spec, entanglement_time, constants)?,
        entanglement_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{Regime, ATOMIC_MASS_UNIT};

    const C: PhysicalConstants = PhysicalConstants::SI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn silica_nanosphere_atomic_boundary() {
        let s = SphereSpec::silica(1e-8).unwrap().with_nucleus_radius(1e-15).unwrap();
        assert!(s.atom_count() > 5e4 && s.atom_count() < 2e5);
        let b = regime_boundaries(&s);
        assert!(b.atomic_max > 5e-14 && b.atomic_max < 2e-13, "{}", b.atomic_max);
        // With the realistic nucleus size the atomic window closes.
        let s = SphereSpec::silica(1e-8).unwrap();
        let b = regime_boundaries(&s);
        assert_eq!(b.atomic_max, b.nuclear_max);
    }

    #[test]
    fn classify_branches() {
        let s = SphereSpec::silica(1e-8).unwrap().with_nucleus_radius(1e-15).unwrap();
        assert_eq!(classify(&s, 3e-8).unwrap().regime, Regime::Quantum);
        assert_eq!(classify(&s, 1e-16).unwrap().regime, Regime::Nuclear);
        assert_eq!(classify(&s, 1e-14).unwrap().regime, Regime::Atomic);
        assert_eq!(classify(&s, 1e-9).unwrap().regime, Regime::Mesoscopic);
        assert!(classify(&s, 0.0).is_err());
    }

    #[test]
    fn mesoscopic_radii() {
        let r = mesoscopic_radius(2650.0, &C).unwrap();
        assert!(r > 0.9e-7 && r < 1.2e-7, "{r}");
        let r1 = mesoscopic_radius(1000.0, &C).unwrap();
        assert!(r1 > 1.1e-7 && r1 < 1.5e-7, "{r1}");
        let slope = (r / r1).ln() / (2650.0f64 / 1000.0).ln();
        assert!((slope + 0.3).abs() < 1e-12);
    }

    #[test]
    fn mesoscopic_radius_round_trip() {
        for rho in [500.0, 2650.0, 19320.0] {
            let r = mesoscopic_radius(rho, &C).unwrap();
            let m = rho * 4.0 * PI / 3.0 * r.powi(3);
            assert!(rel(C.hbar.powi(2) / (C.g * m.powi(3)), r) < 1e-10);
        }
    }

    #[test]
    fn critical_numbers() {
        let m = 18e-3 / 6e23;
        let s = SphereSpec::new(1e-6, 1000.0, 1e-10, 1e-15, m).unwrap();
        let n = critical_atom_numbers(&s, &C);
        assert!(n.atomic > 2e13 && n.atomic < 5e14, "{}", n.atomic);
        assert!(rel(n.nuclear / n.atomic, 1e5f64.sqrt()) < 1e-12);
        assert!(n.nuclear > 2e16 && n.nuclear < 5e17);
    }

    #[test]
    fn van_meter_constants() {
        assert!(rel(VAN_METER_FACTOR, 1.481544) < 1e-12);
        let alpha3 = (222.0f64 / 163.0).sqrt();
        let ratio = VAN_METER_FACTOR / (1.125 * alpha3);
        assert!((ratio - 1.13).abs() < 0.01, "{ratio}");
        let t1 = van_meter_threshold(1.0, &C).unwrap();
        let t2 = van_meter_threshold(2.0, &C).unwrap();
        assert!(rel(t1 / t2, 8.0) < 1e-14);
    }

    #[test]
    fn lambda_branches() {
        let s = SphereSpec::silica(1e-7).unwrap();
        let r = s.radius();
        let inside = lambda_crit(&s, 2.0 * r, &C).unwrap();
        let outside = lambda_crit(&s, 2.0 * r * (1.0 + 1e-12), &C).unwrap();
        assert!(rel(inside, C.g * s.mass().powi(2) / r.powi(3) / C.hbar) < 1e-14);
        assert!(rel(outside, C.g.powi(4) * s.mass().powi(11) / C.hbar.powi(7)) < 1e-14);
        assert_eq!(lambda_deco(1.0, 1e11), 1e11);
        let big = s.with_radius(1e-6).unwrap();
        let ratio = lambda_crit(&big, 1e-9, &C).unwrap() / lambda_crit(&s, 1e-9, &C).unwrap();
        assert!(rel(ratio, 1e3) < 1e-10);
    }

    #[test]
    fn collapse_time_scaling() {
        let t1 = dp_collapse_time(1e-17, &C).unwrap();
        let t2 = dp_collapse_time(2e-17, &C).unwrap();
        assert!(rel(t1 / t2, 32.0) < 1e-13);
        let s1 = SphereSpec::silica(1e-7).unwrap();
        let s2 = s1.with_radius(2e-7).unwrap();
        let r = dp_collapse_time(s1.mass(), &C).unwrap() / dp_collapse_time(s2.mass(), &C).unwrap();
        assert!(rel(r, 2f64.powi(15)) < 1e-10);
    }

    #[test]
    fn entanglement_zero_time() {
        let s = SphereSpec::silica(1e-7).unwrap();
        assert_eq!(entanglement_bound(&s, 0.0, &C).unwrap(), 0.0);
        assert!(entanglement_bound(&s, -1.0, &C).is_err());
    }

    #[test]
    fn report_consistency() {
        let s = SphereSpec::new(1e-7, 2650.0, 5e-10, 1e-15, 60.08 * ATOMIC_MASS_UNIT).unwrap();
        let rep = regime_report(&s, 5e-8, 300.0, &C).unwrap();
        assert!(rep.n_c_nuclear > rep.n_c_atomic);
        assert_eq!(rep.label.regime, Regime::Mesoscopic);
        for v in [
            rep.bound_width,
            rep.mesoscopic_radius,
            rep.van_meter_width,
            rep.dp_collapse_time,
        ] {
            assert!(v > 0.0);
        }
    }
}
