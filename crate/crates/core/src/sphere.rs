//! Physical constants, the nanosphere description and the regime label.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};

/// Default nucleus smearing radius (zero-point motion in a crystal), m.
pub const NUCLEUS_RADIUS_REALISTIC: f64 = 5e-12;
/// Conservative nucleus radius, m.
pub const NUCLEUS_RADIUS_CONSERVATIVE: f64 = 1e-15;
/// Density of silica, kg/m³.
pub const SILICA_DENSITY: f64 = 2650.0;
/// Density of gold as tabulated, kg/m³.
pub const GOLD_DENSITY: f64 = 19320.0;
/// Rounded gold density used in the free-fall scenarios, kg/m³.
pub const GOLD_DENSITY_ROUNDED: f64 = 20000.0;
/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// G and ħ. Both must be strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConstants")]
pub struct PhysicalConstants {
    /// Gravitational constant, m³·kg⁻¹·s⁻².
    #[serde(rename = "G")]
    pub g: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    #[serde(rename = "G")]
    g: f64,
    hbar: f64,
}

impl TryFrom<RawConstants> for PhysicalConstants {
    type Error = Error;
    fn try_from(raw: RawConstants) -> Result<Self> {
        Self::new(raw.g, raw.hbar)
    }
}

impl PhysicalConstants {
    pub const SI: Self = Self {
        g: 6.674e-11,
        hbar: 1.0546e-34,
    };

    /// G = ħ = 1, for dimensionless checks.
    pub const UNIT: Self = Self { g: 1.0, hbar: 1.0 };

    pub fn new(g: f64, hbar: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite() && hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid(format!(
                "constants must be positive and finite (G = {g}, hbar = {hbar})"
            )));
        }
        Ok(Self { g, hbar })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI
    }
}

/// A homogeneous crystalline sphere.
///
/// Construction enforces `0 < nucleus_radius < lattice_constant < radius` and
/// at least one atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSphere")]
pub struct SphereSpec {
    #[serde(rename = "radius_m")]
    radius: f64,
    #[serde(rename = "density_kg_m3")]
    density: f64,
    #[serde(rename = "lattice_constant_m")]
    lattice_constant: f64,
    #[serde(rename = "nucleus_radius_m")]
    nucleus_radius: f64,
    #[serde(rename = "atom_mass_kg")]
    atom_mass: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSphere {
    radius_m: f64,
    density_kg_m3: f64,
    lattice_constant_m: f64,
    nucleus_radius_m: f64,
    atom_mass_kg: f64,
}

impl TryFrom<RawSphere> for SphereSpec {
    type Error = Error;
    fn try_from(r: RawSphere) -> Result<Self> {
        Self::new(
            r.radius_m,
            r.density_kg_m3,
            r.lattice_constant_m,
            r.nucleus_radius_m,
            r.atom_mass_kg,
        )
    }
}

impl SphereSpec {
    pub fn new(
        radius: f64,
        density: f64,
        lattice_constant: f64,
        nucleus_radius: f64,
        atom_mass: f64,
    ) -> Result<Self> {
        let fields = [
            ("radius", radius),
            ("density", density),
            ("lattice_constant", lattice_constant),
            ("nucleus_radius", nucleus_radius),
            ("atom_mass", atom_mass),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(nucleus_radius < lattice_constant && lattice_constant < radius) {
            return Err(invalid(format!(
                "require nucleus_radius < lattice_constant < radius, got {nucleus_radius} / {lattice_constant} / {radius}"
            )));
        }
        let spec = Self {
            radius,
            density,
            lattice_constant,
            nucleus_radius,
            atom_mass,
        };
        // One atom carrying the whole mass is allowed up to rounding in M.
        if spec.atom_count() < 1.0 - 1e-12 {
            return Err(invalid(format!(
                "atom_mass {atom_mass} exceeds the sphere mass {}",
                spec.mass()
            )));
        }
        Ok(spec)
    }

    /// Silica sphere with SiO₂ units on a 0.5 nm lattice and the realistic nucleus size.
    pub fn silica(radius: f64) -> Result<Self> {
        Self::new(
            radius,
            SILICA_DENSITY,
            5e-10,
            NUCLEUS_RADIUS_REALISTIC,
            60.08 * ATOMIC_MASS_UNIT,
        )
    }

    /// Gold sphere (fcc, 0.408 nm) at the given density.
    pub fn gold(radius: f64, density: f64) -> Result<Self> {
        Self::new(
            radius,
            density,
            4.08e-10,
            NUCLEUS_RADIUS_REALISTIC,
            196.97 * ATOMIC_MASS_UNIT,
        )
    }

    /// R = 1 and M = 1 with small but valid lattice parameters, for dimensionless checks.
    pub fn unit() -> Self {
        Self::new(1.0, 3.0 / (4.0 * PI), 0.1, 0.01, 1e-3).expect("valid unit sphere")
    }

    /// Copy with a different density.
    pub fn with_density(&self, density: f64) -> Result<Self> {
        Self::new(
            self.radius,
            density,
            self.lattice_constant,
            self.nucleus_radius,
            self.atom_mass,
        )
    }

    /// Copy with a different radius.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(
            radius,
            self.density,
            self.lattice_constant,
            self.nucleus_radius,
            self.atom_mass,
        )
    }

    /// Copy with a different nucleus radius.
    pub fn with_nucleus_radius(&self, nucleus_radius: f64) -> Result<Self> {
        Self::new(
            self.radius,
            self.density,
            self.lattice_constant,
            nucleus_radius,
            self.atom_mass,
        )
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn density(&self) -> f64 {
        self.density
    }
    pub fn lattice_constant(&self) -> f64 {
        self.lattice_constant
    }
    pub fn nucleus_radius(&self) -> f64 {
        self.nucleus_radius
    }
    pub fn atom_mass(&self) -> f64 {
        self.atom_mass
    }

    /// M = ρ·(4π/3)·R³.
    pub fn mass(&self) -> f64 {
        sphere_mass(self)
    }

    /// N = M/m, not rounded.
    pub fn atom_count(&self) -> f64 {
        self.mass() / self.atom_mass
    }
}

/// M = ρ·(4π/3)·R³.
pub fn sphere_mass(spec: &SphereSpec) -> f64 {
    spec.density * (4.0 * PI / 3.0) * spec.radius.powi(3)
}

/// Which effective kernel dominates at a given width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Nuclear,
    Atomic,
    Mesoscopic,
    Quantum,
}

/// Upper width limits of the first three regimes, m.
///
/// When the atomic crossover lies below the nuclear limit the atomic
/// regime is empty and `atomic_max == nuclear_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBoundaries {
    pub nuclear_max: f64,
    pub atomic_max: f64,
    pub mesoscopic_max: f64,
}

impl RegimeBoundaries {
    pub fn regime_of(&self, width: f64) -> Regime {
        if width <= self.nuclear_max {
            Regime::Nuclear
        } else if width <= self.atomic_max {
            Regime::Atomic
        } else if width <= self.mesoscopic_max {
            Regime::Mesoscopic
        } else {
            Regime::Quantum
        }
    }
}

/// A regime together with the boundaries it was decided against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeLabel {
    pub regime: Regime,
    pub boundaries: RegimeBoundaries,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silica_mass() {
        let s = SphereSpec::silica(1e-7).unwrap();
        assert!((s.mass() / 1.110e-17 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gold_mass_matches_order() {
        let s = SphereSpec::gold(1e-5, GOLD_DENSITY_ROUNDED).unwrap();
        assert!((s.mass() / 8.378e-11 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn zero_radius_rejected() {
        assert!(SphereSpec::new(0.0, 2650.0, 1e-10, 1e-12, 1e-26).is_err());
    }

    #[test]
    fn ordering_enforced() {
        assert!(SphereSpec::new(1e-7, 2650.0, 1e-12, 1e-10, 1e-26).is_err());
        assert!(SphereSpec::new(1e-7, 2650.0, 1e-6, 1e-12, 1e-26).is_err());
    }

    #[test]
    fn atom_heavier_than_sphere_rejected() {
        assert!(SphereSpec::new(1e-7, 2650.0, 1e-8, 1e-12, 1.0).is_err());
    }

    #[test]
    fn constants_must_be_positive() {
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0).is_err());
    }

    #[test]
    fn json_field_names() {
        let s = SphereSpec::silica(1e-7).unwrap();
        let v = serde_json::to_value(s).unwrap();
        for key in [
            "radius_m",
            "density_kg_m3",
            "lattice_constant_m",
            "nucleus_radius_m",
            "atom_mass_kg",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: SphereSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);

        let c = serde_json::to_value(PhysicalConstants::SI).unwrap();
        assert!(c.get("G").is_some() && c.get("hbar").is_some());
    }

    #[test]
    fn invalid_json_rejected() {
        let bad = r#"{"radius_m":-1,"density_kg_m3":1,"lattice_constant_m":1,"nucleus_radius_m":1,"atom_mass_kg":1}"#;
        assert!(serde_json::from_str::<SphereSpec>(bad).is_err());
        assert!(serde_json::from_str::<PhysicalConstants>(r#"{"G":0,"hbar":1}"#).is_err());
    }

    #[test]
    fn regime_lookup() {
        let b = RegimeBoundaries {
            nuclear_max: 1.0,
            atomic_max: 2.0,
            mesoscopic_max: 3.0,
        };
        assert_eq!(b.regime_of(1.0), Regime::Nuclear);
        assert_eq!(b.regime_of(1.5), Regime::Atomic);
        assert_eq!(b.regime_of(3.0), Regime::Mesoscopic);
        assert_eq!(b.regime_of(3.1), Regime::Quantum);
    }
}
