//! Evolution scenarios stored as JSON.

use std::path::{Path, PathBuf};

use gravnano::{ModelVariant, PhysicalConstants, SphereSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputTarget {
    pub path: PathBuf,
    #[serde(default)]
    pub format: Format,
}

/// A sphere, a kernel and an initial real Gaussian to evolve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub spec: SphereSpec,
    #[serde(default = "si")]
    pub constants: PhysicalConstants,
    pub model: ModelVariant,
    pub initial_spread_m: f64,
    pub t_end_s: f64,
    pub rel_tol: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputTarget>,
}

fn si() -> PhysicalConstants {
    PhysicalConstants::SI
}

fn default_samples() -> usize {
    200
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Compact JSON with sorted keys.
    #[cfg(test)]
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("scenario serialises");
        serde_json::to_string(&v).expect("scenario serialises")
    }

    /// The physics part, without the output target, for hashing.
    pub fn physics_value(&self) -> serde_json::Value {
        let mut s = self.clone();
        s.output = None;
        serde_json::to_value(&s).expect("scenario serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn variant(k: usize, alpha: f64) -> ModelVariant {
        match k {
            0 => ModelVariant::ExactHomogeneous,
            1 => ModelVariant::PiecewiseSpring { alpha },
            2 => ModelVariant::HyperbolicOnly { alpha },
            3 => ModelVariant::DiosiHarmonic,
            4 => ModelVariant::SchmidtAtomic,
            5 => ModelVariant::NuclearHarmonic,
            6 => ModelVariant::StructureCorrectedSpring,
            _ => ModelVariant::Free,
        }
    }

    proptest! {
        #[test]
        fn json_round_trip(
            lr in -8.0f64..-4.0,
            rho in 100.0f64..30000.0,
            k in 0usize..8,
            alpha in 0.5f64..2.0,
            spread in 1e-15f64..1e-6,
            t_end in 1.0f64..1e6,
            tol in 1e-12f64..1e-4,
            samples in 1usize..5000,
            with_output in any::<bool>(),
        ) {
            let sc = Scenario {
                spec: SphereSpec::silica(10f64.powf(lr)).unwrap().with_density(rho).unwrap(),
                constants: PhysicalConstants::SI,
                model: variant(k, alpha),
                initial_spread_m: spread,
                t_end_s: t_end,
                rel_tol: tol,
                samples,
                output: with_output.then(|| OutputTarget { path: "out/run.csv".into(), format: Format::Json }),
            };
            let text = sc.canonical_json();
            let back = Scenario::from_json(&text).unwrap();
            prop_assert_eq!(&back, &sc);
            prop_assert_eq!(back.canonical_json(), text);
        }
    }

    #[test]
    fn defaults_and_unknown_fields() {
        let text = r#"{"spec":{"radius_m":1e-7,"density_kg_m3":2650,"lattice_constant_m":5e-10,
            "nucleus_radius_m":5e-12,"atom_mass_kg":1e-25},"model":{"kind":"free"},
            "initial_spread_m":1e-7,"t_end_s":10,"rel_tol":1e-8}"#;
        let sc = Scenario::from_json(text).unwrap();
        assert_eq!(sc.samples, 200);
        assert_eq!(sc.constants, PhysicalConstants::SI);
        let extra = text.replace("\"t_end_s\"", "\"colour\":1,\"t_end_s\"");
        assert!(Scenario::from_json(&extra).is_err());
        let bad = text.replace("1e-7,\"density", "-1e-7,\"density");
        assert!(Scenario::from_json(&bad).is_err());
    }
}
