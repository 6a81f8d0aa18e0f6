//! Figure presets with their parameters fixed.

use clap::ValueEnum;
use gravnano::gaussian::{bound_state_width, separation_time};
use gravnano::numerics::roots::bisect;
use gravnano::potentials::v_eff_sphere;
use gravnano::sphere::{NUCLEUS_RADIUS_CONSERVATIVE, SILICA_DENSITY};
use gravnano::{ModelVariant, PhysicalConstants, PotentialModel, SphereSpec};
use serde_json::json;

use crate::commands::{
    axis_fractions, boundstate_table, evolve_table, potential_table, profile_rows, sample_points,
    Material, SI,
};
use crate::error::CliError;
use crate::output::{Artifact, Body, Table};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig9,
    Fig10,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Figure::Fig1 => "log-log effective potential of a 10 nm silica sphere, homogeneous plus nucleic, nucleus radius 1e-15 m",
            Figure::Fig2 => "overlap energy over GM²/R against r/R with its parabolic and hyperbolic limits",
            Figure::Fig3 => "lattice pair energy over V_D = -6GM²/5R along a cell edge, N1 = 515 and N2 = 4169 nodes",
            Figure::Fig4 => "lattice pair energy against the atomic kernel V_S = -GNm²/(xδ), N1 = 515, both over V_D",
            Figure::Fig5 => "√<r²> against t for R = 1e-7 m, ρ = 2650 kg/m³, free and self-gravitating",
            Figure::Fig6 => "separation of free and self-gravitating packets, R = 1e-6 m, δx₀ = 1e-11 m, ρ = 2650 kg/m³; 1e-7 m reached after about 970 s",
            Figure::Fig7 => "separation of free and self-gravitating packets, R = 1e-5 m, δx₀ = 1e-15 m, ρ = 20000 kg/m³; 1e-7 m reached after about 410 s",
            Figure::Fig9 => "bound-state width against sphere radius at ρ = 2650 kg/m³; the W = R crossing marks the mesoscopic transition",
            Figure::Fig10 => "homogeneous (S) and nucleic (N) contributions of the 10 nm silica sphere and their sum (R)",
        }
    }
}

const SEPARATION_THRESHOLD: f64 = 1e-7;

fn fig1_sphere() -> Result<SphereSpec, CliError> {
    Ok(SphereSpec::silica(1e-8)?.with_nucleus_radius(NUCLEUS_RADIUS_CONSERVATIVE)?)
}

fn piecewise() -> ModelVariant {
    ModelVariant::PiecewiseSpring { alpha: 1.0 }
}

pub fn run(fig: Figure) -> Result<Artifact, CliError> {
    let mut art = match fig {
        Figure::Fig1 => {
            let spec = fig1_sphere()?;
            let ds = sample_points(1e-18, 1e-6, 400, true)?;
            let table = potential_table(&spec, &ds, true)?;
            let b = gravnano::regimes::regime_boundaries(&spec);
            Artifact::new("figure", json!({"spec": spec, "d_min_m": 1e-18, "d_max_m": 1e-6, "points": 400}), Body::Table(table))
                .with_extra("boundaries", json!(b))
        }
        Figure::Fig10 => {
            let spec = fig1_sphere()?;
            let ds = sample_points(1e-18, 1e-6, 400, true)?;
            let full = potential_table(&spec, &ds, true)?;
            let mut t = Table::new(&["d_m", "v_homogeneous_J", "v_nucleic_J", "v_sum_J"]);
            for row in full.rows {
                t.push(vec![row[0].clone(), row[3].clone(), row[4].clone(), row[1].clone()]);
            }
            Artifact::new("figure", json!({"spec": spec, "d_min_m": 1e-18, "d_max_m": 1e-6, "points": 400}), Body::Table(t))
        }
        Figure::Fig2 => {
            let spec = SphereSpec::unit();
            let c = PhysicalConstants::UNIT;
            let mut t = Table::new(&["r_over_R", "v_over_GM2_R", "parabolic", "hyperbolic"]);
            for x in sample_points(0.01, 4.0, 400, false)? {
                let v = v_eff_sphere(x, &spec, &c)?;
                t.push(vec![x.into(), v.into(), (-1.2 + 0.5 * x * x).into(), (-1.0 / x).into()]);
            }
            Artifact::new("figure", json!({"r_over_R_min": 0.01, "r_over_R_max": 4.0, "points": 400}), Body::Table(t))
        }
        Figure::Fig3 => {
            let xs = axis_fractions(99);
            let delta = 5e-10;
            let m = SphereSpec::silica(1.0)?.atom_mass();
            let mut t = Table::new(&["series", "x", "V_over_VD", "V_schmidt_over_VD", "N"]);
            let n1 = profile_rows(&mut t, Some("N1"), 5.0, delta, m, &xs)?;
            let n2 = profile_rows(&mut t, Some("N2"), 10.0, delta, m, &xs)?;
            Artifact::new("figure", json!({"radius_in_delta": [5.0, 10.0], "delta_m": delta, "axis_samples": 99}), Body::Table(t))
                .with_extra("N", json!({"N1": n1, "N2": n2}))
        }
        Figure::Fig4 => {
            let xs = axis_fractions(99);
            let delta = 5e-10;
            let m = SphereSpec::silica(1.0)?.atom_mass();
            let mut t = Table::new(&["x", "V_over_VD", "V_schmidt_over_VD", "N"]);
            let n = profile_rows(&mut t, None, 5.0, delta, m, &xs)?;
            Artifact::new("figure", json!({"radius_in_delta": 5.0, "delta_m": delta, "axis_samples": 99}), Body::Table(t))
                .with_extra("N", json!(n))
        }
        Figure::Fig5 => {
            // Prepared wider than the bound state, so self-gravity contracts it.
            let spec = SphereSpec::silica(1e-7)?;
            let sc = Scenario {
                spec,
                constants: SI,
                model: piecewise(),
                initial_spread_m: 4e-7,
                t_end_s: 1e4,
                rel_tol: 1e-10,
                samples: 500,
                output: None,
            };
            let bound = bound_state_width(&PotentialModel::new(sc.model, spec, SI)?)?;
            Artifact::new("figure", sc.physics_value(), Body::Table(evolve_table(&sc, false)?))
                .with_extra("bound_state_width_m", json!(bound))
        }
        Figure::Fig6 | Figure::Fig7 => {
            let (spec, dx0, t_end) = if fig == Figure::Fig6 {
                (SphereSpec::silica(1e-6)?, 1e-11, 2000.0)
            } else {
                (SphereSpec::gold(1e-5, 20000.0)?, 1e-15, 1000.0)
            };
            let sc = Scenario {
                spec,
                constants: SI,
                model: piecewise(),
                initial_spread_m: dx0,
                t_end_s: t_end,
                rel_tol: 1e-9,
                samples: 2000,
                output: None,
            };
            let model = PotentialModel::new(sc.model, spec, SI)?;
            let crossing = separation_time(&spec, dx0, SEPARATION_THRESHOLD, &model, sc.rel_tol, 1e5)?;
            Artifact::new("figure", sc.physics_value(), Body::Table(evolve_table(&sc, true)?))
                .with_extra("threshold_m", json!(SEPARATION_THRESHOLD))
                .with_extra("crossing_time_s", json!(crossing))
        }
        Figure::Fig9 => {
            let radii = sample_points(1e-9, 1e-5, 81, true)?;
            let variant = piecewise();
            let table = boundstate_table(Material::Silica, Some(SILICA_DENSITY), variant, &radii)?;
            let crossing = width_radius_crossing(variant)?;
            Artifact::new("figure", json!({"density_kg_m3": SILICA_DENSITY, "model": variant, "r_min_m": 1e-9, "r_max_m": 1e-5, "points": 81}), Body::Table(table))
                .with_extra("width_equals_radius_at_m", json!(crossing))
        }
    };
    art.figure = Some(fig.name());
    art.extra.insert("description".into(), json!(fig.description()));
    Ok(art)
}

/// Radius at which the silica bound-state width equals the radius.
fn width_radius_crossing(variant: ModelVariant) -> Result<f64, CliError> {
    let g = |ln_r: f64| -> f64 {
        let r = ln_r.exp();
        SphereSpec::silica(r)
            .and_then(|s| PotentialModel::new(variant, s, SI))
            .and_then(|m| bound_state_width(&m))
            .map(|w| w / r - 1.0)
            .unwrap_or(f64::NAN)
    };
    Ok(bisect(g, 1e-8f64.ln(), 1e-6f64.ln())?.exp())
}
