//! Subcommand implementations. Each returns an [`Artifact`] and writes nothing.

use clap::{Args, ValueEnum};
use gravnano::choquard::{shoot_state, spectrum_fit, virial_check, RadialGrid};
use gravnano::gaussian::{
    bound_state_width, characteristic_scale, evolve, free_spread, GaussianState,
};
use gravnano::lattice::{generate_lattice_sphere, normalized_profile};
use gravnano::potentials::{branch_at, nuclear_kernel, v_eff_sphere};
use gravnano::regimes::{classify, regime_report};
use gravnano::sphere::{ATOMIC_MASS_UNIT, GOLD_DENSITY};
use gravnano::{ModelVariant, PhysicalConstants, PotentialModel, SphereSpec};
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliError;
use crate::output::{Artifact, Body, Cell, Format, Table};
use crate::scenario::Scenario;

pub const SI: PhysicalConstants = PhysicalConstants::SI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Material {
    Silica,
    Gold,
}

#[derive(Debug, Clone, Args)]
pub struct SphereArgs {
    /// Base material for lattice constant, atom mass and density.
    #[arg(long, value_enum, default_value = "silica")]
    pub material: Material,
    #[arg(long = "radius-m", default_value_t = 1e-7)]
    pub radius_m: f64,
    /// Mass density in kg/m³; the material's own when omitted.
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long = "lattice-m")]
    pub lattice_m: Option<f64>,
    #[arg(long = "nucleus-m")]
    pub nucleus_m: Option<f64>,
    #[arg(long = "atom-mass-kg")]
    pub atom_mass_kg: Option<f64>,
}

impl SphereArgs {
    pub fn spec(&self) -> Result<SphereSpec, CliError> {
        material_spec(
            self.material,
            self.radius_m,
            self.density,
            self.lattice_m,
            self.nucleus_m,
            self.atom_mass_kg,
        )
    }
}

pub fn material_spec(
    material: Material,
    radius: f64,
    density: Option<f64>,
    lattice: Option<f64>,
    nucleus: Option<f64>,
    atom_mass: Option<f64>,
) -> Result<SphereSpec, CliError> {
    // Material defaults, taken from the constructors at a reference radius.
    let base = match material {
        Material::Silica => SphereSpec::silica(1.0)?,
        Material::Gold => SphereSpec::gold(1.0, GOLD_DENSITY)?,
    };
    Ok(SphereSpec::new(
        radius,
        density.unwrap_or(base.density()),
        lattice.unwrap_or(base.lattice_constant()),
        nucleus.unwrap_or(base.nucleus_radius()),
        atom_mass.unwrap_or(base.atom_mass()),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Exact,
    Piecewise,
    Hyperbolic,
    Diosi,
    Schmidt,
    Nuclear,
    Structure,
    Free,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "piecewise")]
    pub model: ModelKind,
    /// Width rescaling for the piecewise and hyperbolic kernels.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

impl ModelArgs {
    pub fn variant(&self) -> ModelVariant {
        let alpha = self.alpha;
        match self.model {
            ModelKind::Exact => ModelVariant::ExactHomogeneous,
            ModelKind::Piecewise => ModelVariant::PiecewiseSpring { alpha },
            ModelKind::Hyperbolic => ModelVariant::HyperbolicOnly { alpha },
            ModelKind::Diosi => ModelVariant::DiosiHarmonic,
            ModelKind::Schmidt => ModelVariant::SchmidtAtomic,
            ModelKind::Nuclear => ModelVariant::NuclearHarmonic,
            ModelKind::Structure => ModelVariant::StructureCorrectedSpring,
            ModelKind::Free => ModelVariant::Free,
        }
    }
}

pub fn sample_points(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(gravnano::Error::InvalidInput("need at least two sample points".into()).into());
    }
    if !(min.is_finite() && max.is_finite() && min < max && min >= 0.0) {
        return Err(gravnano::Error::InvalidInput(format!("bad sampling range [{min:e}, {max:e}]")).into());
    }
    if log && min <= 0.0 {
        return Err(gravnano::Error::InvalidInput("log sampling needs a positive lower end".into()).into());
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let f = i as f64 / n;
            if log {
                (min.ln() + f * (max.ln() - min.ln())).exp()
            } else {
                min + f * (max - min)
            }
        })
        .collect())
}

/// Homogeneous overlap energy, optionally with the nucleic contribution.
pub fn potential_table(spec: &SphereSpec, ds: &[f64], nuclear: bool) -> Result<Table, CliError> {
    let mut t = if nuclear {
        Table::new(&["d_m", "v_eff_J", "branch", "v_homogeneous_J", "v_nucleic_J", "regime"])
    } else {
        Table::new(&["d_m", "v_eff_J", "branch"])
    };
    for &d in ds {
        let hom = v_eff_sphere(d, spec, &SI)?;
        let branch = branch_at(d, spec.radius()).as_str();
        if nuclear {
            let nuc = nuclear_kernel(d, spec, &SI)?;
            let regime = classify(spec, d)?.regime;
            t.push(vec![
                d.into(),
                (hom + nuc).into(),
                branch.into(),
                hom.into(),
                nuc.into(),
                regime_name(regime).into(),
            ]);
        } else {
            t.push(vec![d.into(), hom.into(), branch.into()]);
        }
    }
    Ok(t)
}

pub fn regime_name(r: gravnano::Regime) -> &'static str {
    match r {
        gravnano::Regime::Nuclear => "nuclear",
        gravnano::Regime::Atomic => "atomic",
        gravnano::Regime::Mesoscopic => "mesoscopic",
        gravnano::Regime::Quantum => "quantum",
    }
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub sphere: SphereArgs,
    #[arg(long = "d-min-m", default_value_t = 1e-18)]
    pub d_min_m: f64,
    #[arg(long = "d-max-m", default_value_t = 1e-6)]
    pub d_max_m: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Logarithmic spacing between the two ends.
    #[arg(long)]
    pub log: bool,
    /// Add the per-nucleus contribution and report both parts.
    #[arg(long)]
    pub nuclear: bool,
}

pub fn potential(a: &PotentialArgs) -> Result<Artifact, CliError> {
    let spec = a.sphere.spec()?;
    let ds = sample_points(a.d_min_m, a.d_max_m, a.points, a.log)?;
    let table = potential_table(&spec, &ds, a.nuclear)?;
    let scenario = json!({
        "spec": spec, "d_min_m": a.d_min_m, "d_max_m": a.d_max_m,
        "points": a.points, "log": a.log, "nuclear": a.nuclear,
    });
    Ok(Artifact::new("potential", scenario, Body::Table(table)))
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    #[arg(long = "radius-in-delta", default_value_t = 5.0)]
    pub radius_in_delta: f64,
    #[arg(long = "delta-m", default_value_t = 5e-10)]
    pub delta_m: f64,
    #[arg(long = "atom-mass-kg", default_value_t = 60.08 * ATOMIC_MASS_UNIT)]
    pub atom_mass_kg: f64,
    /// Number of translations x·δ, spaced evenly inside (0, 1).
    #[arg(long = "axis-samples", default_value_t = 99)]
    pub axis_samples: usize,
}

/// Midpoints `(i + 1)/(n + 1)` for `i < n`.
pub fn axis_fractions(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i + 1) as f64 / (n + 1) as f64).collect()
}

pub fn profile_rows(
    table: &mut Table,
    label: Option<&str>,
    radius_in_delta: f64,
    delta: f64,
    atom_mass: f64,
    xs: &[f64],
) -> Result<usize, CliError> {
    let lattice = generate_lattice_sphere(radius_in_delta * delta, delta)?;
    let n = lattice.len();
    for p in normalized_profile(&lattice, xs, atom_mass, &SI)? {
        let mut row: Vec<Cell> = Vec::new();
        if let Some(l) = label {
            row.push(l.into());
        }
        row.extend([p.x.into(), p.v_over_vd.into(), p.schmidt_over_vd.into(), n.into()]);
        table.push(row);
    }
    Ok(n)
}

pub fn lattice(a: &LatticeArgs) -> Result<Artifact, CliError> {
    if a.axis_samples == 0 {
        return Err(gravnano::Error::InvalidInput("need at least one axis sample".into()).into());
    }
    let mut t = Table::new(&["x", "V_over_VD", "V_schmidt_over_VD", "N"]);
    let n = profile_rows(
        &mut t,
        None,
        a.radius_in_delta,
        a.delta_m,
        a.atom_mass_kg,
        &axis_fractions(a.axis_samples),
    )?;
    let scenario = json!({
        "radius_in_delta": a.radius_in_delta, "delta_m": a.delta_m,
        "atom_mass_kg": a.atom_mass_kg, "axis_samples": a.axis_samples,
    });
    Ok(Artifact::new("lattice", scenario, Body::Table(t)).with_extra("N", json!(n)))
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub sphere: SphereArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "initial-spread-m", default_value_t = 1e-7)]
    pub initial_spread_m: f64,
    #[arg(long = "t-end-s", default_value_t = 1e4)]
    pub t_end_s: f64,
    #[arg(long = "rel-tol", default_value_t = 1e-9)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
}

impl EvolveArgs {
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        Ok(Scenario {
            spec: self.sphere.spec()?,
            constants: SI,
            model: self.model.variant(),
            initial_spread_m: self.initial_spread_m,
            t_end_s: self.t_end_s,
            rel_tol: self.rel_tol,
            samples: self.samples,
            output: None,
        })
    }
}

/// Trajectory of a real Gaussian next to the free packet of the same start.
pub fn evolve_table(sc: &Scenario, with_separation: bool) -> Result<Table, CliError> {
    let model = PotentialModel::new(sc.model, sc.spec, sc.constants)?;
    let l = characteristic_scale(&sc.spec, &sc.constants);
    let mass = sc.spec.mass();
    let start = GaussianState::from_spread(sc.initial_spread_m, l, mass)?;
    let traj = evolve(&start, &model, sc.t_end_s, sc.rel_tol, sc.samples)?;
    let mut t = if with_separation {
        Table::new(&["t_s", "width_m", "width_free_m", "E_eff_J", "separation_m"])
    } else {
        Table::new(&["t_s", "width_m", "width_free_m", "E_eff_J"])
    };
    for p in &traj.samples {
        let free = 1.5f64.sqrt() * free_spread(sc.initial_spread_m, mass, p.t, &sc.constants)?;
        let mut row: Vec<Cell> = vec![p.t.into(), p.width.into(), free.into(), p.e_eff.into()];
        if with_separation {
            row.push((free - p.width).abs().into());
        }
        t.push(row);
    }
    Ok(t)
}

pub fn evolve_scenario(sc: &Scenario) -> Result<Artifact, CliError> {
    let table = evolve_table(sc, false)?;
    Ok(Artifact::new("evolve", sc.physics_value(), Body::Table(table)))
}

#[derive(Debug, Clone, Args)]
pub struct BoundstateArgs {
    #[arg(long, value_enum, default_value = "silica")]
    pub material: Material,
    #[arg(long)]
    pub density: Option<f64>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "r-min-m", default_value_t = 1e-9)]
    pub r_min_m: f64,
    #[arg(long = "r-max-m", default_value_t = 1e-5)]
    pub r_max_m: f64,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
}

/// Stationary widths over a logarithmic sweep of radii, evaluated in parallel.
pub fn boundstate_table(
    material: Material,
    density: Option<f64>,
    variant: ModelVariant,
    radii: &[f64],
) -> Result<Table, CliError> {
    let rows: Result<Vec<Vec<Cell>>, CliError> = radii
        .par_iter()
        .map(|&r| {
            let spec = material_spec(material, r, density, None, None, None)?;
            let model = PotentialModel::new(variant, spec, SI)?;
            let w = bound_state_width(&model)?;
            let regime = classify(&spec, w)?.regime;
            Ok(vec![r.into(), w.into(), (w / r).into(), regime_name(regime).into()])
        })
        .collect();
    let mut t = Table::new(&["R_m", "width_m", "width_over_R", "regime"]);
    for row in rows? {
        t.push(row);
    }
    Ok(t)
}

pub fn boundstate(a: &BoundstateArgs) -> Result<Artifact, CliError> {
    let radii = sample_points(a.r_min_m, a.r_max_m, a.points, true)?;
    let variant = a.model.variant();
    let table = boundstate_table(a.material, a.density, variant, &radii)?;
    let density = material_spec(a.material, a.r_max_m, a.density, None, None, None)?.density();
    let scenario = json!({
        "material": format!("{:?}", a.material).to_lowercase(), "density_kg_m3": density,
        "model": variant, "r_min_m": a.r_min_m, "r_max_m": a.r_max_m, "points": a.points,
    });
    Ok(Artifact::new("boundstate", scenario, Body::Table(table)))
}

#[derive(Debug, Clone, Args)]
pub struct ChoquardArgs {
    #[arg(long, default_value_t = 0)]
    pub nodes: usize,
    /// Outer radius of the grid in scaled units.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Also solve every lower node count and fit `a/(n + b)^c`.
    #[arg(long)]
    pub fit: bool,
}

pub fn choquard(a: &ChoquardArgs, format: Option<Format>) -> Result<Artifact, CliError> {
    let default = RadialGrid::default_for(a.nodes);
    let grid = RadialGrid::new(a.rmax.unwrap_or(default.r_max), a.steps.unwrap_or(default.steps))?;
    let sol = shoot_state(a.nodes, &grid)?;
    let summary = json!({
        "n": sol.node_count,
        "e_n": sol.eigenvalue,
        "E_K": sol.e_kinetic,
        "E_P": sol.e_potential,
        "norm": sol.norm,
        "cutoff_radius": sol.cutoff_radius,
        "virial_residuals": virial_check(&sol),
    });
    let scenario = json!({"nodes": a.nodes, "rmax": grid.r_max, "steps": grid.steps, "fit": a.fit});
    let fit = if a.fit {
        if a.nodes < 2 {
            return Err(gravnano::Error::InvalidInput("--fit needs --nodes of at least 2".into()).into());
        }
        let sols: Result<Vec<_>, _> = (0..=a.nodes)
            .into_par_iter()
            .map(|n| shoot_state(n, &RadialGrid::default_for(n)))
            .collect();
        let sols = sols?;
        let f = spectrum_fit(&sols)?;
        let e: Vec<f64> = sols.iter().map(|s| s.eigenvalue).collect();
        Some(json!({"a": f.a, "b": f.b, "c": f.c, "residual_norm": f.residual_norm, "eigenvalues": e}))
    } else {
        None
    };
    if format == Some(Format::Csv) {
        let mut t = Table::new(&["r", "phi"]);
        for &(r, phi) in &sol.radial_profile {
            t.push(vec![r.into(), phi.into()]);
        }
        let mut art = Artifact::new("choquard", scenario, Body::Table(t)).with_extra("state", summary);
        if let Some(f) = fit {
            art = art.with_extra("fit", f);
        }
        Ok(art)
    } else {
        let mut body = summary;
        if let Some(f) = fit {
            body["fit"] = f;
        }
        Ok(Artifact::new("choquard", scenario, Body::Json(body)))
    }
}

#[derive(Debug, Clone, Args)]
pub struct RegimeArgs {
    #[command(flatten)]
    pub sphere: SphereArgs,
    /// Packet width to classify; the homogeneous bound-state width when omitted.
    #[arg(long = "width-m")]
    pub width_m: Option<f64>,
    #[arg(long = "entanglement-time-s", default_value_t = 300.0)]
    pub entanglement_time_s: f64,
}

pub fn regime(a: &RegimeArgs) -> Result<Artifact, CliError> {
    let spec = a.sphere.spec()?;
    let width = match a.width_m {
        Some(w) => w,
        None => bound_state_width(&PotentialModel::new(ModelVariant::ExactHomogeneous, spec, SI)?)?,
    };
    let report = regime_report(&spec, width, a.entanglement_time_s, &SI)?;
    let scenario = json!({"spec": spec, "width_m": width, "entanglement_time_s": a.entanglement_time_s});
    let body = serde_json::to_value(report).expect("report serialises");
    Ok(Artifact::new("regime", scenario, Body::Json(body)))
}
