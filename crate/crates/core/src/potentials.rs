//! Effective self-gravity kernels, spring constants and the slice-integral oracle.
//!
//! Every kernel is built from the overlap energy of two homogeneous spheres
//! of radius `R` and mass `M` whose centres are `d` apart:
//!
//! ```text
//! V(d) = (GM²/R)·(−6/5 + x²/2 − 3x³/16 + x⁵/160),  x = d/R ≤ 2
//! V(d) = −GM²/d,                                    d ≥ 2R
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::quadrature::adaptive_simpson;
use crate::sphere::{PhysicalConstants, SphereSpec};

/// Which branch of the overlap potential applies at a distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Quintic,
    Coulomb,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Quintic => "quintic",
            Branch::Coulomb => "coulomb",
        }
    }
}

/// Branch of the overlap potential for a sphere of radius `radius`.
pub fn branch_at(d: f64, radius: f64) -> Branch {
    if d <= 2.0 * radius {
        Branch::Quintic
    } else {
        Branch::Coulomb
    }
}

/// The self-gravity kernel used by the Gaussian dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelVariant {
    /// Exact homogeneous-sphere kernel, equivalent to `PiecewiseSpring { alpha: 1 }`.
    ExactHomogeneous,
    /// Homogeneous-sphere spring evaluated at `alpha·width`.
    PiecewiseSpring { alpha: f64 },
    /// Pure `GM²/(alpha·width)³` spring.
    HyperbolicOnly { alpha: f64 },
    /// Constant spring `GM²/R³`.
    DiosiHarmonic,
    /// Per-atom point kernels, `G·N·m²/width³`.
    SchmidtAtomic,
    /// Per-nucleus homogeneous spheres of radius `nucleus_radius`.
    NuclearHarmonic,
    /// Homogeneous plus nuclear contributions.
    StructureCorrectedSpring,
    /// No self-interaction.
    Free,
}

impl ModelVariant {
    pub fn alpha(&self) -> f64 {
        match self {
            ModelVariant::PiecewiseSpring { alpha } | ModelVariant::HyperbolicOnly { alpha } => {
                *alpha
            }
            _ => 1.0,
        }
    }
}

/// A kernel variant bound to a sphere and a set of constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub variant: ModelVariant,
    pub spec: SphereSpec,
    pub constants: PhysicalConstants,
}

impl PotentialModel {
    pub fn new(variant: ModelVariant, spec: SphereSpec, constants: PhysicalConstants) -> Result<Self> {
        let alpha = variant.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must be positive, got {alpha}")));
        }
        Ok(Self {
            variant,
            spec,
            constants,
        })
    }

    /// GM² for the whole sphere.
    pub fn gm2(&self) -> f64 {
        self.constants.g * self.spec.mass().powi(2)
    }

    /// k₀ = GM²/R³.
    pub fn k0(&self) -> f64 {
        self.gm2() / self.spec.radius().powi(3)
    }
}

/// Overlap energy for a sphere of radius `r` with coupling `gm2 = G·M²`.
fn overlap(d: f64, r: f64, gm2: f64) -> f64 {
    if d <= 2.0 * r {
        let x = d / r;
        let x2 = x * x;
        gm2 / r * (-1.2 + 0.5 * x2 - 3.0 / 16.0 * x2 * x + x2 * x2 * x / 160.0)
    } else {
        -gm2 / d
    }
}

/// Spring constant `V'(w)/w` of the overlap energy.
fn overlap_spring(w: f64, r: f64, gm2: f64) -> f64 {
    if w < 2.0 * r {
        let x = w / r;
        gm2 / r.powi(3) * (1.0 - 9.0 / 16.0 * x + x * x * x / 32.0)
    } else {
        gm2 / w.powi(3)
    }
}

fn check_distance(d: f64) -> Result<()> {
    if d >= 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("distance must be non-negative and finite, got {d}")))
    }
}

fn check_width(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("width must be positive and finite, got {w}")))
    }
}

/// Mutual energy of two copies of the sphere displaced by `d`.
pub fn v_eff_sphere(d: f64, spec: &SphereSpec, constants: &PhysicalConstants) -> Result<f64> {
    check_distance(d)?;
    let gm2 = constants.g * spec.mass().powi(2);
    Ok(overlap(d, spec.radius(), gm2))
}

/// Same energy obtained by integrating one sphere's potential over shells
/// of the displaced copy, splitting at `r = R`.
///
/// `subdivisions` caps the number of Simpson panels; `rel_tol` is the
/// target relative accuracy.
pub fn v_eff_sphere_quadrature(
    d: f64,
    spec: &SphereSpec,
    constants: &PhysicalConstants,
    subdivisions: usize,
    rel_tol: f64,
) -> Result<f64> {
    check_distance(d)?;
    if subdivisions < 16 {
        return Err(invalid(format!("need at least 16 subdivisions, got {subdivisions}")));
    }
    if !(rel_tol > 0.0) {
        return Err(invalid("rel_tol must be positive"));
    }
    let r = spec.radius();
    let gm2 = constants.g * spec.mass().powi(2);
    let prefactor = -1.5 * gm2 / r;

    // Lengths in units of R from here on.
    let delta = d / r;
    let interior = |x: f64| 1.5 - 0.5 * x * x;

    if delta == 0.0 {
        // Single sphere: full shells of area 4πr² over the interior potential.
        let f = |x: f64| 2.0 * x * x * interior(x);
        let scale = f(1.0).abs();
        let i = adaptive_simpson(f, 0.0, 1.0, rel_tol * scale, subdivisions)?;
        return Ok(prefactor * i.value);
    }

    // Cap area of the shell of radius x inside the displaced sphere, over 2π.
    // Below x = 1 − δ the cap formula extended to negative x reproduces the
    // full-shell contribution, because cap(x) + cap(−x) = 2x².
    let cap = move |x: f64| x * (1.0 - (x - delta).powi(2)) / (2.0 * delta);
    let inner = move |x: f64| cap(x) * interior(x);
    let outer = move |x: f64| (1.0 - (x - delta).powi(2)) / (2.0 * delta);

    let (in_lo, in_hi) = (delta - 1.0, 1.0);
    let (out_lo, out_hi) = ((delta - 1.0).max(1.0), delta + 1.0);

    let crude = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
        if b > a {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        } else {
            0.0
        }
    };
    let scale = (crude(&inner, in_lo, in_hi) + crude(&outer, out_lo, out_hi))
        .abs()
        .max(f64::MIN_POSITIVE);
    let tol = 0.5 * rel_tol * scale;
    let budget = subdivisions / 2;

    let mut total = 0.0;
    if in_hi > in_lo {
        total += adaptive_simpson(inner, in_lo, in_hi, tol, budget)?.value;
    }
    if out_hi > out_lo {
        total += adaptive_simpson(outer, out_lo, out_hi, tol, budget)?.value;
    }
    Ok(prefactor * total)
}

/// Spring constant `k(width)` of a model, J·m⁻².
pub fn spring_constant(width: f64, model: &PotentialModel) -> Result<f64> {
    check_width(width)?;
    let spec = &model.spec;
    let gm2 = model.gm2();
    let r = spec.radius();
    let k = match model.variant {
        ModelVariant::ExactHomogeneous => overlap_spring(width, r, gm2),
        ModelVariant::PiecewiseSpring { alpha } => overlap_spring(alpha * width, r, gm2),
        ModelVariant::HyperbolicOnly { alpha } => gm2 / (alpha * width).powi(3),
        ModelVariant::DiosiHarmonic => gm2 / r.powi(3),
        ModelVariant::SchmidtAtomic => gm2 / spec.atom_count() / width.powi(3),
        ModelVariant::NuclearHarmonic => nuclear_spring(width, spec, gm2),
        ModelVariant::StructureCorrectedSpring => {
            overlap_spring(width, r, gm2) + nuclear_spring(width, spec, gm2)
        }
        ModelVariant::Free => 0.0,
    };
    Ok(k)
}

fn nuclear_spring(width: f64, spec: &SphereSpec, gm2: f64) -> f64 {
    overlap_spring(width, spec.nucleus_radius(), gm2 / spec.atom_count())
}

/// Potential `Φ(width)` with `Φ'(w) = w·k(w)`, pinned to the overlap energy.
pub fn v_eff_antiderivative(width: f64, model: &PotentialModel) -> Result<f64> {
    check_width(width)?;
    let spec = &model.spec;
    let gm2 = model.gm2();
    let r = spec.radius();
    let n = spec.atom_count();
    let v = match model.variant {
        ModelVariant::ExactHomogeneous => overlap(width, r, gm2),
        ModelVariant::PiecewiseSpring { alpha } => overlap(alpha * width, r, gm2) / (alpha * alpha),
        ModelVariant::HyperbolicOnly { alpha } => -gm2 / (alpha.powi(3) * width),
        ModelVariant::DiosiHarmonic => {
            let x = width / r;
            gm2 / r * (-1.2 + 0.5 * x * x)
        }
        ModelVariant::SchmidtAtomic => -gm2 / n / width,
        ModelVariant::NuclearHarmonic => overlap(width, spec.nucleus_radius(), gm2 / n),
        ModelVariant::StructureCorrectedSpring => {
            overlap(width, r, gm2) + overlap(width, spec.nucleus_radius(), gm2 / n)
        }
        ModelVariant::Free => 0.0,
    };
    Ok(v)
}

/// Sum of per-atom point kernels, `−G·N·m²/d`.
pub fn schmidt_kernel(d: f64, spec: &SphereSpec, constants: &PhysicalConstants) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(invalid(format!("schmidt kernel is singular at d = {d}")));
    }
    Ok(-constants.g * spec.atom_count() * spec.atom_mass().powi(2) / d)
}

/// Distance below which the atomic kernel exceeds the homogeneous self-energy, `5R/(6N)`.
pub fn schmidt_crossover(spec: &SphereSpec) -> f64 {
    5.0 * spec.radius() / (6.0 * spec.atom_count())
}

/// Sum of per-nucleus overlap energies, each nucleus a homogeneous sphere of
/// radius `nucleus_radius` and mass `atom_mass`.
pub fn nuclear_kernel(d: f64, spec: &SphereSpec, constants: &PhysicalConstants) -> Result<f64> {
    check_distance(d)?;
    let gnm2 = constants.g * spec.atom_count() * spec.atom_mass().powi(2);
    Ok(overlap(d, spec.nucleus_radius(), gnm2))
}

/// Homogeneous and nucleic contributions to the small-displacement spring.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureSpring {
    pub k_total: f64,
    pub k_hom: f64,
    pub k_nucleic: f64,
}

/// `k_hom = GM²/a₀³`, `k_nucleic = GM²/(N·Δx³)` with `Δx = nucleus_radius`.
pub fn structure_corrected_spring(
    spec: &SphereSpec,
    constants: &PhysicalConstants,
    bohr_radius: f64,
) -> Result<StructureSpring> {
    if !(bohr_radius > 0.0 && bohr_radius.is_finite()) {
        return Err(invalid(format!("bohr_radius must be positive, got {bohr_radius}")));
    }
    let gm2 = constants.g * spec.mass().powi(2);
    let k_hom = gm2 / bohr_radius.powi(3);
    let k_nucleic = gm2 / (spec.atom_count() * spec.nucleus_radius().powi(3));
    Ok(StructureSpring {
        k_total: k_hom + k_nucleic,
        k_hom,
        k_nucleic,
    })
}
