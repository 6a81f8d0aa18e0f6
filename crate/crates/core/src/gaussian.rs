//! Variational Gaussian reduction of the centre-of-mass dynamics.
//!
//! The trial state is `ψ ∝ exp(−(a + i·b)·u²/(2L²) − i·phase)` per axis, with
//! `u` a Cartesian coordinate and `L = √(ħ/√(k₀M))`, `k₀ = GM²/R³`. In the
//! time unit `1/ω`, `ω = ħ/(L²M)`, the equations of motion read
//!
//! ```text
//! da/dτ = 2ab,   db/dτ = k(w)/k₀ + b² − a²,   dphase/dτ = a/2
//! ```
//!
//! where `w = √⟨r²⟩ = √3·L/√(2a)`. Lengths reported as a "spread" are the
//! Gaussian length `δx = L/√a`, for which free motion follows
//! `δx_t = δx₀·√(1 + (ħt/(δx₀²M))²)` exactly.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::ode::Dopri5;
use crate::numerics::roots::bisect;
use crate::potentials::{spring_constant, v_eff_antiderivative, PotentialModel};
use crate::sphere::{PhysicalConstants, SphereSpec};

/// Local error target relative to the caller's tolerance. Global errors
/// accumulate over many steps, so steps are controlled more tightly.
const LOCAL_TOL_FACTOR: f64 = 0.1;
const MAX_STEPS: usize = 20_000_000;

/// `L = √(ħ/√(k₀M))` with `k₀ = GM²/R³`.
pub fn characteristic_scale(spec: &SphereSpec, constants: &PhysicalConstants) -> f64 {
    let m = spec.mass();
    let k0 = constants.g * m * m / spec.radius().powi(3);
    (constants.hbar / (k0 * m).sqrt()).sqrt()
}

/// Complex Gaussian centre-of-mass state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    /// Width parameter, positive.
    pub a: f64,
    /// Chirp.
    pub b: f64,
    /// Accumulated phase.
    pub phase: f64,
    /// Length unit `L`, m.
    pub length_scale: f64,
    /// Mass `M`, kg.
    pub mass: f64,
}

impl GaussianState {
    pub fn new(a: f64, b: f64, phase: f64, length_scale: f64, mass: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(invalid(format!("a must be positive, got {a}")));
        }
        if !(length_scale > 0.0 && mass > 0.0) {
            return Err(invalid("length scale and mass must be positive"));
        }
        if !(b.is_finite() && phase.is_finite()) {
            return Err(invalid("b and phase must be finite"));
        }
        Ok(Self {
            a,
            b,
            phase,
            length_scale,
            mass,
        })
    }

    /// Real Gaussian with Gaussian length `spread` per axis.
    pub fn from_spread(spread: f64, length_scale: f64, mass: f64) -> Result<Self> {
        if !(spread > 0.0) {
            return Err(invalid(format!("spread must be positive, got {spread}")));
        }
        Self::new((length_scale / spread).powi(2), 0.0, 0.0, length_scale, mass)
    }

    /// Real Gaussian with `√⟨r²⟩ = width`.
    pub fn from_width(width: f64, length_scale: f64, mass: f64) -> Result<Self> {
        if !(width > 0.0) {
            return Err(invalid(format!("width must be positive, got {width}")));
        }
        Self::new(
            1.5 * (length_scale / width).powi(2),
            0.0,
            0.0,
            length_scale,
            mass,
        )
    }

    /// `√⟨r²⟩ = √3·L/√(2a)`.
    pub fn width(&self) -> f64 {
        width_of(self.a, self.length_scale)
    }

    /// Gaussian length `δx = L/√a`.
    pub fn spread(&self) -> f64 {
        self.length_scale / self.a.sqrt()
    }

    /// Per-axis standard deviation `L/√(2a)`.
    pub fn rms_per_axis(&self) -> f64 {
        self.length_scale / (2.0 * self.a).sqrt()
    }

    fn with(&self, y: &[f64; 3]) -> Self {
        Self {
            a: y[0],
            b: y[1],
            phase: y[2],
            ..*self
        }
    }
}

fn width_of(a: f64, l: f64) -> f64 {
    3f64.sqrt() * l / (2.0 * a).sqrt()
}

/// `ω = ħ/(L²M)`, the inverse time unit, s⁻¹.
fn omega(state: &GaussianState, constants: &PhysicalConstants) -> f64 {
    constants.hbar / (state.length_scale.powi(2) * state.mass)
}

/// Spring constant implied by `L`, `ħ²/(L⁴M)`.
fn k_unit(state: &GaussianState, constants: &PhysicalConstants) -> f64 {
    constants.hbar.powi(2) / (state.length_scale.powi(4) * state.mass)
}

/// Right-hand side in the dimensionless time `τ = ω·t`.
fn rhs_scaled(
    y: &[f64; 3],
    l: f64,
    k_ref: f64,
    model: &PotentialModel,
    tau: f64,
) -> Result<[f64; 3]> {
    let (a, b) = (y[0], y[1]);
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Collapse { t: tau, a });
    }
    let k = spring_constant(width_of(a, l), model)? / k_ref;
    Ok([2.0 * a * b, k + b * b - a * a, 0.5 * a])
}

/// `(da/dt, db/dt, dphase/dt)` in s⁻¹.
pub fn derivatives(state: &GaussianState, model: &PotentialModel) -> Result<[f64; 3]> {
    let w = omega(state, &model.constants);
    let k_ref = k_unit(state, &model.constants);
    let d = rhs_scaled(
        &[state.a, state.b, state.phase],
        state.length_scale,
        k_ref,
        model,
        0.0,
    )?;
    Ok(d.map(|x| x * w))
}

/// Kinetic energy `(3ħ²/4M)·(a² + b²)/(a·L²)`.
pub fn kinetic_energy(state: &GaussianState, constants: &PhysicalConstants) -> f64 {
    0.75 * constants.hbar.powi(2) / state.mass * (state.a * state.a + state.b * state.b)
        / (state.a * state.length_scale.powi(2))
}

/// Kinetic energy plus the model potential at the current width.
pub fn effective_energy(state: &GaussianState, model: &PotentialModel) -> Result<f64> {
    if !(state.a > 0.0) {
        return Err(invalid(format!("a must be positive, got {}", state.a)));
    }
    Ok(kinetic_energy(state, &model.constants) + v_eff_antiderivative(state.width(), model)?)
}

/// One output sample of [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    /// Time, s.
    pub t: f64,
    /// `√⟨r²⟩`, m.
    pub width: f64,
    pub a: f64,
    pub b: f64,
    /// Spring constant at this width, J·m⁻².
    pub k: f64,
    /// Effective energy, J.
    pub e_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Largest `|E(t) − E(0)|/|E(0)|` over the samples.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.samples[0].e_eff;
        self.samples
            .iter()
            .map(|s| ((s.e_eff - e0) / e0).abs())
            .fold(0.0, f64::max)
    }
}

fn scale(tol: f64) -> impl Fn(&[f64; 3], &[f64; 3]) -> [f64; 3] {
    move |y0, y1| {
        let a = y0[0].abs().min(y1[0].abs());
        [
            tol * a,
            tol * y0[1].abs().max(y1[1].abs()).max(a),
            tol * y0[2].abs().max(y1[2].abs()).max(a),
        ]
    }
}

fn check_tol(rel_tol: f64) -> Result<()> {
    if (1e-13..=1e-3).contains(&rel_tol) {
        Ok(())
    } else {
        Err(invalid(format!("rel_tol must lie in [1e-13, 1e-3], got {rel_tol}")))
    }
}

fn sample(
    state: &GaussianState,
    t: f64,
    model: &PotentialModel,
) -> Result<TrajectorySample> {
    let width = state.width();
    Ok(TrajectorySample {
        t,
        width,
        a: state.a,
        b: state.b,
        k: spring_constant(width, model)?,
        e_eff: effective_energy(state, model)?,
    })
}

/// Integrates from `t = 0` to `t_end` seconds, recording `samples + 1`
/// evenly spaced samples including both ends.
pub fn evolve(
    initial: &GaussianState,
    model: &PotentialModel,
    t_end: f64,
    rel_tol: f64,
    samples: usize,
) -> Result<Trajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid(format!("t_end must be positive, got {t_end}")));
    }
    check_tol(rel_tol)?;
    if samples == 0 {
        return Err(invalid("need at least one sample interval"));
    }
    let w = omega(initial, &model.constants);
    let k_ref = k_unit(initial, &model.constants);
    let l = initial.length_scale;
    let rhs = |tau: f64, y: &[f64; 3]| rhs_scaled(y, l, k_ref, model, tau);
    let mut stepper = Dopri5::new(
        rhs,
        scale(rel_tol * LOCAL_TOL_FACTOR),
        0.0,
        [initial.a, initial.b, initial.phase],
        MAX_STEPS,
    )?;
    let mut out = Vec::with_capacity(samples + 1);
    out.push(sample(initial, 0.0, model)?);
    for i in 1..=samples {
        let t = t_end * i as f64 / samples as f64;
        stepper
            .advance_to(t * w)
            .map_err(|e| to_seconds(e, w))?;
        out.push(sample(&initial.with(stepper.y()), t, model)?);
    }
    Ok(Trajectory { samples: out })
}

fn to_seconds(e: Error, w: f64) -> Error {
    match e {
        Error::Collapse { t, a } => Error::Collapse { t: t / w, a },
        Error::StepSizeUnderflow { t, h } => Error::StepSizeUnderflow { t: t / w, h: h / w },
        Error::TooManySteps { t, max_steps } => Error::TooManySteps { t: t / w, max_steps },
        other => other,
    }
}

/// Width of the stationary state, solving `a² = k(w(a))/k₀` by bisection in `ln a`.
pub fn bound_state_width(model: &PotentialModel) -> Result<f64> {
    let l = characteristic_scale(&model.spec, &model.constants);
    let k0 = model.k0();
    let g = |ln_a: f64| -> f64 {
        let a = ln_a.exp();
        match spring_constant(width_of(a, l), model) {
            Ok(k) => a * a - k / k0,
            Err(_) => f64::NAN,
        }
    };
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    while g(hi) <= 0.0 {
        hi += 1.0;
        if hi > 80.0 {
            return Err(Error::NoRootInBracket {
                lo: lo.exp(),
                hi: hi.exp(),
            });
        }
    }
    while !(g(lo) < 0.0) {
        lo -= 1.0;
        if lo < -200.0 {
            return Err(Error::NoRootInBracket {
                lo: lo.exp(),
                hi: hi.exp(),
            });
        }
    }
    let ln_a = bisect(g, lo, hi).map_err(|_| Error::NoRootInBracket {
        lo: lo.exp(),
        hi: hi.exp(),
    })?;
    Ok(width_of(ln_a.exp(), l))
}

/// Width `(9/8)α³ħ²/(GM³)` below which a real Gaussian in the hyperbolic
/// kernel has non-negative energy and spreads without bound.
pub fn stability_threshold(mass: f64, alpha: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mass > 0.0 && alpha > 0.0) {
        return Err(invalid("mass and alpha must be positive"));
    }
    Ok(1.125 * alpha.powi(3) * constants.hbar.powi(2) / (constants.g * mass.powi(3)))
}

/// Energy-minimising Gaussian length `(3/2)^{3/2}α³ħ²/(GM³)` in the hyperbolic kernel.
pub fn hyperbolic_optimal_spread(mass: f64, alpha: f64, constants: &PhysicalConstants) -> f64 {
    1.5f64.powf(1.5) * alpha.powi(3) * constants.hbar.powi(2) / (constants.g * mass.powi(3))
}

/// Minimum energy `−(2/9)G²M⁵/(α⁶ħ²)` in the hyperbolic kernel.
pub fn hyperbolic_min_energy(mass: f64, alpha: f64, constants: &PhysicalConstants) -> f64 {
    -2.0 / 9.0 * constants.g.powi(2) * mass.powi(5) / (alpha.powi(6) * constants.hbar.powi(2))
}

/// Free Gaussian length `δx₀·√(1 + (ħt/(δx₀²M))²)`.
pub fn free_spread(
    delta_x0: f64,
    mass: f64,
    t: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(delta_x0 > 0.0 && mass > 0.0 && t >= 0.0) {
        return Err(invalid("free_spread needs positive δx₀ and M and t ≥ 0"));
    }
    let s = constants.hbar * t / (delta_x0 * delta_x0 * mass);
    Ok(delta_x0 * s.hypot(1.0))
}

/// First time at which the free and self-gravitating `√⟨r²⟩` differ by
/// `threshold`, starting from a real Gaussian of length `delta_x0`.
///
/// The crossing is located by bisection with single integrator steps from
/// the start of the accepted step that contains it.
pub fn separation_time(
    spec: &SphereSpec,
    delta_x0: f64,
    threshold: f64,
    model: &PotentialModel,
    rel_tol: f64,
    horizon: f64,
) -> Result<f64> {
    if !(threshold >= 0.0) {
        return Err(invalid(format!("threshold must be non-negative, got {threshold}")));
    }
    if threshold == 0.0 {
        return Ok(0.0);
    }
    if !(horizon > 0.0) {
        return Err(invalid("horizon must be positive"));
    }
    check_tol(rel_tol)?;
    let constants = model.constants;
    let l = characteristic_scale(spec, &constants);
    let mass = spec.mass();
    let state = GaussianState::from_spread(delta_x0, l, mass)?;
    let w = omega(&state, &constants);
    let k_ref = k_unit(&state, &constants);
    let rhs = |tau: f64, y: &[f64; 3]| rhs_scaled(y, l, k_ref, model, tau);
    let mut stepper = Dopri5::new(
        rhs,
        scale(rel_tol * LOCAL_TOL_FACTOR),
        0.0,
        [state.a, 0.0, 0.0],
        MAX_STEPS,
    )?;
    let free_width = |tau: f64| -> f64 {
        let t = tau / w;
        1.5f64.sqrt() * free_spread(delta_x0, mass, t, &constants).unwrap_or(f64::NAN)
    };
    let gap = |tau: f64, y: &[f64; 3]| (free_width(tau) - width_of(y[0], l)).abs();

    let tau_end = horizon * w;
    while stepper.t() < tau_end {
        let (t0, y0) = (stepper.t(), *stepper.y());
        stepper.step(tau_end).map_err(|e| to_seconds(e, w))?;
        if gap(stepper.t(), stepper.y()) >= threshold {
            let mut lo = t0;
            let mut hi = stepper.t();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let ym = stepper.fixed_step(t0, &y0, mid - t0)?;
                if gap(mid, &ym) >= threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi / w);
        }
    }
    Err(Error::NoCrossing { horizon })
}

/// Smallest initial length `√(ħ²R/(1.4·GM³))` that remains trapped.
pub fn confinement_bound(spec: &SphereSpec, constants: &PhysicalConstants) -> f64 {
    (constants.hbar.powi(2) * spec.radius() / (1.4 * constants.g * spec.mass().powi(3))).sqrt()
}
