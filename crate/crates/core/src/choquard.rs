//! Radial eigenstates of the stationary Schrödinger–Newton (Choquard) equation.
//!
//! With `G = M = ħ = 1` the radial system is
//!
//! ```text
//! φ'' + 2φ'/r = 2Vφ,    V'' + 2V'/r = 4πφ²
//! ```
//!
//! where `V = U + 𝓔` combines the self-potential `U` and the binding energy
//! `𝓔 > 0`. The equations are invariant under `φ → λ²φ(λr)`, `V → λ²V(λr)`,
//! so the central amplitude is fixed and only `V(0)` is shot on. The
//! eigenvalue follows from the Coulomb tail, `𝓔 = V(r) + N(r)/r`, and the
//! solution is rescaled to unit norm at the end. At norm `N` the eigenvalue
//! is `𝓔 = eₙ·N²` and the total energy `−(eₙ/3)·N³` in units `G²M⁵/ħ²`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::sphere::{PhysicalConstants, SphereSpec};

/// Points of the logarithmic `V(0)` scan used to bracket eigenvalues.
const SCAN_POINTS: usize = 200;
const SCAN_MIN: f64 = 1e-3;
const SCAN_MAX: f64 = 1e2;
/// Growth of `|φ|` beyond this multiple of the central value counts as divergence.
const DIVERGENCE: f64 = 2.0;

/// Uniform radial grid in the frame where `φ(0) = central_amplitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub steps: usize,
    pub central_amplitude: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, steps: usize) -> Result<Self> {
        Self::with_amplitude(r_max, steps, 1.0)
    }

    pub fn with_amplitude(r_max: f64, steps: usize, central_amplitude: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(invalid(format!("r_max must be positive, got {r_max}")));
        }
        if steps < 16 {
            return Err(invalid(format!("need at least 16 steps, got {steps}")));
        }
        if !(central_amplitude > 0.0 && central_amplitude.is_finite()) {
            return Err(invalid("central amplitude must be positive"));
        }
        Ok(Self {
            r_max,
            steps,
            central_amplitude,
        })
    }

    /// Grid that resolves the `n`-node state at unit central amplitude.
    pub fn default_for(n: usize) -> Self {
        Self {
            r_max: 40.0 + 20.0 * n as f64,
            steps: 8000 * (n + 1),
            central_amplitude: 1.0,
        }
    }

    /// Same grid with step halved and range doubled.
    pub fn refined(&self) -> Self {
        Self {
            r_max: 2.0 * self.r_max,
            steps: 4 * self.steps,
            ..*self
        }
    }

    fn h(&self) -> f64 {
        self.r_max / self.steps as f64
    }
}

/// A normalised eigenstate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoquardSolution {
    pub node_count: usize,
    /// `eₙ`, the eigenvalue at unit norm in units `G²M⁵/ħ²`.
    pub eigenvalue: f64,
    /// `(r, φ(r))` at unit norm; `r` in units `ħ²/(GM³)`.
    pub radial_profile: Vec<(f64, f64)>,
    /// Kinetic energy at unit norm.
    pub e_kinetic: f64,
    /// Self-interaction energy at unit norm.
    pub e_potential: f64,
    /// Norm after rescaling.
    pub norm: f64,
    /// Radius where the tail was cut, in the rescaled units.
    pub cutoff_radius: f64,
}

impl ChoquardSolution {
    pub fn total_energy(&self) -> f64 {
        self.e_kinetic + self.e_potential
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outcome {
    /// At most `n` nodes when the run ended.
    Few,
    /// More than `n` nodes.
    Many,
}

struct Run {
    outcome: Outcome,
    nodes: usize,
    r: Vec<f64>,
    y: Vec<[f64; 4]>,
}

fn rhs(r: f64, y: &[f64; 4]) -> [f64; 4] {
    let (phi, dphi, v, dv) = (y[0], y[1], y[2], y[3]);
    [
        dphi,
        2.0 * v * phi - 2.0 * dphi / r,
        dv,
        4.0 * PI * phi * phi - 2.0 * dv / r,
    ]
}

fn rk4(r: f64, y: &[f64; 4], h: f64) -> [f64; 4] {
    let add = |y: &[f64; 4], k: &[f64; 4], s: f64| {
        [y[0] + s * k[0], y[1] + s * k[1], y[2] + s * k[2], y[3] + s * k[3]]
    };
    let k1 = rhs(r, y);
    let k2 = rhs(r + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = rhs(r + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = rhs(r + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates outward from the origin with `V(0) = v0`.
fn integrate(v0: f64, n: usize, grid: &RadialGrid, record: bool) -> Run {
    let phi0 = grid.central_amplitude;
    let h = grid.h();
    // Series start: φ ≈ φ₀(1 + V₀r²/3), V ≈ V₀ + (2π/3)φ₀²r².
    let mut y = [
        phi0 * (1.0 + v0 * h * h / 3.0),
        phi0 * 2.0 * v0 * h / 3.0,
        v0 + 2.0 * PI / 3.0 * phi0 * phi0 * h * h,
        4.0 * PI / 3.0 * phi0 * phi0 * h,
    ];
    let mut rs = Vec::new();
    let mut ys = Vec::new();
    if record {
        rs.push(0.0);
        ys.push([phi0, 0.0, v0, 0.0]);
        rs.push(h);
        ys.push(y);
    }
    let mut nodes = 0usize;
    for i in 1..grid.steps {
        let r = i as f64 * h;
        let next = rk4(r, &y, h);
        if next[0] == 0.0 || next[0].signum() != y[0].signum() {
            nodes += 1;
        }
        y = next;
        if record {
            rs.push(r + h);
            ys.push(y);
        }
        if nodes > n {
            return Run {
                outcome: Outcome::Many,
                nodes,
                r: rs,
                y: ys,
            };
        }
        if y[0].abs() > DIVERGENCE * phi0 || !y[0].is_finite() {
            break;
        }
    }
    Run {
        outcome: Outcome::Few,
        nodes,
        r: rs,
        y: ys,
    }
}

fn trapezoid(r: &[f64], f: impl Fn(usize) -> f64, upto: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..upto {
        acc += 0.5 * (r[i + 1] - r[i]) * (f(i) + f(i + 1));
    }
    acc
}

/// Shoots on `V(0)` for the state with `node_count` nodes and returns it at unit norm.
pub fn shoot_state(node_count: usize, grid: &RadialGrid) -> Result<ChoquardSolution> {
    let n = node_count;
    let amp = grid.central_amplitude;
    // The scan range scales with the central amplitude like V does.
    let scan: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| {
            let t = i as f64 / (SCAN_POINTS - 1) as f64;
            -amp * SCAN_MIN * (SCAN_MAX / SCAN_MIN).powf(t)
        })
        .collect();
    let mut bracket = None;
    let mut prev = (scan[0], integrate(scan[0], n, grid, false).outcome);
    for &v0 in &scan[1..] {
        let out = integrate(v0, n, grid, false).outcome;
        if prev.1 == Outcome::Few && out == Outcome::Many {
            bracket = Some((prev.0, v0));
            break;
        }
        prev = (v0, out);
    }
    let (mut few, mut many) = bracket.ok_or(Error::ShootingBracket { nodes: n })?;
    for _ in 0..200 {
        let mid = 0.5 * (few + many);
        if mid == few || mid == many {
            break;
        }
        match integrate(mid, n, grid, false).outcome {
            Outcome::Few => few = mid,
            Outcome::Many => many = mid,
        }
    }

    let run = integrate(few, n, grid, true);
    if run.nodes != n {
        return Err(Error::UnresolvedState {
            nodes: n,
            reason: format!("bracketed run has {} nodes", run.nodes),
        });
    }
    let (r, y) = (&run.r, &run.y);
    let last_node = (1..y.len())
        .rev()
        .find(|&i| y[i][0].signum() != y[i - 1][0].signum())
        .unwrap_or(0);
    // Past the last node |φ| rises to a lobe maximum, decays along the bound
    // tail and finally turns over into the diverging branch.
    let amp = |i: usize| y[i][0].abs();
    let unresolved = || Error::UnresolvedState {
        nodes: n,
        reason: "tail did not turn over before r_max; increase r_max".into(),
    };
    let peak = (last_node.max(1)..y.len() - 1)
        .find(|&i| amp(i + 1) < amp(i))
        .ok_or_else(unresolved)?;
    let cut = (peak + 1..y.len() - 1)
        .find(|&i| amp(i) <= amp(i - 1) && amp(i) <= amp(i + 1))
        .ok_or_else(unresolved)?;
    if r[cut] > 0.95 * grid.r_max {
        return Err(Error::UnresolvedState {
            nodes: n,
            reason: "tail cut lies at the edge of the grid".into(),
        });
    }

    let shell = |i: usize| 4.0 * PI * r[i] * r[i];
    let norm = trapezoid(r, |i| shell(i) * y[i][0] * y[i][0], cut);
    let script_e = y[cut][2] + norm / r[cut];
    let e_k = 0.5 * trapezoid(r, |i| shell(i) * y[i][1] * y[i][1], cut);
    // W = 𝓔 − V = −U.
    let e_p = -0.5 * trapezoid(r, |i| shell(i) * (script_e - y[i][2]) * y[i][0] * y[i][0], cut);

    // Unit norm: r → r·N, φ → φ/N², energies scale by N⁻³, 𝓔 by N⁻².
    let profile = (0..=cut)
        .map(|i| (r[i] * norm, y[i][0] / (norm * norm)))
        .collect();
    Ok(ChoquardSolution {
        node_count: n,
        eigenvalue: script_e / (norm * norm),
        radial_profile: profile,
        e_kinetic: e_k / norm.powi(3),
        e_potential: e_p / norm.powi(3),
        norm: 1.0,
        cutoff_radius: r[cut] * norm,
    })
}

/// States with `0..=n_max` nodes on their default grids, solved in parallel.
pub fn shoot_spectrum(n_max: usize) -> Result<Vec<ChoquardSolution>> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| shoot_state(n, &RadialGrid::default_for(n)))
        .collect()
}

/// Virial residuals `(r1, r2, r3)`.
///
/// `r1 = (2E_K + E_P)/E_K`, `r2 = (𝓔N − 3E_K)/(𝓔N)` and
/// `r3 = (E + 𝓔N/3)/|E|` with `E = E_K + E_P`.
pub fn virial_check(sol: &ChoquardSolution) -> [f64; 3] {
    let (ek, ep) = (sol.e_kinetic, sol.e_potential);
    let en = sol.eigenvalue * sol.norm;
    let e = ek + ep;
    [(2.0 * ek + ep) / ek, (en - 3.0 * ek) / en, (e + en / 3.0) / e.abs()]
}

/// Parameters of `eₙ = a/(n + b)^c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Euclidean norm of the log-space residuals.
    pub residual_norm: f64,
}

/// Fits the eigenvalues of `solutions`, which must cover at least `n = 0..=3`.
pub fn spectrum_fit(solutions: &[ChoquardSolution]) -> Result<SpectrumFit> {
    let pts: Vec<(f64, f64)> = solutions
        .iter()
        .map(|s| (s.node_count as f64, s.eigenvalue))
        .collect();
    fit_power_law(&pts)
}

/// Least-squares fit of `log e = log a − c·log(n + b)` over `(n, e)` pairs.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<SpectrumFit> {
    let n_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if points.len() < 4 || n_max < 3.0 {
        return Err(invalid("spectrum fit needs states up to at least n = 3"));
    }
    if points.iter().any(|p| !(p.1 > 0.0) || !(p.0 >= 0.0)) {
        return Err(invalid("eigenvalues must be positive and n non-negative"));
    }
    let n_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let ns: Vec<f64> = points.iter().map(|p| p.0).collect();

    // For fixed b the model is linear in (log a, c).
    let linear = |b: f64| -> Option<(f64, f64, f64)> {
        let xs: Vec<f64> = ns.iter().map(|n| (n + b).ln()).collect();
        let m = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / m;
        let my = ys.iter().sum::<f64>() / m;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        if sxx <= 1e-300 {
            return None;
        }
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let la = my - slope * mx;
        let c = -slope;
        let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (la - c * x - y).powi(2)).sum();
        Some((la, c, ss))
    };

    // Coarse search in log(b + n_min), then golden section.
    let lo_b = -n_min + 1e-6;
    let to_b = |s: f64| lo_b + s.exp();
    let cost = |s: f64| linear(to_b(s)).map(|v| v.2).unwrap_or(f64::INFINITY);
    let grid: Vec<f64> = (0..=400).map(|i| -12.0 + 16.0 * i as f64 / 400.0).collect();
    let best = grid
        .iter()
        .copied()
        .min_by(|a, b| cost(*a).total_cmp(&cost(*b)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = (best - 0.04, best + 0.04);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if cost(x1) < cost(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let b0 = to_b(0.5 * (lo + hi));
    let (la0, c0, _) =
        linear(b0).ok_or_else(|| Error::DegenerateFit("all abscissae coincide".into()))?;

    // Gauss–Newton polish on all three parameters.
    let mut p = [la0, b0, c0];
    let resid = |p: &[f64; 3]| -> Vec<f64> {
        ns.iter()
            .zip(&ys)
            .map(|(n, y)| p[0] - p[2] * (n + p[1]).ln() - y)
            .collect()
    };
    let ssq = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>();
    let mut lambda = 1e-6;
    for _ in 0..100 {
        let r = resid(&p);
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for (i, n) in ns.iter().enumerate() {
            let j = [1.0, -p[2] / (n + p[1]), -(n + p[1]).ln()];
            for a in 0..3 {
                jtr[a] += j[a] * r[i];
                for b in 0..3 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut damped = jtj;
        for (a, row) in damped.iter_mut().enumerate() {
            row[a] *= 1.0 + lambda;
        }
        let Some(step) = solve3(damped, jtr.map(|x| -x)) else {
            return Err(Error::DegenerateFit("singular normal equations".into()));
        };
        let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
        let valid = ns.iter().all(|n| n + trial[1] > 0.0);
        if valid && ssq(&resid(&trial)) <= ssq(&r) {
            let converged = step.iter().zip(&p).all(|(s, v)| s.abs() <= 1e-15 * v.abs().max(1.0));
            p = trial;
            lambda *= 0.1;
            if converged {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e10 {
                break;
            }
        }
    }
    let residual_norm = ssq(&resid(&p)).sqrt();
    Ok(SpectrumFit {
        a: p[0].exp(),
        b: p[1],
        c: p[2],
        residual_norm,
    })
}

/// Gaussian elimination with partial pivoting on a 3×3 system.
fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        v.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot = m[col];
            for (x, p) in m[row].iter_mut().zip(pivot).skip(col) {
                *x -= f * p;
            }
            v[row] -= f * v[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = v[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Gaussian ground state in the harmonic (small-width) regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiosiGroundState {
    /// `(ħ²/(GM³))^{1/4}·R^{3/4}`, m.
    pub width: f64,
    /// Oscillator energy `(3/2)ħ√(GM/R³)`, J.
    pub e_osc: f64,
    /// Eigenvalue `(9/4)ħ√(GM/R³)`, J.
    pub script_e: f64,
    /// Kinetic energy, J.
    pub kinetic: f64,
    /// Harmonic potential energy, J.
    pub potential: f64,
    /// Whether `width < R`, the regime where the harmonic kernel applies.
    pub mesoscopic: bool,
}

impl DiosiGroundState {
    /// `E = (2/3)·𝓔·N` at `N = 1`.
    pub fn energy(&self) -> f64 {
        2.0 / 3.0 * self.script_e
    }
}

pub fn diosi_ground_state(spec: &SphereSpec, constants: &PhysicalConstants) -> DiosiGroundState {
    let (g, hbar) = (constants.g, constants.hbar);
    let m = spec.mass();
    let r = spec.radius();
    let freq = (g * m / r.powi(3)).sqrt();
    let width = (hbar * hbar / (g * m.powi(3))).powf(0.25) * r.powf(0.75);
    let e_osc = 1.5 * hbar * freq;
    DiosiGroundState {
        width,
        e_osc,
        script_e: 2.25 * hbar * freq,
        kinetic: 0.5 * e_osc,
        potential: 0.5 * e_osc,
        mesoscopic: width < r,
    }
}
