//! Simple-cubic lattice spheres and the pair energy between a lattice and a
//! rigidly translated copy of itself.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::sum::NeumaierSum;
use crate::sphere::PhysicalConstants;

/// Relative slack on the boundary test so that points lying exactly on the
/// sphere survive rounding in `R/δ`.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Rows of the pair sum handled by one parallel task. Fixed so that the
/// reduction order, and therefore the result, never depends on thread count.
const ROWS_PER_TASK: usize = 16;

/// Integer points `(k, l, m)` with `δ·|(k, l, m)| ≤ R`, in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSphere {
    pub points: Vec<[i32; 3]>,
    pub lattice_constant: f64,
    pub radius: f64,
}

impl LatticeSphere {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All lattice points of spacing `delta` inside the closed ball of radius `r`.
pub fn generate_lattice_sphere(r: f64, delta: f64) -> Result<LatticeSphere> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid(format!("radius must be non-negative, got {r}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid(format!("lattice constant must be positive, got {delta}")));
    }
    let ratio = r / delta;
    if ratio > 1000.0 {
        return Err(invalid(format!("R/δ = {ratio} is beyond direct enumeration")));
    }
    let limit = ratio * ratio * (1.0 + BOUNDARY_SLACK);
    let n = (ratio * (1.0 + BOUNDARY_SLACK)).floor() as i32;
    let mut points = Vec::new();
    for k in -n..=n {
        for l in -n..=n {
            for m in -n..=n {
                let q = (k * k + l * l + m * m) as f64;
                if q <= limit {
                    points.push([k, l, m]);
                }
            }
        }
    }
    Ok(LatticeSphere {
        points,
        lattice_constant: delta,
        radius: r,
    })
}

#[inline]
fn inv_norm(v: [f64; 3]) -> f64 {
    1.0 / (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// `−G·m²·Σ_{i,j} 1/|x_i − (x_j + t)|` over all ordered pairs.
///
/// Each unordered pair contributes `f(d − t) + f(d + t)` with `d = x_i − x_j`,
/// which makes the result bit-identical under `t → −t`.
pub fn lattice_pair_energy(
    lattice: &LatticeSphere,
    translation: [f64; 3],
    atom_mass: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if !(atom_mass > 0.0) {
        return Err(invalid(format!("atom mass must be positive, got {atom_mass}")));
    }
    if translation.iter().any(|c| !c.is_finite()) {
        return Err(invalid("translation must be finite"));
    }
    let delta = lattice.lattice_constant;
    let tau = translation.map(|c| c / delta);
    let pts: Vec<[f64; 3]> = lattice
        .points
        .iter()
        .map(|p| [p[0] as f64, p[1] as f64, p[2] as f64])
        .collect();
    let n = pts.len();
    if n == 0 {
        return Ok(0.0);
    }
    if tau == [0.0; 3] {
        return Err(Error::CoincidentPoints { i: 0, j: 0 });
    }

    let tasks = n.div_ceil(ROWS_PER_TASK);
    let partials: Vec<Result<f64>> = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut acc = NeumaierSum::new();
            let lo = task * ROWS_PER_TASK;
            let hi = (lo + ROWS_PER_TASK).min(n);
            for i in lo..hi {
                let pi = pts[i];
                let mut row = 0.0;
                for (j, pj) in pts.iter().enumerate().skip(i + 1) {
                    let d = [pi[0] - pj[0], pi[1] - pj[1], pi[2] - pj[2]];
                    let minus = [d[0] - tau[0], d[1] - tau[1], d[2] - tau[2]];
                    let plus = [d[0] + tau[0], d[1] + tau[1], d[2] + tau[2]];
                    if minus == [0.0; 3] {
                        return Err(Error::CoincidentPoints { i, j });
                    }
                    if plus == [0.0; 3] {
                        return Err(Error::CoincidentPoints { i: j, j: i });
                    }
                    row += inv_norm(minus) + inv_norm(plus);
                }
                acc += row;
            }
            Ok(acc.value())
        })
        .collect();

    let mut total = NeumaierSum::new();
    total += n as f64 * inv_norm(tau);
    for p in partials {
        total += p?;
    }
    Ok(-constants.g * atom_mass * atom_mass / delta * total.value())
}

/// One sample of the normalised translation profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Translation along the x axis in units of δ.
    pub x: f64,
    /// Lattice pair energy over `V_D = −6G(Nm)²/(5R)`.
    pub v_over_vd: f64,
    /// Atomic kernel `−G·N·m²/(xδ)` over `V_D`.
    pub schmidt_over_vd: f64,
}

/// Pair energy along the lattice edge direction, normalised by the
/// homogeneous self-energy of a sphere with the same mass and radius.
pub fn normalized_profile(
    lattice: &LatticeSphere,
    axis_fractions: &[f64],
    atom_mass: f64,
    constants: &PhysicalConstants,
) -> Result<Vec<ProfilePoint>> {
    if lattice.radius <= 0.0 {
        return Err(invalid("profile needs a positive lattice radius"));
    }
    let n = lattice.len() as f64;
    let delta = lattice.lattice_constant;
    let total_mass = n * atom_mass;
    let v_d = -6.0 * constants.g * total_mass * total_mass / (5.0 * lattice.radius);
    axis_fractions
        .iter()
        .map(|&x| {
            if !(x > 0.0 && x < 1.0) {
                return Err(invalid(format!("axis fraction must lie in (0, 1), got {x}")));
            }
            let v = lattice_pair_energy(lattice, [x * delta, 0.0, 0.0], atom_mass, constants)?;
            let v_s = -constants.g * n * atom_mass * atom_mass / (x * delta);
            Ok(ProfilePoint {
                x,
                v_over_vd: v / v_d,
                schmidt_over_vd: v_s / v_d,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: PhysicalConstants = PhysicalConstants::UNIT;

    #[test]
    fn reference_counts() {
        assert_eq!(generate_lattice_sphere(5.0, 1.0).unwrap().len(), 515);
        assert_eq!(generate_lattice_sphere(10.0, 1.0).unwrap().len(), 4169);
        assert_eq!(generate_lattice_sphere(5e-9, 1e-9).unwrap().len(), 515);
    }

    #[test]
    fn tiny_radius_is_origin() {
        let l = generate_lattice_sphere(0.5, 1.0).unwrap();
        assert_eq!(l.points, vec![[0, 0, 0]]);
        assert_eq!(generate_lattice_sphere(0.0, 1.0).unwrap().len(), 1);
        assert!(generate_lattice_sphere(-1.0, 1.0).is_err());
        assert!(generate_lattice_sphere(1.0, 0.0).is_err());
    }

    #[test]
    fn lexicographic() {
        let l = generate_lattice_sphere(3.0, 1.0).unwrap();
        assert!(l.points.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_point() {
        let l = generate_lattice_sphere(0.0, 1.0).unwrap();
        let e = lattice_pair_energy(&l, [0.0, 3.0, 4.0], 2.0, &C).unwrap();
        assert!((e + 4.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn two_points_by_hand() {
        let l = LatticeSphere {
            points: vec![[0, 0, 0], [1, 0, 0]],
            lattice_constant: 2.0,
            radius: 2.0,
        };
        let e = lattice_pair_energy(&l, [0.0, 0.0, 2.0], 1.0, &C).unwrap();
        let expected = -(2.0 / 2.0 + 2.0 / (2.0 * 2f64.sqrt()));
        assert!((e - expected).abs() < 1e-15);
    }

    #[test]
    fn coincidence_reported() {
        let l = LatticeSphere {
            points: vec![[0, 0, 0], [1, 0, 0]],
            lattice_constant: 1.0,
            radius: 1.0,
        };
        let err = lattice_pair_energy(&l, [1.0, 0.0, 0.0], 1.0, &C).unwrap_err();
        assert_eq!(err, Error::CoincidentPoints { i: 1, j: 0 });
        let err = lattice_pair_energy(&l, [0.0; 3], 1.0, &C).unwrap_err();
        assert!(matches!(err, Error::CoincidentPoints { .. }));
    }

    #[test]
    fn diosi_plateau_small_lattice() {
        let l = generate_lattice_sphere(5.0, 1.0).unwrap();
        let e = lattice_pair_energy(&l, [0.5, 0.0, 0.0], 1.0, &C).unwrap();
        let n = l.len() as f64;
        let v_d = -1.2 * n * n / 5.0;
        assert!((e / v_d - 1.0).abs() < 0.02, "{}", e / v_d);
    }

    #[test]
    fn profile_rejects_endpoints() {
        let l = generate_lattice_sphere(2.0, 1.0).unwrap();
        assert!(normalized_profile(&l, &[0.0], 1.0, &C).is_err());
        assert!(normalized_profile(&l, &[1.0], 1.0, &C).is_err());
    }
}
