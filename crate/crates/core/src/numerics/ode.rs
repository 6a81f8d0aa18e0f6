//! Dormand–Prince 5(4) integrator with PI step-size control.
//!
//! The stepper owns its state and advances it in accepted steps. Callers
//! supply the right-hand side and a per-component error scale, so the
//! tolerance model stays with the problem rather than the integrator.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const MIN_SHRINK: f64 = 0.2;
const MAX_GROW: f64 = 10.0;

/// Adaptive stepper over an `N`-component state.
pub struct Dopri5<F, S, const N: usize> {
    rhs: F,
    scale: S,
    t: f64,
    y: [f64; N],
    dy: [f64; N],
    h: f64,
    err_old: f64,
    steps: usize,
    max_steps: usize,
    last_h: f64,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

impl<F, S, const N: usize> Dopri5<F, S, N>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]>,
    S: Fn(&[f64; N], &[f64; N]) -> [f64; N],
{
    /// `scale(y_old, y_new)` returns the absolute error allowed per component.
    pub fn new(rhs: F, scale: S, t0: f64, y0: [f64; N], max_steps: usize) -> Result<Self> {
        let dy = rhs(t0, &y0)?;
        let mut s = Self {
            rhs,
            scale,
            t: t0,
            y: y0,
            dy,
            h: 0.0,
            err_old: 1e-4,
            steps: 0,
            max_steps,
            last_h: 0.0,
        };
        s.h = s.initial_step()?;
        Ok(s)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Size of the most recently accepted step.
    pub fn last_step(&self) -> f64 {
        self.last_h
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn norm(&self, v: &[f64; N], y0: &[f64; N], y1: &[f64; N]) -> f64 {
        let sc = (self.scale)(y0, y1);
        let sum: f64 = v.iter().zip(sc.iter()).map(|(e, s)| (e / s).powi(2)).sum();
        (sum / N as f64).sqrt()
    }

    fn initial_step(&self) -> Result<f64> {
        let d0 = self.norm(&self.y, &self.y, &self.y);
        let d1 = self.norm(&self.dy, &self.y, &self.y);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = axpy(&self.y, h0, &[(1.0, &self.dy)]);
        let f1 = (self.rhs)(self.t + h0, &y1)?;
        let mut diff = [0.0; N];
        for i in 0..N {
            diff[i] = f1[i] - self.dy[i];
        }
        let d2 = self.norm(&diff, &self.y, &self.y) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        Ok((100.0 * h0).min(h1))
    }

    /// One explicit step of size `h` from `(t, y)` with derivative `dy`.
    /// Returns the fifth-order solution, its derivative and the error vector.
    fn attempt(
        &self,
        t: f64,
        y: &[f64; N],
        dy: &[f64; N],
        h: f64,
    ) -> Result<([f64; N], [f64; N], [f64; N])> {
        let k1 = dy;
        let k2 = (self.rhs)(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
        let k3 = (self.rhs)(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
        let k4 = (self.rhs)(
            t + C4 * h,
            &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = (self.rhs)(
            t + C5 * h,
            &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = (self.rhs)(
            t + h,
            &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y_new = axpy(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = (self.rhs)(t + h, &y_new)?;
        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        Ok((y_new, k7, err))
    }

    /// Uncontrolled step of size `h` from an arbitrary point. Used to refine
    /// events inside an interval whose accepted step was at least `h`.
    pub fn fixed_step(&self, t: f64, y: &[f64; N], h: f64) -> Result<[f64; N]> {
        let dy = (self.rhs)(t, y)?;
        Ok(self.attempt(t, y, &dy, h)?.0)
    }

    /// Takes one accepted step, never passing `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let remaining = t_limit - self.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        let proposed = self.h;
        let mut h = proposed.min(remaining);
        let mut rejected = false;
        loop {
            if self.steps >= self.max_steps {
                return Err(Error::TooManySteps {
                    t: self.t,
                    max_steps: self.max_steps,
                });
            }
            if h <= f64::EPSILON * self.t.abs().max(1.0) * 4.0 {
                return Err(Error::StepSizeUnderflow { t: self.t, h });
            }
            let landing = h >= remaining;
            let (y_new, dy_new, err) = match self.attempt(self.t, &self.y, &self.dy, h) {
                Ok(v) => v,
                // A trial stage left the physical domain: shrink and retry.
                Err(Error::Collapse { .. }) if h > 1e-12 * remaining.max(1.0) => {
                    h *= 0.25;
                    rejected = true;
                    continue;
                }
                Err(e) => return Err(e),
            };
            self.steps += 1;
            let e = self.norm(&err, &self.y, &y_new);
            if !e.is_finite() {
                h *= MIN_SHRINK;
                rejected = true;
                continue;
            }
            let fac11 = e.powf(EXPO1);
            if e <= 1.0 {
                let mut fac = fac11 / self.err_old.powf(BETA) / SAFETY;
                fac = fac.clamp(1.0 / MAX_GROW, 1.0 / MIN_SHRINK);
                let mut h_next = h / fac;
                if rejected {
                    h_next = h_next.min(h);
                }
                self.err_old = e.max(1e-4);
                self.t = if landing { t_limit } else { self.t + h };
                self.y = y_new;
                self.dy = dy_new;
                self.last_h = h;
                // A step clipped to land on t_limit says nothing about the
                // natural step size, so keep the earlier proposal.
                self.h = if landing && !rejected { h_next.max(proposed) } else { h_next };
                return Ok(());
            }
            h /= (fac11 / SAFETY).min(1.0 / MIN_SHRINK);
            rejected = true;
        }
    }

    /// Advances to exactly `t_target`.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target {
            self.step(t_target)?;
        }
        Ok(())
    }
}

/// Mixed absolute/relative scale: `atol + rtol·max(|y0|, |y1|)`.
pub fn mixed_scale<const N: usize>(
    rtol: f64,
    atol: f64,
) -> impl Fn(&[f64; N], &[f64; N]) -> [f64; N] {
    move |y0, y1| {
        let mut s = [0.0; N];
        for i in 0..N {
            s[i] = atol + rtol * y0[i].abs().max(y1[i].abs());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([-y[0]]);
        let mut s = Dopri5::new(rhs, mixed_scale::<1>(1e-10, 1e-14), 0.0, [1.0], 100_000).unwrap();
        s.advance_to(5.0).unwrap();
        assert_eq!(s.t(), 5.0);
        assert!((s.y()[0] - (-5.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let rhs = |_t: f64, y: &[f64; 2]| Ok([y[1], -y[0]]);
        let mut s =
            Dopri5::new(rhs, mixed_scale::<2>(1e-11, 1e-13), 0.0, [1.0, 0.0], 1_000_000).unwrap();
        s.advance_to(20.0 * std::f64::consts::PI).unwrap();
        let y = s.y();
        assert!((y[0] - 1.0).abs() < 1e-8 && y[1].abs() < 1e-8);
    }

    #[test]
    fn step_budget() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([y[0]]);
        let mut s = Dopri5::new(rhs, mixed_scale::<1>(1e-12, 1e-14), 0.0, [1.0], 5).unwrap();
        assert!(matches!(s.advance_to(100.0), Err(Error::TooManySteps { .. })));
    }

    #[test]
    fn fixed_step_matches_accepted() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([-2.0 * y[0]]);
        let mut s = Dopri5::new(rhs, mixed_scale::<1>(1e-10, 1e-14), 0.0, [1.0], 1000).unwrap();
        s.step(1.0).unwrap();
        let h = s.last_step();
        let y = s.fixed_step(0.0, &[1.0], h).unwrap();
        assert!((y[0] - s.y()[0]).abs() < 1e-15);
    }
}
