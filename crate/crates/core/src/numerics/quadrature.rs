//! Adaptive Simpson quadrature with an explicit subdivision budget.

use crate::error::{invalid, Error, Result};

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of the per-panel Richardson error estimates.
    pub estimated_error: f64,
    /// Number of panels in the final partition.
    pub subdivisions: usize,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Panels are bisected until each meets its share of the tolerance or the
/// partition reaches `max_subdivisions` panels. Fails if the summed error
/// estimate still exceeds `tol` at that point.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_subdivisions: usize,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(invalid(format!("bad integration interval [{a}, {b}]")));
    }
    if !(tol > 0.0) || max_subdivisions == 0 {
        return Err(invalid("tolerance and subdivision budget must be positive"));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            estimated_error: 0.0,
            subdivisions: 0,
        });
    }
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole: simpson(a, b, fa, fm, fb),
        tol,
    }];
    let mut panels = 1usize;
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let flm = f(0.5 * (p.a + m));
        let frm = f(0.5 * (m + p.b));
        let left = simpson(p.a, m, p.fa, flm, p.fm);
        let right = simpson(m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;
        let est = delta.abs() / 15.0;
        let width_ok = m > p.a && m < p.b;
        if est <= p.tol || panels >= max_subdivisions || !width_ok {
            let contrib = left + right + delta / 15.0;
            // Kahan update keeps the final sum clean across many panels.
            let y = contrib - comp;
            let t = value + y;
            comp = (t - value) - y;
            value = t;
            error += est;
            continue;
        }
        panels += 1;
        stack.push(Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
            tol: 0.5 * p.tol,
        });
        stack.push(Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
            tol: 0.5 * p.tol,
        });
    }
    if error > tol {
        return Err(Error::InsufficientSubdivisions {
            used: panels,
            estimated_error: error,
            tolerance: tol,
        });
    }
    Ok(Integral {
        value,
        estimated_error: error,
        subdivisions: panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_exact() {
        let r = adaptive_simpson(|x| x * x * x - x, 0.0, 2.0, 1e-12, 16).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_transcendental() {
        let r = adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12, 10_000).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_reported() {
        let r = adaptive_simpson(|x: f64| x.sqrt(), 0.0, 1.0, 1e-14, 4);
        assert!(matches!(r, Err(Error::InsufficientSubdivisions { .. })));
    }

    #[test]
    fn empty_interval() {
        let r = adaptive_simpson(|x| x, 1.0, 1.0, 1e-10, 16).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
