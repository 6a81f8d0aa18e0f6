use gravnano::regimes::*;
use gravnano::{PhysicalConstants, Regime, SphereSpec};
use proptest::prelude::*;

const C: PhysicalConstants = PhysicalConstants::SI;

fn spec_strategy() -> impl Strategy<Value = SphereSpec> {
    (-8.0f64..-4.0, 500.0f64..25000.0, -10.0f64..-9.0, -15.0f64..-11.0, -27.0f64..-24.0).prop_map(
        |(lr, rho, ld, ln, lm)| {
            SphereSpec::new(10f64.powf(lr), rho, 10f64.powf(ld), 10f64.powf(ln), 10f64.powf(lm))
                .unwrap()
        },
    )
}

proptest! {
    #[test]
    fn classify_follows_boundaries(spec in spec_strategy(), lw in -18.0f64..-3.0) {
        let w = 10f64.powf(lw);
        let label = classify(&spec, w).unwrap();
        let b = label.boundaries;
        prop_assert!(b.nuclear_max <= b.atomic_max && b.atomic_max < b.mesoscopic_max);
        let expected = if w <= b.nuclear_max {
            Regime::Nuclear
        } else if w <= b.atomic_max {
            Regime::Atomic
        } else if w <= b.mesoscopic_max {
            Regime::Mesoscopic
        } else {
            Regime::Quantum
        };
        prop_assert_eq!(label.regime, expected);
        // Boundaries themselves fall into the lower regime.
        prop_assert_eq!(classify(&spec, b.mesoscopic_max).unwrap().regime, Regime::Mesoscopic);
        prop_assert_eq!(classify(&spec, b.nuclear_max).unwrap().regime, Regime::Nuclear);
    }

    #[test]
    fn mesoscopic_radius_round_trips(rho in 100.0f64..30000.0) {
        let r = mesoscopic_radius(rho, &C).unwrap();
        let m = rho * 4.0 * std::f64::consts::PI / 3.0 * r.powi(3);
        prop_assert!((C.hbar.powi(2) / (C.g * m.powi(3)) / r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn formulas_are_pure(spec in spec_strategy(), lw in -18.0f64..-3.0) {
        let w = 10f64.powf(lw);
        let a = (
            lambda_crit(&spec, w, &C).unwrap(),
            dp_collapse_time(spec.mass(), &C).unwrap(),
            entanglement_bound(&spec, 123.0, &C).unwrap(),
            critical_atom_numbers(&spec, &C),
        );
        let b = (
            lambda_crit(&spec, w, &C).unwrap(),
            dp_collapse_time(spec.mass(), &C).unwrap(),
            entanglement_bound(&spec, 123.0, &C).unwrap(),
            critical_atom_numbers(&spec, &C),
        );
        prop_assert_eq!(a.0.to_bits(), b.0.to_bits());
        prop_assert_eq!(a.1.to_bits(), b.1.to_bits());
        prop_assert_eq!(a.2.to_bits(), b.2.to_bits());
        prop_assert_eq!(a.3, b.3);
        prop_assert!(a.3.nuclear > a.3.atomic);
    }
}

#[test]
fn coinciding_scales_give_equal_numbers() {
    let s = SphereSpec::new(1e-6, 2650.0, 1e-10, 1e-10 * (1.0 - 1e-15), 1e-25).unwrap();
    let n = critical_atom_numbers(&s, &C);
    assert!((n.nuclear / n.atomic - 1.0).abs() < 1e-14);
}

#[test]
fn decoherence_window() {
    let s = SphereSpec::silica(1e-7).unwrap();
    let deco = lambda_deco(1.0, 1e11);
    assert_eq!(deco, 1e11);
    let crit = lambda_crit(&s, 1e-8, &C).unwrap();
    assert_eq!(is_robust(deco, crit), deco < crit);
}
