use gravnano::choquard::*;

#[test]
fn ground_state() {
    let s = shoot_state(0, &RadialGrid::default_for(0)).unwrap();
    println!("e0 = {} virial = {:?} cut = {}", s.eigenvalue, virial_check(&s), s.cutoff_radius);
    assert!((s.eigenvalue - 0.163).abs() < 0.005);
    assert!(s.eigenvalue > 0.146 && s.eigenvalue < 32.0 / (9.0 * std::f64::consts::PI.powi(2)));
    for r in virial_check(&s) {
        assert!(r.abs() < 1e-3, "{r}");
    }
}

#[test]
fn first_excited_state() {
    let s = shoot_state(1, &RadialGrid::default_for(1)).unwrap();
    let predicted = 0.096 / 1.76f64.powi(2);
    println!("e1 = {}", s.eigenvalue);
    assert!((s.eigenvalue - predicted).abs() < 0.1 * predicted);
    let signs = s.radial_profile.windows(2).filter(|w| w[0].1.signum() != w[1].1.signum()).count();
    assert_eq!(signs, 1);
}

#[test]
fn scaling_symmetry() {
    let base = shoot_state(0, &RadialGrid::default_for(0)).unwrap();
    for amp in [0.25f64, 4.0] {
        let g = RadialGrid::default_for(0);
        let grid = RadialGrid::with_amplitude(g.r_max / amp.sqrt(), g.steps, amp).unwrap();
        let s = shoot_state(0, &grid).unwrap();
        assert!(((s.eigenvalue - base.eigenvalue) / base.eigenvalue).abs() < 1e-8);
    }
}

#[test]
fn grid_convergence() {
    for n in 0..3 {
        let g = RadialGrid::default_for(n);
        let a = shoot_state(n, &g).unwrap();
        let b = shoot_state(n, &g.refined()).unwrap();
        let d = ((a.eigenvalue - b.eigenvalue) / b.eigenvalue).abs();
        assert!(d < 5e-3, "n = {n}: {d}");
    }
}

#[test]
fn coarse_grid_degrades_virial() {
    let fine = shoot_state(0, &RadialGrid::default_for(0)).unwrap();
    let coarse = shoot_state(0, &RadialGrid::new(40.0, 200).unwrap()).unwrap();
    let f = virial_check(&fine)[0].abs();
    let c = virial_check(&coarse)[0].abs();
    assert!(c > f, "coarse {c} fine {f}");
}

#[test]
fn short_grid_is_reported() {
    let r = shoot_state(2, &RadialGrid::new(5.0, 2000).unwrap());
    assert!(r.is_err());
}

#[test]
fn spectrum_is_decreasing_and_positive() {
    let sols = shoot_spectrum(4).unwrap();
    for s in &sols {
        assert!(s.eigenvalue > 0.0);
    }
    assert!(sols.windows(2).all(|w| w[1].eigenvalue < w[0].eigenvalue));
    let fit = spectrum_fit(&sols).unwrap();
    println!("{fit:?} {:?}", sols.iter().map(|s| s.eigenvalue).collect::<Vec<_>>());
}
