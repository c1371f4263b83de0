use num_complex::Complex64;
use toda_core::poly::RPoly;
use toda_core::quantum::*;

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix
/// `(d, e)`, by the Sturm sequence.
fn sturm_count(d: &[f64], e: f64, x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for &di in &d[1..] {
        let qq = if q.abs() < 1e-300 { 1e-300 } else { q };
        q = di - x - e * e / qq;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest eigenvalue of `−ħ² d²/dr² + 2cosh r` with three-point finite
/// differences on `[−r_max, r_max]`.
fn fd_ground(hbar: f64, h: f64, r_max: f64) -> f64 {
    let n = (2.0 * r_max / h).round() as usize - 1;
    let k = hbar * hbar / (h * h);
    let d: Vec<f64> = (1..=n).map(|i| 2.0 * k + 2.0 * (-r_max + h * i as f64).cosh()).collect();
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if sturm_count(&d, -k, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn ground_energy_against_finite_differences() {
    let e_h = fd_ground(1.0, 0.01, 10.0);
    let e_h2 = fd_ground(1.0, 0.005, 10.0);
    let oracle = (4.0 * e_h2 - e_h) / 3.0;
    let qs = solve_states(1.0, 3).unwrap();
    assert!((qs[0].energy - oracle).abs() < 1e-7, "{} vs {oracle}", qs[0].energy);
    // frozen
    assert!((qs[0].energy - 3.059174596901).abs() < 1e-10);
    assert!((qs[1].energy - 5.285125967179).abs() < 1e-9);
    assert!((qs[2].energy - 7.714579572992).abs() < 1e-9);
}

#[test]
fn baxter_equation_six_levels() {
    for hbar in [1.0, 0.5] {
        let qs = solve_states(hbar, 6).unwrap();
        for (m, q) in qs.iter().enumerate() {
            assert_eq!(q.level, m);
            assert_eq!(q.parity, if m % 2 == 0 { 1 } else { -1 });
            assert_eq!(q.t_sign, -1.0);
            assert_eq!(q.t.coeffs(), &[-q.energy, 0.0, 1.0]);
            let r = baxter_residual(q).unwrap();
            assert!(r < 1e-6, "hbar {hbar} level {m}: {r:e}");
        }
    }
}

#[test]
fn perturbed_eigenvalue_breaks_the_equation() {
    let qs = solve_states(1.0, 3).unwrap();
    let grid = residual_grid(5.0, 0.25, 2.0, 0.5);
    for q in &qs {
        let exact = baxter_residual_with(|g| q.q(g), &q.t, 1.0, &grid).unwrap();
        let t = RPoly::new(vec![1.01 * q.t.coeff(0), 0.0, 1.0]);
        let off = baxter_residual_with(|g| q.q(g), &t, 1.0, &grid).unwrap();
        assert!(off > 10.0 * exact && off > 1e-4, "{exact:e} {off:e}");
    }
}

#[test]
fn shifted_lines_agree_with_real_axis() {
    let qs = solve_states(1.0, 4).unwrap();
    for q in &qs {
        for re in [2.0, 4.0, 5.0] {
            let c = q.line_consistency(re).unwrap();
            assert!(c < 1e-8, "level {} at {re}: {c:e}", q.level);
        }
    }
}

#[test]
fn q_is_real_on_the_axis_and_has_definite_parity() {
    let qs = solve_states(0.5, 4).unwrap();
    for q in &qs {
        for g in [0.3, 1.1, 2.7] {
            let p = q.phi(Complex64::new(g, 0.0));
            assert!(p.im.abs() < 1e-12 * p.norm().max(1e-300));
            let m = q.phi(Complex64::new(-g, 0.0));
            assert!((m.re - q.parity as f64 * p.re).abs() < 1e-12);
            let ratio = q.q_re(g).unwrap() / q.phi_re(g);
            assert!((ratio / (std::f64::consts::PI * g / 0.5).exp() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn asymptotics_beyond_the_classical_region() {
    for hbar in [1.0, 0.5] {
        let qs = solve_states(hbar, 6).unwrap();
        for m in [0usize, 3, 5] {
            let lam = 10.0 * hbar * (m as f64 + 5.0);
            let a = asymptotics_check(&qs[m], lam).unwrap();
            assert!(a.zero_count_ok && a.left_slope_ok && a.right_bounded, "{a:?}");
            assert!((a.zeros_counted as f64 - a.zeros_predicted).abs() <= 1.0, "{a:?}");
        }
    }
}

#[test]
fn bohr_sommerfeld_error_shrinks() {
    let err = |h: f64| {
        let bs = bs_quantize(h, 3).unwrap();
        let qs = solve_states(h, 4).unwrap();
        (bs.energy - qs[3].energy).abs()
    };
    let (e1, e2, e3) = (err(0.5), err(0.25), err(0.125));
    let r = e1 / e2;
    assert!((2.5..=6.0).contains(&r), "{e1:e} {e2:e} {r}");
    assert!(e3 < e2);
}

#[test]
fn bad_inputs() {
    assert!(solve_states(0.0, 2).is_err());
    assert!(solve_states(f64::NAN, 2).is_err());
    assert!(solve_states(1.0, 0).unwrap().is_empty());
    assert!(bs_quantize(-1.0, 0).is_err());
    assert!(solve_relative_spectrum(1.0, 21).is_err());
    let qs = solve_states(1.0, 1).unwrap();
    assert!(asymptotics_check(&qs[0], 0.1).is_err());
}

#[test]
fn relative_spectrum_matches_states() {
    let pairs = solve_relative_spectrum(1.0, 4).unwrap();
    let qs = solve_states(1.0, 4).unwrap();
    for (p, q) in pairs.iter().zip(&qs) {
        assert_eq!(p.level, q.level);
        assert!((p.energy - q.energy).abs() < 1e-12);
        assert!((p.t2() + p.energy).abs() < 1e-12);
        let b = build_q(p).unwrap();
        assert!((b.phi_re(0.7) - q.phi_re(0.7)).abs() < 1e-10);
    }
}
