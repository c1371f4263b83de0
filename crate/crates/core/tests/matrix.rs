use num_complex::Complex64;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toda_core::matrix::*;
use toda_core::poly::*;
use toda_core::quantum::*;

fn cr(re: i64, den: i64) -> CRat {
    CRat::new(rat(re, den), rat(0, 1))
}

/// `Δ⁻¹(γ² + a)` in closed form: `(γ³ + ħ²γ)/(6iħ) + aγ/(2iħ)`.
fn delta_inv_quadratic(a: Complex64, hbar: f64, g: Complex64) -> Complex64 {
    let ih = Complex64::new(0.0, hbar);
    (g * g * g + hbar * hbar * g) / (6.0 * ih) + a * g / (2.0 * ih)
}

#[test]
fn dq_matches_pointwise_formula() {
    // t = γ² − 3, t′ = γ² − 5/2, L = 1, ħ = 1/2
    let (a, b, hbar) = (-3.0, -2.5, 0.5);
    let p = build_quantum_identity_polys(
        &ExactPoly::new(vec![cr(-3, 1), cr(0, 1), cr(1, 1)]),
        &ExactPoly::new(vec![cr(-5, 2), cr(0, 1), cr(1, 1)]),
        &cr(1, 2),
        &ExactPoly::one(),
    )
    .unwrap();
    let d = p.dq.to_c64();
    let ih = Complex64::new(0.0, hbar);
    for g in [Complex64::new(0.3, 0.0), Complex64::new(-1.7, 0.4), Complex64::new(2.0, -1.0)] {
        let t = |x: Complex64| x * x + a;
        let tp = |x: Complex64| x * x + b;
        let f = |x| delta_inv_quadratic(Complex64::new(a, 0.0), hbar, x);
        let gg = |x| delta_inv_quadratic(Complex64::new(b, 0.0), hbar, x);
        // L(γ ± iħ) cancel for constant L
        let want = t(g) * f(g) + tp(g) * gg(g) - t(g) * gg(g - ih) - tp(g) * f(g - ih) - t(g) * tp(g);
        let got = d.eval(&g);
        assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{got} {want}");
    }
    assert_eq!(p.sq, ExactPoly::new(vec![cr(-1, 2)]));
}

#[test]
fn delta_inverse_matches_closed_form() {
    let hbar = cr(3, 7);
    let l = ExactPoly::new(vec![cr(2, 3), cr(0, 1), cr(1, 1)]);
    let f = delta_inverse(&l, &hbar).to_c64();
    for g in [0.4, -1.3, 2.2] {
        let z = Complex64::new(g, 0.1);
        let want = delta_inv_quadratic(Complex64::new(2.0 / 3.0, 0.0), 3.0 / 7.0, z);
        assert!((f.eval(&z) - want).norm() < 1e-13);
    }
}

#[test]
fn cq_antisymmetric_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t = exact_from_real(&RPoly::new(vec![-3.0594, 0.0, 1.0]));
    let tp = exact_from_real(&RPoly::new(vec![-5.2851, 0.0, 1.0]));
    let l = ExactPoly::new(vec![cr(1, 2), cr(-1, 1), cr(0, 1), cr(1, 1)]);
    let c = build_quantum_identity_polys(&t, &tp, &cr(1, 1), &l).unwrap().cq.map(crat_to_c64);
    for _ in 0..50 {
        let mut z = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (x, y) = (z(), z());
        let s = c.eval(&x, &y) + c.eval(&y, &x);
        assert!(s.norm() < 1e-10 * c.eval(&x, &y).norm().max(1.0), "{s}");
    }
}

#[test]
fn orthogonality_and_norms() {
    for hbar in [1.0, 0.5] {
        let qs = solve_states(hbar, 5).unwrap();
        let norms: Vec<f64> = qs.iter().map(|q| norm(q).unwrap()).collect();
        assert!(norms.iter().all(|n| *n > 0.0));
        for i in 0..5 {
            for j in i + 1..5 {
                let me = deformed_integral(&qs[i], &qs[j], &CPoly::one(), 1).unwrap();
                assert!(me.window_change < 1e-8);
                assert!(me.value().norm() / (norms[i] * norms[j]).sqrt() < 1e-10);
            }
        }
    }
}

#[test]
fn first_identity_vanishes_for_all_pairs() {
    let qs = solve_states(1.0, 5).unwrap();
    for (i, j) in [(0usize, 0usize), (0, 1), (1, 2), (0, 2), (1, 3), (2, 4)] {
        for d in 0..=3 {
            let l = ExactPoly::monomial(d, CRat::one());
            let r = quantum_prop_check(QuantumProp::P1pp, Some(&l), &qs[i], &qs[j], 1, None).unwrap();
            assert!(r.residual < 1e-10, "({i},{j}) L=γ^{d}: {r:?}");
        }
    }
}

#[test]
fn random_density_is_a_negative_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let qs = solve_states(0.5, 4).unwrap();
    for (i, j) in [(0usize, 1usize), (1, 3), (2, 2)] {
        let l = ExactPoly::monomial(2, CRat::one());
        let deg = build_quantum_identity_polys(
            &exact_from_real(&qs[i].t),
            &exact_from_real(&qs[j].t),
            &c64_to_crat(Complex64::new(0.5, 0.0)),
            &l,
        )
        .unwrap()
        .dq
        .degree();
        let fake = CPoly::new((0..=deg).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
        let r = deformed_integral(&qs[i], &qs[j], &fake, 1).unwrap();
        assert!(r.value().norm() / r.scale > 1e-2);
    }
}

#[test]
fn two_site_and_difference_identities() {
    let qs = solve_states(1.0, 4).unwrap();
    for (i, j) in [(0usize, 1usize), (1, 2), (0, 3)] {
        let r = quantum_prop_check(QuantumProp::P2pp, None, &qs[i], &qs[j], 1, Some(1)).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        let r = quantum_prop_check(QuantumProp::P3pp, None, &qs[i], &qs[j], 1, None).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
    }
    assert!(quantum_prop_check(QuantumProp::P2pp, None, &qs[0], &qs[1], 2, Some(1)).is_err());
    assert!(deformed_integral(&qs[0], &qs[1], &CPoly::one(), 2).is_err());
}

#[test]
fn contour_shift() {
    for hbar in [1.0, 0.5] {
        let qs = solve_states(hbar, 4).unwrap();
        for (i, j) in [(0usize, 0usize), (0, 1), (1, 3)] {
            let c = contour_shift_check(&qs[i], &qs[j]).unwrap();
            assert!(c.residual < 1e-10, "{c:?}");
        }
    }
}

#[test]
fn matrix_element_of_b1_squared() {
    let qs = solve_states(1.0, 3).unwrap();
    let g2 = MPoly::term(vec![2], 1.0);
    let b1 = sov_symmetric(1, 1);
    let a = matrix_element(&qs[0], &qs[2], &g2).unwrap().value();
    let b = matrix_element(&qs[0], &qs[2], &(&b1 * &b1)).unwrap().value();
    assert!((a - b).norm() < 1e-14 * a.norm());
    assert!(a.norm() > 1e-3);
    assert!(matrix_element(&qs[0], &qs[2], &MPoly::var(2, 0)).is_err());
}

#[test]
fn zeros_in_the_zone() {
    let near = |h: f64| level_near(h, 6.0, 200).unwrap();
    let a = near(0.15);
    let za = zone_zero_match(&a[0]).unwrap();
    assert_eq!(za.exact.len(), za.predicted.len());
    assert!(za.worst_offset < 0.05, "{za:?}");
    let b = near(0.075);
    let zb = zone_zero_match(&b[0]).unwrap();
    assert!((zb.exact.len() as i64 - 2 * za.exact.len() as i64).abs() <= 1);
    // quasi-classical quantum number lands on the level index
    let qc = quasiclassical_q(a[0].energy, 0.15, 50).unwrap();
    assert!((qc.bs_number - a[0].level as f64).abs() < 0.05, "{}", qc.bs_number);
}

#[test]
fn close_states_approach_classical_fourier() {
    let f = RPoly::new(vec![0.0, 1.0]);
    let dev = |h: f64| {
        let qs = level_near(h, 6.0, 200).unwrap();
        close_state_compare(&qs[0], &qs[1], 1, &f).unwrap()
    };
    let (c1, c2) = (dev(0.2), dev(0.1));
    assert!(c1.deviation / c2.deviation >= 1.5, "{c1:?} {c2:?}");
    assert!(c2.deviation < 0.05);

    let qs = solve_states(0.1, 7).unwrap();
    let c = close_state_compare(&qs[5], &qs[6], 1, &f).unwrap();
    assert!(c.spacing_deviation < 0.05, "{c:?}");
}

#[test]
fn deformation_sequence() {
    let step = |h: f64| {
        let qs = level_near(h, 6.0, 200).unwrap();
        deformation_step(&qs[0], &qs[1], 1).unwrap()
    };
    let (s1, s2) = (step(0.1), step(0.05));
    assert!(s2.relative_error < s1.relative_error);
    assert!(s2.relative_error < 0.01, "{s2:?}");
}
