use num_traits::Zero;
use proptest::prelude::*;
use toda_core::lax::{build_monodromy, conserved_poly, PhasePoint};
use toda_core::poly::*;

fn crat_vec(max_len: usize) -> impl Strategy<Value = Vec<CRat>> {
    prop::collection::vec((-20i64..=20, 1i64..=6, -20i64..=20, 1i64..=6), 1..=max_len)
        .prop_map(|v| v.into_iter().map(|(a, b, c, d)| CRat::new(rat(a, b), rat(c, d))).collect())
}

fn series(order: usize) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-9i64..=9, 0..=order + 1).prop_map(move |c| QSeries::from_ints(&c, order))
}

fn phase_point() -> impl Strategy<Value = PhasePoint> {
    (2usize..=5).prop_flat_map(|n| {
        (prop::collection::vec(-1.5f64..1.5, n), prop::collection::vec(-1.5f64..1.5, n))
            .prop_map(|(p, q)| PhasePoint::new(p, q).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_inverts_delta_inverse(c in crat_vec(13), h in (1i64..=9, 1i64..=9)) {
        let l = ExactPoly::new(c);
        let hbar = CRat::new(rat(h.0, h.1), rat(0, 1));
        let f = delta_inverse(&l, &hbar);
        prop_assert_eq!(delta(&f, &hbar), l.clone());
        prop_assert!(f.coeff(0).is_zero());
        if !l.is_zero() {
            prop_assert_eq!(f.degree(), l.degree() + 1);
        }
    }

    #[test]
    fn series_ring_laws(a in series(40), b in series(40), c in series(40)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &QSeries::one(40), a.clone());
    }

    #[test]
    fn series_inverse(mut c in prop::collection::vec(-9i64..=9, 1..=20)) {
        if c[0] == 0 {
            c[0] = 1;
        }
        let a = QSeries::from_ints(&c, 40);
        let inv = a.inverse().unwrap();
        prop_assert_eq!(&a * &inv, QSeries::one(40));
    }

    #[test]
    fn schur_blocks_reassemble(nvars in 1usize..=3, terms in prop::collection::vec((0u32..=3, 0u32..=3, 0u32..=3, -5i64..=5), 1..=4)) {
        // symmetrize random monomials
        let mut f = MPoly::<Rat>::zero(nvars);
        for (a, b, c, k) in terms {
            let e = [a, b, c];
            let m = MPoly::term(e[..nvars].to_vec(), rat(k, 1));
            f = &f + &symmetrize(&m);
        }
        let blocks = antisym_to_schur(&f).unwrap();
        let mut sum = MPoly::zero(nvars);
        for b in &blocks {
            sum = &sum + &b.expand();
        }
        prop_assert_eq!(sum, &MPoly::vandermonde(nvars) * &f);
    }

    #[test]
    fn monodromy_invariants(x in phase_point(), lam in -3.0f64..3.0) {
        let m = build_monodromy(&x);
        prop_assert!(m.det_defect() < 1e-10);
        let t = conserved_poly(&m);
        let n = x.n();
        prop_assert_eq!(t.degree(), n);
        prop_assert_eq!(t.coeff(n), 1.0);
        let scale = 1.0 + x.hamiltonian().abs();
        prop_assert!((t.coeff(n - 1) + x.total_momentum()).abs() < 1e-12 * scale);
        let p2 = x.total_momentum().powi(2);
        prop_assert!((t.coeff(n - 2) - (0.5 * p2 - x.hamiltonian())).abs() < 1e-10 * scale);
        let tr = m.a.eval(&lam) + m.d.eval(&lam);
        prop_assert!((tr - t.eval(&lam)).abs() < 1e-10 * (1.0 + tr.abs()));
    }
}

fn symmetrize(m: &MPoly<Rat>) -> MPoly<Rat> {
    let n = m.nvars();
    let perms: Vec<Vec<usize>> = match n {
        1 => vec![vec![0]],
        2 => vec![vec![0, 1], vec![1, 0]],
        _ => vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]],
    };
    let mut out = MPoly::zero(n);
    for p in perms {
        out = &out + &m.permute(&p);
    }
    out
}
