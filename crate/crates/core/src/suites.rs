//! Identity suites shared by `verify-identities` and the acceptance tests.
//! Each suite returns rows of residual against tolerance.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::characters::{character_binomial, character_product, character_resolution, printed_two_site};
use crate::dynamics::{
    abel_linearization, em_residual, evolve, hamiltonian_flow, pde_residual, PdeInputs, PdeKind,
};
use crate::lax::{build_monodromy, conserved_poly, PhasePoint};
use crate::matrix::{
    build_quantum_identity_polys, close_state_compare, contour_shift_check, deformed_integral, exact_from_real,
    level_near, norm, quantum_prop_check, zone_zero_match, QuantumProp,
};
use crate::poly::{delta, delta_inverse, rat, CPoly, CRat, ExactPoly, MPoly, QSeries, RPoly};
use crate::quantum::{baxter_residual, bs_quantize, solve_states, QFunction};
use crate::spectral::{build_spectral, period_matrix, prop_check_classical, ClassicalProp, SpectralData};
use crate::{Result, TodaError};

pub const SUITES: [&str; 8] =
    ["structure", "classical", "dynamics", "pde", "characters", "quantum", "quasiclassical", "exactness"];

/// How a residual is compared with its tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `residual < tolerance`
    Below,
    /// `residual >= tolerance`
    Above,
    /// `tolerance <= residual <= upper`
    Between { upper: f64 },
    /// `residual == 0`
    Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub identity: String,
    pub inputs: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub rows: Vec<Row>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.to_string(), rows: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| !r.pass).collect()
    }

    fn below(&mut self, identity: &str, inputs: String, residual: f64, tolerance: f64) {
        let pass = residual < tolerance;
        self.rows.push(Row { identity: identity.into(), inputs, residual, tolerance, bound: Bound::Below, pass });
    }

    fn above(&mut self, identity: &str, inputs: String, residual: f64, tolerance: f64) {
        let pass = residual >= tolerance;
        self.rows.push(Row { identity: identity.into(), inputs, residual, tolerance, bound: Bound::Above, pass });
    }

    fn within(&mut self, identity: &str, inputs: String, residual: f64, lo: f64, hi: f64) {
        let pass = residual >= lo && residual <= hi;
        let bound = Bound::Between { upper: hi };
        self.rows.push(Row { identity: identity.into(), inputs, residual, tolerance: lo, bound, pass });
    }

    fn exact(&mut self, identity: &str, inputs: String, residual: f64) {
        let pass = residual == 0.0;
        self.rows.push(Row { identity: identity.into(), inputs, residual, tolerance: 0.0, bound: Bound::Exact, pass });
    }

    /// Record a computation that failed outright.
    fn error(&mut self, identity: &str, inputs: String, e: &TodaError) {
        self.rows.push(Row {
            identity: format!("{identity} [{e}]"),
            inputs,
            residual: f64::NAN,
            tolerance: 0.0,
            bound: Bound::Below,
            pass: false,
        });
    }

    fn absorb(&mut self, identity: &str, inputs: String, r: Result<()>) {
        if let Err(e) = r {
            self.error(identity, inputs, &e);
        }
    }
}

/// Options shared by all suites; unset fields take suite defaults.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub genus: Option<usize>,
    pub hbar: Option<Vec<f64>>,
    pub levels: Option<usize>,
    pub points: Option<usize>,
    pub order: Option<usize>,
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    if let Some(g) = opts.genus {
        if !(1..=3).contains(&g) {
            return Err(TodaError::InvalidInput(format!("genus {g} outside 1..=3")));
        }
    }
    match name {
        "structure" => Ok(structure(opts.seed, opts.points.unwrap_or(100))),
        "classical" => Ok(classical(opts.genus)),
        "dynamics" => Ok(dynamics()),
        "pde" => Ok(pde()),
        "characters" => Ok(characters(opts.order.unwrap_or(40))),
        "quantum" => Ok(quantum(opts.hbar.as_deref().unwrap_or(&[1.0, 0.5]), opts.levels.unwrap_or(6), opts.seed)),
        "quasiclassical" => Ok(quasiclassical()),
        "exactness" => Ok(exactness(opts.seed)),
        _ => Err(TodaError::InvalidInput(format!("unknown suite '{name}'"))),
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize) -> PhasePoint {
    let p = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let q = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PhasePoint { p, q }
}

/// `det M ≡ 1` and the first two coefficients of `t`.
pub fn structure(seed: u64, points: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("structure");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 2..=6 {
        let (mut det, mut t1, mut t2): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..points {
            let x = random_point(&mut rng, n);
            let m = build_monodromy(&x);
            det = det.max(m.det_defect());
            let t = conserved_poly(&m);
            let (p, h) = (x.total_momentum(), x.hamiltonian());
            t1 = t1.max((t.coeff(n - 1) + p).abs() / p.abs().max(1.0));
            let e2 = 0.5 * p * p - h;
            t2 = t2.max((t.coeff(n - 2) - e2).abs() / e2.abs().max(1.0));
        }
        let inputs = format!("n={n}, {points} points");
        rep.below("det M = 1", inputs.clone(), det, 1e-12);
        rep.below("t1 = -P", inputs.clone(), t1, 1e-12);
        rep.below("t2 = P^2/2 - H", inputs, t2, 1e-12);
    }
    rep
}

/// Phase points whose curves have genus 1, 2, 3.
pub fn reference_point(genus: usize) -> PhasePoint {
    match genus {
        1 => PhasePoint { p: vec![0.7, -0.7], q: vec![0.2, -0.1] },
        2 => PhasePoint { p: vec![0.4, -0.1, -0.3], q: vec![0.0, 0.5, -0.2] },
        _ => PhasePoint { p: vec![0.3, -0.5, 0.1, 0.1], q: vec![0.1, -0.3, 0.4, 0.0] },
    }
}

fn curve(genus: usize) -> Result<SpectralData> {
    build_spectral(&conserved_poly(&build_monodromy(&reference_point(genus))))
}

fn l_polys() -> Vec<RPoly> {
    vec![
        RPoly::new(vec![1.0]),
        RPoly::new(vec![0.5, 1.0]),
        RPoly::new(vec![-0.2, 0.0, 1.0]),
        RPoly::new(vec![0.3, -1.0, 0.5, 1.0]),
    ]
}

fn k_vectors(g: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..g {
        out = out.into_iter().flat_map(|v| (-2..=2).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Unprimed identities on genus `≤ 3` and primed ones with `k ∈ {−2..2}^g`
/// at genus 2.
pub fn classical(genus: Option<usize>) -> SuiteReport {
    let mut rep = SuiteReport::new("classical");
    let genera: Vec<usize> = genus.map(|g| vec![g]).unwrap_or_else(|| vec![1, 2, 3]);
    for &g in &genera {
        let inputs = format!("genus {g}");
        let r = (|| -> Result<()> {
            let s = curve(g)?;
            let per = period_matrix(&s)?;
            let mut p1: f64 = 0.0;
            for l in l_polys() {
                for j in 1..=g {
                    p1 = p1.max(prop_check_classical(&s, &per, ClassicalProp::P1, Some(&l), None, &[j])?.residual);
                }
            }
            rep.below("P1", format!("genus {g}, deg L <= 3"), p1, 1e-7);
            if g >= 2 {
                let mut p2: f64 = 0.0;
                for a in 1..=g {
                    for b in 1..=g {
                        if a != b {
                            p2 = p2.max(prop_check_classical(&s, &per, ClassicalProp::P2, None, None, &[a, b])?.residual);
                        }
                    }
                }
                rep.below("P2", format!("genus {g}"), p2, 1e-7);
            }
            if g == 2 {
                let (mut q1, mut q2, mut q3): (f64, f64, f64) = (0.0, 0.0, 0.0);
                for k in k_vectors(g) {
                    for j in 1..=g {
                        for l in l_polys() {
                            let r = prop_check_classical(&s, &per, ClassicalProp::P1p, Some(&l), Some(&k), &[j])?;
                            q1 = q1.max(r.residual);
                        }
                        q3 = q3.max(prop_check_classical(&s, &per, ClassicalProp::P3p, None, Some(&k), &[j])?.residual);
                        for j2 in 1..=g {
                            let r = prop_check_classical(&s, &per, ClassicalProp::P2p, None, Some(&k), &[j, j2])?;
                            q2 = q2.max(r.residual);
                        }
                    }
                }
                let inputs = format!("genus {g}, k in {{-2..2}}^{g}");
                rep.below("P1'", inputs.clone(), q1, 1e-7);
                rep.below("P2'", inputs.clone(), q2, 1e-7);
                rep.below("P3'", inputs, q3, 1e-7);
            }
            Ok(())
        })();
        rep.absorb("classical", inputs, r);
    }
    rep
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

/// Conservation, separated equations of motion, Abel linearization and
/// commutativity of the flows for `n ≤ 4`.
pub fn dynamics() -> SuiteReport {
    let mut rep = SuiteReport::new("dynamics");
    for g in 1..=3 {
        let x = reference_point(g);
        let n = g + 1;
        let r = (|| -> Result<()> {
            let s = build_spectral(&conserved_poly(&build_monodromy(&x)))?;
            let per = period_matrix(&s)?;
            for l in 1..n {
                let inputs = format!("n={n}, flow {l}");
                let traj = hamiltonian_flow(&x, l, 1.5, 6, 1e-13)?;
                rep.below("conservation", inputs.clone(), traj.conservation_error(), 1e-9);
                let em = em_residual(&traj, 2e-3, 1e-13)?;
                rep.below("em residual", inputs.clone(), em.residual_h2, 1e-5);
                rep.above("em convergence order", inputs.clone(), em.order, 1.8);
                let long = hamiltonian_flow(&x, l, 6.0, 300, 1e-12)?;
                rep.below("Abel drift", inputs, abel_linearization(&s, &per, &long).drift, 1e-5);
            }
            let mut comm: f64 = 0.0;
            for a in 1..n {
                for b in a + 1..n {
                    let y1 = evolve(&evolve(&x, a, 0.7, 1e-13)?, b, -0.4, 1e-13)?;
                    let y2 = evolve(&evolve(&x, b, -0.4, 1e-13)?, a, 0.7, 1e-13)?;
                    comm = comm.max(max_diff(&y1.to_vec(), &y2.to_vec()));
                }
            }
            if n > 2 {
                rep.below("flow commutativity", format!("n={n}"), comm, 1e-7);
            }
            Ok(())
        })();
        rep.absorb("dynamics", format!("n={n}"), r);
    }
    rep
}

fn pde_row(rep: &mut SuiteReport, name: &str, inputs: String, r: Result<crate::dynamics::PdeResidualReport>) {
    match r {
        Ok(r) => {
            rep.below(name, inputs.clone(), r.residual, 1e-4);
            rep.above(&format!("{name} Richardson order"), inputs, r.convergence.order, 1.8);
        }
        Err(e) => rep.error(name, inputs, &e),
    }
}

/// Weierstrass forms at `n = 2`, the `Q` system at `n = 3` and the `C`
/// system at `n = 4`.
pub fn pde() -> SuiteReport {
    let mut rep = SuiteReport::new("pde");
    let r = (|| -> Result<()> {
        let x = reference_point(1);
        let s = build_spectral(&conserved_poly(&build_monodromy(&x)))?;
        let pts: Vec<_> = (0..4).map(|i| evolve(&x, 1, 0.4 * i as f64, 1e-13)).collect::<Result<_>>()?;
        for p in 0..=2 {
            let inp = PdeInputs { l_poly: None, g: None, p: Some(p) };
            pde_row(&mut rep, "wei", format!("n=2, p={p}"), pde_residual(&s, PdeKind::Wei, &inp, &pts, 0.02, 1e-13));
        }
        let x = reference_point(2);
        let s = build_spectral(&conserved_poly(&build_monodromy(&x)))?;
        let pts: Vec<_> = (0..3).map(|i| evolve(&x, 1, 0.5 * i as f64, 1e-13)).collect::<Result<_>>()?;
        let g = MPoly::var(1, 0);
        let inp = PdeInputs { l_poly: None, g: Some(&g * &g), p: None };
        pde_row(&mut rep, "Q", "n=3, G=b1^2".into(), pde_residual(&s, PdeKind::Q, &inp, &pts, 0.02, 1e-13));
        let x = reference_point(3);
        let s = build_spectral(&conserved_poly(&build_monodromy(&x)))?;
        let pts: Vec<_> = (0..3).map(|i| evolve(&x, 1, 0.5 * i as f64, 1e-13)).collect::<Result<_>>()?;
        let inp = PdeInputs { l_poly: None, g: Some(MPoly::constant(1, 1.0)), p: None };
        pde_row(&mut rep, "C", "n=4, G=1".into(), pde_residual(&s, PdeKind::C, &inp, &pts, 0.02, 1e-13));
        Ok(())
    })();
    rep.absorb("pde", String::new(), r);
    rep
}

/// Largest coefficient difference of two series, as a float.
pub fn series_distance(a: &QSeries, b: &QSeries) -> f64 {
    let d = a - b;
    d.coeffs()
        .iter()
        .map(|c| num_traits::ToPrimitive::to_f64(&num_traits::Signed::abs(c)).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

/// Exact agreement of the three character forms, and the printed
/// two-site series.
pub fn characters(order: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("characters");
    for n in 2..=6 {
        let inputs = format!("n={n}, order {order}");
        let r = (|| -> Result<()> {
            let a = character_product(n, order)?.chi;
            let b = character_binomial(n, order)?.chi;
            let c = character_resolution(n, order)?.chi;
            rep.exact("product = binomial", inputs.clone(), series_distance(&a, &b));
            rep.exact("product = resolution", inputs.clone(), series_distance(&a, &c));
            if n == 2 {
                let p = printed_two_site(order);
                rep.exact("n=2 equals (1+q^2)/[2]!", inputs.clone(), series_distance(&a, &p));
            }
            Ok(())
        })();
        rep.absorb("characters", inputs, r);
    }
    rep
}

fn random_cpoly(rng: &mut ChaCha8Rng, deg: usize) -> CPoly {
    CPoly::new((0..=deg).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

fn quantum_at(rep: &mut SuiteReport, hbar: f64, levels: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let qs: Vec<QFunction> = solve_states(hbar, levels)?;
    let mut bax: f64 = 0.0;
    for q in &qs {
        bax = bax.max(baxter_residual(q)?);
    }
    let inputs = format!("hbar={hbar}, {levels} levels");
    rep.below("Baxter TQ", inputs.clone(), bax, 1e-6);
    let norms: Vec<f64> = qs.iter().map(norm).collect::<Result<_>>()?;
    let (mut orth, mut p1, mut neg, mut cs): (f64, f64, f64, f64) = (0.0, 0.0, f64::INFINITY, 0.0);
    for i in 0..levels {
        for j in 0..levels {
            if i < j {
                let me = deformed_integral(&qs[i], &qs[j], &CPoly::one(), 1)?;
                orth = orth.max(me.value().norm() / (norms[i] * norms[j]).sqrt());
            }
            if i <= j && j <= i + 2 {
                for d in 0..=3 {
                    let l = ExactPoly::monomial(d, CRat::one());
                    let r = quantum_prop_check(QuantumProp::P1pp, Some(&l), &qs[i], &qs[j], 1, None)?;
                    p1 = p1.max(r.residual);
                    let polys = build_quantum_identity_polys(
                        &exact_from_real(&qs[i].t),
                        &exact_from_real(&qs[j].t),
                        &crate::poly::c64_to_crat(Complex64::new(hbar, 0.0)),
                        &l,
                    )?;
                    let fake = random_cpoly(rng, polys.dq.degree());
                    let r = deformed_integral(&qs[i], &qs[j], &fake, 1)?;
                    neg = neg.min(r.value().norm() / r.scale);
                }
                cs = cs.max(contour_shift_check(&qs[i], &qs[j])?.residual);
            }
        }
    }
    rep.below("orthogonality", inputs.clone(), orth, 1e-6);
    rep.below("P1''", format!("{inputs}, k=1, deg L <= 3"), p1, 1e-6);
    rep.above("P1'' negative control", format!("{inputs}, random D of same degree"), neg, 1e-2);
    rep.below("contour shift", inputs, cs, 1e-7);
    Ok(())
}

/// Two-site quantum identities.
pub fn quantum(hbars: &[f64], levels: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("quantum");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &h in hbars {
        let r = quantum_at(&mut rep, h, levels, &mut rng);
        rep.absorb("quantum", format!("hbar={h}"), r);
    }
    rep
}

/// Level nearest the reference energy used for semiclassical comparisons.
pub const REFERENCE_ENERGY: f64 = 6.0;

/// Bohr–Sommerfeld convergence, level spacing, close-state matrix
/// elements and zero counts of `Q` in the classical zone.
pub fn quasiclassical() -> SuiteReport {
    let mut rep = SuiteReport::new("quasiclassical");
    let r = (|| -> Result<()> {
        let err = |h: f64| -> Result<f64> {
            let bs = bs_quantize(h, 3)?;
            let qs = solve_states(h, 4)?;
            Ok((bs.energy - qs[3].energy).abs())
        };
        let (e1, e2) = (err(0.5)?, err(0.25)?);
        rep.within("Bohr-Sommerfeld error ratio", format!("n_j=3, hbar 0.5 -> 0.25 ({e1:.3e}, {e2:.3e})"), e1 / e2, 2.5, 6.0);

        let qs = solve_states(0.1, 7)?;
        let f = RPoly::new(vec![0.0, 1.0]);
        let c = close_state_compare(&qs[5], &qs[6], 1, &f)?;
        rep.below("level spacing vs hbar A11", "hbar=0.1, m=5".into(), c.spacing_deviation, 0.05);

        let dev = |h: f64| -> Result<f64> {
            let qs = level_near(h, REFERENCE_ENERGY, 200)?;
            Ok(close_state_compare(&qs[0], &qs[1], 1, &f)?.deviation)
        };
        let (d1, d2) = (dev(0.2)?, dev(0.1)?);
        rep.above(
            "close-state deviation ratio",
            format!("E*={REFERENCE_ENERGY}, F=gamma, k=1, hbar 0.2 -> 0.1 ({d1:.3e}, {d2:.3e})"),
            d1 / d2,
            1.5,
        );

        let zeros = |h: f64| -> Result<usize> {
            let qs = level_near(h, REFERENCE_ENERGY, 200)?;
            Ok(zone_zero_match(&qs[0])?.exact.len())
        };
        let (z1, z2) = (zeros(0.15)?, zeros(0.075)?);
        rep.below(
            "zone zero count doubles",
            format!("E*={REFERENCE_ENERGY}, hbar 0.15 -> 0.075 ({z1}, {z2})"),
            (z2 as f64 - 2.0 * z1 as f64).abs(),
            1.5,
        );
        Ok(())
    })();
    rep.absorb("quasiclassical", String::new(), r);
    rep
}

fn random_rat(rng: &mut ChaCha8Rng) -> CRat {
    CRat::new(rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)), rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
}

fn random_exact(rng: &mut ChaCha8Rng, deg: usize, monic: bool) -> ExactPoly {
    let mut c: Vec<CRat> = (0..=deg).map(|_| random_rat(rng)).collect();
    if monic || c[deg].is_zero() {
        c[deg] = CRat::one();
    }
    ExactPoly::new(c)
}

/// Exact rational checks: `Δ∘Δ⁻¹ = id`, antisymmetry of `C`, and `S = 0`
/// at coinciding eigenvalues.
pub fn exactness(seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("exactness");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hbar = CRat::new(rat(3, 7), rat(0, 1));
    let mut bad = 0usize;
    for deg in 0..=12 {
        for _ in 0..4 {
            let l = random_exact(&mut rng, deg, false);
            if delta(&delta_inverse(&l, &hbar), &hbar) != l {
                bad += 1;
            }
        }
    }
    rep.exact("Delta(Delta^-1 L) = L", "deg L <= 12, hbar=3/7, 52 polynomials, failures".into(), bad as f64);
    let (mut anti, mut zero) = (0usize, 0usize);
    for deg in 2..=4 {
        for _ in 0..3 {
            let t = random_exact(&mut rng, deg, true);
            let tp = random_exact(&mut rng, deg, true);
            let l = random_exact(&mut rng, 2, false);
            match build_quantum_identity_polys(&t, &tp, &hbar, &l) {
                Ok(p) => {
                    if p.cq != -p.cq.swap() {
                        anti += 1;
                    }
                }
                Err(_) => anti += 1,
            }
            match build_quantum_identity_polys(&t, &t, &hbar, &l) {
                Ok(p) => {
                    if !p.sq.is_zero() {
                        zero += 1;
                    }
                }
                Err(_) => zero += 1,
            }
        }
    }
    rep.exact("C(x,y) = -C(y,x)", "deg t in 2..4, 9 pairs, failures".into(), anti as f64);
    rep.exact("S = 0 at t = t'", "deg t in 2..4, 9 curves, failures".into(), zero as f64);
    rep
}
