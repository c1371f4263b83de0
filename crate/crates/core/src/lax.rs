//! Lax matrix, monodromy and separated coordinates of the periodic chain.

use crate::error::{Result, TodaError};
use crate::poly::RPoly;
use crate::roots::{complex_roots, real_roots};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Canonical coordinates of an `n`-site chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl PhasePoint {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let x = PhasePoint { p, q };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p.len() != self.q.len() {
            return Err(TodaError::InvalidInput(format!(
                "p has {} entries, q has {}",
                self.p.len(),
                self.q.len()
            )));
        }
        if self.p.len() < 2 {
            return Err(TodaError::InvalidInput("need n >= 2 sites".into()));
        }
        if self.p.iter().chain(&self.q).any(|v| !v.is_finite()) {
            return Err(TodaError::InvalidInput("non-finite coordinate".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn total_momentum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `Σ p²/2 + e^{q_{j+1} − q_j}` with `q_{n+1} = q_1`.
    pub fn hamiltonian(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|j| 0.5 * self.p[j] * self.p[j] + (self.q[(j + 1) % n] - self.q[j]).exp())
            .sum()
    }

    /// Flat state vector `(p_1..p_n, q_1..q_n)`.
    pub fn to_vec(&self) -> Vec<f64> {
        self.p.iter().chain(&self.q).copied().collect()
    }

    pub fn from_slice(z: &[f64]) -> Self {
        let n = z.len() / 2;
        PhasePoint { p: z[..n].to_vec(), q: z[n..].to_vec() }
    }
}

/// Scalars the monodromy product can be evaluated over.
pub(crate) trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    fn exp(self) -> Self;
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

/// Forward-mode dual number `v + d ε`, `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Add for Dual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { v: self.v + o.v, d: self.d + o.d }
    }
}

impl Sub for Dual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { v: self.v - o.v, d: self.d - o.d }
    }
}

impl Mul for Dual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual { v: self.v * o.v, d: self.v * o.d + self.d * o.v }
    }
}

impl Neg for Dual {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { v: -self.v, d: -self.d }
    }
}

impl Scalar for Dual {
    fn cst(v: f64) -> Self {
        Dual { v, d: 0.0 }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual { v: e, d: e * self.d }
    }
}

type Entry<S> = Vec<S>;

fn lin_mul<S: Scalar>(a: &Entry<S>, p: S) -> Entry<S> {
    // (λ − p)·a
    let mut out = vec![S::cst(0.0); a.len() + 1];
    for (k, &c) in a.iter().enumerate() {
        out[k + 1] = out[k + 1] + c;
        out[k] = out[k] - p * c;
    }
    out
}

fn add_scaled<S: Scalar>(mut a: Entry<S>, b: &Entry<S>, s: S) -> Entry<S> {
    if a.len() < b.len() {
        a.resize(b.len(), S::cst(0.0));
    }
    for (k, &c) in b.iter().enumerate() {
        a[k] = a[k] + s * c;
    }
    a
}

/// Entries `[A, B, C, D]` of `L_n ⋯ L_1` as coefficient vectors.
pub(crate) fn monodromy_entries<S: Scalar>(p: &[S], q: &[S]) -> [Entry<S>; 4] {
    let one = vec![S::cst(1.0)];
    let zero = vec![S::cst(0.0)];
    let (mut a, mut b, mut c, mut d) = (one.clone(), zero.clone(), zero, one);
    for (&pj, &qj) in p.iter().zip(q) {
        let e = qj.exp();
        let ei = (-qj).exp();
        let na = add_scaled(lin_mul(&a, pj), &c, e);
        let nb = add_scaled(lin_mul(&b, pj), &d, e);
        let nc: Entry<S> = a.iter().map(|&x| -(ei * x)).collect();
        let nd: Entry<S> = b.iter().map(|&x| -(ei * x)).collect();
        (a, b, c, d) = (na, nb, nc, nd);
    }
    [a, b, c, d]
}

/// Coefficients of `T(λ) = A + D`, index = power of `λ`.
pub(crate) fn trace_coeffs<S: Scalar>(p: &[S], q: &[S]) -> Vec<S> {
    let [a, _, _, d] = monodromy_entries(p, q);
    add_scaled(a, &d, S::cst(1.0))
}

/// Gradients of every trace coefficient: `grad[k][i]` is
/// `∂t^{(k)}/∂z_i` where `t^{(k)}` multiplies `λ^k` and `z = (p, q)`.
pub fn trace_gradients(x: &PhasePoint) -> Vec<Vec<f64>> {
    let n = x.n();
    let mut grad = vec![vec![0.0; 2 * n]; n + 1];
    for i in 0..2 * n {
        let seed = |j: usize, v: f64| Dual { v, d: if j == i { 1.0 } else { 0.0 } };
        let p: Vec<Dual> = x.p.iter().enumerate().map(|(j, &v)| seed(j, v)).collect();
        let q: Vec<Dual> = x.q.iter().enumerate().map(|(j, &v)| seed(n + j, v)).collect();
        for (k, c) in trace_coeffs(&p, &q).iter().enumerate() {
            grad[k][i] = c.d;
        }
    }
    grad
}

/// Polynomial entries of the monodromy matrix.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    pub a: RPoly,
    pub b: RPoly,
    pub c: RPoly,
    pub d: RPoly,
    pub n: usize,
    /// Leading coefficient of `B`.
    pub b_lead: f64,
    /// Coefficients of `det M(λ)`, constant term first.
    pub det_coeffs: Vec<f64>,
}

impl MonodromyData {
    /// `max_k |det_k − δ_{k0}|`, relative to the largest product coefficient.
    pub fn det_defect(&self) -> f64 {
        let scale = (&self.a * &self.d)
            .coeffs()
            .iter()
            .chain((&self.b * &self.c).coeffs())
            .fold(1.0f64, |m, c| m.max(c.abs()));
        self.det_coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (c - if k == 0 { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max)
            / scale
    }
}

pub fn build_monodromy(x: &PhasePoint) -> MonodromyData {
    let [a, b, c, d] = monodromy_entries(&x.p, &x.q);
    let (a, b, c, d) = (RPoly::new(a), RPoly::new(b), RPoly::new(c), RPoly::new(d));
    let det = &(&a * &d) - &(&b * &c);
    let mut det_coeffs = det.coeffs().to_vec();
    det_coeffs.resize(2 * x.n() - 1, 0.0);
    MonodromyData { b_lead: b.leading(), a, b, c, d, n: x.n(), det_coeffs }
}

/// `t(λ) = A(λ) + D(λ)`.
pub fn conserved_poly(m: &MonodromyData) -> RPoly {
    &m.a + &m.d
}

/// Separated coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct SovCoords {
    pub b: f64,
    pub gamma: Vec<f64>,
    pub lambda: Vec<f64>,
    pub a1: f64,
}

impl SovCoords {
    /// Coefficients of `∏(λ − γ_j)` below the leading one, highest first:
    /// `∏(λ − γ_j) = λ^{n−1} + b_1 λ^{n−2} + ⋯ + b_{n−1}`.
    pub fn b_coeffs(&self) -> Vec<f64> {
        let p = RPoly::from_roots(&self.gamma);
        let d = p.degree();
        (1..=d).map(|j| p.coeff(d - j)).collect()
    }
}

/// Zeros of `B` and `Λ_j = D(γ_j)`.
pub fn sov_coords(m: &MonodromyData, tol: f64) -> Result<SovCoords> {
    let gamma = real_roots(&m.b, tol)?;
    let lambda = gamma.iter().map(|g| m.d.eval(g)).collect();
    Ok(SovCoords { b: m.b_lead, gamma, lambda, a1: m.a.coeff(m.n - 1) })
}

/// Outcome of the reality conditions on a conserved polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct RealityReport {
    pub zeros_real: bool,
    pub maxima_ok: bool,
    pub minima_ok: bool,
    pub branch_real_simple: bool,
    pub degenerate: bool,
    /// Zeros of `t² − 4`, ascending (empty if some are complex).
    pub branch: Vec<f64>,
}

impl RealityReport {
    pub fn pass(&self) -> bool {
        self.zeros_real && self.maxima_ok && self.minima_ok && self.branch_real_simple
    }
}

pub fn reality_check(t: &RPoly, tol: f64) -> RealityReport {
    let zeros_real = complex_roots(t)
        .iter()
        .all(|z| z.im.abs() <= tol.sqrt() * z.norm().max(1.0));
    let dt = t.derivative();
    let ddt = dt.derivative();
    let (mut maxima_ok, mut minima_ok) = (true, true);
    for z in complex_roots(&dt) {
        if z.im.abs() > tol.sqrt() * z.norm().max(1.0) {
            // complex critical points: the real extrema condition cannot hold
            maxima_ok = false;
            minima_ok = false;
            continue;
        }
        let (v, curv) = (t.eval(&z.re), ddt.eval(&z.re));
        if curv < 0.0 && v < 2.0 - tol {
            maxima_ok = false;
        }
        if curv > 0.0 && v > -2.0 + tol {
            minima_ok = false;
        }
    }
    let two = RPoly::constant(2.0);
    let mut branch = Vec::new();
    let mut all_real = true;
    for s in [&(t - &two), &(t + &two)] {
        for z in complex_roots(s) {
            // double roots split into pairs ~sqrt(eps) off the axis
            if z.im.abs() > tol.sqrt() * z.norm().max(1.0) {
                all_real = false;
            }
            branch.push(z.re);
        }
    }
    branch.sort_by(|a, b| a.total_cmp(b));
    let min_gap = branch.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let scale = branch.iter().fold(1.0f64, |m, b| m.max(b.abs()));
    let degenerate = all_real && min_gap <= tol.sqrt() * scale;
    if !all_real {
        branch.clear();
    }
    RealityReport {
        zeros_real,
        maxima_ok,
        minima_ok,
        branch_real_simple: all_real && !degenerate,
        degenerate,
        branch,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(p: &[f64], q: &[f64]) -> PhasePoint {
        PhasePoint::new(p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn two_site_origin() {
        let m = build_monodromy(&pt(&[0.0, 0.0], &[0.0, 0.0]));
        assert_eq!(m.a.coeffs(), &[-1.0, 0.0, 1.0]);
        assert_eq!(m.b.coeffs(), &[0.0, 1.0]);
        assert_eq!(m.c.coeffs(), &[0.0, -1.0]);
        assert_eq!(m.d.coeffs(), &[-1.0]);
        let s = sov_coords(&m, 1e-10).unwrap();
        assert_eq!(s.gamma, vec![0.0]);
        assert_eq!(s.lambda, vec![-1.0]);
    }

    #[test]
    fn two_site_opposite_momenta() {
        let x = pt(&[1.0, -1.0], &[0.0, 0.0]);
        let m = build_monodromy(&x);
        assert_eq!(m.a.coeffs(), &[-2.0, 0.0, 1.0]);
        assert_eq!(m.b.coeffs(), &[1.0, 1.0]);
        assert_eq!(m.c.coeffs(), &[1.0, -1.0]);
        assert_eq!(m.d.coeffs(), &[-1.0]);
        let t = conserved_poly(&m);
        assert_eq!(t.coeffs(), &[-3.0, 0.0, 1.0]);
        assert_eq!(x.hamiltonian(), 3.0);
        let s = sov_coords(&m, 1e-10).unwrap();
        assert!((s.gamma[0] + 1.0).abs() < 1e-15);
        assert!((s.lambda[0] + 1.0).abs() < 1e-15);
        assert!((m.a.eval(&s.gamma[0]) * s.lambda[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn b_leading_coefficient_is_exp_q1() {
        let m = build_monodromy(&pt(&[0.1, 0.2, -0.3], &[0.7, -0.2, 0.4]));
        assert!((m.b_lead - 0.7f64.exp()).abs() < 1e-14);
        assert!(m.det_defect() < 1e-14);
    }

    #[test]
    fn dual_gradient_matches_differences() {
        let x = pt(&[0.3, -0.1, 0.5, -0.2], &[0.1, 0.4, -0.3, 0.2]);
        let g = trace_gradients(&x);
        let z = x.to_vec();
        let h = 1e-6;
        for i in 0..z.len() {
            let (mut zp, mut zm) = (z.clone(), z.clone());
            zp[i] += h;
            zm[i] -= h;
            let tp = conserved_poly(&build_monodromy(&PhasePoint::from_slice(&zp)));
            let tm = conserved_poly(&build_monodromy(&PhasePoint::from_slice(&zm)));
            for k in 0..=4 {
                let fd = (tp.coeff(k) - tm.coeff(k)) / (2.0 * h);
                assert!((fd - g[k][i]).abs() < 1e-7, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn reality_examples() {
        let r = reality_check(&RPoly::new(vec![-3.0, 0.0, 1.0]), 1e-12);
        assert!(r.pass());
        let s5 = 5f64.sqrt();
        for (a, b) in r.branch.iter().zip([-s5, -1.0, 1.0, s5]) {
            assert!((a - b).abs() < 1e-12);
        }
        let d = reality_check(&RPoly::new(vec![-2.0, 0.0, 1.0]), 1e-12);
        assert!(d.degenerate && !d.pass());
        let f = reality_check(&RPoly::new(vec![1.0, 0.0, 1.0]), 1e-12);
        assert!(!f.zeros_real && !f.pass());
    }
}
