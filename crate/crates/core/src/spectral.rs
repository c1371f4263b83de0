//! Spectral curve `μ² = P(λ) = t(λ)² − 4`, its a-cycles, periods,
//! normalized differentials, Abel phases and classical actions.
//!
//! Every a-cycle integral is computed in the angle `u` of the substitution
//! `γ = c + h sin u` on the zone `[c − h, c + h]`. One turn of `u` traverses
//! both banks of the cut, `√P = h cos u √R` with `R = |∏_{other} (γ − λ_i)|`,
//! and `dγ/√P = du/√R` is smooth and periodic, so the trapezoid rule is
//! spectrally accurate.

use crate::error::{Result, TodaError};
use crate::lax::reality_check;
use crate::poly::{BiPoly, CPoly, MPoly, RPoly};
use crate::quad::{periodic_adaptive, periodic_nodes, tanh_sinh, PeriodicAntiderivative};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

const REL_TOL: f64 = 1e-14;
const N0: usize = 32;
const NMAX: usize = 1 << 14;

#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    pub t: RPoly,
    pub p: RPoly,
    pub branch: Vec<f64>,
    pub genus: usize,
    pub degenerate: bool,
}

/// Branch points of `t² − 4`; rejects degenerate curves.
pub fn build_spectral(t: &RPoly) -> Result<SpectralData> {
    build_spectral_opts(t, false, 1e-12)
}

pub fn build_spectral_opts(t: &RPoly, allow_degenerate: bool, tol: f64) -> Result<SpectralData> {
    let n = t.degree();
    if n < 2 {
        return Err(TodaError::InvalidInput("t must have degree >= 2".into()));
    }
    if (t.leading() - 1.0).abs() > 1e-12 {
        return Err(TodaError::InvalidInput("t must be monic".into()));
    }
    let rep = reality_check(t, tol);
    if rep.branch.is_empty() {
        return Err(TodaError::InvalidInput(
            "branch points of t^2 - 4 are not all real".into(),
        ));
    }
    if rep.degenerate && !allow_degenerate {
        let (i, _) = rep
            .branch
            .windows(2)
            .enumerate()
            .min_by(|a, b| (a.1[1] - a.1[0]).total_cmp(&(b.1[1] - b.1[0])))
            .expect("at least two branch points");
        return Err(TodaError::DegenerateCurve(rep.branch[i], rep.branch[i + 1]));
    }
    let p = &(t * t) - &RPoly::constant(4.0);
    Ok(SpectralData { t: t.clone(), p, branch: rep.branch, genus: n - 1, degenerate: rep.degenerate })
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.genus + 1
    }

    /// Zone `[λ_{2j}, λ_{2j+1}]`, `1 ≤ j ≤ genus`.
    pub fn zone(&self, j: usize) -> (f64, f64) {
        (self.branch[2 * j - 1], self.branch[2 * j])
    }

    /// Sign of `t` on zone `j` (`|t| ≥ 2` there).
    pub fn zone_sign(&self, j: usize) -> f64 {
        let (a, b) = self.zone(j);
        self.t.eval(&(0.5 * (a + b))).signum()
    }

    pub fn cycle(&self, j: usize) -> Cycle {
        assert!(j >= 1 && j <= self.genus, "cycle index out of range");
        let (a, b) = self.zone(j);
        let others = self
            .branch
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 2 * j - 1 && i != 2 * j)
            .map(|(_, &x)| x)
            .collect();
        Cycle { j, c: 0.5 * (a + b), h: 0.5 * (b - a), others }
    }

    /// `√P` real and positive inside zones, evaluated as a product of
    /// root factors.
    pub fn sqrt_p_zone(&self, g: f64) -> f64 {
        self.branch.iter().map(|l| g - l).product::<f64>().abs().sqrt()
    }
}

/// Angular parametrization of one a-cycle.
#[derive(Clone, Debug)]
pub struct Cycle {
    pub j: usize,
    pub c: f64,
    pub h: f64,
    others: Vec<f64>,
}

impl Cycle {
    pub fn gamma(&self, u: f64) -> f64 {
        self.c + self.h * u.sin()
    }

    /// `|∏_{other branch points} (γ − λ_i)|`
    pub fn r(&self, g: f64) -> f64 {
        self.others.iter().map(|l| g - l).product::<f64>().abs()
    }

    /// `1/√R` at angle `u`; this is `dγ/(√P du)`.
    pub fn weight(&self, u: f64) -> f64 {
        1.0 / self.r(self.gamma(u)).sqrt()
    }

    /// Signed `√P` on the cycle.
    pub fn sqrt_p(&self, u: f64) -> f64 {
        self.h * u.cos() * self.r(self.gamma(u)).sqrt()
    }

    /// Angle of the point `(γ, √P)` on this cycle, in `(−π, π]`.
    pub fn locate(&self, gamma: f64, sqrt_p: f64) -> f64 {
        let s = (gamma - self.c) / self.h;
        let c = sqrt_p / (self.h * self.r(gamma).sqrt());
        s.atan2(c)
    }
}

/// Samples of the cycle `j` on an `n`-point grid starting at `u = 0`
/// (zone midpoint, upper bank).
struct Grid {
    u: Vec<f64>,
    gamma: Vec<f64>,
    w: Vec<f64>,
}

impl Grid {
    fn new(cy: &Cycle, n: usize) -> Self {
        let u = periodic_nodes(n, 0.0);
        let gamma: Vec<f64> = u.iter().map(|&x| cy.gamma(x)).collect();
        let w = u.iter().map(|&x| cy.weight(x)).collect();
        Grid { u, gamma, w }
    }
}

/// Coefficients of the normalized differentials:
/// `ω_k = Σ_l A[k][l] γ^{l} dγ/√P` (0-based `l`).
#[derive(Clone, Debug, Serialize)]
pub struct PeriodData {
    /// `raw[l][j] = ∮_{a_{j+1}} γ^l dγ/√P`
    pub raw: Vec<Vec<f64>>,
    /// `A = 2π raw⁻¹`
    pub a: Vec<Vec<f64>>,
    pub actions: Vec<f64>,
    /// Grid size at which each cycle's period integrals converged.
    pub nodes: Vec<usize>,
}

impl PeriodData {
    pub fn genus(&self) -> usize {
        self.raw.len()
    }

    /// `(1/2π) ∮_{a_j} ω_k`, should be `δ_{jk}`.
    pub fn normalization(&self) -> Vec<Vec<f64>> {
        let g = self.genus();
        let mut out = vec![vec![0.0; g]; g];
        for k in 0..g {
            for j in 0..g {
                out[j][k] = (0..g).map(|l| self.a[k][l] * self.raw[l][j]).sum::<f64>() / TAU;
            }
        }
        out
    }

    /// `S_{t,k}` with `i Σ_j k_j ω_j = S_{t,k} dγ/√P`.
    pub fn s_poly(&self, k: &[i64]) -> CPoly {
        let g = self.genus();
        CPoly::new(
            (0..g)
                .map(|l| {
                    let s: f64 = (0..g).map(|j| k[j] as f64 * self.a[j][l]).sum();
                    Complex64::new(0.0, s)
                })
                .collect(),
        )
    }

    /// Real coefficients of `Σ_j k_j ω_j` in the basis `γ^l dγ/√P`.
    fn phase_coeffs(&self, k: &[i64]) -> Vec<f64> {
        let g = self.genus();
        (0..g).map(|l| (0..g).map(|j| k[j] as f64 * self.a[j][l]).sum()).collect()
    }
}

fn moments_on_grid(grid: &Grid, max_deg: usize, phase: Option<&[f64]>) -> (Vec<Complex64>, Vec<f64>) {
    let n = grid.u.len();
    let mut vals = vec![Complex64::new(0.0, 0.0); max_deg + 1];
    let mut abs = vec![0.0; max_deg + 1];
    let du = TAU / n as f64;
    for i in 0..n {
        let e = phase.map_or(Complex64::new(1.0, 0.0), |ph| Complex64::from_polar(1.0, ph[i]));
        let g = grid.gamma[i];
        let mut gm = 1.0;
        for m in 0..=max_deg {
            vals[m] += e * (gm * grid.w[i] * du);
            abs[m] += gm.abs() * grid.w[i] * du;
            gm *= g;
        }
    }
    (vals, abs)
}

/// Phase `Φ_k` at the grid nodes, measured from `u = 0`.
fn phase_on_grid(grid: &Grid, coeffs: &[f64]) -> Vec<f64> {
    let samples: Vec<f64> = grid
        .gamma
        .iter()
        .zip(&grid.w)
        .map(|(g, w)| RPoly::new(coeffs.to_vec()).eval(g) * w)
        .collect();
    let anti = PeriodicAntiderivative::new(&samples, 0.0, 0.0);
    grid.u.iter().map(|&u| anti.eval(u)).collect()
}

/// `∮_{a_j} γ^m e^{iΦ_k} dγ/√P` for `m = 0..=max_deg`, together with the
/// integrals of `|γ|^m/√P` used as magnitude scales.
#[derive(Clone, Debug)]
pub struct Moments {
    pub values: Vec<Complex64>,
    pub scale: Vec<f64>,
    pub nodes: usize,
}

impl Moments {
    /// `∮ L(γ) e^{iΦ} dγ/√P` and the matching magnitude scale.
    pub fn pair(&self, l: &CPoly) -> (Complex64, f64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for (m, c) in l.coeffs().iter().enumerate() {
            v += c * self.values[m];
            s += c.norm() * self.scale[m];
        }
        (v, s)
    }
}

pub fn cycle_moments(
    s: &SpectralData,
    per: Option<&PeriodData>,
    j: usize,
    max_deg: usize,
    k: Option<&[i64]>,
) -> Result<Moments> {
    let cy = s.cycle(j);
    let coeffs = match (k, per) {
        (Some(k), Some(per)) if k.iter().any(|&x| x != 0) => Some(per.phase_coeffs(k)),
        (Some(k), None) if k.iter().any(|&x| x != 0) => {
            return Err(TodaError::InvalidInput("phase needs period data".into()))
        }
        _ => None,
    };
    let ((values, scale), nodes) = periodic_adaptive(
        |n| {
            let grid = Grid::new(&cy, n);
            let ph = coeffs.as_ref().map(|c| phase_on_grid(&grid, c));
            moments_on_grid(&grid, max_deg, ph.as_deref())
        },
        |a, b| {
            a.0.iter()
                .zip(&b.0)
                .zip(&a.1)
                .map(|((x, y), sc)| (x - y).norm() / sc)
                .fold(0.0, f64::max)
        },
        N0,
        NMAX,
        REL_TOL * 10.0,
    )?;
    Ok(Moments { values, scale, nodes })
}

/// Single a-cycle integral `∮_{a_j} γ^m e^{iΦ_k(γ)} dγ/√P`.
pub fn cycle_integral(
    s: &SpectralData,
    per: Option<&PeriodData>,
    m: usize,
    j: usize,
    k: Option<&[i64]>,
) -> Result<Complex64> {
    Ok(cycle_moments(s, per, j, m, k)?.values[m])
}

/// Zone integral `2∫_{λ_{2j}}^{λ_{2j+1}} γ^m/√P dγ` by tanh-sinh; an
/// independent check of the trapezoid periods.
pub fn zone_integral_tanh_sinh(s: &SpectralData, m: usize, j: usize) -> Result<f64> {
    let (a, b) = s.zone(j);
    let cy = s.cycle(j);
    let v = tanh_sinh(
        |g, da, db| g.powi(m as i32) / (da * db * cy.r(g)).sqrt(),
        a,
        b,
        1e-14,
    )?;
    Ok(2.0 * v)
}

/// `J_j = ∮_{a_j} log Λ dγ`, computed as `2∫_zone arccosh(|t|/2) dγ`.
///
/// On the cycle `asinh(√P/2)` flips sign together with `dγ = h cos u du`,
/// so the angular integrand is smooth and positive.
pub fn classical_action(s: &SpectralData, j: usize) -> Result<f64> {
    let cy = s.cycle(j);
    let (v, _) = periodic_adaptive(
        |n| {
            periodic_nodes(n, 0.0)
                .iter()
                .map(|&u| (0.5 * cy.sqrt_p(u)).asinh() * cy.h * u.cos())
                .sum::<f64>()
                * TAU
                / n as f64
        },
        |a, b| (a - b).abs() / a.abs().max(1e-300),
        N0,
        NMAX,
        REL_TOL * 10.0,
    )?;
    Ok(v)
}

pub fn classical_actions(s: &SpectralData) -> Result<Vec<f64>> {
    (1..=s.genus).map(|j| classical_action(s, j)).collect()
}

pub fn period_matrix(s: &SpectralData) -> Result<PeriodData> {
    let g = s.genus;
    let per_cycle: Vec<Result<Moments>> =
        (1..=g).into_par_iter().map(|j| cycle_moments(s, None, j, g - 1, None)).collect();
    let mut raw = vec![vec![0.0; g]; g];
    let mut nodes = Vec::with_capacity(g);
    for (j, m) in per_cycle.into_iter().enumerate() {
        let m = m?;
        for l in 0..g {
            raw[l][j] = m.values[l].re;
        }
        nodes.push(m.nodes);
    }
    let rm = DMatrix::from_fn(g, g, |l, j| raw[l][j]);
    let inv = rm
        .try_inverse()
        .ok_or_else(|| TodaError::QuadratureFailure("singular period matrix".into()))?;
    let a = (0..g).map(|r| (0..g).map(|c| TAU * inv[(r, c)]).collect()).collect();
    Ok(PeriodData { raw, a, actions: classical_actions(s)?, nodes })
}

/// Antiderivative of `ω_k` along cycle `j` in the angle `u`, from `u = 0`.
pub fn omega_antiderivative(
    s: &SpectralData,
    per: &PeriodData,
    cycle: usize,
    k: usize,
) -> PeriodicAntiderivative {
    let cy = s.cycle(cycle);
    let n = per.nodes[cycle - 1].max(64);
    let grid = Grid::new(&cy, n);
    let coeffs = RPoly::new(per.a[k - 1].clone());
    let samples: Vec<f64> =
        grid.gamma.iter().zip(&grid.w).map(|(g, w)| coeffs.eval(g) * w).collect();
    PeriodicAntiderivative::new(&samples, 0.0, 0.0)
}

/// `D_t(L) = P L′ + ½ P′ L`
pub fn d_t(s: &SpectralData, l: &RPoly) -> RPoly {
    &(&s.p * &l.derivative()) + &(&s.p.derivative() * l).scale(&0.5)
}

/// `C_t(γ₁,γ₂) = R_t(γ₁,γ₂) − R_t(γ₂,γ₁)` with
/// `R_t = P′(γ₁)/(2(γ₁−γ₂)) − P(γ₁)/(γ₁−γ₂)²`, reduced to a polynomial.
pub fn c_t(s: &SpectralData) -> BiPoly<f64> {
    // R_t(x,y) − R_t(y,x) = N(x,y)/(x−y)² with
    // N = ½(x−y)(P′(x)+P′(y)) − (P(x) − P(y))
    let x = BiPoly::from_x(&RPoly::x());
    let y = BiPoly::from_y(&RPoly::x());
    let diff = &x - &y;
    let dp = s.p.derivative();
    let sum_dp = &BiPoly::from_x(&dp) + &BiPoly::from_y(&dp);
    let num = &(&diff * &sum_dp).scale(&0.5) - &(&BiPoly::from_x(&s.p) - &BiPoly::from_y(&s.p));
    // the numerator vanishes to second order on the diagonal; floating
    // remainders are rounding noise
    let (q, _) = num.div_rem_x_minus_y();
    q.div_rem_x_minus_y().0
}

/// `D_{t,k}(L) = D_t(L) − S_{t,k} ∫_0^γ L S_{t,k}`
pub fn d_tk(s: &SpectralData, per: &PeriodData, l: &RPoly, k: &[i64]) -> CPoly {
    let sk = per.s_poly(k);
    let lc = l.to_complex();
    &d_t(s, l).to_complex() - &(&sk * &(&lc * &sk).antiderivative())
}

/// `C_{t,k}` with the path integrals taken as exact polynomial
/// antiderivatives.
pub fn c_tk(s: &SpectralData, per: &PeriodData, k: &[i64]) -> BiPoly<Complex64> {
    let sk = per.s_poly(k);
    let ct = c_t(s).map(|c| Complex64::new(*c, 0.0));
    // W(x,y) = ∫_0^x (S(γ) − S(y))/(γ − y) dγ
    let w = BiPoly::divided_difference(&sk).antiderivative_x();
    let term = w.mul_x(&sk);
    &(&ct - &term) + &term.swap()
}

/// Which classical vanishing identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassicalProp {
    P1,
    P2,
    P1p,
    P2p,
    P3p,
}

/// Normalized residual `|∮ …| / ∮ |…|`.
#[derive(Clone, Debug, Serialize)]
pub struct PropResidual {
    pub value: f64,
    pub scale: f64,
    pub residual: f64,
}

fn residual(v: Complex64, scale: f64) -> PropResidual {
    PropResidual { value: v.norm(), scale, residual: v.norm() / scale.max(1e-300) }
}

fn pair2(b: &BiPoly<Complex64>, m1: &Moments, m2: &Moments) -> (Complex64, f64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut sc = 0.0;
    for i in 0..=b.deg_x() {
        for j in 0..=b.deg_y() {
            let c = b.coeff(i, j);
            v += c * m1.values[i] * m2.values[j];
            sc += c.norm() * m1.scale[i] * m2.scale[j];
        }
    }
    (v, sc)
}

/// Evaluate one classical identity.
///
/// `l` is required for `P1`/`P1p`, `k` for the primed kinds, and `cycles`
/// holds one index (single integrals) or two (double integrals).
pub fn prop_check_classical(
    s: &SpectralData,
    per: &PeriodData,
    kind: ClassicalProp,
    l: Option<&RPoly>,
    k: Option<&[i64]>,
    cycles: &[usize],
) -> Result<PropResidual> {
    let need_l = || l.ok_or_else(|| TodaError::InvalidInput("polynomial L required".into()));
    let need_k = || k.ok_or_else(|| TodaError::InvalidInput("k-vector required".into()));
    let j = *cycles
        .first()
        .ok_or_else(|| TodaError::InvalidInput("no cycle given".into()))?;
    match kind {
        ClassicalProp::P1 => {
            let poly = d_t(s, need_l()?).to_complex();
            let m = cycle_moments(s, None, j, poly.degree(), None)?;
            let (v, sc) = m.pair(&poly);
            Ok(residual(v, sc))
        }
        ClassicalProp::P1p => {
            let kk = need_k()?;
            let poly = d_tk(s, per, need_l()?, kk);
            let m = cycle_moments(s, Some(per), j, poly.degree(), Some(kk))?;
            let (v, sc) = m.pair(&poly);
            Ok(residual(v, sc))
        }
        ClassicalProp::P3p => {
            let kk = need_k()?;
            let poly = per.s_poly(kk);
            let m = cycle_moments(s, Some(per), j, poly.degree(), Some(kk))?;
            let (v, sc) = m.pair(&poly);
            Ok(residual(v, sc))
        }
        ClassicalProp::P2 | ClassicalProp::P2p => {
            let j2 = *cycles
                .get(1)
                .ok_or_else(|| TodaError::InvalidInput("two cycles required".into()))?;
            let (b, kk) = if kind == ClassicalProp::P2 {
                (c_t(s).map(|c| Complex64::new(*c, 0.0)), None)
            } else {
                let kk = need_k()?;
                (c_tk(s, per, kk), Some(kk))
            };
            let deg = b.deg_x().max(b.deg_y());
            let m1 = cycle_moments(s, Some(per), j, deg, kk)?;
            let m2 = cycle_moments(s, Some(per), j2, deg, kk)?;
            let (v, sc) = pair2(&b, &m1, &m2);
            Ok(residual(v, sc))
        }
    }
}

/// Normalized Fourier coefficient of a symmetric function of the
/// separated coordinates:
/// `∮…∮ ∏_{i<j}(γ_i − γ_j) F(γ) ∏ e^{iΦ_k(γ_j)}/√P(γ_j)`, variable `j` on
/// cycle `a_j`, divided by the same integral with `F = 1, k = 0`.
pub fn fourier_coefficient(
    s: &SpectralData,
    per: &PeriodData,
    f: &MPoly<f64>,
    k: &[i64],
) -> Result<Complex64> {
    let g = s.genus;
    if f.nvars() != g || k.len() != g {
        return Err(TodaError::InvalidInput("F and k must have genus-many variables".into()));
    }
    let v = vandermonde_desc(g);
    let num_poly = &v * f;
    let deg = num_poly.terms().keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
    let mom: Vec<Moments> = (1..=g)
        .into_par_iter()
        .map(|j| cycle_moments(s, Some(per), j, deg, Some(k)))
        .collect::<Result<_>>()?;
    let zero = vec![0i64; g];
    let mom0: Vec<Moments> = (1..=g)
        .into_par_iter()
        .map(|j| cycle_moments(s, Some(per), j, g, Some(&zero)))
        .collect::<Result<_>>()?;
    let contract = |p: &MPoly<f64>, ms: &[Moments]| -> Complex64 {
        p.terms()
            .iter()
            .map(|(e, c)| {
                e.iter().enumerate().fold(Complex64::new(*c, 0.0), |acc, (j, &ej)| {
                    acc * ms[j].values[ej as usize]
                })
            })
            .sum()
    };
    let num = contract(&num_poly, &mom);
    let den = contract(&v, &mom0);
    Ok(num / den)
}

/// `∏_{i<j} (γ_i − γ_j)`
fn vandermonde_desc(g: usize) -> MPoly<f64> {
    let mut v = MPoly::constant(g, 1.0);
    for i in 0..g {
        for j in i + 1..g {
            v = &v * &(&MPoly::var(g, i) - &MPoly::var(g, j));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn t2() -> SpectralData {
        build_spectral(&RPoly::new(vec![-3.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn genus_one_branch_points() {
        let s = t2();
        let s5 = 5f64.sqrt();
        assert_eq!(s.genus, 1);
        for (a, b) in s.branch.iter().zip([-s5, -1.0, 1.0, s5]) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(s.zone(1), (s.branch[1], s.branch[2]));
    }

    #[test]
    fn degenerate_rejected() {
        let e = build_spectral(&RPoly::new(vec![-2.0, 0.0, 1.0]));
        assert!(matches!(e, Err(TodaError::DegenerateCurve(..))));
    }

    #[test]
    fn genus_two_from_cubic() {
        let s = build_spectral(&RPoly::new(vec![0.0, -7.0, 0.0, 1.0])).unwrap();
        assert_eq!(s.branch.len(), 6);
        assert_eq!(s.genus, 2);
    }

    #[test]
    fn odd_moment_vanishes_on_symmetric_zone() {
        let s = t2();
        let v = cycle_integral(&s, None, 1, 1, None).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn period_agrees_with_tanh_sinh() {
        let s = t2();
        let a = cycle_integral(&s, None, 0, 1, None).unwrap().re;
        let b = zone_integral_tanh_sinh(&s, 0, 1).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() < 1e-10 * a, "{a} {b}");
    }

    #[test]
    fn genus_one_normalization() {
        let s = t2();
        let per = period_matrix(&s).unwrap();
        assert!((per.a[0][0] - TAU / per.raw[0][0]).abs() < 1e-14);
        assert!((per.normalization()[0][0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn action_is_positive_and_matches_zone_integral() {
        let s = t2();
        let j = classical_action(&s, 1).unwrap();
        let (a, b) = s.zone(1);
        let z = tanh_sinh(|g, _, _| (s.t.eval(&g).abs() / 2.0).acosh(), a, b, 1e-13).unwrap();
        assert!(j > 0.0);
        assert!((j - 2.0 * z).abs() < 1e-10);
    }

    #[test]
    fn c_t_is_antisymmetric_polynomial() {
        let s = t2();
        let c = c_t(&s);
        assert!(c.is_antisymmetric());
        // direct formula at a generic pair
        let (x, y) = (0.3, -0.7);
        let r = |a: f64, b: f64| {
            s.p.derivative().eval(&a) / (2.0 * (a - b)) - s.p.eval(&a) / ((a - b) * (a - b))
        };
        assert!((c.eval(&x, &y) - (r(x, y) - r(y, x))).abs() < 1e-12);
    }

    #[test]
    fn locate_inverts_parametrization() {
        let s = t2();
        let cy = s.cycle(1);
        for u in [-1.2, 0.3, 2.0, 3.0] {
            let back = cy.locate(cy.gamma(u), cy.sqrt_p(u));
            let d = (back - u).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-12, "{u} {back}");
        }
        let _ = PI;
    }

    fn t3() -> SpectralData {
        build_spectral(&RPoly::new(vec![0.0, -7.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn classical_props_genus_two() {
        let s = t3();
        let per = period_matrix(&s).unwrap();
        let nm = per.normalization();
        for j in 0..2 {
            for k in 0..2 {
                let d = if j == k { 1.0 } else { 0.0 };
                assert!((nm[j][k] - d).abs() < 1e-10);
            }
        }
        let l = RPoly::new(vec![0.3, -1.0, 0.5, 1.0]);
        for j in 1..=2 {
            let r = prop_check_classical(&s, &per, ClassicalProp::P1, Some(&l), None, &[j]).unwrap();
            assert!(r.residual < 1e-10, "P1 {r:?}");
        }
        let r = prop_check_classical(&s, &per, ClassicalProp::P2, None, None, &[1, 2]).unwrap();
        assert!(r.residual < 1e-10, "P2 {r:?}");
        for k in [[1i64, 0], [0, 1], [2, -1], [-2, 2]] {
            for j in 1..=2 {
                let r = prop_check_classical(&s, &per, ClassicalProp::P1p, Some(&l), Some(&k), &[j]).unwrap();
                assert!(r.residual < 1e-9, "P1p {k:?} {j} {r:?}");
                let r = prop_check_classical(&s, &per, ClassicalProp::P3p, None, Some(&k), &[j]).unwrap();
                assert!(r.residual < 1e-9, "P3p {k:?} {j} {r:?}");
            }
            for (a, b) in [(1, 2), (2, 1), (1, 1)] {
                let r = prop_check_classical(&s, &per, ClassicalProp::P2p, None, Some(&k), &[a, b]).unwrap();
                assert!(r.residual < 1e-9, "P2p {k:?} ({a},{b}) {r:?}");
            }
        }
    }
}
