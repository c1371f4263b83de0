//! Deformed Abelian integrals of two-site Baxter functions, the quantum
//! vanishing identities and their quasi-classical limit.
//!
//! For `n = 2` the weight `e^{−2πγk/ħ}` with `k = 1` cancels the
//! exponential factors of `Q(γ) = e^{πγ/ħ}φ(γ)`, so every integral is
//! evaluated as `∫ φ φ′ F dγ` on the real line, where the integrand decays
//! like `e^{−2π|γ|/ħ}`.

use crate::error::{Result, TodaError};
use crate::poly::{crat_to_c64, delta_inverse, BiPoly, CPoly, CRat, ExactPoly, MPoly, RPoly};
use crate::quad::{brent, gauss_legendre};
use crate::quantum::{solve_states, QFunction};
use crate::spectral::{build_spectral, fourier_coefficient, period_matrix};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;
use std::f64::consts::PI;

/// Agreement required between the two truncation windows.
pub const WINDOW_TOL: f64 = 1e-8;
const GL_NODES: usize = 20;

/// `D(L)_{t,t′}`, `C_{t,t′}` and `S_{t,t′}` over the complex rationals.
#[derive(Clone, Debug)]
pub struct QuantumIdentityPolys {
    pub dq: ExactPoly,
    pub cq: BiPoly<CRat>,
    pub sq: ExactPoly,
}

fn shift(p: &ExactPoly, s: &CRat) -> ExactPoly {
    p.shift(s)
}

/// Exact identity polynomials for eigenvalues `t`, `t′` (monic, equal
/// degree) and the density `L`.
pub fn build_quantum_identity_polys(
    t: &ExactPoly,
    tp: &ExactPoly,
    hbar: &CRat,
    l: &ExactPoly,
) -> Result<QuantumIdentityPolys> {
    if t.degree() != tp.degree() || t.degree() < 1 {
        return Err(TodaError::InvalidInput("t and t' must have equal positive degree".into()));
    }
    if !t.leading().is_one() || !tp.leading().is_one() {
        return Err(TodaError::InvalidInput("t and t' must be monic".into()));
    }
    let ih = CRat::i() * hbar.clone();
    let f = delta_inverse(&(l * t), hbar);
    let g = delta_inverse(&(l * tp), hbar);
    let m_ih = -ih.clone();
    let dq = &(&(&(t * &f) + &(tp * &g)) - &(t * &shift(&g, &m_ih)))
        - &(&(&(tp * &shift(&f, &m_ih)) + &(&(l * t) * tp)) - &(&shift(l, &ih) - &shift(l, &m_ih)));

    let u = BiPoly::divided_difference(t);
    let up = BiPoly::divided_difference(tp);
    let du = u.delta_inverse_x(hbar);
    let dup = up.delta_inverse_x(hbar);
    let half = CRat::new(num_rational::BigRational::new(1.into(), 2.into()), Zero::zero());
    let tp_diff = &BiPoly::from_x(tp) - &BiPoly::from_y(tp);
    let r = &(&(&du.mul_x(t) + &dup.mul_x(tp)) - &dup.shift_x(&m_ih).mul_x(t))
        - &(&du.shift_x(&m_ih).mul_x(tp) + &(&u * &tp_diff).scale(&half));
    let cq = &r - &r.swap();
    Ok(QuantumIdentityPolys { dq, cq, sq: t - tp })
}

/// Exact image of a real polynomial with double coefficients.
pub fn exact_from_real(p: &RPoly) -> ExactPoly {
    p.map(|c| crate::poly::c64_to_crat(Complex64::new(*c, 0.0)))
}

/// `b_j = (−1)^j e_j(γ_1, …, γ_{n−1})`, from `B ∝ ∏(λ − γ_j)`.
pub fn sov_symmetric(nvars: usize, j: usize) -> MPoly<f64> {
    let e = MPoly::<f64>::elementary(nvars, j);
    if j.is_multiple_of(2) {
        e
    } else {
        e.scale(&-1.0)
    }
}

/// Samples of `φ φ′` on composite Gauss–Legendre nodes over a window.
#[derive(Clone, Debug)]
pub struct PairProfile {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub abs_values: Vec<f64>,
}

fn panel_width(a: &QFunction, b: &QFunction) -> f64 {
    let rmax = a.psi_samples().0.last().copied().unwrap_or(1.0).max(b.psi_samples().0.last().copied().unwrap_or(1.0));
    a.hbar * 2.0 / rmax
}

fn gl_window(lo: f64, hi: f64, panel: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(GL_NODES);
    let np = ((hi - lo) / panel).ceil().max(1.0) as usize;
    let pw = (hi - lo) / np as f64;
    let mut nodes = Vec::with_capacity(np * GL_NODES);
    let mut weights = Vec::with_capacity(np * GL_NODES);
    for p in 0..np {
        let a = lo + p as f64 * pw;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(a + 0.5 * pw * (xi + 1.0));
            weights.push(0.5 * pw * wi);
        }
    }
    (nodes, weights)
}

fn check_pair(a: &QFunction, b: &QFunction) -> Result<()> {
    if (a.hbar - b.hbar).abs() > 1e-15 * a.hbar {
        return Err(TodaError::InvalidInput("Q-functions must share hbar".into()));
    }
    Ok(())
}

/// Half width beyond which `|φ φ′|` has dropped below `1e−22` of its
/// peak; the turning-point layer is wider than `ħ` at small `ħ`.
fn window_half(a: &QFunction, b: &QFunction) -> f64 {
    let hb = a.hbar;
    let p = a.classical_momentum().max(b.classical_momentum());
    let peak = (0..=64)
        .map(|i| {
            let g = p * i as f64 / 64.0;
            (a.phi_re(g) * b.phi_re(g)).abs()
        })
        .fold(0.0f64, f64::max);
    let mut half = p + 7.0 * hb;
    let edge = |x: f64| (a.phi_re(x) * b.phi_re(x)).abs() * (1.0 + x * x).powi(4);
    while edge(half).max(edge(-half)) > 1e-22 * peak && half < p + 1.0 + 40.0 * hb {
        half += 0.5 * hb;
    }
    half
}

/// Window `|γ| ≤ half + extra·ħ` around the classical momenta.
pub fn pair_profile(a: &QFunction, b: &QFunction, extra: f64) -> Result<PairProfile> {
    check_pair(a, b)?;
    let half = window_half(a, b) + extra * a.hbar;
    let (nodes, weights) = gl_window(-half, half, panel_width(a, b));
    let values: Vec<f64> = nodes.iter().map(|&g| a.phi_re(g) * b.phi_re(g)).collect();
    let abs_values = values.iter().map(|v| v.abs()).collect();
    Ok(PairProfile { nodes, weights, values, abs_values })
}

impl PairProfile {
    /// `(∫ φφ′ F, ∫ |φφ′| |F|)`
    pub fn integrate(&self, f: &CPoly) -> (Complex64, f64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for i in 0..self.nodes.len() {
            let fv = f.eval_re(self.nodes[i]);
            v += fv * self.values[i] * self.weights[i];
            s += fv.norm() * self.abs_values[i] * self.weights[i];
        }
        (v, s)
    }

    /// Moments `∫ φφ′ γ^m`, `m ≤ deg`.
    pub fn moments(&self, deg: usize) -> Vec<f64> {
        let mut out = vec![0.0; deg + 1];
        for i in 0..self.nodes.len() {
            let mut p = self.values[i] * self.weights[i];
            for o in out.iter_mut() {
                *o += p;
                p *= self.nodes[i];
            }
        }
        out
    }
}

/// `∫ Q Q′ F e^{−2πγk/ħ} dγ` for `n = 2`, `k = 1`, checked on two windows.
#[derive(Clone, Debug, Serialize)]
pub struct DeformedIntegral {
    pub re: f64,
    pub im: f64,
    pub scale: f64,
    pub window_change: f64,
}

impl DeformedIntegral {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn residual(&self) -> f64 {
        self.value().norm() / self.scale
    }
}

pub fn deformed_integral(a: &QFunction, b: &QFunction, f: &CPoly, k: i64) -> Result<DeformedIntegral> {
    if k != 1 {
        return Err(TodaError::InvalidInput("two-site integrals converge only for k = 1".into()));
    }
    let p1 = pair_profile(a, b, 0.0)?;
    let p2 = pair_profile(a, b, 2.0)?;
    let (v1, _) = p1.integrate(f);
    let (v2, s2) = p2.integrate(f);
    let change = (v1 - v2).norm() / s2.max(1e-300);
    if change > WINDOW_TOL {
        return Err(TodaError::ConvergenceFailure(format!("window change {change:e}")));
    }
    Ok(DeformedIntegral { re: v2.re, im: v2.im, scale: s2, window_change: change })
}

/// `⟨t|O_F|t′⟩` for a symmetric `F` of the separated variables (`n = 2`).
pub fn matrix_element(a: &QFunction, b: &QFunction, f: &MPoly<f64>) -> Result<DeformedIntegral> {
    if f.nvars() != 1 {
        return Err(TodaError::InvalidInput("matrix elements are available for n = 2 only".into()));
    }
    let deg = f.terms().keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let mut c = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (e, v) in f.terms() {
        c[e[0] as usize] += v;
    }
    deformed_integral(a, b, &CPoly::new(c), 1)
}

/// `⟨t|t⟩`
pub fn norm(a: &QFunction) -> Result<f64> {
    Ok(deformed_integral(a, a, &CPoly::one(), 1)?.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuantumProp {
    P1pp,
    P2pp,
    P3pp,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantumPropResidual {
    pub kind: QuantumProp,
    pub value: f64,
    pub scale: f64,
    pub residual: f64,
}

fn exact_hbar(hbar: f64) -> CRat {
    crate::poly::c64_to_crat(Complex64::new(hbar, 0.0))
}

fn identity_polys(a: &QFunction, b: &QFunction, l: &ExactPoly) -> Result<QuantumIdentityPolys> {
    build_quantum_identity_polys(&exact_from_real(&a.t), &exact_from_real(&b.t), &exact_hbar(a.hbar), l)
}

/// Normalized residual of a quantum vanishing identity at `n = 2`.
/// `k`, `l` index the weights `e^{−2πγk/ħ}`; only `k = l = 1` converges.
pub fn quantum_prop_check(
    kind: QuantumProp,
    l_poly: Option<&ExactPoly>,
    a: &QFunction,
    b: &QFunction,
    k: i64,
    l: Option<i64>,
) -> Result<QuantumPropResidual> {
    let one = ExactPoly::one();
    let lp = l_poly.unwrap_or(&one);
    let polys = identity_polys(a, b, lp)?;
    let (value, scale) = match kind {
        QuantumProp::P1pp => {
            let d = deformed_integral(a, b, &polys.dq.to_c64(), k)?;
            (d.value().norm(), d.scale)
        }
        QuantumProp::P3pp => {
            let d = deformed_integral(a, b, &polys.sq.to_c64(), k)?;
            (d.value().norm(), d.scale)
        }
        QuantumProp::P2pp => {
            if k != 1 || l.unwrap_or(1) != 1 {
                return Err(TodaError::InvalidInput("two-site integrals converge only for k = l = 1".into()));
            }
            let p = pair_profile(a, b, 2.0)?;
            let c = &polys.cq;
            let mom = p.moments(c.deg_x().max(c.deg_y()));
            let amom: Vec<f64> = {
                let mut out = vec![0.0; mom.len()];
                for i in 0..p.nodes.len() {
                    let mut q = p.abs_values[i] * p.weights[i];
                    for o in out.iter_mut() {
                        *o += q;
                        q *= p.nodes[i].abs();
                    }
                }
                out
            };
            let mut v = Complex64::new(0.0, 0.0);
            let mut s = 0.0;
            for i in 0..=c.deg_x() {
                for j in 0..=c.deg_y() {
                    let cij = crat_to_c64(&c.coeff(i, j));
                    v += cij * mom[i] * mom[j];
                    s += cij.norm() * amom[i] * amom[j];
                }
            }
            (v.norm(), s.max(1e-300))
        }
    };
    Ok(QuantumPropResidual { kind, value, scale, residual: value / scale })
}

/// `∫ Q(γ+iħ)Q′(γ)w` and `∫ Q(γ)Q′(γ−iħ)w` for `w = e^{−2πγ/ħ}`, with
/// their relative difference.
#[derive(Clone, Debug, Serialize)]
pub struct ContourShiftReport {
    pub upper: [f64; 2],
    pub lower: [f64; 2],
    pub residual: f64,
}

pub fn contour_shift_check(a: &QFunction, b: &QFunction) -> Result<ContourShiftReport> {
    check_pair(a, b)?;
    let ih = Complex64::new(0.0, a.hbar);
    let half = window_half(a, b) + 2.0 * a.hbar;
    let (nodes, weights) = gl_window(-half, half, panel_width(a, b));
    let (mut up, mut lo, mut s) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    for (&g, &w) in nodes.iter().zip(&weights) {
        let z = Complex64::new(g, 0.0);
        // e^{π(γ±iħ)/ħ} = −e^{πγ/ħ}
        let u = -a.phi(z + ih) * b.phi(z);
        let d = -a.phi(z) * b.phi(z - ih);
        up += u * w;
        lo += d * w;
        s += u.norm().max(d.norm()) * w;
    }
    Ok(ContourShiftReport { upper: [up.re, up.im], lower: [lo.re, lo.im], residual: (up - lo).norm() / s })
}

/// Classical phase data of the two-site curve `t = λ² − E` on its zone.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiClassicalState {
    pub energy: f64,
    pub hbar: f64,
    pub zone: (f64, f64),
    /// `J₁ / (2πħ) − 1/2`, the Bohr–Sommerfeld quantum number.
    pub bs_number: f64,
    pub grid: Vec<f64>,
    /// `e^{−πγ/ħ} Q_qc(γ) = 2|P|^{−1/4} cos(S(γ)/ħ − π/4)`
    pub q_qc: Vec<f64>,
    pub predicted_zeros: Vec<f64>,
}

/// `S(γ) = ∫_{λ₂}^{γ} arccosh(|t|/2) dγ′`, through `γ = c + h sin u`.
fn zone_phase(e: f64, a: f64, b: f64, g: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let u1 = ((g - c) / h).clamp(-1.0, 1.0).asin();
    let (x, w) = gauss_legendre(40);
    let lo = -0.5 * PI;
    let half = 0.5 * (u1 - lo);
    let mut acc = 0.0;
    for (xi, wi) in x.iter().zip(&w) {
        let u = lo + half * (xi + 1.0);
        let gg = c + h * u.sin();
        let tv = (e - gg * gg).abs();
        acc += wi * (0.5 * tv).max(1.0).acosh() * h * u.cos();
    }
    acc * half
}

pub fn quasiclassical_q(energy: f64, hbar: f64, samples: usize) -> Result<QuasiClassicalState> {
    if energy <= 2.0 {
        return Err(TodaError::InvalidInput("energy must exceed the potential minimum".into()));
    }
    let s = build_spectral(&RPoly::new(vec![-energy, 0.0, 1.0]))?;
    let (a, b) = s.zone(1);
    let total = zone_phase(energy, a, b, b);
    let bs_number = 2.0 * total / (2.0 * PI * hbar) - 0.5;
    let grid: Vec<f64> = (1..samples).map(|i| a + (b - a) * i as f64 / samples as f64).collect();
    let q_qc = grid
        .iter()
        .map(|&g| {
            let p = s.p.eval(&g).abs();
            2.0 * p.powf(-0.25) * (zone_phase(energy, a, b, g) / hbar - 0.25 * PI).cos()
        })
        .collect();
    let mut predicted_zeros = Vec::new();
    let mut j = 0;
    loop {
        let target = PI * hbar * (j as f64 + 0.75);
        if target >= total {
            break;
        }
        let z = brent(|g| zone_phase(energy, a, b, g) - target, a, b, 1e-13)?;
        predicted_zeros.push(z);
        j += 1;
    }
    Ok(QuasiClassicalState { energy, hbar, zone: (a, b), bs_number, grid, q_qc, predicted_zeros })
}

/// Real zeros of `Q` inside `[a, b]` by sign changes and Brent refinement.
pub fn q_zeros_in(q: &QFunction, a: f64, b: f64) -> Result<Vec<f64>> {
    let n = (((b - a) / q.hbar) * 40.0).ceil().max(200.0) as usize;
    let xs: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| q.phi_re(x)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        if ys[i] == 0.0 {
            out.push(xs[i]);
        } else if ys[i] * ys[i + 1] < 0.0 {
            out.push(brent(|x| q.phi_re(x), xs[i], xs[i + 1], 1e-13)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ZoneZeroReport {
    pub exact: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Largest `|exact − predicted| / local spacing` over matched zeros.
    pub worst_offset: f64,
}

/// Match the exact zeros inside the zone with the phase-condition zeros of
/// the curve at the exact energy.
pub fn zone_zero_match(q: &QFunction) -> Result<ZoneZeroReport> {
    let qc = quasiclassical_q(q.energy, q.hbar, 2)?;
    let exact = q_zeros_in(q, qc.zone.0, qc.zone.1)?;
    let pred = qc.predicted_zeros.clone();
    let mut worst = 0.0f64;
    for (i, z) in exact.iter().enumerate() {
        let (j, d) = pred
            .iter()
            .enumerate()
            .map(|(j, p)| (j, (p - z).abs()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((0, f64::INFINITY));
        let spacing = if pred.len() > 1 {
            let lo = if j > 0 { pred[j] - pred[j - 1] } else { pred[1] - pred[0] };
            let hi = if j + 1 < pred.len() { pred[j + 1] - pred[j] } else { lo };
            0.5 * (lo + hi)
        } else if exact.len() > 1 {
            let k = i.min(exact.len() - 2);
            exact[k + 1] - exact[k]
        } else {
            qc.zone.1 - qc.zone.0
        };
        worst = worst.max(d / spacing);
    }
    Ok(ZoneZeroReport { exact, predicted: pred, worst_offset: worst })
}

/// Level whose energy is closest to `e_star`, among the first `max_levels`.
pub fn level_near(hbar: f64, e_star: f64, max_levels: usize) -> Result<Vec<QFunction>> {
    let qs = solve_states(hbar, max_levels)?;
    let m = qs
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1.energy - e_star).abs().total_cmp(&(y.1.energy - e_star).abs()))
        .map(|(m, _)| m)
        .ok_or_else(|| TodaError::Internal("empty spectrum".into()))?;
    if m + 1 >= qs.len() {
        return Err(TodaError::InvalidInput(format!("no level above E = {e_star} within {max_levels} levels")));
    }
    Ok(qs.into_iter().skip(m).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CloseStateReport {
    pub hbar: f64,
    pub level: usize,
    pub k: usize,
    pub quantum: f64,
    pub classical: f64,
    pub deviation: f64,
    pub spacing: f64,
    pub spacing_classical: f64,
    pub spacing_deviation: f64,
}

/// Normalized matrix element `⟨m|F|m+k⟩` against the classical Fourier
/// coefficient of `F` at mode `k` on the curve of level `m`.
pub fn close_state_compare(a: &QFunction, b: &QFunction, k: usize, f: &RPoly) -> Result<CloseStateReport> {
    let mut fm = MPoly::<f64>::zero(1);
    for (i, c) in f.coeffs().iter().enumerate() {
        fm.add_term(vec![i as u32], *c);
    }
    let me = matrix_element(a, b, &fm)?.value();
    let quantum = me.norm() / (norm(a)? * norm(b)?).sqrt();
    let s = build_spectral(&a.t)?;
    let per = period_matrix(&s)?;
    let classical = fourier_coefficient(&s, &per, &fm, &[k as i64])?.norm();
    let spacing = (b.t.coeff(0) - a.t.coeff(0)).abs();
    let spacing_classical = a.hbar * k as f64 * per.a[0][0].abs();
    Ok(CloseStateReport {
        hbar: a.hbar,
        level: a.level,
        k,
        quantum,
        classical,
        deviation: (quantum - classical).abs() / classical.max(1e-300),
        spacing,
        spacing_classical,
        spacing_deviation: (spacing - spacing_classical).abs() / spacing_classical,
    })
}

/// `(t − t′)/ħ` for neighbouring states against the classical `S_{t,k}`.
#[derive(Clone, Debug, Serialize)]
pub struct DeformationStep {
    pub hbar: f64,
    pub level: usize,
    pub quantum: Vec<f64>,
    pub classical: Vec<f64>,
    pub relative_error: f64,
}

/// The classical `S_{t,k}` carries a factor `i` relative to `(t − t′)/ħ`;
/// the comparison is between `(t − t′)/ħ` and `−i·S_{t,k}`.
pub fn deformation_step(a: &QFunction, b: &QFunction, k: i64) -> Result<DeformationStep> {
    let sq = &b.t - &a.t;
    let quantum: Vec<f64> = (0..a.t.degree()).map(|i| sq.coeff(i) / a.hbar).collect();
    let s = build_spectral(&a.t)?;
    let per = period_matrix(&s)?;
    let sc = per.s_poly(&[k]);
    let classical: Vec<f64> = (0..a.t.degree()).map(|i| (sc.coeff(i) * Complex64::new(0.0, -1.0)).re).collect();
    let num: f64 = quantum.iter().zip(&classical).map(|(q, c)| (q.abs() - c.abs()).powi(2)).sum::<f64>().sqrt();
    let den: f64 = classical.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(DeformationStep { hbar: a.hbar, level: a.level, quantum, classical, relative_error: num / den })
}
