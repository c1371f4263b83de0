//! Hamiltonian flows of the conserved quantities and the checks built on
//! them: separated equations of motion, Abel linearization, Fourier
//! coefficients and the second-order PDEs in the multi-times.
//!
//! Flow `l` (`1 ≤ l ≤ n−1`) is generated by `t_{l+1}`, the coefficient of
//! `λ^{n−l−1}` in `t(λ)`, with `∂_l F = {t_{l+1}, F}` and
//! `{f, g} = Σ ∂f/∂p ∂g/∂q − ∂f/∂q ∂g/∂p`.

use crate::error::{Result, TodaError};
use crate::lax::{build_monodromy, conserved_poly, sov_coords, trace_gradients, PhasePoint, SovCoords};
use crate::ode::{integrate, integrate_to};
use crate::poly::{MPoly, RPoly};
use crate::spectral::{c_t, d_t, omega_antiderivative, PeriodData, SpectralData};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

pub const DEFAULT_TOL: f64 = 1e-11;
const ROOT_TOL: f64 = 1e-8;

/// `√P(γ_j) = Λ_j − 1/Λ_j` is the branch carried by the dynamics.
pub fn sqrt_p_at(lambda: f64) -> f64 {
    lambda - 1.0 / lambda
}

fn flow_rhs(l: usize) -> impl Fn(&[f64]) -> Vec<f64> {
    move |z: &[f64]| {
        let x = PhasePoint::from_slice(z);
        let n = x.n();
        let g = &trace_gradients(&x)[n - l - 1];
        let mut out = vec![0.0; 2 * n];
        for i in 0..n {
            out[i] = -g[n + i];
            out[n + i] = g[i];
        }
        out
    }
}

fn check_flow(x: &PhasePoint, l: usize) -> Result<()> {
    x.validate()?;
    if l == 0 || l >= x.n() {
        return Err(TodaError::InvalidInput(format!("flow index {l} outside 1..{}", x.n() - 1)));
    }
    Ok(())
}

/// State after time `tau` along flow `l`.
pub fn evolve(x: &PhasePoint, l: usize, tau: f64, tol: f64) -> Result<PhasePoint> {
    check_flow(x, l)?;
    if tau == 0.0 {
        return Ok(x.clone());
    }
    Ok(PhasePoint::from_slice(&integrate(flow_rhs(l), &x.to_vec(), tau, tol)?))
}

/// State after the multi-time shift `taus[l−1]` along each flow `l`.
pub fn evolve_multi(x: &PhasePoint, taus: &[f64], tol: f64) -> Result<PhasePoint> {
    let mut y = x.clone();
    for (i, &tau) in taus.iter().enumerate() {
        y = evolve(&y, i + 1, tau, tol)?;
    }
    Ok(y)
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub flow: usize,
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    pub sov: Vec<SovCoords>,
    /// `t(λ)` coefficients at each sample, constant term first.
    pub t: Vec<Vec<f64>>,
}

impl Trajectory {
    /// `max_k max_τ |t_k(τ) − t_k(0)|`
    pub fn conservation_error(&self) -> f64 {
        let t0 = &self.t[0];
        self.t
            .iter()
            .flat_map(|t| t.iter().zip(t0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }

    /// Largest distance of any `γ_k` outside zone `k`.
    pub fn zone_violation(&self, s: &SpectralData) -> f64 {
        self.sov
            .iter()
            .flat_map(|c| {
                c.gamma.iter().enumerate().map(|(k, g)| {
                    let (a, b) = s.zone(k + 1);
                    (a - g).max(g - b).max(0.0)
                })
            })
            .fold(0.0, f64::max)
    }
}

/// Integrate flow `l` and sample `samples + 1` equally spaced points on
/// `[0, duration]`.
pub fn hamiltonian_flow(
    x0: &PhasePoint,
    l: usize,
    duration: f64,
    samples: usize,
    tol: f64,
) -> Result<Trajectory> {
    check_flow(x0, l)?;
    let samples = samples.max(1);
    let times: Vec<f64> = (0..=samples).map(|i| duration * i as f64 / samples as f64).collect();
    let states = if duration == 0.0 {
        vec![x0.to_vec(); times.len()]
    } else {
        let mut out = vec![x0.to_vec()];
        out.extend(integrate_to(flow_rhs(l), &x0.to_vec(), &times[1..], tol)?);
        out
    };
    let mut points = Vec::with_capacity(states.len());
    let mut sov = Vec::with_capacity(states.len());
    let mut t = Vec::with_capacity(states.len());
    for z in states {
        let x = PhasePoint::from_slice(&z);
        let m = build_monodromy(&x);
        t.push(conserved_poly(&m).coeffs().to_vec());
        sov.push(sov_coords(&m, ROOT_TOL)?);
        points.push(x);
    }
    Ok(Trajectory { flow: l, times, points, sov, t })
}

/// `∂_l γ_j` predicted by the separated equations of motion.
pub fn em_velocity(c: &SovCoords, l: usize) -> Vec<f64> {
    let g = &c.gamma;
    let n = g.len() + 1;
    (0..g.len())
        .map(|j| {
            let others: Vec<f64> = g.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
            let denom: f64 = others.iter().map(|x| g[j] - x).product();
            let num = RPoly::from_roots(&others);
            sqrt_p_at(c.lambda[j]) * num.coeff(n - l - 1) / denom
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub h: f64,
    pub residual_h: f64,
    pub residual_h2: f64,
    pub order: f64,
}

impl ConvergenceReport {
    fn new(h: f64, r1: f64, r2: f64) -> Self {
        ConvergenceReport { h, residual_h: r1, residual_h2: r2, order: (r1 / r2).log2() }
    }
}

/// Max deviation between centered differences of `γ_j` along the
/// trajectory's flow and the separated equations of motion, at step `h`
/// and `h/2`.
pub fn em_residual(traj: &Trajectory, h: f64, tol: f64) -> Result<ConvergenceReport> {
    let l = traj.flow;
    let at = |step: f64| -> Result<f64> {
        let res: Vec<f64> = traj
            .points
            .par_iter()
            .zip(&traj.sov)
            .map(|(x, c)| -> Result<f64> {
                let gp = sov_coords(&build_monodromy(&evolve(x, l, step, tol)?), ROOT_TOL)?;
                let gm = sov_coords(&build_monodromy(&evolve(x, l, -step, tol)?), ROOT_TOL)?;
                let v = em_velocity(c, l);
                Ok((0..v.len())
                    .map(|j| ((gp.gamma[j] - gm.gamma[j]) / (2.0 * step) - v[j]).abs())
                    .fold(0.0, f64::max))
            })
            .collect::<Result<_>>()?;
        Ok(res.into_iter().fold(0.0, f64::max))
    };
    Ok(ConvergenceReport::new(h, at(h)?, at(0.5 * h)?))
}

/// Unwrapped cycle angles of every `γ_k` along a trajectory.
pub fn cycle_angles(s: &SpectralData, traj: &Trajectory) -> Vec<Vec<f64>> {
    let g = s.genus;
    let cycles: Vec<_> = (1..=g).map(|j| s.cycle(j)).collect();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(traj.sov.len());
    for c in &traj.sov {
        let mut u: Vec<f64> = (0..g)
            .map(|k| cycles[k].locate(c.gamma[k].clamp(cycles[k].c - cycles[k].h, cycles[k].c + cycles[k].h), sqrt_p_at(c.lambda[k])))
            .collect();
        if let Some(prev) = out.last() {
            for k in 0..g {
                u[k] += TAU * ((prev[k] - u[k]) / TAU).round();
            }
        }
        out.push(u);
    }
    out
}

/// Abel angles `θ_j = Σ_k ∫^{γ_k} ω_j`, with base points at the zone
/// midpoints on the upper bank.
pub fn abel_angles(s: &SpectralData, per: &PeriodData, traj: &Trajectory) -> Vec<Vec<f64>> {
    let g = s.genus;
    let anti: Vec<Vec<_>> = (1..=g)
        .map(|j| (1..=g).map(|k| omega_antiderivative(s, per, k, j)).collect())
        .collect();
    cycle_angles(s, traj)
        .into_iter()
        .map(|u| (0..g).map(|j| (0..g).map(|k| anti[j][k].eval(u[k])).sum()).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelReport {
    /// `dθ_j/dτ_l` predicted from the period matrix.
    pub rates: Vec<f64>,
    /// Max over samples of `|θ_j(τ) − θ_j(0) − rate_j τ|`.
    pub drift: f64,
}

pub fn abel_linearization(s: &SpectralData, per: &PeriodData, traj: &Trajectory) -> AbelReport {
    let g = s.genus;
    let n = g + 1;
    let l = traj.flow;
    // θ_j = Σ_l A_{jl} τ_{n−l}: flow l enters through A_{j,n−l}
    let rates: Vec<f64> = (0..g).map(|j| per.a[j][n - l - 1]).collect();
    let theta = abel_angles(s, per, traj);
    let mut drift: f64 = 0.0;
    for (th, tau) in theta.iter().zip(&traj.times) {
        for j in 0..g {
            drift = drift.max((th[j] - theta[0][j] - rates[j] * tau).abs());
        }
    }
    AbelReport { rates, drift }
}

/// Average of a symmetric function over the real torus, sampled on an
/// `m^g` grid of angles mapped back to multi-times.
pub fn torus_average(
    x0: &PhasePoint,
    per: &PeriodData,
    f: &MPoly<f64>,
    m: usize,
    tol: f64,
) -> Result<f64> {
    let g = per.genus();
    let n = g + 1;
    // θ = Ã τ with Ã[j][l−1] = A_{j,n−l}; τ = Ã⁻¹ θ
    let at = nalgebra::DMatrix::from_fn(g, g, |j, l| per.a[j][n - (l + 1) - 1]);
    let inv = at
        .try_inverse()
        .ok_or_else(|| TodaError::Internal("singular frequency matrix".into()))?;
    let total = m.pow(g as u32);
    let vals: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| -> Result<f64> {
            let mut rem = idx;
            let theta: Vec<f64> = (0..g)
                .map(|_| {
                    let i = rem % m;
                    rem /= m;
                    TAU * i as f64 / m as f64
                })
                .collect();
            let taus: Vec<f64> = (0..g).map(|l| (0..g).map(|j| inv[(l, j)] * theta[j]).sum()).collect();
            let y = evolve_multi(x0, &taus, tol)?;
            let c = sov_coords(&build_monodromy(&y), ROOT_TOL)?;
            Ok(f.eval(&c.gamma))
        })
        .collect::<Result<_>>()?;
    Ok(vals.iter().sum::<f64>() / total as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PdeKind {
    Exfo,
    C,
    Q,
    Wei,
}

#[derive(Clone, Debug, Serialize)]
pub struct PdeResidualReport {
    pub kind: PdeKind,
    /// Richardson-extrapolated residual from steps `h` and `h/2`.
    pub residual: f64,
    /// Magnitude of the non-derivative term, for scale.
    pub scale: f64,
    pub convergence: ConvergenceReport,
}

/// Inputs of a PDE residual: `l_poly` for `Exfo`, `g` for all but `Wei`
/// (symmetric in `n−2` or `n−3` variables), `p` for `Wei`.
#[derive(Clone, Debug)]
pub struct PdeInputs {
    pub l_poly: Option<RPoly>,
    pub g: Option<MPoly<f64>>,
    pub p: Option<u32>,
}

fn without(g: &[f64], skip: &[usize]) -> Vec<f64> {
    g.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, &x)| x).collect()
}

fn prod_except(g: &[f64], i: usize, skip: &[usize]) -> f64 {
    g.iter()
        .enumerate()
        .filter(|(j, _)| *j != i && !skip.contains(j))
        .map(|(_, &x)| g[i] - x)
        .product()
}

/// Non-derivative term and the bracketed functions `X_{lm}` (or `X_l` for
/// `Q`) at one point, as closures of the separated coordinates.
struct PdeTerms {
    kind: PdeKind,
    n: usize,
    free: Box<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    bracket: Box<dyn Fn(&[f64], usize, usize) -> f64 + Send + Sync>,
}

fn pde_terms(s: &SpectralData, kind: PdeKind, inputs: &PdeInputs) -> Result<PdeTerms> {
    let n = s.n();
    let need_g = |vars: usize| -> Result<MPoly<f64>> {
        let g = inputs.g.clone().unwrap_or_else(|| MPoly::constant(vars, 1.0));
        if g.nvars() != vars {
            return Err(TodaError::InvalidInput(format!("G must have {vars} variables")));
        }
        Ok(g)
    };
    match kind {
        PdeKind::Exfo | PdeKind::Wei => {
            let (l, g) = if kind == PdeKind::Wei {
                if n != 2 {
                    return Err(TodaError::InvalidInput("Weierstrass form needs n = 2".into()));
                }
                let p = inputs.p.ok_or_else(|| TodaError::InvalidInput("p required".into()))?;
                (RPoly::monomial(p as usize, 1.0), MPoly::constant(0, 1.0))
            } else {
                let l = inputs
                    .l_poly
                    .clone()
                    .ok_or_else(|| TodaError::InvalidInput("L required".into()))?;
                (l, need_g(n - 2)?)
            };
            let dl = d_t(s, &l);
            let g2 = g.clone();
            let free = move |gm: &[f64]| -> f64 {
                (0..gm.len())
                    .map(|i| dl.eval(&gm[i]) * g2.eval(&without(gm, &[i])) / prod_except(gm, i, &[]))
                    .sum()
            };
            let ints: Vec<RPoly> =
                (1..n).map(|m| (&l * &RPoly::monomial(n - 1 - m, 1.0)).antiderivative()).collect();
            let bracket = move |gm: &[f64], lf: usize, m: usize| -> f64 {
                (0..gm.len())
                    .map(|i| {
                        gm[i].powi((n - 1 - lf) as i32) * ints[m - 1].eval(&gm[i]) * g.eval(&without(gm, &[i]))
                            / prod_except(gm, i, &[])
                    })
                    .sum()
            };
            Ok(PdeTerms { kind, n, free: Box::new(free), bracket: Box::new(bracket) })
        }
        PdeKind::C => {
            if n < 3 {
                return Err(TodaError::InvalidInput("C needs n >= 3".into()));
            }
            let g = need_g(n - 3)?;
            let g2 = g.clone();
            let ct = c_t(s);
            let denom = |gm: &[f64], i: usize, j: usize| -> f64 {
                (gm[i] - gm[j]) * prod_except(gm, i, &[j]) * prod_except(gm, j, &[i])
            };
            let free = move |gm: &[f64]| -> f64 {
                let mut acc = 0.0;
                for i in 0..gm.len() {
                    for j in i + 1..gm.len() {
                        acc += ct.eval(&gm[i], &gm[j]) * g2.eval(&without(gm, &[i, j])) / denom(gm, i, j);
                    }
                }
                acc
            };
            // ∫_0^x (s^k − y^k)/(s − y) ds
            let w = |x: f64, y: f64, k: usize| -> f64 {
                (0..k).map(|a| y.powi((k - 1 - a) as i32) * x.powi(a as i32 + 1) / (a + 1) as f64).sum()
            };
            let bracket = move |gm: &[f64], lf: usize, m: usize| -> f64 {
                let k = n - 1 - m;
                let e = (n - lf - 1) as i32;
                let mut acc = 0.0;
                for i in 0..gm.len() {
                    for j in i + 1..gm.len() {
                        let inner = gm[i].powi(e) * w(gm[i], gm[j], k) - gm[j].powi(e) * w(gm[j], gm[i], k);
                        acc += g.eval(&without(gm, &[i, j])) / denom(gm, i, j) * inner;
                    }
                }
                acc
            };
            Ok(PdeTerms { kind, n, free: Box::new(free), bracket: Box::new(bracket) })
        }
        PdeKind::Q => {
            if n < 3 {
                return Err(TodaError::InvalidInput("Q needs n >= 3".into()));
            }
            let g = need_g(n - 2)?;
            let bracket = move |gm: &[f64], lf: usize, _m: usize| -> f64 {
                (0..gm.len())
                    .map(|i| {
                        gm[i].powi((n - lf - 1) as i32) * g.eval(&without(gm, &[i])) / prod_except(gm, i, &[])
                    })
                    .sum()
            };
            Ok(PdeTerms { kind, n, free: Box::new(|_: &[f64]| 0.0), bracket: Box::new(bracket) })
        }
    }
}

fn gammas_at(x: &PhasePoint, taus: &[f64], tol: f64) -> Result<Vec<f64>> {
    Ok(sov_coords(&build_monodromy(&evolve_multi(x, taus, tol)?), ROOT_TOL)?.gamma)
}

/// Residual at one base point with finite-difference step `h`.
fn pde_residual_at(terms: &PdeTerms, x: &PhasePoint, h: f64, tol: f64) -> Result<(f64, f64)> {
    let g = terms.n - 1;
    let base = gammas_at(x, &vec![0.0; g], tol)?;
    let free = (terms.free)(&base);
    let shift = |a: usize, da: f64, b: usize, db: f64| -> Result<Vec<f64>> {
        let mut taus = vec![0.0; g];
        taus[a - 1] += da;
        taus[b - 1] += db;
        gammas_at(x, &taus, tol)
    };
    let mut deriv = 0.0;
    if terms.kind == PdeKind::Q {
        for l in 1..=g {
            let p = (terms.bracket)(&shift(l, h, l, 0.0)?, l, 0);
            let m = (terms.bracket)(&shift(l, -h, l, 0.0)?, l, 0);
            deriv += (p - m) / (2.0 * h);
        }
        return Ok((deriv, 0.0));
    }
    for l in 1..=g {
        for m in 1..=g {
            let f = |gm: &[f64]| (terms.bracket)(gm, l, m);
            if l == m {
                let p = f(&shift(l, h, l, 0.0)?);
                let q = f(&shift(l, -h, l, 0.0)?);
                deriv += (p - 2.0 * f(&base) + q) / (h * h);
            } else {
                let pp = f(&shift(l, h, m, h)?);
                let pm = f(&shift(l, h, m, -h)?);
                let mp = f(&shift(l, -h, m, h)?);
                let mm = f(&shift(l, -h, m, -h)?);
                deriv += (pp - pm - mp + mm) / (4.0 * h * h);
            }
        }
    }
    Ok((free - deriv, free.abs()))
}

/// Max residual of a PDE over the given base points at step `h` and
/// `h/2`.
pub fn pde_residual(
    s: &SpectralData,
    kind: PdeKind,
    inputs: &PdeInputs,
    points: &[PhasePoint],
    h: f64,
    tol: f64,
) -> Result<PdeResidualReport> {
    let terms = pde_terms(s, kind, inputs)?;
    let run = |step: f64| -> Result<Vec<(f64, f64)>> {
        points.par_iter().map(|x| pde_residual_at(&terms, x, step, tol)).collect()
    };
    let coarse = run(h)?;
    let fine = run(0.5 * h)?;
    let max_abs = |v: &[(f64, f64)]| v.iter().map(|r| r.0.abs()).fold(0.0, f64::max);
    // the stencils are second order, so (4 r(h/2) − r(h))/3 removes the
    // leading truncation term
    let residual = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| ((4.0 * f.0 - c.0) / 3.0).abs())
        .fold(0.0, f64::max);
    let scale = fine.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(PdeResidualReport {
        kind,
        residual,
        scale,
        convergence: ConvergenceReport::new(h, max_abs(&coarse), max_abs(&fine)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_spectral, period_matrix};

    fn pt2() -> PhasePoint {
        PhasePoint::new(vec![1.0, -1.0], vec![0.0, 0.0]).unwrap()
    }

    #[test]
    fn flow_conserves_t() {
        let traj = hamiltonian_flow(&pt2(), 1, 3.0, 30, DEFAULT_TOL).unwrap();
        assert!(traj.conservation_error() < 1e-9, "{}", traj.conservation_error());
    }

    #[test]
    fn em_sign_and_residual_n2() {
        let x = PhasePoint::new(vec![0.7, -0.7], vec![0.2, -0.1]).unwrap();
        let traj = hamiltonian_flow(&x, 1, 2.0, 8, 1e-13).unwrap();
        let r = em_residual(&traj, 2e-3, 1e-13).unwrap();
        assert!(r.residual_h2 < 1e-5, "{r:?}");
        assert!(r.order > 1.8, "{r:?}");
    }

    #[test]
    fn return_time_is_period() {
        let x = pt2();
        let s = build_spectral(&conserved_poly(&build_monodromy(&x))).unwrap();
        let per = period_matrix(&s).unwrap();
        let y = evolve(&x, 1, per.raw[0][0], 1e-13).unwrap();
        for (a, b) in y.to_vec().iter().zip(x.to_vec()) {
            assert!((a - b).abs() < 1e-7, "{a} {b}");
        }
    }

    #[test]
    fn zero_duration_has_no_drift() {
        let x = pt2();
        let s = build_spectral(&conserved_poly(&build_monodromy(&x))).unwrap();
        let per = period_matrix(&s).unwrap();
        let traj = hamiltonian_flow(&x, 1, 0.0, 1, DEFAULT_TOL).unwrap();
        assert_eq!(abel_linearization(&s, &per, &traj).drift, 0.0);
    }
}
