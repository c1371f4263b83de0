//! Quadrature rules.
//!
//! Three schemes are used: the periodic trapezoid rule for smooth closed
//! cycles (exponential convergence), tanh-sinh for integrals with endpoint
//! singularities, and Gauss-Legendre for everything smooth on a finite
//! interval.

use crate::error::{Result, TodaError};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed-order Gauss-Legendre integral of `f` over `[a, b]`.
pub fn gauss_legendre_integral(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter().zip(&w).map(|(xi, wi)| wi * f(m + r * xi)).sum::<f64>() * r
}

/// Tanh-sinh integral over `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)` so that factors vanishing at
/// the endpoints can be evaluated without cancellation. Levels are refined
/// until two successive estimates agree to `tol` (relative).
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let half = 0.5 * (b - a);
    let tmax = 4.0;
    let eval = |t: f64| -> f64 {
        let s = 0.5 * PI * t.sinh();
        let c = s.cosh();
        // distance to the nearer endpoint, computed without cancellation
        let d = half / (c * c) / (1.0 + s.tanh().abs());
        let dw = 0.5 * PI * t.cosh() / (c * c);
        let x = if t < 0.0 { a + d } else { b - d };
        let (da, db) = if t < 0.0 { (d, b - a - d) } else { (b - a - d, d) };
        if d <= 0.0 || !d.is_finite() {
            return 0.0;
        }
        f(x, da, db) * dw * half
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h;
    for _level in 0..12 {
        h *= 0.5;
        let mut t = h;
        while t <= tmax {
            sum += eval(t) + eval(-t);
            t += 2.0 * h;
        }
        let est = sum * h;
        if (est - prev).abs() <= tol * est.abs().max(1e-300) {
            return Ok(est);
        }
        prev = est;
    }
    Err(TodaError::QuadratureFailure(format!(
        "tanh-sinh on [{a}, {b}] did not reach {tol:e}"
    )))
}

/// Uniform grid `u_i = u0 + 2πi/n` on one period.
pub fn periodic_nodes(n: usize, u0: f64) -> Vec<f64> {
    (0..n).map(|i| u0 + TAU * i as f64 / n as f64).collect()
}

/// Periodic trapezoid rule with doubling until two estimates agree.
///
/// `f` is sampled on whole grids so that callers can vectorize expensive
/// preprocessing (such as phase antiderivatives) per grid.
pub fn periodic_adaptive<T>(
    mut f: impl FnMut(usize) -> T,
    norm: impl Fn(&T, &T) -> f64,
    n0: usize,
    nmax: usize,
    tol: f64,
) -> Result<(T, usize)> {
    let mut n = n0;
    let mut prev = f(n);
    while n < nmax {
        n *= 2;
        let cur = f(n);
        if norm(&cur, &prev) <= tol {
            return Ok((cur, n));
        }
        prev = cur;
    }
    Err(TodaError::QuadratureFailure(format!(
        "periodic trapezoid not converged at {nmax} nodes"
    )))
}

/// Antiderivative of a smooth `2π`-periodic function given by samples on
/// a uniform grid: `G(u) = ∫_{base}^{u} g`.
///
/// The mean contributes a linear term; the oscillating part is integrated
/// term by term in its trigonometric interpolant.
#[derive(Clone, Debug)]
pub struct PeriodicAntiderivative {
    u0: f64,
    mean: f64,
    // (m, c_m) for m in 1..=n/2, with g ≈ mean + Σ 2 Re(c_m e^{im(u-u0)})
    modes: Vec<Complex64>,
    offset: f64,
}

impl PeriodicAntiderivative {
    /// `samples[i] = g(u0 + 2πi/n)`.
    pub fn new(samples: &[f64], u0: f64, base: f64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let half = n / 2;
        let mut modes = Vec::with_capacity(half);
        for m in 1..=half {
            let mut c = Complex64::new(0.0, 0.0);
            for (i, g) in samples.iter().enumerate() {
                let a = -TAU * (m * i % n) as f64 / n as f64;
                c += g * Complex64::from_polar(1.0, a);
            }
            c /= n as f64;
            if 2 * m == n {
                c *= 0.5;
            }
            modes.push(c);
        }
        let mut s = PeriodicAntiderivative { u0, mean, modes, offset: 0.0 };
        s.offset = s.raw(base);
        s
    }

    fn raw(&self, u: f64) -> f64 {
        let x = u - self.u0;
        let mut acc = self.mean * x;
        for (k, c) in self.modes.iter().enumerate() {
            let m = (k + 1) as f64;
            // ∫ 2 Re(c e^{imx}) = 2 Re(c e^{imx} / (im))
            let e = Complex64::from_polar(1.0, m * x);
            acc += 2.0 * (c * e / Complex64::new(0.0, m)).re;
        }
        acc
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.raw(u) - self.offset
    }

    /// Increment over one full period.
    pub fn period_increment(&self) -> f64 {
        self.mean * TAU
    }
}

/// Brent's method on a sign-changing bracket.
pub fn brent(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(TodaError::BracketFailure(a, b));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Err(TodaError::ConvergenceFailure("brent iteration limit".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let v = gauss_legendre_integral(|x| x.powi(9) + 3.0 * x * x, -1.0, 2.0, 5);
        let exact = (2f64.powi(10) - 1.0) / 10.0 + (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
        let (_, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_{-1}^{1} dx / sqrt(1 - x²) = π
        let v = tanh_sinh(|_, da, db| 1.0 / (da * db).sqrt(), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn periodic_antiderivative_of_cosine() {
        let n = 32;
        let s: Vec<f64> = periodic_nodes(n, 0.0).iter().map(|u| 1.0 + u.cos()).collect();
        let g = PeriodicAntiderivative::new(&s, 0.0, 0.3);
        for u in [0.0f64, 1.0, 4.0, 9.0] {
            let exact: f64 = (u - 0.3) + f64::sin(u) - 0.3f64.sin();
            assert!((g.eval(u) - exact).abs() < 1e-13);
        }
        assert!((g.period_increment() - TAU).abs() < 1e-13);
    }

    #[test]
    fn brent_finds_cube_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
        assert!(matches!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-10), Err(TodaError::BracketFailure(..))));
    }
}
