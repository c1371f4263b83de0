//! Dormand–Prince 5(4) integrator for autonomous systems.

use crate::error::{Result, TodaError};

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const MAX_STEPS: usize = 2_000_000;

/// Integrate `y′ = f(y)` from time 0 and return the state at each of the
/// requested `times` (monotone, same sign; may be negative).
pub fn integrate_to<F>(f: F, y0: &[f64], times: &[f64], tol: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let dir = times.iter().find(|t| **t != 0.0).map_or(1.0, |t| t.signum());
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = 1e-2 * dir;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    k[0] = f(&y);
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0;
    for &target in times {
        if (target - t) * dir < 0.0 {
            return Err(TodaError::InvalidInput("output times must be monotone".into()));
        }
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(TodaError::StepFailure(t));
            }
            let last = (t + h - target) * dir >= 0.0;
            let hs = if last { target - t } else { h };
            let mut ytmp = vec![0.0; dim];
            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = y[i];
                    for r in 0..s {
                        acc += hs * A[s][r] * k[r][i];
                    }
                    ytmp[i] = acc;
                }
                k[s] = f(&ytmp);
            }
            // ytmp now holds the 5th-order solution (FSAL row)
            let mut err = 0.0;
            for i in 0..dim {
                let e: f64 = (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>() * hs;
                let sc = tol + tol * y[i].abs().max(ytmp[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / dim as f64).sqrt();
            if !err.is_finite() {
                return Err(TodaError::StepFailure(t));
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y = ytmp;
                k[0] = k[6].clone();
                if !last {
                    h = hs * fac;
                }
            } else {
                h = hs * fac.min(1.0);
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(TodaError::StepFailure(t));
                }
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

/// State at a single time.
pub fn integrate<F>(f: F, y0: &[f64], t_end: f64, tol: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    Ok(integrate_to(f, y0, &[t_end], tol)?.pop().expect("one output"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let f = |y: &[f64]| vec![y[1], -y[0]];
        let out = integrate_to(f, &[1.0, 0.0], &[std::f64::consts::PI, std::f64::consts::TAU], 1e-12).unwrap();
        assert!((out[0][0] + 1.0).abs() < 1e-10);
        assert!((out[1][0] - 1.0).abs() < 1e-10 && out[1][1].abs() < 1e-10);
    }

    #[test]
    fn backward_in_time() {
        let f = |y: &[f64]| vec![y[0]];
        let y = integrate(f, &[1.0], -1.0, 1e-12).unwrap();
        assert!((y[0] - (-1f64).exp()).abs() < 1e-11);
    }
}
