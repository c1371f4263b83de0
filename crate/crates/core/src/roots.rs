//! Polynomial roots via companion-matrix eigenvalues and Newton polishing.

use crate::error::{Result, TodaError};
use crate::poly::{CPoly, RPoly};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// All complex roots of a real polynomial of degree ≥ 1.
pub fn complex_roots(p: &RPoly) -> Vec<Complex64> {
    let d = p.degree();
    if d == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -p.coeff(i) / lead;
    }
    let pc = p.to_complex();
    let dpc = pc.derivative();
    comp.complex_eigenvalues()
        .iter()
        .map(|&z| polish(&pc, &dpc, z))
        .collect()
}

fn polish(p: &CPoly, dp: &CPoly, mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let d = dp.eval(&z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval(&z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

/// Real roots sorted ascending; fails if any root has `|Im| > tol` (scaled
/// by `max(1, |z|)`).
pub fn real_roots(p: &RPoly, tol: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for z in complex_roots(p) {
        if z.im.abs() > tol * z.norm().max(1.0) {
            return Err(TodaError::NonRealRoot(z.im.abs()));
        }
        out.push(z.re);
    }
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        let p = RPoly::from_roots(&[-2.0, 0.5, 3.0]);
        let r = real_roots(&p, 1e-10).unwrap();
        for (a, b) in r.iter().zip([-2.0, 0.5, 3.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn complex_pair_rejected() {
        let p = RPoly::new(vec![1.0, 0.0, 1.0]);
        assert!(matches!(real_roots(&p, 1e-10), Err(TodaError::NonRealRoot(_))));
        assert_eq!(complex_roots(&p).len(), 2);
    }
}
