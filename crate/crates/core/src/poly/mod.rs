//! Dense polynomial arithmetic.
//!
//! [`Poly`] is a univariate polynomial over any [`Coeff`] ring, [`BiPoly`]
//! its two-variable counterpart and [`MPoly`] a sparse multivariate form used
//! only for the antisymmetric/determinant conversion. Exact work runs over
//! [`CRat`] (complex rationals); quadrature-time work over `Complex64`/`f64`.

mod bipoly;
mod coeff;
mod delta;
mod mpoly;
mod qseries;
mod schur;

pub use bipoly::BiPoly;
pub use coeff::{c64_to_crat, crat_to_c64, rat, ComplexCoeff, Coeff, CRat, Rat};
pub use delta::{delta, delta_inverse};
pub use mpoly::MPoly;
pub use qseries::QSeries;
pub use schur::{antisym_to_schur, SchurBlock};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Univariate polynomial, `coeffs[k]` multiplies `x^k`.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial
/// has an empty coefficient vector.
#[derive(Clone, PartialEq)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

impl serde::Serialize for Poly<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

pub type CPoly = Poly<num_complex::Complex64>;
pub type RPoly = Poly<f64>;
pub type ExactPoly = Poly<CRat>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(k: usize, c: T) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(1, T::one())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * Self::new(vec![-r.clone(), T::one()])
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            v.push(c.clone() / T::from_int(k as i64 + 1));
        }
        Self::new(v)
    }

    /// `p(x + s)`
    pub fn shift(&self, s: &T) -> Self {
        let lin = Self::new(vec![s.clone(), T::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * lin.clone() + Self::constant(c.clone());
        }
        acc
    }

    /// `p(q(x))`
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q.clone() + Self::constant(c.clone());
        }
        acc
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division by a polynomial with invertible leading coefficient.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead = d.leading();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }
}

impl<T: Coeff> Default for Poly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<T: Coeff> Add for Poly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Sub for Poly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Coeff> Mul for Poly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<T: Coeff> Neg for Poly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl RPoly {
    pub fn to_complex(&self) -> CPoly {
        self.map(|c| num_complex::Complex64::new(*c, 0.0))
    }

    /// Evaluate a real polynomial at a complex point.
    pub fn eval_c(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

impl CPoly {
    pub fn eval_re(&self, x: f64) -> num_complex::Complex64 {
        self.eval(&num_complex::Complex64::new(x, 0.0))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl ExactPoly {
    pub fn to_c64(&self) -> CPoly {
        self.map(crat_to_c64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_and_degree() {
        let p = RPoly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert!(RPoly::new(vec![0.0]).is_zero());
    }

    #[test]
    fn shift_matches_eval() {
        let p = RPoly::new(vec![1.0, -3.0, 0.5, 2.0]);
        let q = p.shift(&0.7);
        for x in [-1.3, 0.0, 2.2] {
            assert!((q.eval(&x) - p.eval(&(x + 0.7))).abs() < 1e-12);
        }
    }

    #[test]
    fn div_rem_roundtrip() {
        let p = RPoly::new(vec![5.0, 0.0, -2.0, 1.0, 3.0]);
        let d = RPoly::new(vec![1.0, 1.0]);
        let (q, r) = p.div_rem(&d);
        let back = &(&q * &d) + &r;
        for k in 0..5 {
            assert!((back.coeff(k) - p.coeff(k)).abs() < 1e-12);
        }
        assert_eq!(r.degree(), 0);
    }

    #[test]
    fn from_roots_vanishes() {
        let p = RPoly::from_roots(&[1.0, -2.0, 0.5]);
        assert!(p.eval(&-2.0).abs() < 1e-14);
        assert_eq!(p.leading(), 1.0);
    }
}
