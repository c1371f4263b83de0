use super::{Coeff, Rat};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Power series in `q` with exact rational coefficients, truncated after `q^order`.
#[derive(Clone, PartialEq)]
pub struct QSeries {
    coeffs: Vec<Rat>,
    order: usize,
}

impl QSeries {
    pub fn new(mut coeffs: Vec<Rat>, order: usize) -> Self {
        coeffs.resize(order + 1, Rat::zero());
        QSeries { coeffs, order }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(0, Rat::one(), order)
    }

    /// `c q^k`, or zero when `k` is past the truncation.
    pub fn monomial(k: usize, c: Rat, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_ints(c: &[i64], order: usize) -> Self {
        Self::new(c.iter().map(|&v| Rat::from_int(v)).collect(), order)
    }

    /// `[m] = 1 − q^m`
    pub fn bracket(m: usize, order: usize) -> Self {
        &Self::one(order) - &Self::monomial(m, Rat::one(), order)
    }

    /// `[m]! = [1][2]⋯[m]`
    pub fn factorial(m: usize, order: usize) -> Self {
        (1..=m).fold(Self::one(order), |acc, k| &acc * &Self::bracket(k, order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect(), self.order)
    }

    /// Multiplicative inverse; `None` if the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let inv0 = c0.recip();
        let mut out = vec![Rat::zero(); self.order + 1];
        out[0] = inv0.clone();
        for k in 1..=self.order {
            let mut s = Rat::zero();
            for j in 1..=k {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -s * &inv0;
        }
        Some(Self::new(out, self.order))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self * &inv)
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= Rat::zero())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

fn common_order(a: &QSeries, b: &QSeries) -> usize {
    a.order.min(b.order)
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: Self) -> QSeries {
        let n = common_order(self, rhs);
        QSeries::new((0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(), n)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: Self) -> QSeries {
        let n = common_order(self, rhs);
        QSeries::new((0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(), n)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: Self) -> QSeries {
        let n = common_order(self, rhs);
        let mut out = vec![Rat::zero(); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        QSeries::new(out, n)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::new(self.coeffs.iter().map(|c| -c).collect(), self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let inv = QSeries::bracket(1, 10).inverse().unwrap();
        assert_eq!(inv, QSeries::from_ints(&[1; 11], 10));
    }

    #[test]
    fn inverse_of_bracket_two() {
        let inv = QSeries::bracket(2, 6).inverse().unwrap();
        assert_eq!(inv, QSeries::from_ints(&[1, 0, 1, 0, 1, 0, 1], 6));
        assert!(QSeries::monomial(1, Rat::one(), 6).inverse().is_none());
    }

    #[test]
    fn factorial_two() {
        // (1−q)(1−q²) = 1 − q − q² + q³
        assert_eq!(QSeries::factorial(2, 5), QSeries::from_ints(&[1, -1, -1, 1], 5));
    }

    #[test]
    fn truncation_is_respected() {
        let a = QSeries::from_ints(&[0, 0, 0, 1], 4);
        assert!((&a * &a).is_zero());
        assert_eq!(QSeries::monomial(9, Rat::one(), 4), QSeries::zero(4));
    }
}
