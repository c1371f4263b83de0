use super::{delta_inverse, Coeff, ComplexCoeff, Poly};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in two variables `(x, y)`, stored as a polynomial in `x`
/// whose coefficients are polynomials in `y`.
#[derive(Clone)]
pub struct BiPoly<T: Coeff> {
    rows: Vec<Poly<T>>,
}

impl<T: Coeff> BiPoly<T> {
    fn from_rows(mut rows: Vec<Poly<T>>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    /// Dense constructor, `c[i][j]` multiplies `x^i y^j`.
    pub fn from_matrix(c: Vec<Vec<T>>) -> Self {
        Self::from_rows(c.into_iter().map(Poly::new).collect())
    }

    pub fn from_x(p: &Poly<T>) -> Self {
        Self::from_rows(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    pub fn from_y(p: &Poly<T>) -> Self {
        Self::from_rows(vec![p.clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> T {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or_else(T::zero)
    }

    pub fn deg_x(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.rows.iter().map(|r| r.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        let mut acc = T::zero();
        for r in self.rows.iter().rev() {
            acc = acc * x.clone() + r.eval(y);
        }
        acc
    }

    /// Polynomial in `y` obtained by fixing `x`.
    pub fn at_x(&self, x: &T) -> Poly<T> {
        let mut acc = Poly::zero();
        for r in self.rows.iter().rev() {
            acc = &acc.scale(x) + r;
        }
        acc
    }

    /// Polynomial in `x` obtained by fixing `y`.
    pub fn at_y(&self, y: &T) -> Poly<T> {
        Poly::new(self.rows.iter().map(|r| r.eval(y)).collect())
    }

    /// `p(y, x)`
    pub fn swap(&self) -> Self {
        let dy = self.deg_y();
        let rows = (0..=dy)
            .map(|j| Poly::new((0..self.rows.len()).map(|i| self.coeff(i, j)).collect()))
            .collect();
        Self::from_rows(rows)
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_rows(self.rows.iter().map(|r| r.scale(s)).collect())
    }

    /// Divided difference `(t(x) − t(y)) / (x − y)`.
    pub fn divided_difference(t: &Poly<T>) -> Self {
        let n = t.coeffs().len();
        let mut rows = vec![Poly::zero(); n.saturating_sub(1)];
        for (k, tk) in t.coeffs().iter().enumerate().skip(1) {
            for a in 0..k {
                rows[a] = &rows[a] + &Poly::monomial(k - 1 - a, tk.clone());
            }
        }
        Self::from_rows(rows)
    }

    /// Exact quotient by `(x − y)`; `None` if `(x − y)` does not divide.
    pub fn div_x_minus_y(&self) -> Option<Self> {
        let (q, rem) = self.div_rem_x_minus_y();
        rem.is_zero().then_some(q)
    }

    /// Quotient and remainder (a polynomial in `y`) of division by `(x − y)`.
    pub fn div_rem_x_minus_y(&self) -> (Self, Poly<T>) {
        if self.is_zero() {
            return (Self::zero(), Poly::zero());
        }
        let y = Poly::<T>::x();
        let d = self.rows.len() - 1;
        let mut q = vec![Poly::zero(); d];
        let mut carry = Poly::zero();
        for i in (1..=d).rev() {
            carry = &self.rows[i] + &(&y * &carry);
            q[i - 1] = carry.clone();
        }
        let rem = &self.rows[0] + &(&y * &carry);
        (Self::from_rows(q), rem)
    }

    /// `∫_0^x p(s, y) ds`
    pub fn antiderivative_x(&self) -> Self {
        let mut rows = vec![Poly::zero()];
        for (i, r) in self.rows.iter().enumerate() {
            rows.push(r.scale(&(T::one() / T::from_int(i as i64 + 1))));
        }
        Self::from_rows(rows)
    }

    /// `p(x + s, y)`
    pub fn shift_x(&self, s: &T) -> Self {
        let lin = Self::from_x(&Poly::new(vec![s.clone(), T::one()]));
        let mut acc = Self::zero();
        for r in self.rows.iter().rev() {
            acc = &(&acc * &lin) + &Self::from_y(r);
        }
        acc
    }

    pub fn mul_x(&self, p: &Poly<T>) -> Self {
        self * &Self::from_x(p)
    }

    pub fn mul_y(&self, p: &Poly<T>) -> Self {
        self * &Self::from_y(p)
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U + Copy) -> BiPoly<U> {
        BiPoly::from_rows(self.rows.iter().map(|r| r.map(f)).collect())
    }

    pub fn is_antisymmetric(&self) -> bool {
        (self + &self.swap()).is_zero()
    }
}

impl<T: ComplexCoeff> BiPoly<T> {
    /// `Δ⁻¹` applied in the first argument.
    pub fn delta_inverse_x(&self, hbar: &T) -> Self {
        let cols = self.swap();
        let rows = cols
            .rows
            .iter()
            .map(|col| delta_inverse(col, hbar))
            .collect::<Vec<_>>();
        Self::from_rows(rows).swap()
    }
}

impl<T: Coeff> PartialEq for BiPoly<T> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl<T: Coeff> fmt::Debug for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly{:?}", self.rows)
    }
}

impl<T: Coeff> Add for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn add(self, rhs: Self) -> BiPoly<T> {
        let n = self.rows.len().max(rhs.rows.len());
        let z = Poly::zero();
        BiPoly::from_rows(
            (0..n)
                .map(|i| self.rows.get(i).unwrap_or(&z) + rhs.rows.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl<T: Coeff> Sub for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn sub(self, rhs: Self) -> BiPoly<T> {
        let n = self.rows.len().max(rhs.rows.len());
        let z = Poly::zero();
        BiPoly::from_rows(
            (0..n)
                .map(|i| self.rows.get(i).unwrap_or(&z) - rhs.rows.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl<T: Coeff> Mul for &BiPoly<T> {
    type Output = BiPoly<T>;
    fn mul(self, rhs: Self) -> BiPoly<T> {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![Poly::zero(); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in rhs.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BiPoly::from_rows(rows)
    }
}

impl<T: Coeff> Add for BiPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Coeff> Sub for BiPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Coeff> Mul for BiPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<T: Coeff> Neg for BiPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        BiPoly::from_rows(self.rows.into_iter().map(|r| -r).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::RPoly;

    #[test]
    fn divided_difference_of_square_and_cube() {
        let u = BiPoly::divided_difference(&RPoly::new(vec![-3.0, 0.0, 1.0]));
        assert_eq!(u, BiPoly::from_matrix(vec![vec![0.0, 1.0], vec![1.0]]));
        let u3 = BiPoly::divided_difference(&RPoly::monomial(3, 1.0));
        // x² + xy + y²
        assert_eq!(
            u3,
            BiPoly::from_matrix(vec![vec![0.0, 0.0, 1.0], vec![0.0, 1.0], vec![1.0]])
        );
    }

    #[test]
    fn exact_division_by_difference() {
        let x = BiPoly::from_x(&RPoly::x());
        let y = BiPoly::from_y(&RPoly::x());
        let diff = &x - &y;
        let p = &(&(&x * &x) + &y) * &diff;
        assert_eq!(p.div_x_minus_y().unwrap(), &(&x * &x) + &y);
        assert!((&x + &y).div_x_minus_y().is_none());
    }

    #[test]
    fn swap_and_shift() {
        let p = BiPoly::from_matrix(vec![vec![1.0, 2.0], vec![0.0, 0.0, 3.0]]);
        assert_eq!(p.swap().eval(&2.0, &5.0), p.eval(&5.0, &2.0));
        let s = p.shift_x(&0.5);
        assert!((s.eval(&1.0, &-1.0) - p.eval(&1.5, &-1.0)).abs() < 1e-12);
    }
}
