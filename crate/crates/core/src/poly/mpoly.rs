use super::Coeff;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<T: Coeff> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Coeff> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::term(vec![0; nvars], c)
    }

    pub fn term(exps: Vec<u32>, c: T) -> Self {
        let nvars = exps.len();
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(e, T::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: T) {
        assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn eval(&self, x: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mut m = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m * xi.clone();
                }
            }
            acc + m
        })
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Variables relabelled: variable `i` of the result is variable `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; self.nvars];
            for (i, &p) in perm.iter().enumerate() {
                ne[p] = e[i];
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Invariance under the transposition (0 1) and the cycle (0 1 … m−1),
    /// which together generate the symmetric group.
    pub fn is_symmetric(&self) -> bool {
        if self.nvars < 2 {
            return true;
        }
        let mut swap: Vec<usize> = (0..self.nvars).collect();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..self.nvars).map(|i| (i + 1) % self.nvars).collect();
        self.permute(&swap) == *self && self.permute(&cycle) == *self
    }

    /// `∏_{i<j} (x_j − x_i)`, the determinant `det(x_j^{i})`.
    pub fn vandermonde(nvars: usize) -> Self {
        let mut v = Self::constant(nvars, T::one());
        for i in 0..nvars {
            for j in i + 1..nvars {
                v = &v * &(&Self::var(nvars, j) - &Self::var(nvars, i));
            }
        }
        v
    }

    /// Elementary symmetric polynomial `e_k`.
    pub fn elementary(nvars: usize, k: usize) -> Self {
        let mut out = Self::zero(nvars);
        for mask in 0u32..(1 << nvars) {
            if mask.count_ones() as usize == k {
                let e = (0..nvars).map(|i| (mask >> i) & 1).collect();
                out.add_term(e, T::one());
            }
        }
        out
    }
}

impl<T: Coeff> Add for &MPoly<T> {
    type Output = MPoly<T>;
    fn add(self, rhs: Self) -> MPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &MPoly<T> {
    type Output = MPoly<T>;
    fn sub(self, rhs: Self) -> MPoly<T> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<T: Coeff> Mul for &MPoly<T> {
    type Output = MPoly<T>;
    fn mul(self, rhs: Self) -> MPoly<T> {
        let mut out = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vandermonde_three() {
        let v = MPoly::<f64>::vandermonde(3);
        let x = [1.0, 2.0, 4.0];
        assert_eq!(v.eval(&x), (2.0 - 1.0) * (4.0 - 1.0) * (4.0 - 2.0));
        assert!(!v.is_symmetric());
        assert!(MPoly::<f64>::elementary(3, 2).is_symmetric());
    }
}
