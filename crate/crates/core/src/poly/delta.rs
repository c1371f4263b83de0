//! The symmetric imaginary difference `Δ(F)(γ) = F(γ+iħ) − F(γ−iħ)` and
//! its inverse on polynomials, normalized by `Δ⁻¹(L)(0) = 0`.

use super::{ComplexCoeff, Poly};

pub fn delta<T: ComplexCoeff>(f: &Poly<T>, hbar: &T) -> Poly<T> {
    let ih = T::i() * hbar.clone();
    &f.shift(&ih) - &f.shift(&(-ih))
}

/// `Δ(x^k)` by the binomial expansion; only odd powers of `iħ` survive.
fn delta_monomial<T: ComplexCoeff>(k: usize, ih: &T) -> Poly<T> {
    let mut v = vec![T::zero(); k];
    let mut binom = T::one();
    let mut ihp = T::one();
    for j in 1..=k {
        binom = binom * T::from_int((k + 1 - j) as i64) / T::from_int(j as i64);
        ihp = ihp * ih.clone();
        if j % 2 == 1 {
            v[k - j] = T::from_int(2) * binom.clone() * ihp.clone();
        }
    }
    Poly::new(v)
}

/// Unique polynomial `F` with `Δ(F) = L` and `F(0) = 0`; `deg F = deg L + 1`.
pub fn delta_inverse<T: ComplexCoeff>(l: &Poly<T>, hbar: &T) -> Poly<T> {
    if l.is_zero() {
        return Poly::zero();
    }
    let ih = T::i() * hbar.clone();
    let d = l.degree();
    let mut rest = l.clone();
    let mut out = vec![T::zero(); d + 2];
    for k in (0..=d).rev() {
        let r = rest.coeff(k);
        if r.is_zero() {
            continue;
        }
        // Δ(x^{k+1}) = 2(k+1)iħ x^k + lower
        let lead = T::from_int(2 * (k as i64 + 1)) * ih.clone();
        let c = r / lead;
        rest = &rest - &delta_monomial(k + 1, &ih).scale(&c);
        out[k + 1] = c;
    }
    debug_assert!(rest.is_zero());
    Poly::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, CRat, ExactPoly};
    use num_complex::Complex;
    use num_traits::{One, Zero};

    fn re(n: i64) -> CRat {
        Complex::new(rat(n, 1), rat(0, 1))
    }

    fn im(n: i64, d: i64) -> CRat {
        Complex::new(rat(0, 1), rat(n, d))
    }

    #[test]
    fn delta_of_square() {
        let f = ExactPoly::monomial(2, CRat::one());
        assert_eq!(delta(&f, &re(1)), ExactPoly::new(vec![CRat::zero(), im(4, 1)]));
    }

    #[test]
    fn delta_of_cube() {
        let f = ExactPoly::monomial(3, CRat::one());
        let expect = ExactPoly::new(vec![im(-2, 1), CRat::zero(), im(6, 1)]);
        assert_eq!(delta(&f, &re(1)), expect);
    }

    #[test]
    fn delta_kills_constants() {
        assert!(delta(&ExactPoly::constant(re(7)), &re(3)).is_zero());
    }

    #[test]
    fn inverse_of_one_and_x() {
        // γ/(2i) = −iγ/2 ; γ²/(4i) = −iγ²/4
        let one = delta_inverse(&ExactPoly::one(), &re(1));
        assert_eq!(one, ExactPoly::new(vec![CRat::zero(), im(-1, 2)]));
        let x = delta_inverse(&ExactPoly::x(), &re(1));
        assert_eq!(x, ExactPoly::new(vec![CRat::zero(), CRat::zero(), im(-1, 4)]));
    }
}
