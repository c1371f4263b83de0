//! Graded characters of the observable algebra as exact truncated
//! q-series.

use crate::error::{Result, TodaError};
use crate::poly::{QSeries, Rat};
use num_traits::One;
use serde::Serialize;

/// Gaussian binomial `[n; m] = [n]! / ([m]! [n−m]!)`.
pub fn q_binomial(n: usize, m: usize, order: usize) -> Result<QSeries> {
    if m > n {
        return Err(TodaError::InvalidInput(format!("q-binomial needs m <= n, got [{n}; {m}]")));
    }
    let den = &QSeries::factorial(m, order) * &QSeries::factorial(n - m, order);
    Ok(QSeries::factorial(n, order).checked_div(&den).expect("[k]! is a unit"))
}

/// Truncated generating function of the graded dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedCharacter {
    pub n: usize,
    pub chi: QSeries,
}

impl GradedCharacter {
    /// Dimensions `δ(d)` are nonnegative integers.
    pub fn is_admissible(&self) -> bool {
        self.chi.is_integral() && self.chi.is_nonnegative()
    }

    pub fn dims(&self) -> Vec<String> {
        self.chi.coeffs().iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for GradedCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GradedCharacter", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("order", &self.chi.order())?;
        st.serialize_field("dims", &self.dims())?;
        st.end()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(TodaError::InvalidInput("chain length must be >= 2".into()));
    }
    Ok(())
}

fn inv(s: &QSeries) -> QSeries {
    s.inverse().expect("products of [k] are units")
}

/// `1/[n]! · 1/[n−1]! · [1]/[n+1]! · [1]/[n]! · [2n]!/[1]`
pub fn character_product(n: usize, order: usize) -> Result<GradedCharacter> {
    check_n(n)?;
    let f = |k| QSeries::factorial(k, order);
    let one = QSeries::bracket(1, order);
    let chi = [inv(&f(n)), inv(&f(n - 1)), &one * &inv(&f(n + 1)), &one * &inv(&f(n)), &f(2 * n) * &inv(&one)]
        .iter()
        .fold(QSeries::one(order), |acc, x| &acc * x);
    Ok(GradedCharacter { n, chi })
}

fn prefactor(n: usize, order: usize) -> QSeries {
    inv(&(&QSeries::factorial(n, order) * &QSeries::factorial(n - 1, order)))
}

/// `([2n−1; n−1] − q [2n−1; n−2]) / ([n]! [n−1]!)`
pub fn character_binomial(n: usize, order: usize) -> Result<GradedCharacter> {
    check_n(n)?;
    let q = QSeries::monomial(1, Rat::one(), order);
    let body = &q_binomial(2 * n - 1, n - 1, order)? - &(&q * &q_binomial(2 * n - 1, n - 2, order)?);
    Ok(GradedCharacter { n, chi: &prefactor(n, order) * &body })
}

/// `Σ_{i=0}^{top} (−q)^i [2n−1; top−i]`
fn alternating(n: usize, top: usize, order: usize) -> Result<QSeries> {
    let mut acc = QSeries::zero(order);
    for i in 0..=top {
        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
        let term = &QSeries::monomial(i, sign, order) * &q_binomial(2 * n - 1, top - i, order)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Alternating-sum form coming from the resolution by the operators of
/// degree 2 and 1.
pub fn character_resolution(n: usize, order: usize) -> Result<GradedCharacter> {
    check_n(n)?;
    let mut body = alternating(n, n - 1, order)?;
    if n >= 3 {
        let q2 = QSeries::monomial(2, Rat::one(), order);
        body = &body - &(&q2 * &alternating(n, n - 3, order)?);
    }
    Ok(GradedCharacter { n, chi: &prefactor(n, order) * &body })
}

/// `(1 + q²) / [2]!`, the series printed for the two-site chain.
pub fn printed_two_site(order: usize) -> QSeries {
    let num = QSeries::from_ints(&[1, 0, 1], order);
    &num * &inv(&QSeries::factorial(2, order))
}

/// `(1 + q²) / ([1] [2]!)`, the value all three forms give at `n = 2`.
pub fn two_site_closed_form(order: usize) -> QSeries {
    &printed_two_site(order) * &inv(&QSeries::bracket(1, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(q_binomial(2, 1, 10).unwrap(), QSeries::from_ints(&[1, 1], 10));
        assert_eq!(q_binomial(4, 2, 10).unwrap(), QSeries::from_ints(&[1, 1, 2, 1, 1], 10));
        assert!(q_binomial(2, 3, 10).is_err());
    }

    #[test]
    fn binomial_symmetry_and_pascal() {
        let o = 40;
        for n in 1..=12 {
            for m in 1..n {
                let b = q_binomial(n, m, o).unwrap();
                assert_eq!(b, q_binomial(n, n - m, o).unwrap());
                let rhs = &q_binomial(n - 1, m - 1, o).unwrap()
                    + &(&QSeries::monomial(m, Rat::one(), o) * &q_binomial(n - 1, m, o).unwrap());
                assert_eq!(b, rhs);
            }
        }
    }

    #[test]
    fn three_forms_agree() {
        for n in 2..=6 {
            let a = character_product(n, 40).unwrap();
            assert_eq!(a, character_binomial(n, 40).unwrap());
            assert_eq!(a, character_resolution(n, 40).unwrap());
            assert!(a.is_admissible());
            assert_eq!(a.chi.coeff(0), Rat::one());
        }
    }

    #[test]
    fn two_site_value() {
        let c = character_product(2, 20).unwrap().chi;
        assert_eq!(c, two_site_closed_form(20));
        assert_ne!(c, printed_two_site(20));
        assert_eq!(c.truncate(10), QSeries::from_ints(&[1, 2, 5, 8, 13, 18, 25, 32, 41, 50, 61], 10));
    }
}
