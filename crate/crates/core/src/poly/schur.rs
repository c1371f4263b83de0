use super::{Coeff, MPoly, Poly};
use crate::error::{Result, TodaError};

/// One determinant block `det(F_i(γ_j))_{i,j=1..m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurBlock<T: Coeff> {
    pub rows: Vec<Poly<T>>,
}

impl<T: Coeff> SchurBlock<T> {
    /// Expand the determinant into a polynomial in `m` variables.
    pub fn expand(&self) -> MPoly<T> {
        let m = self.rows.len();
        let mut out = MPoly::zero(m);
        for_each_permutation(m, |perm, sign| {
            // Σ_σ sgn σ ∏_i F_i(x_{σ(i)})
            let mut term = MPoly::constant(m, if sign { T::one() } else { -T::one() });
            for (i, &s) in perm.iter().enumerate() {
                let mut f = MPoly::zero(m);
                for (k, c) in self.rows[i].coeffs().iter().enumerate() {
                    let mut e = vec![0; m];
                    e[s] = k as u32;
                    f.add_term(e, c.clone());
                }
                term = &term * &f;
            }
            out = &out + &term;
        });
        out
    }
}

fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize], bool)) {
    fn rec(k: usize, p: &mut Vec<usize>, even: bool, f: &mut dyn FnMut(&[usize], bool)) {
        if k == p.len() {
            f(p, even);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { even } else { !even }, f);
            p.swap(k, i);
        }
    }
    let mut p: Vec<usize> = (0..m).collect();
    rec(0, &mut p, true, &mut f);
}

/// Write `∏_{i<j}(γ_j − γ_i) · F(γ)` as a sum of determinants `det(F_i(γ_j))`.
///
/// Blocks are extracted greedily: the lexicographically largest strictly
/// increasing exponent vector `(e_1 < … < e_m)` with coefficient `c` yields the
/// block `(c·γ^{e_1}, γ^{e_2}, …, γ^{e_m})`, which is then subtracted.
pub fn antisym_to_schur<T: Coeff>(f: &MPoly<T>) -> Result<Vec<SchurBlock<T>>> {
    let m = f.nvars();
    if m == 0 {
        return Err(TodaError::InvalidInput("need at least one variable".into()));
    }
    if !f.is_symmetric() {
        return Err(TodaError::NotSymmetric);
    }
    let mut rest = &MPoly::vandermonde(m) * f;
    let mut blocks = Vec::new();
    while !rest.is_zero() {
        let (exps, c) = rest
            .terms()
            .iter()
            .rev()
            .find(|(e, _)| e.windows(2).all(|w| w[0] < w[1]))
            .map(|(e, c)| (e.clone(), c.clone()))
            .ok_or_else(|| TodaError::Internal("non-antisymmetric remainder".into()))?;
        let rows = exps
            .iter()
            .enumerate()
            .map(|(i, &k)| Poly::monomial(k as usize, if i == 0 { c.clone() } else { T::one() }))
            .collect();
        let block = SchurBlock { rows };
        rest = &rest - &block.expand();
        blocks.push(block);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, Rat};
    use num_traits::One;

    fn r(n: i64) -> Rat {
        rat(n, 1)
    }

    #[test]
    fn vandermonde_two_and_three() {
        let b = antisym_to_schur(&MPoly::constant(2, Rat::one())).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].rows, vec![Poly::one(), Poly::x()]);
        let b3 = antisym_to_schur(&MPoly::constant(3, Rat::one())).unwrap();
        assert_eq!(b3.len(), 1);
        assert_eq!(
            b3[0].rows,
            vec![Poly::one(), Poly::x(), Poly::monomial(2, Rat::one())]
        );
    }

    #[test]
    fn sum_of_two_variables() {
        let f = &MPoly::var(2, 0) + &MPoly::var(2, 1);
        let b = antisym_to_schur(&f).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].rows, vec![Poly::one(), Poly::monomial(2, Rat::one())]);
    }

    #[test]
    fn rejects_non_symmetric() {
        let f = MPoly::<Rat>::var(2, 0);
        assert!(matches!(antisym_to_schur(&f), Err(TodaError::NotSymmetric)));
    }

    #[test]
    fn multi_block_roundtrip() {
        // e_1² + 3 e_2 − 2 in three variables
        let e1 = MPoly::<Rat>::elementary(3, 1);
        let e2 = MPoly::<Rat>::elementary(3, 2);
        let f = &(&(&e1 * &e1) + &e2.scale(&r(3))) - &MPoly::constant(3, r(2));
        let blocks = antisym_to_schur(&f).unwrap();
        assert!(blocks.len() > 1);
        let sum = blocks.iter().fold(MPoly::zero(3), |acc, b| &acc + &b.expand());
        assert_eq!(sum, &MPoly::vandermonde(3) * &f);
    }
}
