use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::Neg;

pub type Rat = BigRational;
pub type CRat = Complex<Rat>;

/// Coefficient ring for [`super::Poly`].
pub trait Coeff: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    fn from_int(v: i64) -> Self;
}

/// Coefficient rings containing the imaginary unit.
pub trait ComplexCoeff: Coeff {
    fn i() -> Self;
}

impl Coeff for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Coeff for Complex64 {
    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl ComplexCoeff for Complex64 {
    fn i() -> Self {
        Complex64::i()
    }
}

impl Coeff for Rat {
    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
}

impl Coeff for CRat {
    fn from_int(v: i64) -> Self {
        Complex::new(Rat::from_int(v), Rat::zero())
    }
}

impl ComplexCoeff for CRat {
    fn i() -> Self {
        Complex::new(Rat::zero(), Rat::one())
    }
}

/// `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn crat_to_c64(c: &CRat) -> Complex64 {
    Complex64::new(
        c.re.to_f64().unwrap_or(f64::NAN),
        c.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// Exact rational image of a finite double (every finite double is a dyadic rational).
pub fn c64_to_crat(z: Complex64) -> CRat {
    Complex::new(
        Rat::from_float(z.re).expect("finite real part"),
        Rat::from_float(z.im).expect("finite imaginary part"),
    )
}
