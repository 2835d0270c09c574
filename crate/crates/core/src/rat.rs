//! Arbitrary-precision rational numbers.
//!
//! `Rat` is the coefficient field for every series in the crate. It is a
//! thin wrapper over [`num_rational::BigRational`], which keeps fractions
//! reduced with a positive denominator, and adds the canonical `num/den`
//! text form used by the JSON interfaces.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number: reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// `num/den` as a reduced fraction. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// The value as an `i64`, if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: i32) -> Option<Rat> {
        if exp >= 0 {
            Some(Rat(num_traits::pow::Pow::pow(&self.0, exp as u32)))
        } else {
            self.recip()
                .map(|r| Rat(num_traits::pow::Pow::pow(&r.0, (-exp) as u32)))
        }
    }

    /// Canonical text form `num/den`; integers print without the `/den`.
    pub fn to_fraction_string(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fraction_string())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fraction_string())
    }
}

impl FromStr for Rat {
    type Err = String;

    /// Parses `num`, `num/den`, or `-num/den` with arbitrary-precision parts.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
                let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
                if d.is_zero() {
                    return Err("zero denominator".into());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = s.parse().map_err(|e| format!("bad integer: {e}"))?;
                Ok(Rat(BigRational::from_integer(n)))
            }
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($Op:ident, $method:ident) => {
        impl $Op for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl $Op<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $Op<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_with_positive_denominator() {
        let r = Rat::new(6, -4);
        assert_eq!(r.to_fraction_string(), "-3/2");
        assert!(r.denom() > &BigInt::from(0));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "5", "-7", "3/4", "-22/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_fraction_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn arithmetic() {
        let a = Rat::new(1, 2);
        let b = Rat::new(1, 3);
        assert_eq!(&a + &b, Rat::new(5, 6));
        assert_eq!(&a * &b, Rat::new(1, 6));
        assert_eq!(&a - &b, Rat::new(1, 6));
        assert_eq!(a.recip().unwrap(), Rat::from_int(2));
        assert_eq!(Rat::zero().recip(), None);
        assert_eq!(Rat::new(2, 3).pow(-2).unwrap(), Rat::new(9, 4));
    }
}
