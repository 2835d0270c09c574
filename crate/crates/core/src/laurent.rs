//! Laurent polynomials in a single auxiliary variable.
//!
//! These appear as series coefficients: the Betti variable `z` of Poincaré
//! polynomials rides along inside a `t`- or `q`-series. Exponents may be
//! negative; coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use crate::rat::Rat;
use crate::series::Coeff;

/// Laurent polynomial with rational coefficients, sparse by exponent.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    pub fn monomial(exp: i64, c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiplies by `z^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&e, c) in &self.terms {
            let p = x.pow(e as i32).expect("evaluation at zero with negative exponent");
            acc += &(c * &p);
        }
        acc
    }

    /// Evaluation at `z = 1`: the total dimension when the coefficients are
    /// Betti numbers.
    pub fn total(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |mut a, c| {
            a += c;
            a
        })
    }

    /// Evaluation at `z = -1`: the Euler number when the coefficients are
    /// Betti numbers.
    pub fn euler_eval(&self) -> Rat {
        let mut acc = Rat::zero();
        for (&e, c) in &self.terms {
            if e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// True if the coefficients are symmetric about `z^center_times_two / 2`,
    /// i.e. coeff(e) = coeff(center_times_two - e) for all e.
    pub fn is_palindromic_about(&self, center_times_two: i64) -> bool {
        self.terms
            .iter()
            .all(|(&e, c)| self.coeff(center_times_two - e) == *c)
    }

    /// Dense coefficient list for exponents `0..=max`; fails on negative
    /// exponents.
    pub fn dense_coeffs(&self, max: i64) -> Option<Vec<Rat>> {
        if self.min_exp().is_some_and(|m| m < 0) {
            return None;
        }
        Some((0..=max).map(|e| self.coeff(e)).collect())
    }
}

impl Coeff for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }

    fn one() -> Self {
        LaurentPoly::constant(Rat::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, &-c);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    fn try_inv(&self) -> Option<Self> {
        // Only nonzero constants are invertible in the polynomial ring.
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&0) {
                return c.recip().map(LaurentPoly::constant);
            }
        }
        None
    }

    fn from_rat(r: Rat) -> Self {
        LaurentPoly::constant(r)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(e, &Rat::from_int(c));
        }
        p
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = poly(&[(0, 1), (2, 3)]);
        let b = poly(&[(2, -3), (5, 1)]);
        let s = a.add(&b);
        assert_eq!(s, poly(&[(0, 1), (5, 1)]));
        let p = poly(&[(-1, 1), (1, 1)]).mul(&poly(&[(-1, 1), (1, -1)]));
        assert_eq!(p, poly(&[(-2, 1), (2, -1)]));
    }

    #[test]
    fn evaluations() {
        // 1 + 4z + 6z^2 + 4z^3 + z^4: total 16, euler 0.
        let p = poly(&[(0, 1), (1, 4), (2, 6), (3, 4), (4, 1)]);
        assert_eq!(p.total(), Rat::from_int(16));
        assert_eq!(p.euler_eval(), Rat::zero());
        assert!(p.is_palindromic_about(4));
        assert!(!p.is_palindromic_about(2));
    }

    #[test]
    fn inversion_constants_only() {
        assert_eq!(
            poly(&[(0, 2)]).try_inv(),
            Some(LaurentPoly::constant(Rat::new(1, 2)))
        );
        assert_eq!(poly(&[(1, 2)]).try_inv(), None);
        assert_eq!(poly(&[(0, 1), (1, 1)]).try_inv(), None);
    }
}
