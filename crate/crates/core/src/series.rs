//! Truncated formal power series with exact coefficients.
//!
//! A [`PowerSeries`] stores coefficients for exponents `0..=order` in one
//! main variable. Every value carries its truncation order explicitly and
//! binary operations truncate to the minimum of the two operands; nothing
//! is ever silently extended. Coefficients live in a ring implementing
//! [`Coeff`] — rationals, Laurent polynomials in auxiliary variables, or
//! polynomials in formal invariants — and never leave exact arithmetic.

use std::fmt;

use crate::rat::Rat;

/// Coefficient ring operations needed by the series engine.
///
/// `try_inv` returns `None` for non-invertible elements (only constants are
/// invertible in the polynomial coefficient rings), `scale` multiplies by a
/// rational scalar, and `from_rat` embeds constants.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, k: &Rat) -> Self;
    fn try_inv(&self) -> Option<Self>;
    fn from_rat(r: Rat) -> Self;
}

impl Coeff for Rat {
    fn zero() -> Self {
        Rat::zero()
    }
    fn one() -> Self {
        Rat::one()
    }
    fn is_zero(&self) -> bool {
        Rat::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, k: &Rat) -> Self {
        self * k
    }
    fn try_inv(&self) -> Option<Self> {
        self.recip()
    }
    fn from_rat(r: Rat) -> Self {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series variables differ: {0} vs {1}")]
    VariableMismatch(&'static str, &'static str),
    #[error("constant term is not invertible")]
    NonInvertibleConstant,
    #[error("{op} requires constant term {expected}")]
    BadConstantTerm { op: &'static str, expected: &'static str },
    #[error("composition requires inner series with zero constant term")]
    CompositionConstant,
    #[error("reversion requires f(0) = 0 and invertible linear coefficient")]
    NotRevertible,
}

/// Truncated power series: coefficients of `var^0 .. var^order`.
#[derive(Clone, PartialEq)]
pub struct PowerSeries<C: Coeff> {
    var: &'static str,
    coeffs: Vec<C>,
}

impl<C: Coeff> PowerSeries<C> {
    pub fn zero(var: &'static str, order: usize) -> Self {
        PowerSeries { var, coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(var: &'static str, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = C::one();
        s
    }

    pub fn constant(var: &'static str, c: C, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = c;
        s
    }

    /// `c * var^k`, zero if `k > order`.
    pub fn monomial(var: &'static str, c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(var: &'static str, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        PowerSeries { var, coeffs }
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `var^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: C) {
        assert!(k < self.coeffs.len(), "exponent beyond truncation order");
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// Restricts to a lower truncation order (never extends).
    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order());
        PowerSeries { var: self.var, coeffs: self.coeffs[..=order].to_vec() }
    }

    fn check_var(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.var != rhs.var {
            Err(SeriesError::VariableMismatch(self.var, rhs.var))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_var(rhs)?;
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].add(&rhs.coeffs[k]))
            .collect();
        Ok(PowerSeries { var: self.var, coeffs })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_var(rhs)?;
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].sub(&rhs.coeffs[k]))
            .collect();
        Ok(PowerSeries { var: self.var, coeffs })
    }

    pub fn neg(&self) -> Self {
        PowerSeries { var: self.var, coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, k: &Rat) -> Self {
        PowerSeries { var: self.var, coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect() }
    }

    /// Cauchy product truncated at the minimum order of the operands.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_var(rhs)?;
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Ok(PowerSeries { var: self.var, coeffs })
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0].try_inv().ok_or(SeriesError::NonInvertibleConstant)?;
        let order = self.order();
        let mut inv = vec![C::zero(); order + 1];
        inv[0] = c0.clone();
        // b_n = -a_0^{-1} * sum_{k=1..n} a_k b_{n-k}
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || inv[n - k].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].mul(&inv[n - k]));
            }
            inv[n] = acc.mul(&c0).neg();
        }
        Ok(PowerSeries { var: self.var, coeffs: inv })
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        if k == 0 {
            return Ok(Self::one(self.var, self.order()));
        }
        let (base, mut e) = if k < 0 {
            (self.inverse()?, k.unsigned_abs())
        } else {
            (self.clone(), k as u64)
        };
        let mut result = Self::one(self.var, self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(result)
    }

    /// Termwise derivative `d/dvar` (truncation order drops by one, padded
    /// back with a zero top coefficient so the order is preserved).
    pub fn derivative(&self) -> Self {
        let order = self.order();
        let mut coeffs = vec![C::zero(); order + 1];
        for k in 1..=order {
            coeffs[k - 1] = self.coeffs[k].scale(&Rat::from_int(k as i64));
        }
        PowerSeries { var: self.var, coeffs }
    }

    /// The operator `var * d/dvar`: multiplies the coefficient of `var^n` by `n`.
    pub fn d_log_derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.scale(&Rat::from_int(n as i64)))
            .collect();
        PowerSeries { var: self.var, coeffs }
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { op: "exp", expected: "0" });
        }
        let order = self.order();
        let mut e = vec![C::zero(); order + 1];
        e[0] = C::one();
        // n e_n = sum_{k=1..n} k a_k e_{n-k}
        for n in 1..=order {
            let mut acc = C::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || e[n - k].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[k].scale(&Rat::from_int(k as i64)).mul(&e[n - k]));
            }
            e[n] = acc.scale(&Rat::new(1, n as i64));
        }
        Ok(PowerSeries { var: self.var, coeffs: e })
    }

    /// Logarithm of a series with constant term one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0] != C::one() {
            return Err(SeriesError::BadConstantTerm { op: "log", expected: "1" });
        }
        // log f = integral of f'/f, integrated termwise from zero.
        let ratio = self.derivative().mul(&self.inverse()?)?;
        let order = self.order();
        let mut l = vec![C::zero(); order + 1];
        for n in 1..=order {
            l[n] = ratio.coeff(n - 1).scale(&Rat::new(1, n as i64));
        }
        Ok(PowerSeries { var: self.var, coeffs: l })
    }

    /// Raises a constant-term-one series to a rational power via exp(e*log).
    pub fn pow_rat(&self, e: &Rat) -> Result<Self, SeriesError> {
        self.log()?.scale(e).exp()
    }

    /// Substitutes `g` (with `g(0) = 0`) into `self`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        self.check_var(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(SeriesError::CompositionConstant);
        }
        let order = self.order().min(g.order());
        // Horner evaluation: f_0 + g (f_1 + g (f_2 + ...)).
        let g = g.truncated(order);
        let mut acc = PowerSeries::constant(self.var, self.coeff(order), order);
        for k in (0..order).rev() {
            acc = acc.mul(&g)?;
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[k]);
        }
        Ok(acc)
    }

    /// Compositional inverse: returns `g` with `f(g) = var` to the common
    /// order. Requires `f(0) = 0` and invertible `f'(0)`.
    pub fn revert(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NotRevertible);
        }
        let f1_inv = match self.coeffs.get(1).and_then(|c| c.try_inv()) {
            Some(c) => c,
            None => return Err(SeriesError::NotRevertible),
        };
        let order = self.order();
        let mut g = Self::zero(self.var, order);
        if order == 0 {
            return Ok(g);
        }
        g.coeffs[1] = f1_inv.clone();
        // Extend one order at a time: the error of f(g) at order n+1 is
        // linear in the unknown top coefficient with slope f'(0).
        for n in 2..=order {
            let err = self.compose(&g)?.coeff(n);
            g.coeffs[n] = err.mul(&f1_inv).neg();
        }
        Ok(g)
    }

    /// Changes coefficient ring through `f` (explicit promotion).
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> PowerSeries<D> {
        PowerSeries { var: self.var, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Reinterprets the series in another variable name.
    pub fn rename(&self, var: &'static str) -> Self {
        PowerSeries { var, coeffs: self.coeffs.clone() }
    }
}

impl PowerSeries<Rat> {
    /// Promotes rational coefficients into any coefficient ring.
    pub fn promote<D: Coeff>(&self) -> PowerSeries<D> {
        self.map_coeffs(|r| D::from_rat(r.clone()))
    }

    /// Divides by `var^k`, requiring the low-order coefficients to vanish.
    /// The truncation order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Option<Self> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return None;
        }
        Some(PowerSeries { var: self.var, coeffs: self.coeffs[k..].to_vec() })
    }
}

impl<C: Coeff> fmt::Debug for PowerSeries<C> {
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
            write!(f, "({:?})*{}^{}", c, self.var, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
