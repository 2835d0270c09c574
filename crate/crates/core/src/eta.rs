//! Powers of the Dedekind eta function as integer-exponent q-series.
//!
//! `eta^m = q^{m/24} * prod_{n>=1} (1 - q^n)^m`. The fractional power of q
//! is never expanded: an [`EtaPower`] stores the product expansion and keeps
//! the exponent `m/24` symbolically, so the series ring only ever sees
//! integer exponents. `eta^24 / q^{...}` recovers the discriminant series.

use crate::rat::Rat;
use crate::series::{PowerSeries, SeriesError};

/// `eta^m`, split into a symbolic prefactor `q^{m/24}` and the integer-power
/// product expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaPower {
    exponent: i64,
    series: PowerSeries<Rat>,
}

impl EtaPower {
    /// Expands `prod_{n>=1} (1 - q^n)^m` to the given truncation order.
    pub fn new(m: i64, order: usize) -> Self {
        EtaPower { exponent: m, series: dedekind_product(m, order) }
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// The symbolic prefactor exponent `m/24` as a reduced fraction.
    pub fn prefactor(&self) -> Rat {
        Rat::new(self.exponent, 24)
    }

    /// The integer-exponent series `prod (1 - q^n)^m`.
    pub fn series(&self) -> &PowerSeries<Rat> {
        &self.series
    }

    pub fn into_series(self) -> PowerSeries<Rat> {
        self.series
    }
}

/// `prod_{n>=1} (1 - q^n)^m` truncated at `order`.
///
/// Only factors with `n <= order` can contribute. For negative `m` each
/// factor is inverted as a geometric/binomial series before multiplying in.
pub fn dedekind_product(m: i64, order: usize) -> PowerSeries<Rat> {
    let mut acc = PowerSeries::one("q", order);
    if m == 0 {
        return acc;
    }
    for n in 1..=order {
        let factor = binomial_factor_series(n, m, order);
        acc = acc.mul(&factor).expect("same variable");
    }
    acc
}

/// `(1 - q^k)^m` for integer `m` of either sign, expanded directly from
/// binomial coefficients so no series inversion is needed.
pub(crate) fn binomial_factor_series(k: usize, m: i64, order: usize) -> PowerSeries<Rat> {
    let mut s = PowerSeries::zero("q", order);
    let jmax = order / k;
    if m >= 0 {
        // (1 - x)^m = sum_j (-1)^j C(m, j) x^j, finitely many terms.
        let mut c = Rat::one();
        for j in 0..=jmax {
            let sign = if j % 2 == 0 { c.clone() } else { -c.clone() };
            s.set_coeff(k * j, sign);
            if (j as i64) >= m {
                break;
            }
            c = c * Rat::new(m - j as i64, j as i64 + 1);
        }
    } else {
        // (1 - x)^{-p} = sum_j C(p - 1 + j, j) x^j.
        let p = -m;
        let mut c = Rat::one();
        for j in 0..=jmax {
            s.set_coeff(k * j, c.clone());
            c = c * Rat::new(p + j as i64, j as i64 + 1);
        }
    }
    s
}

/// The discriminant `Delta / q = prod (1 - q^n)^24` to the given order.
pub fn discriminant_over_q(order: usize) -> PowerSeries<Rat> {
    dedekind_product(24, order)
}

/// `D(Delta)/Delta` where `D = q d/dq`, computed without materializing the
/// fractional-free Delta: for `Delta = q E` one has `D(Delta)/Delta = 1 + D(E)/E`.
pub fn dlog_discriminant(order: usize) -> Result<PowerSeries<Rat>, SeriesError> {
    let e = discriminant_over_q(order);
    let ratio = e.d_log_derivative().mul(&e.inverse()?)?;
    ratio.add(&PowerSeries::one("q", order))
}
