//! Betti and Euler generating functions for Hilbert schemes of points.
//!
//! The generating series over all `S^[n]` is an explicit infinite product
//! over the Betti numbers of `S`; truncating at `t^N` only factors with
//! `k <= N` can contribute, which makes the expansion finite. The same
//! product shape with `k = 1` gives symmetric powers, and summing symmetric
//! power polynomials over partitions with an age shift reproduces the
//! Hilbert-scheme polynomials — an independent route used as an oracle.
//!
//! Poincaré polynomials are stored with their genuine (non-negative) Betti
//! coefficients; Euler numbers are the alternating sums, i.e. evaluation at
//! `z = -1`.

use crate::eta::dedekind_product;
use crate::laurent::LaurentPoly;
use crate::partitions::partitions_of;
use crate::rat::Rat;
use crate::series::PowerSeries;
use crate::surface::SurfaceTopology;

/// Per-`n` Poincaré polynomials in `z`, indexed by `n = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareTable {
    polys: Vec<LaurentPoly>,
}

impl PoincareTable {
    pub fn from_polys(polys: Vec<LaurentPoly>) -> Self {
        assert!(!polys.is_empty());
        PoincareTable { polys }
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &LaurentPoly {
        &self.polys[n]
    }

    pub fn polys(&self) -> &[LaurentPoly] {
        &self.polys
    }

    /// Euler number at level `n`: alternating sum of the coefficients.
    pub fn euler(&self, n: usize) -> Rat {
        self.polys[n].euler_eval()
    }

    /// Poincaré duality check: coefficients symmetric about `z^{2n}`.
    pub fn is_palindromic(&self, n: usize) -> bool {
        self.polys[n].is_palindromic_about(4 * n as i64)
    }

    /// Dense Betti vector `[b_0, ..., b_{4n}]` of the level-`n` polynomial.
    pub fn betti_row(&self, n: usize) -> Vec<Rat> {
        self.polys[n]
            .dense_coeffs(4 * n as i64)
            .expect("poincare polynomials have non-negative exponents")
    }
}

/// `(1 + sign * z^a * t^k)^b` as a `t`-series with Laurent coefficients.
fn factor_series(sign: i64, a: i64, k: usize, b: i64, order: usize) -> PowerSeries<LaurentPoly> {
    debug_assert!(sign == 1 || sign == -1);
    let mut s = PowerSeries::zero("t", order);
    let jmax = order / k;
    if b >= 0 {
        let mut c = Rat::one();
        for j in 0..=jmax as i64 {
            let coeff = if sign == -1 && j % 2 == 1 { -c.clone() } else { c.clone() };
            s.set_coeff(k * j as usize, LaurentPoly::monomial(a * j, coeff));
            if j >= b {
                break;
            }
            c = c * Rat::new(b - j, j + 1);
        }
    } else {
        let p = -b;
        let mut c = Rat::one();
        for j in 0..=jmax as i64 {
            let coeff = if sign == 1 && j % 2 == 1 { -c.clone() } else { c.clone() };
            s.set_coeff(k * j as usize, LaurentPoly::monomial(a * j, coeff));
            c = c * Rat::new(p + j, j + 1);
        }
    }
    s
}

/// The five Betti factors at product level `k`, multiplied into `acc`.
fn multiply_level_factors(
    acc: PowerSeries<LaurentPoly>,
    betti: &[u32; 5],
    k: usize,
    order: usize,
) -> PowerSeries<LaurentPoly> {
    let mut acc = acc;
    for (i, &b) in betti.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let a = (2 * k - 2 + i) as i64;
        let factor = if i % 2 == 0 {
            factor_series(-1, a, k, -(b as i64), order)
        } else {
            factor_series(1, a, k, b as i64, order)
        };
        acc = acc.mul(&factor).expect("same variable");
    }
    acc
}

/// Poincaré polynomials of `S^[n]` for `n <= order`, from the product over
/// all `k <= order` of the five Betti factors of `S`.
pub fn hilbert_poincare(s: &SurfaceTopology, order: usize) -> PoincareTable {
    let mut acc = PowerSeries::one("t", order);
    for k in 1..=order.max(1) {
        if k > order {
            break;
        }
        acc = multiply_level_factors(acc, &s.betti, k, order);
    }
    PoincareTable { polys: (0..=order).map(|n| acc.coeff(n)).collect() }
}

/// Poincaré polynomials of the symmetric powers `S^(n)` for `n <= order`:
/// the `k = 1` slice of the Hilbert product.
pub fn symmetric_power_poincare(s: &SurfaceTopology, order: usize) -> PoincareTable {
    let acc = multiply_level_factors(PowerSeries::one("t", order), &s.betti, 1, order);
    PoincareTable { polys: (0..=order).map(|n| acc.coeff(n)).collect() }
}

/// Poincaré polynomial of `S^[n]` via the stratification by partitions:
/// each partition `alpha` of `n` contributes the product of symmetric-power
/// polynomials of its multiplicities, shifted by `z^{2(n - |alpha|)}`.
/// Computed independently of the infinite product.
pub fn hilbert_poincare_via_strata(s: &SurfaceTopology, n: usize) -> LaurentPoly {
    let sym = symmetric_power_poincare(s, n);
    let mut total = LaurentPoly::zero();
    for alpha in partitions_of(n as u32) {
        let mut term = LaurentPoly::constant(Rat::one());
        for &m in alpha.multiplicities().iter() {
            if m > 0 {
                term = crate::series::Coeff::mul(&term, sym.poly(m as usize));
            }
        }
        let shift = 2 * (n as i64 - alpha.length() as i64);
        total = crate::series::Coeff::add(&total, &term.shifted(shift));
    }
    total
}

/// Euler-number generating series `prod_{k>=1} (1 - q^k)^{-e}` to the given
/// order. The fractional prefactor of the eta identity is kept symbolic in
/// [`crate::eta::EtaPower`]; this is the integer-normalized series.
pub fn hilbert_euler_series(e: i64, order: usize) -> PowerSeries<Rat> {
    dedekind_product(-e, order)
}
