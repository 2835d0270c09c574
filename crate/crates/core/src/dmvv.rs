//! The elliptic-genus product formula: expansion and inversion.
//!
//! The generating series of elliptic genera of the Hilbert schemes is a
//! triple product over `(n, m, l)` with exponents read from a coefficient
//! table `c(m, l)`. The table is pure input here (a finite map with a
//! declared window); nothing is computed from geometry. `product` expands
//! the triple product exactly, `invert` recovers the table from a series by
//! taking the logarithm and peeling p-orders, reporting any obstruction to
//! product form (non-integer or inconsistent exponents).

use std::collections::BTreeMap;
use std::fmt;

use crate::rat::Rat;
use crate::series::{Coeff, PowerSeries};

/// Laurent polynomial in `(q, y)`: the coefficient ring of the product
/// series in `p`. `q` exponents stay non-negative; `y` exponents may be
/// negative and are never truncated (they are bounded on any finite
/// p-order window).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct QYLaurent {
    terms: BTreeMap<(i64, i64), Rat>,
}

impl QYLaurent {
    pub fn monomial(q: i64, y: i64, c: Rat) -> Self {
        let mut p = QYLaurent::default();
        p.add_term(q, y, &c);
        p
    }

    pub fn add_term(&mut self, q: i64, y: i64, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((q, y)).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(q, y));
        }
    }

    pub fn coeff(&self, q: i64, y: i64) -> Rat {
        self.terms.get(&(q, y)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &Rat)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    /// Drops all terms with q-exponent above the bound (a quotient map as
    /// long as every factor only raises q).
    fn truncate_q(&mut self, max_q: i64) {
        self.terms.retain(|&(q, _), _| q <= max_q);
    }
}

impl Coeff for QYLaurent {
    fn zero() -> Self {
        QYLaurent::default()
    }

    fn one() -> Self {
        QYLaurent::monomial(0, 0, Rat::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k.0, k.1, c);
        }
        out
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k.0, k.1, &-c);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = QYLaurent::default();
        for (&(q1, y1), c1) in &self.terms {
            for (&(q2, y2), c2) in &rhs.terms {
                out.add_term(q1 + q2, y1 + y2, &(c1 * c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        QYLaurent { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return QYLaurent::default();
        }
        QYLaurent { terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&(0, 0)) {
                return c.recip().map(|r| QYLaurent::monomial(0, 0, r));
            }
        }
        None
    }

    fn from_rat(r: Rat) -> Self {
        QYLaurent::monomial(0, 0, r)
    }
}

impl fmt::Debug for QYLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(q, y), c)| format!("{c} q^{q} y^{y}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exponent table `c(m, l)` with its declared window: entries absent inside
/// the window are zero, arguments beyond it are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmvvTable {
    entries: BTreeMap<(u32, i64), i64>,
    pub m_max: u32,
    pub l_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DmvvError {
    #[error("table window insufficient: factor (n={n}, m={m}) needs c({arg}, l) but the window ends at {m_max}")]
    WindowInsufficient { n: usize, m: usize, arg: u32, m_max: u32 },
    #[error("entry ({m}, {l}) outside the declared window (m_max={m_max}, |l|<={l_bound})")]
    EntryOutsideWindow { m: u32, l: i64, m_max: u32, l_bound: i64 },
    #[error("series is not a product of the required form: non-integer exponent {value} for c({m}, {l})")]
    NonIntegerExponent { m: u32, l: i64, value: String },
    #[error("series is not a product of the required form: c({m}, {l}) peels to {second} at p-order {order} but was {first}")]
    InconsistentExponent { m: u32, l: i64, first: i64, second: i64, order: usize },
    #[error("series constant term is not 1")]
    BadConstantTerm,
}

impl DmvvTable {
    pub fn new(m_max: u32, l_bound: i64) -> Self {
        DmvvTable { entries: BTreeMap::new(), m_max, l_bound }
    }

    pub fn set(&mut self, m: u32, l: i64, c: i64) -> Result<(), DmvvError> {
        if m > self.m_max || l.abs() > self.l_bound {
            return Err(DmvvError::EntryOutsideWindow {
                m,
                l,
                m_max: self.m_max,
                l_bound: self.l_bound,
            });
        }
        if c == 0 {
            self.entries.remove(&(m, l));
        } else {
            self.entries.insert((m, l), c);
        }
        Ok(())
    }

    pub fn get(&self, m: u32, l: i64) -> Option<i64> {
        if m > self.m_max || l.abs() > self.l_bound {
            None
        } else {
            Some(self.entries.get(&(m, l)).copied().unwrap_or(0))
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, i64), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nonzero_map(&self) -> &BTreeMap<(u32, i64), i64> {
        &self.entries
    }

    /// Parses the line format `m l c`, one entry per line; `#` comments and
    /// blank lines are ignored. The window is the max observed `m` and `|l|`
    /// unless wider bounds are given.
    pub fn parse(text: &str, m_max: Option<u32>, l_bound: Option<i64>) -> Result<Self, String> {
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(format!("line {}: expected `m l c`", idx + 1));
            }
            let m: u32 = parts[0].parse().map_err(|e| format!("line {}: {e}", idx + 1))?;
            let l: i64 = parts[1].parse().map_err(|e| format!("line {}: {e}", idx + 1))?;
            let c: i64 = parts[2].parse().map_err(|e| format!("line {}: {e}", idx + 1))?;
            raw.push((m, l, c));
        }
        let m_hi = m_max.unwrap_or_else(|| raw.iter().map(|&(m, _, _)| m).max().unwrap_or(0));
        let l_hi = l_bound.unwrap_or_else(|| raw.iter().map(|&(_, l, _)| l.abs()).max().unwrap_or(0));
        let mut table = DmvvTable::new(m_hi, l_hi);
        for (m, l, c) in raw {
            table.set(m, l, c).map_err(|e| e.to_string())?;
        }
        Ok(table)
    }

    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for ((m, l), c) in self.entries() {
            out.push_str(&format!("{m} {l} {c}\n"));
        }
        out
    }
}

/// Expands the triple product
/// `prod_{n>0, m>=0, l} (1 - p^n q^m y^l)^{-c(nm, l)}`
/// exactly to p-order `np` and q-order `nq`; `y` is carried exactly. The
/// declared window must cover every argument the expansion can touch
/// (`m_max >= np * nq`). Factors with `m = 0` and `l <= 0` are finitely
/// many by construction (the table is a finite map), so the product is
/// always well formed.
pub fn dmvv_product(
    table: &DmvvTable,
    np: usize,
    nq: usize,
) -> Result<PowerSeries<QYLaurent>, DmvvError> {
    let mut acc = PowerSeries::<QYLaurent>::one("p", np);
    for n in 1..=np {
        for m in 0..=nq {
            let arg = (n * m) as u32;
            for l in -table.l_bound..=table.l_bound {
                let c = match table.get(arg, l) {
                    Some(c) => c,
                    None => {
                        return Err(DmvvError::WindowInsufficient {
                            n,
                            m,
                            arg,
                            m_max: table.m_max,
                        })
                    }
                };
                if c == 0 {
                    continue;
                }
                let factor = binomial_qy_factor(n, m as i64, l, -c, np);
                acc = acc.mul(&factor).expect("same variable");
                for k in 0..=acc.order() {
                    let mut v = acc.coeff(k);
                    v.truncate_q(nq as i64);
                    acc.set_coeff(k, v);
                }
            }
        }
    }
    Ok(acc)
}

/// `(1 - p^n q^m y^l)^{e}` for integer `e` of either sign, as a p-series.
fn binomial_qy_factor(n: usize, m: i64, l: i64, e: i64, np: usize) -> PowerSeries<QYLaurent> {
    let mut s = PowerSeries::zero("p", np);
    let jmax = (np / n) as i64;
    if e >= 0 {
        let mut c = Rat::one();
        for j in 0..=jmax {
            let val = if j % 2 == 0 { c.clone() } else { -c.clone() };
            s.set_coeff(n * j as usize, QYLaurent::monomial(m * j, l * j, val));
            if j >= e {
                break;
            }
            c = c * Rat::new(e - j, j + 1);
        }
    } else {
        let pexp = -e;
        let mut c = Rat::one();
        for j in 0..=jmax {
            s.set_coeff(n * j as usize, QYLaurent::monomial(m * j, l * j, c.clone()));
            c = c * Rat::new(pexp + j, j + 1);
        }
    }
    s
}

/// Recovers the exponent table from a product-form series: take the
/// logarithm in `p` and peel orders. Order `n` determines `c(n m, l)` for
/// all `m <= nq` after subtracting the contributions of divisor orders;
/// overlapping determinations must agree and every exponent must be an
/// integer, otherwise the input is not of product form.
pub fn dmvv_invert(series: &PowerSeries<QYLaurent>, nq: usize) -> Result<DmvvTable, DmvvError> {
    if series.coeff(0) != QYLaurent::one() {
        return Err(DmvvError::BadConstantTerm);
    }
    let np = series.order();
    let log = series.log().map_err(|_| DmvvError::BadConstantTerm)?;

    let mut determined: BTreeMap<(u32, i64), (i64, usize)> = BTreeMap::new();
    for n in 1..=np {
        // Subtract the divisor contributions (1/j) c((n/j) m, l) q^{jm} y^{jl}.
        let mut residual = log.coeff(n);
        for j in 2..=n {
            if n % j != 0 {
                continue;
            }
            let base = n / j;
            for (&(arg, l), &(c, _)) in determined.iter() {
                if arg as usize % base != 0 {
                    continue;
                }
                let m = arg as usize / base;
                // Only entries first determined from p-order `base` matter;
                // arg = base * m with m <= nq.
                if m > nq {
                    continue;
                }
                let contribution = Rat::new(c, j as i64);
                residual.add_term((j * m) as i64, j as i64 * l, &-contribution);
            }
        }
        // Entries this order re-derives must peel to the same value,
        // including entries that now peel to zero.
        for (&(arg, l), &(first, _)) in determined.iter() {
            if arg as usize % n != 0 {
                continue;
            }
            let m = arg as usize / n;
            if m > nq {
                continue;
            }
            let val = residual.coeff(m as i64, l);
            let second = val.to_i64().ok_or_else(|| DmvvError::NonIntegerExponent {
                m: arg,
                l,
                value: val.to_fraction_string(),
            })?;
            if first != second {
                return Err(DmvvError::InconsistentExponent { m: arg, l, first, second, order: n });
            }
        }
        // What remains reads off new entries c(n m, l) at q-exponent m.
        for ((q, y), val) in residual.terms() {
            if val.is_zero() || q > nq as i64 {
                continue;
            }
            let arg = (n as i64 * q) as u32;
            if determined.contains_key(&(arg, y)) {
                continue;
            }
            let c = val.to_i64().ok_or_else(|| DmvvError::NonIntegerExponent {
                m: arg,
                l: y,
                value: val.to_fraction_string(),
            })?;
            determined.insert((arg, y), (c, n));
        }
    }

    let m_max = (np * nq) as u32;
    let l_bound = determined
        .keys()
        .map(|&(_, l)| l.abs())
        .max()
        .unwrap_or(0);
    let mut table = DmvvTable::new(m_max, l_bound);
    for (&(m, l), &(c, _)) in &determined {
        if c != 0 {
            table.set(m, l, c).expect("within window by construction");
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_entry_roundtrip() {
        // A table mixing levels and y-signs survives the product/invert
        // roundtrip exactly. Support must stay within q-order reach (every
        // m <= nq is read off at p-order one).
        let mut t = DmvvTable::new(6, 1);
        t.set(1, 1, 2).unwrap();
        t.set(3, -1, 1).unwrap();
        let f = dmvv_product(&t, 2, 3).unwrap();
        let back = dmvv_invert(&f, 3).unwrap();
        assert_eq!(back.nonzero_map(), t.nonzero_map());
    }

    #[test]
    fn empty_table_gives_one() {
        let t = DmvvTable::new(16, 3);
        let f = dmvv_product(&t, 4, 4).unwrap();
        assert_eq!(f, PowerSeries::one("p", 4));
        let back = dmvv_invert(&f, 4).unwrap();
        assert!(back.nonzero_map().is_empty());
    }

    #[test]
    fn partition_generating_function_from_c00() {
        // c(0,0) = 1 only: the product over n of (1 - p^n)^{-1}.
        let mut t = DmvvTable::new(25, 0);
        t.set(0, 0, 1).unwrap();
        let f = dmvv_product(&t, 5, 5).unwrap();
        let expected = crate::eta::dedekind_product(-1, 5);
        for k in 0..=5 {
            assert_eq!(f.coeff(k).coeff(0, 0), expected.coeff(k), "p^{k}");
        }
    }

    #[test]
    fn single_entry_example() {
        // c(1,1) = 2: the only factor within (p^2, q^2) is (1 - pqy)^{-2}.
        let mut t = DmvvTable::new(4, 1);
        t.set(1, 1, 2).unwrap();
        let f = dmvv_product(&t, 2, 2).unwrap();
        assert_eq!(f.coeff(1).coeff(1, 1), Rat::from_int(2));
        assert_eq!(f.coeff(2).coeff(2, 2), Rat::from_int(3));
    }

    #[test]
    fn window_insufficiency_detected() {
        let t = DmvvTable::new(3, 1);
        assert!(matches!(
            dmvv_product(&t, 2, 2),
            Err(DmvvError::WindowInsufficient { .. })
        ));
    }

    #[test]
    fn non_product_series_rejected() {
        // 1 + p is not of product form: the shared m=0 exponent cannot fit
        // both p-orders.
        let mut f = PowerSeries::<QYLaurent>::one("p", 2);
        f.set_coeff(1, QYLaurent::one());
        let err = dmvv_invert(&f, 2).unwrap_err();
        assert!(matches!(err, DmvvError::InconsistentExponent { .. }), "{err:?}");
    }

    #[test]
    fn half_integer_exponent_rejected() {
        // sqrt of the partition product: log has coefficient 1/2 at p^1.
        let mut t = DmvvTable::new(4, 0);
        t.set(0, 0, 1).unwrap();
        let f = dmvv_product(&t, 2, 2).unwrap();
        let root = f.log().unwrap().scale(&Rat::new(1, 2)).exp().unwrap();
        assert!(matches!(
            dmvv_invert(&root, 2),
            Err(DmvvError::NonIntegerExponent { .. })
        ));
    }

    #[test]
    fn parse_and_print_lines() {
        let text = "# table\n0 0 1\n1 -1 4\n";
        let t = DmvvTable::parse(text, Some(8), Some(2)).unwrap();
        assert_eq!(t.get(1, -1), Some(4));
        assert_eq!(t.get(2, 0), Some(0));
        assert_eq!(t.get(9, 0), None);
        assert_eq!(t.to_lines(), "0 0 1\n1 -1 4\n");
    }
}
