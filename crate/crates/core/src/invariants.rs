//! Polynomials in the four formal surface invariants.
//!
//! Node polynomials live in `Q[x, y, z, w]` where the variables stand for
//! `chi(L)`, `chi(O_S)`, `L.K_S` and `K_S^2`. Exponent vectors are dense
//! 4-tuples; coefficients are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use crate::rat::Rat;
use crate::series::Coeff;

pub const INVARIANT_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Polynomial in the formal invariants `(x, y, z, w)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct InvariantPoly {
    terms: BTreeMap<[u16; 4], Rat>,
}

impl InvariantPoly {
    pub fn zero() -> Self {
        InvariantPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert([0; 4], c);
        }
        p
    }

    /// The i-th variable (0 = x, 1 = y, 2 = z, 3 = w).
    pub fn variable(i: usize) -> Self {
        let mut exps = [0u16; 4];
        exps[i] = 1;
        let mut p = Self::zero();
        p.terms.insert(exps, Rat::one());
        p
    }

    pub fn add_term(&mut self, exps: [u16; 4], c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u16; 4], &Rat)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exps: [u16; 4]) -> Rat {
        self.terms.get(&exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Highest total degree among the monomials (zero polynomial -> 0).
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Substitutes rational values for the four variables.
    pub fn eval(&self, vals: &[Rat; 4]) -> Rat {
        let mut acc = Rat::zero();
        for (exps, c) in &self.terms {
            let mut m = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    m *= &vals[i].pow(e as i32).expect("integer power");
                }
            }
            acc += &m;
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e == &[0; 4])
    }
}

impl Coeff for InvariantPoly {
    fn zero() -> Self {
        InvariantPoly::zero()
    }

    fn one() -> Self {
        InvariantPoly::constant(Rat::one())
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
        let mut out = InvariantPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                let exps = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(exps, &(c1 * c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        InvariantPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    fn scale(&self, k: &Rat) -> Self {
        if k.is_zero() {
            return InvariantPoly::zero();
        }
        InvariantPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    fn try_inv(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&[0; 4]) {
                return c.recip().map(InvariantPoly::constant);
            }
        }
        None
    }

    fn from_rat(r: Rat) -> Self {
        InvariantPoly::constant(r)
    }
}

impl fmt::Debug for InvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(exps, c)| {
                let mut s = format!("{c}");
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{}", INVARIANT_NAMES[i])),
                        _ => s.push_str(&format!("*{}^{}", INVARIANT_NAMES[i], e)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
