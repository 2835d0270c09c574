//! Orbifold Euler numbers and age-graded dimensions for symmetric products.
//!
//! Conjugacy classes of the symmetric group are partitions; each class
//! carries the Poincaré polynomial of its fixed-locus quotient and an age.
//! Two independent computations of the orbifold Euler number are provided:
//! the class-indexed sum and a brute-force enumeration of commuting pairs.
//! The commuting-pair sum is implemented in normalized form, divided by the
//! group order, which is what makes the two forms agree.

use num_bigint::BigInt;

use crate::hilb::symmetric_power_poincare;
use crate::laurent::LaurentPoly;
use crate::partitions::{normalized_commuting_pair_sum, partitions_of, BruteForceBound};
use crate::rat::Rat;
use crate::series::Coeff;
use crate::surface::SurfaceTopology;

/// One record per conjugacy class: fixed-locus quotient data and age.
#[derive(Clone, Debug)]
pub struct OrbifoldRecord {
    pub label: String,
    pub fixed_quotient_poincare: LaurentPoly,
    pub age: u32,
    pub class_size: BigInt,
}

/// Per-class data for a finite group action. For symmetric products all
/// ages are integers (the quotient is Gorenstein); the generic interface
/// accepts caller-supplied records, with per-component ages the caller's
/// responsibility if fixed loci are disconnected.
#[derive(Clone, Debug)]
pub struct OrbifoldDatum {
    pub records: Vec<OrbifoldRecord>,
    /// Group order, when declared; class sizes must then sum to it.
    pub group_order: Option<BigInt>,
}

impl OrbifoldDatum {
    pub fn check_class_sizes(&self) -> bool {
        match &self.group_order {
            None => true,
            Some(order) => {
                let total: BigInt = self.records.iter().map(|r| r.class_size.clone()).sum();
                total == *order
            }
        }
    }
}

/// The symmetric-group datum for `S^(n)`: one record per partition of `n`,
/// with fixed locus the product of symmetric powers of the multiplicities
/// and age `n - |alpha|`.
pub fn symmetric_orbifold_datum(s: &SurfaceTopology, n: u32) -> OrbifoldDatum {
    let sym = symmetric_power_poincare(s, n as usize);
    let records = partitions_of(n)
        .into_iter()
        .map(|alpha| {
            let mut poly = LaurentPoly::constant(Rat::one());
            for &m in alpha.multiplicities().iter() {
                if m > 0 {
                    poly = Coeff::mul(&poly, sym.poly(m as usize));
                }
            }
            OrbifoldRecord {
                label: format!("{:?}", alpha.parts()),
                fixed_quotient_poincare: poly,
                age: alpha.age(),
                class_size: alpha.class_size(),
            }
        })
        .collect();
    OrbifoldDatum {
        records,
        group_order: Some(crate::partitions::factorial(n as usize)),
    }
}

/// Orbifold Euler number: sum over classes of the Euler number of the
/// fixed-locus quotient.
pub fn orbifold_euler(d: &OrbifoldDatum) -> Rat {
    d.records
        .iter()
        .fold(Rat::zero(), |mut acc, r| {
            acc += &r.fixed_quotient_poincare.euler_eval();
            acc
        })
}

/// Age-graded orbifold Poincaré polynomial: each class contributes its
/// fixed-locus polynomial shifted by `z^{2 age}`.
pub fn orbifold_poincare(d: &OrbifoldDatum) -> LaurentPoly {
    let mut total = LaurentPoly::zero();
    for r in &d.records {
        total = Coeff::add(&total, &r.fixed_quotient_poincare.shifted(2 * r.age as i64));
    }
    total
}

/// Brute-force orbifold Euler number of the n-th symmetric power of a space
/// with Euler number `e_s`: the normalized sum of `e_s^{orbits}` over all
/// commuting pairs in the symmetric group. Exact rational; integrality of
/// the result is a theorem, not an assumption, so the return type stays
/// rational and callers assert.
pub fn orbifold_euler_bruteforce(e_s: i64, n: u32, bound: u32) -> Result<Rat, BruteForceBound> {
    normalized_commuting_pair_sum(e_s, n, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilb::hilbert_poincare;
    use crate::partitions::DEFAULT_BRUTE_FORCE_BOUND;
    use crate::surface::{abelian, all_fixtures, k3};

    #[test]
    fn datum_shape_small_n() {
        let k3 = k3();
        let d1 = symmetric_orbifold_datum(&k3.topology, 1);
        assert_eq!(d1.records.len(), 1);
        assert_eq!(d1.records[0].age, 0);

        let d2 = symmetric_orbifold_datum(&k3.topology, 2);
        assert_eq!(d2.records.len(), 2);
        // (1,1): Sym^2, age 0, size 1; (2): diagonal, age 1, size 1.
        let ident = &d2.records[1];
        assert_eq!(ident.age, 0);
        assert_eq!(ident.class_size, BigInt::from(1));
        assert_eq!(ident.fixed_quotient_poincare.coeff(4), Rat::from_int(254));
        let transposition = &d2.records[0];
        assert_eq!(transposition.age, 1);
        assert_eq!(transposition.fixed_quotient_poincare.coeff(2), Rat::from_int(22));

        let d3 = symmetric_orbifold_datum(&k3.topology, 3);
        let mut sizes: Vec<BigInt> = d3.records.iter().map(|r| r.class_size.clone()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]);
        assert!(d3.check_class_sizes());
    }

    #[test]
    fn euler_numbers() {
        let k3 = k3();
        assert_eq!(orbifold_euler(&symmetric_orbifold_datum(&k3.topology, 0)), Rat::one());
        // 300 + 24 = 324.
        assert_eq!(
            orbifold_euler(&symmetric_orbifold_datum(&k3.topology, 2)),
            Rat::from_int(324)
        );
        let ab = abelian();
        for n in 1..=4 {
            assert_eq!(
                orbifold_euler(&symmetric_orbifold_datum(&ab.topology, n)),
                Rat::zero(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn graded_poincare_matches_hilbert_scheme() {
        for fx in all_fixtures() {
            let table = hilbert_poincare(&fx.topology, 6);
            for n in 0..=6u32 {
                let d = symmetric_orbifold_datum(&fx.topology, n);
                assert_eq!(
                    orbifold_poincare(&d),
                    *table.poly(n as usize),
                    "{} n={n}",
                    fx.topology.name
                );
            }
        }
    }

    #[test]
    fn euler_is_poincare_at_minus_one() {
        for fx in all_fixtures() {
            for n in 0..=5u32 {
                let d = symmetric_orbifold_datum(&fx.topology, n);
                assert_eq!(orbifold_euler(&d), orbifold_poincare(&d).euler_eval());
            }
        }
    }

    #[test]
    fn bruteforce_matches_class_sum() {
        for e in [-4i64, 0, 3, 24] {
            for n in 0..=4u32 {
                let brute = orbifold_euler_bruteforce(e, n, DEFAULT_BRUTE_FORCE_BOUND).unwrap();
                assert!(brute.is_integer(), "e={e} n={n} not integral: {brute}");
                // Compare against the class-indexed sum through a fixture
                // with the right Euler number when one exists.
                if e == 24 {
                    let d = symmetric_orbifold_datum(&k3().topology, n);
                    assert_eq!(brute, orbifold_euler(&d), "e={e} n={n}");
                }
            }
        }
    }

    #[test]
    fn bruteforce_k3_values() {
        assert_eq!(orbifold_euler_bruteforce(24, 1, 6).unwrap(), Rat::from_int(24));
        assert_eq!(orbifold_euler_bruteforce(24, 2, 6).unwrap(), Rat::from_int(324));
        assert_eq!(orbifold_euler_bruteforce(24, 3, 6).unwrap(), Rat::from_int(3200));
        assert!(orbifold_euler_bruteforce(24, 9, 6).is_err());
    }
}
