//! Property tests for the series substrate: ring axioms, roundtrips, and
//! the eta-power cancellation, all exact.

use proptest::prelude::*;

use hilbgen_core::eta::dedekind_product;
use hilbgen_core::rat::Rat;
use hilbgen_core::series::PowerSeries;

const ORDER: usize = 8;

fn small_series() -> impl Strategy<Value = PowerSeries<Rat>> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), ORDER + 1).prop_map(|pairs| {
        PowerSeries::from_coeffs(
            "q",
            pairs.into_iter().map(|(n, d)| Rat::new(n, d)).collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in small_series(), b in small_series(), c in small_series()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);

        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);

        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn exp_log_roundtrip(a in small_series()) {
        // Force constant term one.
        let mut f = a;
        f.set_coeff(0, Rat::one());
        let roundtrip = f.log().unwrap().exp().unwrap();
        prop_assert_eq!(roundtrip, f);
    }

    #[test]
    fn compose_revert_roundtrip(a in small_series()) {
        // Force f(0) = 0 and invertible linear term.
        let mut f = a;
        f.set_coeff(0, Rat::zero());
        if f.coeff(1).is_zero() {
            f.set_coeff(1, Rat::one());
        }
        let g = f.revert().unwrap();
        let composed = f.compose(&g).unwrap();
        let q = PowerSeries::monomial("q", Rat::one(), 1, ORDER);
        prop_assert_eq!(composed, q);
    }

    #[test]
    fn leibniz_rule(a in small_series(), b in small_series()) {
        let lhs = a.mul(&b).unwrap().d_log_derivative();
        let rhs = a
            .d_log_derivative()
            .mul(&b)
            .unwrap()
            .add(&a.mul(&b.d_log_derivative()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(a in small_series()) {
        let mut f = a;
        if f.coeff(0).is_zero() {
            f.set_coeff(0, Rat::from_int(2));
        }
        let inv = f.inverse().unwrap();
        prop_assert_eq!(f.mul(&inv).unwrap(), PowerSeries::one("q", ORDER));
    }
}

#[test]
fn eta_powers_cancel() {
    for m in [1i64, 12, 24] {
        let a = dedekind_product(m, 16);
        let b = dedekind_product(-m, 16);
        assert_eq!(a.mul(&b).unwrap(), PowerSeries::one("q", 16), "m = {m}");
    }
}
