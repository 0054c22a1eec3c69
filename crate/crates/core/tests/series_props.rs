use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use svzeta::series::{ihara_act, ihara_solve, random};
use svzeta::{Coeff, NCSeries};

type Q = NCSeries<BigRational>;

fn seeded() -> impl Strategy<Value = (usize, u64)> {
    (1usize..=6, any::<u64>())
}

fn unit(order: usize, seed: u64) -> Q {
    random::unit_series(&mut StdRng::seed_from_u64(seed), order)
}

fn group_like(order: usize, seed: u64) -> Q {
    random::group_like(&mut StdRng::seed_from_u64(seed), order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mul_is_associative_with_unit((n, s) in seeded()) {
        let (a, b, c) = (unit(n, s), unit(n, s ^ 1), unit(n, s ^ 2));
        let one = NCSeries::one(n);
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
        prop_assert_eq!(one.mul(&a).unwrap(), a);
    }

    #[test]
    fn ihara_act_preserves_group_likeness((n, s) in seeded()) {
        let (f, g) = (group_like(n, s), group_like(n, s ^ 7));
        prop_assert!(f.is_group_like() && g.is_group_like());
        prop_assert!(ihara_act(&f, &g).unwrap().is_group_like());
    }

    #[test]
    fn ihara_act_is_a_left_action((n, s) in seeded()) {
        let (f, g, h) = (unit(n, s), unit(n, s ^ 3), unit(n, s ^ 5));
        let left = ihara_act(&ihara_act(&f, &g).unwrap(), &h).unwrap();
        let right = ihara_act(&f, &ihara_act(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn ihara_solve_inverts_the_action((n, s) in seeded()) {
        let (g, h) = (unit(n, s), unit(n, s ^ 11));
        let f = ihara_solve(&g, &h).unwrap();
        prop_assert_eq!(ihara_act(&f, &g).unwrap(), h);
    }

    #[test]
    fn sigma_twist_is_a_homomorphism((n, s) in seeded()) {
        let (a, b) = (unit(n, s), unit(n, s ^ 13));
        prop_assert_eq!(
            a.mul(&b).unwrap().sigma_twist(),
            a.sigma_twist().mul(&b.sigma_twist()).unwrap()
        );
        prop_assert_eq!(a.inverse().unwrap().sigma_twist(), a.sigma_twist().inverse().unwrap());
    }

    #[test]
    fn antipode_inverts_group_like((n, s) in seeded()) {
        let a = group_like(n, s);
        prop_assert_eq!(a.antipode(), a.inverse().unwrap());
    }

    #[test]
    fn log_exp_round_trip((n, s) in seeded()) {
        let a = group_like(n, s);
        prop_assert_eq!(a.log().unwrap().exp().unwrap(), a);
    }
}

#[test]
fn mixed_orders_are_rejected() {
    let a: Q = NCSeries::one(3);
    let b: Q = NCSeries::one(4);
    assert!(a.mul(&b).is_err());
    assert!(a.add(&b).is_err());
    assert!(ihara_act(&a, &b).is_err());
}

#[test]
fn inverse_of_unit_constant() {
    let a = unit(5, 42);
    let prod = a.mul(&a.inverse().unwrap()).unwrap();
    assert_eq!(prod, NCSeries::one(5));
    assert!(prod.constant().is_one());
}
