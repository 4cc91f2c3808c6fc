mod common;

use irrbase::precreal::{Bound, ErrReal};
use proptest::prelude::*;

#[test]
fn random_expressions_are_sound() {
    let s = common::errreal_soundness(7, 2000, 96);
    assert!(s.violations.is_empty(), "{:#?}", &s.violations[..s.violations.len().min(5)]);
    assert!(s.exact_checked > 100);
}

proptest! {
    #[test]
    fn sum_contains_exact(a in -1e6f64..1e6, b in -1e6f64..1e6, p in 24usize..200) {
        let x = ErrReal::from_f64(a, p).add(&ErrReal::from_f64(b, p));
        let exact = ErrReal::from_f64(a, 200).add(&ErrReal::from_f64(b, 200));
        prop_assert!(x.overlaps(&exact));
    }

    #[test]
    fn ln_exp_round_trip(a in -20f64..20.0, p in 64usize..256) {
        let x = ErrReal::from_f64(a, p);
        let y = x.exp().unwrap().ln().unwrap();
        prop_assert!(y.overlaps(&x));
        prop_assert!(*y.abs_err() < Bound::pow2(-(p as i64) + 12));
    }
}
