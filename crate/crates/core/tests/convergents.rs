use irrbase::gamma_const::{const_value, ConstName, ConstRequest};
use irrbase::liouville::{cf_convergents, cf_expand, cf_expand_rational, cf_value, determinants};
use irrbase::precreal::ErrReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn check_records(x: &ErrReal, depth: usize) {
    let q = cf_expand(x, depth).unwrap();
    let recs = cf_convergents(&q, x);
    for d in determinants(&recs) {
        assert!(d.abs().is_one());
    }
    for w in recs.windows(2).skip(1) {
        assert!(w[1].q_k > w[0].q_k);
    }
    for r in &recs {
        // |alpha - p/q| < 1/q^2
        let q2 = ErrReal::from_biguint(&(&r.q_k * &r.q_k), 64);
        let inv = ErrReal::from_u64(1, 64).div(&q2).unwrap();
        assert!(r.err.hi() < inv.lo() || r.err.overlaps(&ErrReal::zero(64)), "k={}", r.k);
    }
}

#[test]
fn constants() {
    for name in [ConstName::E, ConstName::Pi, ConstName::Ln2, ConstName::Gamma] {
        let x = const_value(ConstRequest::new(name, 120)).unwrap();
        check_records(&x, 60);
    }
    check_records(&ErrReal::from_u64(3, 400).sqrt().unwrap(), 80);
}

#[test]
fn e_has_its_pattern() {
    let e = const_value(ConstRequest::new(ConstName::E, 80)).unwrap();
    let q: Vec<i64> = cf_expand(&e, 11).unwrap().iter().map(|a| a.to_string().parse().unwrap()).collect();
    assert_eq!(q, [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1]);
}

proptest! {
    #[test]
    fn rationals_round_trip(p in -100000i64..100000, q in 1i64..100000) {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let a = cf_expand_rational(&r, 100);
        prop_assert_eq!(cf_value(&a), r.clone());
        let recs = cf_convergents(&a, &ErrReal::from_rational(&r, 128));
        for d in determinants(&recs) {
            prop_assert!(d.abs().is_one());
        }
    }
}
