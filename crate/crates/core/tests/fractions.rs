mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rigidum_core::fractions::{Fraction, Quotient, TagId, VectorE};
use rigidum_core::ring::RingElement;

use common::*;

/// Value of an integer fraction as a rational number.
fn rational(q: &Quotient, f: &Fraction) -> BigRational {
    let RingElement::Int(n) = &f.num else { panic!("integer numerator") };
    let mut d = BigInt::one();
    for (t, &k) in &f.den {
        let RingElement::Int(p) = &q.tags.get(t).unwrap().element else { panic!() };
        d *= p.pow(k);
    }
    BigRational::new(n.clone(), d)
}

fn arb_int_fraction() -> impl Strategy<Value = (i64, Vec<u32>)> {
    (-60i64..60, proptest::collection::vec(0u32..3, 6))
}

fn build(q: &Quotient, (n, exps): &(i64, Vec<u32>)) -> Fraction {
    let ids = ["a0", "b0", "a1", "b1", "c0", "c1"];
    let den: BTreeMap<TagId, u32> = ids
        .iter()
        .zip(exps)
        .filter(|(_, &k)| k > 0)
        .map(|(t, &k)| (TagId((*t).into()), k))
        .collect();
    q.fraction(q.ring.from_i64(*n), den).unwrap()
}

#[test]
fn half_minus_third_is_sixth() {
    let s = integer_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let sum = q.add(&frac(&s, "1", &[("2", 1)]), &frac(&s, "-1", &[("3", 1)])).unwrap();
    assert_eq!(sum, frac(&s, "1", &[("2", 1), ("3", 1)]));
}

#[test]
fn scaling_clears_denominator() {
    let s = integer_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let f = q.scale(&el(&s, "11"), &frac(&s, "2", &[("11", 1)])).unwrap();
    assert!(f.den.is_empty());
    assert_eq!(f.num, el(&s, "2"));
}

#[test]
fn skew_scaling_applies_commutation_rule() {
    let s = weyl_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let f = q.scale(&el(&s, "y"), &frac(&s, "x", &[("2", 1)])).unwrap();
    assert_eq!(f, frac(&s, "x*y + 1", &[("2", 1)]));
    assert_eq!(q.render(&f), "[(2)]^-1*(x*y + 1)");
}

#[test]
fn normalization_cancels_common_factors() {
    let s = integer_spec();
    let f = frac(&s, "22", &[("11", 2), ("2", 1)]);
    assert_eq!(f, frac(&s, "1", &[("11", 1)]));
    let z = frac(&s, "0", &[("13", 3)]);
    assert!(z.den.is_empty());
}

#[test]
fn vector_examples() {
    let s = integer_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let e1 = |f: Fraction| q.unit_vector(cid("e1"), f);
    let sum = q.vec_add(&e1(frac(&s, "2", &[])), &e1(frac(&s, "3", &[]))).unwrap();
    assert_eq!(sum, e1(frac(&s, "5", &[])));
    let v = q.vec_add(&e1(frac(&s, "1", &[("11", 1)])), &q.unit_vector(cid("e0"), frac(&s, "3", &[]))).unwrap();
    assert!(q.vec_scale(&el(&s, "0"), &v).unwrap().is_zero());
    let cancel = q.vec_add(&e1(frac(&s, "1", &[("2", 1)])), &e1(frac(&s, "-1", &[("2", 1)]))).unwrap();
    assert!(cancel.is_zero());
    assert_eq!(cancel, VectorE::zero());
}

#[test]
fn json_shape_and_round_trip() {
    let s = integer_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let f = frac(&s, "2", &[("11", 1), ("13", 2)]);
    let j = q.fraction_json(&f);
    assert_eq!(j, serde_json::json!({"num": "2", "den": [{"irr": "c0", "exp": 1}, {"irr": "c1", "exp": 2}]}));
    assert_eq!(q.fraction_from_json(&j).unwrap(), f);
    let v = q.vec_add(&q.unit_vector(cid("aa"), f.clone()), &q.unit_vector(cid("bb"), frac(&s, "-7", &[]))).unwrap();
    assert_eq!(q.vector_from_json(&q.vector_json(&v)).unwrap(), v);
}

#[test]
fn unknown_tag_is_rejected() {
    let s = integer_spec();
    let q = Quotient::new(&s.ring, &s.tags);
    let den: BTreeMap<TagId, u32> = [(TagId("zz".into()), 1)].into();
    assert!(q.fraction(q.ring.one(), den).is_err());
}

proptest! {
    #[test]
    fn normalization_is_idempotent_and_value_preserving(a in arb_int_fraction()) {
        let s = integer_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let f = build(&q, &a);
        prop_assert_eq!(q.normalize(&f).unwrap(), f.clone());
        let primes = [2i64, 5, 3, 7, 11, 13];
        let mut d = BigInt::one();
        for (i, k) in a.1.iter().enumerate() {
            d *= BigInt::from(primes[i]).pow(*k);
        }
        prop_assert_eq!(rational(&q, &f), BigRational::new(BigInt::from(a.0), d));
    }

    #[test]
    fn arithmetic_matches_rationals(a in arb_int_fraction(), b in arb_int_fraction(), r in -20i64..20) {
        let s = integer_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let (f, g) = (build(&q, &a), build(&q, &b));
        let (rf, rg) = (rational(&q, &f), rational(&q, &g));
        prop_assert_eq!(rational(&q, &q.add(&f, &g).unwrap()), &rf + &rg);
        prop_assert_eq!(rational(&q, &q.sub(&f, &g).unwrap()), &rf - &rg);
        prop_assert_eq!(rational(&q, &q.neg(&f).unwrap()), -rf.clone());
        prop_assert_eq!(rational(&q, &q.scale(&s.ring.from_i64(r), &f).unwrap()), rf * BigRational::from_integer(r.into()));
    }

    #[test]
    fn additive_group_laws(a in arb_int_fraction(), b in arb_int_fraction(), c in arb_int_fraction()) {
        let s = integer_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let (f, g, h) = (build(&q, &a), build(&q, &b), build(&q, &c));
        let add = |x: &Fraction, y: &Fraction| q.add(x, y).unwrap();
        prop_assert_eq!(add(&add(&f, &g), &h), add(&f, &add(&g, &h)));
        prop_assert_eq!(add(&f, &g), add(&g, &f));
        prop_assert_eq!(add(&f, &q.zero()), f.clone());
        prop_assert!(q.is_zero(&add(&f, &q.neg(&f).unwrap())));
    }

    #[test]
    fn support_is_monotone_under_addition(a in arb_int_fraction(), b in arb_int_fraction()) {
        let s = integer_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let (f, g) = (build(&q, &a), build(&q, &b));
        let sum = q.add(&f, &g).unwrap();
        let union: std::collections::BTreeSet<_> = f.support().union(&g.support()).cloned().collect();
        prop_assert!(sum.support().is_subset(&union));
    }

    #[test]
    fn frac_is_the_class_modulo_d(a in arb_int_fraction(), b in arb_int_fraction()) {
        let s = integer_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let (f, g) = (build(&q, &a), build(&q, &b));
        let ff = q.frac(&f).unwrap();
        prop_assert!((rational(&q, &f) - rational(&q, &ff)).is_integer());
        prop_assert_eq!(q.frac(&ff).unwrap(), ff.clone());
        let same_class = (rational(&q, &f) - rational(&q, &g)).is_integer();
        prop_assert_eq!(q.frac(&g).unwrap() == ff, same_class);
    }

    #[test]
    fn skew_left_module_laws(seed in any::<u64>(), exps in proptest::collection::vec(0u32..3, 2)) {
        let s = weyl_spec();
        let q = Quotient::new(&s.ring, &s.tags);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = s.ring.random_element(&mut rng, 4);
        let t = s.ring.random_element(&mut rng, 4);
        let mk = |rng: &mut ChaCha8Rng, k: u32| {
            let den: BTreeMap<TagId, u32> = if k > 0 { [(TagId("a0".into()), k)].into() } else { BTreeMap::new() };
            q.fraction(s.ring.random_element(rng, 4), den).unwrap()
        };
        let f = mk(&mut rng, exps[0]);
        let g = mk(&mut rng, exps[1]);
        let rt = s.ring.mul(&r, &t).unwrap();
        prop_assert_eq!(q.scale(&rt, &f).unwrap(), q.scale(&r, &q.scale(&t, &f).unwrap()).unwrap());
        let lhs = q.scale(&r, &q.add(&f, &g).unwrap()).unwrap();
        let rhs = q.add(&q.scale(&r, &f).unwrap(), &q.scale(&r, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(q.is_zero(&q.scale(&s.ring.zero(), &f).unwrap()));
    }
}
