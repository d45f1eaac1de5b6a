use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn ring(d: RingDescriptor) -> Ring {
    Ring::new(d).unwrap()
}

fn weyl() -> Ring {
    ring(RingDescriptor::weyl_integers())
}

fn f9_skew() -> Ring {
    ring(RingDescriptor::frobenius_f9())
}

fn poly_ring(field: FieldSpec) -> Ring {
    ring(RingDescriptor::PolyOverField { field })
}

fn p(r: &Ring, s: &str) -> RingElement {
    r.parse_element(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

#[test]
fn basic_arithmetic() {
    let z = ring(RingDescriptor::Integers);
    assert_eq!(z.add(&z.from_i64(2), &z.from_i64(3)).unwrap(), z.from_i64(5));
    let q = poly_ring(FieldSpec::Rationals);
    assert_eq!(q.mul(&p(&q, "x + 1"), &p(&q, "x - 1")).unwrap(), p(&q, "x^2 - 1"));
    let w = weyl();
    let yx = w.mul(&w.y().unwrap(), &w.x().unwrap()).unwrap();
    assert_eq!(w.render(&yx), "x*y + 1");
}

#[test]
fn mismatched_descriptor_rejected() {
    let z = ring(RingDescriptor::Integers);
    let w = weyl();
    assert!(matches!(z.add(&z.one(), &w.one()), Err(RingError::DescriptorMismatch(_))));
    assert!(matches!(z.skew_mul(&z.one(), &z.one()), Err(RingError::DescriptorMismatch(_))));
}

#[test]
fn skew_mul_examples() {
    let f = f9_skew();
    let g = f.field_generator().unwrap();
    let y = f.y().unwrap();
    let lhs = f.skew_mul(&y, &g).unwrap();
    let g3 = f.pow(&g, 3).unwrap();
    assert_eq!(lhs, f.mul(&g3, &y).unwrap());
    assert_ne!(g3, g);

    let w = weyl();
    assert_eq!(w.render(&w.skew_mul(&p(&w, "y"), &p(&w, "x^2")).unwrap()), "x^2*y + 2*x");
    assert_eq!(w.render(&w.skew_mul(&p(&w, "y^2"), &p(&w, "x")).unwrap()), "x*y^2 + 2*y");
}

#[test]
fn unit_examples() {
    let z = ring(RingDescriptor::Integers);
    assert!(z.is_unit(&z.from_i64(-1)));
    assert!(!z.is_unit(&z.from_i64(2)));
    let l = ring(RingDescriptor::localized(&[2, 3]));
    assert!(l.is_unit(&p(&l, "5/7")));
    assert!(!l.is_unit(&p(&l, "6/7")));
    let f = f9_skew();
    assert!(f.is_unit(&f.field_generator().unwrap()));
    assert!(!f.is_unit(&f.y().unwrap()));
}

#[test]
fn associate_examples() {
    let z = ring(RingDescriptor::Integers);
    assert!(z.are_associates(&z.from_i64(2), &z.from_i64(-2)).unwrap());
    assert!(!z.are_associates(&z.from_i64(2), &z.from_i64(5)).unwrap());
    assert_eq!(z.are_associates(&z.zero(), &z.one()), Err(RingError::ZeroInput));
    let f3 = poly_ring(FieldSpec::Prime { p: 3 });
    assert!(f3.are_associates(&p(&f3, "x + 1"), &p(&f3, "2*x + 2")).unwrap());
    assert!(!f3.are_associates(&p(&f3, "x + 1"), &p(&f3, "x + 2")).unwrap());
}

#[test]
fn centrality_examples() {
    let w = weyl();
    assert!(w.is_central(&w.from_i64(2)).unwrap());
    assert!(!w.is_central(&p(&w, "x")).unwrap());
    assert!(!w.is_central(&p(&w, "y")).unwrap());
    let f = f9_skew();
    assert!(!f.is_central(&p(&f, "x + g")).unwrap());
    assert!(!f.is_central(&p(&f, "g")).unwrap());
    assert!(f.is_central(&p(&f, "x^3 - x + 1")).unwrap());
    assert!(!f.is_central(&p(&f, "y")).unwrap());
    // y^2 acts on F_9 by the square of Frobenius, which is the identity.
    assert!(f.is_central(&p(&f, "y^2")).unwrap());
}

#[test]
fn irreducibility_examples() {
    let z = ring(RingDescriptor::Integers);
    assert!(z.certify_irreducible(&z.from_i64(11)).unwrap().is_proven());
    assert!(matches!(
        z.certify_irreducible(&z.from_i64(12)),
        Err(RingError::Reducible { .. })
    ));
    assert_eq!(z.certify_irreducible(&z.one()), Err(RingError::UnitInput));
    assert_eq!(z.certify_irreducible(&z.zero()), Err(RingError::ZeroInput));

    let w = weyl();
    let c = w.certify_irreducible(&w.from_i64(7)).unwrap();
    assert!(matches!(c.justification, Justification::DegreeZeroLift { .. }));
    assert!(w.is_prime_certified(&w.from_i64(7), &c));
    let cy = w.certify_irreducible(&p(&w, "y")).unwrap();
    assert_eq!(cy.kind, CertificateKind::Asserted);
    assert!(cy.warning.is_some());

    let q = poly_ring(FieldSpec::Rationals);
    assert!(q.certify_irreducible(&p(&q, "x^3 - 2")).unwrap().is_proven());
    assert!(q.certify_irreducible(&p(&q, "x^2 - 1")).is_err());
    assert_eq!(
        q.certify_irreducible(&p(&q, "x^4 + 1")).unwrap().kind,
        CertificateKind::Asserted
    );
}

/// Brute force over F_9: a cubic is reducible iff it has a root in F_9.
#[test]
fn f9_cubic_irreducibility_matches_root_search() {
    let r = poly_ring(FieldSpec::Extension {
        p: 3,
        modulus: "g^2 + 1".into(),
    });
    let base = r.poly_base().unwrap().clone();
    let field = base.finite().unwrap().clone();
    let ops = PolyOps::new(&base);
    let elems: Vec<Scalar> = field.elements().map(Scalar::Ff).collect();
    for c0 in &elems {
        for c1 in elems.iter().step_by(2) {
            let f = ops.trim(vec![c0.clone(), c1.clone(), base.zero(), base.one()]);
            let has_root = elems.iter().any(|a| base.is_zero(&ops.eval(&f, a)));
            let verdict = r.certify_irreducible(&RingElement::Poly(f.clone()));
            assert_eq!(verdict.is_ok(), !has_root, "{}", r.render_poly(&base, &f));
        }
    }
    assert!(r.certify_irreducible(&p(&r, "x^3 - x + 1")).unwrap().is_proven());
}

#[test]
fn localized_irreducibles() {
    let l = ring(RingDescriptor::localized(&[2, 3, 5, 7, 11, 13]));
    assert!(l.certify_irreducible(&p(&l, "11")).unwrap().is_proven());
    assert!(l.certify_irreducible(&p(&l, "187/19")).unwrap().is_proven());
    assert!(l.certify_irreducible(&p(&l, "22/17")).is_err());
    assert!(l.certify_irreducible(&p(&l, "6")).is_err());
    let l2 = ring(RingDescriptor::localized(&[2, 3]));
    assert_eq!(l2.certify_irreducible(&p(&l2, "5/7")), Err(RingError::UnitInput));
}

#[test]
fn exact_division_examples() {
    let z = ring(RingDescriptor::Integers);
    assert_eq!(z.exact_divide_central(&z.from_i64(6), &z.from_i64(3)).unwrap(), Some(z.from_i64(2)));
    assert_eq!(z.exact_divide_central(&z.from_i64(7), &z.from_i64(3)).unwrap(), None);
    let w = weyl();
    let q = w.exact_divide_central(&p(&w, "2*x*y + 2"), &w.from_i64(2)).unwrap().unwrap();
    assert_eq!(w.render(&q), "x*y + 1");
    assert_eq!(w.mul(&w.from_i64(2), &q).unwrap(), p(&w, "2*x*y + 2"));
    assert!(matches!(
        w.exact_divide_central(&w.one(), &p(&w, "x")),
        Err(RingError::NonCentral(_))
    ));
}

#[test]
fn bezout_examples() {
    let z = ring(RingDescriptor::Integers);
    assert_eq!(
        z.bezout_witness(&z.from_i64(2), &z.from_i64(3)).unwrap(),
        Some((z.from_i64(-1), z.from_i64(1)))
    );
    assert_eq!(z.bezout_witness(&z.from_i64(2), &z.from_i64(4)).unwrap(), None);
    assert_eq!(
        z.bezout_witness(&z.from_i64(2), &z.from_i64(-2)),
        Err(RingError::AssociateInputs)
    );
    let f3 = poly_ring(FieldSpec::Prime { p: 3 });
    let (u, v) = f3.bezout_witness(&p(&f3, "x"), &p(&f3, "x + 1")).unwrap().unwrap();
    assert_eq!((f3.render(&u), f3.render(&v)), ("2".to_string(), "1".to_string()));
    let w = weyl();
    assert_eq!(
        w.bezout_witness(&w.from_i64(2), &w.from_i64(3)).unwrap(),
        Some((w.from_i64(-1), w.from_i64(1)))
    );
    let l = ring(RingDescriptor::localized(&[2, 3, 5, 7, 11, 13]));
    let (a, b) = (p(&l, "2"), p(&l, "5"));
    let (u, v) = l.bezout_witness(&a, &b).unwrap().unwrap();
    let one = l.add(&l.mul(&u, &a).unwrap(), &l.mul(&v, &b).unwrap()).unwrap();
    assert_eq!(one, l.one());
}

#[test]
fn reduction_is_canonical() {
    let z = ring(RingDescriptor::Integers);
    assert_eq!(z.reduce_mod_central(&z.from_i64(-1), &z.from_i64(11)).unwrap(), z.from_i64(10));
    let l = ring(RingDescriptor::localized(&[2, 3, 5, 7, 11, 13]));
    // 17 = 6 (mod 11) and 6*2 = 1 (mod 11)
    assert_eq!(l.reduce_mod_central(&p(&l, "1/17"), &p(&l, "11/19")).unwrap(), p(&l, "2"));
    let w = weyl();
    assert_eq!(
        w.render(&w.reduce_mod_central(&p(&w, "-x*y + 13"), &w.from_i64(11)).unwrap()),
        "10*x*y + 2"
    );
}

#[test]
fn parse_and_render() {
    let f9 = poly_ring(FieldSpec::Extension {
        p: 3,
        modulus: "g^2 + 1".into(),
    });
    assert_eq!(f9.degree(&p(&f9, "x^3 - x + 1")), Some(3));
    assert_eq!(f9.render(&p(&f9, "g*g")), "2");
    let w = weyl();
    assert_eq!(w.render(&p(&w, "y*x")), "x*y + 1");
    assert_eq!(w.render(&p(&w, "(x + 1)*y^2 - 3")), "(x + 1)*y^2 - 3");
    let z = ring(RingDescriptor::Integers);
    assert!(matches!(z.parse_element("2/3"), Err(RingError::Parse { position: 1, .. })));
    assert!(matches!(z.parse_element("x"), Err(RingError::Parse { position: 0, .. })));
    assert!(matches!(z.parse_element("2 +"), Err(RingError::Parse { .. })));
    let l = ring(RingDescriptor::localized(&[2, 3]));
    assert_eq!(l.render(&p(&l, "10/14")), "5/7");
    assert!(l.parse_element("1/2").is_err());
    let q = poly_ring(FieldSpec::Rationals);
    assert_eq!(q.render(&p(&q, "x/2")), "1/2*x");
}

#[test]
fn invalid_descriptors() {
    assert!(Ring::new(RingDescriptor::localized(&[4])).is_err());
    assert!(Ring::new(RingDescriptor::PolyOverField {
        field: FieldSpec::Extension {
            p: 3,
            modulus: "g^2 - 1".into()
        }
    })
    .is_err());
    // Frobenius combined with d/dx is not a sigma-derivation.
    assert!(Ring::new(RingDescriptor::SkewPoly {
        coefficients: CoefficientSpec::FieldPoly {
            field: FieldSpec::Extension {
                p: 3,
                modulus: "g^2 + 1".into()
            }
        },
        sigma: Automorphism::Frobenius { power: 1 },
        delta: Derivation::Derivative,
        noncommutative: true,
    })
    .is_err());
    assert!(Ring::new(RingDescriptor::SkewPoly {
        coefficients: CoefficientSpec::IntegerPoly,
        sigma: Automorphism::Identity,
        delta: Derivation::Zero,
        noncommutative: true,
    })
    .is_err());
    // Frobenius on F_3 is the identity.
    assert!(Ring::new(RingDescriptor::SkewPoly {
        coefficients: CoefficientSpec::FieldPoly {
            field: FieldSpec::Prime { p: 3 }
        },
        sigma: Automorphism::Frobenius { power: 1 },
        delta: Derivation::Zero,
        noncommutative: true,
    })
    .is_err());
}

// ----- naive rewriting oracle for the Weyl-type ring ---------------------

/// Words over {x, y} with integer coefficients; `yx -> xy + 1` is applied
/// until every word is of the form x^i y^j.
fn rewrite_normal_form(words: Vec<(Vec<char>, BigInt)>) -> BTreeMap<(usize, usize), BigInt> {
    let mut todo = words;
    let mut out: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    while let Some((w, c)) = todo.pop() {
        match w.windows(2).position(|p| p == ['y', 'x']) {
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                let mut dropped = w.clone();
                dropped.drain(i..i + 2);
                todo.push((swapped, c.clone()));
                todo.push((dropped, c));
            }
            None => {
                let i = w.iter().filter(|&&ch| ch == 'x').count();
                *out.entry((i, w.len() - i)).or_default() += c;
            }
        }
    }
    out.retain(|_, c| *c != BigInt::from(0));
    out
}

fn weyl_words(r: &Ring, e: &RingElement) -> Vec<(Vec<char>, BigInt)> {
    let RingElement::Skew(cs) = e else { unreachable!() };
    let base = r.poly_base().unwrap();
    let mut out = Vec::new();
    for (j, c) in cs.iter().enumerate() {
        for (i, a) in c.coeffs().iter().enumerate() {
            let n = base.as_integer(a).unwrap();
            if n != BigInt::from(0) {
                let mut w = vec!['x'; i];
                w.extend(std::iter::repeat_n('y', j));
                out.push((w, n));
            }
        }
    }
    out
}

fn weyl_from_map(r: &Ring, m: &BTreeMap<(usize, usize), BigInt>) -> RingElement {
    let mut acc = r.zero();
    for ((i, j), c) in m {
        let term = format!("{c}*x^{i}*y^{j}");
        acc = r.add(&acc, &p(r, &term)).unwrap();
    }
    acc
}

fn arb_weyl() -> impl Strategy<Value = String> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 0..4).prop_map(|ts| {
        let mut s = String::from("0");
        for (c, i, j) in ts {
            s.push_str(&format!(" + ({c})*x^{i}*y^{j}"));
        }
        s
    })
}

fn arb_f9_skew() -> impl Strategy<Value = String> {
    let coeff = (0u32..3, 0u32..3).prop_map(|(a, b)| format!("({a} + {b}*g)"));
    prop::collection::vec((coeff, 0u32..=2, 0u32..=2), 0..4).prop_map(|ts| {
        let mut s = String::from("0");
        for (c, i, j) in ts {
            s.push_str(&format!(" + {c}*x^{i}*y^{j}"));
        }
        s
    })
}

fn rings_for_axioms() -> Vec<Ring> {
    vec![
        ring(RingDescriptor::Integers),
        ring(RingDescriptor::localized(&[2, 3])),
        poly_ring(FieldSpec::Rationals),
        poly_ring(FieldSpec::Extension {
            p: 3,
            modulus: "g^2 + 1".into(),
        }),
        weyl(),
        f9_skew(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skew_mul_matches_rewriting(a in arb_weyl(), b in arb_weyl()) {
        let w = weyl();
        let (f, g) = (p(&w, &a), p(&w, &b));
        let mut words = Vec::new();
        for (u, cu) in weyl_words(&w, &f) {
            for (v, cv) in weyl_words(&w, &g) {
                let mut uv = u.clone();
                uv.extend(v.iter());
                words.push((uv, &cu * &cv));
            }
        }
        let expected = weyl_from_map(&w, &rewrite_normal_form(words));
        prop_assert_eq!(w.mul(&f, &g).unwrap(), expected);
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in rings_for_axioms() {
            let a = r.random_element(&mut rng, 5);
            let b = r.random_element(&mut rng, 5);
            let c = r.random_element(&mut rng, 5);
            let ab_c = r.mul(&r.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = r.mul(&a, &r.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let left = r.mul(&a, &r.add(&b, &c).unwrap()).unwrap();
            let right = r.add(&r.mul(&a, &b).unwrap(), &r.mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let left = r.mul(&r.add(&a, &b).unwrap(), &c).unwrap();
            let right = r.add(&r.mul(&a, &c).unwrap(), &r.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let ab = r.mul(&a, &b).unwrap();
            prop_assert!(r.contains(&ab));
            if r.is_zero(&ab) {
                prop_assert!(r.is_zero(&a) || r.is_zero(&b));
            } else if let (Some(da), Some(db)) = (r.degree(&a), r.degree(&b)) {
                prop_assert_eq!(r.degree(&ab), Some(da + db));
            }
            prop_assert!(r.is_zero(&r.sub(&a, &a).unwrap()));
        }
    }

    #[test]
    fn skew_relation_and_derivation_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in [weyl(), f9_skew()] {
            let y = r.y().unwrap();
            let coeff = |rng: &mut ChaCha8Rng| loop {
                let e = r.random_element(rng, 4);
                if matches!(&e, RingElement::Skew(cs) if cs.len() <= 1) {
                    break e;
                }
            };
            let a = coeff(&mut rng);
            let b = coeff(&mut rng);
            let lhs = r.mul(&y, &a).unwrap();
            let rhs = r.add(&r.mul(&r.sigma(&a).unwrap(), &y).unwrap(), &r.delta(&a).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let ab = r.mul(&a, &b).unwrap();
            let d_ab = r.delta(&ab).unwrap();
            let leib = r.add(
                &r.mul(&r.sigma(&a).unwrap(), &r.delta(&b).unwrap()).unwrap(),
                &r.mul(&r.delta(&a).unwrap(), &b).unwrap(),
            ).unwrap();
            prop_assert_eq!(d_ab, leib);
        }
    }

    #[test]
    fn central_elements_commute(s in arb_f9_skew(), n in -20i64..20, seed in any::<u64>()) {
        let f = f9_skew();
        let x = p(&f, &s);
        let c = p(&f, &format!("{n}*(x^2 + 1)*y^2 + x + 2"));
        prop_assert!(f.is_central(&c).unwrap());
        prop_assert_eq!(f.mul(&c, &x).unwrap(), f.mul(&x, &c).unwrap());
        let w = weyl();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = w.random_element(&mut rng, 5);
        let k = w.from_i64(n);
        prop_assert!(w.is_central(&k).unwrap());
        prop_assert_eq!(w.mul(&k, &e).unwrap(), w.mul(&e, &k).unwrap());
    }

    #[test]
    fn exact_division_round_trip(s in arb_weyl(), k in 1i64..12) {
        let w = weyl();
        let x = p(&w, &s);
        let c = w.from_i64(k);
        if let Some(q) = w.exact_divide_central(&x, &c).unwrap() {
            prop_assert_eq!(w.mul(&c, &q).unwrap(), x.clone());
        }
        let cx = w.mul(&c, &x).unwrap();
        prop_assert_eq!(w.exact_divide_central(&cx, &c).unwrap(), Some(x));
    }

    #[test]
    fn associates_preserved_by_degree_zero_lift(a in 2i64..60, b in 2i64..60, sa in prop::bool::ANY) {
        let z = ring(RingDescriptor::Integers);
        let w = weyl();
        let a = if sa { -a } else { a };
        prop_assert_eq!(
            z.are_associates(&z.from_i64(a), &z.from_i64(b)).unwrap(),
            w.are_associates(&w.from_i64(a), &w.from_i64(b)).unwrap()
        );
        let kx = poly_ring(FieldSpec::Prime { p: 3 });
        let f9 = f9_skew();
        let pa = format!("x^2 + {}", a.rem_euclid(3));
        let pb = format!("{}*x^2 + {}", 1 + b.rem_euclid(2), b.rem_euclid(3));
        prop_assert_eq!(
            kx.are_associates(&p(&kx, &pa), &p(&kx, &pb)).unwrap(),
            f9.are_associates(&p(&f9, &pa), &p(&f9, &pb)).unwrap()
        );
    }

    #[test]
    fn render_parse_round_trip(s in arb_f9_skew(), t in arb_weyl()) {
        let f = f9_skew();
        let x = p(&f, &s);
        prop_assert_eq!(p(&f, &f.render(&x)), x);
        let w = weyl();
        let y = p(&w, &t);
        prop_assert_eq!(p(&w, &w.render(&y)), y);
    }

    #[test]
    fn reduction_respects_congruence(s in arb_weyl(), t in arb_weyl(), k in 2i64..15) {
        let w = weyl();
        let (a, b) = (p(&w, &s), p(&w, &t));
        let c = w.from_i64(k);
        let shifted = w.add(&a, &w.mul(&c, &b).unwrap()).unwrap();
        let ra = w.reduce_mod_central(&a, &c).unwrap();
        prop_assert_eq!(w.reduce_mod_central(&shifted, &c).unwrap(), ra.clone());
        prop_assert_eq!(w.reduce_mod_central(&ra, &c).unwrap(), ra.clone());
        let diff = w.sub(&a, &ra).unwrap();
        prop_assert!(w.exact_divide_central(&diff, &c).unwrap().is_some());
    }
}
