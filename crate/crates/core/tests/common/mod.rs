#![allow(dead_code)]

use std::collections::BTreeMap;

use rigidum_core::construction::{validate_spec, ConstructionInput, Limits, ValidatedSpec, ValidationReport};
use rigidum_core::fractions::{ComponentId, Fraction, Quotient, TagId};
use rigidum_core::modules::{GlueGenerator, GluedModule, LocalizationSum};
use rigidum_core::ring::{Ring, RingDescriptor, RingElement};

pub fn try_spec(desc: RingDescriptor, pairs: &[(&str, &str)], delta: &[&str]) -> Result<ValidatedSpec, ValidationReport> {
    let ring = Ring::new(desc).expect("ring");
    let e = |s: &str| ring.parse_element(s).expect("element");
    let input = ConstructionInput {
        gamma_pairs: pairs.iter().map(|(a, b)| (e(a), e(b))).collect(),
        delta: delta.iter().map(|s| e(s)).collect(),
        ring: ring.clone(),
    };
    validate_spec(&input, Limits::default())
}

pub fn spec(desc: RingDescriptor, pairs: &[(&str, &str)], delta: &[&str]) -> ValidatedSpec {
    try_spec(desc, pairs, delta).unwrap_or_else(|r| panic!("invalid spec: {r:?}"))
}

/// `Z`, pairs (2,5), (3,7), Delta = {11, 13}: tags a0=2 b0=5 a1=3 b1=7 c0=11 c1=13.
pub fn integer_spec() -> ValidatedSpec {
    spec(RingDescriptor::integers(), &[("2", "5"), ("3", "7")], &["11", "13"])
}

pub fn weyl_spec() -> ValidatedSpec {
    spec(RingDescriptor::weyl_integers(), &[("2", "5"), ("3", "7")], &["11", "13"])
}

pub fn f9_spec() -> ValidatedSpec {
    spec(
        RingDescriptor::frobenius_f9(),
        &[("x^3 - x + 1", "x^3 - x - 1"), ("x", "x + 1")],
        &["x + 2"],
    )
}

pub fn tag(spec: &ValidatedSpec, element: &str) -> TagId {
    let e = spec.ring.parse_element(element).expect("element");
    spec.tags.find(&e).cloned().unwrap_or_else(|| panic!("{element} is not designated"))
}

pub fn el(spec: &ValidatedSpec, s: &str) -> RingElement {
    spec.ring.parse_element(s).expect("element")
}

/// `num / prod(den_i^k_i)` with denominators given as designated elements.
pub fn frac(spec: &ValidatedSpec, num: &str, den: &[(&str, u32)]) -> Fraction {
    let q = Quotient::new(&spec.ring, &spec.tags);
    let den: BTreeMap<TagId, u32> = den.iter().map(|(d, k)| (tag(spec, d), *k)).collect();
    q.fraction(el(spec, num), den).expect("fraction")
}

pub fn support(spec: &ValidatedSpec, elements: &[&str]) -> LocalizationSum {
    LocalizationSum::new(elements.iter().map(|e| tag(spec, e)))
}

pub fn cid(s: &str) -> ComponentId {
    ComponentId(s.into())
}

/// Two components e0 = M_{3} (base) and e1 = M_{2}, glued by
/// `11^-1 (2 e1 + 3 e0)`.
pub fn two_component_module(spec: &ValidatedSpec) -> GluedModule {
    GluedModule {
        label: "toy".into(),
        s: vec![tag(spec, "11")],
        components: [(cid("e0"), support(spec, &["3"])), (cid("e1"), support(spec, &["2"]))].into(),
        base: cid("e0"),
        glue: vec![GlueGenerator {
            component: cid("e1"),
            xi: tag(spec, "11"),
            a_elem: el(spec, "2"),
            b_elem: el(spec, "3"),
        }],
    }
}
