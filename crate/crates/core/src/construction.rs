//! Validation of designated irreducibles, the selection family `Theta`, and
//! the glued modules built from it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::fractions::{ComponentId, Tag, TagId, TagRole, TagTable};
use crate::modules::{GlueGenerator, GluedModule, LocalizationSum};
use crate::ring::{Ring, RingElement, RingError};

pub const MAX_KAPPA1: usize = 6;
pub const MAX_KAPPA2: usize = 6;
pub const MAX_THETA: usize = 64;

/// Size caps; `RIGIDUM_MAX_THETA` may lower (never raise) the `|Theta|` cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub kappa1: usize,
    pub kappa2: usize,
    pub theta: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            kappa1: MAX_KAPPA1,
            kappa2: MAX_KAPPA2,
            theta: MAX_THETA,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(n) = std::env::var("RIGIDUM_MAX_THETA").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
            l.theta = n.min(MAX_THETA);
        }
        l
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("inconsistent choice: {0}")]
    InconsistentChoice(String),
    #[error("empty subset S")]
    EmptySubset,
    #[error("duplicate subset {0}")]
    DuplicateSubset(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Raw input: the ring and the designated elements.
#[derive(Clone, Debug)]
pub struct ConstructionInput {
    pub ring: Ring,
    pub gamma_pairs: Vec<(RingElement, RingElement)>,
    pub delta: Vec<RingElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Error,
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    pub subjects: Vec<String>,
    pub passed: bool,
    pub severity: Severity,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    fn push(&mut self, check: &str, subjects: Vec<String>, passed: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            check: check.into(),
            subjects,
            passed,
            severity: Severity::Error,
            detail: detail.into(),
        });
    }

    fn note(&mut self, check: &str, passed: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            check: check.into(),
            subjects: Vec::new(),
            passed,
            severity: Severity::Note,
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error && !f.passed)
    }
}

/// A spec whose every invariant has been checked.
#[derive(Clone, Debug)]
pub struct ValidatedSpec {
    pub ring: Ring,
    pub tags: TagTable,
    pub gamma: Vec<(TagId, TagId)>,
    pub delta: Vec<TagId>,
    pub bezout: BTreeMap<(TagId, TagId), (RingElement, RingElement)>,
    pub report: ValidationReport,
}

impl ValidatedSpec {
    pub fn kappa1(&self) -> usize {
        self.gamma.len()
    }

    pub fn kappa2(&self) -> usize {
        self.delta.len()
    }
}

fn tag_ids(k1: usize, k2: usize) -> Vec<(TagId, TagRole)> {
    let mut v = Vec::new();
    for i in 0..k1 {
        v.push((TagId(format!("a{i}")), TagRole::GammaA));
        v.push((TagId(format!("b{i}")), TagRole::GammaB));
    }
    for j in 0..k2 {
        v.push((TagId(format!("c{j}")), TagRole::Delta));
    }
    v
}

/// Checks every hypothesis on the designated elements. Returns the validated
/// spec, or the report listing each failure with its offending subjects.
pub fn validate_spec(input: &ConstructionInput, limits: Limits) -> Result<ValidatedSpec, ValidationReport> {
    let ring = &input.ring;
    let mut report = ValidationReport::default();
    let k1 = input.gamma_pairs.len();
    let k2 = input.delta.len();
    let mut elements = Vec::new();
    for (a, b) in &input.gamma_pairs {
        elements.push(a.clone());
        elements.push(b.clone());
    }
    elements.extend(input.delta.iter().cloned());
    let ids = tag_ids(k1, k2);
    let name = |i: usize| format!("{}={}", ids[i].0, ring.render(&elements[i]));

    report.push("limit-kappa1", vec![], k1 <= limits.kappa1, format!("kappa1 = {k1} (cap {})", limits.kappa1));
    report.push("limit-kappa2", vec![], k2 <= limits.kappa2, format!("kappa2 = {k2} (cap {})", limits.kappa2));
    let theta = 1usize.checked_shl(k1 as u32).unwrap_or(usize::MAX);
    report.push("limit-theta", vec![], theta <= limits.theta, format!("|Theta| = {theta} (cap {})", limits.theta));
    if k1 == 0 {
        report.note("degenerate", true, "kappa1 = 0: Theta is the single empty selection");
    }

    let mut certs = Vec::new();
    let mut usable = vec![true; elements.len()];
    for (i, e) in elements.iter().enumerate() {
        let subj = vec![name(i)];
        if !ring.contains(e) {
            report.push("member-of-ring", subj, false, "element does not belong to the ring");
            usable[i] = false;
            certs.push(None);
            continue;
        }
        let nonzero = !ring.is_zero(e);
        report.push("nonzero", subj.clone(), nonzero, "");
        let nonunit = !ring.is_unit(e);
        report.push("non-unit", subj.clone(), nonunit, if nonunit { "" } else { "element is a unit" });
        let central = ring.is_central(e).unwrap_or(false);
        report.push("central", subj.clone(), central, if central { "" } else { "element is not central" });
        let cert = if nonzero && nonunit {
            match ring.certify_irreducible(e) {
                Ok(c) => {
                    report.push(
                        "irreducible",
                        subj.clone(),
                        c.is_proven(),
                        if c.is_proven() { "proven".to_string() } else { format!("asserted only: {}", c.warning.clone().unwrap_or_default()) },
                    );
                    Some(c)
                }
                Err(err) => {
                    report.push("irreducible", subj.clone(), false, err.to_string());
                    None
                }
            }
        } else {
            None
        };
        let prime = cert.as_ref().is_some_and(|c| ring.is_prime_certified(e, c));
        report.push("prime", subj, prime, if prime { "quotient is a domain" } else { "not prime-certified" });
        usable[i] = nonzero && nonunit && central && prime;
        certs.push(cert);
    }

    // Disjointness of the three families, then pairwise conditions.
    let family = |i: usize| match ids[i].1 {
        TagRole::GammaA => 0,
        TagRole::GammaB => 1,
        TagRole::Delta => 2,
    };
    let mut bezout = BTreeMap::new();
    for i in 0..elements.len() {
        for j in (i + 1)..elements.len() {
            let subj = vec![name(i), name(j)];
            if elements[i] == elements[j] {
                let check = if family(i) != family(j) { "disjoint-families" } else { "distinct" };
                report.push(check, subj.clone(), false, "the same element is designated twice");
            }
            if !(usable[i] && usable[j]) {
                continue;
            }
            let assoc = ring.are_associates(&elements[i], &elements[j]).unwrap_or(true);
            report.push("non-associate", subj.clone(), !assoc, if assoc { "associate pair" } else { "" });
            if assoc {
                continue;
            }
            match ring.bezout_witness(&elements[i], &elements[j]) {
                Ok(Some((u, v))) => {
                    let one = ring
                        .add(&ring.mul(&u, &elements[i]).unwrap(), &ring.mul(&v, &elements[j]).unwrap())
                        .unwrap();
                    let ok = one == ring.one();
                    report.push(
                        "comaximal",
                        subj,
                        ok,
                        format!("({})*({}) + ({})*({}) = 1", ring.render(&u), ring.render(&elements[i]), ring.render(&v), ring.render(&elements[j])),
                    );
                    bezout.insert((ids[i].0.clone(), ids[j].0.clone()), (u, v));
                }
                Ok(None) => report.push("comaximal", subj, false, "no Bezout witness in the commutative subring"),
                Err(e) => report.push("comaximal", subj, false, e.to_string()),
            }
        }
    }

    report.note(
        "no-infinite-divisibility",
        true,
        "structural: integer, localized-integer and (skew) polynomial instances have no nonzero element infinitely divisible by a non-unit",
    );
    let units_central = match ring.field_generator() {
        Some(g) if !ring.is_commutative() => ring.is_central(&g).unwrap_or(false),
        _ => true,
    };
    report.note(
        "unit-centrality",
        units_central,
        if units_central {
            "all units are central; associateness is two-sided"
        } else {
            "some units are not central; associates are tested by left multiplication, which agrees with two-sided associateness on the central designated elements"
        },
    );

    let valid = report.failures().next().is_none();
    report.valid = valid;
    if !report.valid {
        return Err(report);
    }
    let tags = TagTable::new(ids.iter().zip(elements.iter()).zip(certs).map(|(((id, role), e), c)| Tag {
        id: id.clone(),
        role: *role,
        element: e.clone(),
        certificate: c.expect("validated"),
    }));
    Ok(ValidatedSpec {
        ring: input.ring.clone(),
        tags,
        gamma: (0..k1)
            .map(|i| (TagId(format!("a{i}")), TagId(format!("b{i}"))))
            .collect(),
        delta: (0..k2).map(|j| TagId(format!("c{j}"))).collect(),
        bezout,
        report,
    })
}

/// One selection set: a choice of `a_i` or `b_i` for every pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub id: ComponentId,
    /// `false` picks `a_i`, `true` picks `b_i`.
    pub bits: Vec<bool>,
    pub support: LocalizationSum,
}

impl Selection {
    /// The tag picked for the first pair, if any.
    pub fn first(&self) -> Option<TagId> {
        self.bits.first().map(|&b| TagId(format!("{}0", if b { 'b' } else { 'a' })))
    }
}

/// All `2^kappa1` selection sets, lexicographic in the choice bits.
pub fn build_theta(spec: &ValidatedSpec) -> Vec<Selection> {
    let k = spec.kappa1();
    if k == 0 {
        return vec![Selection {
            id: ComponentId("empty".into()),
            bits: Vec::new(),
            support: LocalizationSum::default(),
        }];
    }
    (0..1usize << k)
        .map(|mask| {
            let bits: Vec<bool> = (0..k).map(|i| mask >> (k - 1 - i) & 1 == 1).collect();
            let id: String = bits.iter().map(|&b| if b { 'b' } else { 'a' }).collect();
            let support = LocalizationSum::new(
                bits.iter()
                    .enumerate()
                    .map(|(i, &b)| TagId(format!("{}{i}", if b { 'b' } else { 'a' }))),
            );
            Selection {
                id: ComponentId(id),
                bits,
                support,
            }
        })
        .collect()
}

/// Free parameters of one glued module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidSystemChoice {
    pub base: ComponentId,
    pub s: Vec<TagId>,
    pub xi: BTreeMap<ComponentId, TagId>,
    pub ab: BTreeMap<ComponentId, (RingElement, RingElement)>,
    /// Replacement supports (negative controls only).
    pub support_overrides: BTreeMap<ComponentId, BTreeSet<TagId>>,
    /// Allow `a`/`b` that are not designated elements of the supports.
    pub relax: bool,
}

pub fn subset_label(s: &[TagId]) -> String {
    let ids: Vec<&str> = s.iter().map(|t| t.0.as_str()).collect();
    ids.join("_")
}

/// The default choice: all-`a` base, `xi` cycling through `S`, and `a`/`b`
/// taken from the first coordinate of each selection.
pub fn default_choice(spec: &ValidatedSpec, s: &[TagId]) -> RigidSystemChoice {
    let theta = build_theta(spec);
    let base = theta[0].clone();
    let mut xi = BTreeMap::new();
    let mut ab = BTreeMap::new();
    let mut s_sorted = s.to_vec();
    s_sorted.sort();
    for (i, sel) in theta.iter().skip(1).enumerate() {
        if !s_sorted.is_empty() {
            xi.insert(sel.id.clone(), s_sorted[i % s_sorted.len()].clone());
        }
        let el = |t: Option<TagId>| t.and_then(|t| spec.tags.get(&t).map(|t| t.element.clone()));
        if let (Some(a), Some(b)) = (el(sel.first()), el(base.first())) {
            ab.insert(sel.id.clone(), (a, b));
        }
    }
    RigidSystemChoice {
        base: base.id,
        s: s_sorted,
        xi,
        ab,
        support_overrides: BTreeMap::new(),
        relax: false,
    }
}

/// Builds `M` for one choice; conditions 3-4 are pre-checked by support.
pub fn build_glued(spec: &ValidatedSpec, choice: &RigidSystemChoice) -> Result<GluedModule, ConstructionError> {
    let bad = |s: String| Err(ConstructionError::InconsistentChoice(s));
    if choice.s.is_empty() && spec.kappa1() > 0 {
        return Err(ConstructionError::EmptySubset);
    }
    for t in &choice.s {
        if !spec.delta.contains(t) {
            return bad(format!("{t} is not in Delta"));
        }
    }
    let mut components: BTreeMap<ComponentId, LocalizationSum> =
        build_theta(spec).into_iter().map(|s| (s.id, s.support)).collect();
    for (c, sup) in &choice.support_overrides {
        let Some(slot) = components.get_mut(c) else {
            return bad(format!("support override for unknown component {c}"));
        };
        if let Some(t) = sup.iter().find(|t| spec.tags.get(t).is_none_or(|t| t.role == TagRole::Delta)) {
            return bad(format!("support tag {t} is not a Gamma tag"));
        }
        slot.support = sup.clone();
    }
    if !components.contains_key(&choice.base) {
        return bad(format!("base {} is not a selection set", choice.base));
    }
    let base_support = components[&choice.base].support.clone();
    let mut glue = Vec::new();
    for (c, sup) in &components {
        if *c == choice.base {
            continue;
        }
        let Some(xi) = choice.xi.get(c) else {
            return bad(format!("no xi assigned to component {c}"));
        };
        if !choice.s.contains(xi) {
            return bad(format!("xi {xi} for component {c} is not in S"));
        }
        if sup.support.contains(xi) || base_support.contains(xi) {
            return bad(format!("xi {xi} lies in a component support"));
        }
        let Some((a, b)) = choice.ab.get(c) else {
            return bad(format!("no a/b assigned to component {c}"));
        };
        if !choice.relax {
            let in_support = |e: &RingElement, s: &BTreeSet<TagId>| spec.tags.find(e).is_some_and(|t| s.contains(t));
            if !in_support(a, &sup.support) {
                return bad(format!("a for component {c} is not a designated element of its support"));
            }
            if !in_support(b, &base_support) {
                return bad(format!("b for component {c} is not a designated element of the base support"));
            }
        }
        if !spec.ring.contains(a) || !spec.ring.contains(b) {
            return bad(format!("a/b for component {c} do not belong to the ring"));
        }
        glue.push(GlueGenerator {
            component: c.clone(),
            xi: xi.clone(),
            a_elem: a.clone(),
            b_elem: b.clone(),
        });
    }
    Ok(GluedModule {
        label: subset_label(&choice.s),
        s: choice.s.clone(),
        components,
        base: choice.base.clone(),
        glue,
    })
}

/// Whether every element of `S` occurs as some `xi`.
pub fn xi_surjective(m: &GluedModule) -> bool {
    let used = m.xi_used();
    m.s.iter().all(|t| used.contains(t))
}

/// Nonempty subsets of Delta, by size then lexicographically.
pub fn all_nonempty_subsets(delta: &[TagId]) -> Vec<Vec<TagId>> {
    let n = delta.len();
    let mut out: Vec<Vec<TagId>> = (1..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| delta[i].clone()).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// One module per subset; each must be able to use every element of its `S`.
pub fn build_family(
    spec: &ValidatedSpec,
    choices: &[RigidSystemChoice],
) -> Result<Vec<GluedModule>, ConstructionError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for ch in choices {
        let mut key = ch.s.clone();
        key.sort();
        if !seen.insert(key.clone()) {
            return Err(ConstructionError::DuplicateSubset(subset_label(&key)));
        }
        let m = build_glued(spec, ch)?;
        if !xi_surjective(&m) {
            return Err(ConstructionError::InconsistentChoice(format!(
                "xi assignment for S = {} is not surjective onto S",
                m.label
            )));
        }
        out.push(m);
    }
    Ok(out)
}
