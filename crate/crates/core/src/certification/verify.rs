//! Independent replay of recorded certificates.
//!
//! Every recorded claim is recomputed from the serialized data alone; the
//! verdict is then rebuilt from the replayed flags and compared with the one
//! on record. A certificate is also regenerated from its parameters and
//! compared byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    CertResult, CrossPair, DivisibilityRecord, EssentialSample, IndecomposabilityCertificate, NonIsomorphismCertificate,
    RankReport, UniformEvidence, Verdict,
};
use crate::fractions::{Fraction, TagId, VectorE};
use crate::modules::{GluedModule, LocalizationSum, ModuleError, Rigid};
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub subject: String,
    pub recorded: Verdict,
    pub replayed: Verdict,
    pub regenerated_identical: bool,
    pub mismatches: Vec<String>,
}

impl Replay {
    pub fn ok(&self) -> bool {
        self.recorded == self.replayed && self.regenerated_identical && self.mismatches.is_empty()
    }
}

fn support(ids: &[String]) -> LocalizationSum {
    LocalizationSum::new(ids.iter().map(|s| TagId(s.clone())))
}

impl Rigid<'_> {
    fn frac_of(&self, v: &Value) -> CertResult<Fraction> {
        Ok(self.q.fraction_from_json(v).map_err(ModuleError::from)?)
    }

    fn vec_of(&self, v: &Value) -> CertResult<VectorE> {
        Ok(self.q.vector_from_json(v).map_err(ModuleError::from)?)
    }

    fn elem_of(&self, s: &str) -> CertResult<RingElement> {
        Ok(self.q.ring.parse_element(s).map_err(ModuleError::from)?)
    }

    fn replay_uniform(&self, ev: &UniformEvidence) -> CertResult<bool> {
        let q = self.q;
        let a = support(&ev.support);
        let mut ok = true;
        for s in &ev.samples {
            let f = self.frac_of(&s.f)?;
            let g = self.frac_of(&s.g)?;
            let r = self.elem_of(&s.r)?;
            let t = self.elem_of(&s.s)?;
            let rf = q.scale(&r, &f).map_err(ModuleError::from)?;
            let tg = q.scale(&t, &g).map_err(ModuleError::from)?;
            ok &= self.member_localization(&f, &a)? && self.member_localization(&g, &a)?;
            ok &= rf == tg && !q.is_zero(&rf) && rf == self.frac_of(&s.common)?;
        }
        Ok(ok)
    }

    fn replay_divisibility(&self, d: &TagId, rec: &DivisibilityRecord, a: &LocalizationSum) -> CertResult<Option<bool>> {
        let f = self.frac_of(&rec.element)?;
        let depth = rec.empirical.len() as u32;
        let again = self.divisibility_record(d, &f, a, depth)?;
        Ok((again == *rec).then_some(again.decision))
    }

    fn replay_essential(&self, s: &EssentialSample, vector: bool, m: Option<&GluedModule>, a: Option<&LocalizationSum>) -> CertResult<bool> {
        let q = self.q;
        let mult = self.elem_of(&s.multiplier)?;
        if vector {
            let v = self.vec_of(&s.element)?;
            let p = q.vec_scale(&mult, &v).map_err(ModuleError::from)?;
            let m = m.expect("module for vector samples");
            Ok(p == self.vec_of(&s.product)? && !p.is_zero() && self.member_glued(&p, m)?.is_member())
        } else {
            let f = self.frac_of(&s.element)?;
            let p = q.scale(&mult, &f).map_err(ModuleError::from)?;
            let inside = a.map_or(Ok(true), |a| self.member_localization(&f, a))?;
            Ok(inside && p == self.frac_of(&s.product)? && p.den.is_empty() && !q.is_zero(&p))
        }
    }

    /// Replays an indecomposability certificate against the module `m`.
    pub fn verify_indecomposable(&self, m: &GluedModule, cert: &IndecomposabilityCertificate) -> CertResult<Replay> {
        let mut mismatches = Vec::new();
        let mut replayed = cert.clone();

        for ev in &mut replayed.condition1 {
            let ok = self.replay_uniform(ev)?;
            if m.components.get(&ev.component.as_str().into()) != Some(&support(&ev.support)) {
                mismatches.push(format!("condition 1: support of {} differs from the module", ev.component));
            }
            ev.passed = ok;
        }

        for hp in &mut replayed.condition2 {
            let a = m.components.get(&hp.source_component.as_str().into()).cloned();
            let b = m.components.get(&hp.target_component.as_str().into()).cloned();
            let (Some(a), Some(b)) = (a, b) else {
                mismatches.push(format!("condition 2: unknown components {} -> {}", hp.source_component, hp.target_component));
                continue;
            };
            hp.failure = match &mut hp.certificate {
                None => (a.support.is_subset(&b.support)).then(|| "no tag in the source support is missing from the target".to_string()),
                Some(c) => {
                    let d = TagId(c.witness.clone());
                    let mut ok = support(&c.source) == a && support(&c.target) == b;
                    ok &= a.support.contains(&d) && !b.support.contains(&d);
                    ok &= self.replay_divisibility(&d, &c.source_divisible, &a)? == Some(true);
                    for rec in &c.target_samples {
                        ok &= self.replay_divisibility(&d, rec, &b)? == Some(false);
                    }
                    for s in &c.essential {
                        ok &= self.replay_essential(s, false, None, Some(&a))? && s.passed;
                    }
                    c.passed = ok;
                    (!ok).then(|| "a divisibility check failed".to_string())
                }
            };
        }

        for (i, g) in m.glue.iter().enumerate() {
            let c3 = self.glue_condition(&g.component, &g.xi, &g.a_elem, &m.components[&g.component])?;
            let c4 = self.glue_condition(&m.base, &g.xi, &g.b_elem, &m.components[&m.base])?;
            if cert.condition3.get(i) != Some(&c3) || cert.condition4.get(i) != Some(&c4) {
                mismatches.push(format!("glue conditions for {} differ from the record", g.component));
            }
            if let Some(slot) = replayed.condition3.get_mut(i) {
                *slot = c3;
            }
            if let Some(slot) = replayed.condition4.get_mut(i) {
                *slot = c4;
            }
        }

        let mut ess = true;
        for gm in &replayed.essentiality.glue_multiples {
            let Some(g) = m.glue.iter().find(|g| g.component.0 == gm.component) else {
                mismatches.push(format!("essentiality: no glue generator at {}", gm.component));
                continue;
            };
            let xi = &self.q.tags.get(&g.xi).expect("designated").element;
            let v = self.q.vec_scale(xi, &self.glue_vector(g, m)?).map_err(ModuleError::from)?;
            ess &= v == self.vec_of(&gm.product)? && !v.is_zero() && self.member_base(&v, m)?;
        }
        for s in &replayed.essentiality.samples {
            ess &= self.replay_essential(s, true, Some(m), None)?;
        }
        replayed.essentiality.passed = ess;

        let replayed_verdict = Verdict::from_failures(replayed.failures());
        let regenerated = self.certify_indecomposable(m, cert.params)?;
        Ok(Replay {
            subject: format!("indecomposability of {}", cert.module),
            recorded: cert.verdict.clone(),
            replayed: replayed_verdict,
            regenerated_identical: regenerated == *cert,
            mismatches,
        })
    }

    pub fn verify_rank(&self, m: &GluedModule, report: &RankReport) -> CertResult<Replay> {
        let mut mismatches = Vec::new();
        for w in &report.witnesses {
            let v = self.vec_of(&w.vector)?;
            if self.member_glued(&v, m)?.is_member() != w.member {
                mismatches.push(format!("rank witness at {} changed membership", w.component));
            }
        }
        let again = self.rank(m)?;
        let verdict = |r: &RankReport| {
            if r.independent {
                Verdict::Passed
            } else {
                Verdict::Refuted {
                    conditions: vec!["rank witnesses".into()],
                }
            }
        };
        Ok(Replay {
            subject: format!("rank of {}", report.module),
            recorded: verdict(report),
            replayed: verdict(&again),
            regenerated_identical: again == *report,
            mismatches,
        })
    }

    fn replay_cross(&self, p: &CrossPair, a: &TagId, m: &GluedModule) -> CertResult<bool> {
        let x = self.vec_of(&p.x)?;
        let y = self.vec_of(&p.y)?;
        let sum = self.q.vec_add(&x, &y).map_err(ModuleError::from)?;
        Ok(self.divides_in_base(a, &x, m)? == p.x_divisible
            && self.divides_in_base(a, &y, m)? == p.y_divisible
            && self.divides_in_glued(a, &sum, m)? == p.sum_divisible)
    }

    /// Replays a non-isomorphism certificate; `left`/`right` as recorded.
    pub fn verify_nonisomorphic(
        &self,
        left: &GluedModule,
        right: &GluedModule,
        cert: &NonIsomorphismCertificate,
    ) -> CertResult<Replay> {
        let a = TagId(cert.witness.clone());
        let mut mismatches = Vec::new();
        if !left.s.contains(&a) || right.s.contains(&a) {
            mismatches.push(format!("witness {a} does not separate the subsets"));
        }
        let mut pos_ok = false;
        if let Some(p) = &cert.positive {
            if !self.replay_cross(p, &a, left)? {
                mismatches.push("positive witness pair does not replay".into());
            }
            pos_ok = !p.x_divisible && !p.y_divisible && p.sum_divisible;
        }
        let absent = !right.xi_used().contains(&a);
        let mut neg_ok = absent && cert.negative.refutations.len() == right.glue.len();
        for r in &cert.negative.refutations {
            if !self.replay_cross(r, &a, right)? {
                mismatches.push(format!("cross pair at {} does not replay", r.component));
            }
            neg_ok &= !r.sum_divisible;
        }
        let v = |ok: bool| {
            if ok {
                Verdict::Passed
            } else {
                Verdict::Refuted {
                    conditions: vec!["cross-divisibility witness".into()],
                }
            }
        };
        let (s, t) = if cert.swapped { (right, left) } else { (left, right) };
        let regenerated = self.certify_nonisomorphic(s, t)?;
        Ok(Replay {
            subject: format!("non-isomorphism of {} and {}", cert.left, cert.right),
            recorded: v(cert.passed),
            replayed: v(pos_ok && neg_ok),
            regenerated_identical: regenerated == *cert,
            mismatches,
        })
    }
}
