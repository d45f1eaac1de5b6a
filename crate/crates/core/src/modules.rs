//! Localization sums `M_A` and glued modules
//! `M = (+) M_l + sum D xi_l^-1 (a_l e_l + b_l e_0)`, with decision
//! procedures for membership and divisibility.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::fractions::{ComponentId, Fraction, FractionError, Quotient, TagId, VectorE};
use crate::ring::{RingElement, RingError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("element is not in the module: {0}")]
    NotInModule(String),
    #[error("invalid module presentation: {0}")]
    InvalidModule(String),
    #[error("undecidable with the available witnesses: {0}")]
    Undecidable(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl From<FractionError> for ModuleError {
    fn from(e: FractionError) -> Self {
        match e {
            FractionError::UnknownTag(t) => ModuleError::NotRepresentable(format!("unknown denominator tag {t}")),
            FractionError::Malformed(s) => ModuleError::NotRepresentable(s),
            FractionError::Ring(r) => ModuleError::Ring(r),
        }
    }
}

pub type ModuleResult<T> = Result<T, ModuleError>;

/// `M_A`: fractions whose denominator support lies in `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocalizationSum {
    pub support: BTreeSet<TagId>,
}

impl LocalizationSum {
    pub fn new(support: impl IntoIterator<Item = TagId>) -> Self {
        LocalizationSum {
            support: support.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueGenerator {
    pub component: ComponentId,
    pub xi: TagId,
    pub a_elem: RingElement,
    pub b_elem: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedModule {
    /// Label of the subset `S` the module was built for.
    pub label: String,
    pub s: Vec<TagId>,
    pub components: BTreeMap<ComponentId, LocalizationSum>,
    pub base: ComponentId,
    pub glue: Vec<GlueGenerator>,
}

impl GluedModule {
    pub fn check_shape(&self) -> ModuleResult<()> {
        if !self.components.contains_key(&self.base) {
            return Err(ModuleError::InvalidModule(format!("base {} is not a component", self.base)));
        }
        let glued: BTreeSet<&ComponentId> = self.glue.iter().map(|g| &g.component).collect();
        let expected: BTreeSet<&ComponentId> = self.components.keys().filter(|c| **c != self.base).collect();
        if glued != expected || glued.len() != self.glue.len() {
            return Err(ModuleError::InvalidModule(
                "need exactly one glue generator per non-base component".into(),
            ));
        }
        Ok(())
    }

    pub fn glue_for(&self, c: &ComponentId) -> Option<&GlueGenerator> {
        self.glue.iter().find(|g| &g.component == c)
    }

    pub fn xi_used(&self) -> BTreeSet<TagId> {
        self.glue.iter().map(|g| g.xi.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberWitness {
    /// `r_l` with `x - sum r_l g_l` in the base `(+) M_l`.
    pub coefficients: BTreeMap<ComponentId, RingElement>,
    pub residual: VectorE,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(MemberWitness),
    NotMember { component: ComponentId, reason: String },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Outcome of [`Rigid::infinitely_divisible`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfiniteDivisibility {
    pub decision: bool,
    pub rule: String,
    /// `empirical[n-1]`: whether `d^n` divides in the localization sum.
    pub empirical: Vec<bool>,
    /// Largest `n` with `d^n | f`, when finite.
    pub valuation: Option<u32>,
}

/// Decision procedures over a fixed ring and tag table.
#[derive(Clone, Copy, Debug)]
pub struct Rigid<'a> {
    pub q: Quotient<'a>,
}

impl<'a> Rigid<'a> {
    pub fn new(q: Quotient<'a>) -> Self {
        Rigid { q }
    }

    fn checked(&self, f: &Fraction) -> ModuleResult<Fraction> {
        Ok(self.q.normalize(f)?)
    }

    pub fn member_localization(&self, f: &Fraction, a: &LocalizationSum) -> ModuleResult<bool> {
        let f = self.checked(f)?;
        Ok(f.den.keys().all(|t| a.support.contains(t)))
    }

    /// Whether `u` lies in the base `(+) M_l`.
    pub fn member_base(&self, u: &VectorE, m: &GluedModule) -> ModuleResult<bool> {
        for (c, f) in &u.0 {
            let Some(a) = m.components.get(c) else {
                return Err(ModuleError::NotRepresentable(format!("unknown component {c}")));
            };
            if !self.member_localization(f, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The generator `xi^-1 (a e_l + b e_0)` as a vector.
    pub fn glue_vector(&self, g: &GlueGenerator, m: &GluedModule) -> ModuleResult<VectorE> {
        let q = self.q;
        let mut den = BTreeMap::new();
        den.insert(g.xi.clone(), 1);
        let a = q.unit_vector(g.component.clone(), q.fraction(g.a_elem.clone(), den.clone())?);
        let b = q.unit_vector(m.base.clone(), q.fraction(g.b_elem.clone(), den)?);
        Ok(q.vec_add(&a, &b)?)
    }

    fn invert_mod(&self, c: &RingElement, xi: &RingElement) -> ModuleResult<Option<RingElement>> {
        let ring = self.q.ring;
        if ring.exact_divide_central(c, xi)?.is_some() {
            return Ok(None);
        }
        if ring.is_unit(c) {
            return Ok(Some(ring.inverse(c).expect("unit")));
        }
        match ring.bezout_witness(c, xi) {
            Ok(Some((u, _))) => Ok(Some(u)),
            Ok(None) => Err(ModuleError::Undecidable(format!(
                "{} is neither invertible nor zero modulo {}",
                ring.render(c),
                ring.render(xi)
            ))),
            Err(RingError::AssociateInputs) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Decides `x in M`, returning coefficients `r_l` as witness.
    pub fn member_glued(&self, x: &VectorE, m: &GluedModule) -> ModuleResult<Membership> {
        m.check_shape()?;
        let q = self.q;
        let ring = q.ring;
        let x = q.vec_normalize(x)?;
        for c in x.0.keys() {
            if !m.components.contains_key(c) {
                return Err(ModuleError::NotRepresentable(format!("unknown component {c}")));
            }
        }
        let mut coefficients = BTreeMap::new();
        // Glue generators whose a-part vanishes modulo xi: r is free there and
        // may absorb a xi-pole at the base component.
        let mut degenerate = Vec::new();
        for g in &m.glue {
            let xi = &q.tags.get(&g.xi).ok_or_else(|| ModuleError::NotRepresentable(g.xi.to_string()))?.element;
            let f = x.get(&g.component).cloned().unwrap_or_else(|| q.zero());
            for t in f.den.keys() {
                if *t != g.xi && q.tags.is_delta(t) {
                    return Ok(Membership::NotMember {
                        component: g.component.clone(),
                        reason: format!("pole at {t}, which glues no generator here"),
                    });
                }
            }
            let k = f.den.get(&g.xi).copied().unwrap_or(0);
            if k >= 2 {
                return Ok(Membership::NotMember {
                    component: g.component.clone(),
                    reason: format!("pole of order {k} at {}", g.xi),
                });
            }
            // x_l = (xi P)^-1 w: solve r (P a) = w modulo xi.
            let mut p_part = f.den.clone();
            p_part.remove(&g.xi);
            let p = q.monomial_element(&p_part)?;
            let pa = ring.mul(&p, &g.a_elem)?;
            if k == 0 {
                coefficients.insert(g.component.clone(), ring.zero());
                if ring.exact_divide_central(&g.a_elem, xi)?.is_some() {
                    degenerate.push(g);
                }
                continue;
            }
            match self.invert_mod(&pa, xi)? {
                Some(u) => {
                    let r = ring.reduce_mod_central(&ring.mul(&f.num, &u)?, xi)?;
                    coefficients.insert(g.component.clone(), r);
                }
                None => {
                    return Ok(Membership::NotMember {
                        component: g.component.clone(),
                        reason: format!("a-part vanishes modulo {} so the pole cannot be matched", g.xi),
                    })
                }
            }
        }
        let mut y = self.residual(&x, &coefficients, m)?;
        for g in degenerate {
            let Some(f) = y.get(&m.base).cloned() else { break };
            if f.den.get(&g.xi) != Some(&1) {
                continue;
            }
            let xi = &q.tags.get(&g.xi).expect("checked").element;
            let mut p_part = f.den.clone();
            p_part.remove(&g.xi);
            let pb = ring.mul(&q.monomial_element(&p_part)?, &g.b_elem)?;
            if let Some(u) = self.invert_mod(&pb, xi)? {
                let r = ring.reduce_mod_central(&ring.mul(&f.num, &u)?, xi)?;
                coefficients.insert(g.component.clone(), r);
                y = self.residual(&x, &coefficients, m)?;
            }
        }
        for (c, f) in &y.0 {
            let a = &m.components[c];
            if let Some(t) = f.den.keys().find(|t| !a.support.contains(*t)) {
                return Ok(Membership::NotMember {
                    component: c.clone(),
                    reason: format!("residual has a pole at {t} outside the component support"),
                });
            }
        }
        coefficients.retain(|_, r| !ring.is_zero(r));
        Ok(Membership::Member(MemberWitness {
            coefficients,
            residual: y,
        }))
    }

    fn residual(
        &self,
        x: &VectorE,
        coefficients: &BTreeMap<ComponentId, RingElement>,
        m: &GluedModule,
    ) -> ModuleResult<VectorE> {
        let q = self.q;
        let mut y = x.clone();
        for g in &m.glue {
            if let Some(r) = coefficients.get(&g.component) {
                if !q.ring.is_zero(r) {
                    let gv = self.glue_vector(g, m)?;
                    y = q.vec_sub(&y, &q.vec_scale(r, &gv)?)?;
                }
            }
        }
        Ok(y)
    }

    /// Re-checks a membership witness by recomputing the residual.
    pub fn check_witness(&self, x: &VectorE, m: &GluedModule, w: &MemberWitness) -> ModuleResult<bool> {
        let x = self.q.vec_normalize(x)?;
        let y = self.residual(&x, &w.coefficients, m)?;
        Ok(y == w.residual && self.member_base(&y, m)?)
    }

    /// Whether `c^-1 x` lies in `M`; `x` must itself be a member.
    pub fn divides_in_glued(&self, c: &TagId, x: &VectorE, m: &GluedModule) -> ModuleResult<bool> {
        if !self.member_glued(x, m)?.is_member() {
            return Err(ModuleError::NotInModule(self.q.render_vector(x)));
        }
        let scaled = self.q.vec_divide_by_tag(x, c, 1)?;
        Ok(self.member_glued(&scaled, m)?.is_member())
    }

    /// Whether `c^-1 x` lies in the base `(+) M_l`; `x` must be in the base.
    pub fn divides_in_base(&self, c: &TagId, x: &VectorE, m: &GluedModule) -> ModuleResult<bool> {
        if !self.member_base(x, m)? {
            return Err(ModuleError::NotInModule(self.q.render_vector(x)));
        }
        let scaled = self.q.vec_divide_by_tag(x, c, 1)?;
        self.member_base(&scaled, m)
    }

    /// Whether `c^-1 f` lies in `M_A`; `f` must itself lie in `M_A`.
    pub fn divides_in_localization(&self, c: &TagId, f: &Fraction, a: &LocalizationSum) -> ModuleResult<bool> {
        if !self.member_localization(f, a)? {
            return Err(ModuleError::NotInModule(self.q.render(f)));
        }
        let scaled = self.q.divide_by_tag(f, c, 1)?;
        self.member_localization(&scaled, a)
    }

    /// Infinite `d`-divisibility of `f` in `M_A`: decided by the rule
    /// "`f = 0` or `d in A`", cross-checked to `depth` powers.
    pub fn infinitely_divisible(
        &self,
        d: &TagId,
        f: &Fraction,
        a: &LocalizationSum,
        depth: u32,
    ) -> ModuleResult<InfiniteDivisibility> {
        let q = self.q;
        let f = self.checked(f)?;
        if !self.member_localization(&f, a)? {
            return Err(ModuleError::NotInModule(q.render(&f)));
        }
        let d_el = &q.tags.get(d).ok_or_else(|| ModuleError::NotRepresentable(d.to_string()))?.element;
        let zero = q.is_zero(&f);
        let decision = zero || a.support.contains(d);
        let rule = if zero {
            "zero element".to_string()
        } else if decision {
            format!("{d} lies in the support")
        } else {
            format!("{d} lies outside the support: valuation of the numerator bounds divisibility")
        };
        let mut empirical = Vec::new();
        for n in 1..=depth {
            let g = q.divide_by_tag(&f, d, n)?;
            empirical.push(self.member_localization(&g, a)?);
        }
        let valuation = if decision {
            None
        } else {
            Some(q.ring.central_valuation(&f.num, d_el)?)
        };
        let consistent = match valuation {
            None => empirical.iter().all(|&b| b),
            Some(v) => empirical.iter().enumerate().all(|(i, &b)| b == ((i as u32) < v)),
        };
        if !consistent {
            return Err(ModuleError::Internal(format!(
                "divisibility rule and bounded check disagree for {} by {d}",
                q.render(&f)
            )));
        }
        Ok(InfiniteDivisibility {
            decision,
            rule,
            empirical,
            valuation,
        })
    }
}
