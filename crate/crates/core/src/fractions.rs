//! Elements of the quotient ring `E` whose denominators are monomials in
//! designated central irreducibles, and finite-support vectors of them.
//!
//! A fraction `num / m` stands for `m^-1 * num`; since `m` is central this is
//! also `num * m^-1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::ring::{IrreducibilityCertificate, Ring, RingElement, RingError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TagId(pub String);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub String);

impl fmt::Display for TagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TagId {
    fn from(s: &str) -> Self {
        TagId(s.to_string())
    }
}

impl From<&str> for ComponentId {
    fn from(s: &str) -> Self {
        ComponentId(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TagRole {
    GammaA,
    GammaB,
    Delta,
}

/// A designated central irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tag {
    pub id: TagId,
    pub role: TagRole,
    pub element: RingElement,
    pub certificate: IrreducibilityCertificate,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TagTable {
    tags: BTreeMap<TagId, Tag>,
}

impl TagTable {
    pub fn new(tags: impl IntoIterator<Item = Tag>) -> Self {
        TagTable {
            tags: tags.into_iter().map(|t| (t.id.clone(), t)).collect(),
        }
    }

    pub fn get(&self, id: &TagId) -> Option<&Tag> {
        self.tags.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tag> {
        self.tags.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &TagId> {
        self.tags.keys()
    }

    pub fn is_delta(&self, id: &TagId) -> bool {
        self.get(id).is_some_and(|t| t.role == TagRole::Delta)
    }

    /// The tag whose element equals `e`, if any.
    pub fn find(&self, e: &RingElement) -> Option<&TagId> {
        self.tags.values().find(|t| &t.element == e).map(|t| &t.id)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FractionError {
    #[error("denominator tag {0} is not a designated irreducible")]
    UnknownTag(TagId),
    #[error("malformed fraction: {0}")]
    Malformed(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub type Monomial = BTreeMap<TagId, u32>;

/// `den^-1 * num` with `den` a monomial in designated tags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fraction {
    pub num: RingElement,
    pub den: Monomial,
}

impl Fraction {
    pub fn support(&self) -> BTreeSet<TagId> {
        self.den.keys().cloned().collect()
    }
}

/// Element of `E^(Lambda)`; zero components are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorE(pub BTreeMap<ComponentId, Fraction>);

impl VectorE {
    pub fn zero() -> Self {
        VectorE::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, c: &ComponentId) -> Option<&Fraction> {
        self.0.get(c)
    }
}

/// Fraction arithmetic over a ring and a table of designated tags.
#[derive(Clone, Copy, Debug)]
pub struct Quotient<'a> {
    pub ring: &'a Ring,
    pub tags: &'a TagTable,
}

impl<'a> Quotient<'a> {
    pub fn new(ring: &'a Ring, tags: &'a TagTable) -> Self {
        Quotient { ring, tags }
    }

    fn tag_element(&self, id: &TagId) -> Result<&'a RingElement, FractionError> {
        self.tags
            .get(id)
            .map(|t| &t.element)
            .ok_or_else(|| FractionError::UnknownTag(id.clone()))
    }

    /// The ring element a monomial denotes.
    pub fn monomial_element(&self, m: &Monomial) -> Result<RingElement, FractionError> {
        let mut acc = self.ring.one();
        for (id, &e) in m {
            let t = self.tag_element(id)?;
            for _ in 0..e {
                acc = self.ring.mul(&acc, t)?;
            }
        }
        Ok(acc)
    }

    pub fn from_element(&self, r: RingElement) -> Fraction {
        Fraction {
            num: r,
            den: Monomial::new(),
        }
    }

    pub fn zero(&self) -> Fraction {
        self.from_element(self.ring.zero())
    }

    pub fn is_zero(&self, f: &Fraction) -> bool {
        self.ring.is_zero(&f.num)
    }

    /// `num / den` in normal form.
    pub fn fraction(&self, num: RingElement, den: Monomial) -> Result<Fraction, FractionError> {
        self.normalize(&Fraction { num, den })
    }

    /// Cancels every denominator tag that divides the numerator.
    pub fn normalize(&self, f: &Fraction) -> Result<Fraction, FractionError> {
        let mut num = f.num.clone();
        let mut den = Monomial::new();
        for (id, &e) in &f.den {
            let t = self.tag_element(id)?;
            let mut left = e;
            while left > 0 {
                match self.ring.exact_divide_central(&num, t)? {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
                if self.ring.is_zero(&num) {
                    break;
                }
            }
            if self.ring.is_zero(&num) {
                return Ok(self.zero());
            }
            if left > 0 {
                den.insert(id.clone(), left);
            }
        }
        Ok(Fraction { num, den })
    }

    fn rescale(&self, f: &Fraction, to: &Monomial) -> Result<RingElement, FractionError> {
        let mut extra = Monomial::new();
        for (id, &e) in to {
            let have = f.den.get(id).copied().unwrap_or(0);
            if e > have {
                extra.insert(id.clone(), e - have);
            }
        }
        let m = self.monomial_element(&extra)?;
        Ok(self.ring.mul(&m, &f.num)?)
    }

    pub fn add(&self, f: &Fraction, g: &Fraction) -> Result<Fraction, FractionError> {
        let mut lcm = f.den.clone();
        for (id, &e) in &g.den {
            let slot = lcm.entry(id.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let num = self.ring.add(&self.rescale(f, &lcm)?, &self.rescale(g, &lcm)?)?;
        self.fraction(num, lcm)
    }

    pub fn neg(&self, f: &Fraction) -> Result<Fraction, FractionError> {
        Ok(Fraction {
            num: self.ring.neg(&f.num)?,
            den: f.den.clone(),
        })
    }

    pub fn sub(&self, f: &Fraction, g: &Fraction) -> Result<Fraction, FractionError> {
        self.add(f, &self.neg(g)?)
    }

    /// Left multiplication `r * f`.
    pub fn scale(&self, r: &RingElement, f: &Fraction) -> Result<Fraction, FractionError> {
        self.fraction(self.ring.mul(r, &f.num)?, f.den.clone())
    }

    /// `t^-k * f`.
    pub fn divide_by_tag(&self, f: &Fraction, t: &TagId, k: u32) -> Result<Fraction, FractionError> {
        self.tag_element(t)?;
        if self.is_zero(f) {
            return Ok(f.clone());
        }
        let mut den = f.den.clone();
        *den.entry(t.clone()).or_insert(0) += k;
        self.fraction(f.num.clone(), den)
    }

    /// Canonical representative of the class of `f` in `E / D`: the
    /// numerator is reduced modulo the denominator, then renormalized.
    pub fn frac(&self, f: &Fraction) -> Result<Fraction, FractionError> {
        let mut cur = self.normalize(f)?;
        loop {
            if cur.den.is_empty() {
                return Ok(self.zero());
            }
            let m = self.monomial_element(&cur.den)?;
            let r = self.ring.reduce_mod_central(&cur.num, &m)?;
            let next = self.fraction(r, cur.den.clone())?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    // ----- vectors ------------------------------------------------------

    pub fn unit_vector(&self, c: ComponentId, f: Fraction) -> VectorE {
        let mut v = VectorE::zero();
        if !self.is_zero(&f) {
            v.0.insert(c, f);
        }
        v
    }

    pub fn vec_add(&self, u: &VectorE, v: &VectorE) -> Result<VectorE, FractionError> {
        let mut out = u.0.clone();
        for (c, g) in &v.0 {
            let sum = match out.get(c) {
                Some(f) => self.add(f, g)?,
                None => g.clone(),
            };
            if self.is_zero(&sum) {
                out.remove(c);
            } else {
                out.insert(c.clone(), sum);
            }
        }
        Ok(VectorE(out))
    }

    pub fn vec_neg(&self, u: &VectorE) -> Result<VectorE, FractionError> {
        let mut out = BTreeMap::new();
        for (c, f) in &u.0 {
            out.insert(c.clone(), self.neg(f)?);
        }
        Ok(VectorE(out))
    }

    pub fn vec_sub(&self, u: &VectorE, v: &VectorE) -> Result<VectorE, FractionError> {
        self.vec_add(u, &self.vec_neg(v)?)
    }

    pub fn vec_scale(&self, r: &RingElement, u: &VectorE) -> Result<VectorE, FractionError> {
        let mut out = BTreeMap::new();
        for (c, f) in &u.0 {
            let g = self.scale(r, f)?;
            if !self.is_zero(&g) {
                out.insert(c.clone(), g);
            }
        }
        Ok(VectorE(out))
    }

    pub fn vec_eq(&self, u: &VectorE, v: &VectorE) -> bool {
        u == v
    }

    pub fn vec_normalize(&self, u: &VectorE) -> Result<VectorE, FractionError> {
        let mut out = BTreeMap::new();
        for (c, f) in &u.0 {
            let g = self.normalize(f)?;
            if !self.is_zero(&g) {
                out.insert(c.clone(), g);
            }
        }
        Ok(VectorE(out))
    }

    /// `t^-k * u`.
    pub fn vec_divide_by_tag(&self, u: &VectorE, t: &TagId, k: u32) -> Result<VectorE, FractionError> {
        let mut out = BTreeMap::new();
        for (c, f) in &u.0 {
            out.insert(c.clone(), self.divide_by_tag(f, t, k)?);
        }
        Ok(VectorE(out))
    }

    /// Componentwise [`Quotient::frac`].
    pub fn vec_frac(&self, u: &VectorE) -> Result<VectorE, FractionError> {
        let mut out = BTreeMap::new();
        for (c, f) in &u.0 {
            let g = self.frac(f)?;
            if !self.is_zero(&g) {
                out.insert(c.clone(), g);
            }
        }
        Ok(VectorE(out))
    }

    // ----- text and JSON -------------------------------------------------

    /// `m^-1*(num)` form, e.g. `(11)^-1*(2)`; plain numerator when `m = 1`.
    pub fn render(&self, f: &Fraction) -> String {
        let num = self.ring.render(&f.num);
        if f.den.is_empty() {
            return num;
        }
        let den: Vec<String> = f
            .den
            .iter()
            .map(|(id, &e)| {
                let el = self
                    .tags
                    .get(id)
                    .map_or_else(|| id.0.clone(), |t| self.ring.render(&t.element));
                if e == 1 {
                    format!("({el})")
                } else {
                    format!("({el})^{e}")
                }
            })
            .collect();
        format!("[{}]^-1*({num})", den.join("*"))
    }

    pub fn render_vector(&self, v: &VectorE) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = v.0.iter().map(|(c, f)| format!("{}*e[{c}]", self.render(f))).collect();
        parts.join(" + ")
    }

    pub fn fraction_json(&self, f: &Fraction) -> Value {
        let den: Vec<Value> = f.den.iter().map(|(id, e)| json!({"irr": id.0, "exp": e})).collect();
        json!({"num": self.ring.render(&f.num), "den": den})
    }

    pub fn fraction_from_json(&self, v: &Value) -> Result<Fraction, FractionError> {
        let bad = || FractionError::Malformed(v.to_string());
        let num = self.ring.parse_element(v.get("num").and_then(Value::as_str).ok_or_else(bad)?)?;
        let mut den = Monomial::new();
        for d in v.get("den").and_then(Value::as_array).ok_or_else(bad)? {
            let id = TagId(d.get("irr").and_then(Value::as_str).ok_or_else(bad)?.to_string());
            let e = d.get("exp").and_then(Value::as_u64).ok_or_else(bad)?;
            if e == 0 {
                return Err(bad());
            }
            *den.entry(id).or_insert(0) += u32::try_from(e).map_err(|_| bad())?;
        }
        self.fraction(num, den)
    }

    pub fn vector_json(&self, v: &VectorE) -> Value {
        Value::Object(
            v.0.iter()
                .map(|(c, f)| (c.0.clone(), self.fraction_json(f)))
                .collect(),
        )
    }

    pub fn vector_from_json(&self, v: &Value) -> Result<VectorE, FractionError> {
        let obj = v.as_object().ok_or_else(|| FractionError::Malformed(v.to_string()))?;
        let mut out = VectorE::zero();
        for (c, f) in obj {
            let f = self.fraction_from_json(f)?;
            out = self.vec_add(&out, &self.unit_vector(ComponentId(c.clone()), f))?;
        }
        Ok(out)
    }
}
