//! Exact arithmetic and structural predicates for the supported Ore domains:
//! `Z`, `Z` localized at a finite prime set, `k[x]`, and skew polynomial
//! rings `R[y; sigma, delta]` over `R = Z[x]` or `R = k[x]`.
//!
//! Every ring is described by a [`RingDescriptor`] and handled through a
//! [`Ring`] value; elements are plain [`RingElement`] values in canonical form,
//! so structural equality is equality in the ring.

pub mod descriptor;
pub mod factor;
pub mod field;
pub mod int;
mod irreducible;
mod parse;
pub mod poly;
mod render;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use descriptor::{Automorphism, CoefficientSpec, Derivation, FieldSpec, RingDescriptor};
pub use field::{FiniteField, Scalar, ScalarRing};
pub use irreducible::{CertificateKind, IrreducibilityCertificate, Justification};
pub use poly::{Poly, PolyOps};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("element does not belong to {0}")]
    DescriptorMismatch(String),
    #[error("zero input")]
    ZeroInput,
    #[error("unit input")]
    UnitInput,
    #[error("{0} is not central")]
    NonCentral(String),
    #[error("inputs are associates")]
    AssociateInputs,
    #[error("{element} is reducible: {witness}")]
    Reducible { element: String, witness: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type RingResult<T> = Result<T, RingError>;

/// An element in canonical form. The variant always matches the owning ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingElement {
    Int(BigInt),
    /// `num/den` with `gcd = 1`, `den > 0` and `den` coprime to every
    /// localizing prime.
    Local { num: BigInt, den: BigInt },
    Poly(Poly),
    /// Coefficients in `R`, indexed by `y`-degree: `sum c_i y^i`.
    Skew(Vec<Poly>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Shape {
    Integers,
    Localized { primes: Vec<BigInt> },
    Poly { base: ScalarRing },
    Skew {
        base: ScalarRing,
        sigma: u32,
        derivation: bool,
    },
}

/// A validated ring instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    descriptor: RingDescriptor,
    shape: Shape,
}

fn scalar_ring(spec: &FieldSpec) -> RingResult<ScalarRing> {
    let check_prime = |p: u64| {
        if matches!(int::primality(&BigInt::from(p)), int::Primality::Prime(_)) {
            Ok(())
        } else {
            Err(RingError::InvalidDescriptor(format!("{p} is not prime")))
        }
    };
    match spec {
        FieldSpec::Rationals => Ok(ScalarRing::Rationals),
        FieldSpec::Prime { p } => {
            check_prime(*p)?;
            Ok(ScalarRing::Finite(Arc::new(FiniteField::prime(*p))))
        }
        FieldSpec::Extension { p, modulus } => {
            check_prime(*p)?;
            let prime = Ring::new(RingDescriptor::PolyOverField {
                field: FieldSpec::Prime { p: *p },
            })?;
            let m = match prime.parse_with_alias(modulus, Some('g'))? {
                RingElement::Poly(m) => m,
                _ => unreachable!(),
            };
            let base = prime.poly_base().expect("polynomial ring");
            let ops = PolyOps::new(base);
            if m.degree().unwrap_or(0) < 2 || !m.leading().is_some_and(|l| base.is_one(l)) {
                return Err(RingError::InvalidDescriptor(format!(
                    "extension modulus {modulus} must be monic of degree >= 2"
                )));
            }
            if !factor::ddf_irreducible(ops, &m).0 {
                return Err(RingError::InvalidDescriptor(format!(
                    "extension modulus {modulus} is reducible over F_{p}"
                )));
            }
            let coeffs = m
                .coeffs()
                .iter()
                .map(|c| match c {
                    Scalar::Ff(v) => v[0],
                    _ => 0,
                })
                .collect();
            Ok(ScalarRing::Finite(Arc::new(FiniteField::extension(*p, coeffs))))
        }
    }
}

impl Ring {
    pub fn new(descriptor: RingDescriptor) -> RingResult<Ring> {
        let shape = match &descriptor {
            RingDescriptor::Integers => Shape::Integers,
            RingDescriptor::LocalizedIntegers { primes } => {
                let mut ps: Vec<BigInt> = Vec::new();
                for &p in primes {
                    let b = BigInt::from(p);
                    if !matches!(int::primality(&b), int::Primality::Prime(_)) {
                        return Err(RingError::InvalidDescriptor(format!(
                            "localizing set contains non-prime {p}"
                        )));
                    }
                    if ps.contains(&b) {
                        return Err(RingError::InvalidDescriptor(format!("duplicate prime {p}")));
                    }
                    ps.push(b);
                }
                ps.sort();
                Shape::Localized { primes: ps }
            }
            RingDescriptor::PolyOverField { field } => Shape::Poly {
                base: scalar_ring(field)?,
            },
            RingDescriptor::SkewPoly {
                coefficients,
                sigma,
                delta,
                noncommutative,
            } => {
                let base = match coefficients {
                    CoefficientSpec::IntegerPoly => ScalarRing::Integers,
                    CoefficientSpec::FieldPoly { field } => scalar_ring(field)?,
                };
                let power = match sigma {
                    Automorphism::Identity => 0,
                    Automorphism::Frobenius { power } => match base.finite() {
                        Some(f) => power % f.degree() as u32,
                        None => {
                            return Err(RingError::InvalidDescriptor(
                                "Frobenius requires finite-field coefficients".into(),
                            ))
                        }
                    },
                };
                let derivation = matches!(delta, Derivation::Derivative);
                if derivation && power != 0 {
                    return Err(RingError::InvalidDescriptor(
                        "d/dx is a sigma-derivation only for sigma = identity".into(),
                    ));
                }
                if *noncommutative && power == 0 && !derivation {
                    return Err(RingError::InvalidDescriptor(
                        "declared noncommutative, but sigma is the identity and delta is zero".into(),
                    ));
                }
                Shape::Skew {
                    base,
                    sigma: power,
                    derivation,
                }
            }
        };
        Ok(Ring { descriptor, shape })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.descriptor
    }

    pub fn label(&self) -> String {
        self.descriptor.label()
    }

    pub(crate) fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn is_commutative(&self) -> bool {
        match &self.shape {
            Shape::Skew {
                sigma, derivation, ..
            } => *sigma == 0 && !*derivation,
            _ => true,
        }
    }

    pub fn is_skew(&self) -> bool {
        matches!(self.shape, Shape::Skew { .. })
    }

    /// Coefficient ring of `x`-polynomials, for polynomial kinds.
    pub fn poly_base(&self) -> Option<&ScalarRing> {
        match &self.shape {
            Shape::Poly { base } | Shape::Skew { base, .. } => Some(base),
            _ => None,
        }
    }

    fn mismatch(&self) -> RingError {
        RingError::DescriptorMismatch(self.label())
    }

    // ----- constructors -------------------------------------------------

    pub fn zero(&self) -> RingElement {
        self.from_bigint(&BigInt::zero())
    }

    pub fn one(&self) -> RingElement {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> RingElement {
        match &self.shape {
            Shape::Integers => RingElement::Int(n.clone()),
            Shape::Localized { .. } => RingElement::Local {
                num: n.clone(),
                den: BigInt::one(),
            },
            Shape::Poly { base } => RingElement::Poly(PolyOps::new(base).constant(base.from_bigint(n))),
            Shape::Skew { base, .. } => {
                let c = PolyOps::new(base).constant(base.from_bigint(n));
                RingElement::Skew(trim_skew(vec![c]))
            }
        }
    }

    pub(crate) fn from_scalar(&self, s: Scalar) -> RingElement {
        match &self.shape {
            Shape::Poly { base } => RingElement::Poly(PolyOps::new(base).constant(s)),
            Shape::Skew { base, .. } => RingElement::Skew(trim_skew(vec![PolyOps::new(base).constant(s)])),
            _ => match s {
                Scalar::Int(n) => self.from_bigint(&n),
                _ => unreachable!("scalar in a ring without coefficients"),
            },
        }
    }

    /// The polynomial variable `x`, when the ring has one.
    pub fn x(&self) -> Option<RingElement> {
        match &self.shape {
            Shape::Poly { base } => Some(RingElement::Poly(PolyOps::new(base).x())),
            Shape::Skew { base, .. } => Some(RingElement::Skew(vec![PolyOps::new(base).x()])),
            _ => None,
        }
    }

    /// The skew variable `y`.
    pub fn y(&self) -> Option<RingElement> {
        match &self.shape {
            Shape::Skew { base, .. } => {
                let ops = PolyOps::new(base);
                Some(RingElement::Skew(vec![Poly::zero(), ops.one()]))
            }
            _ => None,
        }
    }

    /// The generator `g` of an extension field of coefficients.
    pub fn field_generator(&self) -> Option<RingElement> {
        let g = self.poly_base()?.finite()?.generator()?;
        Some(self.from_scalar(Scalar::Ff(g)))
    }

    /// Local element `num/den`, if `den` is a unit of the localization.
    pub fn local(&self, num: BigInt, den: BigInt) -> RingResult<RingElement> {
        let Shape::Localized { primes } = &self.shape else {
            return Err(self.mismatch());
        };
        if den.is_zero() {
            return Err(RingError::ZeroInput);
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / &g, den / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        if primes.iter().any(|p| (&d % p).is_zero()) {
            return Err(RingError::DescriptorMismatch(format!(
                "{} (denominator {d} is not invertible)",
                self.label()
            )));
        }
        Ok(RingElement::Local { num: n, den: d })
    }

    // ----- membership ---------------------------------------------------

    /// Whether `x` is a canonical element of this ring.
    pub fn contains(&self, x: &RingElement) -> bool {
        match (&self.shape, x) {
            (Shape::Integers, RingElement::Int(_)) => true,
            (Shape::Localized { primes }, RingElement::Local { num, den }) => {
                den.is_positive()
                    && num.gcd(den).is_one()
                    && primes.iter().all(|p| !(den % p).is_zero())
                    && (!num.is_zero() || den.is_one())
            }
            (Shape::Poly { base }, RingElement::Poly(p)) => PolyOps::new(base).contains(p),
            (Shape::Skew { base, .. }, RingElement::Skew(cs)) => {
                let ops = PolyOps::new(base);
                cs.iter().all(|c| ops.contains(c)) && cs.last().is_none_or(|c| !c.is_zero())
            }
            _ => false,
        }
    }

    fn check(&self, x: &RingElement) -> RingResult<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(self.mismatch())
        }
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        match x {
            RingElement::Int(n) => n.is_zero(),
            RingElement::Local { num, .. } => num.is_zero(),
            RingElement::Poly(p) => p.is_zero(),
            RingElement::Skew(cs) => cs.is_empty(),
        }
    }

    /// `y`-degree for skew elements, `x`-degree for polynomials, 0 otherwise.
    pub fn degree(&self, x: &RingElement) -> Option<usize> {
        if self.is_zero(x) {
            return None;
        }
        match x {
            RingElement::Poly(p) => p.degree(),
            RingElement::Skew(cs) => Some(cs.len() - 1),
            _ => Some(0),
        }
    }

    // ----- arithmetic ---------------------------------------------------

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingResult<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, y))
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingResult<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_raw(x, &self.neg_raw(y)))
    }

    pub fn neg(&self, x: &RingElement) -> RingResult<RingElement> {
        self.check(x)?;
        Ok(self.neg_raw(x))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingResult<RingElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_raw(x, y))
    }

    /// Product in `R[y; sigma, delta]` using `y*r = sigma(r)*y + delta(r)`.
    pub fn skew_mul(&self, f: &RingElement, g: &RingElement) -> RingResult<RingElement> {
        if !self.is_skew() {
            return Err(RingError::DescriptorMismatch(format!(
                "{} is not a skew polynomial ring",
                self.label()
            )));
        }
        self.mul(f, g)
    }

    pub fn pow(&self, x: &RingElement, n: u32) -> RingResult<RingElement> {
        self.check(x)?;
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul_raw(&acc, x);
        }
        Ok(acc)
    }

    pub(crate) fn add_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        match (&self.shape, x, y) {
            (_, RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a + b),
            (_, RingElement::Local { num: a, den: b }, RingElement::Local { num: c, den: d }) => {
                self.local(a * d + c * b, b * d).expect("closed under addition")
            }
            (Shape::Poly { base }, RingElement::Poly(a), RingElement::Poly(b)) => {
                RingElement::Poly(PolyOps::new(base).add(a, b))
            }
            (Shape::Skew { base, .. }, RingElement::Skew(a), RingElement::Skew(b)) => {
                RingElement::Skew(skew_add(PolyOps::new(base), a, b))
            }
            _ => unreachable!("checked variants"),
        }
    }

    pub(crate) fn neg_raw(&self, x: &RingElement) -> RingElement {
        match (&self.shape, x) {
            (_, RingElement::Int(a)) => RingElement::Int(-a),
            (_, RingElement::Local { num, den }) => RingElement::Local {
                num: -num,
                den: den.clone(),
            },
            (Shape::Poly { base }, RingElement::Poly(a)) => RingElement::Poly(PolyOps::new(base).neg(a)),
            (Shape::Skew { base, .. }, RingElement::Skew(a)) => {
                let ops = PolyOps::new(base);
                RingElement::Skew(a.iter().map(|c| ops.neg(c)).collect())
            }
            _ => unreachable!("checked variants"),
        }
    }

    pub(crate) fn sub_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add_raw(x, &self.neg_raw(y))
    }

    pub(crate) fn mul_raw(&self, x: &RingElement, y: &RingElement) -> RingElement {
        match (&self.shape, x, y) {
            (_, RingElement::Int(a), RingElement::Int(b)) => RingElement::Int(a * b),
            (_, RingElement::Local { num: a, den: b }, RingElement::Local { num: c, den: d }) => {
                self.local(a * c, b * d).expect("closed under multiplication")
            }
            (Shape::Poly { base }, RingElement::Poly(a), RingElement::Poly(b)) => {
                RingElement::Poly(PolyOps::new(base).mul(a, b))
            }
            (
                Shape::Skew {
                    base,
                    sigma,
                    derivation,
                },
                RingElement::Skew(f),
                RingElement::Skew(g),
            ) => {
                let ops = PolyOps::new(base);
                let mut acc: Vec<Poly> = Vec::new();
                let mut cur = g.clone();
                for (i, fi) in f.iter().enumerate() {
                    if i > 0 {
                        cur = left_mul_y(ops, *sigma, *derivation, &cur);
                    }
                    if fi.is_zero() {
                        continue;
                    }
                    let term: Vec<Poly> = cur.iter().map(|c| ops.mul(fi, c)).collect();
                    acc = skew_add(ops, &acc, &term);
                }
                RingElement::Skew(acc)
            }
            _ => unreachable!("checked variants"),
        }
    }

    /// `sigma` applied to a coefficient-ring element (degree-0 skew element).
    pub fn sigma(&self, r: &RingElement) -> RingResult<RingElement> {
        self.check(r)?;
        match (&self.shape, r) {
            (Shape::Skew { base, sigma, .. }, RingElement::Skew(cs)) if cs.len() <= 1 => {
                let ops = PolyOps::new(base);
                Ok(RingElement::Skew(cs.iter().map(|c| ops.frobenius(c, *sigma)).collect()))
            }
            _ => Err(RingError::Unsupported("sigma acts on degree-0 skew elements".into())),
        }
    }

    /// `delta` applied to a coefficient-ring element (degree-0 skew element).
    pub fn delta(&self, r: &RingElement) -> RingResult<RingElement> {
        self.check(r)?;
        match (&self.shape, r) {
            (Shape::Skew { base, derivation, .. }, RingElement::Skew(cs)) if cs.len() <= 1 => {
                let ops = PolyOps::new(base);
                if !*derivation {
                    return Ok(self.zero());
                }
                Ok(RingElement::Skew(trim_skew(cs.iter().map(|c| ops.derivative(c)).collect())))
            }
            _ => Err(RingError::Unsupported("delta acts on degree-0 skew elements".into())),
        }
    }

    // ----- structural predicates ---------------------------------------

    pub fn is_unit(&self, x: &RingElement) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.inverse(x).is_some()
    }

    /// Two-sided inverse of a unit.
    pub fn inverse(&self, x: &RingElement) -> Option<RingElement> {
        match (&self.shape, x) {
            (_, RingElement::Int(n)) => n.abs().is_one().then(|| x.clone()),
            (Shape::Localized { primes }, RingElement::Local { num, den }) => {
                if num.is_zero() || primes.iter().any(|p| (num % p).is_zero()) {
                    return None;
                }
                self.local(den.clone(), num.clone()).ok()
            }
            (Shape::Poly { base }, RingElement::Poly(p)) => {
                if p.degree() != Some(0) {
                    return None;
                }
                base.inv(&p.coeffs()[0]).map(|s| self.from_scalar(s))
            }
            (Shape::Skew { base, .. }, RingElement::Skew(cs)) => {
                if cs.len() != 1 || cs[0].degree() != Some(0) {
                    return None;
                }
                base.inv(&cs[0].coeffs()[0]).map(|s| self.from_scalar(s))
            }
            _ => None,
        }
    }

    /// Whether `x = u*y` for a unit `u` (left multiplication).
    pub fn are_associates(&self, x: &RingElement, y: &RingElement) -> RingResult<bool> {
        self.check(x)?;
        self.check(y)?;
        if self.is_zero(x) || self.is_zero(y) {
            return Err(RingError::ZeroInput);
        }
        let lead = |e: &RingElement| -> Option<Scalar> {
            match e {
                RingElement::Poly(p) => p.leading().cloned(),
                RingElement::Skew(cs) => cs.last().and_then(|c| c.leading().cloned()),
                _ => None,
            }
        };
        let unit = match (&self.shape, x, y) {
            (Shape::Integers, RingElement::Int(a), RingElement::Int(b)) => {
                return Ok(a == b || *a == -b);
            }
            (Shape::Localized { .. }, RingElement::Local { num: a, den: b }, RingElement::Local { num: c, den: d }) => {
                return Ok(self
                    .local(a * d, b * c)
                    .map(|q| self.is_unit(&q))
                    .unwrap_or(false));
            }
            _ => {
                if self.degree(x) != self.degree(y) {
                    return Ok(false);
                }
                let base = self.poly_base().expect("polynomial kind");
                match base.div_exact(&lead(x).expect("nonzero"), &lead(y).expect("nonzero")) {
                    Some(u) if base.is_unit(&u) => self.from_scalar(u),
                    _ => return Ok(false),
                }
            }
        };
        Ok(self.mul_raw(&unit, y) == *x)
    }

    /// Whether `x` commutes with every element. Decided by commutation with a
    /// generating set: `x`, `y` and the field generator `g`, when present.
    pub fn is_central(&self, x: &RingElement) -> RingResult<bool> {
        self.check(x)?;
        if self.is_commutative() {
            return Ok(true);
        }
        let gens = [self.x(), self.y(), self.field_generator()];
        Ok(gens
            .iter()
            .flatten()
            .all(|g| self.mul_raw(g, x) == self.mul_raw(x, g)))
    }

    /// `q` with `c*q = x`, when it exists. `c` must be central and nonzero.
    pub fn exact_divide_central(&self, x: &RingElement, c: &RingElement) -> RingResult<Option<RingElement>> {
        self.check(x)?;
        self.check(c)?;
        if self.is_zero(c) {
            return Err(RingError::ZeroInput);
        }
        if !self.is_central(c)? {
            return Err(RingError::NonCentral(self.render(c)));
        }
        Ok(self.divide_central_raw(x, c))
    }

    pub(crate) fn divide_central_raw(&self, x: &RingElement, c: &RingElement) -> Option<RingElement> {
        match (&self.shape, x, c) {
            (_, RingElement::Int(a), RingElement::Int(b)) => {
                let (q, r) = a.div_rem(b);
                r.is_zero().then_some(RingElement::Int(q))
            }
            (_, RingElement::Local { num: a, den: b }, RingElement::Local { num: c, den: d }) => {
                self.local(a * d, b * c).ok()
            }
            (Shape::Poly { base }, RingElement::Poly(a), RingElement::Poly(b)) => {
                PolyOps::new(base).div_exact(a, b).map(RingElement::Poly)
            }
            (Shape::Skew { base, .. }, RingElement::Skew(a), RingElement::Skew(b)) => {
                if b.len() != 1 {
                    return None;
                }
                let ops = PolyOps::new(base);
                let qs: Option<Vec<Poly>> = a.iter().map(|ai| ops.div_exact(ai, &b[0])).collect();
                qs.map(|q| RingElement::Skew(trim_skew(q)))
            }
            _ => None,
        }
    }

    /// Number of times the central element `c` divides `x` (x nonzero).
    pub fn central_valuation(&self, x: &RingElement, c: &RingElement) -> RingResult<u32> {
        if self.is_zero(x) {
            return Err(RingError::ZeroInput);
        }
        if self.is_unit(c) {
            return Err(RingError::UnitInput);
        }
        let mut cur = x.clone();
        let mut n = 0;
        while let Some(q) = self.exact_divide_central(&cur, c)? {
            cur = q;
            n += 1;
        }
        Ok(n)
    }

    /// `(u, v)` with `u*c + v*d = 1`, computed in the commutative subring the
    /// two central elements generate (`Z`, or `k[x]`). `None` if no witness
    /// exists there.
    pub fn bezout_witness(
        &self,
        c: &RingElement,
        d: &RingElement,
    ) -> RingResult<Option<(RingElement, RingElement)>> {
        self.check(c)?;
        self.check(d)?;
        if self.is_zero(c) || self.is_zero(d) {
            return Err(RingError::ZeroInput);
        }
        for e in [c, d] {
            if !self.is_central(e)? {
                return Err(RingError::NonCentral(self.render(e)));
            }
        }
        if self.are_associates(c, d)? && !self.is_unit(c) {
            return Err(RingError::AssociateInputs);
        }
        Ok(self.bezout_raw(c, d))
    }

    fn bezout_raw(&self, c: &RingElement, d: &RingElement) -> Option<(RingElement, RingElement)> {
        let witness = match (&self.shape, c, d) {
            (_, RingElement::Int(a), RingElement::Int(b)) => {
                let (g, u, v) = int::bezout(a, b);
                g.is_one().then(|| (RingElement::Int(u), RingElement::Int(v)))
            }
            (_, RingElement::Local { num: a, den: ad }, RingElement::Local { num: b, den: bd }) => {
                let (g, u, v) = int::bezout(a, b);
                // g must be a unit of the localization for (c, d) to be comaximal.
                self.local(g.clone(), BigInt::one()).ok().filter(|e| self.is_unit(e))?;
                Some((self.local(u * ad, g.clone()).ok()?, self.local(v * bd, g).ok()?))
            }
            (Shape::Poly { base }, RingElement::Poly(a), RingElement::Poly(b)) => {
                poly_bezout(base, a, b).map(|(u, v)| (RingElement::Poly(u), RingElement::Poly(v)))
            }
            (Shape::Skew { base, .. }, RingElement::Skew(a), RingElement::Skew(b)) => {
                if a.len() != 1 || b.len() != 1 {
                    return None;
                }
                poly_bezout(base, &a[0], &b[0])
                    .map(|(u, v)| (RingElement::Skew(trim_skew(vec![u])), RingElement::Skew(trim_skew(vec![v]))))
            }
            _ => None,
        }?;
        let check = self.add_raw(&self.mul_raw(&witness.0, c), &self.mul_raw(&witness.1, d));
        (check == self.one()).then_some(witness)
    }

    /// Canonical representative of `x` modulo the two-sided ideal `cD` for a
    /// central non-unit `c`: two elements are congruent iff their
    /// representatives are equal.
    pub fn reduce_mod_central(&self, x: &RingElement, c: &RingElement) -> RingResult<RingElement> {
        self.check(x)?;
        self.check(c)?;
        if self.is_zero(c) {
            return Err(RingError::ZeroInput);
        }
        match (&self.shape, x, c) {
            (_, RingElement::Int(a), RingElement::Int(m)) => Ok(RingElement::Int(a.mod_floor(&m.abs()))),
            (Shape::Localized { primes }, RingElement::Local { num, den }, RingElement::Local { num: cn, .. }) => {
                let mut modulus = BigInt::one();
                for p in primes {
                    let (e, _) = int::valuation(cn, p);
                    modulus *= p.pow(e);
                }
                if modulus.is_one() {
                    return Ok(self.zero());
                }
                let (_, inv, _) = int::bezout(den, &modulus);
                Ok(self.from_bigint(&(num * inv).mod_floor(&modulus)))
            }
            (Shape::Poly { base }, RingElement::Poly(a), RingElement::Poly(m)) => {
                let ops = PolyOps::new(base);
                Ok(RingElement::Poly(ops.rem(a, m).expect("field division")))
            }
            (Shape::Skew { base, .. }, RingElement::Skew(a), RingElement::Skew(m)) => {
                if m.len() != 1 {
                    return Err(RingError::Unsupported(
                        "reduction modulo a central element of positive y-degree".into(),
                    ));
                }
                let ops = PolyOps::new(base);
                let m0 = &m[0];
                let reduce = |p: &Poly| -> RingResult<Poly> {
                    if !base.is_field() && ops.is_constant(m0) {
                        let n = base.as_integer(&m0.coeffs()[0]).expect("integer");
                        Ok(ops.reduce_integer_coeffs(p, &n))
                    } else if base.is_field() || ops.is_monic_up_to_sign(m0) {
                        Ok(ops.rem(p, m0).expect("unit leading coefficient"))
                    } else {
                        Err(RingError::Unsupported(
                            "reduction modulo a non-monic integer polynomial".into(),
                        ))
                    }
                };
                let cs: RingResult<Vec<Poly>> = a.iter().map(reduce).collect();
                Ok(RingElement::Skew(trim_skew(cs?)))
            }
            _ => Err(self.mismatch()),
        }
    }

    // ----- sampling -----------------------------------------------------

    fn random_scalar<R: Rng + ?Sized>(&self, base: &ScalarRing, rng: &mut R, height: i64) -> Scalar {
        match base {
            ScalarRing::Integers => Scalar::Int(rng.gen_range(-height..=height).into()),
            ScalarRing::Rationals => {
                let n: BigInt = rng.gen_range(-height..=height).into();
                let d: BigInt = rng.gen_range(1..=3i64).into();
                Scalar::Rat(num_rational::BigRational::new(n, d))
            }
            ScalarRing::Finite(f) => {
                let p = f.characteristic();
                Scalar::Ff((0..f.degree()).map(|_| rng.gen_range(0..p)).collect())
            }
        }
    }

    fn random_poly<R: Rng + ?Sized>(&self, base: &ScalarRing, rng: &mut R, height: i64, max_deg: usize) -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        let cs = (0..=deg).map(|_| self.random_scalar(base, rng, height)).collect();
        PolyOps::new(base).trim(cs)
    }

    /// A random element of bounded size (possibly zero).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> RingElement {
        match &self.shape {
            Shape::Integers => RingElement::Int(rng.gen_range(-height..=height).into()),
            Shape::Localized { primes } => {
                let num: BigInt = rng.gen_range(-height..=height).into();
                let mut den = BigInt::one();
                for _ in 0..4 {
                    let cand: BigInt = rng.gen_range(1..=height.max(1)).into();
                    if primes.iter().all(|p| !(&cand % p).is_zero()) {
                        den = cand;
                        break;
                    }
                }
                self.local(num, den).expect("unit denominator")
            }
            Shape::Poly { base } => RingElement::Poly(self.random_poly(base, rng, height, 2)),
            Shape::Skew { base, .. } => {
                let ydeg = rng.gen_range(0..=1);
                let cs = (0..=ydeg).map(|_| self.random_poly(base, rng, height, 1)).collect();
                RingElement::Skew(trim_skew(cs))
            }
        }
    }

    /// A random nonzero element of bounded size.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> RingElement {
        loop {
            let e = self.random_element(rng, height);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    /// A random nonzero element of the prime subring (always central).
    pub fn random_central<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> RingElement {
        loop {
            let n: i64 = rng.gen_range(-height..=height);
            let e = self.from_i64(n);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    /// Constants of bounded height: integers in `[-c, c]` in characteristic
    /// zero, or (up to `2c + 1` of) the field's elements in positive
    /// characteristic.
    pub fn bounded_constants(&self, c: u32) -> Vec<RingElement> {
        let count = 2 * c as usize + 1;
        if let Some(f) = self.poly_base().and_then(|b| b.finite()) {
            return f.elements().take(count).map(|v| self.from_scalar(Scalar::Ff(v))).collect();
        }
        let c = c as i64;
        let mut out: Vec<RingElement> = (-c..=c).map(|n| self.from_i64(n)).collect();
        out.dedup();
        out
    }

    /// Whether the residues of constants modulo `c` are represented by
    /// constants (so a bounded constant search covers `D/(c)` on constant
    /// inputs), together with the number of residue classes of constants.
    pub fn constant_residue_classes(&self, c: &RingElement) -> Option<BigInt> {
        match (&self.shape, c) {
            (Shape::Integers, RingElement::Int(n)) => Some(n.abs()),
            (Shape::Localized { primes }, RingElement::Local { num, .. }) => {
                let mut m = BigInt::one();
                for p in primes {
                    m *= p.pow(int::valuation(num, p).0);
                }
                Some(m)
            }
            (Shape::Skew { base, .. }, RingElement::Skew(cs)) if cs.len() == 1 => match base {
                ScalarRing::Integers if cs[0].degree() == Some(0) => base.as_integer(&cs[0].coeffs()[0]).map(|n| n.abs()),
                ScalarRing::Finite(f) if cs[0].degree() == Some(1) => Some(BigInt::from(f.order())),
                _ => None,
            },
            (Shape::Poly { base: ScalarRing::Finite(f) }, RingElement::Poly(p)) if p.degree() == Some(1) => {
                Some(BigInt::from(f.order()))
            }
            _ => None,
        }
    }

    /// Number of field elements when coefficients form a finite field.
    pub fn coefficient_field_order(&self) -> Option<u64> {
        self.poly_base()?.finite()?.order().to_u64()
    }
}

fn trim_skew(mut v: Vec<Poly>) -> Vec<Poly> {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
    v
}

fn skew_add(ops: PolyOps<'_>, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let n = a.len().max(b.len());
    let zero = Poly::zero();
    trim_skew(
        (0..n)
            .map(|i| ops.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
            .collect(),
    )
}

/// `y * h` for `h = sum c_k y^k`: `sum sigma(c_k) y^{k+1} + delta(c_k) y^k`.
fn left_mul_y(ops: PolyOps<'_>, sigma: u32, derivation: bool, h: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); h.len() + 1];
    for (k, c) in h.iter().enumerate() {
        out[k + 1] = ops.add(&out[k + 1], &ops.frobenius(c, sigma));
        if derivation {
            out[k] = ops.add(&out[k], &ops.derivative(c));
        }
    }
    trim_skew(out)
}

/// Bézout witness for two polynomials over a field, or over the integers
/// when both are constants or the rational witness happens to be integral.
fn poly_bezout(base: &ScalarRing, a: &Poly, b: &Poly) -> Option<(Poly, Poly)> {
    let ops = PolyOps::new(base);
    if base.is_field() {
        let (g, u, v) = ops.xgcd(a, b);
        return (g == ops.one()).then_some((u, v));
    }
    if ops.is_constant(a) && ops.is_constant(b) {
        let (x, y) = (base.as_integer(&a.coeffs()[0])?, base.as_integer(&b.coeffs()[0])?);
        let (g, u, v) = int::bezout(&x, &y);
        return g
            .is_one()
            .then(|| (ops.constant(Scalar::Int(u)), ops.constant(Scalar::Int(v))));
    }
    // Solve over Q and keep the witness when it is integral.
    let q = ScalarRing::Rationals;
    let qops = PolyOps::new(&q);
    let lift = |p: &Poly| {
        qops.trim(
            p.coeffs()
                .iter()
                .map(|c| q.from_bigint(&base.as_integer(c).unwrap_or_default()))
                .collect(),
        )
    };
    let (g, u, v) = qops.xgcd(&lift(a), &lift(b));
    if g != qops.one() {
        return None;
    }
    let lower = |p: &Poly| -> Option<Poly> {
        let cs: Option<Vec<Scalar>> = p.coeffs().iter().map(|c| q.as_integer(c).map(Scalar::Int)).collect();
        cs.map(|c| ops.trim(c))
    };
    Some((lower(&u)?, lower(&v)?))
}

#[cfg(test)]
mod tests;
