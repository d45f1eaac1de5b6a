use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::factor::{ddf_irreducible, factor_finite, is_primitive, rational_root};
use super::int::{self, Primality, PrimalityEvidence};
use super::{Poly, PolyOps, Ring, RingElement, RingError, RingResult, ScalarRing, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    Proven,
    Asserted,
}

/// Checkable reason an element is irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Justification {
    IntegerPrime { evidence: PrimalityEvidence },
    /// The numerator's part at the localizing primes is exactly one prime.
    LocalizedPrime { prime: String, evidence: PrimalityEvidence },
    Linear,
    NoRationalRoot { degree: usize },
    /// Distinct-degree table `(d, number of factors of degree d)`.
    DistinctDegree { table: Vec<(usize, usize)> },
    /// Irreducible in the coefficient ring, hence as a degree-0 skew polynomial.
    DegreeZeroLift { inner: Box<Justification> },
    Unverified { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrreducibilityCertificate {
    pub kind: CertificateKind,
    pub justification: Justification,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

impl IrreducibilityCertificate {
    fn proven(j: Justification) -> Self {
        IrreducibilityCertificate {
            kind: CertificateKind::Proven,
            justification: j,
            warning: None,
        }
    }

    fn asserted(reason: impl Into<String>) -> Self {
        let reason = reason.into();
        IrreducibilityCertificate {
            kind: CertificateKind::Asserted,
            warning: Some(reason.clone()),
            justification: Justification::Unverified { reason },
        }
    }

    pub fn is_proven(&self) -> bool {
        self.kind == CertificateKind::Proven
    }
}

impl Ring {
    /// Decides irreducibility where the instance supports it; otherwise
    /// returns an `Asserted` certificate carrying a warning. A refuted input
    /// yields [`RingError::Reducible`] with a factor witness.
    pub fn certify_irreducible(&self, x: &RingElement) -> RingResult<IrreducibilityCertificate> {
        if !self.contains(x) {
            return Err(RingError::DescriptorMismatch(self.label()));
        }
        if self.is_zero(x) {
            return Err(RingError::ZeroInput);
        }
        if self.is_unit(x) {
            return Err(RingError::UnitInput);
        }
        let reducible = |w: String| RingError::Reducible {
            element: self.render(x),
            witness: w,
        };
        match (self.shape(), x) {
            (_, RingElement::Int(n)) => integer_prime(n).map_err(reducible),
            (Shape::Localized { primes }, RingElement::Local { num, .. }) => {
                let mut hits = Vec::new();
                for p in primes {
                    let (e, _) = int::valuation(num, p);
                    if e > 0 {
                        hits.push((p.clone(), e));
                    }
                }
                match hits.as_slice() {
                    [(p, 1)] => {
                        let Primality::Prime(evidence) = int::primality(p) else {
                            unreachable!("localizing primes are validated")
                        };
                        Ok(IrreducibilityCertificate::proven(Justification::LocalizedPrime {
                            prime: p.to_string(),
                            evidence,
                        }))
                    }
                    _ => {
                        let parts: Vec<String> = hits.iter().map(|(p, e)| format!("{p}^{e}")).collect();
                        Err(reducible(format!("prime part {}", parts.join("*"))))
                    }
                }
            }
            (Shape::Poly { base }, RingElement::Poly(p)) => field_poly(self, base, p).map_err(reducible),
            (Shape::Skew { base, .. }, RingElement::Skew(cs)) => {
                if cs.len() > 1 {
                    return Ok(IrreducibilityCertificate::asserted(
                        "positive y-degree: noncommutative factorization is not attempted",
                    ));
                }
                let inner = match base {
                    ScalarRing::Integers => integer_poly(self, base, &cs[0]),
                    _ => field_poly(self, base, &cs[0]),
                }
                .map_err(reducible)?;
                Ok(match inner.kind {
                    CertificateKind::Proven => IrreducibilityCertificate::proven(Justification::DegreeZeroLift {
                        inner: Box::new(inner.justification),
                    }),
                    CertificateKind::Asserted => inner,
                })
            }
            _ => Err(RingError::DescriptorMismatch(self.label())),
        }
    }

    /// Independent re-check: recomputes the decision and compares, and for
    /// primality evidence also re-runs the recorded test.
    pub fn verify_irreducibility(&self, x: &RingElement, cert: &IrreducibilityCertificate) -> bool {
        let evidence_ok = |j: &Justification| match j {
            Justification::IntegerPrime { evidence } => {
                let n = match x {
                    RingElement::Int(n) => Some(n.abs()),
                    RingElement::Skew(cs) => cs
                        .first()
                        .and_then(|c| c.coeffs().first())
                        .and_then(|c| self.poly_base().and_then(|b| b.as_integer(c)))
                        .map(|n| n.abs()),
                    _ => None,
                };
                n.is_some_and(|n| int::check_primality_evidence(&n, evidence))
            }
            _ => true,
        };
        let inner = match &cert.justification {
            Justification::DegreeZeroLift { inner } => inner.as_ref(),
            j => j,
        };
        self.certify_irreducible(x).is_ok_and(|c| &c == cert) && evidence_ok(inner)
    }

    /// Prime-certified: proven irreducible and central, with a quotient that
    /// is a domain (integers, field polynomials, and their degree-0 lifts).
    pub fn is_prime_certified(&self, x: &RingElement, cert: &IrreducibilityCertificate) -> bool {
        let degree_zero = match x {
            RingElement::Skew(cs) => cs.len() == 1,
            _ => true,
        };
        cert.is_proven() && degree_zero && self.is_central(x).unwrap_or(false)
    }
}

fn integer_prime(n: &BigInt) -> Result<IrreducibilityCertificate, String> {
    match int::primality(n) {
        Primality::Prime(evidence) => Ok(IrreducibilityCertificate::proven(Justification::IntegerPrime { evidence })),
        Primality::Composite { factor } => Err(format!("divisible by {factor}")),
        Primality::Probable => Ok(IrreducibilityCertificate::asserted("primality beyond the deterministic range")),
        Primality::NotCandidate => Err("not a prime candidate".into()),
    }
}

fn field_poly(ring: &Ring, base: &ScalarRing, p: &Poly) -> Result<IrreducibilityCertificate, String> {
    let ops = PolyOps::new(base);
    let deg = p.degree().unwrap_or(0);
    if deg == 1 {
        return Ok(IrreducibilityCertificate::proven(Justification::Linear));
    }
    if base.finite().is_some() {
        let (ok, table) = ddf_irreducible(ops, p);
        if ok {
            return Ok(IrreducibilityCertificate::proven(Justification::DistinctDegree { table }));
        }
        let fac = factor_finite(ops, p);
        let parts: Vec<String> = fac
            .factors
            .iter()
            .map(|(f, m)| format!("({})^{m}", ring.render_poly(base, f)))
            .collect();
        return Err(format!("factors as {}", parts.join("*")));
    }
    rational_root_decision(ring, base, p, deg)
}

fn rational_root_decision(
    ring: &Ring,
    base: &ScalarRing,
    p: &Poly,
    deg: usize,
) -> Result<IrreducibilityCertificate, String> {
    if deg > 3 {
        return Ok(IrreducibilityCertificate::asserted(format!(
            "degree {deg} over a characteristic-zero field is not decided"
        )));
    }
    match rational_root(p) {
        Ok(None) => Ok(IrreducibilityCertificate::proven(Justification::NoRationalRoot { degree: deg })),
        Ok(Some(r)) => Err(format!("root {r} (polynomial {})", ring.render_poly(base, p))),
        Err(()) => Ok(IrreducibilityCertificate::asserted("coefficients too large for the rational-root test")),
    }
}

fn integer_poly(ring: &Ring, base: &ScalarRing, p: &Poly) -> Result<IrreducibilityCertificate, String> {
    let ops = PolyOps::new(base);
    if ops.is_constant(p) {
        return integer_prime(&base.as_integer(&p.coeffs()[0]).expect("integer"));
    }
    if !is_primitive(ops, p) {
        let content = ops.content(p);
        if !content.abs().is_one() {
            return Err(format!("content {content} divides every coefficient"));
        }
    }
    let deg = p.degree().unwrap_or(0);
    if deg == 1 {
        return Ok(IrreducibilityCertificate::proven(Justification::Linear));
    }
    rational_root_decision(ring, base, p, deg)
}
