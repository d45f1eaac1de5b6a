use serde::{Deserialize, Serialize};

/// Which Ore domain an experiment runs over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDescriptor {
    Integers,
    /// The integers localized at the multiplicative set of integers coprime
    /// to every listed prime.
    LocalizedIntegers { primes: Vec<u64> },
    PolyOverField { field: FieldSpec },
    /// `R[y; sigma, delta]` over a polynomial ring `R` in `x`.
    SkewPoly {
        coefficients: CoefficientSpec,
        sigma: Automorphism,
        delta: Derivation,
        #[serde(default)]
        noncommutative: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    Prime { p: u64 },
    /// `F_p[g]/(modulus)`, modulus written in `g`, e.g. `"g^2 + 1"`.
    Extension { p: u64, modulus: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CoefficientSpec {
    /// `Z[x]`.
    IntegerPoly,
    /// `k[x]`.
    FieldPoly { field: FieldSpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Automorphism {
    Identity,
    /// `c -> c^(p^power)` on field coefficients, `x -> x`.
    Frobenius { power: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Derivation {
    Zero,
    /// Formal `d/dx`.
    Derivative,
}

impl RingDescriptor {
    pub fn integers() -> Self {
        RingDescriptor::Integers
    }

    /// `Z[x][y; id, d/dx]`.
    pub fn weyl_integers() -> Self {
        RingDescriptor::SkewPoly {
            coefficients: CoefficientSpec::IntegerPoly,
            sigma: Automorphism::Identity,
            delta: Derivation::Derivative,
            noncommutative: true,
        }
    }

    /// `F_9[x][y; Frobenius]` with `F_9 = F_3[g]/(g^2 + 1)`.
    pub fn frobenius_f9() -> Self {
        RingDescriptor::SkewPoly {
            coefficients: CoefficientSpec::FieldPoly {
                field: FieldSpec::Extension {
                    p: 3,
                    modulus: "g^2 + 1".into(),
                },
            },
            sigma: Automorphism::Frobenius { power: 1 },
            delta: Derivation::Zero,
            noncommutative: true,
        }
    }

    pub fn localized(primes: &[u64]) -> Self {
        RingDescriptor::LocalizedIntegers {
            primes: primes.to_vec(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            RingDescriptor::Integers => "Z".into(),
            RingDescriptor::LocalizedIntegers { primes } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                format!("Z localized at {{{}}}", ps.join(","))
            }
            RingDescriptor::PolyOverField { field } => format!("{}[x]", field.label()),
            RingDescriptor::SkewPoly {
                coefficients,
                sigma,
                delta,
                ..
            } => {
                let base = match coefficients {
                    CoefficientSpec::IntegerPoly => "Z[x]".to_string(),
                    CoefficientSpec::FieldPoly { field } => format!("{}[x]", field.label()),
                };
                let s = match sigma {
                    Automorphism::Identity => "id".to_string(),
                    Automorphism::Frobenius { power } => format!("Frob^{power}"),
                };
                let d = match delta {
                    Derivation::Zero => "0",
                    Derivation::Derivative => "d/dx",
                };
                format!("{base}[y; {s}, {d}]")
            }
        }
    }
}

impl FieldSpec {
    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".into(),
            FieldSpec::Prime { p } => format!("F_{p}"),
            FieldSpec::Extension { p, modulus } => format!("F_{p}[g]/({modulus})"),
        }
    }
}
