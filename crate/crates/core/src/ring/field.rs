//! Coefficient arithmetic: the integers, the rationals, and finite fields
//! `F_p[g]/(m(g))`.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `F_{p^k}` presented as `F_p[g]/(modulus)`; `k = 1` is the prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    /// Monic, low-to-high, length `k + 1`.
    modulus: Vec<u64>,
}

impl FiniteField {
    pub fn prime(p: u64) -> Self {
        FiniteField {
            p,
            modulus: vec![0, 1],
        }
    }

    /// `modulus` is low-to-high and must be monic of degree >= 1; irreducibility
    /// is the caller's responsibility.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Self {
        FiniteField { p, modulus }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn from_u64(&self, n: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = n % self.p;
        v
    }

    pub fn from_bigint(&self, n: &BigInt) -> Vec<u64> {
        let r = n.mod_floor(&BigInt::from(self.p));
        self.from_u64(r.to_u64().unwrap_or(0))
    }

    /// The class of `g`, or `None` for a prime field.
    pub fn generator(&self) -> Option<Vec<u64>> {
        if self.degree() < 2 {
            return None;
        }
        let mut v = self.zero();
        v[1] = 1;
        Some(v)
    }

    pub fn contains(&self, a: &[u64]) -> bool {
        a.len() == self.degree() && a.iter().all(|&c| c < self.p)
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.degree();
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * k];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        // Reduce modulo the monic modulus, from the top down.
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let t = c * m as u128 % p;
                prod[d - k + i] = (prod[d - k + i] + p - t) % p;
            }
        }
        prod[..k].iter().map(|&c| c as u64).collect()
    }

    pub fn pow(&self, a: &[u64], exp: &BigUint) -> Vec<u64> {
        let mut acc = self.from_u64(1);
        let mut base = a.to_vec();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let e = self.order() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }

    /// `a -> a^(p^power)`.
    pub fn frobenius(&self, a: &[u64], power: u32) -> Vec<u64> {
        let e = BigUint::from(self.p).pow(power % self.degree().max(1) as u32);
        self.pow(a, &e)
    }

    /// All elements in a fixed canonical order (coordinates little-endian).
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        let k = self.degree();
        let total = self.order().to_u64().unwrap_or(u64::MAX);
        (0..total).map(move |mut n| {
            let mut v = vec![0; k];
            for c in v.iter_mut() {
                *c = n % self.p;
                n /= self.p;
            }
            v
        })
    }
}

/// A coefficient value. The variant always matches the owning [`ScalarRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Ff(Vec<u64>),
}

/// The ring that polynomial coefficients live in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarRing {
    Integers,
    Rationals,
    Finite(Arc<FiniteField>),
}

impl ScalarRing {
    pub fn is_field(&self) -> bool {
        !matches!(self, ScalarRing::Integers)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            ScalarRing::Finite(f) => f.characteristic(),
            _ => 0,
        }
    }

    pub fn finite(&self) -> Option<&FiniteField> {
        match self {
            ScalarRing::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_bigint(&BigInt::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            ScalarRing::Integers => Scalar::Int(n.clone()),
            ScalarRing::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            ScalarRing::Finite(f) => Scalar::Ff(f.from_bigint(n)),
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (ScalarRing::Integers, Scalar::Int(_)) => true,
            (ScalarRing::Rationals, Scalar::Rat(r)) => r.denom().is_positive(),
            (ScalarRing::Finite(f), Scalar::Ff(v)) => f.contains(v),
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Ff(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (ScalarRing::Finite(f), Scalar::Ff(x), Scalar::Ff(y)) => Scalar::Ff(f.add(x, y)),
            _ => unreachable!("scalar variant mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (_, Scalar::Int(x)) => Scalar::Int(-x),
            (_, Scalar::Rat(x)) => Scalar::Rat(-x),
            (ScalarRing::Finite(f), Scalar::Ff(x)) => Scalar::Ff(f.neg(x)),
            _ => unreachable!("scalar variant mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (_, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (_, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (ScalarRing::Finite(f), Scalar::Ff(x), Scalar::Ff(y)) => Scalar::Ff(f.mul(x, y)),
            _ => unreachable!("scalar variant mismatch"),
        }
    }

    /// Two-sided inverse, if `a` is a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (_, Scalar::Int(x)) => (x.abs().is_one()).then(|| Scalar::Int(x.clone())),
            (_, Scalar::Rat(x)) => (!x.is_zero()).then(|| Scalar::Rat(x.recip())),
            (ScalarRing::Finite(f), Scalar::Ff(x)) => f.inv(x).map(Scalar::Ff),
            _ => None,
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// `q` with `b*q = a`, if one exists.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(Scalar::Int(q))
            }
            _ => self.inv(b).map(|bi| self.mul(a, &bi)),
        }
    }

    pub fn frobenius(&self, a: &Scalar, power: u32) -> Scalar {
        match (self, a) {
            (ScalarRing::Finite(f), Scalar::Ff(x)) if power > 0 => Scalar::Ff(f.frobenius(x, power)),
            _ => a.clone(),
        }
    }

    /// Integer value when the scalar is an integer (or an integral rational).
    pub fn as_integer(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Int(n) => Some(n.clone()),
            Scalar::Rat(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    /// Whether the scalar lies in the prime subring/subfield (fixed by every
    /// automorphism).
    pub fn in_prime_subfield(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Ff(v) => v.iter().skip(1).all(|&c| c == 0),
            _ => true,
        }
    }

    /// Splits a scalar into a sign and a magnitude rendering. Finite-field
    /// values never carry a sign.
    pub fn render_signed(&self, a: &Scalar) -> (bool, String) {
        match a {
            Scalar::Int(n) => (n.is_negative(), n.abs().to_string()),
            Scalar::Rat(r) => {
                let m = r.abs();
                let s = if m.is_integer() {
                    m.to_integer().to_string()
                } else {
                    format!("{}/{}", m.numer(), m.denom())
                };
                (r.is_negative(), s)
            }
            Scalar::Ff(v) => (false, render_ff(v)),
        }
    }

    pub fn render(&self, a: &Scalar) -> String {
        let (neg, s) = self.render_signed(a);
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

fn render_ff(v: &[u64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in v.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "g".to_string(),
            _ => format!("g^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FiniteField {
        // g^2 + 1 is irreducible over F_3.
        FiniteField::extension(3, vec![1, 0, 1])
    }

    #[test]
    fn f9_generator_squares_to_minus_one() {
        let f = f9();
        let g = f.generator().unwrap();
        assert_eq!(f.mul(&g, &g), f.from_u64(2));
    }

    #[test]
    fn f9_frobenius_is_cubing_and_fixes_f3() {
        let f = f9();
        let g = f.generator().unwrap();
        let g3 = f.mul(&f.mul(&g, &g), &g);
        assert_eq!(f.frobenius(&g, 1), g3);
        assert_ne!(f.frobenius(&g, 1), g);
        for c in 0..3 {
            let a = f.from_u64(c);
            assert_eq!(f.frobenius(&a, 1), a);
        }
        // Frobenius squared is the identity on F_9.
        for a in f.elements() {
            assert_eq!(f.frobenius(&f.frobenius(&a, 1), 1), a);
        }
    }

    #[test]
    fn f9_inverses() {
        let f = f9();
        for a in f.elements().filter(|a| !f.is_zero(a)) {
            let ai = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &ai), f.from_u64(1));
        }
        assert_eq!(f.elements().count(), 9);
    }

    #[test]
    fn rendering() {
        let f = f9();
        let r = ScalarRing::Finite(Arc::new(f));
        assert_eq!(r.render(&Scalar::Ff(vec![1, 2])), "2*g + 1");
        let q = ScalarRing::Rationals;
        assert_eq!(
            q.render(&Scalar::Rat(BigRational::new((-1).into(), 2.into()))),
            "-1/2"
        );
    }
}
