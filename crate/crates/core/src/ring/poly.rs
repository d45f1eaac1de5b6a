//! Dense univariate polynomials in `x` over a [`ScalarRing`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{Scalar, ScalarRing};

/// Coefficients low-to-high with no trailing zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(pub Vec<Scalar>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn constant_term(&self) -> Option<&Scalar> {
        self.0.first()
    }
}

/// Polynomial arithmetic over a fixed coefficient ring.
#[derive(Clone, Copy, Debug)]
pub struct PolyOps<'a> {
    pub base: &'a ScalarRing,
}

impl<'a> PolyOps<'a> {
    pub fn new(base: &'a ScalarRing) -> Self {
        PolyOps { base }
    }

    pub fn trim(&self, mut v: Vec<Scalar>) -> Poly {
        while v.last().is_some_and(|c| self.base.is_zero(c)) {
            v.pop();
        }
        Poly(v)
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        self.trim(vec![c])
    }

    pub fn one(&self) -> Poly {
        self.constant(self.base.one())
    }

    pub fn x(&self) -> Poly {
        Poly(vec![self.base.zero(), self.base.one()])
    }

    pub fn monomial(&self, c: Scalar, deg: usize) -> Poly {
        let mut v = vec![self.base.zero(); deg];
        v.push(c);
        self.trim(v)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        p.0.iter().all(|c| self.base.contains(c)) && p.0.last().is_none_or(|c| !self.base.is_zero(c))
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.0.len().max(b.0.len());
        let zero = self.base.zero();
        let v = (0..n)
            .map(|i| {
                let x = a.0.get(i).unwrap_or(&zero);
                let y = b.0.get(i).unwrap_or(&zero);
                self.base.add(x, y)
            })
            .collect();
        self.trim(v)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|c| self.base.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![self.base.zero(); a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                v[i + j] = self.base.add(&v[i + j], &self.base.mul(x, y));
            }
        }
        self.trim(v)
    }

    pub fn scale(&self, c: &Scalar, a: &Poly) -> Poly {
        self.trim(a.0.iter().map(|x| self.base.mul(c, x)).collect())
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let v = a
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.base.mul(&self.base.from_i64(i as i64), c))
            .collect();
        self.trim(v)
    }

    /// Applies `c -> c^(p^power)` to every coefficient (x is fixed).
    pub fn frobenius(&self, a: &Poly, power: u32) -> Poly {
        if power == 0 {
            return a.clone();
        }
        self.trim(a.0.iter().map(|c| self.base.frobenius(c, power)).collect())
    }

    pub fn pow(&self, a: &Poly, n: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Long division by `b`. Over the integers the quotient step requires
    /// exact division of leading coefficients; `None` means that failed, so
    /// `b` does not divide `a`.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> Option<(Poly, Poly)> {
        let db = b.degree()?;
        let lb = b.leading()?.clone();
        let mut r = a.clone();
        let mut q = vec![self.base.zero(); a.0.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().cloned()?;
            let t = self.base.div_exact(&lr, &lb)?;
            q[dr - db] = t.clone();
            let sub = self.monomial(t, dr - db);
            r = self.sub(&r, &self.mul(&sub, b));
        }
        Some((self.trim(q), r))
    }

    /// `q` with `b*q = a`, if one exists.
    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = self.divrem(a, b)?;
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        self.divrem(a, b).map(|(_, r)| r)
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.leading().and_then(|l| self.base.inv(l)) {
            Some(li) => self.scale(&li, a),
            None => a.clone(),
        }
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).expect("field division");
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Extended Euclid over a field: `(g, u, v)` with `u*a + v*b = g`, g monic.
    pub fn xgcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1).expect("field division");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(|l| self.base.inv(l)) {
            Some(li) => (self.scale(&li, &r0), self.scale(&li, &s0), self.scale(&li, &t0)),
            None => (r0, s0, t0),
        }
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m).expect("field division")
    }

    pub fn powmod(&self, a: &Poly, exp: &BigUint, m: &Poly) -> Poly {
        let mut acc = self.rem(&self.one(), m).expect("field division");
        let mut base = self.rem(a, m).expect("field division");
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
            base = self.mulmod(&base, &base, m);
        }
        acc
    }

    pub fn eval(&self, a: &Poly, at: &Scalar) -> Scalar {
        let mut acc = self.base.zero();
        for c in a.0.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, at), c);
        }
        acc
    }

    /// Gcd of the integer coefficients (integer base only).
    pub fn content(&self, a: &Poly) -> BigInt {
        a.0.iter()
            .filter_map(|c| self.base.as_integer(c))
            .fold(BigInt::zero(), |g, c| g.gcd(&c))
    }

    /// Coefficients reduced into `[0, |m|)` (integer base only).
    pub fn reduce_integer_coeffs(&self, a: &Poly, m: &BigInt) -> Poly {
        let m = m.abs();
        self.trim(
            a.0.iter()
                .map(|c| match c {
                    Scalar::Int(n) => Scalar::Int(n.mod_floor(&m)),
                    other => other.clone(),
                })
                .collect(),
        )
    }

    pub fn is_constant(&self, a: &Poly) -> bool {
        a.degree().is_none_or(|d| d == 0)
    }

    pub fn is_monic_up_to_sign(&self, a: &Poly) -> bool {
        a.leading()
            .is_some_and(|l| self.base.is_unit(l) || matches!(l, Scalar::Int(n) if n.abs().is_one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::ring::field::FiniteField;

    fn f3() -> ScalarRing {
        ScalarRing::Finite(Arc::new(FiniteField::prime(3)))
    }

    fn poly(r: &ScalarRing, c: &[i64]) -> Poly {
        PolyOps::new(r).trim(c.iter().map(|&n| r.from_i64(n)).collect())
    }

    #[test]
    fn xgcd_over_f3() {
        let r = f3();
        let ops = PolyOps::new(&r);
        let x = poly(&r, &[0, 1]);
        let x1 = poly(&r, &[1, 1]);
        let (g, u, v) = ops.xgcd(&x, &x1);
        assert_eq!(g, ops.one());
        assert_eq!(u, poly(&r, &[2]));
        assert_eq!(v, poly(&r, &[1]));
    }

    #[test]
    fn integer_exact_division() {
        let r = ScalarRing::Integers;
        let ops = PolyOps::new(&r);
        let a = poly(&r, &[-2, 0, 2]); // 2x^2 - 2
        let b = poly(&r, &[2, 2]); // 2x + 2
        assert_eq!(ops.div_exact(&a, &b), Some(poly(&r, &[-1, 1])));
        assert_eq!(ops.div_exact(&poly(&r, &[1, 0, 1]), &poly(&r, &[0, 2])), None);
    }

    #[test]
    fn derivative_in_char_three() {
        let r = f3();
        let ops = PolyOps::new(&r);
        // d/dx (x^3 + x) = 1 in F_3
        assert_eq!(ops.derivative(&poly(&r, &[0, 1, 0, 1])), poly(&r, &[1]));
    }
}
