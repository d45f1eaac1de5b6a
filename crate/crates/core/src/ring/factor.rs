//! Factorization over finite fields (squarefree, distinct-degree and
//! equal-degree splitting) and the rational-root test for low degrees.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Scalar;
use super::int::positive_divisors;
use super::poly::{Poly, PolyOps};

/// Monic irreducible factors with multiplicities, plus the leading unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub factors: Vec<(Poly, u32)>,
}

/// Squarefree decomposition of a monic polynomial over a finite field:
/// pairs `(s_i, i)` with `f = prod s_i^i`.
pub fn squarefree(ops: PolyOps<'_>, f: &Poly) -> Vec<(Poly, u32)> {
    let field = ops.base.finite().expect("finite field");
    let p = field.characteristic();
    let one = ops.one();
    let mut out = Vec::new();
    if f.degree().is_none_or(|d| d == 0) {
        return out;
    }
    let df = ops.derivative(f);
    let mut c = ops.gcd(f, &df);
    let mut w = ops.div_exact(f, &c).expect("gcd divides");
    let mut i = 1;
    while w != one {
        let y = ops.gcd(&w, &c);
        let fac = ops.div_exact(&w, &y).expect("gcd divides");
        if fac != one {
            out.push((fac, i));
        }
        w = y.clone();
        c = ops.div_exact(&c, &y).expect("gcd divides");
        i += 1;
    }
    if c != one {
        // c is a p-th power: c(x) = sum a_i x^{ip}.
        let root_exp = BigUint::from(p).pow(field.degree() as u32 - 1);
        let coeffs = c
            .coeffs()
            .iter()
            .step_by(p as usize)
            .map(|a| match a {
                Scalar::Ff(v) => Scalar::Ff(field.pow(v, &root_exp)),
                other => other.clone(),
            })
            .collect();
        let root = ops.trim(coeffs);
        for (g, m) in squarefree(ops, &root) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// `(g_d, d)` where `g_d` is the product of all irreducible factors of degree `d`.
pub fn distinct_degree(ops: PolyOps<'_>, f: &Poly) -> Vec<(Poly, usize)> {
    let q = ops.base.finite().expect("finite field").order();
    let one = ops.one();
    let x = ops.x();
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut h = ops.rem(&x, &rest).expect("field division");
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = ops.powmod(&h, &q, &rest);
        let g = ops.gcd(&rest, &ops.sub(&h, &x));
        if g != one {
            rest = ops.div_exact(&rest, &g).expect("gcd divides");
            h = ops.rem(&h, &rest).expect("field division");
            out.push((g, d));
        }
        d += 1;
    }
    if rest != one {
        let deg = rest.degree().unwrap_or(0);
        out.push((rest, deg));
    }
    out
}

fn random_poly(ops: PolyOps<'_>, rng: &mut ChaCha8Rng, below: usize) -> Poly {
    let field = ops.base.finite().expect("finite field");
    let p = field.characteristic();
    let k = field.degree();
    let coeffs = (0..below)
        .map(|_| Scalar::Ff((0..k).map(|_| rng.gen_range(0..p)).collect()))
        .collect();
    ops.trim(coeffs)
}

/// Splits a product of distinct monic irreducibles, all of degree `d`.
pub fn equal_degree(ops: PolyOps<'_>, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let field = ops.base.finite().expect("finite field");
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.clone()];
    }
    let target = n / d;
    let q = field.order();
    let one = ops.one();
    let mut parts = vec![f.clone()];
    while parts.len() < target {
        let a = random_poly(ops, rng, n);
        if a.degree().is_none_or(|da| da == 0) {
            continue;
        }
        let b = if field.characteristic() == 2 {
            // Absolute trace map onto F_2.
            let mut t = ops.rem(&a, f).expect("field division");
            let mut acc = t.clone();
            for _ in 1..(field.degree() * d) {
                t = ops.mulmod(&t, &t, f);
                acc = ops.add(&acc, &t);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            ops.sub(&ops.powmod(&a, &e, f), &one)
        };
        let mut next = Vec::new();
        for u in parts {
            if u.degree() == Some(d) {
                next.push(u);
                continue;
            }
            let g = ops.gcd(&u, &b);
            if g != one && g != u {
                let other = ops.div_exact(&u, &g).expect("gcd divides");
                next.push(g);
                next.push(other);
            } else {
                next.push(u);
            }
        }
        parts = next;
    }
    parts.sort();
    parts
}

/// Complete factorization over a finite field.
pub fn factor_finite(ops: PolyOps<'_>, f: &Poly) -> Factorization {
    let unit = f.leading().cloned().unwrap_or_else(|| ops.base.zero());
    let monic = ops.monic(f);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut factors = Vec::new();
    for (s, mult) in squarefree(ops, &monic) {
        for (g, d) in distinct_degree(ops, &s) {
            for h in equal_degree(ops, &g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort();
    Factorization { unit, factors }
}

/// A rational root of a polynomial over the integers or rationals, found by
/// the rational-root theorem. `Err(())` when the constant/leading
/// coefficients are too large to enumerate divisors.
pub fn rational_root(f: &Poly) -> Result<Option<BigRational>, ()> {
    let ints = to_integer_coeffs(f);
    let c0 = ints.first().cloned().unwrap_or_default();
    let cn = ints.last().cloned().unwrap_or_default();
    if c0.is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    let num_divs = positive_divisors(&c0).ok_or(())?;
    let den_divs = positive_divisors(&cn).ok_or(())?;
    for a in &num_divs {
        for b in &den_divs {
            if !a.gcd(b).is_one() {
                continue;
            }
            for sign in [1, -1] {
                let cand = BigRational::new(a * sign, b.clone());
                let mut acc = BigRational::zero();
                for c in ints.iter().rev() {
                    acc = acc * &cand + BigRational::from_integer(c.clone());
                }
                if acc.is_zero() {
                    return Ok(Some(cand));
                }
            }
        }
    }
    Ok(None)
}

/// Integer coefficients of `lcm(denominators) * f`.
pub fn to_integer_coeffs(f: &Poly) -> Vec<BigInt> {
    let lcm = f.coeffs().iter().fold(BigInt::one(), |l, c| match c {
        Scalar::Rat(r) => l.lcm(r.denom()),
        _ => l,
    });
    f.coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Int(n) => n.clone(),
            Scalar::Rat(r) => (r * BigRational::from_integer(lcm.clone())).to_integer(),
            Scalar::Ff(_) => BigInt::zero(),
        })
        .collect()
}

/// Whether a nonzero integer-coefficient polynomial is primitive.
pub fn is_primitive(ops: PolyOps<'_>, f: &Poly) -> bool {
    ops.content(f).abs().is_one()
}

/// Degree-table check: `f` of degree `n` is irreducible iff it is squarefree
/// and its distinct-degree factorization is the single part `(f, n)`.
pub fn ddf_irreducible(ops: PolyOps<'_>, f: &Poly) -> (bool, Vec<(usize, usize)>) {
    let monic = ops.monic(f);
    let sf = squarefree(ops, &monic);
    let squarefree_ok = sf.len() == 1 && sf[0].1 == 1;
    if !squarefree_ok {
        return (false, Vec::new());
    }
    let table: Vec<(usize, usize)> = distinct_degree(ops, &monic)
        .iter()
        .map(|(g, d)| (*d, g.degree().unwrap_or(0) / *d))
        .collect();
    let n = monic.degree().unwrap_or(0);
    (table == [(n, 1)], table)
}
