use super::{Poly, Ring, RingElement, ScalarRing, Shape};

/// `(negative, magnitude)` pieces of a sum, highest degree first.
type Terms = Vec<(bool, String)>;

fn monomial(var: &str, d: usize) -> String {
    match d {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{d}"),
    }
}

fn attach(mag: &str, mono: &str) -> String {
    if mono.is_empty() {
        mag.to_string()
    } else if mag == "1" {
        mono.to_string()
    } else if mag.contains(' ') && !mag.starts_with('(') {
        format!("({mag})*{mono}")
    } else {
        format!("{mag}*{mono}")
    }
}

fn poly_terms(base: &ScalarRing, p: &Poly) -> Terms {
    let mut out = Vec::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let (neg, mag) = base.render_signed(c);
        out.push((neg, attach(&mag, &monomial("x", d))));
    }
    out
}

fn join(terms: &Terms) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, mag)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(mag);
    }
    s
}

impl Ring {
    /// Canonical text form, e.g. `x^2*y + 2*x`, `5/7`, `(x + 1)*y^2`.
    pub fn render(&self, e: &RingElement) -> String {
        match (self.shape(), e) {
            (_, RingElement::Int(n)) => n.to_string(),
            (_, RingElement::Local { num, den }) => {
                if den == &num_bigint::BigInt::from(1) {
                    num.to_string()
                } else {
                    format!("{num}/{den}")
                }
            }
            (Shape::Poly { base }, RingElement::Poly(p)) => self.render_poly(base, p),
            (Shape::Skew { base, .. }, RingElement::Skew(cs)) => {
                let mut terms = Terms::new();
                for (i, c) in cs.iter().enumerate().rev() {
                    let ymono = monomial("y", i);
                    let inner = poly_terms(base, c);
                    match inner.as_slice() {
                        [] => {}
                        [(neg, mag)] => terms.push((*neg, attach(mag, &ymono))),
                        _ if ymono.is_empty() => terms.extend(inner),
                        _ => terms.push((false, format!("({})*{ymono}", join(&inner)))),
                    }
                }
                join(&terms)
            }
            _ => format!("{e:?}"),
        }
    }

    /// Renders a polynomial in `x` over the given coefficients.
    pub fn render_poly(&self, base: &ScalarRing, p: &Poly) -> String {
        join(&poly_terms(base, p))
    }
}
