//! Element grammar:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" digits)?
//! atom  := digits | "x" | "y" | "g" | "(" expr ")"
//! ```
//!
//! Evaluation uses the ring's own operations, so `y*x` in a Weyl-type ring
//! canonicalizes to `x*y + 1`.

use num_bigint::BigInt;

use super::{Ring, RingElement, RingError, RingResult, Shape};

struct Parser<'a> {
    ring: &'a Ring,
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
    alias: Option<char>,
}

fn err(position: usize, message: impl Into<String>) -> RingError {
    RingError::Parse {
        position,
        message: message.into(),
    }
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, char)> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn here(&mut self) -> usize {
        self.peek().map_or(self.end, |(i, _)| i)
    }

    fn expr(&mut self) -> RingResult<RingElement> {
        let mut acc = self.term()?;
        while let Some((_, c @ ('+' | '-'))) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' {
                self.ring.add_raw(&acc, &rhs)
            } else {
                self.ring.sub_raw(&acc, &rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> RingResult<RingElement> {
        let mut acc = self.unary()?;
        while let Some((at, c @ ('*' | '/'))) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                self.ring.mul_raw(&acc, &rhs)
            } else {
                self.divide(&acc, &rhs, at)?
            };
        }
        Ok(acc)
    }

    fn divide(&self, a: &RingElement, b: &RingElement, at: usize) -> RingResult<RingElement> {
        let ring = self.ring;
        if ring.is_zero(b) {
            return Err(err(at, "division by zero"));
        }
        match (ring.shape(), a, b) {
            (Shape::Localized { .. }, RingElement::Local { num: n1, den: d1 }, RingElement::Local { num: n2, den: d2 }) => ring
                .local(n1 * d2, d1 * n2)
                .map_err(|_| err(at, "quotient is not an element of the localization")),
            (Shape::Poly { base } | Shape::Skew { base, .. }, _, _) if base.is_field() => match ring.inverse(b) {
                Some(inv) => Ok(ring.mul_raw(a, &inv)),
                None => Err(err(at, "divisor is not a unit")),
            },
            _ => Err(err(at, format!("division is not available in {}", ring.label()))),
        }
    }

    fn unary(&mut self) -> RingResult<RingElement> {
        if let Some((_, '-')) = self.peek() {
            self.pos += 1;
            let v = self.unary()?;
            return Ok(self.ring.neg_raw(&v));
        }
        self.power()
    }

    fn power(&mut self) -> RingResult<RingElement> {
        let base = self.atom()?;
        if let Some((_, '^')) = self.peek() {
            self.pos += 1;
            let at = self.here();
            let n = self.digits().ok_or_else(|| err(at, "expected exponent"))?;
            let n: u32 = n.try_into().map_err(|_| err(at, "exponent too large"))?;
            if n > 4096 {
                return Err(err(at, "exponent too large"));
            }
            let mut acc = self.ring.one();
            for _ in 0..n {
                acc = self.ring.mul_raw(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let s: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        s.parse().ok()
    }

    fn atom(&mut self) -> RingResult<RingElement> {
        let Some((at, c)) = self.peek() else {
            return Err(err(self.end, "unexpected end of input"));
        };
        if c.is_ascii_digit() {
            let n = self.digits().expect("digit present");
            return Ok(self.ring.from_bigint(&n));
        }
        self.pos += 1;
        match c {
            '(' => {
                let v = self.expr()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(err(self.here(), "expected ')'")),
                }
            }
            'x' | 'y' | 'g' => {
                let sym = if Some(c) == self.alias { 'x' } else { c };
                let v = match sym {
                    'x' => self.ring.x(),
                    'y' => self.ring.y(),
                    _ => self.ring.field_generator(),
                };
                v.ok_or_else(|| err(at, format!("symbol '{c}' does not belong to {}", self.ring.label())))
            }
            _ => Err(err(at, format!("unexpected character '{c}'"))),
        }
    }
}

impl Ring {
    /// Parses an element string into canonical form.
    pub fn parse_element(&self, s: &str) -> RingResult<RingElement> {
        self.parse_with_alias(s, None)
    }

    /// Parses with `alias` read as the polynomial variable `x`.
    pub(crate) fn parse_with_alias(&self, s: &str, alias: Option<char>) -> RingResult<RingElement> {
        let mut p = Parser {
            ring: self,
            chars: s.char_indices().collect(),
            pos: 0,
            end: s.len(),
            alias,
        };
        let v = p.expr()?;
        if let Some((at, c)) = p.peek() {
            return Err(err(at, format!("unexpected character '{c}'")));
        }
        Ok(v)
    }
}
