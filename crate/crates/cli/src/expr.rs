//! Element expressions such as `2*alpha*T + beta*T^2 - q^-1*h^3`.
//!
//! A term is a product of an optional integer, powers of `q` and `T`, and at
//! most one class or basis name; a term without a name multiplies the unit.

use num_bigint::BigInt;
use qhsd_core::catalog::JsonCoefficient;
use qhsd_core::exact_rings::{LaurentPoly, NovikovElem, TExp};
use qhsd_core::graded_qh::{QhElement, RingPresentation};

use crate::CliError;

/// Coefficients that can be built from `c q^a T^b`.
pub trait MonomialCoefficient: JsonCoefficient {
    fn monomial(c: BigInt, q: i64, t: TExp) -> Option<Self>;

    /// Equality on every `T`-exponent up to `cap`; plain equality without `T`.
    fn agrees_to_cap(&self, other: &Self, cap: TExp) -> bool;
}

impl MonomialCoefficient for LaurentPoly {
    fn monomial(c: BigInt, q: i64, t: TExp) -> Option<Self> {
        (t == TExp::from_integer(0)).then(|| LaurentPoly::monomial(c, q))
    }

    fn agrees_to_cap(&self, other: &Self, _cap: TExp) -> bool {
        self == other
    }
}

impl MonomialCoefficient for NovikovElem {
    fn monomial(c: BigInt, q: i64, t: TExp) -> Option<Self> {
        Some(NovikovElem::monomial(c, q, t))
    }

    fn agrees_to_cap(&self, other: &Self, cap: TExp) -> bool {
        self.agrees_up_to(other, cap)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> CliError {
        CliError::Input(format!("element expression, column {}: {msg}", self.pos + 1))
    }

    fn integer(&mut self) -> Result<i64, CliError> {
        self.skip_ws();
        let neg = if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        let v: i64 = text.parse().map_err(|_| self.err("expected an integer"))?;
        Ok(if neg { -v } else { v })
    }

    /// An exponent: `3`, `-1`, `(-1)`, `1/2`, `(3/2)`.
    fn exponent(&mut self) -> Result<TExp, CliError> {
        let paren = self.peek() == Some(b'(');
        if paren {
            self.pos += 1;
        }
        let num = self.integer()?;
        let mut den = 1;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            den = self.integer()?;
            if den <= 0 {
                return Err(self.err("denominator must be positive"));
            }
        }
        if paren {
            if self.peek() != Some(b')') {
                return Err(self.err("expected ')'"));
            }
            self.pos += 1;
        }
        Ok(TExp::new(num, den))
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            if c.is_ascii_alphanumeric() || matches!(c, b'_' | b'[' | b']' | b',' | b'\'') {
                self.pos += 1;
            } else {
                break;
            }
        }
        // basis names such as `h^3` keep their power; q and T take an exponent
        let head = &self.s[start..self.pos];
        if head != b"q" && head != b"T" && self.s.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'^') {
                self.pos += 1;
            }
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }
}

/// Parses `text` into an element of `ring`.
pub fn parse_element<R: MonomialCoefficient>(ring: &RingPresentation<R>, text: &str) -> Result<QhElement<R>, CliError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let mut total: QhElement<R> = QhElement::zero(ring.rank());
    let mut sign = 1i64;
    if p.peek() == Some(b'-') {
        p.pos += 1;
        sign = -1;
    } else if p.peek() == Some(b'+') {
        p.pos += 1;
    }
    loop {
        let mut coeff = BigInt::from(sign);
        let mut q = 0i64;
        let mut t = TExp::from_integer(0);
        let mut class: Option<QhElement<R>> = None;
        loop {
            match p.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= p.integer()?,
                Some(_) => {
                    let name = p.name();
                    if name.is_empty() {
                        return Err(p.err("expected a factor"));
                    }
                    let power = if p.peek() == Some(b'^') && (name == "q" || name == "T") {
                        p.pos += 1;
                        Some(p.exponent()?)
                    } else {
                        None
                    };
                    match name.as_str() {
                        "q" => {
                            let e = power.unwrap_or(TExp::from_integer(1));
                            if !e.is_integer() {
                                return Err(p.err("q takes integer exponents"));
                            }
                            q += e.to_integer();
                        }
                        "T" => t += power.unwrap_or(TExp::from_integer(1)),
                        _ => {
                            if class.is_some() {
                                return Err(p.err("at most one class per term"));
                            }
                            class = Some(ring.class(&name).map_err(|_| CliError::UnknownClass(name.clone()))?);
                        }
                    }
                }
                None => return Err(p.err("unexpected end of input")),
            }
            if p.peek() == Some(b'*') {
                p.pos += 1;
            } else {
                break;
            }
        }
        let c = R::monomial(coeff, q, t).ok_or_else(|| p.err("T is not available over the Laurent ring"))?;
        let base = class.unwrap_or_else(|| ring.one());
        total = total.add(&base.scale(&c));
        match p.peek() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(_) => return Err(p.err("expected '+' or '-'")),
        }
        p.pos += 1;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhsd_core::catalog::{build_cpn, build_p1xp1_paper};

    #[test]
    fn parses_novikov_terms() {
        let ring = build_p1xp1_paper();
        let e = parse_element(&ring, "2*alpha*T + beta*T - (0)").err();
        assert!(e.is_some());
        let s = parse_element(&ring, "2*alpha*T + beta*T + beta*T^2").unwrap();
        let a = ring.index_of("alpha").unwrap();
        let b = ring.index_of("beta").unwrap();
        assert_eq!(s.coord(a), &NovikovElem::monomial(2, 0, TExp::from_integer(1)));
        assert_eq!(
            s.coord(b),
            &NovikovElem::from_terms([(0, TExp::from_integer(1), 1), (0, TExp::from_integer(2), 1)])
        );
        let half = parse_element(&ring, "-q^-1*T^(1/2)*ab").unwrap();
        assert_eq!(half.coord(ring.index_of("ab").unwrap()), &NovikovElem::monomial(-1, -1, TExp::new(1, 2)));
    }

    #[test]
    fn parses_laurent_terms_and_rejects_t() {
        let ring = build_cpn(3);
        let e = parse_element(&ring, "q^-1 * h^3 + 3").unwrap();
        assert_eq!(e.coord(3), &LaurentPoly::monomial(1, -1));
        assert_eq!(e.coord(0), &LaurentPoly::constant(3));
        assert!(parse_element(&ring, "T*h").is_err());
        assert!(matches!(parse_element(&ring, "nope"), Err(CliError::UnknownClass(_))));
        assert_eq!(parse_element(&ring, "omega").unwrap(), ring.class("omega").unwrap());
    }
}
