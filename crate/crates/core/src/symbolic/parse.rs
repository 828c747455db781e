//! Recursive-descent reader for the canonical polynomial string format.


use super::error::SymbolicError;
use super::laurent::LaurentPoly;
use super::poly::MultiPoly;
use super::scalar::Scalar;

pub(crate) trait Parsed<F: Scalar>: Sized + Clone {
    fn constant(c: F) -> Self;
    fn symbol(name: &str) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn pow(&self, e: i64) -> Result<Self, SymbolicError>;
    fn as_constant(&self) -> Option<F>;
}

impl<F: Scalar> Parsed<F> for MultiPoly<F> {
    fn constant(c: F) -> Self {
        MultiPoly::constant(c)
    }
    fn symbol(name: &str) -> Self {
        MultiPoly::var(name)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, e: i64) -> Result<Self, SymbolicError> {
        if e >= 0 {
            return Ok(MultiPoly::pow(self, e as u32));
        }
        match self.as_constant() {
            Some(c) if c.is_zero() => Err(SymbolicError::DivisionByZero),
            Some(c) => Ok(MultiPoly::constant(F::one() / c).pow((-e) as u32)),
            None => Err(SymbolicError::NegativeExponent),
        }
    }
    fn as_constant(&self) -> Option<F> {
        MultiPoly::as_constant(self)
    }
}

impl<F: Scalar> Parsed<F> for LaurentPoly<F> {
    fn constant(c: F) -> Self {
        LaurentPoly::from_poly(MultiPoly::constant(c))
    }
    fn symbol(name: &str) -> Self {
        if name == super::laurent::DEFORMATION_VAR {
            LaurentPoly::t_power(1)
        } else {
            LaurentPoly::from_poly(MultiPoly::var(name))
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, e: i64) -> Result<Self, SymbolicError> {
        if e >= 0 {
            return Ok(LaurentPoly::pow(self, e as u32));
        }
        match self.monomial_inverse() {
            Some(inv) => Ok(inv.pow((-e) as u32)),
            None => Err(SymbolicError::NegativeExponent),
        }
    }
    fn as_constant(&self) -> Option<F> {
        LaurentPoly::as_constant(self)
    }
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
}

impl Reader {
    fn new(src: &str) -> Self {
        Reader {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, msg: impl Into<String>) -> SymbolicError {
        SymbolicError::parse(self.pos + 1, msg)
    }

    fn integer(&mut self) -> Result<String, SymbolicError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn expr<F: Scalar, P: Parsed<F>>(&mut self) -> Result<P, SymbolicError> {
        let mut acc = if self.eat('-') {
            let t: P = self.term()?;
            P::constant(F::zero()).sub(&t)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                let t: P = self.term()?;
                acc = acc.add(&t);
            } else if self.eat('-') {
                let t: P = self.term()?;
                acc = acc.sub(&t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Scalar, P: Parsed<F>>(&mut self) -> Result<P, SymbolicError> {
        let mut acc: P = self.unary()?;
        loop {
            if self.eat('*') {
                let f: P = self.unary()?;
                acc = acc.mul(&f);
            } else if self.eat('/') {
                let at = self.pos;
                let f: P = self.unary()?;
                match f.as_constant() {
                    Some(c) if c.is_zero() => return Err(SymbolicError::parse(at + 1, "division by zero")),
                    Some(c) => acc = acc.mul(&P::constant(F::one() / c)),
                    None => return Err(SymbolicError::parse(at + 1, "divisor must be a constant")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<F: Scalar, P: Parsed<F>>(&mut self) -> Result<P, SymbolicError> {
        if self.eat('-') {
            let u: P = self.unary()?;
            return Ok(P::constant(F::zero()).sub(&u));
        }
        self.power()
    }

    fn power<F: Scalar, P: Parsed<F>>(&mut self) -> Result<P, SymbolicError> {
        let base: P = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let digits = self.integer()?;
        if paren && !self.eat(')') {
            return Err(self.err("expected `)` after exponent"));
        }
        let e: i64 = digits.parse().map_err(|_| self.err("exponent too large"))?;
        let at = self.pos;
        base.pow(if neg { -e } else { e })
            .map_err(|e| SymbolicError::parse(at, e.to_string()))
    }

    fn atom<F: Scalar, P: Parsed<F>>(&mut self) -> Result<P, SymbolicError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner: P = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let value = F::from_str(&digits).map_err(|_| self.err("bad number"))?;
                Ok(P::constant(value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                Ok(P::symbol(&name))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_with<F: Scalar, P: Parsed<F>>(src: &str) -> Result<P, SymbolicError> {
    let mut r = Reader::new(src);
    let out: P = r.expr()?;
    if r.peek().is_some() {
        return Err(r.err("trailing input"));
    }
    Ok(out)
}

pub fn parse_poly<F: Scalar>(src: &str) -> Result<MultiPoly<F>, SymbolicError> {
    parse_with::<F, MultiPoly<F>>(src)
}

/// Parse an expression where `t` is the deformation variable (negative powers allowed).
pub fn parse_laurent<F: Scalar>(src: &str) -> Result<LaurentPoly<F>, SymbolicError> {
    parse_with::<F, LaurentPoly<F>>(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn precedence_and_division() {
        let p: MultiPoly<Rational> = parse_poly("3/2*a - -b^2").unwrap();
        assert_eq!(p.to_string(), "b^2 + 3/2*a");
        let q: MultiPoly<Rational> = parse_poly("(1 - alpha)/2").unwrap();
        assert_eq!(q.to_string(), "-1/2*alpha + 1/2");
    }

    #[test]
    fn errors_carry_columns() {
        let e = parse_poly::<Rational>("a + * b").unwrap_err();
        assert_eq!(e, SymbolicError::parse(5, "unexpected `*`"));
        assert!(parse_poly::<Rational>("a/b").is_err());
        assert!(parse_poly::<Rational>("a^-1").is_err());
        assert!(parse_poly::<Rational>("(a").is_err());
    }

    #[test]
    fn laurent_negative_powers() {
        let l: LaurentPoly<Rational> = parse_laurent("t^-1 + 2").unwrap();
        assert_eq!(l.order().unwrap(), -1);
        let m: LaurentPoly<Rational> = parse_laurent("alpha*t^(-2)*t").unwrap();
        assert_eq!(m.order().unwrap(), -1);
        assert!(parse_laurent::<Rational>("(1 + t)^-1").is_err());
    }
}
