//! Text syntax for differential polynomials.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := 'sum_' NAME term          sum of the rest of the term over NAME = 1..n
//!         | 'sym(' expr ')'           sum over all permutations of the roots
//!         | atom ['^' INT]
//! atom   := INT ['/' INT] | symbol | '(' expr ')'
//! symbol := ['d[' INT (',' INT)* ']'] ('f' | 's') (INT | '_' NAME) | ['d[' ... ']'] 'Y'
//! ```
//!
//! For example `sum_i d[1]f_i` is `∂_1 f_1 + ... + ∂_1 f_n`.

use crate::kernel::{Rat, Ring};

use super::{DiffPoly, DiffSymbol, SymbolKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: u32,
    env: Vec<(String, u32)>,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn starts_with(&mut self, w: &str) -> bool {
        self.skip_ws();
        self.s[self.pos..].starts_with(w.as_bytes())
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an index name");
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<DiffPoly, ParseError> {
        let neg = self.eat(b'-');
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DiffPoly, ParseError> {
        if self.starts_with("sum_") {
            self.pos += 4;
            let v = self.name()?;
            let save = self.pos;
            let mut acc = DiffPoly::zero();
            for i in 1..=self.n {
                self.pos = save;
                self.env.push((v.clone(), i));
                let t = self.term();
                self.env.pop();
                acc = acc + t?;
            }
            return Ok(acc);
        }
        if self.starts_with("sym(") {
            self.pos += 4;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e.symmetrize(self.n));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.int()?;
            return Ok(base.pow_u(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DiffPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.int()?;
                let den = if self.eat(b'/') { self.int()? } else { 1 };
                if den == 0 {
                    return self.err("zero denominator");
                }
                Ok(DiffPoly::constant(Rat::new(num, den)))
            }
            Some(_) => Ok(DiffPoly::var(self.symbol()?)),
            None => self.err("unexpected end of input"),
        }
    }

    fn symbol(&mut self) -> Result<DiffSymbol, ParseError> {
        let mut deriv = Vec::new();
        if self.starts_with("d[") {
            self.pos += 2;
            deriv.push(self.int()?);
            while self.eat(b',') {
                deriv.push(self.int()?);
            }
            self.expect(b']')?;
        }
        let kind = match self.s.get(self.pos) {
            Some(b'f') => SymbolKind::F,
            Some(b's') => SymbolKind::S,
            Some(b'Y') => {
                self.pos += 1;
                return Ok(DiffSymbol::new(SymbolKind::Y, 0, deriv));
            }
            _ => return self.err("expected a symbol"),
        };
        self.pos += 1;
        let index = if self.s.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            let v = self.name()?;
            match self.env.iter().rev().find(|(w, _)| *w == v) {
                Some((_, i)) => *i,
                None => return self.err(format!("unbound index '{v}'")),
            }
        } else {
            if !self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                return self.err("expected an index");
            }
            self.int()?
        };
        if index == 0 || index > self.n {
            return self.err(format!("index {index} out of range 1..={}", self.n));
        }
        Ok(DiffSymbol::new(kind, index, deriv))
    }
}

/// Parses an expression in `n` roots.
pub fn parse_diffpoly(text: &str, n: u32) -> Result<DiffPoly, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, n, env: Vec::new() };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let p = parse_diffpoly("sum_i d[1]f_i", 2).unwrap();
        assert_eq!(p.to_string(), "d[1]f1 + d[1]f2");
        let q = parse_diffpoly("-2/3*d[1,2]s3^2 + f1*(f2 - 1) + d[0,1]Y", 3).unwrap();
        assert_eq!(parse_diffpoly(&q.to_string(), 3).unwrap(), q);
        assert_eq!(parse_diffpoly("sym(f1^2*f2)", 2).unwrap().to_string(), "f1^2*f2 + f1*f2^2");
        assert_eq!(parse_diffpoly("2*sum_i f_i*f_i", 2).unwrap().to_string(), "2*f1^2 + 2*f2^2");
    }

    #[test]
    fn errors() {
        assert!(parse_diffpoly("f3", 2).is_err());
        assert!(parse_diffpoly("f_i", 2).is_err());
        assert!(parse_diffpoly("f1 +", 2).is_err());
        assert!(parse_diffpoly("d[1 f1", 2).is_err());
        assert!(parse_diffpoly("1/0", 2).is_err());
    }
}
