//! Exact arithmetic expressions in `t1`, `t2`, `q`, read into [`RatFunc`].
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' integer)?
//! atom  := integer | 't1' | 't2' | 'q' | '(' expr ')'
//! ```
//!
//! Multiplication is always explicit. `-x^2` parses as `-(x^2)`.

use num_bigint::BigInt;

use crate::kernel::{RatFunc, Ring};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("unexpected character {found:?} at offset {at}")]
    BadChar { at: usize, found: char },
    #[error("unexpected {found} at offset {at}, expected {expected}")]
    Unexpected { at: usize, found: String, expected: &'static str },
    #[error("unknown identifier {0:?}")]
    UnknownIdent(String),
    #[error("division by zero at offset {0}")]
    DivisionByZero(usize),
    #[error("exponent at offset {0} is not a small non-negative integer")]
    BadExponent(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let mut it = s.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                j = k + d.len_utf8();
                it.next();
            }
            out.push((i, Tok::Num(s[i..j].parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while let Some(&(k, d)) = it.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                j = k + d.len_utf8();
                it.next();
            }
            out.push((i, Tok::Ident(s[i..j].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            it.next();
        } else {
            return Err(ExprError::BadChar { at: i, found: c });
        }
    }
    out.push((s.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn at(&self) -> usize {
        self.toks[self.pos].0
    }

    fn unexpected(&self, expected: &'static str) -> ExprError {
        let found = match self.peek() {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
            Tok::End => "end of input".to_string(),
        };
        ExprError::Unexpected { at: self.at(), found, expected }
    }

    fn expr(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Tok::Op('-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Tok::Op('/') => {
                    self.pos += 1;
                    let at = self.at();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(ExprError::DivisionByZero(at));
                    }
                    acc = acc / d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ExprError> {
        match self.peek() {
            Tok::Op('-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Tok::Op('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.at();
        match self.peek().clone() {
            Tok::Num(e) => {
                self.pos += 1;
                let e: u32 = e.try_into().map_err(|_| ExprError::BadExponent(at))?;
                Ok(base.pow_u(e))
            }
            _ => Err(ExprError::BadExponent(at)),
        }
    }

    fn atom(&mut self) -> Result<RatFunc, ExprError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.pos += 1;
                Ok(RatFunc::from_rat(&n.into()))
            }
            Tok::Ident(s) => {
                self.pos += 1;
                match s.as_str() {
                    "t1" => Ok(RatFunc::t1()),
                    "t2" => Ok(RatFunc::t2()),
                    "q" => Ok(RatFunc::q()),
                    _ => Err(ExprError::UnknownIdent(s)),
                }
            }
            Tok::Op('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if *self.peek() != Tok::Op(')') {
                    return Err(self.unexpected("')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected("a number, t1, t2, q or '('")),
        }
    }
}

/// Parses an expression in `t1`, `t2`, `q`.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ExprError> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn precedence() {
        let v = parse_ratfunc("-q^2 + 1/2*t1").unwrap();
        assert_eq!(v.eval(&rat(4, 1), &rat(0, 1), &rat(3, 1)), Some(rat(-7, 1)));
        let w = parse_ratfunc("2/3/4").unwrap();
        assert_eq!(w, RatFunc::from_rat(&rat(1, 6)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_ratfunc("1/(q-q)"), Err(ExprError::DivisionByZero(_))));
        assert!(matches!(parse_ratfunc("x"), Err(ExprError::UnknownIdent(_))));
        assert!(matches!(parse_ratfunc("(q"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse_ratfunc("q^t1"), Err(ExprError::BadExponent(_))));
        assert!(matches!(parse_ratfunc("q$"), Err(ExprError::BadChar { .. })));
    }
}
