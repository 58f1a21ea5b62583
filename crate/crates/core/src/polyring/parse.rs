//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')' | '(' field-element ')'
//! ```
//!
//! A parenthesized group is read as a field element when the field parser
//! accepts it and it mentions no ring variable, otherwise as a sub-expression.

use std::sync::Arc;

use super::sparse::SparsePoly;
use super::PolyError;
use crate::exactfield::Field;

pub fn parse_poly<F: Field>(field: &F, vars: &Arc<[String]>, text: &str) -> Result<SparsePoly<F>, PolyError> {
    let mut p = Parser { field, vars, src: text, pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    field: &'a F,
    vars: &'a Arc<[String]>,
    src: &'a str,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly<F>, PolyError> {
        let negate_first = self.eat('-');
        let mut acc = self.term()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly<F>, PolyError> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly<F>, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<SparsePoly<F>, PolyError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                let close = self.matching_paren()?;
                let inner = &self.src[self.pos + 1..close];
                if !self.mentions_var(inner) {
                    if let Ok(c) = self.field.parse(inner) {
                        self.pos = close + 1;
                        return Ok(SparsePoly::constant(self.field, self.vars, c));
                    }
                }
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).map_err(|_| self.err("integer out of range"))?;
                Ok(SparsePoly::constant(self.field, self.vars, self.field.from_int(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += self.peek().unwrap().len_utf8();
                }
                let name = &self.src[start..self.pos];
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(SparsePoly::var_at(self.field, self.vars, i)),
                    None => {
                        self.pos = start;
                        Err(PolyError::UnknownVariable(name.to_string()))
                    }
                }
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn matching_paren(&self) -> Result<usize, PolyError> {
        let mut depth = 0usize;
        for (i, c) in self.src[self.pos..].char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(self.pos + i);
                    }
                }
                _ => {}
            }
        }
        Err(self.err("unbalanced parenthesis"))
    }

    fn mentions_var(&self, s: &str) -> bool {
        s.split(|c: char| !(c.is_alphanumeric() || c == '_')).any(|w| self.vars.iter().any(|v| v == w))
    }
}
