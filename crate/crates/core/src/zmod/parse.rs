//! Text grammar for polynomials over Z_d.
//!
//! ```text
//! poly   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' INT)?
//! atom   := INT | IDENT | '(' poly ')'
//! ```
//!
//! Whitespace is ignored, integers are reduced modulo d and identifiers
//! must come from the caller's variable list.

use crate::error::{Error, Result};
use crate::zmod::{Modulus, ZdPoly};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    modulus: Modulus,
    vars: &'a [&'a str],
}

impl ZdPoly {
    /// Parses `text` with variables named by `vars` (index = variable slot).
    pub fn parse(text: &str, modulus: Modulus, vars: &[&str]) -> Result<ZdPoly> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, modulus, vars };
        let out = p.poly()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return p.err("unexpected trailing input");
        }
        Ok(out)
    }

    /// Parses with the conventional names for `num_vars` variables: `j,k`
    /// or `x,y` for two, `x` or `j` for one.
    pub fn parse_auto(text: &str, modulus: Modulus, num_vars: usize) -> Result<ZdPoly> {
        let uses = |c: char| identifiers(text).any(|id| id.len() == 1 && id.starts_with(c));
        let vars: &[&str] = match num_vars {
            1 if uses('j') => &["j"],
            1 => &["x"],
            2 if uses('x') || uses('y') => &["x", "y"],
            2 => &["j", "k"],
            _ => return Err(Error::Unsupported(format!("{num_vars}-variable text input"))),
        };
        ZdPoly::parse(text, modulus, vars)
    }
}

fn identifiers(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
        .filter(|s| s.chars().next().is_some_and(|c| c.is_ascii_alphabetic()))
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn nvars(&self) -> usize {
        self.vars.len().max(1)
    }

    fn poly(&mut self) -> Result<ZdPoly> {
        let mut acc = ZdPoly::zero(self.modulus, self.nvars());
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<ZdPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ZdPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ZdPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                let r = (v % u128::from(self.modulus.get())) as i64;
                Ok(ZdPoly::constant(self.modulus, self.nvars(), r))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(ZdPoly::var(self.modulus, self.nvars(), i)),
                    None => {
                        self.pos = start;
                        self.err(&format!("unknown variable '{name}' (expected one of {:?})", self.vars))
                    }
                }
            }
            Some(_) => self.err("expected a number, variable or '('"),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<u128> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.err("integer out of range"), Ok)
    }
}
