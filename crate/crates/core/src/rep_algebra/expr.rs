//! Symbolic representation expressions and their text grammar.
//!
//! ```text
//! expr := term ('+' term)*
//! term := atom ('*' atom)*
//! atom := 'std' | 'adj' | 'triv' | 'dual(' expr ')'
//!       | 'ext(' INT ',' expr ')' | 'sym(' INT ',' expr ')' | '(' expr ')'
//! ```

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepExpr {
    Std,
    Adj,
    Triv,
    Dual(Box<RepExpr>),
    Ext(u32, Box<RepExpr>),
    Sym(u32, Box<RepExpr>),
    Tensor(Box<RepExpr>, Box<RepExpr>),
    Sum(Box<RepExpr>, Box<RepExpr>),
}

impl RepExpr {
    pub fn dual(inner: RepExpr) -> Self {
        RepExpr::Dual(Box::new(inner))
    }

    pub fn ext(p: u32, inner: RepExpr) -> Self {
        RepExpr::Ext(p, Box::new(inner))
    }

    pub fn sym(p: u32, inner: RepExpr) -> Self {
        RepExpr::Sym(p, Box::new(inner))
    }

    pub fn tensor(a: RepExpr, b: RepExpr) -> Self {
        RepExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn sum(a: RepExpr, b: RepExpr) -> Self {
        RepExpr::Sum(Box::new(a), Box::new(b))
    }

    /// `S^p ⊗ Λ^{s−p}` of the standard representation.
    pub fn sym_ext(p: u32, s: u32) -> Self {
        RepExpr::tensor(
            RepExpr::sym(p, RepExpr::Std),
            RepExpr::ext(s - p, RepExpr::Std),
        )
    }
}

impl fmt::Display for RepExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepExpr::Std => f.write_str("std"),
            RepExpr::Adj => f.write_str("adj"),
            RepExpr::Triv => f.write_str("triv"),
            RepExpr::Dual(e) => write!(f, "dual({e})"),
            RepExpr::Ext(p, e) => write!(f, "ext({p},{e})"),
            RepExpr::Sym(p, e) => write!(f, "sym({p},{e})"),
            RepExpr::Tensor(a, b) => {
                // '*' binds tighter than '+', so sums need parentheses here
                let wrap = |e: &RepExpr| match e {
                    RepExpr::Sum(..) => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{}*{}", wrap(a), wrap(b))
            }
            RepExpr::Sum(a, b) => write!(f, "{a}+{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl std::str::FromStr for RepExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn parse(input: &str) -> Result<RepExpr, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(&["'+'", "'*'", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let found = match self.peek_char() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        ParseError {
            position: self.pos,
            expected: expected.to_vec(),
            found,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek_char() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<RepExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.eat('+') {
            let rhs = self.term()?;
            lhs = RepExpr::sum(lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<RepExpr, ParseError> {
        let mut lhs = self.atom()?;
        while self.eat('*') {
            let rhs = self.atom()?;
            lhs = RepExpr::tensor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if c.is_ascii_alphabetic() {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn int(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_char(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error(&["integer"]));
        }
        self.src[start..self.pos].parse().map_err(|_| ParseError {
            position: start,
            expected: vec!["integer below 2^32"],
            found: self.src[start..self.pos].to_string(),
        })
    }

    fn atom(&mut self) -> Result<RepExpr, ParseError> {
        const ATOMS: &[&str] = &[
            "'std'", "'adj'", "'triv'", "'dual('", "'ext('", "'sym('", "'('",
        ];
        self.skip_ws();
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')', "')'")?;
            return Ok(e);
        }
        let start = self.pos;
        let word = self.ident().to_ascii_lowercase();
        match word.as_str() {
            "std" => Ok(RepExpr::Std),
            "adj" => Ok(RepExpr::Adj),
            "triv" => Ok(RepExpr::Triv),
            "dual" => {
                self.expect('(', "'('")?;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(RepExpr::dual(e))
            }
            "ext" | "sym" => {
                self.expect('(', "'('")?;
                let p = self.int()?;
                self.expect(',', "','")?;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(if word == "ext" {
                    RepExpr::ext(p, e)
                } else {
                    RepExpr::sym(p, e)
                })
            }
            _ => {
                self.pos = start;
                Err(self.error(ATOMS))
            }
        }
    }
}
