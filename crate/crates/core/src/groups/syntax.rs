//! Report term syntax for group expressions.
//!
//! ```text
//! source := "Triv" | "Z" | "Prod(" source ("," source)* ")" | "Wr(" source "," m ")"
//! target := "Triv" | "Prod(" target ("," target)* ")" | "WrC(" target "," m ")"
//! ```
//! Whitespace between tokens is ignored on input; output uses `", "`.

use std::fmt;
use std::str::FromStr;

use super::{FiniteGroupExpr, GroupError, SourceGroupExpr};

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, head: &str, items: &[T]) -> fmt::Result {
    write!(f, "{head}(")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for SourceGroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceGroupExpr::Trivial => f.write_str("Triv"),
            SourceGroupExpr::FreeZ => f.write_str("Z"),
            SourceGroupExpr::Product(parts) => write_list(f, "Prod", parts),
            SourceGroupExpr::WreathOverZ { inner, m } => write!(f, "Wr({inner}, {m})"),
        }
    }
}

impl fmt::Display for FiniteGroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteGroupExpr::Trivial => f.write_str("Triv"),
            FiniteGroupExpr::Product(parts) => write_list(f, "Prod", parts),
            FiniteGroupExpr::WreathCyclic { inner, m } => write!(f, "WrC({inner}, {m})"),
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, what: &str) -> GroupError {
        GroupError::InvalidExpr(format!("{what} at offset {} in {:?}", self.pos, self.text))
    }

    fn ident(&mut self) -> Result<&'a str, GroupError> {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn number(&mut self) -> Result<usize, GroupError> {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.text[start..self.pos].parse().map_err(|_| self.error("expected a number"))
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), GroupError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn list<T>(&mut self, item: fn(&mut Self) -> Result<T, GroupError>) -> Result<Vec<T>, GroupError> {
        self.expect('(')?;
        let mut out = vec![item(self)?];
        while self.eat(',') {
            out.push(item(self)?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn wreath_args<T>(&mut self, item: fn(&mut Self) -> Result<T, GroupError>) -> Result<(T, usize), GroupError> {
        self.expect('(')?;
        let inner = item(self)?;
        self.expect(',')?;
        let m = self.number()?;
        self.expect(')')?;
        Ok((inner, m))
    }

    fn source(&mut self) -> Result<SourceGroupExpr, GroupError> {
        match self.ident()? {
            "Triv" => Ok(SourceGroupExpr::Trivial),
            "Z" => Ok(SourceGroupExpr::FreeZ),
            "Prod" => Ok(SourceGroupExpr::Product(self.list(Self::source)?)),
            "Wr" => {
                let (inner, m) = self.wreath_args(Self::source)?;
                Ok(SourceGroupExpr::wreath(inner, m))
            }
            other => Err(self.error(&format!("unknown source constructor `{other}`"))),
        }
    }

    fn target(&mut self) -> Result<FiniteGroupExpr, GroupError> {
        match self.ident()? {
            "Triv" => Ok(FiniteGroupExpr::Trivial),
            "Prod" => Ok(FiniteGroupExpr::Product(self.list(Self::target)?)),
            "WrC" => {
                let (inner, m) = self.wreath_args(Self::target)?;
                Ok(FiniteGroupExpr::wreath(inner, m))
            }
            other => Err(self.error(&format!("unknown target constructor `{other}`"))),
        }
    }

    fn finish<T>(&mut self, value: T) -> Result<T, GroupError> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(value)
        } else {
            Err(self.error("trailing input"))
        }
    }
}

impl FromStr for SourceGroupExpr {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor { text: s, pos: 0 };
        let expr = c.source()?;
        let expr = c.finish(expr)?;
        expr.validate()?;
        Ok(expr)
    }
}

impl FromStr for FiniteGroupExpr {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor { text: s, pos: 0 };
        let expr = c.target()?;
        let expr = c.finish(expr)?;
        expr.validate()?;
        Ok(expr)
    }
}
