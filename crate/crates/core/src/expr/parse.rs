//! Recursive-descent parser for the configuration expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Identifiers resolve to coordinates first, then named constants. `pi` is
//! always available.

use std::collections::BTreeMap;

use super::Expr;
use crate::error::GeoError;

/// Names visible to the parser.
#[derive(Debug, Clone, Default)]
pub struct ParseContext {
    pub coordinates: Vec<String>,
    pub constants: BTreeMap<String, f64>,
}

impl ParseContext {
    pub fn new<S: AsRef<str>>(coordinates: &[S]) -> Self {
        Self {
            coordinates: coordinates.iter().map(|s| s.as_ref().to_string()).collect(),
            constants: BTreeMap::new(),
        }
    }

    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.insert(name.to_string(), value);
        self
    }

    fn resolve(&self, name: &str) -> Option<Expr> {
        if let Some(i) = self.coordinates.iter().position(|c| c == name) {
            return Some(Expr::var(i));
        }
        if let Some(&v) = self.constants.get(name) {
            return Some(Expr::constant(v));
        }
        match name {
            "pi" => Some(Expr::constant(std::f64::consts::PI)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, GeoError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let value = text
                .parse::<f64>()
                .map_err(|_| GeoError::Parse(format!("bad number '{text}' at {start}")))?;
            out.push((start, Token::Num(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            out.push((start, Token::Ident(src[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(GeoError::Parse(format!("unexpected character '{c}' at {i}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    ctx: &'a ParseContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(usize::MAX, |(o, _)| *o)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), GeoError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(GeoError::Parse(format!("expected '{op}' at {}", self.offset())))
        }
    }

    fn expr(&mut self) -> Result<Expr, GeoError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, GeoError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                acc = acc / self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, GeoError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, GeoError> {
        let base = self.atom()?;
        if self.eat('^') {
            let exponent = self.unary()?;
            return Ok(match exponent.as_constant() {
                Some(p) => base.powf(p),
                None => (exponent * base.ln()).exp(),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, GeoError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Expr::constant(v))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    self.expect(')')?;
                    return call(&name, args, offset);
                }
                self.ctx
                    .resolve(&name)
                    .ok_or_else(|| GeoError::Parse(format!("unknown symbol '{name}' at {offset}")))
            }
            Some(tok) => Err(GeoError::Parse(format!("unexpected {tok:?} at {offset}"))),
            None => Err(GeoError::Parse("unexpected end of expression".into())),
        }
    }
}

fn call(name: &str, args: Vec<Expr>, offset: usize) -> Result<Expr, GeoError> {
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(GeoError::Parse(format!(
                "{name} takes {k} argument(s), got {} at {offset}",
                args.len()
            )))
        }
    };
    match name {
        "sqrt" | "exp" | "ln" | "log" | "sin" | "cos" => {
            arity(1)?;
            let a = &args[0];
            Ok(match name {
                "sqrt" => a.sqrt(),
                "exp" => a.exp(),
                "sin" => a.sin(),
                "cos" => a.cos(),
                _ => a.ln(),
            })
        }
        "atan2" => {
            arity(2)?;
            Ok(args[0].atan2(&args[1]))
        }
        "pow" => {
            arity(2)?;
            Ok(match args[1].as_constant() {
                Some(p) => args[0].powf(p),
                None => (args[1].clone() * args[0].ln()).exp(),
            })
        }
        _ => Err(GeoError::Parse(format!("unknown function '{name}' at {offset}"))),
    }
}

/// Parses `src` against the names in `ctx`.
pub fn parse_expr(src: &str, ctx: &ParseContext) -> Result<Expr, GeoError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser { tokens, pos: 0, ctx };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(GeoError::Parse(format!(
            "trailing input at {}",
            parser.offset()
        )));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParseContext {
        ParseContext::new(&["x", "y", "z"]).with_constant("m", 2.0)
    }

    #[test]
    fn precedence_and_unary_minus() {
        let e = parse_expr("-x^2 + 3*y/2", &ctx()).unwrap();
        assert_eq!(e.eval(&[2.0, 4.0, 0.0]), -4.0 + 6.0);
    }

    #[test]
    fn functions_and_constants() {
        let e = parse_expr("(1 + m/(2*sqrt(x^2+y^2+z^2)))^4", &ctx()).unwrap();
        let v = e.eval(&[1.0, 0.0, 0.0]);
        assert!((v - 16.0).abs() < 1e-14);
        let t = parse_expr("atan2(y, x) + pi", &ctx()).unwrap();
        assert!((t.eval(&[1.0, 1.0, 0.0]) - 1.25 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn scientific_notation() {
        let e = parse_expr("1.5e-3*x", &ctx()).unwrap();
        assert!((e.eval(&[2.0, 0.0, 0.0]) - 3e-3).abs() < 1e-18);
    }

    #[test]
    fn rejects_unknown_names_and_garbage() {
        assert!(parse_expr("w + 1", &ctx()).is_err());
        assert!(parse_expr("foo(x)", &ctx()).is_err());
        assert!(parse_expr("x +", &ctx()).is_err());
        assert!(parse_expr("x $ y", &ctx()).is_err());
        assert!(parse_expr("(x", &ctx()).is_err());
    }
}
