//! Tiny polynomial-expression parser shared by FGL files and presentations.
//!
//! Grammar: sums and differences of products of factors, where a factor is an
//! integer, an identifier, a parenthesised expression, or a factor raised to a
//! non-negative integer power with `^`.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i128),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Int(text.parse().map_err(|_| format!("integer too large: {text}"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
                // juxtaposition such as `3x` or `2(a+b)`
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> std::result::Result<Expr, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Int(e)) => {
                    self.pos += 1;
                    let e = u32::try_from(e).map_err(|_| "exponent too large".to_string())?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err("expected integer exponent after '^'".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> std::result::Result<Expr, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Ident(n)) => {
                self.pos += 1;
                Ok(Expr::Var(n))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

pub fn parse(s: &str) -> std::result::Result<Expr, String> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(e)
}

/// Ring operations needed to evaluate an [`Expr`].
pub trait Evaluator {
    type Value: Clone;
    fn int(&self, v: i128) -> Result<Self::Value>;
    fn var(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
}

pub fn eval<E: Evaluator>(e: &Expr, ev: &E) -> Result<E::Value> {
    Ok(match e {
        Expr::Int(v) => ev.int(*v)?,
        Expr::Var(n) => ev.var(n)?,
        Expr::Neg(a) => ev.neg(&eval(a, ev)?)?,
        Expr::Add(a, b) => ev.add(&eval(a, ev)?, &eval(b, ev)?)?,
        Expr::Sub(a, b) => ev.add(&eval(a, ev)?, &ev.neg(&eval(b, ev)?)?)?,
        Expr::Mul(a, b) => ev.mul(&eval(a, ev)?, &eval(b, ev)?)?,
        Expr::Pow(a, k) => {
            let base = eval(a, ev)?;
            let mut out = ev.int(1)?;
            for _ in 0..*k {
                out = ev.mul(&out, &base)?;
            }
            out
        }
    })
}

/// Parses and evaluates in one go, attaching a line number to parse errors.
pub fn parse_eval<E: Evaluator>(s: &str, line: usize, ev: &E) -> Result<E::Value> {
    let e = parse(s).map_err(|msg| Error::Parse { line, msg })?;
    eval(&e, ev)
}

/// Names of the variables an expression mentions.
pub fn variables(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Int(_) => {}
        Expr::Var(n) => {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        Expr::Neg(a) | Expr::Pow(a, _) => variables(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            variables(a, out);
            variables(b, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ints;
    impl Evaluator for Ints {
        type Value = i128;
        fn int(&self, v: i128) -> Result<i128> {
            Ok(v)
        }
        fn var(&self, name: &str) -> Result<i128> {
            match name {
                "x" => Ok(3),
                "y" => Ok(-2),
                _ => Err(Error::Parse { line: 0, msg: format!("unknown {name}") }),
            }
        }
        fn add(&self, a: &i128, b: &i128) -> Result<i128> {
            Ok(a + b)
        }
        fn neg(&self, a: &i128) -> Result<i128> {
            Ok(-a)
        }
        fn mul(&self, a: &i128, b: &i128) -> Result<i128> {
            Ok(a * b)
        }
    }

    #[test]
    fn evaluates_polynomials() {
        let cases = [("1", 1), ("x^2 - 2*x*y", 9 + 12), ("-(x+y)^3", -1), ("3x y", -18), ("2 - -x", 5)];
        for (s, v) in cases {
            assert_eq!(parse_eval(s, 1, &Ints).unwrap(), v, "{s}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("x +").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x $ y").is_err());
        assert!(parse("").is_err());
        assert!(parse_eval("z", 4, &Ints).is_err());
    }
}
