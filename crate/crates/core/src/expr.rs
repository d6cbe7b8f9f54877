//! A small expression grammar for polynomials and base classes.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*')? unary)*        juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ident(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
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
            out.push((start, Token::Int(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*^()·−".contains(c) {
            let c = match c {
                '·' => '*',
                '−' => '-',
                other => other,
            };
            out.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' at column {}", i + 1)));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(usize::MAX, |(c, _)| c + 1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Token::Int(_) | Token::Ident(_)) | Some(Token::Sym('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.column();
            match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
                Some(Token::Int(n)) => {
                    self.pos += 1;
                    let e: u32 =
                        n.try_into().map_err(|_| Error::Parse(format!("exponent too large at column {col}")))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(Error::Parse(format!("expected integer exponent at column {col}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.column();
        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Token::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Ident(s))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse(format!("expected ')' at column {}", self.column())));
                }
                Ok(e)
            }
            Some(Token::Sym(c)) => Err(Error::Parse(format!("unexpected '{c}' at column {col}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let mut p = Parser { tokens: tokenize(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input at column {}", p.column())));
    }
    Ok(e)
}

/// Something expressions can be evaluated into.
pub trait Target {
    type Value: Clone;
    fn constant(&self, n: &BigInt) -> Self::Value;
    fn ident(&self, name: &str) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;

    fn neg(&self, a: &Self::Value) -> Self::Value {
        self.mul(&self.constant(&BigInt::from(-1)), a)
    }
}

pub fn eval<T: Target>(e: &Expr, t: &T) -> Result<T::Value> {
    Ok(match e {
        Expr::Int(n) => t.constant(n),
        Expr::Ident(s) => t.ident(s)?,
        Expr::Add(a, b) => t.add(&eval(a, t)?, &eval(b, t)?),
        Expr::Sub(a, b) => t.add(&eval(a, t)?, &t.neg(&eval(b, t)?)),
        Expr::Mul(a, b) => t.mul(&eval(a, t)?, &eval(b, t)?),
        Expr::Neg(a) => t.neg(&eval(a, t)?),
        Expr::Pow(a, k) => {
            let base = eval(a, t)?;
            let mut acc = t.constant(&BigInt::from(1));
            for _ in 0..*k {
                acc = t.mul(&acc, &base);
            }
            acc
        }
    })
}

pub fn parse_eval<T: Target>(s: &str, t: &T) -> Result<T::Value> {
    eval(&parse(s)?, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Ints;
    impl Target for Ints {
        type Value = i64;
        fn constant(&self, n: &BigInt) -> i64 {
            n.try_into().unwrap()
        }
        fn ident(&self, name: &str) -> Result<i64> {
            match name {
                "a" => Ok(2),
                "b" => Ok(3),
                _ => Err(Error::Parse(format!("unknown {name}"))),
            }
        }
        fn add(&self, a: &i64, b: &i64) -> i64 {
            a + b
        }
        fn mul(&self, a: &i64, b: &i64) -> i64 {
            a * b
        }
    }

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse_eval("1 + 2*3", &Ints).unwrap(), 7);
        assert_eq!(parse_eval("-a^2", &Ints).unwrap(), -4);
        assert_eq!(parse_eval("2a b", &Ints).unwrap(), 12);
        assert_eq!(parse_eval("a(a - b)", &Ints).unwrap(), -2);
        assert_eq!(parse_eval("(a+b)^2 - -1", &Ints).unwrap(), 26);
        assert_eq!(parse_eval("a·b − 1", &Ints).unwrap(), 5);
    }

    #[test]
    fn errors() {
        assert!(parse("1 +").is_err());
        assert!(parse("(a").is_err());
        assert!(parse("a ^ b").is_err());
        assert!(parse("a $ b").is_err());
        assert!(parse_eval("c", &Ints).is_err());
    }
}
