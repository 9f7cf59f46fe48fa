//! A small arithmetic-expression parser shared by element literals,
//! polynomial literals and the closed forms of sequence families.
//!
//! Grammar: integers, identifiers (`X`, `t`, `w`, index variables), `+ - * /`,
//! `^` (right-associative) and parentheses. Evaluation is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(s.parse().expect("digits")));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(s));
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = match self.next() {
            Some(Token::Int(n)) => Expr::Num(n),
            Some(Token::Ident(s)) => Expr::Var(s),
            Some(Token::Minus) => Expr::Neg(Box::new(self.parse(25)?)),
            Some(Token::Plus) => self.parse(25)?,
            Some(Token::LParen) => {
                let e = self.parse(0)?;
                match self.next() {
                    Some(Token::RParen) => e,
                    _ => return Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        loop {
            let (bp, right_bp) = match self.peek() {
                Some(Token::Plus) | Some(Token::Minus) => (10, 11),
                Some(Token::Star) | Some(Token::Slash) => (20, 21),
                Some(Token::Caret) => (30, 30),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let op = self.next().expect("peeked");
            let rhs = self.parse(right_bp)?;
            lhs = match op {
                Token::Plus => Expr::Add(Box::new(lhs), Box::new(rhs)),
                Token::Minus => Expr::Sub(Box::new(lhs), Box::new(rhs)),
                Token::Star => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                Token::Slash => Expr::Div(Box::new(lhs), Box::new(rhs)),
                Token::Caret => Expr::Pow(Box::new(lhs), Box::new(rhs)),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }
}

impl Expr {
    pub fn parse(input: &str) -> Result<Expr> {
        let tokens = tokenize(input)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut p = Parser { tokens, pos: 0 };
        let e = p.parse(0)?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in expression '{input}'")));
        }
        Ok(e)
    }

    /// Exact rational evaluation; every variable must be bound.
    pub fn eval_rational(&self, bindings: &[(&str, BigRational)]) -> Result<BigRational> {
        Ok(match self {
            Expr::Num(n) => BigRational::from_integer(n.clone()),
            Expr::Var(name) => bindings
                .iter()
                .find(|(v, _)| v == name)
                .map(|(_, q)| q.clone())
                .ok_or_else(|| Error::Parse(format!("unbound variable '{name}'")))?,
            Expr::Neg(e) => -e.eval_rational(bindings)?,
            Expr::Add(a, b) => a.eval_rational(bindings)? + b.eval_rational(bindings)?,
            Expr::Sub(a, b) => a.eval_rational(bindings)? - b.eval_rational(bindings)?,
            Expr::Mul(a, b) => a.eval_rational(bindings)? * b.eval_rational(bindings)?,
            Expr::Div(a, b) => {
                let den = b.eval_rational(bindings)?;
                if den.is_zero() {
                    return Err(Error::Parse("division by zero in closed form".into()));
                }
                a.eval_rational(bindings)? / den
            }
            Expr::Pow(base, exp) => {
                let e = exp.eval_rational(bindings)?;
                if !e.is_integer() {
                    return Err(Error::Parse("non-integer exponent in rational expression".into()));
                }
                let e = e
                    .to_integer()
                    .to_i32()
                    .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                let b = base.eval_rational(bindings)?;
                if b.is_zero() && e < 0 {
                    return Err(Error::Parse("zero base with negative exponent".into()));
                }
                exact_pow(&b, e)
            }
        })
    }
}

fn exact_pow(base: &BigRational, exp: i32) -> BigRational {
    let mag = base.pow(exp.unsigned_abs() as i32);
    if exp < 0 {
        mag.recip()
    } else {
        mag
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::values::{integer, rational};

    fn eval_k(src: &str, k: i64) -> BigRational {
        Expr::parse(src)
            .unwrap()
            .eval_rational(&[("k", integer(k)), ("n", integer(k))])
            .unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(eval_k("1-1/k", 2), rational(1, 2));
        assert_eq!(eval_k("1/(n+1)", 3), rational(1, 4));
        assert_eq!(eval_k("2^k", 5), integer(32));
        assert_eq!(eval_k("-k^2", 3), integer(-9));
        assert_eq!(eval_k("(k+1)/(2*k)", 3), rational(2, 3));
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("1+").is_err());
        assert!(Expr::parse("(1").is_err());
        assert!(Expr::parse("1 2").is_err());
        assert!(Expr::parse("1/k").unwrap().eval_rational(&[("k", integer(0))]).is_err());
    }
}
