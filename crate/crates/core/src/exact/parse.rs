//! Parser for compact rational-function notation such as
//! `((d^2/c^4)u^8-2dau^4+c^4a^2)/u^6`.
//!
//! Variables are single letters from the fixed variable set; juxtaposition
//! is multiplication and `^` takes a non-negative integer exponent.

use num_bigint::BigInt;

use super::mpoly::Var;
use super::rat::Rat;
use super::ratfunc::RatFunc;
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>, ExactError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '+' => out.push(Tok::Plus),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '0'..='9' => {
                let start = i;
                while i + 1 < cs.len() && cs[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = cs[start..=i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("digits")));
            }
            _ => match Var::from_name(c) {
                Some(v) => out.push(Tok::Var(v)),
                None => return Err(ExactError::Parse(format!("unexpected character {c:?}"))),
            },
        }
        i += 1;
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

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RatFunc, ExactError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ExactError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.checked_div(&self.unary()?)?;
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ExactError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc, ExactError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| ExactError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(e));
                }
                t => return Err(ExactError::Parse(format!("expected exponent, got {t:?}"))),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ExactError> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(RatFunc::constant(Rat::from_integer(n))),
            Some(Tok::Var(v)) => Ok(RatFunc::var(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    t => Err(ExactError::Parse(format!("expected ')', got {t:?}"))),
                }
            }
            t => Err(ExactError::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ExactError> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(ExactError::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_multiplication() {
        let a = parse_ratfunc("2dau^4").unwrap();
        let b = parse_ratfunc("2*a*d*u^4").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "2adu^4");
    }

    #[test]
    fn nested_fractions() {
        let f = parse_ratfunc("((d^2/c^4)u^8-2dau^4+c^4a^2)/u^6").unwrap();
        assert_eq!(f.to_string(), "(a^2c^8-2ac^4du^4+d^2u^8)/(c^4u^6)");
    }

    #[test]
    fn errors() {
        assert!(parse_ratfunc("a+").is_err());
        assert!(parse_ratfunc("(a").is_err());
        assert!(parse_ratfunc("q").is_err());
        assert!(parse_ratfunc("a/(b-b)").is_err());
    }
}
