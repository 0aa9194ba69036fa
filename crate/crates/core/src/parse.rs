//! Polynomial text grammar.
//!
//! ```text
//! expr    := operand (binop operand)*      precedence climbing
//! binop   := '+' | '-'  (1)   '*'  (2)   '^' (3, right operand is a literal)
//! operand := '-' operand | integer | 'x' index | '(' expr ')'
//! ```
//!
//! Positions in errors are byte offsets into the input.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Token::Plus, start)),
            b'-' => out.push((Token::Minus, start)),
            b'*' => out.push((Token::Star, start)),
            b'^' => out.push((Token::Caret, start)),
            b'(' => out.push((Token::LParen, start)),
            b')' => out.push((Token::RParen, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((Token::Int(v), start));
                continue;
            }
            b'x' => {
                i += 1;
                let digits = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if digits == i {
                    return Err(Error::Syntax { pos: digits, msg: "expected variable index".into() });
                }
                let idx: usize = text[digits..i].parse().map_err(|_| Error::Syntax {
                    pos: digits,
                    msg: "variable index too large".into(),
                })?;
                out.push((Token::Var(idx), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{ch}`") });
            }
        }
        i += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser<'a, C> {
    tokens: Vec<(Token, usize)>,
    cursor: usize,
    n_vars: usize,
    _text: &'a str,
    _marker: std::marker::PhantomData<C>,
}

impl<C: Scalar> Parser<'_, C> {
    fn peek(&self) -> &(Token, usize) {
        &self.tokens[self.cursor]
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.cursor].clone();
        if t.0 != Token::End {
            self.cursor += 1;
        }
        t
    }

    fn binary_precedence(tok: &Token) -> Option<u8> {
        match tok {
            Token::Plus | Token::Minus => Some(1),
            Token::Star => Some(2),
            Token::Caret => Some(3),
            _ => None,
        }
    }

    fn expr(&mut self, min_prec: u8) -> Result<Polynomial<C>> {
        let mut lhs = self.operand()?;
        loop {
            let (tok, pos) = self.peek().clone();
            let Some(prec) = Self::binary_precedence(&tok) else { break };
            if prec < min_prec {
                break;
            }
            self.bump();
            lhs = match tok {
                Token::Caret => {
                    let e = self.exponent(pos)?;
                    lhs.pow(e)
                }
                Token::Plus => &lhs + &self.expr(prec + 1)?,
                Token::Minus => &lhs - &self.expr(prec + 1)?,
                Token::Star => &lhs * &self.expr(prec + 1)?,
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn exponent(&mut self, caret_pos: usize) -> Result<u32> {
        match self.bump() {
            (Token::Int(v), pos) => u32::try_from(&v)
                .map_err(|_| Error::Syntax { pos, msg: "exponent too large".into() }),
            (Token::Minus, pos) => Err(Error::NegativeExponent { pos }),
            (_, pos) => Err(Error::Syntax {
                pos: pos.max(caret_pos + 1),
                msg: "expected integer exponent after `^`".into(),
            }),
        }
    }

    fn operand(&mut self) -> Result<Polynomial<C>> {
        match self.bump() {
            (Token::Minus, _) => {
                // Unary minus binds looser than `^`: -x1^2 = -(x1^2).
                let inner = self.expr(3)?;
                Ok(-inner)
            }
            (Token::Int(v), _) => Ok(Polynomial::constant(self.n_vars, C::from_bigint(&v))),
            (Token::Var(idx), pos) => {
                if idx == 0 || idx > self.n_vars {
                    return Err(Error::VariableOutOfRange { index: idx, n_vars: self.n_vars, pos });
                }
                Ok(Polynomial::var(self.n_vars, idx - 1))
            }
            (Token::LParen, _) => {
                let inner = self.expr(1)?;
                match self.bump() {
                    (Token::RParen, _) => Ok(inner),
                    (_, pos) => Err(Error::Syntax { pos, msg: "expected `)`".into() }),
                }
            }
            (Token::End, pos) => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
            (tok, pos) => Err(Error::Syntax { pos, msg: format!("unexpected token {tok:?}") }),
        }
    }
}

/// Parses `text` as a polynomial in `x1..x{n_vars}` over `C`.
pub fn parse_poly<C: Scalar>(text: &str, n_vars: usize) -> Result<Polynomial<C>> {
    let tokens = tokenize(text)?;
    let mut parser = Parser::<C> {
        tokens,
        cursor: 0,
        n_vars,
        _text: text,
        _marker: std::marker::PhantomData,
    };
    let p = parser.expr(1)?;
    match parser.peek() {
        (Token::End, _) => Ok(p),
        (_, pos) => Err(Error::Syntax { pos: *pos, msg: "trailing input".into() }),
    }
}

impl<C: Scalar> std::str::FromStr for Polynomial<C> {
    type Err = Error;

    /// Parses with the variable count inferred from the largest index used.
    fn from_str(s: &str) -> Result<Self> {
        let n = tokenize(s)?
            .iter()
            .filter_map(|(t, _)| match t {
                Token::Var(i) => Some(*i),
                _ => None,
            })
            .max()
            .unwrap_or(0)
            .max(1);
        parse_poly(s, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::F5;
    use num_rational::BigRational;

    type Z = Polynomial<BigInt>;

    #[test]
    fn grammar_basic() {
        let p: Z = parse_poly("x1^2*x2 - 3*x3", 3).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&Monomial::new(vec![2, 1, 0])), BigInt::from(1));
        assert_eq!(p.coefficient(&Monomial::new(vec![0, 0, 1])), BigInt::from(-3));
    }

    #[test]
    fn grammar_expansion() {
        let p: Z = parse_poly("(x1+x2)^2", 2).unwrap();
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let p: Z = parse_poly("-x1^2 + 2*x2*x2 - -3", 2).unwrap();
        assert_eq!(p.to_string(), "-x1^2 + 2*x2^2 + 3");
        let q: Z = parse_poly("2*-x1", 1).unwrap();
        assert_eq!(q.to_string(), "-2*x1");
        let r: Z = parse_poly("x1 - x2 - x1", 2).unwrap();
        assert_eq!(r.to_string(), "-x2");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_poly::<BigInt>("x4", 3),
            Err(Error::VariableOutOfRange { index: 4, n_vars: 3, pos: 0 })
        );
        assert_eq!(parse_poly::<BigInt>("x1^-2", 1), Err(Error::NegativeExponent { pos: 3 }));
        assert!(matches!(parse_poly::<BigInt>("x1 + ", 1), Err(Error::Syntax { pos: 5, .. })));
        assert!(matches!(parse_poly::<BigInt>("3x1", 1), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_poly::<BigInt>("(x1", 1), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_poly::<BigInt>("x0", 1), Err(Error::VariableOutOfRange { .. })));
        assert!(matches!(parse_poly::<BigInt>("y", 1), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn literals_reduce_in_target_domain() {
        let p: Polynomial<F5> = parse_poly("7*x1 + 10", 1).unwrap();
        assert_eq!(p.to_string(), "2*x1");
        let q: Polynomial<BigRational> = parse_poly("x1 - 1", 1).unwrap();
        assert_eq!(q.to_string(), "x1 - 1");
    }
}
