//! Expression parser for plane-curve equations.
//!
//! Grammar: integer and rational literals (a/b), variables x and y, the
//! operators + - * ^ with ^ binding tightest, parentheses, and an
//! optional top-level "lhs = rhs" normalized to lhs - rhs. Implicit
//! multiplication is not accepted.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Debug)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

pub type QPoly = BTreeMap<(i64, i64), BigRational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Equals,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().unwrap();
                out.push((start, Tok::Int(n)));
            }
            'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            'y' => {
                out.push((i, Tok::Y));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '=' => {
                out.push((i, Tok::Equals));
                i += 1;
            }
            other => {
                return Err(ParseError {
                    offset: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

fn poly_add(a: &mut QPoly, b: QPoly) {
    for (e, c) in b {
        let entry = a.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            a.remove(&e);
        }
    }
}

fn poly_neg(a: QPoly) -> QPoly {
    a.into_iter().map(|(e, c)| (e, -c)).collect()
}

fn poly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for ((i1, j1), c1) in a {
        for ((i2, j2), c2) in b {
            let e = (i1 + i2, j1 + j2);
            let entry = out.entry(e).or_insert_with(BigRational::zero);
            *entry += c1 * c2;
            if entry.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

fn constant(c: BigRational) -> QPoly {
    let mut out = QPoly::new();
    if !c.is_zero() {
        out.insert((0, 0), c);
    }
    out
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: &str) -> ParseError {
        let offset = self
            .toks
            .get(self.pos)
            .map(|&(o, _)| o)
            .unwrap_or(self.len);
        ParseError {
            offset,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.next();
                    let rhs = self.term()?;
                    poly_add(&mut acc, rhs);
                }
                Tok::Minus => {
                    self.next();
                    let rhs = self.term()?;
                    poly_add(&mut acc, poly_neg(rhs));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.factor()?;
        while let Some((_, Tok::Star)) = self.peek() {
            self.next();
            let rhs = self.factor()?;
            acc = poly_mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<QPoly, ParseError> {
        if let Some((_, Tok::Minus)) = self.peek() {
            self.next();
            return Ok(poly_neg(self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<QPoly, ParseError> {
        let base = self.atom()?;
        if let Some((_, Tok::Caret)) = self.peek() {
            self.next();
            let (off, tok) = self
                .next()
                .ok_or_else(|| self.err_here("expected an exponent"))?;
            let e = match tok {
                Tok::Int(n) => n,
                _ => {
                    return Err(ParseError {
                        offset: off,
                        message: "exponent must be a non-negative integer".into(),
                    })
                }
            };
            let e: u32 = e.try_into().map_err(|_| ParseError {
                offset: off,
                message: "exponent out of range".into(),
            })?;
            let mut acc = constant(BigRational::one());
            for _ in 0..e {
                acc = poly_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QPoly, ParseError> {
        let (off, tok) = self
            .next()
            .ok_or_else(|| self.err_here("expected a value"))?;
        match tok {
            Tok::Int(n) => {
                // rational literal a/b
                if let Some((_, Tok::Slash)) = self.peek() {
                    self.next();
                    let (doff, dt) = self
                        .next()
                        .ok_or_else(|| self.err_here("expected a denominator"))?;
                    let d = match dt {
                        Tok::Int(d) if !d.is_zero() => d,
                        Tok::Int(_) => {
                            return Err(ParseError {
                                offset: doff,
                                message: "zero denominator".into(),
                            })
                        }
                        _ => {
                            return Err(ParseError {
                                offset: doff,
                                message: "denominator must be an integer".into(),
                            })
                        }
                    };
                    return Ok(constant(BigRational::new(n, d)));
                }
                Ok(constant(BigRational::from(n)))
            }
            Tok::X => {
                let mut q = QPoly::new();
                q.insert((1, 0), BigRational::one());
                Ok(q)
            }
            Tok::Y => {
                let mut q = QPoly::new();
                q.insert((0, 1), BigRational::one());
                Ok(q)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.next() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((o, _)) => Err(ParseError {
                        offset: o,
                        message: "expected ')'".into(),
                    }),
                    None => Err(ParseError {
                        offset: self.len,
                        message: "unclosed parenthesis".into(),
                    }),
                }
            }
            other => Err(ParseError {
                offset: off,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parse an expression or equation into an exact bivariate polynomial.
pub fn parse_expression(s: &str) -> Result<QPoly, ParseError> {
    let toks = tokenize(s)?;
    // split at a top-level '=' if present
    let eq_positions: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, (_, t))| *t == Tok::Equals)
        .map(|(k, _)| k)
        .collect();
    if eq_positions.len() > 1 {
        return Err(ParseError {
            offset: toks[eq_positions[1]].0,
            message: "multiple '=' signs".into(),
        });
    }
    let (lhs_toks, rhs_toks) = match eq_positions.first() {
        Some(&k) => (toks[..k].to_vec(), Some(toks[k + 1..].to_vec())),
        None => (toks, None),
    };
    let len = s.len();
    let mut parser = Parser {
        toks: lhs_toks,
        pos: 0,
        len,
    };
    let mut lhs = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err_here("trailing input"));
    }
    if let Some(rt) = rhs_toks {
        let mut rp = Parser {
            toks: rt,
            pos: 0,
            len,
        };
        let rhs = rp.expr()?;
        if rp.pos != rp.toks.len() {
            return Err(rp.err_here("trailing input"));
        }
        poly_add(&mut lhs, poly_neg(rhs));
    }
    Ok(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn basic_polynomial() {
        let p = parse_expression("y^2 - x^3 - 7").unwrap();
        assert_eq!(p.get(&(0, 2)), Some(&q(1)));
        assert_eq!(p.get(&(3, 0)), Some(&q(-1)));
        assert_eq!(p.get(&(0, 0)), Some(&q(-7)));
    }

    #[test]
    fn equation_normalization() {
        let p = parse_expression("y^2 = x^3 + 49").unwrap();
        assert_eq!(p.get(&(0, 2)), Some(&q(1)));
        assert_eq!(p.get(&(3, 0)), Some(&q(-1)));
        assert_eq!(p.get(&(0, 0)), Some(&q(-49)));
    }

    #[test]
    fn intro_expression() {
        let p = parse_expression("y^2 + 7*x^3*y + x^3 + 16807").unwrap();
        assert_eq!(p.get(&(3, 1)), Some(&q(7)));
        assert_eq!(p.get(&(0, 0)), Some(&q(16807)));
    }

    #[test]
    fn rational_literal() {
        let p = parse_expression("1/2*x + y").unwrap();
        assert_eq!(
            p.get(&(1, 0)),
            Some(&BigRational::new(BigInt::from(1), BigInt::from(2)))
        );
    }

    #[test]
    fn error_offsets() {
        let e = parse_expression("y^2 - x^3 - $").unwrap_err();
        assert_eq!(e.offset, 12);
        let e = parse_expression("x y").unwrap_err();
        assert_eq!(e.offset, 2, "implicit multiplication is rejected");
        let e = parse_expression("x^y").unwrap_err();
        assert_eq!(e.offset, 2);
    }
}
