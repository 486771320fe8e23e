//! Boundary data expressions: real constants, coordinates `z1 … zn`, Poisson
//! kernels `P(y1,…,yn)` and their finite linear combinations, e.g.
//! `1.5 + 2*z1 - 0.5*P(0.1, 0.2, 0)`.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;

/// One summand of a parsed expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    One,
    Coordinate(usize),
    Poisson(Vec<f64>),
}

/// `Σ cᵢ·atomᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryExpr {
    pub terms: Vec<(f64, Atom)>,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let rest = self.rest();
        let mut end = 0;
        let bytes = rest.as_bytes();
        while end < bytes.len() {
            let b = bytes[end];
            let exp_sign = (b == b'-' || b == b'+') && end > 0 && matches!(bytes[end - 1], b'e' | b'E');
            if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                end += 1;
            } else {
                break;
            }
        }
        if end == 0 {
            return Err(self.error("expected a number"));
        }
        let v = rest[..end].parse::<f64>().map_err(|e| self.error(&e.to_string()))?;
        self.pos += end;
        Ok(v)
    }

    fn index(&mut self) -> Result<usize> {
        let rest = self.rest();
        let end = rest.bytes().take_while(u8::is_ascii_digit).count();
        if end == 0 {
            return Err(self.error("expected a coordinate index"));
        }
        let v = rest[..end].parse::<usize>().map_err(|e| self.error(&e.to_string()))?;
        self.pos += end;
        Ok(v)
    }
}

fn atom(lx: &mut Lexer<'_>) -> Result<Atom> {
    match lx.peek() {
        Some('z') | Some('ζ') => {
            let c = lx.peek().unwrap();
            lx.pos += c.len_utf8();
            let i = lx.index()?;
            if i == 0 {
                return Err(lx.error("coordinates are numbered from 1"));
            }
            Ok(Atom::Coordinate(i - 1))
        }
        Some('P') => {
            lx.pos += 1;
            lx.expect('(')?;
            let mut y = vec![signed_number(lx)?];
            while lx.eat(',') {
                y.push(signed_number(lx)?);
            }
            lx.expect(')')?;
            Ok(Atom::Poisson(y))
        }
        _ => Err(lx.error("expected z<i>, P(...) or a number")),
    }
}

fn signed_number(lx: &mut Lexer<'_>) -> Result<f64> {
    if lx.eat('-') {
        Ok(-lx.number()?)
    } else {
        lx.eat('+');
        lx.number()
    }
}

fn term(lx: &mut Lexer<'_>) -> Result<(f64, Atom)> {
    match lx.peek() {
        Some(c) if c.is_ascii_digit() || c == '.' => {
            let coef = lx.number()?;
            if lx.eat('*') {
                Ok((coef, atom(lx)?))
            } else {
                Ok((coef, Atom::One))
            }
        }
        _ => Ok((1.0, atom(lx)?)),
    }
}

impl BoundaryExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut lx = Lexer { src, pos: 0 };
        let mut terms = Vec::new();
        let mut sign = if lx.eat('-') {
            -1.0
        } else {
            lx.eat('+');
            1.0
        };
        loop {
            let (c, a) = term(&mut lx)?;
            terms.push((sign * c, a));
            if lx.eat('+') {
                sign = 1.0;
            } else if lx.eat('-') {
                sign = -1.0;
            } else {
                break;
            }
        }
        if lx.peek().is_some() {
            return Err(lx.error("trailing input"));
        }
        Ok(Self { terms })
    }

    /// Checks indices and Poisson centers against dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        for (_, a) in &self.terms {
            match a {
                Atom::Coordinate(i) if *i >= n => {
                    return Err(Error::Parse(format!("coordinate z{} exceeds dimension {n}", i + 1)))
                }
                Atom::Poisson(y) => {
                    if y.len() != n {
                        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
                    }
                    let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                    if r >= 1.0 {
                        return Err(Error::OutsideBall(r));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub(crate) fn poisson_centers<T: Scalar>(&self) -> impl Iterator<Item = Vector<T>> + '_ {
        self.terms.iter().filter_map(|(_, a)| match a {
            Atom::Poisson(y) => Some(Vector::from_f64(y)),
            _ => None,
        })
    }
}
