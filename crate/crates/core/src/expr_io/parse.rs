use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::field::{Field, FieldElem};
use crate::poly::{Poly, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(usize),
    NotInField,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::UnknownVariable(i) => write!(f, "unknown variable x{i}"),
            ParseErrorKind::NotInField => f.write_str("w is not in the field Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(usize),
    Omega,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl<'a> Lexer<'a> {
    fn err(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        let (line, column) = position(self.src, offset);
        ParseError { line, column, kind }
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        s
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(&(_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let Some(&(off, c)) = self.chars.peek() else {
                out.push((Tok::End, self.src.len()));
                return Ok(out);
            };
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                'w' => Tok::Omega,
                'x' => {
                    self.chars.next();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(self.err(off, ParseErrorKind::Syntax("expected digits after 'x'".into())));
                    }
                    let idx = d.parse::<usize>().unwrap_or(usize::MAX);
                    out.push((Tok::Var(idx), off));
                    continue;
                }
                c if c.is_ascii_digit() => {
                    let num = self.digits();
                    let mut den = String::from("1");
                    self.skip_ws();
                    if let Some(&(slash, '/')) = self.chars.peek() {
                        self.chars.next();
                        self.skip_ws();
                        den = self.digits();
                        if den.is_empty() {
                            return Err(self.err(slash, ParseErrorKind::Syntax("expected denominator".into())));
                        }
                    }
                    let n: BigInt = num.parse().expect("digits");
                    let d: BigInt = den.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.err(off, ParseErrorKind::Syntax("zero denominator".into())));
                    }
                    out.push((Tok::Num(BigRational::new(n, d)), off));
                    continue;
                }
                other => {
                    return Err(self.err(off, ParseErrorKind::Syntax(format!("unexpected character '{other}'"))));
                }
            };
            self.chars.next();
            out.push((tok, off));
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nvars: usize,
    field: Field,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let (line, column) = position(self.src, self.offset());
        ParseError { line, column, kind }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Num(q) if q.is_integer() => {
                let e: u32 = q
                    .to_integer()
                    .try_into()
                    .ok()
                    .filter(|&e: &u32| e <= 255)
                    .ok_or_else(|| self.err(ParseErrorKind::Syntax("exponent too large".into())))?;
                Ok(base.pow(e))
            }
            _ => Err(self.err(ParseErrorKind::Syntax("expected a nonnegative integer exponent".into()))),
        }
    }

    fn primary(&mut self) -> Result<Poly, ParseError> {
        let off = self.pos;
        match self.bump() {
            Tok::Num(q) => Ok(Poly::constant(self.nvars, self.field, FieldElem::rational(q))),
            Tok::Var(i) => {
                if i >= self.nvars {
                    self.pos = off;
                    return Err(self.err(ParseErrorKind::UnknownVariable(i)));
                }
                Ok(Poly::var(self.nvars, self.field, i))
            }
            Tok::Omega => {
                if self.field == Field::Q {
                    self.pos = off;
                    return Err(self.err(ParseErrorKind::NotInField));
                }
                Ok(Poly::constant(self.nvars, self.field, FieldElem::omega()))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.err(ParseErrorKind::Syntax("expected ')'".into())));
                }
                Ok(inner)
            }
            Tok::End => {
                self.pos = off;
                Err(self.err(ParseErrorKind::Syntax("unexpected end of input".into())))
            }
            _ => {
                self.pos = off;
                Err(self.err(ParseErrorKind::Syntax("expected a number, variable or '('".into())))
            }
        }
    }
}

/// Parses an expression into a canonical polynomial in `nvars` variables.
pub fn parse_poly(src: &str, nvars: usize, field: Field) -> Result<Poly, ParseError> {
    if nvars > MAX_VARS {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::Syntax(format!("at most {MAX_VARS} variables are supported")),
        });
    }
    let toks = Lexer { chars: src.char_indices().peekable(), src }.tokens()?;
    let mut p = Parser { toks, pos: 0, nvars, field, src };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err(ParseErrorKind::Syntax("trailing input".into())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    #[test]
    fn monomial_and_hesse() {
        let f = parse_poly("x0*x1*x2", 3, Field::Q).unwrap();
        assert_eq!(f.terms(), &[(Monomial::from_exps(&[1, 1, 1]).unwrap(), FieldElem::one())]);
        let h = parse_poly("x0^3+x1^3+x2^3-3*x0*x1*x2", 3, Field::Q).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(h.coeff(&Monomial::from_exps(&[1, 1, 1]).unwrap()), FieldElem::from_int(-3));
    }

    #[test]
    fn omega_rejected_over_q() {
        let err = parse_poly("x0^2*x1 + w*x2", 3, Field::Q).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NotInField);
        assert_eq!((err.line, err.column), (1, 11));
        let ok = parse_poly("x0^2*x1 + w*x2", 3, Field::QOmega).unwrap();
        assert_eq!(ok.coeff(&Monomial::var(2)), FieldElem::omega());
    }

    #[test]
    fn error_positions() {
        let e = parse_poly("x0 +\n  x7", 3, Field::Q).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable(7));
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_poly("x0 + * x1", 2, Field::Q).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.column, 6);
        assert!(parse_poly("(x0", 1, Field::Q).is_err());
        assert!(parse_poly("x0 x1", 2, Field::Q).is_err());
        assert!(parse_poly("1/0", 1, Field::Q).is_err());
    }

    #[test]
    fn precedence_and_rationals() {
        let a = parse_poly("-x0^2 + 3/6*(x1 - 2)*x1", 2, Field::Q).unwrap();
        let b = parse_poly("1/2*x1^2 - x1 - x0*x0", 2, Field::Q).unwrap();
        assert_eq!(a, b);
    }
}
