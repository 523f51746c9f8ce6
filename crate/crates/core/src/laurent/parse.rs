//! Recursive-descent parser for polynomial expressions in `z`.
//!
//! ```text
//! expression := ('+'|'-')? term (('+'|'-') term)*
//! term       := factor ('*' factor)*
//! factor     := base ('^' exponent)?
//! base       := 'z' | number | imaginary | 'i' | '(' expression ')'
//! exponent   := ('+'|'-')? integer        (negative only on 'z')
//! ```
//!
//! A decimal literal immediately followed by `i` (as in `2i` or `1.5e-3i`) is
//! an imaginary literal. Products and powers are expanded into coefficients
//! while parsing.

use num_complex::Complex64;

use super::LaurentPolynomial;
use crate::{Error, Result};

/// Exponents above this magnitude are rejected to keep dense storage bounded.
const MAX_EXPONENT: i64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Token {
    Number(f64),
    Imaginary(f64),
    Z,
    I,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Dot,
    End,
}

#[derive(Debug, Clone, Copy)]
struct Spanned {
    token: Token,
    pos: usize,
    /// Literal was written without a fractional part or exponent.
    integral: bool,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let pos = i;
        let simple = match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'z' | b'Z' => Some(Token::Z),
            b'i' | b'I' => Some(Token::I),
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(token) = simple {
            out.push(Spanned {
                token,
                pos,
                integral: true,
            });
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() || ch == b'.' {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut integral = true;
            if i < bytes.len() && bytes[i] == b'.' {
                integral = false;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let literal = &text[start..i];
            if literal == "." {
                out.push(Spanned {
                    token: Token::Dot,
                    pos,
                    integral: false,
                });
                continue;
            }
            let value: f64 = match literal.parse() {
                Ok(v) => v,
                Err(_) => return err(start, format!("malformed number '{literal}'")),
            };
            if !value.is_finite() {
                return err(start, format!("number '{literal}' is out of range"));
            }
            let token = if i < bytes.len() && (bytes[i] == b'i' || bytes[i] == b'I') {
                i += 1;
                Token::Imaginary(value)
            } else {
                Token::Number(value)
            };
            out.push(Spanned {
                token,
                pos: start,
                integral,
            });
            continue;
        }
        let shown = text[i..].chars().next().unwrap_or('?');
        return err(pos, format!("unexpected character '{shown}'"));
    }
    out.push(Spanned {
        token: Token::End,
        pos: text.len(),
        integral: true,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    cursor: usize,
}

impl Parser {
    fn peek(&self) -> Spanned {
        self.tokens[self.cursor]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.cursor];
        if t.token != Token::End {
            self.cursor += 1;
        }
        t
    }

    fn expression(&mut self) -> Result<LaurentPolynomial> {
        let negate = match self.peek().token {
            Token::Minus => {
                self.bump();
                true
            }
            Token::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek().token {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial> {
        let mut acc = self.factor()?;
        while self.peek().token == Token::Star {
            self.bump();
            let rhs = self.factor()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<LaurentPolynomial> {
        let start = self.peek();
        let base = self.base()?;
        if self.peek().token != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = self.exponent()?;
        if exponent < 0 {
            if start.token != Token::Z {
                return err(start.pos, "negative exponents are only allowed on 'z'");
            }
            return Ok(LaurentPolynomial::monomial(Complex64::new(1.0, 0.0), exponent as i32));
        }
        Ok(base.pow(exponent as u32))
    }

    fn exponent(&mut self) -> Result<i64> {
        let mut sign = 1;
        match self.peek().token {
            Token::Minus => {
                self.bump();
                sign = -1;
            }
            Token::Plus => {
                self.bump();
            }
            _ => {}
        }
        let t = self.bump();
        match t.token {
            Token::Number(v) if t.integral => {
                if self.peek().token == Token::Dot {
                    return err(self.peek().pos, "fractional exponents are not supported");
                }
                if v > MAX_EXPONENT as f64 {
                    return err(t.pos, format!("exponent exceeds {MAX_EXPONENT}"));
                }
                Ok(sign * v as i64)
            }
            Token::Number(_) | Token::Dot => err(t.pos, "fractional exponents are not supported"),
            Token::Imaginary(_) | Token::Z | Token::I | Token::LParen => {
                err(t.pos, "exponents must be integer literals, not expressions")
            }
            Token::End => err(t.pos, "expected an exponent after '^'"),
            _ => err(t.pos, "expected an integer exponent"),
        }
    }

    fn base(&mut self) -> Result<LaurentPolynomial> {
        let t = self.bump();
        match t.token {
            Token::Z => Ok(LaurentPolynomial::monomial(Complex64::new(1.0, 0.0), 1)),
            Token::I => Ok(LaurentPolynomial::constant(Complex64::new(0.0, 1.0))),
            Token::Number(v) => Ok(LaurentPolynomial::constant(Complex64::new(v, 0.0))),
            Token::Imaginary(v) => Ok(LaurentPolynomial::constant(Complex64::new(0.0, v))),
            Token::LParen => {
                let inner = self.expression()?;
                let close = self.bump();
                if close.token != Token::RParen {
                    return err(close.pos, "expected ')'");
                }
                Ok(inner)
            }
            Token::End => err(t.pos, "unexpected end of input"),
            Token::Dot => err(t.pos, "malformed number '.'"),
            _ => err(t.pos, "expected 'z', 'i', a number or '('"),
        }
    }
}

/// Parse a polynomial expression into canonical form.
pub fn parse_polynomial(text: &str) -> Result<LaurentPolynomial> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, cursor: 0 };
    if parser.peek().token == Token::End {
        return err(0, "empty expression");
    }
    let poly = parser.expression()?;
    let rest = parser.peek();
    match rest.token {
        Token::End => Ok(poly),
        Token::Z | Token::I | Token::Number(_) | Token::Imaginary(_) | Token::LParen => err(
            rest.pos,
            "expected an operator; write products explicitly with '*'",
        ),
        _ => err(rest.pos, "unexpected token"),
    }
}
