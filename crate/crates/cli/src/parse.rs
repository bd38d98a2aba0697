//! Recursive-descent parser for balls, filters, polynomials and series.
//!
//! Elements are arithmetic expressions over rationals with `+ - * / ^` and
//! parentheses; `t` is the function-field variable and `T` the polynomial
//! variable. Decimal literals are rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use berkfilter::exactnum::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(ParseError {
                    line,
                    col: col + (i - start),
                    message: "decimal numbers are not accepted; write p/q".to_string(),
                });
            }
            let digits: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned {
                tok: Tok::Num(digits.parse().expect("digits")),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if "+-*/^()[],;=".contains(c) {
            out.push(Spanned {
                tok: Tok::Sym(c),
                line,
                col,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line,
            col,
            message: format!("unexpected character '{c}'"),
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

/// Arithmetic expression in `t` and `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    /// The function-field variable `t`.
    FieldVar,
    /// The polynomial variable `T`.
    PolyVar,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn mentions_poly_var(&self) -> bool {
        match self {
            Expr::PolyVar => true,
            Expr::Num(_) | Expr::FieldVar => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions_poly_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions_poly_var() || b.mentions_poly_var()
            }
        }
    }

    pub fn mentions_field_var(&self) -> bool {
        match self {
            Expr::FieldVar => true,
            Expr::Num(_) | Expr::PolyVar => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions_field_var(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions_field_var() || b.mentions_field_var()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallAst {
    pub radius: Expr,
    pub center: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterAst {
    Disc { center: Expr, radius: Expr },
    Chain(Vec<BallAst>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyAst {
    Dense(Vec<Expr>),
    Expr(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesAst {
    pub coeffs: Vec<Expr>,
    pub tail: Expr,
}

/// Which grammar a piece of text is parsed against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grammar {
    Element,
    Ball,
    Filter,
    Poly,
    Series,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Element(Expr),
    Ball(BallAst),
    Filter(FilterAst),
    Poly(PolyAst),
    Series(SeriesAst),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}', found {}", self.peek())))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(name.to_string()) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{name}', found {}", self.peek())))
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {} after the end of the expression", self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Tok::Num(n) => match n.to_u32() {
                Some(e) if e <= 4096 => Ok(Expr::Pow(Box::new(base), e)),
                _ => Err(self.error("exponent too large")),
            },
            other => Err(self.error(format!("expected a natural exponent, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Tok::Ident(s) if s == "t" => {
                self.bump();
                Ok(Expr::FieldVar)
            }
            Tok::Ident(s) if s == "T" => {
                self.bump();
                Ok(Expr::PolyVar)
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            other => Err(self.error(format!("expected a number, 't', 'T' or '(', found {other}"))),
        }
    }

    fn ball(&mut self) -> Result<BallAst, ParseError> {
        self.expect_ident("B")?;
        self.expect_sym('(')?;
        let radius = self.expr()?;
        self.expect_sym(';')?;
        let center = self.expr()?;
        self.expect_sym(')')?;
        Ok(BallAst { radius, center })
    }

    fn filter(&mut self) -> Result<FilterAst, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "disc" => {
                self.bump();
                self.expect_sym('(')?;
                let center = self.expr()?;
                self.expect_sym(',')?;
                let radius = self.expr()?;
                self.expect_sym(')')?;
                Ok(FilterAst::Disc { center, radius })
            }
            Tok::Ident(s) if s == "chain" => {
                self.bump();
                self.expect_sym('[')?;
                let mut balls = vec![self.ball()?];
                while *self.peek() == Tok::Sym(',') {
                    self.bump();
                    balls.push(self.ball()?);
                }
                self.expect_sym(']')?;
                Ok(FilterAst::Chain(balls))
            }
            other => Err(self.error(format!("expected 'disc(...)' or 'chain[...]', found {other}"))),
        }
    }

    fn list(&mut self, stop: char) -> Result<Vec<Expr>, ParseError> {
        let mut items = vec![self.expr()?];
        while *self.peek() == Tok::Sym(',') {
            self.bump();
            items.push(self.expr()?);
        }
        if *self.peek() != Tok::Sym(stop) {
            return Err(self.error(format!("expected ',' or '{stop}', found {}", self.peek())));
        }
        Ok(items)
    }

    fn poly(&mut self) -> Result<PolyAst, ParseError> {
        if *self.peek() == Tok::Ident("poly".into()) && *self.peek_at(1) == Tok::Sym('[') {
            self.bump();
            self.bump();
            let c = self.list(']')?;
            self.expect_sym(']')?;
            return Ok(PolyAst::Dense(c));
        }
        Ok(PolyAst::Expr(self.expr()?))
    }

    fn series(&mut self) -> Result<SeriesAst, ParseError> {
        self.expect_ident("series")?;
        self.expect_sym('[')?;
        let coeffs = self.list(';')?;
        self.expect_sym(';')?;
        self.expect_ident("tail")?;
        self.expect_sym('=')?;
        let tail = self.expr()?;
        self.expect_sym(']')?;
        Ok(SeriesAst { coeffs, tail })
    }
}

/// Parses `text` against `grammar`, rejecting trailing input.
pub fn parse_expression(text: &str, grammar: Grammar) -> Result<Parsed, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let out = match grammar {
        Grammar::Element => Parsed::Element(p.expr()?),
        Grammar::Ball => Parsed::Ball(p.ball()?),
        Grammar::Filter => Parsed::Filter(p.filter()?),
        Grammar::Poly => Parsed::Poly(p.poly()?),
        Grammar::Series => Parsed::Series(p.series()?),
    };
    p.expect_end()?;
    Ok(out)
}

macro_rules! typed_parser {
    ($name:ident, $grammar:ident, $ty:ty) => {
        pub fn $name(text: &str) -> Result<$ty, ParseError> {
            match parse_expression(text, Grammar::$grammar)? {
                Parsed::$grammar(v) => Ok(v),
                _ => unreachable!(),
            }
        }
    };
}

typed_parser!(parse_element, Element, Expr);
typed_parser!(parse_ball, Ball, BallAst);
typed_parser!(parse_filter, Filter, FilterAst);
typed_parser!(parse_poly, Poly, PolyAst);
typed_parser!(parse_series, Series, SeriesAst);

/// A `T`- and `t`-free expression evaluated to a rational.
pub fn constant_value(e: &Expr) -> Option<Rational> {
    Some(match e {
        Expr::Num(q) => q.clone(),
        Expr::FieldVar | Expr::PolyVar => return None,
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Div(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                return None;
            }
            constant_value(a)? / d
        }
        Expr::Pow(a, e) => berkfilter::exactnum::rpow(&constant_value(a)?, *e as i64),
    })
}
