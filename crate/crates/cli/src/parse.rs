//! Text forms of polynomials and operators.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := rational? atom*
//! atom     := ('x' | 'xi' | 'd') index ('^' nat)?
//! rational := int ('/' nat)?
//! ```
//!
//! Whitespace and `*` both multiply. Indices are 1-based.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use projcalc_core::poly::{Monomial, PhasePoly};
use projcalc_core::{DiffOp, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    IndexOutOfRange,
    MisplacedDerivative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::IndexOutOfRange => "index out of range",
            ParseErrorKind::MisplacedDerivative => "misplaced derivative",
        };
        write!(f, "{kind} at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Poly,
    Op,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Var {
    X,
    Xi,
    D,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    Atom(Var, usize),
    End,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError { kind, line: pos.line, column: pos.column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        let start = i;
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let tok = match c {
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '^' => {
                i += 1;
                Tok::Caret
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                Tok::Int(digits.parse().expect("ascii digits"))
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let var = match name.as_str() {
                    "x" => Var::X,
                    "xi" => Var::Xi,
                    "d" => Var::D,
                    _ => return Err(err(ParseErrorKind::Syntax, pos, format!("unknown symbol {name:?}"))),
                };
                let istart = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if istart == i {
                    return Err(err(ParseErrorKind::Syntax, pos, format!("{name} needs an index")));
                }
                let digits: String = chars[istart..i].iter().collect();
                let idx = digits.parse::<usize>().unwrap_or(usize::MAX);
                Tok::Atom(var, idx)
            }
            other => return Err(err(ParseErrorKind::Syntax, pos, format!("unexpected character {other:?}"))),
        };
        column += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    n: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Int(i) => format!("number {i}"),
            Tok::Slash => "'/'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Atom(..) => "a variable".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn syntax<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(err(ParseErrorKind::Syntax, self.pos(), format!("expected {what}, found {}", Self::describe(self.peek()))))
    }

    fn nat(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.syntax("a natural number"),
        }
    }

    fn expr(&mut self) -> Result<PhasePoly<Rational>, ParseError> {
        let mut out = PhasePoly::zero(self.n);
        let mut negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, if negative { -c } else { c });
            match self.peek() {
                Tok::Plus => negative = false,
                Tok::Minus => negative = true,
                Tok::End => return Ok(out),
                _ => return self.syntax("'+', '-' or end of input"),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational), ParseError> {
        let mut coef = Rational::from_integer(1.into());
        let mut seen = false;
        if let Tok::Int(num) = self.peek().clone() {
            self.bump();
            seen = true;
            coef = Rational::from_integer(num);
            if *self.peek() == Tok::Slash {
                self.bump();
                let pos = self.pos();
                let den = self.nat()?;
                if den.is_zero() {
                    return Err(err(ParseErrorKind::Syntax, pos, "zero denominator"));
                }
                coef = coef / Rational::from_integer(den);
            }
        }
        let mut x = vec![0u32; self.n];
        let mut xi = vec![0u32; self.n];
        let mut in_derivatives = false;
        loop {
            let star = *self.peek() == Tok::Star;
            if star {
                if !seen {
                    return self.syntax("a coefficient or variable");
                }
                self.bump();
            }
            let Tok::Atom(var, idx) = self.peek().clone() else {
                if star {
                    return self.syntax("a variable");
                }
                break;
            };
            let pos = self.pos();
            self.bump();
            seen = true;
            match (self.mode, var) {
                (Mode::Poly, Var::D) => {
                    return Err(err(ParseErrorKind::Syntax, pos, "derivative atom in a polynomial"));
                }
                (Mode::Op, Var::Xi) => {
                    return Err(err(ParseErrorKind::Syntax, pos, "fiber variable in an operator; use d"));
                }
                (Mode::Op, Var::X) if in_derivatives => {
                    return Err(err(
                        ParseErrorKind::MisplacedDerivative,
                        pos,
                        "coefficients must stand left of all derivatives",
                    ));
                }
                _ => {}
            }
            if idx == 0 || idx > self.n {
                let name = match var {
                    Var::X => "x",
                    Var::Xi => "xi",
                    Var::D => "d",
                };
                return Err(err(
                    ParseErrorKind::IndexOutOfRange,
                    pos,
                    format!("{name}{idx} outside 1..{}", self.n),
                ));
            }
            let mut e = 1u32;
            if *self.peek() == Tok::Caret {
                self.bump();
                let epos = self.pos();
                e = u32::try_from(self.nat()?)
                    .map_err(|_| err(ParseErrorKind::Syntax, epos, "exponent too large"))?;
            }
            let slot = match var {
                Var::X => &mut x[idx - 1],
                _ => {
                    in_derivatives = true;
                    &mut xi[idx - 1]
                }
            };
            *slot = slot
                .checked_add(e)
                .ok_or_else(|| err(ParseErrorKind::Syntax, pos, "exponent too large"))?;
        }
        if !seen {
            return self.syntax("a term");
        }
        Ok((Monomial::new(&x, &xi), coef))
    }
}

fn run_parser(text: &str, n: usize, mode: Mode) -> Result<PhasePoly<Rational>, ParseError> {
    let toks = lex(text)?;
    Parser { toks, at: 0, n, mode }.expr()
}

/// A polynomial in `x1..xn`, `xi1..xin`.
pub fn parse_poly(text: &str, n: usize) -> Result<PhasePoly<Rational>, ParseError> {
    run_parser(text, n, Mode::Poly)
}

/// A normal-ordered operator in `x1..xn`, `d1..dn`.
pub fn parse_op(text: &str, n: usize, lambda: Rational) -> Result<DiffOp, ParseError> {
    Ok(DiffOp::from_symbol(run_parser(text, n, Mode::Op)?, lambda))
}

/// `p/q` or an integer; decimals are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (t, None),
    };
    let bad = || format!("{text:?} is not a rational of the form p/q");
    let digits = |s: &str| !s.is_empty() && s.chars().all(|c| c.is_ascii_digit());
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) || den.is_some_and(|d| !digits(d)) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.map_or(Ok(1.into()), |d| d.parse()).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(format!("{text:?} has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}
