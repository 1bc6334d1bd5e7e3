//! Polynomial expressions and problem files.
//!
//! Expression grammar (whitespace insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | var '_' integer | '(' expr ')'
//! ```
//!
//! Problem files are line oriented:
//!
//! ```text
//! # comment
//! char 0
//! n 3
//! form x
//! ideal:
//! x_1*(x_3^2*x_2+x_3+1)
//! x_3*(x_3^2*x_2+x_3+1)
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::coeff::{Coefficient, FieldSpec};
use crate::poly::{Polynomial, VarKind, VariableLayout};

const MAX_EXPONENT: u32 = 255;
const MAX_DEPTH: usize = 200;
const MAX_TERMS: usize = 100_000;

/// A diagnostic anchored at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("line {line}: {source}")]
    Syntax { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
    #[error("the ideal has no generators")]
    EmptyIdeal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorForm {
    /// Affine generators in `x_1..x_n`, homogenized before decomposition.
    X,
    /// Generators already multi-homogeneous in `y_1..y_{2n}`.
    Y,
}

impl fmt::Display for GeneratorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorForm::X => "x",
            GeneratorForm::Y => "y",
        })
    }
}

/// A validated problem: the generators live in [`ProblemSpec::layout`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub form: GeneratorForm,
    pub generators: Vec<Polynomial>,
}

impl ProblemSpec {
    /// `affine(n)` for x-form, `homogeneous(n)` (the 2n `y` slots) for y-form.
    pub fn layout(&self) -> VariableLayout {
        match self.form {
            GeneratorForm::X => VariableLayout::affine(self.n),
            GeneratorForm::Y => VariableLayout::homogeneous(self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num,
    Var(VarKind, usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    layout: &'a VariableLayout,
    field: FieldSpec,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Peeks the next token and its start offset without consuming it.
    fn peek(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start, start));
        };
        let single = |t| Ok((t, start, start + 1));
        match c {
            '+' => single(Tok::Plus),
            '-' => single(Tok::Minus),
            '*' => single(Tok::Star),
            '^' => single(Tok::Caret),
            '/' => single(Tok::Slash),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '0'..='9' => {
                let len = rest.bytes().take_while(u8::is_ascii_digit).count();
                Ok((Tok::Num, start, start + len))
            }
            _ if c.is_ascii_alphabetic() => {
                let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
                let word = &rest[..len];
                let (kind, index) =
                    parse_var_name(word).ok_or_else(|| ParseError::new(start, format!("unknown variable `{word}`")))?;
                if self.layout.slot(kind, index).is_none() {
                    return Err(ParseError::new(
                        start,
                        format!("variable `{word}` is not part of the layout {}", self.layout),
                    ));
                }
                Ok((Tok::Var(kind, index), start, start + len))
            }
            _ => Err(ParseError::new(start, format!("unexpected character `{c}`"))),
        }
    }

    fn bump(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        let t = self.peek()?;
        self.pos = t.2;
        Ok(t)
    }

    fn guard(&self, f: Polynomial, at: usize) -> Result<Polynomial, ParseError> {
        if f.num_terms() > MAX_TERMS {
            return Err(ParseError::new(at, "expression too large"));
        }
        Ok(f)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.pos, "expression nested too deeply"));
        }
        let mut acc = self.term()?;
        loop {
            match self.peek()? {
                (Tok::Plus, _, _) => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                (Tok::Minus, _, _) => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while let (Tok::Star, at, _) = self.peek()? {
            self.bump()?;
            let rhs = self.unary()?;
            acc = self.guard(acc.mul(&rhs), at)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek()? {
            (Tok::Minus, ..) | (Tok::Plus, ..) => {
                let (t, ..) = self.bump()?;
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(ParseError::new(self.pos, "expression nested too deeply"));
                }
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(if t == Tok::Minus { inner.neg() } else { inner })
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if let (Tok::Caret, at, _) = self.peek()? {
            self.bump()?;
            let (t, s, e) = self.bump()?;
            if t != Tok::Num {
                return Err(ParseError::new(s, "expected a non-negative integer exponent"));
            }
            let exp: u32 = self.src[s..e]
                .parse()
                .ok()
                .filter(|&x| x <= MAX_EXPONENT)
                .ok_or_else(|| ParseError::new(s, format!("exponent exceeds {MAX_EXPONENT}")))?;
            if let (Tok::Caret, at2, _) = self.peek()? {
                return Err(ParseError::new(at2, "chained `^` is ambiguous; add parentheses"));
            }
            let mut acc = Polynomial::one(self.field, self.layout.nvars());
            for _ in 0..exp {
                acc = self.guard(acc.mul(&base), at)?;
                if acc.total_degree() > 4 * MAX_EXPONENT {
                    return Err(ParseError::new(at, "degree too large"));
                }
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let (t, s, e) = self.bump()?;
        match t {
            Tok::Num => {
                let num = BigInt::from_str(&self.src[s..e]).expect("digits");
                let value = if let (Tok::Slash, at, _) = self.peek()? {
                    self.bump()?;
                    if !self.field.is_rational() {
                        return Err(ParseError::new(at, "rational literals require characteristic 0"));
                    }
                    let (t2, s2, e2) = self.bump()?;
                    if t2 != Tok::Num {
                        return Err(ParseError::new(s2, "expected an integer denominator"));
                    }
                    let den = BigInt::from_str(&self.src[s2..e2]).expect("digits");
                    if den.is_zero() {
                        return Err(ParseError::new(s2, "zero denominator"));
                    }
                    Coefficient::Rational(BigRational::new(num, den))
                } else {
                    self.field.from_bigint(&num)
                };
                Ok(Polynomial::constant(self.field, self.layout.nvars(), value))
            }
            Tok::Var(kind, index) => {
                let slot = self.layout.slot(kind, index).expect("checked when lexing");
                Ok(Polynomial::var(self.field, self.layout.nvars(), slot))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump()? {
                    (Tok::RParen, ..) => Ok(inner),
                    (_, s, _) => Err(ParseError::new(s, "expected `)`")),
                }
            }
            Tok::End => Err(ParseError::new(s, "unexpected end of input")),
            Tok::RParen => Err(ParseError::new(s, "unbalanced `)`")),
            _ => Err(ParseError::new(s, "expected a number, variable or `(`")),
        }
    }
}

fn parse_var_name(word: &str) -> Option<(VarKind, usize)> {
    let mut chars = word.chars();
    let kind = VarKind::from_letter(chars.next()?)?;
    let rest = chars.as_str().strip_prefix('_')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.len() > 9 {
        return None;
    }
    Some((kind, rest.parse().ok()?))
}

/// Parses one polynomial over `field` with variables from `layout`.
pub fn parse_polynomial(text: &str, layout: &VariableLayout, field: FieldSpec) -> Result<Polynomial, ParseError> {
    let mut p = Parser { src: text, pos: 0, layout, field, depth: 0 };
    if p.peek()?.0 == Tok::End {
        return Err(ParseError::new(p.pos, "empty expression"));
    }
    let f = p.expr()?;
    match p.peek()? {
        (Tok::End, ..) => Ok(f),
        (Tok::RParen, s, _) => Err(ParseError::new(s, "unbalanced `)`")),
        (Tok::LParen | Tok::Var(..) | Tok::Num, s, _) => {
            Err(ParseError::new(s, "implicit multiplication is not allowed; use `*`"))
        }
        (_, s, _) => Err(ParseError::new(s, "unexpected token")),
    }
}

/// Parses a problem file (`char`, `n`, `form` headers, then `ideal:`).
pub fn parse_problem(text: &str) -> Result<ProblemSpec, ProblemError> {
    let mut field = None;
    let mut n = None;
    let mut form = None;
    let mut in_ideal = false;
    let mut gens_src: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let invalid = |message: String| ProblemError::Invalid { line: line_no, message };
        if in_ideal {
            gens_src.extend(line.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| (line_no, s.to_string())));
            continue;
        }
        if let Some(rest) = line.strip_prefix("ideal:") {
            in_ideal = true;
            gens_src.extend(rest.split(';').map(str::trim).filter(|s| !s.is_empty()).map(|s| (line_no, s.to_string())));
            continue;
        }
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or("");
        let value = words.next().ok_or_else(|| invalid(format!("`{key}` needs a value")))?;
        if let Some(extra) = words.next() {
            return Err(invalid(format!("unexpected `{extra}` after `{key} {value}`")));
        }
        match key {
            "char" => {
                let c: u64 =
                    value.parse().map_err(|_| invalid(format!("characteristic `{value}` is not an integer")))?;
                field = Some(FieldSpec::new(c).map_err(|e| invalid(e.to_string()))?);
            }
            "n" => {
                let k: usize = value
                    .parse()
                    .ok()
                    .filter(|&k| (1..=64).contains(&k))
                    .ok_or_else(|| invalid(format!("coordinate count `{value}` must be in 1..=64")))?;
                n = Some(k);
            }
            "form" => {
                form = Some(match value {
                    "x" => GeneratorForm::X,
                    "y" => GeneratorForm::Y,
                    _ => return Err(invalid(format!("form must be `x` or `y`, got `{value}`"))),
                });
            }
            _ => return Err(invalid(format!("unknown header `{key}`"))),
        }
    }

    let field = field.ok_or(ProblemError::MissingHeader("char"))?;
    let n = n.ok_or(ProblemError::MissingHeader("n"))?;
    let form = form.ok_or(ProblemError::MissingHeader("form"))?;
    if !in_ideal {
        return Err(ProblemError::MissingHeader("ideal:"));
    }
    let layout = match form {
        GeneratorForm::X => VariableLayout::affine(n),
        GeneratorForm::Y => VariableLayout::homogeneous(n),
    };
    let mut generators = Vec::with_capacity(gens_src.len());
    for (line, src) in gens_src {
        let f = parse_polynomial(&src, &layout, field).map_err(|source| ProblemError::Syntax { line, source })?;
        generators.push(f);
    }
    if generators.is_empty() {
        return Err(ProblemError::EmptyIdeal);
    }
    Ok(ProblemSpec { field, n, form, generators })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x3() -> VariableLayout {
        VariableLayout::affine(3)
    }

    #[test]
    fn example_generator() {
        let f = parse_polynomial("x_1*(x_3^2*x_2+x_3+1)", &x3(), FieldSpec::RATIONALS).unwrap();
        assert_eq!(f.to_text(&x3()), "x_3^2*x_2*x_1+x_3*x_1+x_1");
        let l = VariableLayout::multiproj(3);
        let g = parse_polynomial("y_6^2+y_6", &l, FieldSpec::RATIONALS).unwrap();
        assert_eq!(g.num_terms(), 2);
        assert_eq!(g.degree_in(l.y(6)), Some(2));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let l = x3();
        let q = |s| parse_polynomial(s, &l, FieldSpec::RATIONALS).unwrap();
        assert_eq!(q("-x_1^2"), q("-(x_1^2)"));
        assert_eq!(q("2*x_1^2+3"), q("3+x_1*x_1*2"));
        assert_eq!(q("x_1 - - x_2"), q("x_1+x_2"));
        assert_eq!(q(" ( x_1 + 1 ) ^ 2 "), q("x_1^2+2*x_1+1"));
        assert_eq!(q("3/6*x_1"), q("1/2*x_1"));
    }

    #[test]
    fn positioned_errors() {
        let l = x3();
        let e = |s| parse_polynomial(s, &l, FieldSpec::RATIONALS).unwrap_err();
        assert_eq!(e("x_1*").offset, 4);
        assert_eq!(e("x_4+1").offset, 0);
        assert_eq!(e("x_1+w_1").offset, 4);
        assert_eq!(e("(x_1+1").offset, 6);
        assert_eq!(e("x_1+1)").offset, 5);
        assert_eq!(e("2x_1").offset, 1);
        assert_eq!(e("x_1 x_2").offset, 4);
        assert_eq!(e("x1").offset, 0);
        assert_eq!(e("1/0").offset, 2);
        assert_eq!(e("x_1^999").offset, 4);
        assert_eq!(e("").offset, 0);
        assert_eq!(e("x_1 $").offset, 4);
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(parse_polynomial("1/2", &l, f5).unwrap_err().offset, 1);
        let deep = "(".repeat(10_000);
        assert!(parse_polynomial(&deep, &l, FieldSpec::RATIONALS).is_err());
        let minus = "-".repeat(10_000) + "1";
        assert!(parse_polynomial(&minus, &l, FieldSpec::RATIONALS).is_err());
    }

    #[test]
    fn example_problem() {
        let src = "char 0\nn 3\nform x\nideal: x_1*(x_3^2*x_2+x_3+1) ; x_3*(x_3^2*x_2+x_3+1)\n";
        let spec = parse_problem(src).unwrap();
        assert_eq!(spec.field, FieldSpec::RATIONALS);
        assert_eq!(spec.n, 3);
        assert_eq!(spec.form, GeneratorForm::X);
        assert_eq!(spec.generators.len(), 2);

        let multi_line = "# Example\r\nchar 0\r\nn 3\r\nform x\r\nideal:\r\nx_1*(x_3^2*x_2+x_3+1)\r\nx_3*(x_3^2*x_2+x_3+1) # second\r\n";
        assert_eq!(parse_problem(multi_line).unwrap(), spec);

        let c = parse_problem("char 5\nn 2\nform x\nideal:\nx_2*x_1-1\n").unwrap();
        assert_eq!(c.field.characteristic(), 5);
        assert_eq!(c.generators[0].to_text(&c.layout()), "x_2*x_1-1");
    }

    #[test]
    fn problem_errors() {
        assert!(matches!(
            parse_problem("char 4\nn 1\nform x\nideal:\nx_1\n"),
            Err(ProblemError::Invalid { line: 1, .. })
        ));
        assert_eq!(parse_problem("n 1\nform x\nideal:\nx_1\n"), Err(ProblemError::MissingHeader("char")));
        assert_eq!(parse_problem("char 0\nn 1\nform x\n"), Err(ProblemError::MissingHeader("ideal:")));
        assert_eq!(parse_problem("char 0\nn 1\nform x\nideal:\n\n"), Err(ProblemError::EmptyIdeal));
        assert!(matches!(
            parse_problem("char 0\nn 2\nform x\nideal:\nx_3\n"),
            Err(ProblemError::Syntax { line: 5, .. })
        ));
        assert!(matches!(
            parse_problem("char 0\nn 1\nform y\nideal:\ny_3\n"),
            Err(ProblemError::Syntax { line: 5, .. })
        ));
        assert!(parse_problem("char 0\nn 1\nform y\nideal:\ny_2*y_1\n").is_ok());
        assert!(matches!(
            parse_problem("char 0\nn 1\nform z\nideal:\nx_1\n"),
            Err(ProblemError::Invalid { line: 3, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn never_panics(s in "[-+*^/()xyz_0-9 ;:#\\n]{0,40}") {
                let _ = parse_polynomial(&s, &VariableLayout::multiproj(2), FieldSpec::RATIONALS);
                let _ = parse_problem(&s);
            }

            #[test]
            fn never_panics_on_arbitrary_text(s in "\\PC{0,60}") {
                let _ = parse_polynomial(&s, &VariableLayout::affine(3), FieldSpec::prime(7).unwrap());
                let _ = parse_problem(&format!("char 7\nn 3\nform x\nideal:\n{s}"));
            }
        }
    }
}
