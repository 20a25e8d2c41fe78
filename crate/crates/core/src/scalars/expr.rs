use std::collections::HashMap;
use std::str::FromStr;
use std::sync::Mutex;

use super::{rational_sqrt, Int, Polynomial, Rational, Scalar, Sym};
use crate::error::Error;
use crate::Result;

/// Parsing mode for the expression grammar.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExprMode {
    /// `sqrt` is rejected; the result is a plain [`Scalar`].
    Exact,
    /// `sqrt(p)` over a non-constant radicand is kept as a symbolic radical
    /// to be resolved once parameter sampling makes `p` a rational square.
    Sampled,
}

/// A pending square root: `sym` stands for the nonnegative root of `radicand`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Radical {
    pub sym: Sym,
    pub radicand: Scalar,
}

/// A scalar that may mention symbolic radicals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqrtExpr {
    pub value: Scalar,
    pub radicals: Vec<Radical>,
}

impl SqrtExpr {
    pub fn plain(value: Scalar) -> SqrtExpr {
        SqrtExpr {
            value,
            radicals: Vec::new(),
        }
    }

    pub fn is_sqrt_free(&self) -> bool {
        self.radicals.is_empty()
    }

    /// Extract the scalar, failing when radicals remain unresolved.
    pub fn into_scalar(self) -> Result<Scalar> {
        if self.radicals.is_empty() {
            Ok(self.value)
        } else {
            Err(Error::SqrtInExactMode)
        }
    }
}

/// Result of [`parse_expression`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Parsed {
    Exact(Scalar),
    Sampled(SqrtExpr),
}

impl Parsed {
    pub fn into_scalar(self) -> Result<Scalar> {
        match self {
            Parsed::Exact(s) => Ok(s),
            Parsed::Sampled(e) => e.into_scalar(),
        }
    }

    pub fn into_sqrt_expr(self) -> SqrtExpr {
        match self {
            Parsed::Exact(s) => SqrtExpr::plain(s),
            Parsed::Sampled(e) => e,
        }
    }
}

// Radical symbols are interned per canonical radicand, so equal radicands
// share a symbol across expressions and always denote the same root.
static RADICAL_TABLE: Mutex<Option<HashMap<String, Sym>>> = Mutex::new(None);

fn radical_sym(radicand: &Scalar) -> Sym {
    let key = radicand.to_input_string();
    let mut guard = RADICAL_TABLE.lock().unwrap();
    let table = guard.get_or_insert_with(HashMap::new);
    if let Some(&sym) = table.get(&key) {
        return sym;
    }
    let sym = Sym::new(&format!("__r{}", table.len()));
    table.insert(key, sym);
    sym
}

/// Parse an expression over `allowed_vars` under the grammar: integers,
/// identifiers, `+ - * / ^` (caret takes a nonnegative integer literal),
/// parentheses, `sqrt(expr)` and the macros `Theta(X)`, `Psi(X)`.
/// Implicit multiplication is not accepted.
pub fn parse_expression(text: &str, allowed_vars: &[Sym], mode: ExprMode) -> Result<Parsed> {
    parse_with_location(text, allowed_vars, mode, 1, 0)
}

/// Like [`parse_expression`] but reporting positions relative to an
/// enclosing file (`line`, plus a column offset for embedded expressions).
pub fn parse_with_location(
    text: &str,
    allowed_vars: &[Sym],
    mode: ExprMode,
    line: usize,
    col_offset: usize,
) -> Result<Parsed> {
    let tokens = tokenize(text, line, col_offset)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        allowed_vars,
        mode,
        radicals: Vec::new(),
        line,
        col_offset,
    };
    let value = parser.parse_expr()?;
    parser.expect_eof()?;
    match mode {
        ExprMode::Exact => Ok(Parsed::Exact(value)),
        ExprMode::Sampled => Ok(Parsed::Sampled(SqrtExpr {
            value,
            radicals: parser.radicals,
        })),
    }
}

/// Exact-mode convenience wrapper.
pub fn parse_scalar(text: &str, allowed_vars: &[Sym]) -> Result<Scalar> {
    parse_expression(text, allowed_vars, ExprMode::Exact)?.into_scalar()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(Int),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn tokenize(text: &str, line: usize, col_offset: usize) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col_offset + i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, col });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, col });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, col });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, col });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, col });
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n = Int::from_str(&lit)
                    .map_err(|_| Error::parse(line, col, "integer literal too malformed"))?;
                out.push(Spanned { tok: Tok::Int(n), col });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let ident: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Ident(ident),
                    col,
                });
            }
            other => {
                return Err(Error::parse(
                    line,
                    col,
                    format!("unexpected character {:?}", other),
                ));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Spanned>,
    pos: usize,
    allowed_vars: &'a [Sym],
    mode: ExprMode,
    radicals: Vec<Radical>,
    line: usize,
    col_offset: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|s| &s.tok)
    }

    fn cur_col(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or(self.col_offset + 1)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let s = self.tokens.get(self.pos).cloned();
        if s.is_some() {
            self.pos += 1;
        }
        s
    }

    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.line, col, msg)
    }

    fn expect_eof(&self) -> Result<()> {
        if self.pos < self.tokens.len() {
            Err(self.err(self.cur_col(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn parse_expr(&mut self) -> Result<Scalar> {
        let mut acc = self.parse_term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.parse_term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Scalar> {
        let mut acc = self.parse_unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.parse_unary()?);
                }
                Tok::Slash => {
                    let col = self.cur_col();
                    self.bump();
                    let rhs = self.parse_unary()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|_| self.err(col, "division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(self.parse_unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.bump();
                self.parse_unary()
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<Scalar> {
        let base = self.parse_atom()?;
        if let Some(Tok::Caret) = self.peek() {
            let col = self.cur_col();
            self.bump();
            match self.bump() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => {
                    let exp = u32::try_from(&n)
                        .map_err(|_| self.err(col, "exponent too large"))?;
                    Ok(base.pow(exp))
                }
                other => Err(self.err(
                    other.map(|s| s.col).unwrap_or(col),
                    "caret requires a nonnegative integer literal exponent",
                )),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<Scalar> {
        let spanned = match self.bump() {
            Some(s) => s,
            None => {
                return Err(self.err(self.col_offset + 1, "unexpected end of expression"));
            }
        };
        match spanned.tok {
            Tok::Int(n) => Ok(Scalar::from_poly(Polynomial::constant(Rational::from(n)))),
            Tok::LParen => {
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(Spanned {
                        tok: Tok::RParen, ..
                    }) => Ok(inner),
                    _ => Err(self.err(spanned.col, "unclosed parenthesis")),
                }
            }
            Tok::Ident(name) => {
                if let Some(Tok::LParen) = self.peek() {
                    self.bump();
                    let arg = self.parse_expr()?;
                    match self.bump() {
                        Some(Spanned {
                            tok: Tok::RParen, ..
                        }) => {}
                        _ => return Err(self.err(spanned.col, "unclosed function call")),
                    }
                    return self.apply_function(&name, arg, spanned.col);
                }
                let sym = Sym::new(&name);
                if self.allowed_vars.contains(&sym) {
                    Ok(Scalar::var(sym))
                } else if name == "t" {
                    Err(self.err(spanned.col, "t is reserved here"))
                } else {
                    Err(self.err(spanned.col, format!("unknown variable {}", name)))
                }
            }
            other => Err(self.err(spanned.col, format!("unexpected token {:?}", other))),
        }
    }

    fn apply_function(&mut self, name: &str, arg: Scalar, col: usize) -> Result<Scalar> {
        match name {
            "sqrt" => self.make_sqrt(arg, col),
            // Theta(X) = (1 + sqrt(1 - 4*X))/2, Psi(X) = 1 - Theta(X)
            "Theta" | "Psi" => {
                let radicand = Scalar::from_int(1).sub(&arg.scale(&Rational::from(Int::from(4))));
                let root = self.make_sqrt(radicand, col)?;
                let half = Scalar::from_rational(Rational::new(Int::from(1), Int::from(2)));
                let theta = Scalar::from_int(1).add(&root).mul(&half);
                if name == "Theta" {
                    Ok(theta)
                } else {
                    Ok(Scalar::from_int(1).sub(&theta))
                }
            }
            other => Err(self.err(col, format!("unknown function {}", other))),
        }
    }

    fn make_sqrt(&mut self, radicand: Scalar, col: usize) -> Result<Scalar> {
        if self.mode == ExprMode::Exact {
            return Err(self.err(col, "sqrt not allowed in exact mode"));
        }
        if let Some(r) = radicand.as_rational() {
            return match rational_sqrt(&r) {
                Some(root) => Ok(Scalar::from_rational(root)),
                None => Err(Error::NotASquare(radicand.to_string())),
            };
        }
        if radicand.contains_var(Sym::t()) {
            return Err(self.err(col, "sqrt radicand must be free of t"));
        }
        if self
            .radicals
            .iter()
            .any(|r| radicand.contains_var(r.sym))
        {
            return Err(self.err(col, "nested sqrt is not supported"));
        }
        let sym = radical_sym(&radicand);
        if !self.radicals.iter().any(|r| r.sym == sym) {
            self.radicals.push(Radical {
                sym,
                radicand,
            });
        }
        Ok(Scalar::var(sym))
    }
}
