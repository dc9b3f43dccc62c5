//! Expression language for PDO coefficients and function parameters.
//!
//! A single recursive-descent parser serves both uses; a [`Dialect`] fixes
//! which variables and functions are allowed and whether powers must be
//! integers. Printing an expression with `Display` yields text that parses
//! back to the same tree.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" | "log" => Some(Func::Ln),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Real(f64),
    /// Purely imaginary literal, `2i` or `i`.
    Imag(f64),
    Const(Constant),
    Var(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Neg(_) => NEG_PRECEDENCE,
            Expr::Binary(op, ..) => op.precedence(),
            _ => ATOM_PRECEDENCE,
        }
    }

    /// True when no variable occurs in the expression.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::Real(_) | Expr::Imag(_) | Expr::Const(_) => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            _ => {}
        }
    }

    /// Integer value of a literal exponent such as `3` or `-2`.
    pub fn as_integer(&self) -> Option<i32> {
        match self {
            Expr::Real(v) if v.fract() == 0.0 && v.abs() <= i32::MAX as f64 => Some(*v as i32),
            Expr::Neg(e) => e.as_integer().map(|v| -v),
            _ => None,
        }
    }

    /// Complex evaluation; `lookup` resolves variable names.
    pub fn eval_complex(&self, lookup: &dyn Fn(&str) -> Option<Complex64>) -> Result<Complex64> {
        Ok(match self {
            Expr::Real(v) => Complex64::new(*v, 0.0),
            Expr::Imag(v) => Complex64::new(0.0, *v),
            Expr::Const(c) => Complex64::new(c.value(), 0.0),
            Expr::Var(name) => {
                lookup(name).ok_or_else(|| Error::input(format!("unbound variable `{name}`")))?
            }
            Expr::Neg(e) => -e.eval_complex(lookup)?,
            Expr::Binary(op, a, b) => {
                let lhs = a.eval_complex(lookup)?;
                match op {
                    BinOp::Pow => match b.as_integer() {
                        Some(k) => lhs.powi(k),
                        None => {
                            let exp = b.eval_complex(lookup)?;
                            if exp.im == 0.0 && exp.re.fract() == 0.0 && exp.re.abs() < 1e9 {
                                lhs.powi(exp.re as i32)
                            } else if exp.im == 0.0 && lhs.im == 0.0 && lhs.re > 0.0 {
                                Complex64::new(lhs.re.powf(exp.re), 0.0)
                            } else {
                                lhs.powc(exp)
                            }
                        }
                    },
                    _ => {
                        let rhs = b.eval_complex(lookup)?;
                        match op {
                            BinOp::Add => lhs + rhs,
                            BinOp::Sub => lhs - rhs,
                            BinOp::Mul => lhs * rhs,
                            BinOp::Div => {
                                if rhs == Complex64::default() {
                                    return Err(Error::input("division by zero"));
                                }
                                lhs / rhs
                            }
                            BinOp::Pow => unreachable!(),
                        }
                    }
                }
            }
            Expr::Call(f, e) => {
                let v = e.eval_complex(lookup)?;
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Ln => {
                        if v == Complex64::default() {
                            return Err(Error::input("logarithm of zero"));
                        }
                        v.ln()
                    }
                }
            }
        })
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Real(v) => write!(f, "{v}"),
            Expr::Imag(v) if *v == 1.0 => write!(f, "i"),
            Expr::Imag(v) => write!(f, "{v}i"),
            Expr::Const(Constant::Pi) => write!(f, "pi"),
            Expr::Const(Constant::E) => write!(f, "e"),
            Expr::Var(name) => write!(f, "{name}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_child(f, e.precedence() < NEG_PRECEDENCE)
            }
            Expr::Binary(op, a, b) => {
                let prec = op.precedence();
                let left_parens = if *op == BinOp::Pow {
                    a.precedence() <= prec
                } else {
                    a.precedence() < prec
                };
                let right_parens = if *op == BinOp::Pow {
                    b.precedence() < prec
                } else {
                    b.precedence() <= prec
                };
                a.fmt_child(f, left_parens)?;
                write!(f, "{}", op.symbol())?;
                b.fmt_child(f, right_parens)
            }
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

/// Which names an expression may use.
#[derive(Debug, Clone, PartialEq)]
pub struct Dialect {
    variables: Vec<String>,
    functions: Vec<Func>,
    allow_imaginary: bool,
    integer_powers: bool,
}

impl Dialect {
    /// PDO coefficients on `(x1..xn, t)`: complex literals, integer
    /// powers, `sin`, `cos`, `exp`.
    pub fn coefficient(n: usize) -> Self {
        let mut variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        variables.push("t".to_string());
        Dialect {
            variables,
            functions: vec![Func::Sin, Func::Cos, Func::Exp],
            allow_imaginary: true,
            integer_powers: true,
        }
    }

    /// Function parameters of `r`: real literals, real constant powers,
    /// `ln` and `exp`.
    pub fn function_parameter() -> Self {
        Dialect {
            variables: vec!["r".to_string()],
            functions: vec![Func::Ln, Func::Exp],
            allow_imaginary: false,
            integer_powers: false,
        }
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        let tokens = lex(text, self.allow_imaginary)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            dialect: self,
            end: text.len(),
        };
        let expr = parser.expr()?;
        if let Some(tok) = parser.peek() {
            return Err(Error::Parse {
                offset: tok.offset,
                message: format!("unexpected {}", tok.kind.describe()),
            });
        }
        Ok(expr)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Imag(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Imag(v) => format!("imaginary literal {v}i"),
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Op(c) => format!("operator `{c}`"),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(text: &str, allow_imaginary: bool) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                tokens.push(Token {
                    kind: TokenKind::Op(ch as char),
                    offset: start,
                });
                i += 1;
            }
            b'(' | b')' => {
                tokens.push(Token {
                    kind: if ch == b'(' {
                        TokenKind::LParen
                    } else {
                        TokenKind::RParen
                    },
                    offset: start,
                });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Exponent only when digits follow, so `2e` is not swallowed.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let literal = &text[start..i];
                let value: f64 = literal.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: format!("malformed number `{literal}`"),
                })?;
                let imaginary = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes
                        .get(i + 1)
                        .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
                if imaginary {
                    if !allow_imaginary {
                        return Err(Error::Parse {
                            offset: i,
                            message: "imaginary literals are not allowed here".into(),
                        });
                    }
                    i += 1;
                    tokens.push(Token {
                        kind: TokenKind::Imag(value),
                        offset: start,
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Number(value),
                        offset: start,
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    dialect: &'a Dialect,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Op(c),
                ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent_offset = self.offset();
            let exponent = self.unary()?;
            if self.dialect.integer_powers && exponent.as_integer().is_none() {
                return Err(Error::Parse {
                    offset: exponent_offset,
                    message: "exponent must be an integer literal".into(),
                });
            }
            if !exponent.is_constant() {
                return Err(Error::Parse {
                    offset: exponent_offset,
                    message: "exponent must be constant".into(),
                });
            }
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(tok) = self.peek() else {
            return self.error("unexpected end of expression");
        };
        match &tok.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Expr::Real(*v))
            }
            TokenKind::Imag(v) => {
                self.pos += 1;
                Ok(Expr::Imag(*v))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Token { kind: TokenKind::LParen, .. })) {
                    let func = Func::from_name(name)
                        .filter(|f| self.dialect.functions.contains(f))
                        .ok_or_else(|| Error::Parse {
                            offset: tok.offset,
                            message: format!("unknown function `{name}`"),
                        })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                match name.as_str() {
                    "i" if self.dialect.allow_imaginary => Ok(Expr::Imag(1.0)),
                    "pi" => Ok(Expr::Const(Constant::Pi)),
                    "e" => Ok(Expr::Const(Constant::E)),
                    _ if self.dialect.variables.iter().any(|v| v == name) => {
                        Ok(Expr::Var(name.clone()))
                    }
                    _ => Err(Error::Parse {
                        offset: tok.offset,
                        message: format!("unknown variable `{name}`"),
                    }),
                }
            }
            other => self.error(format!("unexpected {}", other.describe())),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::RParen,
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            _ => self.error("expected `)`"),
        }
    }
}
