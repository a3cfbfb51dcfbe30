//! The expression front end.
//!
//! Grammar:
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := (scalar '*')? factor ('*' factor)* | scalar
//! factor   := 's(' int ')' | 'id(' int ',' sign ')'
//!           | 'E(' int ',' sign ',' int ')' | 'e' basislit
//!           | unop '(' expr ')' | '(' expr ')'
//! unop     := 'inc' | 'capL' | 'capR' | 'rot' | 'star' | 'tr' | 'expand'
//! basislit := ('[' int ')')? '^{' int* '}' '_{' int* '}' ('(' int ']')?
//! scalar   := rational (('+'|'-') rational '*' 'sqrtn')?
//! rational := int ('/' int)?
//! ```
//!
//! Every node carries its source position; colour and arity mismatches
//! are reported by the type checker against the offending node.

use std::fmt;

use crate::basis::BasisIndex;
use crate::diagram::{Colour, Label, Sign};
use crate::exactnum::{Rational, Scalar};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnOp {
    Inc,
    CapL,
    CapR,
    Rot,
    Star,
    Tr,
    Expand,
}

impl UnOp {
    pub fn name(self) -> &'static str {
        match self {
            UnOp::Inc => "inc",
            UnOp::CapL => "capL",
            UnOp::CapR => "capR",
            UnOp::Rot => "rot",
            UnOp::Star => "star",
            UnOp::Tr => "tr",
            UnOp::Expand => "expand",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Spin(Label),
    Unit(Colour),
    Jones { colour: Colour, pos: u32 },
    Basis(BasisIndex),
    Num { a: Rational, b: Rational },
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Unary(UnOp, Box<Node>),
}

#[derive(Clone, PartialEq, Debug)]
pub struct Node {
    pub expr: Expr,
    pub span: Span,
}

/// Inferred type of a node: an element of some colour, or a scalar.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Elem(Colour),
    Scalar,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Elem(c) => write!(f, "element of colour {c}"),
            Kind::Scalar => write!(f, "scalar"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Lexed {
    tok: Tok,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            c if c.is_ascii_digit() => {
                let mut v: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(dd) = d.to_digit(10) {
                        v = v
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(dd as i64))
                            .ok_or(Error::Syntax {
                                line: span.line,
                                col: span.col,
                                msg: "integer literal too large".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed { tok: Tok::Int(v), span });
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        s.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                out.push(Lexed { tok: Tok::Ident(s), span });
            }
            '+' | '-' | '*' | '/' | '(' | ')' | '[' | ']' | '{' | '}' | '^' | '_' | ',' => {
                chars.next();
                col += 1;
                out.push(Lexed { tok: Tok::Sym(c), span });
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|l| l.span).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|l| l.tok.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let span = self.span();
        Err(Error::Syntax { line: span.line, col: span.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.bump();
                Ok(())
            }
            _ => self.err(format!("expected '{c}'")),
        }
    }

    fn expect_int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expect_label(&mut self) -> Result<Label> {
        let v = self.expect_int()?;
        if v < 1 {
            return self.err("labels start at 1");
        }
        Ok(v as Label)
    }

    fn expect_sign(&mut self) -> Result<Sign> {
        match self.peek() {
            Some(Tok::Sym('+')) => {
                self.bump();
                Ok(Sign::Plus)
            }
            Some(Tok::Sym('-')) => {
                self.bump();
                Ok(Sign::Minus)
            }
            _ => self.err("expected '+' or '-'"),
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Sym(op @ ('+' | '-'))) => {
                    let op = *op;
                    let span = self.span();
                    self.bump();
                    let rhs = self.term()?;
                    let expr = if op == '+' {
                        Expr::Add(Box::new(lhs), Box::new(rhs))
                    } else {
                        Expr::Sub(Box::new(lhs), Box::new(rhs))
                    };
                    lhs = Node { expr, span };
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := (scalar '*')? factor ('*' factor)* | scalar
    fn term(&mut self) -> Result<Node> {
        let mut lhs = if matches!(self.peek(), Some(Tok::Int(_))) {
            let span = self.span();
            let scalar = self.scalar_literal()?;
            Node { expr: scalar, span }
        } else {
            self.factor()?
        };
        while matches!(self.peek(), Some(Tok::Sym('*'))) {
            let span = self.span();
            self.bump();
            let rhs = self.factor()?;
            lhs = Node { expr: Expr::Mul(Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    // scalar := rational (('+'|'-') rational '*' 'sqrtn')?  with the
    // sqrt part optional also when the rational part is absent
    fn scalar_literal(&mut self) -> Result<Expr> {
        let first = self.rational()?;
        // "r * sqrtn" alone
        if matches!(self.peek(), Some(Tok::Sym('*')))
            && matches!(self.toks.get(self.pos + 1).map(|l| &l.tok), Some(Tok::Ident(s)) if s == "sqrtn")
        {
            self.bump();
            self.bump();
            return Ok(Expr::Num { a: Rational::from_integer(0.into()), b: first });
        }
        // "a +/- r * sqrtn"
        if let Some(Tok::Sym(op @ ('+' | '-'))) = self.peek() {
            let negate = *op == '-';
            // lookahead: rational '*' sqrtn
            let save = self.pos;
            self.bump();
            if matches!(self.peek(), Some(Tok::Int(_))) {
                if let Ok(b) = self.rational() {
                    if matches!(self.peek(), Some(Tok::Sym('*')))
                        && matches!(
                            self.toks.get(self.pos + 1).map(|l| &l.tok),
                            Some(Tok::Ident(s)) if s == "sqrtn"
                        )
                    {
                        self.bump();
                        self.bump();
                        let b = if negate { -b } else { b };
                        return Ok(Expr::Num { a: first, b });
                    }
                }
            }
            self.pos = save; // plain sum, handled by expr
        }
        Ok(Expr::Num { a: first, b: Rational::from_integer(0.into()) })
    }

    fn rational(&mut self) -> Result<Rational> {
        let p = self.expect_int()?;
        if matches!(self.peek(), Some(Tok::Sym('/'))) {
            self.bump();
            let q = self.expect_int()?;
            if q == 0 {
                return self.err("zero denominator");
            }
            Ok(Rational::new(p.into(), q.into()))
        } else {
            Ok(Rational::from_integer(p.into()))
        }
    }

    fn factor(&mut self) -> Result<Node> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.bump();
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                match name.as_str() {
                    "s" => {
                        self.expect_sym('(')?;
                        let i = self.expect_label()?;
                        self.expect_sym(')')?;
                        Ok(Node { expr: Expr::Spin(i), span })
                    }
                    "id" => {
                        self.expect_sym('(')?;
                        let k = self.expect_int()?;
                        if k < 0 {
                            return self.err("k must be non-negative");
                        }
                        self.expect_sym(',')?;
                        let sign = self.expect_sign()?;
                        self.expect_sym(')')?;
                        Ok(Node { expr: Expr::Unit(Colour::new(k as u32, sign)), span })
                    }
                    "E" => {
                        self.expect_sym('(')?;
                        let k = self.expect_int()?;
                        if k < 0 {
                            return self.err("k must be non-negative");
                        }
                        self.expect_sym(',')?;
                        let sign = self.expect_sign()?;
                        self.expect_sym(',')?;
                        let pos = self.expect_int()?;
                        if pos < 1 {
                            return self.err("positions start at 1");
                        }
                        self.expect_sym(')')?;
                        Ok(Node {
                            expr: Expr::Jones {
                                colour: Colour::new(k as u32, sign),
                                pos: pos as u32,
                            },
                            span,
                        })
                    }
                    "e" => {
                        let idx = self.basis_literal()?;
                        Ok(Node { expr: Expr::Basis(idx), span })
                    }
                    "inc" | "capL" | "capR" | "rot" | "star" | "tr" | "expand" => {
                        let op = match name.as_str() {
                            "inc" => UnOp::Inc,
                            "capL" => UnOp::CapL,
                            "capR" => UnOp::CapR,
                            "rot" => UnOp::Rot,
                            "star" => UnOp::Star,
                            "tr" => UnOp::Tr,
                            _ => UnOp::Expand,
                        };
                        self.expect_sym('(')?;
                        let inner = self.expr()?;
                        self.expect_sym(')')?;
                        Ok(Node { expr: Expr::Unary(op, Box::new(inner)), span })
                    }
                    other => self.err(format!("unknown name '{other}'")),
                }
            }
            _ => self.err("expected a factor"),
        }
    }

    // basislit := ('[' int ')')? '^{' ints '}' '_{' ints '}' ('(' int ']')?
    fn basis_literal(&mut self) -> Result<BasisIndex> {
        let p = if matches!(self.peek(), Some(Tok::Sym('['))) {
            self.bump();
            let p = self.expect_label()?;
            self.expect_sym(')')?;
            Some(p)
        } else {
            None
        };
        self.expect_sym('^')?;
        let i = self.brace_labels()?;
        self.expect_sym('_')?;
        let j = self.brace_labels()?;
        let q = if matches!(self.peek(), Some(Tok::Sym('('))) {
            self.bump();
            let q = self.expect_label()?;
            self.expect_sym(']')?;
            Some(q)
        } else {
            None
        };
        if i.len() != j.len() {
            return self.err("basis literal needs equally long upper and lower tuples");
        }
        Ok(match (p, q) {
            (None, None) => BasisIndex::Even { i, j },
            (None, Some(q)) => BasisIndex::OddPlus { i, j, q },
            (Some(p), None) => BasisIndex::OddMinus { p, i, j },
            (Some(p), Some(q)) => BasisIndex::EvenMinus { p, i, j, q },
        })
    }

    fn brace_labels(&mut self) -> Result<Vec<Label>> {
        self.expect_sym('{')?;
        let mut out = Vec::new();
        while matches!(self.peek(), Some(Tok::Int(_))) {
            out.push(self.expect_label()?);
        }
        self.expect_sym('}')?;
        Ok(out)
    }
}

/// Parses one expression; trailing input is a syntax error.
pub fn parse(text: &str) -> Result<Node> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|l| Span { line: l.span.line, col: l.span.col + 1 })
        .unwrap_or(Span { line: 1, col: 1 });
    let mut p = Parser { toks, pos: 0, end };
    let node = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(node)
}

/// Infers the kind of every node, reporting colour and arity mismatches
/// at the offending node.
pub fn typecheck(node: &Node) -> Result<Kind> {
    let fail = |span: Span, msg: String| -> Result<Kind> {
        Err(Error::Type { line: span.line, col: span.col, msg })
    };
    match &node.expr {
        Expr::Spin(_) => Ok(Kind::Elem(Colour::minus(0))),
        Expr::Unit(c) => Ok(Kind::Elem(*c)),
        Expr::Jones { colour, pos } => {
            if *pos + 1 > colour.k {
                return fail(
                    node.span,
                    format!("Jones position {pos} needs k >= {} in colour {colour}", pos + 1),
                );
            }
            Ok(Kind::Elem(*colour))
        }
        Expr::Basis(idx) => Ok(Kind::Elem(idx.colour())),
        Expr::Num { .. } => Ok(Kind::Scalar),
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let ka = typecheck(a)?;
            let kb = typecheck(b)?;
            if ka != kb {
                return fail(node.span, format!("cannot add {ka} and {kb}"));
            }
            Ok(ka)
        }
        Expr::Mul(a, b) => {
            let ka = typecheck(a)?;
            let kb = typecheck(b)?;
            match (ka, kb) {
                (Kind::Scalar, k) | (k, Kind::Scalar) => Ok(k),
                (Kind::Elem(ca), Kind::Elem(cb)) if ca == cb => Ok(Kind::Elem(ca)),
                (ka, kb) => fail(node.span, format!("cannot multiply {ka} and {kb}")),
            }
        }
        Expr::Unary(op, a) => {
            let ka = typecheck(a)?;
            let Kind::Elem(c) = ka else {
                return fail(node.span, format!("{} needs an element, got {ka}", op.name()));
            };
            match op {
                UnOp::Inc => Ok(Kind::Elem(Colour::new(c.k + 1, c.sign))),
                UnOp::CapL => {
                    if c.k == 0 {
                        fail(node.span, "capL needs k >= 1".into())
                    } else {
                        Ok(Kind::Elem(Colour::new(c.k - 1, c.sign.flip())))
                    }
                }
                UnOp::CapR => {
                    if c.k == 0 {
                        fail(node.span, "capR needs k >= 1".into())
                    } else {
                        Ok(Kind::Elem(Colour::new(c.k - 1, c.sign)))
                    }
                }
                UnOp::Rot => {
                    if c.k == 0 {
                        fail(node.span, "rot needs k >= 1".into())
                    } else {
                        Ok(Kind::Elem(Colour::new(c.k, c.sign.flip())))
                    }
                }
                UnOp::Star | UnOp::Expand => Ok(Kind::Elem(c)),
                UnOp::Tr => Ok(Kind::Scalar),
            }
        }
    }
}

fn fmt_rational(r: &Rational) -> String {
    use num::One;
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical rendering; `parse(print(x)) = x` up to spans.
pub fn print(node: &Node) -> String {
    fn needs_parens_in_product(e: &Expr) -> bool {
        matches!(e, Expr::Add(..) | Expr::Sub(..))
    }
    match &node.expr {
        Expr::Spin(i) => format!("s({i})"),
        Expr::Unit(c) => format!("id({},{})", c.k, c.sign),
        Expr::Jones { colour, pos } => format!("E({},{},{})", colour.k, colour.sign, pos),
        Expr::Basis(idx) => format!("{idx}"),
        Expr::Num { a, b } => {
            use num::{Signed, Zero};
            if b.is_zero() {
                fmt_rational(a)
            } else if a.is_zero() {
                format!("{}*sqrtn", fmt_rational(b))
            } else if b.is_negative() {
                format!("{} - {}*sqrtn", fmt_rational(a), fmt_rational(&-b))
            } else {
                format!("{} + {}*sqrtn", fmt_rational(a), fmt_rational(b))
            }
        }
        Expr::Add(a, b) => format!("{} + {}", print(a), print(b)),
        Expr::Sub(a, b) => format!("{} - {}", print(a), print(b)),
        Expr::Mul(a, b) => {
            let pa = if needs_parens_in_product(&a.expr) {
                format!("({})", print(a))
            } else {
                print(a)
            };
            let pb = if needs_parens_in_product(&b.expr) {
                format!("({})", print(b))
            } else {
                print(b)
            };
            format!("{pa} * {pb}")
        }
        Expr::Unary(op, a) => format!("{}({})", op.name(), print(a)),
    }
}
