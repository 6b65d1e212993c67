//! Recursive-descent parser and printer for element expressions.
//!
//! Grammar:
//!   expr   := term (("+"|"-") term)*
//!   term   := factor ("*" factor)*
//!   factor := int | "T(" coeff "," int ")" | "V^" int "(" expr ")"
//!           | "dV^" int "(" expr ")" | "F(" expr ")" | "R(" expr ")"
//!           | "p_(" expr ")" | "d(" expr ")" | "dlogt" | "(" expr ")"
//! Coefficients are read mod p, levels are inferred bottom-up, and degrees
//! are checked (no products of two 1-forms).

use drwlab_core::forms::{Form, NormalForm0, NormalForm1};
use drwlab_core::PrimeContext;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Teich(i64, i64),
    V(u32, Box<Expr>),
    Dv(u32, Box<Expr>),
    F(Box<Expr>),
    R(Box<Expr>),
    Pline(Box<Expr>),
    D(Box<Expr>),
    DlogT,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

/// A parse or evaluation error with a position in the source.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseError {}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError { pos: self.pos, msg: format!("expected '{}'", b as char) })
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut p = self.pos;
        if self.src.get(p) == Some(&b'-') || self.src.get(p) == Some(&b'+') {
            p += 1;
        }
        let digits = p;
        while p < self.src.len() && self.src[p].is_ascii_digit() {
            p += 1;
        }
        if p == digits {
            return Err(ParseError { pos: start, msg: "expected an integer".into() });
        }
        let s = std::str::from_utf8(&self.src[start..p]).unwrap();
        self.pos = p;
        s.parse().map_err(|_| ParseError { pos: start, msg: "integer out of range".into() })
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let v = self.int()?;
        u32::try_from(v).map_err(|_| ParseError { pos: start, msg: "expected a small nonnegative integer".into() })
    }
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut lx = Lexer::new(src);
    let e = parse_expr(&mut lx)?;
    lx.skip_ws();
    if lx.pos != lx.src.len() {
        return Err(ParseError { pos: lx.pos, msg: "trailing input".into() });
    }
    Ok(e)
}

fn parse_expr(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(b'+') => {
                lx.pos += 1;
                let rhs = parse_term(lx)?;
                acc = Expr::Add(Box::new(acc), Box::new(rhs));
            }
            Some(b'-') => {
                lx.pos += 1;
                let rhs = parse_term(lx)?;
                acc = Expr::Sub(Box::new(acc), Box::new(rhs));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Expr, ParseError> {
    let mut acc = parse_factor(lx)?;
    while lx.peek() == Some(b'*') {
        lx.pos += 1;
        let rhs = parse_factor(lx)?;
        acc = Expr::Mul(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_factor(lx: &mut Lexer) -> Result<Expr, ParseError> {
    lx.skip_ws();
    if lx.eat_str("dlogt") {
        return Ok(Expr::DlogT);
    }
    if lx.eat_str("dV^") {
        let k = lx.uint()?;
        lx.eat(b'(')?;
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::Dv(k, Box::new(inner)));
    }
    if lx.eat_str("d(") {
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::D(Box::new(inner)));
    }
    if lx.eat_str("V^") {
        let k = lx.uint()?;
        lx.eat(b'(')?;
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::V(k, Box::new(inner)));
    }
    if lx.eat_str("T(") {
        let c = lx.int()?;
        lx.eat(b',')?;
        let i = lx.int()?;
        lx.eat(b')')?;
        return Ok(Expr::Teich(c, i));
    }
    if lx.eat_str("F(") {
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::F(Box::new(inner)));
    }
    if lx.eat_str("R(") {
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::R(Box::new(inner)));
    }
    if lx.eat_str("p_(") {
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(Expr::Pline(Box::new(inner)));
    }
    if lx.peek() == Some(b'(') {
        lx.pos += 1;
        let inner = parse_expr(lx)?;
        lx.eat(b')')?;
        return Ok(inner);
    }
    match lx.peek() {
        Some(c) if c.is_ascii_digit() || c == b'-' || c == b'+' => Ok(Expr::Int(lx.int()?)),
        _ => Err(ParseError { pos: lx.pos, msg: "expected a factor".into() }),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Teich(c, i) => write!(f, "T({c},{i})"),
            Expr::V(k, e) => write!(f, "V^{k}({e})"),
            Expr::Dv(k, e) => write!(f, "dV^{k}({e})"),
            Expr::F(e) => write!(f, "F({e})"),
            Expr::R(e) => write!(f, "R({e})"),
            Expr::Pline(e) => write!(f, "p_({e})"),
            Expr::D(e) => write!(f, "d({e})"),
            Expr::DlogT => write!(f, "dlogt"),
            Expr::Add(a, b) => write!(f, "({a}) + ({b})"),
            Expr::Sub(a, b) => write!(f, "({a}) - ({b})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
        }
    }
}

/// Evaluate at the target truncation length of `ctx`; inner levels are
/// inferred bottom-up from the operator shifts.
pub fn eval(expr: &Expr, ctx: PrimeContext) -> Result<Form, ParseError> {
    let err = |msg: &str| ParseError { pos: 0, msg: msg.into() };
    let at = |n: i64| -> Result<PrimeContext, ParseError> {
        if n < 1 {
            return Err(err("operator level drops below length 1"));
        }
        ctx.at_length(n as u32).map_err(|e| err(&e.to_string()))
    };
    match expr {
        Expr::Int(v) => {
            let mut x = NormalForm0::zero(ctx);
            x.add_head(0, drwlab_core::scalar::int_mod(*v, ctx.modulus()));
            Ok(Form::Zero(x))
        }
        Expr::Teich(c, i) => Ok(Form::Zero(NormalForm0::teich_monomial(
            ctx,
            drwlab_core::scalar::int_mod(*c, ctx.p()),
            *i,
        ))),
        Expr::DlogT => {
            let mut w = NormalForm1::zero(ctx);
            w.add_dlog(0, 1);
            Ok(Form::One(w))
        }
        Expr::V(k, inner) => {
            let sub = at(ctx.n() as i64 - *k as i64)?;
            let mut v = eval(inner, sub)?;
            for _ in 0..*k {
                v = match v {
                    Form::Zero(x) => Form::Zero(x.v().map_err(|e| err(&e.to_string()))?),
                    Form::One(x) => Form::One(x.v().map_err(|e| err(&e.to_string()))?),
                };
            }
            Ok(v)
        }
        Expr::Dv(k, inner) => {
            let sub = at(ctx.n() as i64 - *k as i64)?;
            let v = eval(inner, sub)?;
            let Form::Zero(mut x) = v else {
                return Err(err("dV applies to 0-forms"));
            };
            for _ in 0..*k {
                x = x.v().map_err(|e| err(&e.to_string()))?;
            }
            Ok(Form::One(x.d()))
        }
        Expr::F(inner) => {
            let sub = at(ctx.n() as i64 + 1)?;
            match eval(inner, sub)? {
                Form::Zero(x) => Ok(Form::Zero(x.f().map_err(|e| err(&e.to_string()))?)),
                Form::One(x) => Ok(Form::One(x.f().map_err(|e| err(&e.to_string()))?)),
            }
        }
        Expr::R(inner) => {
            let sub = at(ctx.n() as i64 + 1)?;
            match eval(inner, sub)? {
                Form::Zero(x) => Ok(Form::Zero(x.r().map_err(|e| err(&e.to_string()))?)),
                Form::One(x) => Ok(Form::One(x.r().map_err(|e| err(&e.to_string()))?)),
            }
        }
        Expr::Pline(inner) => {
            let sub = at(ctx.n() as i64 - 1)?;
            match eval(inner, sub)? {
                Form::Zero(x) => Ok(Form::Zero(x.pline().map_err(|e| err(&e.to_string()))?)),
                Form::One(x) => Ok(Form::One(x.pline().map_err(|e| err(&e.to_string()))?)),
            }
        }
        Expr::D(inner) => match eval(inner, ctx)? {
            Form::Zero(x) => Ok(Form::One(x.d())),
            Form::One(_) => Err(err("d of a 1-form lands in degree 2 = 0")),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let fa = eval(a, ctx)?;
            let fb = eval(b, ctx)?;
            let fb = if matches!(expr, Expr::Sub(..)) { fb.int_mul(-1) } else { fb };
            match (fa, fb) {
                (Form::Zero(x), Form::Zero(y)) => Ok(Form::Zero(x.add(&y))),
                (Form::One(x), Form::One(y)) => Ok(Form::One(x.add(&y))),
                _ => Err(err("cannot add forms of different degree")),
            }
        }
        Expr::Mul(a, b) => {
            let fa = eval(a, ctx)?;
            let fb = eval(b, ctx)?;
            match (fa, fb) {
                (Form::Zero(x), Form::Zero(y)) => Ok(Form::Zero(x.mul(&y))),
                (Form::Zero(x), Form::One(w)) | (Form::One(w), Form::Zero(x)) => {
                    Ok(Form::One(x.mul_form(&w)))
                }
                (Form::One(_), Form::One(_)) => {
                    Err(err("degree error: product of two 1-forms lands in degree 2 = 0"))
                }
            }
        }
    }
}

/// Grammar-conformant printer for normal forms; `parse(print(x))` evaluates
/// back to `x`.
pub fn print_form(form: &Form) -> String {
    let mut parts: Vec<String> = Vec::new();
    match form {
        Form::Zero(x) => {
            for (&i, &b) in &x.head {
                parts.push(format!("{b}*T(1,{i})"));
            }
            for (&(s, j), &c) in &x.deep {
                parts.push(format!("{c}*V^{s}(T(1,{j}))"));
            }
        }
        Form::One(x) => {
            for (&i, &a) in &x.dlog {
                if i == 0 {
                    parts.push(format!("{a}*dlogt"));
                } else {
                    parts.push(format!("{a}*T(1,{i})*dlogt"));
                }
            }
            for (&(s, j), &c) in &x.dv {
                parts.push(format!("{c}*dV^{s}(T(1,{j}))"));
            }
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: u32) -> PrimeContext {
        PrimeContext::new(p, n).unwrap()
    }

    #[test]
    fn parse_teich() {
        let e = parse("T(1,-2)").unwrap();
        let f = eval(&e, ctx(2, 2)).unwrap();
        assert_eq!(f, Form::Zero(NormalForm0::teich_monomial(ctx(2, 2), 1, -2)));
    }

    #[test]
    fn parse_dv_key() {
        let e = parse("dV^1(T(1,3))").unwrap();
        let f = eval(&e, ctx(2, 2)).unwrap();
        let Form::One(w) = f else { panic!() };
        assert_eq!(w.dv.get(&(1, 3)), Some(&1));
    }

    #[test]
    fn degree_error() {
        let e = parse("V^1(T(1,-2)) + d(T(1,3))*dlogt").unwrap();
        assert!(eval(&e, ctx(2, 2)).is_err());
    }

    #[test]
    fn roundtrip_print_parse() {
        let c = ctx(3, 2);
        let mut x = NormalForm0::zero(c);
        x.add_head(-4, 7);
        x.push_deep(1, 2, 2);
        let f = Form::Zero(x);
        let printed = print_form(&f);
        let reparsed = eval(&parse(&printed).unwrap(), c).unwrap();
        assert_eq!(reparsed, f);
        // parse . print . parse = parse
        assert_eq!(print_form(&reparsed), printed);

        let mut w = NormalForm1::zero(c);
        w.add_dlog(0, 2);
        w.push_dv(1, -1, 1);
        let f1 = Form::One(w);
        let printed1 = print_form(&f1);
        assert_eq!(eval(&parse(&printed1).unwrap(), c).unwrap(), f1);
    }

    #[test]
    fn fv_relation_via_parser() {
        // F(V(x)) = p*x through the expression evaluator.
        let c = ctx(2, 2);
        let fv = eval(&parse("F(V^1(T(1,5)))").unwrap(), c).unwrap();
        let double = eval(&parse("T(1,5) + T(1,5)").unwrap(), c).unwrap();
        assert_eq!(fv, double);
    }
}
