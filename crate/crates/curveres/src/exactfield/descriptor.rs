//! Canonical textual form of towers and elements.
//!
//! Descriptors: `QQ`, `GF(2)`, `GF(2)(t)`, `GF(2)(t)[w]/(w^2+t)`; steps read
//! left to right, `(name)` adjoining an indeterminate and `[name]/(poly)`
//! adjoining a root of a monic polynomial. Printing and parsing round-trip
//! bit-exactly: the minimal polynomial is stored monic and printed in a fixed
//! compact form (descending exponents, no whitespace).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

use crate::error::{Error, Result};
use crate::exactfield::val::{format_rational, Base, Lv, Step, Val};
use crate::exactfield::{FieldElem, Tower, UPoly};

// ---- printing -------------------------------------------------------------

pub(super) fn print(t: &Tower) -> String {
    let d = t.data();
    let mut out = match d.base {
        Base::Rationals => "QQ".to_string(),
        Base::Prime(p) => format!("GF({p})"),
    };
    for (i, s) in d.steps.iter().enumerate() {
        match s {
            Step::Transcendental { name } => out.push_str(&format!("({name})")),
            Step::Algebraic { name, minpoly } => {
                let lv = Lv { t: d, level: i };
                out.push_str(&format!(
                    "[{name}]/({})",
                    render_poly(lv, minpoly, name, true)
                ));
            }
        }
    }
    out
}

pub(super) fn render_elem(e: &FieldElem) -> String {
    render_val(e.tower().lv(), &e.val)
}

/// Compact canonical rendering of a value at a given level.
pub(crate) fn render_val(lv: Lv<'_>, v: &Val) -> String {
    match v {
        Val::Q(q) => format_rational(q),
        Val::Fp(x) => format!("{x}"),
        Val::Frac { num, den } => {
            let name = lv.step().name().to_string();
            let below = lv.down();
            let ns = render_poly(below, num, &name, false);
            if below.ptrim(den.clone()) == vec![below.one()] {
                ns
            } else {
                let ds = render_poly(below, den, &name, false);
                format!("{}/{}", paren_if_sum(&ns), paren_if_sum(&ds))
            }
        }
        Val::Ext(coords) => {
            let name = lv.step().name().to_string();
            render_poly(lv.down(), coords, &name, false)
        }
    }
}

/// True if the rendering needs parentheses when used as a factor or divisor.
fn paren_if_sum(s: &str) -> String {
    let tail: String = s.chars().skip(1).collect();
    let composite = tail.contains('+') || tail.contains('-') || s.contains('/') || s.contains('*');
    if composite {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// Render a dense polynomial (coefficients one level down from the variable)
/// in descending exponents, compactly. `monic_head` is cosmetic only.
fn render_poly(lv: Lv<'_>, coeffs: &[Val], var: &str, _monic_head: bool) -> String {
    let trimmed = lv.ptrim(coeffs.to_vec());
    if trimmed.is_empty() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in trimmed.iter().enumerate().rev() {
        if lv.is_zero(c) {
            continue;
        }
        let cs = render_val(lv, c);
        let xs = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let part = if xs.is_empty() {
            cs
        } else if cs == "1" {
            xs
        } else if cs == "-1" {
            format!("-{xs}")
        } else {
            format!("{}*{xs}", paren_if_sum(&cs))
        };
        parts.push(part);
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push('-');
            out.push_str(rest);
        } else {
            out.push('+');
            out.push_str(p);
        }
    }
    out
}

// ---- parsing --------------------------------------------------------------

pub(super) fn parse(text: &str) -> Result<Tower> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Cursor { chars, pos: 0 };
    p.skip_ws();
    let mut tower = if p.eat_str("QQ") {
        Tower::rationals()
    } else if p.eat_str("GF") {
        p.expect('(')?;
        let n = p.integer()?;
        p.expect(')')?;
        Tower::prime(n.try_into().map_err(|_| p.err("prime out of range"))?)?
    } else {
        return Err(p.err("expected QQ or GF(p)"));
    };
    loop {
        p.skip_ws();
        if p.eat('(') {
            let name = p.ident()?;
            p.expect(')')?;
            tower = tower.add_transcendental(&name)?;
        } else if p.eat('[') {
            let name = p.ident()?;
            p.expect(']')?;
            p.expect('/')?;
            p.expect('(')?;
            let poly = parse_poly_expr(&mut p, &tower, &name)?;
            p.expect(')')?;
            tower = tower.add_algebraic(&name, &poly)?;
        } else {
            break;
        }
    }
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input after descriptor"));
    }
    Ok(tower)
}

/// Character cursor with position-tagged errors.
pub(crate) struct Cursor {
    pub chars: Vec<char>,
    pub pos: usize,
}

impl Cursor {
    pub fn err(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    pub fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let sc: Vec<char> = s.chars().collect();
        if self.chars[self.pos..].starts_with(&sc) {
            self.pos += sc.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    pub fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .map(|c| c.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<BigInt>().map_err(|_| self.err("bad integer"))
    }

    pub fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.peek().map(|c| c.is_alphabetic()).unwrap_or(false) {
            return Err(self.err("expected an identifier"));
        }
        while self
            .peek()
            .map(|c| c.is_alphanumeric() || c == '_')
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

/// Parse a polynomial expression in `var` over `tower` (used for minimal
/// polynomials inside descriptors): +, -, *, ^, parentheses, integers,
/// the new variable and the tower's generators. No division.
fn parse_poly_expr(p: &mut Cursor, tower: &Tower, var: &str) -> Result<UPoly> {
    parse_sum(p, tower, var)
}

fn parse_sum(p: &mut Cursor, tower: &Tower, var: &str) -> Result<UPoly> {
    let mut acc = if p.eat('-') {
        parse_product(p, tower, var)?.neg()
    } else {
        parse_product(p, tower, var)?
    };
    loop {
        if p.eat('+') {
            acc = acc.add(&parse_product(p, tower, var)?);
        } else if p.eat('-') {
            acc = acc.sub(&parse_product(p, tower, var)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(p: &mut Cursor, tower: &Tower, var: &str) -> Result<UPoly> {
    let mut acc = parse_power(p, tower, var)?;
    loop {
        p.skip_ws();
        if p.eat('*') {
            acc = acc.mul(&parse_power(p, tower, var)?);
        } else if matches!(p.peek(), Some(c) if c.is_alphanumeric() || c == '(') {
            // implicit multiplication like 2t or t(t+1)
            acc = acc.mul(&parse_power(p, tower, var)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(p: &mut Cursor, tower: &Tower, var: &str) -> Result<UPoly> {
    let base = parse_atom(p, tower, var)?;
    if p.eat('^') {
        p.skip_ws();
        let e = p.integer()?;
        let e: u64 = e.try_into().map_err(|_| p.err("exponent out of range"))?;
        Ok(base.pow(e))
    } else {
        Ok(base)
    }
}

fn parse_atom(p: &mut Cursor, tower: &Tower, var: &str) -> Result<UPoly> {
    p.skip_ws();
    match p.peek() {
        Some('(') => {
            p.expect('(')?;
            let inner = parse_sum(p, tower, var)?;
            p.expect(')')?;
            Ok(inner)
        }
        Some(c) if c.is_ascii_digit() => {
            let n = p.integer()?;
            let e = tower.from_rational(BigRational::new(n, BigInt::one()))?;
            Ok(UPoly::from_elems(tower, vec![e])?)
        }
        Some(c) if c.is_alphabetic() => {
            let name = p.ident()?;
            if name == var {
                Ok(UPoly::x(tower))
            } else if let Some(g) = tower.generator_by_name(&name) {
                Ok(UPoly::from_elems(tower, vec![g])?)
            } else {
                Err(p.err(&format!("unknown identifier '{name}'")))
            }
        }
        _ => Err(p.err("expected a term")),
    }
}
