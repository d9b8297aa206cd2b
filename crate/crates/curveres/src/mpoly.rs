//! Sparse multivariate polynomials over a field tower, local models, and
//! monomial valuations: orders, initial forms, and the substitutions used by
//! dissolution and blow-up.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::val::Val;
use crate::exactfield::{descriptor, FieldElem, Tower, UPoly};

/// Exponent vector with graded-lexicographic ordering: total degree first,
/// then lexicographic on the exponents in variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial: no zero coefficients are stored, exponent
/// vectors match the variable arity, and iteration order is canonical.
#[derive(Clone, PartialEq)]
pub struct Poly {
    tower: Tower,
    vars: Vec<String>,
    terms: BTreeMap<Mono, Val>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Poly {
    pub fn zero(tower: &Tower, vars: &[String]) -> Poly {
        Poly {
            tower: tower.clone(),
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(tower: &Tower, vars: &[String], c: &FieldElem) -> Poly {
        let mut p = Poly::zero(tower, vars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; vars.len()]), c.val.clone());
        }
        p
    }

    pub fn one(tower: &Tower, vars: &[String]) -> Poly {
        Poly::constant(tower, vars, &tower.one())
    }

    /// The variable with the given index.
    pub fn var(tower: &Tower, vars: &[String], idx: usize) -> Poly {
        let mut e = vec![0u32; vars.len()];
        e[idx] = 1;
        Poly::monomial(tower, vars, Mono(e), &tower.one())
    }

    pub fn monomial(tower: &Tower, vars: &[String], m: Mono, c: &FieldElem) -> Poly {
        assert_eq!(m.0.len(), vars.len());
        let mut p = Poly::zero(tower, vars);
        if !c.is_zero() {
            p.terms.insert(m, c.val.clone());
        }
        p
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Canonical iteration over (monomial, coefficient) in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, FieldElem)> + '_ {
        self.terms
            .iter()
            .map(|(m, v)| (m, self.tower.elem(v.clone())))
    }

    pub fn coeff(&self, m: &Mono) -> FieldElem {
        match self.terms.get(m) {
            Some(v) => self.tower.elem(v.clone()),
            None => self.tower.zero(),
        }
    }

    fn insert_add(&mut self, m: Mono, v: Val) {
        let lv = self.tower.lv();
        if lv.is_zero(&v) {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = lv.add(&old, &v);
                if !lv.is_zero(&s) {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, v);
            }
        }
    }

    fn same_frame(&self, other: &Poly) -> Result<()> {
        if self.tower != other.tower || self.vars != other.vars {
            return Err(Error::TowerMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_frame(other)?;
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.insert_add(m.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let lv = self.tower.lv();
        Poly {
            tower: self.tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), lv.neg(v)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_frame(other)?;
        let lv = self.tower.lv();
        let mut out = Poly::zero(&self.tower, &self.vars);
        for (ma, va) in &self.terms {
            for (mb, vb) in &other.terms {
                let m = Mono(
                    ma.0.iter()
                        .zip(&mb.0)
                        .map(|(a, b)| a + b)
                        .collect(),
                );
                out.insert_add(m, lv.mul(va, vb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        let lv = self.tower.lv();
        if c.is_zero() {
            return Poly::zero(&self.tower, &self.vars);
        }
        Poly {
            tower: self.tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), lv.mul(v, &c.val)))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Poly> {
        let mut acc = Poly::one(&self.tower, &self.vars);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Minimal total degree of a term; errors on zero.
    pub fn ord(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[idx]).max()
    }

    /// Sum of the terms of minimal total degree.
    pub fn initial_form(&self) -> Result<Poly> {
        let nu = self.ord()?;
        Ok(Poly {
            tower: self.tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == nu)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        })
    }

    pub fn partial_derivative(&self, idx: usize) -> Poly {
        let lv = self.tower.lv();
        let mut out = Poly::zero(&self.tower, &self.vars);
        for (m, v) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let k = lv.from_i64(e as i64);
            let c = lv.mul(v, &k);
            let mut em = m.0.clone();
            em[idx] -= 1;
            out.insert_add(Mono(em), c);
        }
        out
    }

    /// General simultaneous substitution: variable i is replaced by
    /// `images[i]`, which are polynomials over a common frame.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.vars.len() {
            return Err(Error::Internal("substitution arity mismatch".into()));
        }
        let target_tower = images
            .first()
            .map(|p| p.tower.clone())
            .unwrap_or_else(|| self.tower.clone());
        let target_vars = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut out = Poly::zero(&target_tower, &target_vars);
        // Per-variable power caches.
        let mut pows: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(&p.tower, &p.vars), p.clone()])
            .collect();
        for (m, v) in &self.terms {
            let c = target_tower.embed(&self.tower.elem(v.clone()))?;
            let mut term = Poly::constant(&target_tower, &target_vars, &c);
            for (i, &e) in m.0.iter().enumerate() {
                while pows[i].len() <= e as usize {
                    let next = pows[i].last().unwrap().mul(&images[i])?;
                    pows[i].push(next);
                }
                term = term.mul(&pows[i][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        if point.len() != self.vars.len() {
            return Err(Error::Internal("evaluation arity mismatch".into()));
        }
        let mut acc = self.tower.zero();
        for (m, v) in &self.terms {
            let mut t = self.tower.elem(v.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as i64)?)?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Re-expand around a point: substitute x_i -> x_i + c_i. The point may
    /// live in a taller tower; the result lives there too.
    pub fn taylor_shift(&self, ext: &Tower, point: &[FieldElem]) -> Result<Poly> {
        let images: Vec<Poly> = (0..self.vars.len())
            .map(|i| {
                let x = Poly::var(ext, &self.vars, i);
                let c = Poly::constant(ext, &self.vars, &point[i]);
                x.add(&c)
            })
            .collect::<Result<_>>()?;
        self.embed(ext)?.substitute(&images)
    }

    /// Migrate to a taller tower of which the current one is a prefix.
    pub fn embed(&self, tower: &Tower) -> Result<Poly> {
        if tower == &self.tower {
            return Ok(self.clone());
        }
        let from = self.tower.height();
        if tower.height() < from
            || tower.data().base != self.tower.data().base
            || tower.data().steps[..from] != self.tower.data().steps[..]
        {
            return Err(Error::TowerMismatch);
        }
        Ok(Poly {
            tower: tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), tower.embed_val(v, from)))
                .collect(),
        })
    }

    /// Rename/extend the variable frame: `map[i]` is the index of old
    /// variable i inside `new_vars`.
    pub fn reframe(&self, new_vars: &[String], map: &[usize]) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let mut e = vec![0u32; new_vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            terms.insert(Mono(e), v.clone());
        }
        Poly {
            tower: self.tower.clone(),
            vars: new_vars.to_vec(),
            terms,
        }
    }

    /// Exact division by a single variable power; errors if not divisible.
    pub fn div_var_power(&self, idx: usize, k: u32) -> Result<Poly> {
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            if m.0[idx] < k {
                return Err(Error::Internal(format!(
                    "term not divisible by {}^{}",
                    self.vars[idx], k
                )));
            }
            let mut e = m.0.clone();
            e[idx] -= k;
            terms.insert(Mono(e), v.clone());
        }
        Ok(Poly {
            tower: self.tower.clone(),
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Largest k with the variable power x_idx^k dividing every term.
    pub fn var_multiplicity(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).min().unwrap_or(0)
    }

    /// Restrict to terms not involving the given variable (set it to zero).
    pub fn set_var_zero(&self, idx: usize) -> Poly {
        Poly {
            tower: self.tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[idx] == 0)
                .map(|(m, v)| (m.clone(), v.clone()))
                .collect(),
        }
    }

    /// Set the given variable to one (drop its exponents).
    pub fn set_var_one(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.tower, &self.vars);
        for (m, v) in &self.terms {
            let mut e = m.0.clone();
            e[idx] = 0;
            out.insert_add(Mono(e), v.clone());
        }
        out
    }

    /// View as a univariate polynomial in the single variable actually used.
    /// Errors if more than one variable occurs.
    pub fn to_univariate(&self, idx: usize) -> Result<UPoly> {
        for (m, _) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if i != idx && e > 0 {
                    return Err(Error::Internal(format!(
                        "polynomial is not univariate in {}",
                        self.vars[idx]
                    )));
                }
            }
        }
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let lv = self.tower.lv();
        let mut coeffs = vec![lv.zero(); deg + 1];
        for (m, v) in &self.terms {
            coeffs[m.0[idx] as usize] = v.clone();
        }
        Ok(UPoly::from_vals(&self.tower, coeffs))
    }

    /// Collect coefficients with respect to one variable: index k holds the
    /// coefficient polynomial of x_idx^k (with x_idx erased from its terms).
    pub fn coeffs_in(&self, idx: usize) -> Vec<Poly> {
        let deg = self.degree_in(idx).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(&self.tower, &self.vars); deg + 1];
        for (m, v) in &self.terms {
            let k = m.0[idx] as usize;
            let mut e = m.0.clone();
            e[idx] = 0;
            out[k].insert_add(Mono(e), v.clone());
        }
        out
    }

    /// Canonical text: ascending total degree, descending lex within a
    /// degree, `*` for products and `^` for powers.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Mono> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            a.total_degree()
                .cmp(&b.total_degree())
                .then_with(|| b.0.cmp(&a.0))
        });
        let lv = self.tower.lv();
        let mut parts: Vec<String> = Vec::new();
        for m in keys {
            let v = &self.terms[m];
            let cs = descriptor::render_val(lv, v);
            let mut monos: Vec<String> = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => monos.push(self.vars[i].clone()),
                    _ => monos.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            let ms = monos.join("*");
            let part = if ms.is_empty() {
                cs
            } else if cs == "1" {
                ms
            } else if cs == "-1" {
                format!("-{ms}")
            } else {
                let tail: String = cs.chars().skip(1).collect();
                if tail.contains('+') || tail.contains('-') || cs.contains('/') || cs.contains('*')
                {
                    format!("({cs})*{ms}")
                } else {
                    format!("{cs}*{ms}")
                }
            };
            parts.push(part);
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    /// Parse an expression over the tower in the given variables: `+ - * ^`,
    /// integer literals, variable and generator identifiers, parentheses,
    /// implicit multiplication.
    pub fn parse(text: &str, tower: &Tower, vars: &[String]) -> Result<Poly> {
        let mut p = descriptor::Cursor {
            chars: text.chars().collect(),
            pos: 0,
        };
        let out = parse_sum(&mut p, tower, vars)?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input after expression"));
        }
        Ok(out)
    }
}

fn parse_sum(p: &mut descriptor::Cursor, tower: &Tower, vars: &[String]) -> Result<Poly> {
    let mut acc = if p.eat('-') {
        parse_product(p, tower, vars)?.neg()
    } else {
        parse_product(p, tower, vars)?
    };
    loop {
        if p.eat('+') {
            acc = acc.add(&parse_product(p, tower, vars)?)?;
        } else if p.eat('-') {
            acc = acc.sub(&parse_product(p, tower, vars)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_product(p: &mut descriptor::Cursor, tower: &Tower, vars: &[String]) -> Result<Poly> {
    let mut acc = parse_power(p, tower, vars)?;
    loop {
        p.skip_ws();
        if p.eat('*') {
            acc = acc.mul(&parse_power(p, tower, vars)?)?;
        } else if matches!(p.peek(), Some(c) if c.is_alphanumeric() || c == '(') {
            acc = acc.mul(&parse_power(p, tower, vars)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(p: &mut descriptor::Cursor, tower: &Tower, vars: &[String]) -> Result<Poly> {
    let base = parse_atom(p, tower, vars)?;
    if p.eat('^') {
        p.skip_ws();
        let e = p.integer()?;
        let e: u32 = e
            .try_into()
            .map_err(|_| p.err("exponent out of range"))?;
        base.pow(e)
    } else {
        Ok(base)
    }
}

fn parse_atom(p: &mut descriptor::Cursor, tower: &Tower, vars: &[String]) -> Result<Poly> {
    p.skip_ws();
    match p.peek() {
        Some('(') => {
            p.expect('(')?;
            let inner = parse_sum(p, tower, vars)?;
            p.expect(')')?;
            Ok(inner)
        }
        Some(c) if c.is_ascii_digit() => {
            let n = p.integer()?;
            let e = match i64::try_from(&n) {
                Ok(small) => tower.from_i64(small),
                Err(_) => tower.from_rational(BigRational::new(n, BigInt::one()))?,
            };
            Ok(Poly::constant(tower, vars, &e))
        }
        Some(c) if c.is_alphabetic() => {
            let name = p.ident()?;
            if let Some(i) = vars.iter().position(|v| v == &name) {
                Ok(Poly::var(tower, vars, i))
            } else if let Some(g) = tower.generator_by_name(&name) {
                Ok(Poly::constant(tower, vars, &g))
            } else {
                Err(p.err(&format!("unknown identifier '{name}'")))
            }
        }
        _ => Err(p.err("expected a term")),
    }
}

/// A curve germ: a regular local frame (x_1..x_e; y) with the hypersurface f
/// vanishing at the origin. The coefficient field absorbs every invertible
/// ambient variable.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub tower: Tower,
    /// Names of the x-parameters, in order; the y-candidate is separate.
    pub xparams: Vec<String>,
    pub yparam: String,
    pub f: Poly,
}

impl LocalModel {
    /// Build and validate: f's variables must be exactly xparams + [yparam].
    pub fn new(tower: Tower, xparams: Vec<String>, yparam: String, f: Poly) -> Result<LocalModel> {
        let mut vars = xparams.clone();
        vars.push(yparam.clone());
        if f.vars() != vars.as_slice() {
            return Err(Error::InvalidInput(
                "local model variables do not match the polynomial frame".into(),
            ));
        }
        if f.is_zero() {
            return Err(Error::InvalidInput("local model with zero polynomial".into()));
        }
        if f.ord()? == 0 {
            return Err(Error::InvalidInput(
                "polynomial does not vanish at the origin".into(),
            ));
        }
        Ok(LocalModel {
            tower,
            xparams,
            yparam,
            f,
        })
    }

    pub fn e(&self) -> usize {
        self.xparams.len()
    }

    pub fn y_index(&self) -> usize {
        self.xparams.len()
    }

    /// ν: the order of f at the origin.
    pub fn ord_at_origin(&self) -> Result<u32> {
        self.f.ord()
    }

    /// The initial form in_m(f): minimal-degree part.
    pub fn initial_form(&self) -> Result<Poly> {
        self.f.initial_form()
    }

    /// Dissolution substitution y := y' + eps * x^v (so that the old y equals
    /// y' + eps*x^v); the model is rewritten exactly in (x, y').
    pub fn shift_substitute(&self, v: &[u32], eps: &FieldElem) -> Result<LocalModel> {
        if v.len() != self.e() {
            return Err(Error::InvalidInput("shift exponent arity mismatch".into()));
        }
        let vars = self.f.vars().to_vec();
        let mut images: Vec<Poly> = (0..vars.len())
            .map(|i| Poly::var(&self.tower, &vars, i))
            .collect();
        let mut xv = Poly::constant(&self.tower, &vars, eps);
        for (i, &e) in v.iter().enumerate() {
            xv = xv.mul(&Poly::var(&self.tower, &vars, i).pow(e)?)?;
        }
        let yi = self.y_index();
        images[yi] = images[yi].add(&xv)?;
        let f2 = self.f.substitute(&images)?;
        LocalModel::new(
            self.tower.clone(),
            self.xparams.clone(),
            self.yparam.clone(),
            f2,
        )
    }
}

/// The monomial valuation J = (x_1^{a_1}, x_2^{a_2}): v(x_1) = 1/a_1,
/// v(x_2) = 1/a_2.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialValuation {
    pub params: (String, String),
    pub a1: BigRational,
    pub a2: BigRational,
}

impl MonomialValuation {
    pub fn new(params: (String, String), a1: BigRational, a2: BigRational) -> Result<Self> {
        if a1 <= BigRational::zero() || a2 <= BigRational::zero() {
            return Err(Error::InvalidInput("valuation exponents must be positive".into()));
        }
        Ok(MonomialValuation { params, a1, a2 })
    }

    /// v_J(g) = min over the support of i_1/a_1 + i_2/a_2. Variables other
    /// than the two J-parameters must not occur.
    pub fn v_j(&self, g: &Poly) -> Result<BigRational> {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let vars = g.vars();
        let i1 = vars
            .iter()
            .position(|v| v == &self.params.0)
            .ok_or_else(|| Error::InvalidInput("first valuation parameter missing".into()))?;
        let i2 = vars
            .iter()
            .position(|v| v == &self.params.1)
            .ok_or_else(|| Error::InvalidInput("second valuation parameter missing".into()))?;
        let mut best: Option<BigRational> = None;
        for (m, _) in g.terms() {
            for (i, &e) in m.0.iter().enumerate() {
                if i != i1 && i != i2 && e > 0 {
                    return Err(Error::InvalidInput(
                        "polynomial uses a variable outside the valuation parameters".into(),
                    ));
                }
            }
            let val = BigRational::from_integer(BigInt::from(m.0[i1])) / &self.a1
                + BigRational::from_integer(BigInt::from(m.0[i2])) / &self.a2;
            best = Some(match best {
                Some(b) if b <= val => b,
                _ => val,
            });
        }
        Ok(best.unwrap())
    }
}

// ---- multivariate gcd (primitive PRS) -------------------------------------

/// Multivariate gcd, monic-normalized in its leading coefficient where
/// possible (the result is defined up to a unit). Recursion: univariate in
/// the last variable that actually occurs, with contents handled recursively.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.same_frame(b)?;
    if a.is_zero() {
        return Ok(normalize_unit(b.clone()));
    }
    if b.is_zero() {
        return Ok(normalize_unit(a.clone()));
    }
    // Pick the main variable: the last index occurring in either operand.
    let n = a.vars.len();
    let main = (0..n)
        .rev()
        .find(|&i| a.degree_in(i).unwrap_or(0) > 0 || b.degree_in(i).unwrap_or(0) > 0);
    let Some(main) = main else {
        // Both are constants.
        return Ok(Poly::one(&a.tower, &a.vars));
    };
    // When only one variable occurs at all, field-coefficient Euclid is both
    // exact and fast; the pseudo-remainder path suffers from severe
    // coefficient growth on univariate inputs of even moderate degree.
    if uses_only(a, main) && uses_only(b, main) {
        let g = a.to_univariate(main)?.gcd(&b.to_univariate(main)?);
        let mut out = Poly::zero(&a.tower, &a.vars);
        for i in 0..=g.degree() {
            let c = g.coeff(i);
            if !c.is_zero() {
                let mut e = vec![0u32; n];
                e[main] = i as u32;
                out = out.add(&Poly::monomial(&a.tower, &a.vars, Mono(e), &c))?;
            }
        }
        return Ok(normalize_unit(out));
    }
    let mut p = a.clone();
    let mut q = b.clone();
    if p.degree_in(main).unwrap_or(0) < q.degree_in(main).unwrap_or(0) {
        std::mem::swap(&mut p, &mut q);
    }
    // Contents with respect to the main variable.
    let cont_p = content_in(&p, main)?;
    let cont_q = content_in(&q, main)?;
    let cont = poly_gcd(&cont_p, &cont_q)?;
    let mut p = exact_div(&p, &cont_p)?;
    let mut q = exact_div(&q, &cont_q)?;
    // Primitive PRS.
    while !q.is_zero() && q.degree_in(main).unwrap_or(0) > 0 {
        let r = pseudo_rem(&p, &q, main)?;
        p = q;
        q = if r.is_zero() {
            r
        } else {
            exact_div(&r, &content_in(&r, main)?)?
        };
    }
    let prim = if q.is_zero() {
        p
    } else {
        // A nonzero constant remainder: the primitive parts are coprime.
        Poly::one(&a.tower, &a.vars)
    };
    Ok(normalize_unit(cont.mul(&prim)?))
}

/// True when no variable other than `idx` occurs in any term.
fn uses_only(p: &Poly, idx: usize) -> bool {
    p.terms
        .keys()
        .all(|m| m.0.iter().enumerate().all(|(i, &e)| i == idx || e == 0))
}

/// Divide by the leading (graded-lex largest) coefficient.
fn normalize_unit(p: Poly) -> Poly {
    match p.terms.iter().next_back() {
        None => p,
        Some((_, v)) => {
            let lv = p.tower.lv();
            let inv = lv.inv(v);
            Poly {
                tower: p.tower.clone(),
                vars: p.vars.clone(),
                terms: p
                    .terms
                    .iter()
                    .map(|(m, c)| (m.clone(), lv.mul(c, &inv)))
                    .collect(),
            }
        }
    }
}

/// Content with respect to one variable: recursive gcd of the coefficients.
fn content_in(p: &Poly, main: usize) -> Result<Poly> {
    let mut acc = Poly::zero(&p.tower, &p.vars);
    for c in p.coeffs_in(main) {
        if !c.is_zero() {
            acc = poly_gcd(&acc, &c)?;
        }
    }
    Ok(acc)
}

/// Exact multivariate division; errors when not divisible.
pub fn exact_div(p: &Poly, d: &Poly) -> Result<Poly> {
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let lv = p.tower.lv();
    let mut rem = p.clone();
    let mut quo = Poly::zero(&p.tower, &p.vars);
    let (dm, dc) = {
        let (m, v) = d.terms.iter().next_back().unwrap();
        (m.clone(), v.clone())
    };
    let dc_inv = lv.inv(&dc);
    while let Some((rm, rc)) = rem.terms.iter().next_back().map(|(m, v)| (m.clone(), v.clone())) {
        let mut e = Vec::with_capacity(rm.0.len());
        for (a, b) in rm.0.iter().zip(&dm.0) {
            if a < b {
                return Err(Error::Internal("inexact multivariate division".into()));
            }
            e.push(a - b);
        }
        let c = lv.mul(&rc, &dc_inv);
        let t = Poly {
            tower: p.tower.clone(),
            vars: p.vars.clone(),
            terms: std::iter::once((Mono(e), c)).collect(),
        };
        rem = rem.sub(&t.mul(d)?)?;
        quo = quo.add(&t)?;
    }
    Ok(quo)
}

/// Pseudo-remainder with respect to the given main variable:
/// lc(q)^(deg p - deg q + 1) * p = s*q + r with deg_main r < deg_main q.
fn pseudo_rem(p: &Poly, q: &Poly, main: usize) -> Result<Poly> {
    let dq = q.degree_in(main).unwrap_or(0);
    let q_coeffs = q.coeffs_in(main);
    let lc = q_coeffs[dq as usize].clone();
    let mut r = p.clone();
    loop {
        let dr = match r.degree_in(main) {
            Some(d) if !r.is_zero() => d,
            _ => return Ok(r),
        };
        if r.is_zero() || dr < dq {
            return Ok(r);
        }
        let r_coeffs = r.coeffs_in(main);
        let lr = r_coeffs[dr as usize].clone();
        // r := lc * r - lr * x^(dr-dq) * q
        let shift = Poly::var(&p.tower, &p.vars, main).pow(dr - dq)?;
        r = r.mul(&lc)?.sub(&lr.mul(&shift)?.mul(q)?)?;
    }
}

/// Substitute each listed variable by s^{w} times a fresh copy of itself,
/// introducing the new first variable `s_name`: the weighted substitution of
/// the Rees chart. `weights[i]` pairs a variable index of `g` with its
/// weight; unlisted variables pass through (weight 0).
pub fn weighted_substitute(g: &Poly, s_name: &str, weights: &[(usize, u32)]) -> Poly {
    let mut new_vars = vec![s_name.to_string()];
    new_vars.extend(g.vars().iter().cloned());
    let mut out = Poly::zero(g.tower(), &new_vars);
    for (m, c) in g.terms() {
        let mut sdeg = 0u32;
        for &(i, w) in weights {
            sdeg += w * m.0[i];
        }
        let mut e = vec![sdeg];
        e.extend(m.0.iter().copied());
        out = out
            .add(&Poly::monomial(g.tower(), &new_vars, Mono(e), &c))
            .expect("same frame");
    }
    out
}
