//! Internal value representation for field-tower elements.
//!
//! A tower is a base field (QQ or GF(p)) followed by a list of steps, each
//! either transcendental (adjoin an indeterminate, pass to its fraction field)
//! or algebraic (adjoin a root of a monic irreducible polynomial). An element
//! of the tower is a [`Val`] whose nesting depth matches the number of steps:
//!
//! * level 0: `Val::Q` over QQ, `Val::Fp` over GF(p);
//! * a transcendental step wraps the level below into `Val::Frac`, a reduced
//!   fraction of dense polynomials (coefficient index = exponent);
//! * an algebraic step of degree d wraps the level below into `Val::Ext`, a
//!   vector of exactly d coordinates with respect to the powers of the
//!   generator.
//!
//! All constructors normalize: fractions are gcd-reduced with monic
//! denominator, extension vectors are reduced modulo the minimal polynomial.
//! Structural equality of normalized values is therefore field equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Base field of a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    /// The rational numbers QQ.
    Rationals,
    /// The prime field GF(p).
    Prime(u64),
}

/// One extension step of a tower.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    /// Adjoin an indeterminate and pass to the fraction field.
    Transcendental { name: String },
    /// Adjoin a root of `minpoly`, a monic irreducible polynomial whose
    /// coefficients live one level down (dense, index = exponent, leading
    /// coefficient one).
    Algebraic { name: String, minpoly: Vec<Val> },
}

impl Step {
    pub fn name(&self) -> &str {
        match self {
            Step::Transcendental { name } => name,
            Step::Algebraic { name, .. } => name,
        }
    }
}

/// Tower description shared by all its elements.
#[derive(Debug, Clone, PartialEq)]
pub struct TowerData {
    pub base: Base,
    pub steps: Vec<Step>,
}

impl TowerData {
    /// Field characteristic: 0 for QQ-based towers, p for GF(p)-based ones.
    pub fn characteristic(&self) -> u64 {
        match self.base {
            Base::Rationals => 0,
            Base::Prime(p) => p,
        }
    }

    /// Number of extension steps.
    pub fn height(&self) -> usize {
        self.steps.len()
    }

    /// Total algebraic degree (product of the algebraic step degrees).
    pub fn algebraic_degree(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Transcendental { .. } => 1,
                Step::Algebraic { minpoly, .. } => minpoly.len() - 1,
            })
            .product()
    }

    /// Whether any step is transcendental.
    pub fn has_transcendental(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s, Step::Transcendental { .. }))
    }

    /// True iff the tower is a finite field (GF(p) base, algebraic steps only).
    pub fn is_finite(&self) -> bool {
        matches!(self.base, Base::Prime(_)) && !self.has_transcendental()
    }
}

/// Raw element value; see the module docs for the nesting invariants.
#[derive(Debug, Clone, PartialEq)]
pub enum Val {
    Q(BigRational),
    Fp(u64),
    /// Reduced fraction of dense polynomials over the level below. The
    /// numerator is trimmed (zero = empty vector), the denominator is monic
    /// and coprime to the numerator.
    Frac { num: Vec<Val>, den: Vec<Val> },
    /// Coordinates with respect to the generator powers; length equals the
    /// degree of the step's minimal polynomial.
    Ext(Vec<Val>),
}

/// Arithmetic context: a tower together with a nesting level (0 = base,
/// `tower.height()` = full tower). All value arguments must be at `level`.
#[derive(Clone, Copy)]
pub struct Lv<'a> {
    pub t: &'a TowerData,
    pub level: usize,
}

impl<'a> Lv<'a> {
    pub fn top(t: &'a TowerData) -> Self {
        Lv {
            t,
            level: t.steps.len(),
        }
    }

    pub fn down(self) -> Self {
        debug_assert!(self.level > 0);
        Lv {
            t: self.t,
            level: self.level - 1,
        }
    }

    /// The step entered when moving from `level - 1` to `level`.
    pub fn step(&self) -> &'a Step {
        &self.t.steps[self.level - 1]
    }

    fn p(&self) -> u64 {
        match self.t.base {
            Base::Prime(p) => p,
            Base::Rationals => unreachable!("prime arithmetic on rational base"),
        }
    }

    // ---- scalar constructors ----------------------------------------------

    pub fn zero(&self) -> Val {
        if self.level == 0 {
            match self.t.base {
                Base::Rationals => Val::Q(BigRational::zero()),
                Base::Prime(_) => Val::Fp(0),
            }
        } else {
            match self.step() {
                Step::Transcendental { .. } => Val::Frac {
                    num: Vec::new(),
                    den: vec![self.down().one()],
                },
                Step::Algebraic { minpoly, .. } => {
                    Val::Ext(vec![self.down().zero(); minpoly.len() - 1])
                }
            }
        }
    }

    pub fn one(&self) -> Val {
        self.embed_scalar(if self.level == 0 {
            match self.t.base {
                Base::Rationals => Val::Q(BigRational::one()),
                Base::Prime(_) => Val::Fp(1 % self.p()),
            }
        } else {
            self.down().one()
        })
    }

    /// Wrap a value from one level down into a constant at this level.
    pub fn embed_scalar(&self, v: Val) -> Val {
        if self.level == 0 {
            return v;
        }
        match self.step() {
            Step::Transcendental { .. } => {
                let num = if self.down().is_zero(&v) {
                    Vec::new()
                } else {
                    vec![v]
                };
                Val::Frac {
                    num,
                    den: vec![self.down().one()],
                }
            }
            Step::Algebraic { minpoly, .. } => {
                let d = minpoly.len() - 1;
                let mut coords = vec![self.down().zero(); d];
                coords[0] = v;
                Val::Ext(coords)
            }
        }
    }

    /// Embed a value from `from_level` up to this context's level.
    pub fn embed_from(&self, mut v: Val, from_level: usize) -> Val {
        debug_assert!(from_level <= self.level);
        for l in from_level + 1..=self.level {
            v = Lv { t: self.t, level: l }.embed_scalar(v);
        }
        v
    }

    pub fn from_i64(&self, n: i64) -> Val {
        let base = match self.t.base {
            Base::Rationals => Val::Q(BigRational::from_integer(BigInt::from(n))),
            Base::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Val::Fp(r)
            }
        };
        self.embed_from(base, 0)
    }

    /// The generator adjoined at step `idx` (0-based), as a value at this level.
    pub fn generator(&self, idx: usize) -> Val {
        debug_assert!(idx < self.level);
        let gl = Lv {
            t: self.t,
            level: idx + 1,
        };
        let g = match gl.step() {
            Step::Transcendental { .. } => Val::Frac {
                num: vec![gl.down().zero(), gl.down().one()],
                den: vec![gl.down().one()],
            },
            Step::Algebraic { minpoly, .. } => {
                let d = minpoly.len() - 1;
                let mut coords = vec![gl.down().zero(); d];
                if d > 1 {
                    coords[1] = gl.down().one();
                } else {
                    // degree-one step: the generator is -minpoly[0]
                    coords[0] = gl.down().neg(&minpoly[0]);
                }
                Val::Ext(coords)
            }
        };
        self.embed_from(g, idx + 1)
    }

    // ---- predicates -------------------------------------------------------

    pub fn is_zero(&self, v: &Val) -> bool {
        match v {
            Val::Q(q) => q.is_zero(),
            Val::Fp(n) => *n == 0,
            Val::Frac { num, .. } => num.is_empty(),
            Val::Ext(c) => c.iter().all(|x| self.down().is_zero(x)),
        }
    }

    pub fn is_one(&self, v: &Val) -> bool {
        self.eq(v, &self.one())
    }

    pub fn eq(&self, a: &Val, b: &Val) -> bool {
        a == b
    }

    // ---- ring operations --------------------------------------------------

    pub fn add(&self, a: &Val, b: &Val) -> Val {
        match (a, b) {
            (Val::Q(x), Val::Q(y)) => Val::Q(x + y),
            (Val::Fp(x), Val::Fp(y)) => Val::Fp((x + y) % self.p()),
            (Val::Frac { num: n1, den: d1 }, Val::Frac { num: n2, den: d2 }) => {
                let lo = self.down();
                // n1/d1 + n2/d2 = (n1 d2 + n2 d1) / (d1 d2)
                let num = lo.padd(&lo.pmul(n1, d2), &lo.pmul(n2, d1));
                let den = lo.pmul(d1, d2);
                self.make_frac(num, den)
            }
            (Val::Ext(x), Val::Ext(y)) => {
                let lo = self.down();
                Val::Ext(
                    x.iter()
                        .zip(y.iter())
                        .map(|(u, v)| lo.add(u, v))
                        .collect(),
                )
            }
            _ => unreachable!("mismatched value shapes"),
        }
    }

    pub fn neg(&self, a: &Val) -> Val {
        match a {
            Val::Q(x) => Val::Q(-x),
            Val::Fp(x) => {
                let p = self.p();
                Val::Fp(if *x == 0 { 0 } else { p - x })
            }
            Val::Frac { num, den } => Val::Frac {
                num: self.down().pneg(num),
                den: den.clone(),
            },
            Val::Ext(c) => Val::Ext(c.iter().map(|x| self.down().neg(x)).collect()),
        }
    }

    pub fn sub(&self, a: &Val, b: &Val) -> Val {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Val, b: &Val) -> Val {
        match (a, b) {
            (Val::Q(x), Val::Q(y)) => Val::Q(x * y),
            (Val::Fp(x), Val::Fp(y)) => {
                Val::Fp(((*x as u128 * *y as u128) % self.p() as u128) as u64)
            }
            (Val::Frac { num: n1, den: d1 }, Val::Frac { num: n2, den: d2 }) => {
                let lo = self.down();
                self.make_frac(lo.pmul(n1, n2), lo.pmul(d1, d2))
            }
            (Val::Ext(x), Val::Ext(y)) => {
                let lo = self.down();
                let prod = lo.pmul(x, y);
                self.reduce_ext(prod)
            }
            _ => unreachable!("mismatched value shapes"),
        }
    }

    /// Multiplicative inverse; panics on zero (callers check first).
    pub fn inv(&self, a: &Val) -> Val {
        assert!(!self.is_zero(a), "inverse of zero");
        match a {
            Val::Q(x) => Val::Q(x.recip()),
            Val::Fp(x) => Val::Fp(mod_inv(*x, self.p())),
            Val::Frac { num, den } => self.make_frac(den.clone(), num.clone()),
            Val::Ext(c) => {
                let lo = self.down();
                let m = match self.step() {
                    Step::Algebraic { minpoly, .. } => minpoly,
                    _ => unreachable!(),
                };
                // Extended Euclid: u * c + v * m = 1 in (level below)[x].
                let (g, u, _v) = lo.pextgcd(c, m);
                assert!(
                    g.len() == 1,
                    "minimal polynomial shares a factor with a nonzero element"
                );
                let ginv = lo.inv(&g[0]);
                let u = lo.pscale(&u, &ginv);
                self.reduce_ext(u)
            }
        }
    }

    pub fn div(&self, a: &Val, b: &Val) -> Val {
        self.mul(a, &self.inv(b))
    }

    pub fn pow_u64(&self, a: &Val, mut e: u64) -> Val {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn pow_i64(&self, a: &Val, e: i64) -> Val {
        if e >= 0 {
            self.pow_u64(a, e as u64)
        } else {
            self.pow_u64(&self.inv(a), (-e) as u64)
        }
    }

    // ---- normalization ----------------------------------------------------

    /// Build a normalized fraction at this (transcendental) level.
    pub fn make_frac(&self, num: Vec<Val>, den: Vec<Val>) -> Val {
        let lo = self.down();
        let num = lo.ptrim(num);
        let den = lo.ptrim(den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Val::Frac {
                num,
                den: vec![lo.one()],
            };
        }
        let g = lo.pgcd(&num, &den);
        let (num, den) = if g.len() > 1 {
            (lo.pdivexact(&num, &g), lo.pdivexact(&den, &g))
        } else {
            (num, den)
        };
        // make the denominator monic
        let lc = den.last().unwrap().clone();
        if lo.is_one(&lc) {
            Val::Frac { num, den }
        } else {
            let ilc = lo.inv(&lc);
            Val::Frac {
                num: lo.pscale(&num, &ilc),
                den: lo.pscale(&den, &ilc),
            }
        }
    }

    /// Reduce a coordinate vector modulo the step's minimal polynomial and pad
    /// to the fixed length.
    pub fn reduce_ext(&self, coords: Vec<Val>) -> Val {
        let m = match self.step() {
            Step::Algebraic { minpoly, .. } => minpoly,
            _ => unreachable!(),
        };
        let d = m.len() - 1;
        let lo = self.down();
        let mut r = lo.prem(&coords, m);
        r.resize(d, lo.zero());
        Val::Ext(r)
    }

    // ---- dense univariate polynomial helpers ------------------------------
    //
    // Coefficient vectors are at *this* level, index = exponent, trimmed
    // (no leading zeros) unless stated otherwise.

    pub fn ptrim(&self, mut v: Vec<Val>) -> Vec<Val> {
        while v.last().map_or(false, |c| self.is_zero(c)) {
            v.pop();
        }
        v
    }

    pub fn padd(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| self.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| self.zero());
            out.push(self.add(&x, &y));
        }
        self.ptrim(out)
    }

    pub fn pneg(&self, a: &[Val]) -> Vec<Val> {
        a.iter().map(|c| self.neg(c)).collect()
    }

    pub fn psub(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        self.padd(a, &self.pneg(b))
    }

    pub fn pscale(&self, a: &[Val], c: &Val) -> Vec<Val> {
        if self.is_zero(c) {
            return Vec::new();
        }
        self.ptrim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn pmul(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        self.ptrim(out)
    }

    /// Quotient and remainder of dense division; the divisor must be nonzero.
    pub fn pdivrem(&self, a: &[Val], b: &[Val]) -> (Vec<Val>, Vec<Val>) {
        let b = self.ptrim(b.to_vec());
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = self.ptrim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![self.zero(); r.len() - b.len() + 1];
        let lcinv = self.inv(b.last().unwrap());
        while r.len() >= b.len() {
            let k = r.len() - b.len();
            let c = self.mul(r.last().unwrap(), &lcinv);
            q[k] = c.clone();
            for (j, bc) in b.iter().enumerate() {
                let t = self.mul(bc, &c);
                r[k + j] = self.sub(&r[k + j], &t);
            }
            r = self.ptrim(r);
            if r.is_empty() {
                break;
            }
        }
        (self.ptrim(q), r)
    }

    pub fn prem(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        self.pdivrem(a, b).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn pdivexact(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        let (q, r) = self.pdivrem(a, b);
        assert!(r.is_empty(), "inexact polynomial division");
        q
    }

    pub fn pmonic(&self, a: &[Val]) -> Vec<Val> {
        let a = self.ptrim(a.to_vec());
        if a.is_empty() {
            return a;
        }
        let lc = a.last().unwrap();
        if self.is_one(lc) {
            a
        } else {
            let i = self.inv(lc);
            self.pscale(&a, &i)
        }
    }

    /// Monic greatest common divisor (Euclid).
    pub fn pgcd(&self, a: &[Val], b: &[Val]) -> Vec<Val> {
        let mut x = self.ptrim(a.to_vec());
        let mut y = self.ptrim(b.to_vec());
        while !y.is_empty() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        self.pmonic(&x)
    }

    /// Extended Euclid: returns (g, u, v) with u*a + v*b = g (g not normalized
    /// monic; may be a unit polynomial).
    pub fn pextgcd(&self, a: &[Val], b: &[Val]) -> (Vec<Val>, Vec<Val>, Vec<Val>) {
        let mut r0 = self.ptrim(a.to_vec());
        let mut r1 = self.ptrim(b.to_vec());
        let mut s0 = vec![self.one()];
        let mut s1: Vec<Val> = Vec::new();
        let mut t0: Vec<Val> = Vec::new();
        let mut t1 = vec![self.one()];
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1);
            let ns = self.psub(&s0, &self.pmul(&q, &s1));
            let nt = self.psub(&t0, &self.pmul(&q, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        (r0, s0, t0)
    }

    pub fn pderiv(&self, a: &[Val]) -> Vec<Val> {
        if a.len() <= 1 {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(a.len() - 1);
        for (i, c) in a.iter().enumerate().skip(1) {
            let k = self.from_i64(i as i64);
            out.push(self.mul(c, &k));
        }
        self.ptrim(out)
    }

    pub fn peval(&self, a: &[Val], x: &Val) -> Val {
        let mut acc = self.zero();
        for c in a.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// `a^e mod m` for dense polynomials, exponent given in binary big-endian
    /// bits (supports huge exponents like q^d).
    pub fn pmodpow_bits(&self, a: &[Val], bits: &[bool], m: &[Val]) -> Vec<Val> {
        let mut acc = vec![self.one()];
        let a = self.prem(a, m);
        for &bit in bits {
            acc = self.prem(&self.pmul(&acc, &acc), m);
            if bit {
                acc = self.prem(&self.pmul(&acc, &a), m);
            }
        }
        acc
    }
}

/// Modular inverse in GF(p) for prime p.
fn mod_inv(a: u64, p: u64) -> u64 {
    // extended Euclid over i128
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        let r = r0 - q * r1;
        r0 = r1;
        r1 = r;
        let t = t0 - q * t1;
        t0 = t1;
        t1 = t;
    }
    assert!(r0 == 1, "not invertible mod p");
    t0.rem_euclid(p as i128) as u64
}

/// Render a rational number without a superfluous denominator.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else if q.is_negative() {
        format!("-{}/{}", -q.numer(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
