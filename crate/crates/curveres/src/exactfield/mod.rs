//! Exact arithmetic in small field towers.
//!
//! Supported towers: base QQ or GF(p), at most one transcendental step, and
//! algebraic steps whose total degree does not exceed
//! [`MAX_ALGEBRAIC_DEGREE`]. This module provides:
//!
//! * [`Tower`] / [`FieldElem`] — tower construction and field arithmetic with
//!   canonical normal forms (structural equality is field equality);
//! * [`UPoly`] — dense univariate polynomials over a tower, with gcd,
//!   squarefree decomposition and full irreducible factorization;
//! * p-th and n-th roots, Frobenius-aware over imperfect fields;
//! * the textual field descriptor (`QQ`, `GF(2)(t)[w]/(w^2+t)`, ...) with a
//!   bit-exact print/parse round trip.

pub mod descriptor;
pub mod factor;
pub mod roots;
pub mod upoly;
pub(crate) mod val;

use std::fmt;
use std::sync::Arc;


use num::rational::BigRational;

use crate::error::{Error, Result};
pub use upoly::UPoly;
pub use val::{Base, Step, TowerData};
use val::{Lv, Val};

/// Cap on the product of the algebraic step degrees. Keeps every search in the
/// engine (linear algebra over the tower, factorization, localization) at desk
/// scale; larger requests are reported, never silently truncated.
pub const MAX_ALGEBRAIC_DEGREE: usize = 32;

/// Largest supported prime base field.
pub const MAX_PRIME: u64 = 1 << 20;

/// A field tower; cheap to clone and share.
#[derive(Clone)]
pub struct Tower(Arc<TowerData>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower({})", self.descriptor())
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Tower {}

impl Tower {
    /// The rational numbers QQ.
    pub fn rationals() -> Tower {
        Tower(Arc::new(TowerData {
            base: Base::Rationals,
            steps: Vec::new(),
        }))
    }

    /// The prime field GF(p); p must be prime and at most [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Tower> {
        if p < 2 || p > MAX_PRIME || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
        }
        Ok(Tower(Arc::new(TowerData {
            base: Base::Prime(p),
            steps: Vec::new(),
        })))
    }

    pub(crate) fn from_data(d: TowerData) -> Tower {
        Tower(Arc::new(d))
    }

    pub(crate) fn data(&self) -> &TowerData {
        &self.0
    }

    pub(crate) fn lv(&self) -> Lv<'_> {
        Lv::top(&self.0)
    }

    /// Field characteristic (0 for QQ-based towers).
    pub fn characteristic(&self) -> u64 {
        self.0.characteristic()
    }

    /// Number of extension steps.
    pub fn height(&self) -> usize {
        self.0.height()
    }

    /// Names of the adjoined generators, bottom to top.
    pub fn generator_names(&self) -> Vec<&str> {
        self.0.steps.iter().map(|s| s.name()).collect()
    }

    /// True iff the tower is a finite field.
    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    /// Number of elements of a finite tower, as (p, exponent).
    pub fn finite_size(&self) -> Option<(u64, usize)> {
        if !self.is_finite() {
            return None;
        }
        let p = self.characteristic();
        let mut e = 1usize;
        for s in &self.0.steps {
            if let Step::Algebraic { minpoly, .. } = s {
                e *= minpoly.len() - 1;
            }
        }
        Some((p, e))
    }

    /// Adjoin an indeterminate `name`, passing to the fraction field.
    /// At most one transcendental step per tower.
    pub fn add_transcendental(&self, name: &str) -> Result<Tower> {
        if self.0.has_transcendental() {
            return Err(Error::UnsupportedTower(format!(
                "a second transcendental step ({name}) over {}",
                self.descriptor()
            )));
        }
        self.check_name(name)?;
        let mut d = (*self.0).clone();
        d.steps.push(Step::Transcendental {
            name: name.to_string(),
        });
        Ok(Tower(Arc::new(d)))
    }

    /// Adjoin a root of `minpoly` (a univariate polynomial over this tower).
    /// The polynomial is checked for irreducibility; the monic normalization
    /// is stored.
    pub fn add_algebraic(&self, name: &str, minpoly: &UPoly) -> Result<Tower> {
        let f = minpoly.monic()?;
        if f.degree() < 1 {
            return Err(Error::InvalidInput(
                "minimal polynomial must have degree at least one".into(),
            ));
        }
        if !factor::is_irreducible(&f)? {
            return Err(Error::ReducibleMinimalPolynomial(f.to_string_var(name)));
        }
        self.add_algebraic_unchecked(name, &f)
    }

    /// Adjoin a root of a polynomial already known to be monic irreducible.
    pub(crate) fn add_algebraic_unchecked(&self, name: &str, minpoly: &UPoly) -> Result<Tower> {
        self.check_name(name)?;
        let deg = minpoly.degree();
        if self.0.algebraic_degree() * deg > MAX_ALGEBRAIC_DEGREE {
            return Err(Error::UnsupportedTower(format!(
                "algebraic degree {} exceeds the cap {}",
                self.0.algebraic_degree() * deg,
                MAX_ALGEBRAIC_DEGREE
            )));
        }
        let mut d = (*self.0).clone();
        d.steps.push(Step::Algebraic {
            name: name.to_string(),
            minpoly: minpoly.coeffs.clone(),
        });
        Ok(Tower(Arc::new(d)))
    }

    fn check_name(&self, name: &str) -> Result<()> {
        if name.is_empty()
            || !name.chars().next().unwrap().is_alphabetic()
            || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
        {
            return Err(Error::InvalidInput(format!("bad generator name '{name}'")));
        }
        if self.0.steps.iter().any(|s| s.name() == name) {
            return Err(Error::InvalidInput(format!(
                "generator name '{name}' already used"
            )));
        }
        Ok(())
    }

    // ---- element constructors --------------------------------------------

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            tower: self.clone(),
            val: self.lv().zero(),
        }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem {
            tower: self.clone(),
            val: self.lv().one(),
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        FieldElem {
            tower: self.clone(),
            val: self.lv().from_i64(n),
        }
    }

    /// Embed a rational number; only valid over QQ-based towers.
    pub fn from_rational(&self, q: BigRational) -> Result<FieldElem> {
        match self.0.base {
            Base::Rationals => Ok(FieldElem {
                tower: self.clone(),
                val: self.lv().embed_from(Val::Q(q), 0),
            }),
            Base::Prime(_) => Err(Error::InvalidInput(
                "rational literals require a QQ-based tower".into(),
            )),
        }
    }

    /// The generator adjoined at step `idx` (0-based, bottom to top).
    pub fn generator(&self, idx: usize) -> Result<FieldElem> {
        if idx >= self.height() {
            return Err(Error::InvalidInput(format!("no generator at step {idx}")));
        }
        Ok(FieldElem {
            tower: self.clone(),
            val: self.lv().generator(idx),
        })
    }

    /// Look up a generator by name.
    pub fn generator_by_name(&self, name: &str) -> Option<FieldElem> {
        let idx = self.0.steps.iter().position(|s| s.name() == name)?;
        Some(FieldElem {
            tower: self.clone(),
            val: self.lv().generator(idx),
        })
    }

    /// Canonical textual descriptor, e.g. `GF(2)(t)[w]/(w^2+t)`.
    pub fn descriptor(&self) -> String {
        descriptor::print(self)
    }

    /// Parse a canonical descriptor.
    pub fn parse_descriptor(text: &str) -> Result<Tower> {
        descriptor::parse(text)
    }

    /// Embed an element of a lower tower into this one. The lower tower must
    /// be a prefix of this tower.
    pub fn embed(&self, e: &FieldElem) -> Result<FieldElem> {
        let eh = e.tower.height();
        if self.height() < eh
            || self.0.base != e.tower.0.base
            || self.0.steps[..eh] != e.tower.0.steps[..]
        {
            return Err(Error::TowerMismatch);
        }
        Ok(FieldElem {
            tower: self.clone(),
            val: self.lv().embed_from(e.val.clone(), eh),
        })
    }

    pub(crate) fn elem(&self, val: Val) -> FieldElem {
        FieldElem {
            tower: self.clone(),
            val,
        }
    }

    /// Embed a raw value from a prefix tower of height `from_height`.
    pub(crate) fn embed_val(&self, v: &Val, from_height: usize) -> Val {
        self.lv().embed_from(v.clone(), from_height)
    }
}

/// An element of a field tower.
#[derive(Clone, PartialEq)]
pub struct FieldElem {
    tower: Tower,
    pub(crate) val: Val,
}

impl FieldElem {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.tower.lv().is_zero(&self.val)
    }

    pub fn is_one(&self) -> bool {
        self.tower.lv().is_one(&self.val)
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.tower == other.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.tower.elem(self.tower.lv().add(&self.val, &other.val)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.tower.elem(self.tower.lv().sub(&self.val, &other.val)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.tower.elem(self.tower.lv().mul(&self.val, &other.val)))
    }

    pub fn neg(&self) -> FieldElem {
        self.tower.elem(self.tower.lv().neg(&self.val))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.tower.elem(self.tower.lv().inv(&self.val)))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.tower.elem(self.tower.lv().div(&self.val, &other.val)))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.tower.elem(self.tower.lv().pow_i64(&self.val, e)))
    }

    /// p-th root in characteristic p, if one exists. Computed roots are
    /// verified by re-exponentiation before being returned.
    pub fn pth_root(&self) -> Result<Option<FieldElem>> {
        roots::pth_root(self)
    }

    /// n-th root, if one exists. Handles the characteristic-p part by
    /// repeated p-th roots, the prime-to-p part by direct extraction.
    pub fn nth_root(&self, n: u64) -> Result<Option<FieldElem>> {
        roots::nth_root(self, n)
    }

    /// Render as text (used by the canonical polynomial printer).
    pub fn render(&self) -> String {
        descriptor::render_elem(self)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Deterministic primality test for u64 (trial division; inputs are small).
pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

