//! Dense univariate polynomials over a field tower.
//!
//! Coefficient index = exponent; the vector carries no leading zeros, so the
//! zero polynomial is the empty vector. These are the workhorses for minimal
//! polynomials, factorization, and the univariate slices produced by the
//! blow-up machinery.

use crate::error::{Error, Result};
use crate::exactfield::val::Val;
use crate::exactfield::{FieldElem, Tower};

/// A univariate polynomial over a tower.
#[derive(Clone, PartialEq)]
pub struct UPoly {
    pub(crate) tower: Tower,
    pub(crate) coeffs: Vec<Val>,
}

impl std::fmt::Debug for UPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl UPoly {
    pub fn zero(tower: &Tower) -> UPoly {
        UPoly {
            tower: tower.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(tower: &Tower) -> UPoly {
        UPoly {
            tower: tower.clone(),
            coeffs: vec![tower.lv().one()],
        }
    }

    /// The monomial x.
    pub fn x(tower: &Tower) -> UPoly {
        UPoly {
            tower: tower.clone(),
            coeffs: vec![tower.lv().zero(), tower.lv().one()],
        }
    }

    /// Build from low-to-high coefficients.
    pub fn from_elems(tower: &Tower, coeffs: Vec<FieldElem>) -> Result<UPoly> {
        let mut vals = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if c.tower() != tower {
                return Err(Error::TowerMismatch);
            }
            vals.push(c.val);
        }
        Ok(UPoly {
            tower: tower.clone(),
            coeffs: tower.lv().ptrim(vals),
        })
    }

    pub(crate) fn from_vals(tower: &Tower, coeffs: Vec<Val>) -> UPoly {
        let coeffs = tower.lv().ptrim(coeffs);
        UPoly {
            tower: tower.clone(),
            coeffs,
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; panics on the zero polynomial (checked by callers).
    pub fn degree(&self) -> usize {
        assert!(!self.coeffs.is_empty(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        let v = self
            .coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tower.lv().zero());
        self.tower.elem(v)
    }

    pub fn leading_coeff(&self) -> FieldElem {
        assert!(!self.coeffs.is_empty());
        self.tower.elem(self.coeffs.last().unwrap().clone())
    }

    pub fn is_monic(&self) -> bool {
        !self.coeffs.is_empty() && self.tower.lv().is_one(self.coeffs.last().unwrap())
    }

    pub fn monic(&self) -> Result<UPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pmonic(&self.coeffs),
        })
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().padd(&self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().psub(&self.coeffs, &other.coeffs),
        }
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pneg(&self.coeffs),
        }
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pmul(&self.coeffs, &other.coeffs),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pscale(&self.coeffs, &c.val),
        }
    }

    pub fn divrem(&self, other: &UPoly) -> Result<(UPoly, UPoly)> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (q, r) = self.tower.lv().pdivrem(&self.coeffs, &other.coeffs);
        Ok((
            UPoly {
                tower: self.tower.clone(),
                coeffs: q,
            },
            UPoly {
                tower: self.tower.clone(),
                coeffs: r,
            },
        ))
    }

    pub fn rem(&self, other: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(other)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, other: &UPoly) -> Result<UPoly> {
        let (q, r) = self.divrem(other)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other
            .divrem(self)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pgcd(&self.coeffs, &other.coeffs),
        }
    }

    pub fn derivative(&self) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            coeffs: self.tower.lv().pderiv(&self.coeffs),
        }
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.tower.elem(self.tower.lv().peval(&self.coeffs, &x.val))
    }

    pub fn pow(&self, mut e: u64) -> UPoly {
        let mut acc = UPoly::one(&self.tower);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Substitute x -> x + c.
    pub fn shift(&self, c: &FieldElem) -> UPoly {
        let lv = self.tower.lv();
        let mut acc: Vec<Val> = Vec::new();
        // Horner on x + c
        for coef in self.coeffs.iter().rev() {
            // acc = acc * (x + c) + coef
            let mut next = vec![lv.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = lv.add(&next[i + 1], a);
                next[i] = lv.add(&next[i], &lv.mul(a, &c.val));
            }
            next[0] = lv.add(&next[0], coef);
            acc = lv.ptrim(next);
        }
        UPoly {
            tower: self.tower.clone(),
            coeffs: acc,
        }
    }

    /// Substitute x -> x^k.
    pub fn inflate(&self, k: usize) -> UPoly {
        let lv = self.tower.lv();
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut out = vec![lv.zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        UPoly {
            tower: self.tower.clone(),
            coeffs: lv.ptrim(out),
        }
    }

    /// If every exponent is divisible by k, substitute x^k -> x.
    pub fn deflate(&self, k: usize) -> Option<UPoly> {
        let lv = self.tower.lv();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % k != 0 && !lv.is_zero(c) {
                return None;
            }
        }
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % k == 0 {
                out.push(c.clone());
            }
        }
        Some(UPoly {
            tower: self.tower.clone(),
            coeffs: lv.ptrim(out),
        })
    }

    /// Migrate to a taller tower of which the current one is a prefix.
    pub fn embed(&self, tower: &Tower) -> Result<UPoly> {
        let from = self.tower.height();
        if tower.height() < from
            || tower.data().base != self.tower.data().base
            || tower.data().steps[..from] != self.tower.data().steps[..]
        {
            return Err(Error::TowerMismatch);
        }
        Ok(UPoly {
            tower: tower.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| tower.embed_val(c, from))
                .collect(),
        })
    }

    /// Render with the given variable name (canonical: descending exponents).
    pub fn to_string_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let lv = self.tower.lv();
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if lv.is_zero(c) {
                continue;
            }
            let cs = self.tower.elem(c.clone()).render();
            let part = if i == 0 {
                cs
            } else {
                let xs = if i == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{i}")
                };
                if cs == "1" {
                    xs
                } else if cs == "-1" {
                    format!("-{xs}")
                } else if cs.contains('+') || cs.contains('-') || cs.contains('/') {
                    format!("({cs})*{xs}")
                } else {
                    format!("{cs}*{xs}")
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

    /// Squarefree decomposition: pairwise coprime squarefree factors with
    /// multiplicities, product (times the leading unit) equal to the input.
    /// Characteristic-p aware (derivative-zero parts are deflated through
    /// Frobenius).
    pub fn squarefree_decomposition(&self) -> Result<Vec<(UPoly, u32)>> {
        crate::exactfield::factor::squarefree_decomposition(self)
    }

    /// Full irreducible factorization over the tower; see the factor module.
    pub fn factor(&self) -> Result<Vec<(UPoly, u32)>> {
        crate::exactfield::factor::factor(self)
    }
}
