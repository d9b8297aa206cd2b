//! Univariate factorization over field towers.
//!
//! Entry points: [`squarefree_decomposition`], [`factor`], [`is_irreducible`].
//! Dispatch by tower shape:
//!
//! * QQ — modular factorization at a good prime, Hensel lifting to a Mignotte
//!   bound, subset recombination ([`zassenhaus`]);
//! * finite towers (GF(p) plus algebraic steps) — distinct-degree plus
//!   equal-degree splitting ([`cz`]);
//! * topmost step transcendental, K(t) — evaluation at a good place, residue
//!   factorization, q(t)-adic Hensel lifting, recombination ([`ffield`]);
//! * topmost step algebraic over an infinite subfield — norm reduction to the
//!   subfield ([`trager`]).
//!
//! In characteristic p, derivative-zero polynomials are deflated through
//! Frobenius (g(x^p) with coefficientwise p-th roots) before dispatch, so
//! inseparable inputs like x^2 + t over GF(2)(t) are handled.

mod cz;
mod ffield;
mod trager;
mod zassenhaus;

use crate::error::{Error, Result};
use crate::exactfield::val::Step;
use crate::exactfield::{roots, UPoly};

/// Squarefree decomposition: pairwise coprime monic squarefree factors with
/// multiplicities whose product times the leading coefficient is the input.
pub fn squarefree_decomposition(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = sqfree_monic(&f.monic()?)?;
    out.sort_by(|a, b| cmp_factors(&a.0, &b.0));
    Ok(out)
}

/// Full irreducible factorization: monic irreducible factors with
/// multiplicities whose product times the leading coefficient is the input.
pub fn factor(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let monic = f.monic()?;
    if monic.degree() == 0 {
        return Ok(Vec::new());
    }
    let mut out: Vec<(UPoly, u32)> = Vec::new();
    for (g, e) in sqfree_monic(&monic)? {
        for h in factor_squarefree(&g)? {
            out.push((h, e));
        }
    }
    out.sort_by(|a, b| cmp_factors(&a.0, &b.0));
    debug_assert!({
        let mut prod = UPoly::one(f.tower());
        for (h, e) in &out {
            prod = prod.mul(&h.pow(*e as u64));
        }
        prod == monic
    });
    Ok(out)
}

/// True iff the monic normalization of `f` is irreducible.
pub fn is_irreducible(f: &UPoly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.monic()?.degree() == 0 {
        return Ok(false);
    }
    let facs = factor(f)?;
    Ok(facs.len() == 1 && facs[0].1 == 1)
}

/// Deterministic factor ordering: degree, then rendered text.
fn cmp_factors(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.to_string_var("x").cmp(&b.to_string_var("x")))
}

/// Coefficientwise p-th root: s with s(x)^p = r(x^p), if every coefficient
/// has a p-th root.
fn coeff_pth_root(r: &UPoly, p: u64) -> Result<Option<UPoly>> {
    let lv = r.tower().lv();
    let mut out = Vec::with_capacity(r.coeffs.len());
    for c in &r.coeffs {
        match roots::pth_root_val(lv, c, p)? {
            Some(x) => out.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(UPoly::from_vals(r.tower(), out)))
}

/// Characteristic-aware squarefree decomposition of a monic polynomial.
fn sqfree_monic(f: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let p = f.tower().characteristic();
    let fd = f.derivative();
    if p > 0 && fd.is_zero() {
        return sqfree_deflate(f, p);
    }
    if p == 0 {
        return Ok(yun(f));
    }
    // Musser over characteristic p: multiplicities prime to p come out of the
    // loop; the p-divisible part survives in c with zero derivative.
    let mut out = Vec::new();
    let mut c = f.gcd(&fd);
    let mut w = f.div_exact(&c)?;
    let mut i = 1u32;
    while w.degree() > 0 {
        let y = w.gcd(&c);
        let z = w.div_exact(&y)?;
        if z.degree() > 0 {
            out.push((z, i));
        }
        c = c.div_exact(&y)?;
        w = y;
        i += 1;
    }
    if c.degree() > 0 {
        out.extend(sqfree_deflate(&c, p)?);
    }
    Ok(out)
}

/// Squarefree decomposition of a derivative-zero polynomial f = g(x^p).
fn sqfree_deflate(f: &UPoly, p: u64) -> Result<Vec<(UPoly, u32)>> {
    let g = f
        .deflate(p as usize)
        .ok_or_else(|| Error::Internal("derivative-zero polynomial fails to deflate".into()))?;
    let mut out = Vec::new();
    for (r, e) in sqfree_monic(&g)? {
        if let Some(s) = coeff_pth_root(&r, p)? {
            // s^p = r(x^p); squarefreeness carries over through the
            // coefficient Frobenius.
            out.push((s, p as u32 * e));
        } else {
            // Mixed coefficients: split into irreducibles so that hidden
            // p-th-power factors (like x^2 + t^2 inside a product) are
            // separated correctly.
            for q in factor_squarefree(&r)? {
                if let Some(s) = coeff_pth_root(&q, p)? {
                    out.push((s, p as u32 * e));
                } else {
                    out.push((q.inflate(p as usize), e));
                }
            }
        }
    }
    Ok(out)
}

/// Yun's algorithm (characteristic zero).
fn yun(f: &UPoly) -> Vec<(UPoly, u32)> {
    let fd = f.derivative();
    let g = f.gcd(&fd);
    if g.degree() == 0 {
        return vec![(f.clone(), 1)];
    }
    let mut out = Vec::new();
    let mut w = f.div_exact(&g).expect("gcd divides");
    let mut y = fd.div_exact(&g).expect("gcd divides");
    let mut i = 1u32;
    loop {
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            if w.degree() > 0 {
                out.push((w, i));
            }
            break;
        }
        let h = w.gcd(&z);
        if h.degree() > 0 {
            out.push((h.clone(), i));
        }
        w = w.div_exact(&h).expect("gcd divides");
        y = z.div_exact(&h).expect("gcd divides");
        i += 1;
        if w.degree() == 0 {
            break;
        }
    }
    out
}

/// Irreducible factors of a monic squarefree polynomial.
fn factor_squarefree(g: &UPoly) -> Result<Vec<UPoly>> {
    if g.degree() == 0 {
        return Ok(Vec::new());
    }
    if g.degree() == 1 {
        return Ok(vec![g.clone()]);
    }
    let p = g.tower().characteristic();
    if p > 0 && g.derivative().is_zero() {
        // Inseparable squarefree input: deflate, factor, re-inflate. The
        // coefficientwise root must fail for every factor, otherwise the
        // input was not squarefree.
        let h = g
            .deflate(p as usize)
            .ok_or_else(|| Error::Internal("derivative-zero polynomial fails to deflate".into()))?;
        let mut out = Vec::new();
        for r in factor_squarefree(&h)? {
            if coeff_pth_root(&r, p)?.is_some() {
                return Err(Error::Internal(
                    "squarefree input produced a p-th-power factor".into(),
                ));
            }
            out.push(r.inflate(p as usize));
        }
        return Ok(out);
    }
    if p > 0 {
        // A squarefree polynomial can still mix separable and inseparable
        // irreducible factors; split them apart, since the dispatch targets
        // below require a separable input (nonzero discriminant).
        let w = g.gcd(&g.derivative());
        if w.degree() > 0 {
            let mut out = factor_squarefree(&w)?;
            out.extend(factor_squarefree(&g.div_exact(&w)?)?);
            return Ok(out);
        }
    }
    let tower = g.tower();
    if tower.height() == 0 {
        return match tower.characteristic() {
            0 => zassenhaus::factor_squarefree_qq(g),
            _ => cz::factor_squarefree_finite(g),
        };
    }
    if tower.is_finite() {
        return cz::factor_squarefree_finite(g);
    }
    match tower.data().steps.last().unwrap() {
        Step::Transcendental { .. } => ffield::factor_squarefree_function_field(g),
        Step::Algebraic { .. } => trager::factor_squarefree_extension(g),
    }
}
