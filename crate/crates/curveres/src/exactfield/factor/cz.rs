//! Factorization over finite towers (GF(p) with algebraic steps on top):
//! distinct-degree decomposition followed by probabilistic equal-degree
//! splitting. Odd characteristic splits with r^((q^d-1)/2) - 1; characteristic
//! two uses the trace map over GF(2). Randomness comes from a fixed-seed
//! ChaCha stream, so results are deterministic; the caller sorts factors
//! canonically anyway.

use num::bigint::BigUint;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactfield::val::{Lv, Val};
use crate::exactfield::UPoly;

/// Irreducible factors of a monic squarefree polynomial over a finite tower.
pub(super) fn factor_squarefree_finite(g: &UPoly) -> Result<Vec<UPoly>> {
    let (p, d) = g
        .tower()
        .finite_size()
        .ok_or_else(|| Error::Internal("finite-field factorization on an infinite tower".into()))?;
    let q = BigUint::from(p).pow(d as u32);
    let lv = g.tower().lv();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);

    let mut out: Vec<UPoly> = Vec::new();
    // Distinct-degree: h runs through x^(q^d) mod g.
    let mut rest = g.clone();
    let mut h = UPoly::x(g.tower()).rem(&rest)?;
    let mut deg = 1usize;
    while rest.degree() >= 2 * deg {
        h = UPoly::from_vals(
            g.tower(),
            lv.pmodpow_bits(&h.coeffs, &big_bits(&q), &rest.coeffs),
        );
        let split = h.sub(&UPoly::x(g.tower())).gcd(&rest);
        if split.degree() > 0 {
            equal_degree(&split, deg, p, d, &q, &mut rng, &mut out)?;
            rest = rest.div_exact(&split)?;
            h = h.rem(&rest)?;
        }
        deg += 1;
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    Ok(out)
}

/// Split a product of distinct irreducibles all of degree `d0`.
fn equal_degree(
    f: &UPoly,
    d0: usize,
    p: u64,
    ext_deg: usize,
    q: &BigUint,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<UPoly>,
) -> Result<()> {
    if f.degree() == d0 {
        out.push(f.clone());
        return Ok(());
    }
    let lv = f.tower().lv();
    loop {
        let r = random_poly(f.tower().lv(), f.degree(), rng);
        let r = UPoly::from_vals(f.tower(), r).rem(f)?;
        if r.is_zero() || r.degree() == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // Trace over GF(2): sum of r^(2^i) for i < m*d0 where q^d0 = 2^(m*d0).
            let m = ext_deg * d0;
            let mut term = r.clone();
            let mut acc = r.clone();
            for _ in 1..m {
                term = term.mul(&term).rem(f)?;
                acc = acc.add(&term);
            }
            acc
        } else {
            // r^((q^d0 - 1)/2) - 1
            let e = (q.pow(d0 as u32) - BigUint::one()) >> 1;
            let s = UPoly::from_vals(f.tower(), lv.pmodpow_bits(&r.coeffs, &big_bits(&e), &f.coeffs));
            s.sub(&UPoly::one(f.tower()))
        };
        let g1 = candidate.gcd(f);
        if g1.degree() > 0 && g1.degree() < f.degree() {
            equal_degree(&g1, d0, p, ext_deg, q, rng, out)?;
            equal_degree(&f.div_exact(&g1)?, d0, p, ext_deg, q, rng, out)?;
            return Ok(());
        }
    }
}

/// Exponent bits, most significant first, as consumed by `pmodpow_bits`.
fn big_bits(n: &BigUint) -> Vec<bool> {
    if n.is_zero() {
        return Vec::new();
    }
    let len = n.bits();
    (0..len).rev().map(|i| n.bit(i)).collect()
}

/// A uniformly random element of a finite tower level.
pub(crate) fn random_val(lv: Lv<'_>, rng: &mut ChaCha8Rng) -> Val {
    use crate::exactfield::val::Step;
    if lv.level == 0 {
        let p = lv.t.characteristic();
        return Val::Fp(rng.gen_range(0..p));
    }
    match lv.step() {
        Step::Algebraic { minpoly, .. } => {
            let coords = (0..minpoly.len() - 1)
                .map(|_| random_val(lv.down(), rng))
                .collect();
            Val::Ext(coords)
        }
        Step::Transcendental { .. } => {
            unreachable!("random elements are only drawn over finite towers")
        }
    }
}

/// Dense random polynomial of degree < n.
fn random_poly(lv: Lv<'_>, n: usize, rng: &mut ChaCha8Rng) -> Vec<Val> {
    (0..n).map(|_| random_val(lv, rng)).collect()
}
