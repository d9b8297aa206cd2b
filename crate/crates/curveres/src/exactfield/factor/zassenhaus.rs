//! Factorization over the rationals: reduce to a primitive integer
//! polynomial, factor modulo a good prime, Hensel-lift the modular factors
//! past twice the Mignotte coefficient bound, and recombine subsets.

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactfield::val::Val;
use crate::exactfield::{is_prime, Tower, UPoly};

/// Irreducible factors of a monic squarefree polynomial over QQ.
pub(super) fn factor_squarefree_qq(g: &UPoly) -> Result<Vec<UPoly>> {
    let n = g.degree();
    // Clear denominators and remove the content: primitive integer polynomial.
    let mut den = BigInt::one();
    for c in &g.coeffs {
        let Val::Q(q) = c else {
            return Err(Error::Internal("non-rational value over QQ".into()));
        };
        den = den.lcm(q.denom());
    }
    let mut zp: Vec<BigInt> = g
        .coeffs
        .iter()
        .map(|c| match c {
            Val::Q(q) => q.numer() * (&den / q.denom()),
            _ => unreachable!(),
        })
        .collect();
    let content = zp
        .iter()
        .fold(BigInt::zero(), |a, b| a.gcd(b))
        .max(BigInt::one());
    for c in &mut zp {
        *c /= &content;
    }
    let lc = zp.last().unwrap().clone();

    // A prime not dividing the leading coefficient with squarefree reduction.
    let mut p = 2u64;
    let (prime_tower, modular) = loop {
        p += 1;
        while !is_prime(p) {
            p += 1;
        }
        if p > 100_000 {
            return Err(Error::Internal("no good prime found".into()));
        }
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let tower = Tower::prime(p)?;
        let gp = to_mod_p(&zp, &tower);
        if gp.degree() != n {
            continue;
        }
        let gp = gp.monic()?;
        if gp.gcd(&gp.derivative()).degree() != 0 {
            continue;
        }
        break (tower.clone(), super::cz::factor_squarefree_finite(&gp)?);
    };
    if modular.len() == 1 {
        return Ok(vec![g.clone()]);
    }

    // Mignotte-style bound on factor coefficients, times the leading
    // coefficient for the recombination products.
    let height = zp.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = sqrt_ceil(&BigInt::from(n as u64 + 1)) * (BigInt::one() << n) * height * lc.abs();
    let mut modulus = BigInt::from(p);
    while modulus <= &bound * 2 {
        modulus *= BigInt::from(p);
    }

    // Monic target modulo p^k: multiply by the inverse of the leading
    // coefficient.
    let lc_inv = mod_inv_big(&lc, &modulus)?;
    let target: Vec<BigInt> = zp.iter().map(|c| mod_red(&(c * &lc_inv), &modulus)).collect();
    let lifted = lift_tree(&target, &modular, &prime_tower, &modulus)?;

    // Subset recombination.
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut g_rem = g.clone();
    let mut out: Vec<UPoly> = Vec::new();
    let qq = g.tower().clone();
    'outer: loop {
        let r = remaining.len();
        for size in 1..=r / 2 {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                // Candidate: lc times the subset product, symmetric residues,
                // then the primitive part.
                let mut prod = vec![lc.clone()];
                for &i in &idx {
                    prod = zmul_mod(&prod, &remaining[i], &modulus);
                }
                let cand: Vec<BigInt> = prod.iter().map(|c| symmetric(c, &modulus)).collect();
                let cand = primitive(cand);
                let cand_q = to_rational(&cand, &qq).monic()?;
                if cand_q.degree() > 0 && cand_q.divides(&g_rem) {
                    g_rem = g_rem.div_exact(&cand_q)?;
                    out.push(cand_q);
                    let mut keep = Vec::new();
                    for (i, f) in remaining.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            keep.push(f);
                        }
                    }
                    remaining = keep;
                    continue 'outer;
                }
                if !next_combination(&mut idx, r) {
                    break;
                }
            }
        }
        break;
    }
    if !g_rem.is_zero() && g_rem.degree() > 0 {
        out.push(g_rem);
    }
    Ok(out)
}

/// Advance a sorted index combination; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Binary-split multifactor Hensel lifting: lift the mod-p factorization of
/// the monic `target` (coefficients mod `modulus` = p^k) to mod p^k.
fn lift_tree(
    target: &[BigInt],
    factors: &[UPoly],
    prime_tower: &Tower,
    modulus: &BigInt,
) -> Result<Vec<Vec<BigInt>>> {
    if factors.len() == 1 {
        return Ok(vec![target.to_vec()]);
    }
    let mid = factors.len() / 2;
    let mut fp = UPoly::one(prime_tower);
    for f in &factors[..mid] {
        fp = fp.mul(f);
    }
    let mut gp = UPoly::one(prime_tower);
    for f in &factors[mid..] {
        gp = gp.mul(f);
    }
    let (fk, gk) = lift_pair(target, &fp, &gp, prime_tower, modulus)?;
    let mut out = lift_tree(&fk, &factors[..mid], prime_tower, modulus)?;
    out.extend(lift_tree(&gk, &factors[mid..], prime_tower, modulus)?);
    Ok(out)
}

/// Linear Hensel lifting of a monic pair: target ≡ f*g mod p lifts to
/// target ≡ F*G mod p^k, with F ≡ f and G ≡ g mod p.
fn lift_pair(
    target: &[BigInt],
    f: &UPoly,
    g: &UPoly,
    prime_tower: &Tower,
    modulus: &BigInt,
) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let p_big = BigInt::from(prime_tower.characteristic());
    let lv = prime_tower.lv();
    let (d, _, b) = lv.pextgcd(&f.coeffs, &g.coeffs);
    if d.len() != 1 {
        return Err(Error::Internal("non-coprime Hensel factors".into()));
    }
    // Normalize so that b*g ≡ 1 mod f.
    let b = UPoly::from_vals(prime_tower, lv.pscale(&b, &lv.inv(&d[0])));

    let mut fk = from_mod_p(f);
    let mut gk = from_mod_p(g);
    let mut m = p_big.clone();
    while &m < modulus {
        // e = (target - fk*gk) / m mod p
        let prod = zmul(&fk, &gk);
        let diff = zsub(target, &prod);
        let e_p: Vec<BigInt> = diff.iter().map(|c| mod_red(&(c / &m), &p_big)).collect();
        let e = to_mod_p(&e_p, prime_tower);
        // df = b*e mod f, dg = (e - df*g) / f, all over GF(p).
        let df = b.mul(&e).rem(f)?;
        let dg = e.sub(&df.mul(g)).div_exact(f)?;
        for (i, c) in from_mod_p(&df).into_iter().enumerate() {
            while fk.len() <= i {
                fk.push(BigInt::zero());
            }
            fk[i] = mod_red(&(&fk[i] + c * &m), modulus);
        }
        for (i, c) in from_mod_p(&dg).into_iter().enumerate() {
            while gk.len() <= i {
                gk.push(BigInt::zero());
            }
            gk[i] = mod_red(&(&gk[i] + c * &m), modulus);
        }
        m *= &p_big;
    }
    Ok((fk, gk))
}

// ---- integer polynomial helpers -------------------------------------------

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zmul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    zmul(a, b).iter().map(|c| mod_red(c, m)).collect()
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect()
}

/// Canonical residue in [0, m).
fn mod_red(c: &BigInt, m: &BigInt) -> BigInt {
    c.mod_floor(m)
}

/// Symmetric residue in (-m/2, m/2].
fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Divide out the content; normalize the sign of the leading coefficient.
fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut content = v.iter().fold(BigInt::zero(), |a, b| a.gcd(b));
    if content.is_zero() {
        content = BigInt::one();
    }
    if v.last().unwrap().sign() == Sign::Minus {
        content = -content;
    }
    for c in &mut v {
        *c /= &content;
    }
    v
}

fn to_mod_p(v: &[BigInt], tower: &Tower) -> UPoly {
    let p = BigInt::from(tower.characteristic());
    let coeffs = v
        .iter()
        .map(|c| {
            let r = c.mod_floor(&p);
            Val::Fp(r.to_u64_digits().1.first().copied().unwrap_or(0))
        })
        .collect();
    UPoly::from_vals(tower, coeffs)
}

fn from_mod_p(f: &UPoly) -> Vec<BigInt> {
    f.coeffs
        .iter()
        .map(|c| match c {
            Val::Fp(x) => BigInt::from(*x),
            _ => unreachable!("GF(p) value expected"),
        })
        .collect()
}

fn to_rational(v: &[BigInt], tower: &Tower) -> UPoly {
    let coeffs = v
        .iter()
        .map(|c| Val::Q(BigRational::from_integer(c.clone())))
        .collect();
    UPoly::from_vals(tower, coeffs)
}

/// Ceiling integer square root.
fn sqrt_ceil(n: &BigInt) -> BigInt {
    let r = n.sqrt();
    if &(&r * &r) < n {
        r + 1
    } else {
        r
    }
}

/// Inverse modulo m (m a prime power coprime to c).
fn mod_inv_big(c: &BigInt, m: &BigInt) -> Result<BigInt> {
    let e = c.extended_gcd(m);
    if !e.gcd.is_one() {
        return Err(Error::Internal("non-invertible leading coefficient".into()));
    }
    Ok(e.x.mod_floor(m))
}
