//! p-th and n-th roots in field towers.
//!
//! In characteristic p the p-th root is computed step by step through the
//! tower:
//!
//! * GF(p): the Frobenius is the identity, the element is its own root;
//! * across a transcendental step, a reduced fraction is a p-th power iff
//!   numerator and denominator are (exponents divisible by p, coefficients
//!   p-th powers below);
//! * across an algebraic step E = F[w]/(m), writing x = sum x_j w^j turns
//!   x^p = a into the linear system sum_j y_j (w^p)^j = a with y_j = x_j^p.
//!   When the system is uniquely solvable (separable steps) we recurse on the
//!   unique coordinates. When it is singular we either pick any solution
//!   (perfect subfield) or, for w^p = c steps over a rational function
//!   subfield, solve the inverse-Frobenius-renamed system over the p-basis
//!   {t^i}. Remaining inseparable shapes are reported as unsupported.
//!
//! Every root returned is verified by re-exponentiation.

use crate::error::{Error, Result};
use crate::exactfield::val::{Lv, Step, TowerData, Val};
use crate::exactfield::{factor, FieldElem, Tower, UPoly};

/// p-th root of a tower element (characteristic p only).
pub fn pth_root(e: &FieldElem) -> Result<Option<FieldElem>> {
    let p = e.tower().characteristic();
    if p == 0 {
        return Err(Error::CharacteristicZero);
    }
    let lv = e.tower().lv();
    let r = pth_root_val(lv, &e.val, p)?;
    if let Some(x) = &r {
        if lv.pow_u64(x, p) != e.val {
            return Err(Error::Internal("p-th root verification failed".into()));
        }
    }
    Ok(r.map(|v| e.tower().elem(v)))
}

/// n-th root of a tower element.
pub fn nth_root(e: &FieldElem, n: u64) -> Result<Option<FieldElem>> {
    if n == 0 {
        return Err(Error::InvalidInput("0-th root".into()));
    }
    let p = e.tower().characteristic();
    let n0 = n;
    let mut n = n;
    let mut cur = e.val.clone();
    if p > 0 {
        while n % p == 0 {
            match pth_root_val(e.tower().lv(), &cur, p)? {
                Some(r) => cur = r,
                None => return Ok(None),
            }
            n /= p;
        }
    }
    if n > 1 {
        match nth_root_val(e.tower().lv(), &cur, n)? {
            Some(r) => cur = r,
            None => return Ok(None),
        }
    }
    if e.tower().lv().pow_u64(&cur, n0) != e.val {
        return Err(Error::Internal("n-th root verification failed".into()));
    }
    Ok(Some(e.tower().elem(cur)))
}

pub(crate) fn pth_root_val(lv: Lv<'_>, v: &Val, p: u64) -> Result<Option<Val>> {
    if lv.is_zero(v) {
        return Ok(Some(lv.zero()));
    }
    if lv.level == 0 {
        // GF(p): x^p = x, so every element is its own p-th root.
        return Ok(Some(v.clone()));
    }
    match lv.step() {
        Step::Transcendental { .. } => {
            let (num, den) = match v {
                Val::Frac { num, den } => (num, den),
                _ => unreachable!(),
            };
            let lo = lv.down();
            let rn = match poly_pth_root(lo, num, p)? {
                Some(r) => r,
                None => return Ok(None),
            };
            let rd = match poly_pth_root(lo, den, p)? {
                Some(r) => r,
                None => return Ok(None),
            };
            Ok(Some(lv.make_frac(rn, rd)))
        }
        Step::Algebraic { minpoly, .. } => pth_root_algebraic(lv, v, minpoly, p),
    }
}

/// A polynomial is a p-th power iff every exponent is divisible by p and every
/// coefficient has a p-th root; the root is then read off coefficientwise.
fn poly_pth_root(lv: Lv<'_>, poly: &[Val], p: u64) -> Result<Option<Vec<Val>>> {
    if poly.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let pu = p as usize;
    if (poly.len() - 1) % pu != 0 {
        return Ok(None);
    }
    let mut out = vec![lv.zero(); (poly.len() - 1) / pu + 1];
    for (i, c) in poly.iter().enumerate() {
        if lv.is_zero(c) {
            continue;
        }
        if i % pu != 0 {
            return Ok(None);
        }
        match pth_root_val(lv, c, p)? {
            Some(r) => out[i / pu] = r,
            None => return Ok(None),
        }
    }
    Ok(Some(lv.ptrim(out)))
}

fn pth_root_algebraic(lv: Lv<'_>, v: &Val, minpoly: &[Val], p: u64) -> Result<Option<Val>> {
    let lo = lv.down();
    let d = minpoly.len() - 1;
    let coords = match v {
        Val::Ext(c) => c.clone(),
        _ => unreachable!(),
    };
    // beta_j = (w^p)^j mod m, as coordinate columns
    let bits = bits_of(p);
    let x_poly = vec![lo.zero(), lo.one()];
    let theta_p = lo.pmodpow_bits(&x_poly, &bits, minpoly);
    let mut beta = vec![lo.one()];
    let mut cols: Vec<Vec<Val>> = Vec::with_capacity(d);
    for _ in 0..d {
        let mut col = beta.clone();
        col.resize(d, lo.zero());
        cols.push(col);
        beta = lo.prem(&lo.pmul(&beta, &theta_p), minpoly);
    }
    // rows k: sum_j B[k][j] y_j = a_k
    let mat: Vec<Vec<Val>> = (0..d)
        .map(|k| (0..d).map(|j| cols[j][k].clone()).collect())
        .collect();
    let (sol, unique) = match solve_linear(lo, mat, coords.clone()) {
        Some(su) => su,
        None => return Ok(None),
    };
    if unique || is_perfect(lo) {
        // recurse on the coordinates (trivially successful over perfect fields)
        let mut xs = Vec::with_capacity(d);
        for y in &sol {
            match pth_root_val(lo, y, p)? {
                Some(x) => xs.push(x),
                None => return Ok(None),
            }
        }
        let cand = Val::Ext(xs);
        if lv.pow_u64(&cand, p) == *v {
            return Ok(Some(cand));
        }
        if unique {
            return Ok(None);
        }
        return Err(Error::UnsupportedTower(
            "singular Frobenius system over this tower shape".into(),
        ));
    }
    // Singular system over an imperfect subfield: handle w^p = c steps when
    // the subfield is K0(t) with perfect K0.
    let pu = p as usize;
    let is_radical = d == pu
        && minpoly[1..d].iter().all(|c| lo.is_zero(c))
        && lo.is_one(&minpoly[d]);
    if !is_radical || lo.level == 0 || !matches!(lo.step(), Step::Transcendental { .. })
        || !is_perfect(lo.down())
    {
        return Err(Error::UnsupportedTower(
            "p-th root across this inseparable tower shape".into(),
        ));
    }
    let c = lo.neg(&minpoly[0]);
    // a must lie in the subfield: E^p is contained in F for radical steps
    if coords[1..].iter().any(|x| !lo.is_zero(x)) {
        return Ok(None);
    }
    let a0 = coords[0].clone();
    // Solve sum_j x_j^p c^j = a0 over F = K0(t) via the p-basis {t^i}:
    // decompose both sides over F^p t^i and apply the inverse Frobenius
    // renaming, leaving a plain linear system for the x_j themselves.
    let a_rho = rho_decompose(lo, &a0, p)?;
    let mut c_rho = Vec::with_capacity(pu);
    let mut cj = lo.one();
    for _ in 0..pu {
        c_rho.push(rho_decompose(lo, &cj, p)?);
        cj = lo.mul(&cj, &c);
    }
    let mat: Vec<Vec<Val>> = (0..pu)
        .map(|i| (0..pu).map(|j| c_rho[j][i].clone()).collect())
        .collect();
    let rhs: Vec<Val> = (0..pu).map(|i| a_rho[i].clone()).collect();
    let (xs, _) = match solve_linear(lo, mat, rhs) {
        Some(su) => su,
        None => return Ok(None),
    };
    let cand = Val::Ext(xs);
    if lv.pow_u64(&cand, p) == *v {
        Ok(Some(cand))
    } else {
        Ok(None)
    }
}

/// Decompose a in K0(t) as sum_i t^i A_i with A_i in the image of Frobenius,
/// returning the inverse-Frobenius images rho(A_i) (elements of K0(t)).
fn rho_decompose(lv: Lv<'_>, a: &Val, p: u64) -> Result<Vec<Val>> {
    let pu = p as usize;
    let lo = lv.down(); // perfect coefficients
    let (num, den) = match a {
        Val::Frac { num, den } => (num.clone(), den.clone()),
        _ => unreachable!(),
    };
    if num.is_empty() {
        return Ok(vec![lv.zero(); pu]);
    }
    // a = n d^{p-1} / d^p; d^p has p-th-power coefficients and exponents
    // divisible by p, so rho(d^p) = d-with-rooted-coefficients... since K0 is
    // perfect and d in K0[t], rho(d^p) is d itself with each coefficient
    // replaced by its (unique) p-th root composed with the p-th power map —
    // which is d again. Split N = n d^{p-1} by exponent residue instead.
    let mut dp1 = vec![lo.one()];
    for _ in 0..p - 1 {
        dp1 = lo.pmul(&dp1, &den);
    }
    let n_big = lo.pmul(&num, &dp1);
    let mut comps: Vec<Vec<Val>> = vec![Vec::new(); pu];
    for (e, b) in n_big.iter().enumerate() {
        if lo.is_zero(b) {
            continue;
        }
        let i = e % pu;
        let k = e / pu;
        let root = pth_root_val(lo, b, p)?.ok_or_else(|| {
            Error::Internal("perfect subfield element without a p-th root".into())
        })?;
        if comps[i].len() <= k {
            comps[i].resize(k + 1, lo.zero());
        }
        comps[i][k] = root;
    }
    Ok(comps
        .into_iter()
        .map(|c| lv.make_frac(c, den.clone()))
        .collect())
}

/// True iff every element of the subtower at this level has a p-th root.
pub(crate) fn is_perfect(lv: Lv<'_>) -> bool {
    matches!(lv.t.base, crate::exactfield::val::Base::Prime(_))
        && !lv.t.steps[..lv.level]
            .iter()
            .any(|s| matches!(s, Step::Transcendental { .. }))
}

/// Gaussian elimination over the field at `lv`. Returns a particular solution
/// (free variables set to zero) and whether it is unique; `None` if the
/// system is inconsistent.
pub(crate) fn solve_linear(
    lv: Lv<'_>,
    mut mat: Vec<Vec<Val>>,
    mut rhs: Vec<Val>,
) -> Option<(Vec<Val>, bool)> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let mut pr = None;
        for i in r..rows {
            if !lv.is_zero(&mat[i][c]) {
                pr = Some(i);
                break;
            }
        }
        let Some(pr) = pr else { continue };
        mat.swap(r, pr);
        rhs.swap(r, pr);
        let inv = lv.inv(&mat[r][c]);
        for j in c..cols {
            mat[r][j] = lv.mul(&mat[r][j], &inv);
        }
        rhs[r] = lv.mul(&rhs[r], &inv);
        for i in 0..rows {
            if i != r && !lv.is_zero(&mat[i][c]) {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let t = lv.mul(&mat[r][j], &f);
                    mat[i][j] = lv.sub(&mat[i][j], &t);
                }
                let t = lv.mul(&rhs[r], &f);
                rhs[i] = lv.sub(&rhs[i], &t);
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == rows {
            break;
        }
    }
    // consistency: zero rows must have zero rhs
    for i in r..rows {
        if !lv.is_zero(&rhs[i]) {
            return None;
        }
    }
    let mut sol = vec![lv.zero(); cols];
    for c in 0..cols {
        if let Some(pr) = pivot_of_col[c] {
            sol[c] = rhs[pr].clone();
        }
    }
    Some((sol, r == cols))
}

fn bits_of(n: u64) -> Vec<bool> {
    let mut bits = Vec::new();
    let mut seen = false;
    for i in (0..64).rev() {
        let b = (n >> i) & 1 == 1;
        if b {
            seen = true;
        }
        if seen {
            bits.push(b);
        }
    }
    bits
}

// ---- n-th roots (prime-to-characteristic part) ----------------------------

fn nth_root_val(lv: Lv<'_>, v: &Val, n: u64) -> Result<Option<Val>> {
    if lv.is_zero(v) {
        return Ok(Some(lv.zero()));
    }
    match v {
        Val::Q(q) => {
            use num::bigint::Sign;
            use num::rational::BigRational;
            let (num, den) = (q.numer(), q.denom());
            let neg = num.sign() == Sign::Minus;
            if neg && n % 2 == 0 {
                return Ok(None);
            }
            let an = num.magnitude().nth_root(n as u32);
            let ad = den.magnitude().nth_root(n as u32);
            if an.pow(n as u32) != *num.magnitude() || ad.pow(n as u32) != *den.magnitude() {
                return Ok(None);
            }
            let mut root = BigRational::new(an.into(), ad.into());
            if neg {
                root = -root;
            }
            Ok(Some(Val::Q(root)))
        }
        Val::Fp(_) => {
            let p = match lv.t.base {
                crate::exactfield::val::Base::Prime(p) => p,
                _ => unreachable!(),
            };
            for x in 0..p {
                let cand = Val::Fp(x);
                if lv.pow_u64(&cand, n) == *v {
                    return Ok(Some(cand));
                }
            }
            Ok(None)
        }
        Val::Frac { num, den } => {
            let lo = lv.down();
            let rn = match poly_nth_root(lo, num, n)? {
                Some(r) => r,
                None => return Ok(None),
            };
            let rd = match poly_nth_root(lo, den, n)? {
                Some(r) => r,
                None => return Ok(None),
            };
            Ok(Some(lv.make_frac(rn, rd)))
        }
        Val::Ext(_) => nth_root_by_factoring(lv, v, n),
    }
}

/// n-th root of a polynomial for n coprime to the characteristic, by matching
/// coefficients from the top and verifying by exponentiation.
fn poly_nth_root(lv: Lv<'_>, poly: &[Val], n: u64) -> Result<Option<Vec<Val>>> {
    if poly.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let nu = n as usize;
    let deg = poly.len() - 1;
    if deg % nu != 0 {
        return Ok(None);
    }
    let k = deg / nu;
    let lc = poly.last().unwrap();
    let rl = match nth_root_val(lv, lc, n)? {
        Some(r) => r,
        None => return Ok(None),
    };
    let inv_lc = lv.inv(lc);
    let monic: Vec<Val> = lv.pscale(poly, &inv_lc);
    let n_scalar = lv.from_i64(n as i64);
    if lv.is_zero(&n_scalar) {
        return Ok(None); // n divisible by the characteristic; handled elsewhere
    }
    let n_inv = lv.inv(&n_scalar);
    let mut q = vec![lv.zero(); k + 1];
    q[k] = lv.one();
    for j in 1..=k {
        let cur = poly_pow(lv, &q, n);
        let have = cur.get(deg - j).cloned().unwrap_or_else(|| lv.zero());
        let want = monic.get(deg - j).cloned().unwrap_or_else(|| lv.zero());
        let delta = lv.sub(&want, &have);
        q[k - j] = lv.mul(&delta, &n_inv);
    }
    let q = lv.ptrim(q);
    if poly_pow(lv, &q, n) != lv.ptrim(monic.clone()) {
        return Ok(None);
    }
    Ok(Some(lv.pscale(&q, &rl)))
}

fn poly_pow(lv: Lv<'_>, a: &[Val], mut e: u64) -> Vec<Val> {
    let mut acc = vec![lv.one()];
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = lv.pmul(&acc, &b);
        }
        b = lv.pmul(&b, &b);
        e >>= 1;
    }
    acc
}

/// Root extraction through an algebraic top step: factor X^n - a and read off
/// a linear factor. Deterministic: the lexicographically smallest root by
/// rendered text is chosen.
fn nth_root_by_factoring(lv: Lv<'_>, v: &Val, n: u64) -> Result<Option<Val>> {
    let tower = Tower::from_data(TowerData {
        base: lv.t.base.clone(),
        steps: lv.t.steps[..lv.level].to_vec(),
    });
    let mut coeffs = vec![tower.lv().zero(); n as usize + 1];
    coeffs[0] = tower.lv().neg(v);
    coeffs[n as usize] = tower.lv().one();
    let g = UPoly::from_vals(&tower, coeffs);
    let facs = factor::factor(&g)?;
    let mut roots: Vec<Val> = Vec::new();
    for (f, _) in &facs {
        if f.degree() == 1 {
            // monic X - r
            let r = tower.lv().neg(&f.coeffs[0]);
            roots.push(r);
        }
    }
    roots.sort_by_key(|r| tower.elem(r.clone()).render());
    Ok(roots.into_iter().next())
}
