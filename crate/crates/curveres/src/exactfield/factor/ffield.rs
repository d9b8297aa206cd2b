//! Factorization over a tower whose top step is transcendental: K(t).
//!
//! Strategy: clear denominators and monicize so the input becomes a monic
//! polynomial H in x with K[t] coefficients; pick a place q(t) (linear when a
//! good rational point exists, otherwise an irreducible modulus over a small
//! finite K) where the residue of H stays squarefree; factor the residue over
//! the residue field; Hensel-lift the factors q(t)-adically past the degree
//! bound for true factor coefficients; recombine subsets by trial division.
//!
//! Monic factors of a monic H in K[t][x] have K[t] coefficients, and the
//! t-degree of any coefficient of a factor is at most n times the maximum
//! t-degree in H (elementary symmetric functions of roots whose pole order at
//! infinity is bounded by that maximum), so lifting to q^k with
//! k*deg(q) > n*M makes canonical representatives exact.

use crate::error::{Error, Result};
use crate::exactfield::val::{Lv, Step, Val};
use crate::exactfield::{Tower, TowerData, UPoly};

/// Dense polynomial in t with coefficients one level down (over K).
type TP = Vec<Val>;
/// Dense polynomial in x with TP coefficients; kept at exact length deg+1.
type XP = Vec<TP>;

/// Irreducible factors of a monic squarefree polynomial over K(t) whose
/// irreducible factors are all separable.
pub(super) fn factor_squarefree_function_field(g: &UPoly) -> Result<Vec<UPoly>> {
    let l_tower = g.tower().clone();
    let kt = prefix_tower(&l_tower);
    let lvk = kt.lv();
    let n = g.degree();

    // Common denominator D (monic in K[t]) and integral coefficients G_i.
    let mut d_poly: TP = vec![lvk.one()];
    for c in &g.coeffs {
        let Val::Frac { den, .. } = c else {
            return Err(Error::Internal("non-fraction value over K(t)".into()));
        };
        d_poly = lcm_tp(lvk, &d_poly, den);
    }
    let g_int: XP = g
        .coeffs
        .iter()
        .map(|c| match c {
            Val::Frac { num, den } => lvk.pmul(num, &lvk.pdivexact(&d_poly, den)),
            _ => unreachable!(),
        })
        .collect();

    // Monicize: H(x) = D^(n-1) * G(x/D), so H_i = G_i * D^(n-1-i).
    let mut h: XP = Vec::with_capacity(n + 1);
    for (i, gi) in g_int.iter().enumerate() {
        let mut c = gi.clone();
        for _ in 0..(n - 1).saturating_sub(i) {
            c = lvk.pmul(&c, &d_poly);
        }
        h.push(c);
    }
    h[n] = vec![lvk.one()];
    let h_l = xp_to_upoly(&l_tower, &h);

    // A place where the residue of H is squarefree of full degree.
    let (q_mod, res_tower) = find_good_place(&kt, &h, n)?;
    let r = q_mod.len() - 1;
    let h_res = xp_residue(&kt, &res_tower, &h, &q_mod);
    let res_factors = h_res.factor()?;
    if res_factors.iter().any(|(_, e)| *e > 1) {
        return Err(Error::Internal("residue not squarefree at chosen place".into()));
    }
    if res_factors.len() == 1 {
        return Ok(vec![g.clone()]);
    }

    // Lift precision: k*deg(q) > n * max t-degree in H.
    let m_deg = h
        .iter()
        .map(|c| c.len().saturating_sub(1))
        .max()
        .unwrap_or(0);
    let bound = n * m_deg;
    let k = bound / r + 1;
    let mut qk: TP = vec![lvk.one()];
    for _ in 0..k {
        qk = lvk.pmul(&qk, &q_mod);
    }

    let initial: Vec<XP> = res_factors
        .iter()
        .map(|(f, _)| upoly_res_to_xp(&kt, f))
        .collect();
    let lifted = lift_tree(&kt, &res_tower, &h, &initial, &q_mod, &qk)?;

    // Subset recombination; candidates are monic with canonical residue
    // coefficients, so a true factor equals its representative.
    let mut remaining: Vec<XP> = lifted;
    let mut h_rem = h_l;
    let mut out_h: Vec<UPoly> = Vec::new();
    'outer: loop {
        let rlen = remaining.len();
        for size in 1..=rlen / 2 {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let mut prod: XP = vec![vec![lvk.one()]];
                for &i in &idx {
                    prod = xp_mul_mod(lvk, &prod, &remaining[i], &qk);
                }
                let cand = xp_to_upoly(&l_tower, &prod);
                if cand.degree() > 0 && cand.divides(&h_rem) {
                    h_rem = h_rem.div_exact(&cand)?;
                    out_h.push(cand);
                    let mut keep = Vec::new();
                    for (i, f) in remaining.into_iter().enumerate() {
                        if !idx.contains(&i) {
                            keep.push(f);
                        }
                    }
                    remaining = keep;
                    continue 'outer;
                }
                if !next_comb(&mut idx, rlen) {
                    break;
                }
            }
        }
        break;
    }
    if !h_rem.is_zero() && h_rem.degree() > 0 {
        out_h.push(h_rem);
    }

    // Map factors of H back to factors of g: F(x) -> monic(F(D*x)).
    let d_elem = l_tower.elem(lvk_frac(&l_tower, d_poly.clone()));
    let mut out = Vec::with_capacity(out_h.len());
    for f in out_h {
        let mut coeffs = Vec::with_capacity(f.coeffs.len());
        let mut dpow = l_tower.one();
        for c in &f.coeffs {
            coeffs.push(l_tower.elem(c.clone()).mul(&dpow)?);
            dpow = dpow.mul(&d_elem)?;
        }
        out.push(UPoly::from_elems(&l_tower, coeffs)?.monic()?);
    }
    Ok(out)
}

/// The tower with the top step removed.
fn prefix_tower(t: &Tower) -> Tower {
    let d = t.data();
    Tower::from_data(TowerData {
        base: d.base.clone(),
        steps: d.steps[..d.steps.len() - 1].to_vec(),
    })
}

/// Wrap a K[t] polynomial as an element of K(t) at the top level.
fn lvk_frac(l_tower: &Tower, num: TP) -> Val {
    let lv = l_tower.lv();
    let one = vec![lv.down().one()];
    lv.make_frac(num, one)
}

fn xp_to_upoly(l_tower: &Tower, xp: &XP) -> UPoly {
    let coeffs = xp.iter().map(|c| lvk_frac(l_tower, c.clone())).collect();
    UPoly::from_vals(l_tower, coeffs)
}

/// lcm of monic-normalized polynomials in K[t].
fn lcm_tp(lv: Lv<'_>, a: &TP, b: &TP) -> TP {
    let g = lv.pgcd(a, b);
    lv.pmonic(&lv.pmul(&lv.pdivexact(a, &g), b))
}

/// Find a modulus q(t), irreducible over K, where the residue of H is
/// squarefree of degree n; return q and the residue-field tower.
fn find_good_place(kt: &Tower, h: &XP, n: usize) -> Result<(TP, Tower)> {
    let lvk = kt.lv();
    let m_deg = h.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0);
    // Discriminant-style bound on the number of bad linear places.
    let bad_bound = 2 * n * m_deg + n + 5;

    let check = |q: &TP, res_tower: &Tower| -> Option<(TP, Tower)> {
        let hq = xp_residue(kt, res_tower, h, q);
        if hq.is_zero() || hq.degree() != n {
            return None;
        }
        let sep = hq.gcd(&hq.derivative());
        if sep.degree() == 0 {
            Some((q.clone(), res_tower.clone()))
        } else {
            None
        }
    };

    if kt.finite_size().is_some() {
        // All linear places first, then higher-degree irreducible moduli.
        for c in enumerate_finite(lvk) {
            let q = vec![lvk.neg(&c), lvk.one()];
            if let Some(found) = check(&q, kt) {
                return Ok(found);
            }
        }
        for r in 2..=8usize {
            for tail in tuples(lvk, r) {
                let mut q = tail;
                q.push(lvk.one());
                let qp = UPoly::from_vals(kt, q.clone());
                if qp.degree() != r || !super::is_irreducible(&qp)? {
                    continue;
                }
                let res_tower = residue_tower(kt, &qp)?;
                if let Some(found) = check(&q, &res_tower) {
                    return Ok(found);
                }
            }
        }
    } else {
        for i in 0..=(bad_bound as i64) {
            for s in [i, -i] {
                let c = lvk.from_i64(s);
                let q = vec![lvk.neg(&c), lvk.one()];
                if let Some(found) = check(&q, kt) {
                    return Ok(found);
                }
            }
        }
    }
    Err(Error::Internal("no good place for lifting found".into()))
}

/// A fresh tower K[z]/(q) for a higher-degree place.
fn residue_tower(kt: &Tower, q: &UPoly) -> Result<Tower> {
    let mut name = "res_gen".to_string();
    let mut i = 0;
    while kt.generator_names().contains(&name.as_str()) {
        i += 1;
        name = format!("res_gen{i}");
    }
    kt.add_algebraic_unchecked(&name, q)
}

/// All elements of a finite level, in a deterministic order.
fn enumerate_finite(lv: Lv<'_>) -> Vec<Val> {
    if lv.level == 0 {
        let p = lv.t.characteristic();
        return (0..p).map(Val::Fp).collect();
    }
    match lv.step() {
        Step::Algebraic { minpoly, .. } => {
            let below = enumerate_finite(lv.down());
            let d = minpoly.len() - 1;
            let mut out = Vec::new();
            let mut idx = vec![0usize; d];
            loop {
                out.push(Val::Ext(idx.iter().map(|&i| below[i].clone()).collect()));
                let mut j = 0;
                loop {
                    if j == d {
                        return out;
                    }
                    idx[j] += 1;
                    if idx[j] < below.len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        }
        Step::Transcendental { .. } => unreachable!("finite tower expected"),
    }
}

/// All length-r coefficient tuples over a finite level.
fn tuples(lv: Lv<'_>, r: usize) -> Vec<Vec<Val>> {
    let elems = enumerate_finite(lv);
    let mut out: Vec<Vec<Val>> = vec![Vec::new()];
    for _ in 0..r {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for t in &out {
            for e in &elems {
                let mut t2 = t.clone();
                t2.push(e.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Residue of a K[t] polynomial modulo q, as a value of the residue tower.
fn tp_residue(kt: &Tower, res_tower: &Tower, tp: &TP, q: &TP) -> Val {
    let lvk = kt.lv();
    let rem = lvk.prem(tp, q);
    if res_tower.height() == kt.height() {
        // Linear place t = c: evaluate (the remainder is a constant already).
        rem.first().cloned().unwrap_or_else(|| lvk.zero())
    } else {
        let d = q.len() - 1;
        let mut coords = rem;
        coords.resize(d, lvk.zero());
        Val::Ext(coords)
    }
}

fn xp_residue(kt: &Tower, res_tower: &Tower, h: &XP, q: &TP) -> UPoly {
    let coeffs = h.iter().map(|c| tp_residue(kt, res_tower, c, q)).collect();
    UPoly::from_vals(res_tower, coeffs)
}

/// Representative in K[t] (degree < deg q) of a residue-field value.
fn res_to_tp(kt: &Tower, res_tower: &Tower, v: &Val) -> TP {
    if res_tower.height() == kt.height() {
        kt.lv().ptrim(vec![v.clone()])
    } else {
        match v {
            Val::Ext(coords) => kt.lv().ptrim(coords.clone()),
            _ => unreachable!("extension value expected"),
        }
    }
}

fn upoly_res_to_xp(kt: &Tower, f: &UPoly) -> XP {
    let res_tower = f.tower();
    f.coeffs.iter().map(|c| res_to_tp(kt, res_tower, c)).collect()
}

// ---- XP arithmetic --------------------------------------------------------

fn xp_trim(lvk: Lv<'_>, mut a: XP) -> XP {
    while a.last().map(|c| lvk.ptrim(c.clone()).is_empty()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn xp_mul(lvk: Lv<'_>, a: &XP, b: &XP) -> XP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out: XP = vec![Vec::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = lvk.padd(&out[i + j], &lvk.pmul(x, y));
        }
    }
    out
}

fn xp_mul_mod(lvk: Lv<'_>, a: &XP, b: &XP, qk: &TP) -> XP {
    xp_mul(lvk, a, b)
        .into_iter()
        .map(|c| lvk.prem(&c, qk))
        .collect()
}

fn xp_sub(lvk: Lv<'_>, a: &XP, b: &XP) -> XP {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            lvk.psub(&x, &y)
        })
        .collect()
}

/// Binary-split multifactor lifting of the residue factorization to mod q^k.
fn lift_tree(
    kt: &Tower,
    res_tower: &Tower,
    target: &XP,
    factors: &[XP],
    q: &TP,
    qk: &TP,
) -> Result<Vec<XP>> {
    if factors.len() == 1 {
        let lvk = kt.lv();
        return Ok(vec![target.iter().map(|c| lvk.prem(c, qk)).collect()]);
    }
    let lvk = kt.lv();
    let mid = factors.len() / 2;
    let mut fp: XP = vec![vec![lvk.one()]];
    for f in &factors[..mid] {
        fp = xp_mul_mod(lvk, &fp, f, q);
    }
    let mut gp: XP = vec![vec![lvk.one()]];
    for f in &factors[mid..] {
        gp = xp_mul_mod(lvk, &gp, f, q);
    }
    let (fk, gk) = lift_pair(kt, res_tower, target, &fp, &gp, q, qk)?;
    let mut out = lift_tree(kt, res_tower, &fk, &factors[..mid], q, qk)?;
    out.extend(lift_tree(kt, res_tower, &gk, &factors[mid..], q, qk)?);
    Ok(out)
}

/// Linear q-adic Hensel lifting of a coprime monic pair.
fn lift_pair(
    kt: &Tower,
    res_tower: &Tower,
    target: &XP,
    f0: &XP,
    g0: &XP,
    q: &TP,
    qk: &TP,
) -> Result<(XP, XP)> {
    let lvk = kt.lv();
    let f_res = xp_to_res(kt, res_tower, f0, q);
    let g_res = xp_to_res(kt, res_tower, g0, q);
    let lvr = res_tower.lv();
    let (d, _, b) = lvr.pextgcd(&f_res.coeffs, &g_res.coeffs);
    if d.len() != 1 {
        return Err(Error::Internal("non-coprime lift factors".into()));
    }
    // Normalize so that b*g ≡ 1 mod f.
    let b = UPoly::from_vals(res_tower, lvr.pscale(&b, &lvr.inv(&d[0])));

    let mut fk = f0.clone();
    let mut gk = g0.clone();
    let mut qm = q.clone();
    while qm.len() < qk.len() {
        // e = (target - fk*gk) / q^m, reduced mod q, in the residue field.
        let diff = xp_sub(lvk, target, &xp_mul(lvk, &fk, &gk));
        let e_tp: XP = diff.iter().map(|c| lvk.pdivexact(c, &qm)).collect();
        let e = xp_to_res(kt, res_tower, &e_tp, q);
        let df = b.mul(&e).rem(&f_res)?;
        let dg = e.sub(&df.mul(&g_res)).div_exact(&f_res)?;
        add_scaled(lvk, &mut fk, &df, kt, res_tower, &qm);
        add_scaled(lvk, &mut gk, &dg, kt, res_tower, &qm);
        qm = lvk.pmul(&qm, q);
    }
    let fk = xp_trim(lvk, fk.into_iter().map(|c| lvk.prem(&c, qk)).collect());
    let gk = xp_trim(lvk, gk.into_iter().map(|c| lvk.prem(&c, qk)).collect());
    Ok((fk, gk))
}

fn xp_to_res(kt: &Tower, res_tower: &Tower, a: &XP, q: &TP) -> UPoly {
    xp_residue(kt, res_tower, a, q)
}

/// acc += q^m * (representative of delta), coefficientwise in x.
fn add_scaled(lvk: Lv<'_>, acc: &mut XP, delta: &UPoly, kt: &Tower, res_tower: &Tower, qm: &TP) {
    for (i, c) in delta.coeffs.iter().enumerate() {
        let rep = res_to_tp(kt, res_tower, c);
        let add = lvk.pmul(qm, &rep);
        while acc.len() <= i {
            acc.push(Vec::new());
        }
        acc[i] = lvk.padd(&acc[i], &add);
    }
}

/// Advance a sorted index combination; false when exhausted.
fn next_comb(idx: &mut [usize], n: usize) -> bool {
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
