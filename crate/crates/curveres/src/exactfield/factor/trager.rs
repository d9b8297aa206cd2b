//! Factorization over a tower E = F[θ]/(m) whose subfield F is infinite:
//! Trager's norm reduction. Shift x -> x - s*θ until the norm
//! N(x) = Res_θ(m(θ), g(x - s*θ)) ∈ F[x] is squarefree, factor the norm over
//! F, and recover the factors of g as gcds with the irreducible norm parts.

use crate::error::{Error, Result};
use crate::exactfield::val::{Step, Val};
use crate::exactfield::{Tower, TowerData, UPoly};

/// Irreducible factors of a monic squarefree separable polynomial over a
/// tower whose top step is algebraic with an infinite subfield below.
pub(super) fn factor_squarefree_extension(g: &UPoly) -> Result<Vec<UPoly>> {
    let e_tower = g.tower().clone();
    let f_tower = prefix_tower(&e_tower);
    let d = match e_tower.data().steps.last().unwrap() {
        Step::Algebraic { minpoly, .. } => minpoly.len() - 1,
        Step::Transcendental { .. } => {
            return Err(Error::Internal("algebraic top step expected".into()))
        }
    };
    let n = g.degree();
    let theta = e_tower
        .generator(e_tower.height() - 1)
        .map_err(|_| Error::Internal("missing top generator".into()))?;

    let max_tries = 4 * (n * d) * (n * d) + 10;
    for k in 0..max_tries {
        let s = nth_subfield_element(&f_tower, k as u64);
        let s_e = e_tower.embed(&f_tower.elem(s))?;
        let shift = s_e.mul(&theta)?;
        // fs(x) = g(x - s*θ)
        let fs = g.shift(&shift.neg());
        let norm = norm_resultant(&f_tower, &e_tower, &fs)?;
        if norm.is_zero() || norm.degree() != n * d {
            continue;
        }
        let norm = norm.monic()?;
        if norm.gcd(&norm.derivative()).degree() != 0 {
            continue;
        }
        let norm_factors = super::factor(&norm)?;
        let mut out = Vec::with_capacity(norm_factors.len());
        let mut prod = UPoly::one(&e_tower);
        for (ni, _) in &norm_factors {
            let ni_e = ni.embed(&e_tower)?;
            let hi = fs.gcd(&ni_e);
            if hi.is_zero() || hi.degree() == 0 {
                return Err(Error::Internal("norm factor with trivial gcd".into()));
            }
            // Undo the shift: factor of g is hi(x + s*θ).
            let fac = hi.shift(&shift).monic()?;
            prod = prod.mul(&fac);
            out.push(fac);
        }
        if prod != *g {
            return Err(Error::Internal("norm factorization fails to recombine".into()));
        }
        return Ok(out);
    }
    Err(Error::Internal("no squarefree norm shift found".into()))
}

/// The tower with the top step removed.
fn prefix_tower(t: &Tower) -> Tower {
    let d = t.data();
    Tower::from_data(TowerData {
        base: d.base.clone(),
        steps: d.steps[..d.steps.len() - 1].to_vec(),
    })
}

/// The k-th element of an infinite subfield, all distinct: integers in
/// characteristic zero, base-p digit expansions in a transcendental generator
/// in characteristic p.
fn nth_subfield_element(f_tower: &Tower, k: u64) -> Val {
    let lv = f_tower.lv();
    let p = f_tower.characteristic();
    if p == 0 {
        return lv.from_i64(k as i64);
    }
    let gamma = f_tower
        .data()
        .steps
        .iter()
        .position(|s| matches!(s, Step::Transcendental { .. }))
        .map(|i| lv.generator(i))
        .expect("infinite characteristic-p subfield has a transcendental step");
    let mut acc = lv.zero();
    let mut pow = lv.one();
    let mut rest = k;
    while rest > 0 {
        let digit = lv.from_i64((rest % p) as i64);
        acc = lv.add(&acc, &lv.mul(&digit, &pow));
        pow = lv.mul(&pow, &gamma);
        rest /= p;
    }
    acc
}

/// Res_θ(m(θ), fs(θ; x)) as a polynomial over F, via a fraction-free
/// (Bareiss) determinant of the Sylvester matrix with F[x] entries.
fn norm_resultant(f_tower: &Tower, e_tower: &Tower, fs: &UPoly) -> Result<UPoly> {
    let minpoly: Vec<Val> = match e_tower.data().steps.last().unwrap() {
        Step::Algebraic { minpoly, .. } => minpoly.clone(),
        Step::Transcendental { .. } => unreachable!(),
    };
    let d = minpoly.len() - 1;

    // fs as a polynomial in θ with F[x] coefficients.
    let mut theta_coeffs: Vec<UPoly> = vec![UPoly::zero(f_tower); d];
    for (i, c) in fs.coeffs.iter().enumerate() {
        let Val::Ext(coords) = c else {
            return Err(Error::Internal("extension value expected".into()));
        };
        for (j, v) in coords.iter().enumerate() {
            let mut cf = theta_coeffs[j].coeffs.clone();
            while cf.len() <= i {
                cf.push(f_tower.lv().zero());
            }
            cf[i] = f_tower.lv().add(&cf[i], v);
            theta_coeffs[j] = UPoly::from_vals(f_tower, cf);
        }
    }
    let dg = match theta_coeffs.iter().rposition(|c| !c.is_zero()) {
        Some(j) => j,
        // No θ-dependence: the norm is a d-th power, never squarefree; the
        // caller moves to the next shift.
        None => return Ok(UPoly::zero(f_tower)),
    };
    let m_rows: Vec<UPoly> = minpoly
        .iter()
        .map(|v| UPoly::from_vals(f_tower, vec![v.clone()]))
        .collect();
    let g_rows: Vec<UPoly> = theta_coeffs[..=dg].to_vec();

    // Sylvester matrix of m (degree d) and fs (θ-degree dg), size d + dg.
    let size = d + dg;
    let mut mat: Vec<Vec<UPoly>> = vec![vec![UPoly::zero(f_tower); size]; size];
    for r in 0..dg {
        for (j, c) in m_rows.iter().enumerate() {
            mat[r][r + (d - j)] = c.clone();
        }
    }
    for r in 0..d {
        for (j, c) in g_rows.iter().enumerate() {
            mat[dg + r][r + (dg - j)] = c.clone();
        }
    }
    bareiss_det(f_tower, mat)
}

/// Fraction-free determinant with polynomial entries.
fn bareiss_det(f_tower: &Tower, mut m: Vec<Vec<UPoly>>) -> Result<UPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(UPoly::one(f_tower));
    }
    let mut sign = false;
    let mut prev = UPoly::one(f_tower);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Ok(UPoly::zero(f_tower)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
            m[i][k] = UPoly::zero(f_tower);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}
