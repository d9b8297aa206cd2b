//! Independent cross-checks for the symbolic engine: a brute-force search
//! for the maximal admissible center over probe coordinate changes, an
//! order computation that shares no code with the sparse polynomial layer,
//! and a base-change consistency check for separable residue extensions.

use num::rational::BigRational;
use num::{BigInt, One};

use crate::charpoly::{invariant, Invariant};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElem, Tower, UPoly};
use crate::mpoly::{LocalModel, Poly};

/// The best center found by brute force: the order `a1` and the largest
/// admissible second exponent `a2` over all probed coordinate frames.
#[derive(Clone, Debug)]
pub struct CenterProbe {
    pub a1: u32,
    /// None means unbounded (the curve is a smooth multiple of y = 0 in
    /// some probed frame).
    pub a2: Option<BigRational>,
    /// The winning substitution y -> y + sum c_v x^v, as (v, c_v) pairs.
    pub shift: Vec<(u32, FieldElem)>,
    /// Whether the winning frame swapped the two parameters.
    pub swapped: bool,
    /// Number of frames examined.
    pub frames_tried: usize,
}

/// Probe coefficients for shift substitutions, by tower shape: small
/// rationals over QQ, every residue for small prime fields (plus the
/// generators of any extension steps), and low-degree polynomials in the
/// transcendental for function fields.
fn probe_values(tower: &Tower) -> Result<Vec<FieldElem>> {
    let mut out = Vec::new();
    if tower.characteristic() == 0 {
        for n in [0i64, 1, -1, 2, -2] {
            out.push(tower.from_i64(n));
        }
        out.push(tower.from_rational(BigRational::new(BigInt::one(), BigInt::from(2)))?);
        out.push(tower.from_rational(BigRational::new(BigInt::from(-1), BigInt::from(2)))?);
    } else {
        let p = tower.characteristic() as i64;
        for n in 0..p.min(5) {
            out.push(tower.from_i64(n));
        }
        if !tower.is_finite() {
            // Function field: the residues plus {t, t+1, t^2} in the first
            // generator (towers are built transcendental step first).
            if let Some(name) = tower.generator_names().first() {
                let t = tower.generator_by_name(name).unwrap();
                out.push(t.clone());
                out.push(t.add(&tower.one())?);
                out.push(t.mul(&t)?);
            }
        } else {
            // Finite tower: include the extension generators and their
            // successors so algebraic residues are reachable.
            for name in tower.generator_names() {
                let g = tower.generator_by_name(name).unwrap();
                out.push(g.add(&tower.one())?);
                out.push(g);
            }
        }
    }
    out.dedup_by(|a, b| a == b);
    Ok(out)
}

/// The largest b2 making (a1, b2) admissible for f in the current frame
/// (x = variable 0, y = variable 1): the minimum of i_x * a1 / (a1 - i_y)
/// over terms below the y^a1 level. None = unbounded.
fn max_admissible_a2(f: &Poly, a1: u32) -> Option<BigRational> {
    let mut best: Option<BigRational> = None;
    for (m, _) in f.terms() {
        let (ix, iy) = (m.0[0], m.0[1]);
        if iy >= a1 {
            continue;
        }
        let bound = BigRational::new(
            BigInt::from(ix) * BigInt::from(a1),
            BigInt::from(a1 - iy),
        );
        best = Some(match best {
            None => bound,
            Some(b) => b.min(bound),
        });
    }
    best
}

/// Brute-force the maximal admissible center of a one-parameter model by
/// probing shift substitutions y -> y + sum_{v<=V} c_v x^v (and the frame
/// with the two parameters swapped). `budget` caps the number of frames;
/// exceeding it is reported, never silently truncated.
pub fn bruteforce_max_center(m: &LocalModel, budget: usize) -> Result<CenterProbe> {
    if m.xparams.len() != 1 {
        return Err(Error::InvalidInput(
            "the brute-force oracle handles one-parameter models only".into(),
        ));
    }
    let tower = &m.tower;
    let coeffs = probe_values(tower)?;
    let vars = vec![m.xparams[0].clone(), m.yparam.clone()];
    let base = {
        let map: Vec<usize> = m
            .f
            .vars()
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        m.f.reframe(&vars, &map)
    };
    let swapped_frame = {
        let map = vec![1usize, 0];
        base.reframe(&vars, &map)
    };
    let mut best: Option<CenterProbe> = None;
    let mut frames = 0usize;
    for (swapped, f0) in [(false, &base), (true, &swapped_frame)] {
        let a1 = f0.ord()?;
        if a1 == 0 {
            continue;
        }
        let vmax = f0.degree_in(0).unwrap_or(0).min(4).max(1);
        // Enumerate coefficient tuples (c_1, ..., c_vmax) odometer-style.
        let mut idx = vec![0usize; vmax as usize];
        loop {
            frames += 1;
            if frames > budget {
                return Err(Error::BudgetExhausted(format!(
                    "center oracle exceeded its frame budget of {budget}"
                )));
            }
            let shift: Vec<(u32, FieldElem)> = idx
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i as u32 + 1, coeffs[c].clone()))
                .collect();
            let g = apply_shift(f0, &vars, &shift)?;
            if g.ord()? == a1 {
                let a2 = max_admissible_a2(&g, a1);
                let candidate = CenterProbe {
                    a1,
                    a2,
                    shift: shift.clone(),
                    swapped,
                    frames_tried: frames,
                };
                best = Some(match best {
                    None => candidate,
                    Some(b) => better_probe(b, candidate),
                });
            }
            // Advance the odometer.
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < coeffs.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == idx.len() {
                break;
            }
        }
    }
    let mut out = best.ok_or_else(|| {
        Error::InvalidInput("the model is a unit at the origin".into())
    })?;
    out.frames_tried = frames;
    Ok(out)
}

/// Lexicographic preference: larger a1 first, then larger (possibly
/// unbounded) a2.
fn better_probe(a: CenterProbe, b: CenterProbe) -> CenterProbe {
    if b.a1 != a.a1 {
        return if b.a1 > a.a1 { b } else { a };
    }
    match (&a.a2, &b.a2) {
        (None, _) => a,
        (_, None) => b,
        (Some(x), Some(y)) => {
            if y > x {
                b
            } else {
                a
            }
        }
    }
}

fn apply_shift(f: &Poly, vars: &[String], shift: &[(u32, FieldElem)]) -> Result<Poly> {
    if shift.is_empty() {
        return Ok(f.clone());
    }
    let x = Poly::var(f.tower(), vars, 0);
    let mut y = Poly::var(f.tower(), vars, 1);
    for (v, c) in shift {
        let term = x.pow(*v)?.scale(c);
        y = y.add(&term)?;
    }
    f.substitute(&[x, y])
}

/// Order of vanishing at a point, computed on a dense coefficient grid with
/// two nested Horner shifts — no code shared with the sparse layer.
pub fn independent_order(
    f: &Poly,
    ext: &Tower,
    point: &[FieldElem],
) -> Result<u32> {
    if f.vars().len() != 2 || point.len() != 2 {
        return Err(Error::InvalidInput(
            "the independent order check expects two variables".into(),
        ));
    }
    let dx = f.degree_in(0).unwrap_or(0) as usize;
    let dy = f.degree_in(1).unwrap_or(0) as usize;
    let mut grid = vec![vec![ext.zero(); dy + 1]; dx + 1];
    for (m, c) in f.terms() {
        grid[m.0[0] as usize][m.0[1] as usize] = ext.embed(&c)?;
    }
    // Shift x -> x + a by repeated synthetic division on columns of rows.
    for j in 0..=dy {
        // Column j as a polynomial in x.
        let mut col: Vec<FieldElem> = (0..=dx).map(|i| grid[i][j].clone()).collect();
        horner_shift(&mut col, &point[0])?;
        for (i, v) in col.into_iter().enumerate() {
            grid[i][j] = v;
        }
    }
    for row in grid.iter_mut() {
        horner_shift(row, &point[1])?;
    }
    let mut order = None;
    for (i, row) in grid.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let d = (i + j) as u32;
                order = Some(order.map_or(d, |o: u32| o.min(d)));
            }
        }
    }
    order.ok_or(Error::ZeroPolynomial)
}

/// In-place Taylor shift p(x) -> p(x + a) by repeated synthetic division.
fn horner_shift(coeffs: &mut [FieldElem], a: &FieldElem) -> Result<()> {
    if a.is_zero() {
        return Ok(());
    }
    let n = coeffs.len();
    for k in 0..n {
        for i in (k..n - 1).rev() {
            let bump = coeffs[i + 1].mul(a)?;
            coeffs[i] = coeffs[i].add(&bump)?;
        }
    }
    Ok(())
}

/// Outcome of re-running the invariant after a residue field extension.
#[derive(Clone, Debug)]
pub struct BaseChangeReport {
    pub separable: bool,
    pub base: Invariant,
    pub extended: Invariant,
    /// Whether the invariant changed under the extension. For separable
    /// extensions this must be false; for inseparable ones a change is the
    /// expected behaviour and is reported, not hidden.
    pub changed: bool,
}

/// Extend the model's tower by `minpoly` and compare invariants. Separable
/// extensions (derivative criterion: gcd(h, h') constant) must leave the
/// invariant unchanged; a violation is an engine bug and errors out.
pub fn separable_basechange_check(
    m: &LocalModel,
    name: &str,
    minpoly: &UPoly,
) -> Result<BaseChangeReport> {
    let h = minpoly.monic()?;
    let separable = {
        let d = h.derivative();
        !d.is_zero() && h.gcd(&d).degree() == 0
    };
    let (base_inv, _) = invariant(m)?;
    let ext = m.tower.add_algebraic(name, &h)?;
    let f2 = m.f.embed(&ext)?;
    let m2 = LocalModel::new(ext, m.xparams.clone(), m.yparam.clone(), f2)?;
    let (ext_inv, _) = invariant(&m2)?;
    let changed = base_inv != ext_inv;
    if separable && changed {
        return Err(Error::Internal(format!(
            "invariant changed under a separable extension: {base_inv} vs {ext_inv}"
        )));
    }
    Ok(BaseChangeReport {
        separable,
        base: base_inv,
        extended: ext_inv,
        changed,
    })
}
