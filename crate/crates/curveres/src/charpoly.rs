//! Projected polyhedra of a local hypersurface model, initial forms at
//! vertices, vertex solvability, dissolution to the minimal polyhedron, the
//! face lift F_delta, and the (a1, a2) invariant.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactfield::{roots, FieldElem};
use crate::mpoly::{exact_div, poly_gcd, LocalModel, Mono, Poly};

/// A model whose polynomial is in prepared coordinates: the degree-nu part is
/// exactly y^nu (coefficient 1).
#[derive(Clone, Debug)]
pub struct PreparedModel {
    pub model: LocalModel,
    pub nu: u32,
    /// Human-readable log of the coordinate changes applied by preparation.
    pub changes: Vec<String>,
}

/// Outcome of coordinate preparation.
#[derive(Clone, Debug)]
pub enum Prep {
    /// The initial form is a unit times the nu-th power of a linear form; the
    /// model has been rewritten so that form is y.
    Prepared(PreparedModel),
    /// The initial form is not a power of a single linear form.
    DirectrixZero { nu: u32 },
}

/// Projected polyhedron: generator points A/(nu - b) in Q^e together with the
/// vertex subset of conv(generators + R^e_{>=0}).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjPolyhedron {
    pub dim: usize,
    pub generators: Vec<Vec<BigRational>>,
    pub vertices: Vec<Vec<BigRational>>,
}

impl ProjPolyhedron {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Minimal coordinate sum over the vertices; `None` encodes +infinity
    /// (empty polyhedron).
    pub fn delta(&self) -> Option<BigRational> {
        self.vertices
            .iter()
            .map(|v| v.iter().sum::<BigRational>())
            .min()
    }
}

/// Data attached to one polyhedron vertex.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub vertex: Vec<BigRational>,
    /// Quasi-homogeneous initial form at the vertex, including the y^nu term.
    pub initial_form: Poly,
    /// The witness lambda when the vertex is solvable.
    pub solvable: Option<FieldElem>,
}

/// Result of dissolving a prepared model to its minimal polyhedron.
#[derive(Clone, Debug)]
pub struct CharPolyResult {
    /// The model after all dissolution substitutions (y renamed in meaning,
    /// not in text: the final y-parameter is the "z" of the face lift).
    pub model: LocalModel,
    pub nu: u32,
    /// Dissolution log: each entry (v, lambda) records the substitution
    /// y := y' + lambda * x^v.
    pub z_change: Vec<(Vec<u32>, FieldElem)>,
    pub polyhedron: ProjPolyhedron,
    /// `None` encodes delta = +infinity (empty polyhedron).
    pub delta: Option<BigRational>,
    /// The face lift F_delta with the original coefficients as their own
    /// lifts; equals a lift of the initial form in the directrix-zero branch.
    pub f_delta: Poly,
    pub directrix_zero: bool,
}

/// The per-point invariant (a1, a2) = (nu, delta * nu), ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub a1: u32,
    pub a2: BigRational,
}

impl PartialOrd for Invariant {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Invariant {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.a1
            .cmp(&other.a1)
            .then_with(|| self.a2.cmp(&other.a2))
    }
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.a1, self.a2)
    }
}

/// Split nu = p^k * nu' with p the characteristic and p not dividing nu'.
/// In characteristic zero this is (1, nu).
fn p_power_split(char_p: u64, nu: u32) -> (u32, u32) {
    if char_p == 0 {
        return (1, nu);
    }
    let p = char_p as u32;
    let mut pk = 1u32;
    let mut rest = nu;
    while rest % p == 0 {
        pk *= p;
        rest /= p;
    }
    (pk, rest)
}

/// Coefficientwise p^k-th root of a polynomial: every exponent must be
/// divisible by p^k and every coefficient must have a p^k-th root.
fn poly_p_power_root(g: &Poly, p: u64, k: u32) -> Result<Option<Poly>> {
    if k == 0 {
        return Ok(Some(g.clone()));
    }
    let pk = (p as u32).pow(k);
    let mut out = Poly::zero(g.tower(), g.vars());
    for (m, c) in g.terms() {
        if m.0.iter().any(|&e| e % pk != 0) {
            return Ok(None);
        }
        let mut r = c;
        for _ in 0..k {
            match roots::pth_root(&r)? {
                Some(s) => r = s,
                None => return Ok(None),
            }
        }
        let e: Vec<u32> = m.0.iter().map(|&x| x / pk).collect();
        out = out.add(&Poly::monomial(g.tower(), g.vars(), Mono(e), &r))?;
    }
    Ok(Some(out))
}

/// Decide whether the homogeneous form `g` (already normalized so some pure
/// power w^d has coefficient 1) is the d-th power of a linear form; returns
/// the linear form when it is.
fn power_of_linear(g: &Poly, pivot: usize, d: u32) -> Result<Option<Poly>> {
    if d == 1 {
        return Ok(Some(g.clone()));
    }
    // Candidate linear form from the w^(d-1) coefficient: g = (w + l/d)^d
    // requires the w^(d-1) coefficient to be d * l.
    let coeffs = g.coeffs_in(pivot);
    let linear_num = if (coeffs.len() as u32) > d - 1 {
        coeffs[(d - 1) as usize].clone()
    } else {
        Poly::zero(g.tower(), g.vars())
    };
    let d_inv = g.tower().from_i64(d as i64).inv()?;
    let ell = linear_num.scale(&d_inv);
    if !ell.is_zero() && ell.total_degree() != Some(1) {
        return Ok(None);
    }
    let cand = Poly::var(g.tower(), g.vars(), pivot).add(&ell)?;
    if cand.pow(d)? == *g {
        Ok(Some(cand))
    } else {
        Ok(None)
    }
}

/// Decide whether the initial form is a unit times the nu-th power of a
/// linear form, and if so rewrite the model so that form becomes y.
pub fn maximal_contact_prep(m: &LocalModel) -> Result<Prep> {
    let nu = m.ord_at_origin()?;
    let inform = m.initial_form()?;
    let p = m.tower.characteristic();
    let (pk, nu_red) = p_power_split(p, nu);
    let n_vars = m.f.vars().len();
    // A power of a linear form always contains a pure power of each variable
    // occurring in the form; pick the y-candidate first for determinism.
    let yi = m.y_index();
    let mut pivot_order: Vec<usize> = vec![yi];
    pivot_order.extend(0..m.e());
    let mut found: Option<(usize, Poly)> = None;
    for &w in &pivot_order {
        let mut e = vec![0u32; n_vars];
        e[w] = nu;
        let c = inform.coeff(&Mono(e));
        if c.is_zero() {
            continue;
        }
        let g = inform.scale(&c.inv()?);
        let Some(root) = poly_p_power_root(&g, p, if p == 0 { 0 } else { pk_log(p, pk) })? else {
            continue;
        };
        if let Some(lin) = power_of_linear(&root, w, nu_red)? {
            found = Some((w, lin));
            break;
        }
    }
    let Some((_, lin)) = found else {
        return Ok(Prep::DirectrixZero { nu });
    };
    // The linear form in the current frame; make y its leading variable,
    // swapping a parameter into the y role when y does not occur.
    let mut model = m.clone();
    let mut changes: Vec<String> = Vec::new();
    let mut lin = lin;
    let y_coeff = {
        let mut e = vec![0u32; n_vars];
        e[model.y_index()] = 1;
        lin.coeff(&Mono(e))
    };
    if y_coeff.is_zero() {
        // The form involves only x-parameters: swap the first occurring one
        // with y.
        let j = (0..model.e())
            .find(|&i| {
                let mut e = vec![0u32; n_vars];
                e[i] = 1;
                !lin.coeff(&Mono(e)).is_zero()
            })
            .ok_or_else(|| Error::Internal("linear form without support".into()))?;
        let mut new_x = model.xparams.clone();
        new_x[j] = model.yparam.clone();
        let new_y = model.xparams[j].clone();
        let mut new_vars = new_x.clone();
        new_vars.push(new_y.clone());
        // Old index i maps to the slot where its name now lives.
        let mut map = vec![0usize; n_vars];
        for (i, name) in model.f.vars().iter().enumerate() {
            map[i] = new_vars
                .iter()
                .position(|v| v == name)
                .expect("permuted frame keeps all names");
        }
        let f2 = model.f.reframe(&new_vars, &map);
        lin = lin.reframe(&new_vars, &map);
        changes.push(format!(
            "swap parameters {} and {}",
            model.yparam, new_y
        ));
        model = LocalModel::new(model.tower.clone(), new_x, new_y, f2)?;
    }
    let yi = model.y_index();
    let n_vars = model.f.vars().len();
    let y_coeff = {
        let mut e = vec![0u32; n_vars];
        e[yi] = 1;
        lin.coeff(&Mono(e))
    };
    // Normalize the linear form monic in y: L = y + sum beta_i x_i.
    let lin = lin.scale(&y_coeff.inv()?);
    let shift = lin.sub(&Poly::var(&model.tower, model.f.vars(), yi))?;
    if !shift.is_zero() {
        // New coordinate y' = y + shift, so substitute y -> y - shift.
        let vars = model.f.vars().to_vec();
        let mut images: Vec<Poly> = (0..n_vars)
            .map(|i| Poly::var(&model.tower, &vars, i))
            .collect();
        images[yi] = images[yi].sub(&shift)?;
        let f2 = model.f.substitute(&images)?;
        changes.push(format!(
            "{} := {} + {}",
            model.yparam,
            model.yparam,
            shift.render()
        ));
        model = LocalModel::new(
            model.tower.clone(),
            model.xparams.clone(),
            model.yparam.clone(),
            f2,
        )?;
    }
    // Normalize the unit scalar so the degree-nu part is exactly y^nu.
    let c = {
        let mut e = vec![0u32; n_vars];
        e[yi] = nu;
        model.f.coeff(&Mono(e))
    };
    if c.is_zero() {
        return Err(Error::Internal(
            "prepared model lost its pure y^nu term".into(),
        ));
    }
    let f2 = model.f.scale(&c.inv()?);
    let model = LocalModel::new(
        model.tower.clone(),
        model.xparams.clone(),
        model.yparam.clone(),
        f2,
    )?;
    // Sanity: the degree-nu part must now be exactly y^nu.
    let check = model.initial_form()?;
    let mut e = vec![0u32; n_vars];
    e[yi] = nu;
    let pure = Poly::monomial(&model.tower, model.f.vars(), Mono(e), &model.tower.one());
    if check != pure {
        return Err(Error::Internal(
            "preparation did not reduce the initial form to y^nu".into(),
        ));
    }
    Ok(Prep::Prepared(PreparedModel { model, nu, changes }))
}

fn pk_log(p: u64, pk: u32) -> u32 {
    let mut k = 0;
    let mut v = pk;
    while v > 1 {
        v /= p as u32;
        k += 1;
    }
    k
}

/// Build the projected polyhedron of a prepared model: generator points
/// A/(nu - b) over all terms with y-exponent b < nu.
pub fn build_polyhedron(pm: &PreparedModel) -> Result<ProjPolyhedron> {
    let e = pm.model.e();
    if e > 2 {
        return Err(Error::InvalidInput(
            "projected polyhedra are supported for at most two parameters".into(),
        ));
    }
    let yi = pm.model.y_index();
    let nu = pm.nu;
    let mut gens: Vec<Vec<BigRational>> = Vec::new();
    for (m, _) in pm.model.f.terms() {
        let b = m.0[yi];
        if b >= nu {
            continue;
        }
        let den = BigInt::from(nu - b);
        let pt: Vec<BigRational> = (0..e)
            .map(|i| BigRational::new(BigInt::from(m.0[i]), den.clone()))
            .collect();
        if !gens.contains(&pt) {
            gens.push(pt);
        }
    }
    gens.sort();
    let vertices = hull_vertices(e, &gens);
    Ok(ProjPolyhedron {
        dim: e,
        generators: gens,
        vertices,
    })
}

/// Vertices of conv(points + R^e_{>=0}) for e <= 2.
fn hull_vertices(e: usize, gens: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if gens.is_empty() {
        return Vec::new();
    }
    if e == 1 {
        return vec![gens.iter().min().unwrap().clone()];
    }
    // Domination pruning: drop points coordinatewise >= another point.
    let mut pts: Vec<Vec<BigRational>> = Vec::new();
    'outer: for p in gens {
        for q in gens {
            if q != p && q[0] <= p[0] && q[1] <= p[1] {
                continue 'outer;
            }
        }
        if !pts.contains(p) {
            pts.push(p.clone());
        }
    }
    // The survivors form an antichain: sort by first coordinate ascending
    // (second then descends) and keep the convex lower-left chain.
    pts.sort_by(|a, b| a[0].cmp(&b[0]).then_with(|| b[1].cmp(&a[1])));
    let mut chain: Vec<Vec<BigRational>> = Vec::new();
    for p in pts {
        while chain.len() >= 2 {
            let a = &chain[chain.len() - 2];
            let b = &chain[chain.len() - 1];
            // Keep b only when the chain turns convexly at b.
            let cross = (&b[0] - &a[0]) * (&p[1] - &b[1]) - (&b[1] - &a[1]) * (&p[0] - &b[0]);
            if cross <= BigRational::zero() {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    chain
}

/// The quasi-homogeneous initial form of the model at a polyhedron vertex,
/// including the y^nu term.
pub fn initial_at_vertex(
    pm: &PreparedModel,
    poly: &ProjPolyhedron,
    v: &[BigRational],
) -> Result<VertexData> {
    if !poly.vertices.iter().any(|w| w.as_slice() == v) {
        return Err(Error::InvalidInput(
            "the given point is not a vertex of the polyhedron".into(),
        ));
    }
    let e = pm.model.e();
    let yi = pm.model.y_index();
    let nu = pm.nu;
    let mut form = Poly::zero(&pm.model.tower, pm.model.f.vars());
    for (m, c) in pm.model.f.terms() {
        let b = m.0[yi];
        let keep = if b == nu {
            m.0[..e].iter().all(|&x| x == 0)
        } else if b > nu {
            false
        } else {
            let den = BigInt::from(nu - b);
            (0..e).all(|i| BigRational::new(BigInt::from(m.0[i]), den.clone()) == v[i])
        };
        if keep {
            form = form.add(&Poly::monomial(
                &pm.model.tower,
                pm.model.f.vars(),
                m.clone(),
                &c,
            ))?;
        }
    }
    let solvable = vertex_solvable_form(&pm.model, nu, v, &form)?;
    Ok(VertexData {
        vertex: v.to_vec(),
        initial_form: form,
        solvable,
    })
}

/// Solvability of a vertex: v must be integral and the initial form must
/// expand exactly as (y - lambda * x^v)^nu.
pub fn vertex_solvable(vd: &VertexData, model: &LocalModel, nu: u32) -> Result<Option<FieldElem>> {
    vertex_solvable_form(model, nu, &vd.vertex, &vd.initial_form)
}

fn vertex_solvable_form(
    model: &LocalModel,
    nu: u32,
    v: &[BigRational],
    form: &Poly,
) -> Result<Option<FieldElem>> {
    if !v.iter().all(|c| c.denom().is_one()) {
        return Ok(None);
    }
    let vi: Vec<u32> = v
        .iter()
        .map(|c| {
            c.numer()
                .try_into()
                .map_err(|_| Error::InvalidInput("vertex coordinate out of range".into()))
        })
        .collect::<Result<Vec<u32>>>()?;
    let p = model.tower.characteristic();
    let (pk, nu_red) = p_power_split(p, nu);
    let yi = model.y_index();
    let n_vars = model.f.vars().len();
    // Candidate from the coefficient at y^(nu - p^k), x^(v * p^k):
    // (y - lambda x^v)^nu has coefficient -nu' * lambda^(p^k) there.
    let mut e = vec![0u32; n_vars];
    for (i, &x) in vi.iter().enumerate() {
        e[i] = x * pk;
    }
    e[yi] = nu - pk;
    let c = form.coeff(&Mono(e));
    let nu_red_inv = model.tower.from_i64(nu_red as i64).inv()?;
    let target = c.neg().mul(&nu_red_inv)?;
    let lambda = match roots::nth_root(&target, pk as u64)? {
        Some(l) => l,
        None => return Ok(None),
    };
    // Exact verification: expand (y - lambda x^v)^nu.
    let vars = model.f.vars().to_vec();
    let mut xv = Poly::constant(&model.tower, &vars, &lambda);
    for (i, &x) in vi.iter().enumerate() {
        xv = xv.mul(&Poly::var(&model.tower, &vars, i).pow(x)?)?;
    }
    let lin = Poly::var(&model.tower, &vars, yi).sub(&xv)?;
    if lin.pow(nu)? == *form {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// Dissolve every solvable vertex (lexicographically smallest first) until
/// the polyhedron is minimal. Always budgeted: the quasi-regularity pre-check
/// is the caller's guard, the budget is the hard stop.
pub fn dissolve(pm: &PreparedModel) -> Result<CharPolyResult> {
    let nu = pm.nu;
    let e = pm.model.e();
    let deg_x = pm
        .model
        .f
        .terms()
        .map(|(m, _)| m.0[..e].iter().sum::<u32>())
        .max()
        .unwrap_or(0);
    let budget = (4 * deg_x as usize * nu as usize).max(1);
    let mut cur = pm.clone();
    let mut z_change: Vec<(Vec<u32>, FieldElem)> = Vec::new();
    let mut steps = 0usize;
    let mut poly = build_polyhedron(&cur)?;
    let mut prev_delta = poly.delta();
    loop {
        let mut sorted = poly.vertices.clone();
        sorted.sort();
        let mut solved = None;
        for v in &sorted {
            let vd = initial_at_vertex(&cur, &poly, v)?;
            if let Some(lambda) = vd.solvable {
                solved = Some((v.clone(), lambda));
                break;
            }
        }
        let Some((v, lambda)) = solved else {
            break;
        };
        if steps >= budget {
            return Err(Error::DissolutionBudget { budget });
        }
        steps += 1;
        let vi: Vec<u32> = v
            .iter()
            .map(|c| c.numer().try_into().unwrap())
            .collect();
        let next = cur.model.shift_substitute(&vi, &lambda)?;
        if next.ord_at_origin()? != nu {
            return Err(Error::Internal(
                "dissolution changed the order at the origin".into(),
            ));
        }
        let next_pm = PreparedModel {
            model: next,
            nu,
            changes: cur.changes.clone(),
        };
        let next_poly = build_polyhedron(&next_pm)?;
        // The solved vertex disappears and nothing at or below it reappears.
        for w in &next_poly.vertices {
            if (0..e).all(|i| w[i] <= v[i]) {
                return Err(Error::Internal(
                    "dissolution did not strictly shrink the polyhedron".into(),
                ));
            }
        }
        let next_delta = next_poly.delta();
        if let (Some(old), Some(new)) = (&prev_delta, &next_delta) {
            if new < old {
                return Err(Error::Internal("delta decreased along dissolution".into()));
            }
        }
        z_change.push((vi, lambda));
        cur = next_pm;
        poly = next_poly;
        prev_delta = next_delta;
    }
    let delta = poly.delta();
    let f_delta = match &delta {
        Some(d) => delta_initial_lift(&cur.model, nu, d)?,
        None => Poly::zero(&cur.model.tower, cur.model.f.vars()),
    };
    Ok(CharPolyResult {
        model: cur.model,
        nu,
        z_change,
        polyhedron: poly,
        delta,
        f_delta,
        directrix_zero: false,
    })
}

/// The face lift F_delta: the terms of f with |A|/(delta*nu) + b/nu = 1,
/// using the original coefficients as their own lifts.
pub fn delta_initial_lift(model: &LocalModel, nu: u32, delta: &BigRational) -> Result<Poly> {
    let e = model.e();
    let yi = model.y_index();
    let nu_q = BigRational::from_integer(BigInt::from(nu));
    let dn = delta * &nu_q;
    let mut out = Poly::zero(&model.tower, model.f.vars());
    for (m, c) in model.f.terms() {
        let a: u32 = m.0[..e].iter().sum();
        let b = m.0[yi];
        let lhs = BigRational::from_integer(BigInt::from(a)) / &dn
            + BigRational::new(BigInt::from(b), BigInt::from(nu));
        if lhs.is_one() {
            out = out.add(&Poly::monomial(&model.tower, model.f.vars(), m.clone(), &c))?;
        }
    }
    Ok(out)
}

/// True iff the reduction of { f = 0 } is regular at the origin: the radical
/// of f has order at most one there.
pub fn quasiregular_check(m: &LocalModel) -> Result<bool> {
    let r = radical(&m.f)?;
    Ok(r.ord().map(|o| o <= 1).unwrap_or(false))
}

/// Product of the distinct irreducible factors of f (up to a unit). Over
/// perfect coefficient fields this is exact; over imperfect towers a purely
/// inseparable product that is not a global p-th power may retain
/// multiplicity, which only over-approximates the order test conservatively.
fn radical(f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.total_degree() == Some(0) {
        return Ok(Poly::one(f.tower(), f.vars()));
    }
    let n = f.vars().len();
    let partials: Vec<Poly> = (0..n)
        .map(|i| f.partial_derivative(i))
        .filter(|p| !p.is_zero())
        .collect();
    if partials.is_empty() {
        // Every exponent is divisible by p; try a full p-th root first.
        let p = f.tower().characteristic();
        if p == 0 {
            return Err(Error::Internal("constant slipped past the degree check".into()));
        }
        if let Some(root) = poly_p_power_root(f, p, 1)? {
            return radical(&root);
        }
        let g = deflate_all(f, p as u32)?;
        let rg = radical(&g)?;
        let inflated = inflate_all(&rg, p as u32)?;
        if let Some(root) = poly_p_power_root(&inflated, p, 1)? {
            return radical(&root);
        }
        return Ok(inflated);
    }
    let mut d = f.clone();
    for q in &partials {
        d = poly_gcd(&d, q)?;
    }
    if d.total_degree() == Some(0) {
        return Ok(f.clone());
    }
    let s = exact_div(f, &d)?;
    let rd = radical(&d)?;
    let g = poly_gcd(&s, &rd)?;
    s.mul(&exact_div(&rd, &g)?)
}

fn deflate_all(f: &Poly, p: u32) -> Result<Poly> {
    let mut out = Poly::zero(f.tower(), f.vars());
    for (m, c) in f.terms() {
        if m.0.iter().any(|&e| e % p != 0) {
            return Err(Error::Internal("deflation on non-divisible exponent".into()));
        }
        let e: Vec<u32> = m.0.iter().map(|&x| x / p).collect();
        out = out.add(&Poly::monomial(f.tower(), f.vars(), Mono(e), &c))?;
    }
    Ok(out)
}

fn inflate_all(f: &Poly, p: u32) -> Result<Poly> {
    let mut out = Poly::zero(f.tower(), f.vars());
    for (m, c) in f.terms() {
        let e: Vec<u32> = m.0.iter().map(|&x| x * p).collect();
        out = out.add(&Poly::monomial(f.tower(), f.vars(), Mono(e), &c))?;
    }
    Ok(out)
}

/// Full pipeline: reject quasi-regular inputs, prepare coordinates, dissolve,
/// and report the invariant together with the dissolution result.
pub fn invariant(m: &LocalModel) -> Result<(Invariant, CharPolyResult)> {
    if quasiregular_check(m)? {
        return Err(Error::QuasiRegular(
            "the reduction is regular at the origin; no invariant is defined".into(),
        ));
    }
    let nu_q = |nu: u32| BigRational::from_integer(BigInt::from(nu));
    match maximal_contact_prep(m)? {
        Prep::Prepared(pm) => {
            let r = dissolve(&pm)?;
            let delta = r.delta.clone().ok_or_else(|| {
                Error::QuasiRegular(
                    "dissolution emptied the polyhedron; the input is a unit times a power of a regular parameter".into(),
                )
            })?;
            let a2 = &delta * nu_q(r.nu);
            Ok((Invariant { a1: r.nu, a2 }, r))
        }
        Prep::DirectrixZero { nu } => {
            let f_delta = m.initial_form()?;
            let r = CharPolyResult {
                model: m.clone(),
                nu,
                z_change: Vec::new(),
                polyhedron: ProjPolyhedron {
                    dim: m.e(),
                    generators: Vec::new(),
                    vertices: Vec::new(),
                },
                delta: Some(BigRational::one()),
                f_delta,
                directrix_zero: true,
            };
            Ok((
                Invariant {
                    a1: nu,
                    a2: nu_q(nu),
                },
                r,
            ))
        }
    }
}

// ---- rendering -------------------------------------------------------------

/// JSON dump of the polyhedron, delta, and the dissolution log.
pub fn result_to_json(r: &CharPolyResult) -> serde_json::Value {
    let fmt_pt = |v: &Vec<BigRational>| {
        serde_json::Value::Array(v.iter().map(|c| serde_json::Value::String(c.to_string())).collect())
    };
    serde_json::json!({
        "nu": r.nu,
        "delta": r.delta.as_ref().map(|d| d.to_string()),
        "directrix_zero": r.directrix_zero,
        "generators": r.polyhedron.generators.iter().map(fmt_pt).collect::<Vec<_>>(),
        "vertices": r.polyhedron.vertices.iter().map(fmt_pt).collect::<Vec<_>>(),
        "dissolution": r.z_change.iter().map(|(v, l)| serde_json::json!({
            "vertex": v,
            "lambda": l.render(),
        })).collect::<Vec<_>>(),
        "face_lift": r.f_delta.render(),
        "model": r.model.f.render(),
    })
}

/// ASCII sketch of the polyhedron for one or two parameters.
pub fn polyhedron_to_ascii(p: &ProjPolyhedron) -> String {
    if p.generators.is_empty() {
        return "(empty polyhedron)\n".to_string();
    }
    if p.dim == 1 {
        let mut out = String::from("axis: ");
        for v in &p.vertices {
            out.push_str(&format!("[{}] ", v[0]));
        }
        for g in &p.generators {
            if !p.vertices.contains(g) {
                out.push_str(&format!("{} ", g[0]));
            }
        }
        out.push('\n');
        return out;
    }
    // Plot on a small grid; rows print top to bottom.
    let width = 41usize;
    let height = 21usize;
    let max = p
        .generators
        .iter()
        .flat_map(|v| v.iter())
        .max()
        .cloned()
        .unwrap_or_else(BigRational::one);
    let max = if max.is_zero() { BigRational::one() } else { max };
    let mut grid = vec![vec![b'.'; width]; height];
    let place = |c: &BigRational, cells: usize| -> usize {
        let t = c / &max;
        let num: f64 = t.numer().to_string().parse().unwrap_or(0.0);
        let den: f64 = t.denom().to_string().parse().unwrap_or(1.0);
        (((num / den) * (cells as f64 - 1.0)).round() as usize).min(cells - 1)
    };
    for g in &p.generators {
        let col = place(&g[0], width);
        let row = height - 1 - place(&g[1], height);
        grid[row][col] = b'o';
    }
    for v in &p.vertices {
        let col = place(&v[0], width);
        let row = height - 1 - place(&v[1], height);
        grid[row][col] = b'V';
    }
    let mut out = String::new();
    for row in grid {
        out.push_str(std::str::from_utf8(&row).unwrap());
        out.push('\n');
    }
    out.push_str(&format!(
        "V = vertex, o = generator; axes scaled to max coordinate {max}\n"
    ));
    out
}

/// SVG rendering of the polyhedron for one or two parameters.
pub fn polyhedron_to_svg(p: &ProjPolyhedron, delta: Option<&BigRational>) -> String {
    let size = 360.0f64;
    let margin = 30.0f64;
    let to_f = |c: &BigRational| -> f64 {
        let num: f64 = c.numer().to_string().parse().unwrap_or(0.0);
        let den: f64 = c.denom().to_string().parse().unwrap_or(1.0);
        num / den
    };
    let max = p
        .generators
        .iter()
        .flat_map(|v| v.iter())
        .map(to_f)
        .fold(1.0f64, f64::max);
    let sx = |x: f64| margin + x / max * (size - 2.0 * margin);
    let sy = |y: f64| size - margin - y / max * (size - 2.0 * margin);
    let mut body = String::new();
    body.push_str(&format!(
        "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='black'/>\n",
        sx(0.0), sy(0.0), sx(max), sy(0.0)
    ));
    body.push_str(&format!(
        "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='black'/>\n",
        sx(0.0), sy(0.0), sx(0.0), sy(max)
    ));
    if let Some(d) = delta {
        // The face line: coordinate sum = delta.
        let d = to_f(d);
        body.push_str(&format!(
            "<line x1='{}' y1='{}' x2='{}' y2='{}' stroke='blue' stroke-dasharray='4'/>\n",
            sx(0.0), sy(d), sx(d), sy(0.0)
        ));
    }
    for g in &p.generators {
        let (gx, gy) = if p.dim == 1 {
            (to_f(&g[0]), 0.0)
        } else {
            (to_f(&g[0]), to_f(&g[1]))
        };
        let is_v = p.vertices.contains(g);
        body.push_str(&format!(
            "<circle cx='{}' cy='{}' r='{}' fill='{}'/>\n",
            sx(gx), sy(gy),
            if is_v { 5 } else { 3 },
            if is_v { "red" } else { "gray" }
        ));
        if is_v {
            let label = if p.dim == 1 {
                format!("({}, 0)", g[0])
            } else {
                format!("({}, {})", g[0], g[1])
            };
            body.push_str(&format!(
                "<text x='{}' y='{}' font-size='12'>{}</text>\n",
                sx(gx) + 7.0,
                sy(gy) - 7.0,
                label
            ));
        }
    }
    format!(
        "<svg xmlns='http://www.w3.org/2000/svg' width='{size}' height='{size}' viewBox='0 0 {size} {size}'>\n{body}</svg>\n"
    )
}
