//! The resolution loop: enumerate singular points on the exceptional locus,
//! localize to fresh two-parameter models (extending the coefficient field by
//! the point's minimal polynomial when needed), blow up along the maximal
//! center, certify the order drop edge by edge, and assemble the tree with
//! strictly descending invariants.

use crate::charpoly::{invariant, quasiregular_check, CharPolyResult, Invariant};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElem, Tower, UPoly};
use crate::mpoly::{LocalModel, Poly};
use crate::wblowup::{
    center_from_invariant, log_order, proper_transform, reduce_center, rees_chart, stabilizers,
    BPlusChart, Center, ProperTransform, ReducedCenter, StabilizerReport,
};

/// Where an exceptional point sits in the chart (s, p1', p2').
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitLocus {
    /// The special point s = p2' = 0 (on the p1'-axis).
    P1Axis,
    /// The special point s = p1' = 0 (on the p2'-axis).
    P2Axis,
    /// A point with both chart coordinates nonzero: p1' a root of the stored
    /// irreducible polynomial in the p2' = 1 slice.
    Generic { minpoly: String },
}

impl OrbitLocus {
    fn sort_key(&self) -> (u8, String) {
        match self {
            OrbitLocus::P1Axis => (0, String::new()),
            OrbitLocus::P2Axis => (1, String::new()),
            OrbitLocus::Generic { minpoly } => (2, minpoly.clone()),
        }
    }
}

/// One closed point of the exceptional locus where the transform vanishes.
#[derive(Clone, Debug)]
pub struct ExcPoint {
    pub locus: OrbitLocus,
    /// Tower containing the point's coordinates (the chart tower, possibly
    /// extended by the point's minimal polynomial).
    pub ext: Tower,
    /// Chart coordinates (p1', p2') of the point on {s = 0}.
    pub coords: (FieldElem, FieldElem),
    /// Log order of the transform at the point.
    pub order: u32,
    /// Whether the reduction of the transform is singular at the point.
    pub singular: bool,
    /// The localized two-parameter model at the point (slice coordinates).
    pub model: LocalModel,
}

/// Certificate that the order dropped below the parent multiplicity at every
/// enumerated exceptional point.
#[derive(Clone, Debug)]
pub struct OrderDropCertificate {
    pub parent_a1: u32,
    pub entries: Vec<CertEntry>,
}

#[derive(Clone, Debug)]
pub struct CertEntry {
    pub point: String,
    pub residue_field: String,
    pub order: u32,
}

/// The chart-level, torus-semi-invariant description of a center supported
/// at an exceptional point.
#[derive(Clone, Debug)]
pub struct EquivariantCenter {
    /// Rendered chart expressions for the two center generators.
    pub generators: (String, String),
    /// Torus character of each generator under (-1, w1, w2).
    pub characters: (i64, i64),
}

/// Everything attached to a blow-up node.
#[derive(Clone, Debug)]
pub struct BlowupData {
    pub invariant: Invariant,
    /// Dissolution log: (vertex, rendered lambda).
    pub dissolution: Vec<(Vec<u32>, String)>,
    pub center: Center,
    pub reduced: ReducedCenter,
    pub chart: BPlusChart,
    pub stabilizers: StabilizerReport,
    pub transform: ProperTransform,
    pub certificate: OrderDropCertificate,
}

#[derive(Clone, Debug)]
pub enum NodeKind {
    /// The reduction is regular here; nothing to do.
    RegularLeaf,
    /// A blow-up was performed; children follow the singular points.
    Blowup(Box<BlowupData>),
}

#[derive(Clone, Debug)]
pub struct ResolutionNode {
    pub label: String,
    pub tower: String,
    pub f: String,
    pub kind: NodeKind,
    pub children: Vec<(String, ResolutionNode)>,
}

#[derive(Clone, Debug)]
pub struct ResolutionTree {
    pub root: ResolutionNode,
    pub max_depth: usize,
}

const MAX_DEPTH: usize = 64;

/// Resolve a one-parameter local model: iterate maximal-center blow-ups until
/// every leaf has regular reduction, certifying the order drop on each edge.
pub fn resolve(m: &LocalModel) -> Result<ResolutionTree> {
    let mut max_depth = 0;
    let root = resolve_node(m, "root", 0, None, &mut max_depth)?;
    Ok(ResolutionTree { root, max_depth })
}

fn resolve_node(
    m: &LocalModel,
    label: &str,
    depth: usize,
    parent_inv: Option<&Invariant>,
    max_depth: &mut usize,
) -> Result<ResolutionNode> {
    *max_depth = (*max_depth).max(depth);
    if depth > MAX_DEPTH {
        return Err(Error::BudgetExhausted(format!(
            "resolution exceeded the depth cap at chart '{label}'"
        )));
    }
    let base = ResolutionNode {
        label: label.to_string(),
        tower: m.tower.descriptor(),
        f: m.f.render(),
        kind: NodeKind::RegularLeaf,
        children: Vec::new(),
    };
    if quasiregular_check(m)? {
        return Ok(base);
    }
    let (inv, r) = invariant(m)?;
    if let Some(parent) = parent_inv {
        if &inv >= parent {
            return Err(Error::Internal(format!(
                "invariant did not strictly descend at chart '{label}': {inv} vs parent {parent}"
            )));
        }
    }
    let step = blowup_step(&r, &inv)?;
    let points = exceptional_points(&step.transform, &step.chart, &r.model.tower)?;
    let certificate = certify_order_drop(&points, inv.a1)?;
    let mut children = Vec::new();
    for pt in &points {
        if !pt.singular {
            continue;
        }
        let child_label = format!("{label}/{}", locus_label(&pt.locus));
        let node = resolve_node(&pt.model, &child_label, depth + 1, Some(&inv), max_depth)?;
        children.push((locus_label(&pt.locus), node));
    }
    children.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(ResolutionNode {
        kind: NodeKind::Blowup(Box::new(BlowupData {
            invariant: inv,
            dissolution: r
                .z_change
                .iter()
                .map(|(v, l)| (v.clone(), l.render()))
                .collect(),
            center: step.center,
            reduced: step.reduced,
            chart: step.chart,
            stabilizers: step.stabilizers,
            transform: step.transform,
            certificate,
        })),
        children,
        ..base
    })
}

fn locus_label(l: &OrbitLocus) -> String {
    match l {
        OrbitLocus::P1Axis => "special:p1-axis".to_string(),
        OrbitLocus::P2Axis => "special:p2-axis".to_string(),
        OrbitLocus::Generic { minpoly } => format!("generic:{minpoly}"),
    }
}

/// One blow-up applied to a dissolved model.
pub struct StepData {
    pub center: Center,
    pub reduced: ReducedCenter,
    pub chart: BPlusChart,
    pub stabilizers: StabilizerReport,
    pub transform: ProperTransform,
}

/// Build center, chart, and proper transform for an invariant computed on a
/// dissolved model, re-verifying semi-invariance and the slice identities.
pub fn blowup_step(r: &CharPolyResult, inv: &Invariant) -> Result<StepData> {
    let center = center_from_invariant(&r.model, inv)?;
    let reduced = reduce_center(&center)?;
    let chart = rees_chart(&r.model, &center, &reduced)?;
    let transform = proper_transform(&r.model, &center, &reduced, &chart)?;
    check_semi_invariance(&transform, &chart)?;
    check_slice_identities(&r.model, &center, &reduced, &chart, &transform)?;
    let stabilizers = stabilizers(&chart);
    Ok(StepData {
        center,
        reduced,
        chart,
        stabilizers,
        transform,
    })
}

/// Every term of the transform must carry the same torus character l under
/// the chart weights (-1, w1, w2).
fn check_semi_invariance(tr: &ProperTransform, chart: &BPlusChart) -> Result<()> {
    for (m, _) in tr.f_prime.terms() {
        let chi: i64 = m
            .0
            .iter()
            .zip(&chart.gm_weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum();
        if chi != tr.ell as i64 {
            return Err(Error::Internal(format!(
                "transform is not semi-invariant: character {} != {}",
                chi, tr.ell
            )));
        }
    }
    Ok(())
}

/// The three structural identities of the graded chart, re-checked on every
/// blow-up: the Rees identity, the s=1 slice, and the s=0 slice.
fn check_slice_identities(
    m: &LocalModel,
    center: &Center,
    rc: &ReducedCenter,
    chart: &BPlusChart,
    tr: &ProperTransform,
) -> Result<()> {
    let vars = &chart.variables;
    let tower = m.f.tower();
    let s = Poly::var(tower, vars, 0);
    // Map the model frame into the chart frame.
    let map: Vec<usize> = m
        .f
        .vars()
        .iter()
        .map(|v| vars.iter().position(|w| w == v).unwrap())
        .collect();
    let f_chart = m.f.reframe(vars, &map);
    // Rees identity: s^l * f' = f(s^w1 p1', s^w2 p2').
    let images = vec![
        s.clone(),
        s.pow(rc.weights.0)?.mul(&Poly::var(tower, vars, 1))?,
        s.pow(rc.weights.1)?.mul(&Poly::var(tower, vars, 2))?,
    ];
    let pulled = f_chart.substitute(&images)?;
    if s.pow(rc.ell)?.mul(&tr.f_prime)? != pulled {
        return Err(Error::Internal("Rees identity violated".into()));
    }
    // s = 1 recovers the source.
    if tr.f_prime.set_var_one(0) != f_chart {
        return Err(Error::Internal("s = 1 slice identity violated".into()));
    }
    // s = 0 is the leading split.
    let (lead, _) = crate::wblowup::split_leading(&m.f, center)?;
    if tr.f_lead != lead.reframe(vars, &map) {
        return Err(Error::Internal("s = 0 slice identity violated".into()));
    }
    Ok(())
}

/// Enumerate every closed point of the exceptional locus {s = 0} (outside
/// the excluded locus) where the transform vanishes: the two special points
/// plus the roots of the dehomogenized slice, grouped by irreducible factor
/// with a field-of-definition extension per factor.
pub fn exceptional_points(
    tr: &ProperTransform,
    chart: &BPlusChart,
    tower: &Tower,
) -> Result<Vec<ExcPoint>> {
    let mut out = Vec::new();
    // Dehomogenize along the coordinate whose weight is a unit in the
    // residue characteristic: a torus orbit is tangent to the slice
    // {p_i' = 1} exactly when the characteristic divides w_i, and since
    // gcd(w1, w2) = 1 at least one coordinate is always usable. Prefer
    // p2' = 1 (slice univariate in p1') when both work.
    let p = tower.characteristic();
    let (w1, w2) = chart.reduced.weights;
    let slice_p2 = !(p > 0 && u64::from(w2) % p == 0);
    if !slice_p2 && p > 0 && u64::from(w1) % p == 0 {
        return Err(Error::Internal("weights are not coprime".into()));
    }
    let (unit_idx, kept_idx) = if slice_p2 { (2, 1) } else { (1, 2) };
    let g = tr.f_lead.set_var_one(unit_idx).to_univariate(kept_idx)?;
    if g.is_zero() {
        return Err(Error::Internal("exceptional slice vanished".into()));
    }
    let factors = g.factor()?;
    // Orbit completeness by degree accounting.
    let total: usize = factors.iter().map(|(h, e)| h.degree() * *e as usize).sum();
    if total != g.degree() {
        return Err(Error::Internal("slice factor degrees do not add up".into()));
    }
    for (h, _) in &factors {
        if h.degree() == 0 {
            continue;
        }
        if h.coeff(0).is_zero() {
            // Root at the origin of the slice: the axis point of the kept
            // coordinate.
            out.push(special_point(tr, tower, kept_idx == 2)?);
        } else {
            out.push(generic_point(tr, tower, h, unit_idx, kept_idx)?);
        }
    }
    // The remaining special point lies on the axis of the slice coordinate,
    // outside this dehomogenization.
    let zeros = vec![tower.zero(); 3];
    let at_other_axis = tr
        .f_lead
        .set_var_one(kept_idx)
        .set_var_zero(unit_idx)
        .eval(&zeros)?;
    if at_other_axis.is_zero() {
        out.push(special_point(tr, tower, kept_idx == 1)?);
    }
    out.sort_by_key(|p| p.locus.sort_key());
    Ok(out)
}

/// The localized model at a special point: set the invertible chart
/// coordinate to one and keep (s, remaining coordinate) as parameters.
fn special_point(tr: &ProperTransform, tower: &Tower, p1_axis: bool) -> Result<ExcPoint> {
    let vars = tr.f_prime.vars();
    let (unit_idx, kept_idx) = if p1_axis { (1, 2) } else { (2, 1) };
    let sliced = tr.f_prime.set_var_one(unit_idx);
    let kept_vars = vec![vars[0].clone(), vars[kept_idx].clone()];
    // Drop the now-constant variable from the frame.
    let f = project_frame(&sliced, &[0, kept_idx], &kept_vars);
    let model = LocalModel::new(
        tower.clone(),
        vec![vars[0].clone()],
        vars[kept_idx].clone(),
        f,
    )?;
    let coords = if p1_axis {
        (tower.one(), tower.zero())
    } else {
        (tower.zero(), tower.one())
    };
    let order = log_order(tr, tower, &[coords.0.clone(), coords.1.clone()])?;
    let singular = !quasiregular_check(&model)?;
    Ok(ExcPoint {
        locus: if p1_axis {
            OrbitLocus::P1Axis
        } else {
            OrbitLocus::P2Axis
        },
        ext: tower.clone(),
        coords,
        order,
        singular,
        model,
    })
}

/// The localized model at a root of the dehomogenized slice: extend the
/// tower by the root's minimal polynomial when it is not linear, then shift
/// the chart coordinate by the root.
fn generic_point(
    tr: &ProperTransform,
    tower: &Tower,
    h: &UPoly,
    unit_idx: usize,
    kept_idx: usize,
) -> Result<ExcPoint> {
    let (ext, lambda) = if h.degree() == 1 {
        // Monic linear factor p1' + c: root is -c.
        let root = h.coeff(0).neg();
        (tower.clone(), root)
    } else {
        let name = fresh_generator_name(tower);
        let ext = tower.add_algebraic(&name, h)?;
        let root = ext.generator_by_name(&name).expect("fresh generator");
        (ext, root)
    };
    let vars = tr.f_prime.vars();
    let sliced = tr.f_prime.set_var_one(unit_idx);
    let kept_vars = vec![vars[0].clone(), vars[kept_idx].clone()];
    let f = project_frame(&sliced, &[0, kept_idx], &kept_vars).embed(&ext)?;
    // Shift the kept coordinate to the root.
    let shifted = f.taylor_shift(&ext, &[ext.zero(), lambda.clone()])?;
    let model = LocalModel::new(
        ext.clone(),
        vec![vars[0].clone()],
        vars[kept_idx].clone(),
        shifted,
    )?;
    let coords = if kept_idx == 1 {
        (lambda.clone(), ext.one())
    } else {
        (ext.one(), lambda.clone())
    };
    let order = log_order(tr, &ext, &[coords.0.clone(), coords.1.clone()])?;
    let singular = !quasiregular_check(&model)?;
    Ok(ExcPoint {
        locus: OrbitLocus::Generic {
            minpoly: h.to_string_var(vars[kept_idx].as_str()),
        },
        ext,
        coords,
        order,
        singular,
        model,
    })
}

/// Reframe onto a subset of the variables; the dropped variables must not
/// occur in the polynomial.
fn project_frame(p: &Poly, keep: &[usize], new_vars: &[String]) -> Poly {
    let map: Vec<usize> = (0..p.vars().len())
        .map(|i| keep.iter().position(|&k| k == i).unwrap_or(0))
        .collect();
    debug_assert!((0..p.vars().len())
        .filter(|i| !keep.contains(i))
        .all(|i| p.degree_in(i).unwrap_or(0) == 0));
    p.reframe(new_vars, &map)
}

fn fresh_generator_name(tower: &Tower) -> String {
    let existing = tower.generator_names().join("/");
    for i in 1.. {
        let name = format!("r{i}");
        if !existing.split('/').any(|g| g == name) {
            return name;
        }
    }
    unreachable!()
}

/// The certificate: log order < parent multiplicity at every enumerated
/// exceptional point. A violation is an implementation bug, never data.
pub fn certify_order_drop(points: &[ExcPoint], a1: u32) -> Result<OrderDropCertificate> {
    let mut entries = Vec::new();
    for pt in points {
        if pt.order >= a1 {
            return Err(Error::Internal(format!(
                "order did not drop at {:?}: {} >= {}",
                pt.locus, pt.order, a1
            )));
        }
        entries.push(CertEntry {
            point: format!(
                "({}, {})",
                pt.coords.0.render(),
                pt.coords.1.render()
            ),
            residue_field: pt.ext.descriptor(),
            order: pt.order,
        });
    }
    Ok(OrderDropCertificate {
        parent_a1: a1,
        entries,
    })
}

/// Only the points where the reduction of the transform is singular.
pub fn singular_orbits(points: &[ExcPoint]) -> Vec<&ExcPoint> {
    points.iter().filter(|p| p.singular).collect()
}

/// Chart-level semi-invariant generators for the center supported at an
/// exceptional point, with their verified torus characters.
pub fn equivariant_center(
    chart: &BPlusChart,
    point: &ExcPoint,
) -> Result<EquivariantCenter> {
    let (w1, w2) = chart.reduced.weights;
    let s = &chart.variables[0];
    let p1 = &chart.variables[1];
    let p2 = &chart.variables[2];
    match &point.locus {
        OrbitLocus::P2Axis => Ok(EquivariantCenter {
            generators: (s.clone(), p1.clone()),
            characters: (-1, w1 as i64),
        }),
        OrbitLocus::P1Axis => Ok(EquivariantCenter {
            generators: (s.clone(), p2.clone()),
            characters: (-1, w2 as i64),
        }),
        OrbitLocus::Generic { .. } => {
            // Clear denominators by the invertible coordinate: the weight-
            // homogeneous binomial p1'^w2 - lambda^w2 p2'^w1 vanishes at the
            // point and has character w1*w2 under (-1, w1, w2), matching the
            // character of each of its two terms.
            let chi1 = w1 as i64 * w2 as i64;
            let chi2 = w2 as i64 * w1 as i64;
            if chi1 != chi2 {
                return Err(Error::Internal("center generator is not semi-invariant".into()));
            }
            // The point has one coordinate normalized to 1 and carries the
            // root in the other; the binomial is written to vanish there.
            let binomial = if point.coords.1.is_one() {
                let lam = point.coords.0.render();
                format!("{p1}^{w2} - ({lam})^{w2}*{p2}^{w1}")
            } else {
                let lam = point.coords.1.render();
                format!("{p2}^{w1} - ({lam})^{w1}*{p1}^{w2}")
            };
            Ok(EquivariantCenter {
                generators: (s.clone(), binomial),
                characters: (-1, chi1),
            })
        }
    }
}

/// Localize a germ given with invertible ambient variables: each invertible
/// variable is absorbed into the coefficient field as a transcendental (cap:
/// one transcendental per tower).
pub fn absorb_invertible(
    tower: &Tower,
    f: &Poly,
    invertible: &[String],
    xparams: &[String],
    yparam: &str,
) -> Result<LocalModel> {
    let mut ext = tower.clone();
    for name in invertible {
        ext = ext.add_transcendental(name)?;
    }
    let mut kept: Vec<String> = xparams.to_vec();
    kept.push(yparam.to_string());
    // Substitute: invertible variables become tower generators, kept
    // variables stay themselves.
    let images: Vec<Poly> = f
        .vars()
        .iter()
        .map(|v| {
            if let Some(i) = kept.iter().position(|k| k == v) {
                Ok(Poly::var(&ext, &kept, i))
            } else if let Some(g) = ext.generator_by_name(v) {
                Ok(Poly::constant(&ext, &kept, &g))
            } else {
                Err(Error::InvalidInput(format!(
                    "variable '{v}' is neither a parameter nor inverted"
                )))
            }
        })
        .collect::<Result<_>>()?;
    let f2 = f.embed(&ext)?.substitute(&images)?;
    LocalModel::new(ext, xparams.to_vec(), yparam.to_string(), f2)
}

// ---- tree export -----------------------------------------------------------

pub fn tree_to_json(t: &ResolutionTree) -> serde_json::Value {
    serde_json::json!({
        "version": 1,
        "max_depth": t.max_depth,
        "root": node_to_json(&t.root),
    })
}

fn node_to_json(n: &ResolutionNode) -> serde_json::Value {
    let mut v = serde_json::json!({
        "label": n.label,
        "tower": n.tower,
        "f": n.f,
    });
    match &n.kind {
        NodeKind::RegularLeaf => {
            v["status"] = serde_json::json!("regular");
        }
        NodeKind::Blowup(b) => {
            v["status"] = serde_json::json!("blown-up");
            v["invariant"] = serde_json::json!([b.invariant.a1, b.invariant.a2.to_string()]);
            v["dissolution"] = serde_json::json!(b
                .dissolution
                .iter()
                .map(|(vtx, l)| serde_json::json!({"vertex": vtx, "lambda": l}))
                .collect::<Vec<_>>());
            v["center"] = serde_json::json!({
                "params": [b.center.params.0, b.center.params.1],
                "exponents": [b.center.exponents.0.to_string(), b.center.exponents.1.to_string()],
            });
            v["weights"] = serde_json::json!([b.reduced.weights.0, b.reduced.weights.1]);
            v["ell"] = serde_json::json!(b.reduced.ell);
            v["stabilizers"] = serde_json::json!({
                "s_p1_axis": b.stabilizers.at_p2_axis,
                "s_p2_axis": b.stabilizers.at_p1_axis,
                "generic": b.stabilizers.generic,
            });
            v["transform"] = serde_json::json!(b.transform.f_prime.render());
            v["certificate"] = serde_json::json!({
                "parent_order": b.certificate.parent_a1,
                "points": b.certificate.entries.iter().map(|e| serde_json::json!({
                    "point": e.point,
                    "residue_field": e.residue_field,
                    "order": e.order,
                })).collect::<Vec<_>>(),
            });
        }
    }
    v["children"] = serde_json::json!(n
        .children
        .iter()
        .map(|(orbit, c)| {
            let mut cv = node_to_json(c);
            cv["orbit"] = serde_json::json!(orbit);
            cv
        })
        .collect::<Vec<_>>());
    v
}

pub fn tree_to_dot(t: &ResolutionTree) -> String {
    let mut out = String::from("digraph resolution {\n  node [shape=box];\n");
    let mut counter = 0usize;
    node_to_dot(&t.root, None, &mut counter, &mut out);
    out.push_str("}\n");
    out
}

fn node_to_dot(
    n: &ResolutionNode,
    parent: Option<(usize, &str)>,
    counter: &mut usize,
    out: &mut String,
) {
    let id = *counter;
    *counter += 1;
    let label = match &n.kind {
        NodeKind::RegularLeaf => format!("{}\\nregular", n.label),
        NodeKind::Blowup(b) => format!(
            "{}\\ninv {}\\nweights ({}, {})",
            n.label, b.invariant, b.reduced.weights.0, b.reduced.weights.1
        ),
    };
    out.push_str(&format!("  n{id} [label=\"{}\"];\n", label.replace('"', "'")));
    if let Some((pid, orbit)) = parent {
        out.push_str(&format!(
            "  n{pid} -> n{id} [label=\"{}\"];\n",
            orbit.replace('"', "'")
        ));
    }
    for (orbit, c) in &n.children {
        node_to_dot(c, Some((id, orbit)), counter, out);
    }
}
