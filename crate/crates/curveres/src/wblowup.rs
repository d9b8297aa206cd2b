//! Centers from the invariant, reduced centers and their coprime weights, the
//! graded blow-up chart with its torus action, proper transforms with the
//! leading/higher split, stabilizers at the special points, and logarithmic
//! orders on the exceptional locus.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One};

use crate::charpoly::Invariant;
use crate::error::{Error, Result};
use crate::exactfield::{FieldElem, Tower};
use crate::mpoly::{weighted_substitute, LocalModel, MonomialValuation, Poly};

/// The center J = (p1^{a1}, p2^{a2}) in dissolved coordinates; p1 is the
/// y-direction (maximal contact), p2 the transverse parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Center {
    pub params: (String, String),
    pub exponents: (BigRational, BigRational),
}

impl Center {
    pub fn valuation(&self) -> Result<MonomialValuation> {
        MonomialValuation::new(
            self.params.clone(),
            self.exponents.0.clone(),
            self.exponents.1.clone(),
        )
    }
}

/// The reduced center: coprime weights (w1, w2) with l = a1*w1 = a2*w2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCenter {
    pub weights: (u32, u32),
    pub ell: u32,
}

/// One chart of the graded blow-up: variables (s, p1', p2') with the extra
/// torus factor acting by (-1, w1, w2); the exceptional divisor is {s = 0}
/// and the locus {p1' = p2' = 0} is excluded from the chart.
#[derive(Clone, Debug)]
pub struct BPlusChart {
    /// Variable names: the fresh exceptional coordinate followed by the two
    /// center parameters (reused verbatim: the chart is a different frame).
    pub variables: Vec<String>,
    /// Weights of the new torus factor on (s, p1', p2').
    pub gm_weights: Vec<i64>,
    pub reduced: ReducedCenter,
}

/// The proper transform f' = s^(-l) f(s^(w1) p1', s^(w2) p2') together with
/// its split f' = f_lead(p') + s * h_prime.
#[derive(Clone, Debug)]
pub struct ProperTransform {
    /// Polynomial in (s, p1', p2').
    pub f_prime: Poly,
    pub ell: u32,
    /// The weight-1 leading part, i.e. f'|_{s=0}, in chart variables.
    pub f_lead: Poly,
    /// The cofactor with f' = f_lead + s * h_prime.
    pub h_prime: Poly,
}

/// Stabilizer orders along the exceptional locus of a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    /// Order of the stabilizer at s = p1' = 0 (the p2'-axis point): w2.
    pub at_p2_axis: u32,
    /// Order of the stabilizer at s = p2' = 0 (the p1'-axis point): w1.
    pub at_p1_axis: u32,
    /// Order at exceptional points with both coordinates nonzero: gcd(w1,w2).
    pub generic: u32,
}

/// The center in the dissolved coordinates: exponents from the invariant,
/// parameters (y-direction, transverse direction).
pub fn center_from_invariant(m: &LocalModel, inv: &Invariant) -> Result<Center> {
    if m.e() != 1 {
        return Err(Error::InvalidInput(
            "centers require exactly one transverse parameter".into(),
        ));
    }
    Ok(Center {
        params: (m.yparam.clone(), m.xparams[0].clone()),
        exponents: (
            BigRational::from_integer(BigInt::from(inv.a1)),
            inv.a2.clone(),
        ),
    })
}

/// Admissibility of a center for f: v_J(f) >= 1.
pub fn admissible(center: &Center, f: &Poly) -> Result<bool> {
    let j = center.valuation()?;
    Ok(j.v_j(f)? >= BigRational::one())
}

/// The reduced center: smallest positive integer l with l/a1 and l/a2
/// positive integers; their coprimality is automatic for integral a1.
pub fn reduce_center(center: &Center) -> Result<ReducedCenter> {
    let (a1, a2) = (&center.exponents.0, &center.exponents.1);
    if !a1.denom().is_one() {
        return Err(Error::InvalidInput(
            "the first center exponent must be an integer".into(),
        ));
    }
    let p1 = a1.numer().clone();
    let p2 = a2.numer().clone();
    let q2 = a2.denom().clone();
    let ell = p1.lcm(&p2);
    let w1 = &ell / &p1;
    let w2 = (&ell * &q2) / &p2;
    if w1.gcd(&w2) != BigInt::one() {
        return Err(Error::Internal(
            "reduced-center weights are not coprime".into(),
        ));
    }
    let to_u32 = |b: &BigInt, what: &str| -> Result<u32> {
        b.try_into()
            .map_err(|_| Error::InvalidInput(format!("{what} out of range")))
    };
    let rc = ReducedCenter {
        weights: (to_u32(&w1, "weight")?, to_u32(&w2, "weight")?),
        ell: to_u32(&ell, "blow-up degree")?,
    };
    // l = a1*w1 = a2*w2 by construction; keep the guard cheap and explicit.
    let l = BigRational::from_integer(ell);
    if &l != &(a1 * BigRational::from_integer(w1)) || &l != &(a2 * BigRational::from_integer(w2)) {
        return Err(Error::Internal("reduced-center identity violated".into()));
    }
    Ok(rc)
}

/// Split f into the weight-1 part and the strictly higher part: f = f_lead +
/// h_tilde with v_J(f_lead terms) = 1 and v_J(h_tilde) > 1.
pub fn split_leading(f: &Poly, center: &Center) -> Result<(Poly, Poly)> {
    let j = center.valuation()?;
    let one = BigRational::one();
    let mut lead = Poly::zero(f.tower(), f.vars());
    let mut high = Poly::zero(f.tower(), f.vars());
    for (m, c) in f.terms() {
        let t = Poly::monomial(f.tower(), f.vars(), m.clone(), &c);
        let v = j.v_j(&t)?;
        if v < one {
            return Err(Error::InvalidInput(
                "center is not admissible: a term has valuation below one".into(),
            ));
        }
        if v == one {
            lead = lead.add(&t)?;
        } else {
            high = high.add(&t)?;
        }
    }
    Ok((lead, high))
}

/// The graded chart of the blow-up with its torus weights.
pub fn rees_chart(m: &LocalModel, center: &Center, rc: &ReducedCenter) -> Result<BPlusChart> {
    if center.params.0 != m.yparam || center.params.1 != m.xparams[0] {
        return Err(Error::InvalidInput(
            "center parameters are not the chart coordinates".into(),
        ));
    }
    let s_name = fresh_s_name(m.f.vars());
    Ok(BPlusChart {
        variables: vec![
            s_name,
            center.params.0.clone(),
            center.params.1.clone(),
        ],
        gm_weights: vec![-1, rc.weights.0 as i64, rc.weights.1 as i64],
        reduced: rc.clone(),
    })
}

fn fresh_s_name(existing: &[String]) -> String {
    let mut name = "s".to_string();
    while existing.iter().any(|v| v == &name) {
        name.push('_');
    }
    name
}

/// The proper transform: substitute p1 -> s^(w1) p1', p2 -> s^(w2) p2' and
/// divide by s^l exactly. The split records f' = f_lead + s * h_prime.
pub fn proper_transform(
    m: &LocalModel,
    center: &Center,
    rc: &ReducedCenter,
    chart: &BPlusChart,
) -> Result<ProperTransform> {
    let vars = m.f.vars();
    let i1 = vars
        .iter()
        .position(|v| v == &center.params.0)
        .ok_or_else(|| Error::InvalidInput("center parameter missing from frame".into()))?;
    let i2 = vars
        .iter()
        .position(|v| v == &center.params.1)
        .ok_or_else(|| Error::InvalidInput("center parameter missing from frame".into()))?;
    let pulled = weighted_substitute(
        &m.f,
        &chart.variables[0],
        &[(i1, rc.weights.0), (i2, rc.weights.1)],
    );
    let f_prime = pulled.div_var_power(0, rc.ell).map_err(|_| {
        Error::Internal("the pullback is not divisible by s^l: inadmissible center".into())
    })?;
    // Reorder into the chart frame (s, p1', p2').
    let f_prime = reorder_to_chart(&f_prime, chart)?;
    let f_lead = f_prime.set_var_zero(0);
    let h_prime = f_prime.sub(&f_lead)?.div_var_power(0, 1)?;
    Ok(ProperTransform {
        f_prime,
        ell: rc.ell,
        f_lead,
        h_prime,
    })
}

fn reorder_to_chart(f: &Poly, chart: &BPlusChart) -> Result<Poly> {
    let map: Vec<usize> = f
        .vars()
        .iter()
        .map(|v| {
            chart
                .variables
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::Internal("chart variable mismatch".into()))
        })
        .collect::<Result<_>>()?;
    Ok(f.reframe(&chart.variables, &map))
}

/// Stabilizer orders predicted by the chart weights.
pub fn stabilizers(chart: &BPlusChart) -> StabilizerReport {
    let (w1, w2) = chart.reduced.weights;
    StabilizerReport {
        at_p2_axis: w2,
        at_p1_axis: w1,
        generic: w1.gcd(&w2),
    }
}

/// Order of the transform along the exceptional divisor at a closed point
/// (p1', p2') of {s = 0}: the order of f'|_{s=0} at that point. The point may
/// live in an extension tower; it must avoid the excluded locus
/// {p1' = p2' = 0}.
pub fn log_order(tr: &ProperTransform, ext: &Tower, point: &[FieldElem]) -> Result<u32> {
    if point.len() != 2 {
        return Err(Error::InvalidInput(
            "an exceptional point has exactly two chart coordinates".into(),
        ));
    }
    if point.iter().all(|c| c.is_zero()) {
        return Err(Error::InvalidInput(
            "the locus p1' = p2' = 0 is excluded from the chart".into(),
        ));
    }
    let slice = tr.f_lead.clone();
    if slice.is_zero() {
        return Err(Error::Internal(
            "the exceptional slice of a proper transform cannot vanish".into(),
        ));
    }
    let full_point = vec![ext.zero(), point[0].clone(), point[1].clone()];
    let shifted = slice.taylor_shift(ext, &full_point)?;
    // The s-coordinate does not occur in the slice; the order in the two
    // chart coordinates is the total order of the shifted polynomial.
    shifted.ord().map_err(|_| {
        Error::Internal("shifting the slice killed the polynomial".into())
    })
}

/// JSON descriptor of a chart and its transform.
pub fn chart_to_json(chart: &BPlusChart, tr: &ProperTransform) -> serde_json::Value {
    let st = stabilizers(chart);
    serde_json::json!({
        "variables": chart.variables,
        "gm_weights": chart.gm_weights,
        "ell": tr.ell,
        "transform": tr.f_prime.render(),
        "exceptional_slice": tr.f_lead.render(),
        "stabilizers": {
            "s_p1_axis": st.at_p2_axis,
            "s_p2_axis": st.at_p1_axis,
            "generic": st.generic,
        },
    })
}
