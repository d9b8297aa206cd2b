//! Centers, reduced centers, blow-up charts, proper transforms, stabilizers,
//! and exceptional log orders.

use num::bigint::BigInt;
use num::rational::BigRational;
use curveres::charpoly::invariant;
use curveres::exactfield::Tower;
use curveres::mpoly::{LocalModel, Poly};
use curveres::wblowup::{
    admissible, center_from_invariant, log_order, proper_transform, reduce_center, rees_chart,
    split_leading, stabilizers, Center,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn model(tower: &Tower, xs: &[&str], y: &str, text: &str) -> LocalModel {
    let mut v = vars(xs);
    v.push(y.to_string());
    let f = Poly::parse(text, tower, &v).unwrap();
    LocalModel::new(
        tower.clone(),
        xs.iter().map(|s| s.to_string()).collect(),
        y.to_string(),
        f,
    )
    .unwrap()
}

fn quartic_model() -> LocalModel {
    let k = Tower::prime(2).unwrap().add_transcendental("z").unwrap();
    model(&k, &["x"], "y", "y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y")
}

#[test]
fn centers_from_invariants() {
    let m = quartic_model();
    let (inv, r) = invariant(&m).unwrap();
    let c = center_from_invariant(&r.model, &inv).unwrap();
    assert_eq!(c.params, ("y".to_string(), "x".to_string()));
    assert_eq!(c.exponents, (q(4, 1), q(6, 1)));

    let k = Tower::rationals();
    let cusp = model(&k, &["x"], "y", "y^2 - x^3");
    let (inv, r) = invariant(&cusp).unwrap();
    let c = center_from_invariant(&r.model, &inv).unwrap();
    assert_eq!(c.exponents, (q(2, 1), q(3, 1)));

    // Post-dissolution center of y^2 + x^4 + x^5 over GF(2): (z^2, x^5) in
    // the dissolved coordinate z = y + x^2.
    let f2 = Tower::prime(2).unwrap();
    let m = model(&f2, &["x"], "y", "y^2 + x^4 + x^5");
    let (inv, r) = invariant(&m).unwrap();
    assert_eq!(r.z_change.len(), 1);
    let c = center_from_invariant(&r.model, &inv).unwrap();
    assert_eq!(c.exponents, (q(2, 1), q(5, 1)));
    assert_eq!(r.model.f.render(), "y^2 + x^5");
}

#[test]
fn admissibility_via_the_monomial_valuation() {
    let m = quartic_model();
    let c = Center {
        params: ("y".to_string(), "x".to_string()),
        exponents: (q(4, 1), q(6, 1)),
    };
    assert!(admissible(&c, &m.f).unwrap());

    let k = Tower::rationals();
    let cusp = model(&k, &["x"], "y", "y^2 - x^3");
    let bad = Center {
        params: ("y".to_string(), "x".to_string()),
        exponents: (q(2, 1), q(4, 1)),
    };
    assert!(!admissible(&bad, &cusp.f).unwrap());
    let trivial = Center {
        params: ("y".to_string(), "x".to_string()),
        exponents: (q(1, 1), q(1, 1)),
    };
    assert!(admissible(&trivial, &cusp.f).unwrap());
}

#[test]
fn reduced_centers_have_coprime_weights() {
    let mk = |a1: (i64, i64), a2: (i64, i64)| Center {
        params: ("y".to_string(), "x".to_string()),
        exponents: (q(a1.0, a1.1), q(a2.0, a2.1)),
    };
    let rc = reduce_center(&mk((4, 1), (6, 1))).unwrap();
    assert_eq!((rc.weights, rc.ell), ((3, 2), 12));
    let rc = reduce_center(&mk((2, 1), (3, 1))).unwrap();
    assert_eq!((rc.weights, rc.ell), ((3, 2), 6));
    let rc = reduce_center(&mk((5, 1), (5, 1))).unwrap();
    assert_eq!((rc.weights, rc.ell), ((1, 1), 5));
    // A rational second exponent: (2, 5/2) -> l = 10, weights (5, 4).
    let rc = reduce_center(&mk((2, 1), (5, 2))).unwrap();
    assert_eq!((rc.weights, rc.ell), ((5, 4), 10));
}

#[test]
fn leading_split_of_the_quartic() {
    let m = quartic_model();
    let c = Center {
        params: ("y".to_string(), "x".to_string()),
        exponents: (q(4, 1), q(6, 1)),
    };
    let (lead, high) = split_leading(&m.f, &c).unwrap();
    assert_eq!(lead.render(), "y^4 + z^5*x^3*y^2 + z^3*x^6");
    assert_eq!(high.render(), "x^5*y");
}

#[test]
fn transform_identities_on_the_quartic() {
    let m = quartic_model();
    let (inv, r) = invariant(&m).unwrap();
    let c = center_from_invariant(&r.model, &inv).unwrap();
    let rc = reduce_center(&c).unwrap();
    let chart = rees_chart(&r.model, &c, &rc).unwrap();
    assert_eq!(chart.variables, vars(&["s", "y", "x"]));
    assert_eq!(chart.gm_weights, vec![-1, 3, 2]);
    let tr = proper_transform(&r.model, &c, &rc, &chart).unwrap();
    // The transform in the chart frame (s, y', x').
    let expect = Poly::parse(
        "y^4 + z^5*x^3*y^2 + z^3*x^6 + s*x^5*y",
        r.model.f.tower(),
        &chart.variables,
    )
    .unwrap();
    assert_eq!(tr.f_prime, expect);
    // Rees identity: s^l * f' equals the weighted pullback of f.
    let s = Poly::var(r.model.f.tower(), &chart.variables, 0);
    let pulled = r
        .model
        .f
        .reframe(&chart.variables, &[2, 1])
        .substitute(&[
            s.clone(),
            s.pow(3).unwrap().mul(&Poly::var(r.model.f.tower(), &chart.variables, 1)).unwrap(),
            s.pow(2).unwrap().mul(&Poly::var(r.model.f.tower(), &chart.variables, 2)).unwrap(),
        ])
        .unwrap();
    assert_eq!(s.pow(12).unwrap().mul(&tr.f_prime).unwrap(), pulled);
    // s = 1 slice recovers f; s = 0 slice is the leading split.
    assert_eq!(
        tr.f_prime.set_var_one(0),
        r.model.f.reframe(&chart.variables, &[2, 1])
    );
    let (lead, _) = split_leading(&r.model.f, &c).unwrap();
    assert_eq!(tr.f_lead, lead.reframe(&chart.variables, &[2, 1]));
    // Split identity: f' = f_lead + s * h'.
    assert_eq!(
        tr.f_prime,
        tr.f_lead.add(&s.mul(&tr.h_prime).unwrap()).unwrap()
    );
}

#[test]
fn cusp_transform_and_stabilizers() {
    let k = Tower::rationals();
    let m = model(&k, &["x"], "y", "y^2 - x^3");
    let (inv, r) = invariant(&m).unwrap();
    let c = center_from_invariant(&r.model, &inv).unwrap();
    let rc = reduce_center(&c).unwrap();
    let chart = rees_chart(&r.model, &c, &rc).unwrap();
    let tr = proper_transform(&r.model, &c, &rc, &chart).unwrap();
    let expect = Poly::parse("y^2 - x^3", &k, &chart.variables).unwrap();
    assert_eq!(tr.f_prime, expect);
    // Stabilizers: mu_2 at s = y' = 0, mu_3 at s = x' = 0, trivial generically.
    let st = stabilizers(&chart);
    assert_eq!(st.at_p2_axis, 2);
    assert_eq!(st.at_p1_axis, 3);
    assert_eq!(st.generic, 1);
    // The transform is regular on the exceptional line: order 1 at (1, 1).
    let pt = vec![k.one(), k.one()];
    assert_eq!(log_order(&tr, &k, &pt).unwrap(), 1);
    // A point where the slice does not vanish has order 0.
    let pt = vec![k.one(), k.from_i64(5)];
    assert_eq!(log_order(&tr, &k, &pt).unwrap(), 0);
}

#[test]
fn quartic_log_orders_drop_below_the_multiplicity() {
    let m = quartic_model();
    let (inv, r) = invariant(&m).unwrap();
    let c = center_from_invariant(&r.model, &inv).unwrap();
    let rc = reduce_center(&c).unwrap();
    let chart = rees_chart(&r.model, &c, &rc).unwrap();
    let tr = proper_transform(&r.model, &c, &rc, &chart).unwrap();
    // Slice y'^4 + z^5 x'^3 y'^2 + z^3 x'^6 at the special points: both have
    // log order at most 2 < 4 = a1.
    let k = r.model.f.tower().clone();
    let special1 = vec![k.one(), k.zero()]; // s = x' = 0 side: point (y',x') = (1,0)
    let special2 = vec![k.zero(), k.one()]; // s = y' = 0 side: point (0,1)
    assert!(log_order(&tr, &k, &special1).unwrap() <= 2);
    assert!(log_order(&tr, &k, &special2).unwrap() <= 2);
    assert!(inv.a1 == 4);
}
