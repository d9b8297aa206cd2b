//! Coordinate preparation, projected polyhedra, vertex solvability,
//! dissolution, the face lift, and the (a1, a2) invariant.

use num::bigint::BigInt;
use num::rational::BigRational;
use curveres::charpoly::{
    build_polyhedron, delta_initial_lift, dissolve, initial_at_vertex, invariant,
    maximal_contact_prep, quasiregular_check, Prep,
};
use curveres::error::Error;
use curveres::exactfield::Tower;
use curveres::mpoly::{LocalModel, Poly};

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

/// Quartic over GF(2)(z) with the invertible ambient coordinate z absorbed
/// into the coefficient field; one x-parameter.
fn quartic_model() -> LocalModel {
    let k = Tower::prime(2).unwrap().add_transcendental("z").unwrap();
    model(&k, &["x"], "y", "y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y")
}

#[test]
fn preparation_recognizes_powers_of_linear_forms() {
    let k = Tower::rationals();
    // x^2 + y^2 is not a power of one linear form over the rationals.
    let m = model(&k, &["x"], "y", "y^2 + x^2");
    assert!(matches!(
        maximal_contact_prep(&m).unwrap(),
        Prep::DirectrixZero { nu: 2 }
    ));
    // (x + y)^2 + x^3 is prepared by the shift y := y + x.
    let m = model(&k, &["x"], "y", "y^2 + 2*x*y + x^2 + x^3");
    match maximal_contact_prep(&m).unwrap() {
        Prep::Prepared(pm) => {
            assert_eq!(pm.nu, 2);
            assert_eq!(pm.model.f.render(), "y^2 + x^3");
        }
        other => panic!("expected preparation, got {other:?}"),
    }
    // The quartic is already prepared.
    match maximal_contact_prep(&quartic_model()).unwrap() {
        Prep::Prepared(pm) => {
            assert_eq!(pm.nu, 4);
            assert_eq!(pm.model.f, quartic_model().f);
        }
        other => panic!("expected preparation, got {other:?}"),
    }
}

#[test]
fn preparation_swaps_parameters_when_the_linear_form_misses_y() {
    let k = Tower::rationals();
    // Initial form x^2: the maximal-contact direction is x, not y.
    let m = model(&k, &["x"], "y", "x^2 + y^3");
    match maximal_contact_prep(&m).unwrap() {
        Prep::Prepared(pm) => {
            assert_eq!(pm.nu, 2);
            assert_eq!(pm.model.yparam, "x");
            assert_eq!(pm.model.xparams, vec!["y".to_string()]);
            assert_eq!(pm.model.f.render(), "x^2 + y^3");
        }
        other => panic!("expected preparation, got {other:?}"),
    }
}

#[test]
fn quartic_polyhedron_and_invariant() {
    let m = quartic_model();
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("quartic must prepare");
    };
    let poly = build_polyhedron(&pm).unwrap();
    // Generators 3/2 (from x^3 y^2 and x^6) and 5/3 (from x^5 y).
    assert_eq!(poly.generators, vec![vec![q(3, 2)], vec![q(5, 3)]]);
    assert_eq!(poly.vertices, vec![vec![q(3, 2)]]);
    // The vertex is not integral, hence not solvable: zero dissolutions.
    let r = dissolve(&pm).unwrap();
    assert!(r.z_change.is_empty());
    assert_eq!(r.delta, Some(q(3, 2)));
    assert_eq!(
        r.f_delta.render(),
        "y^4 + z^5*x^3*y^2 + z^3*x^6"
    );
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (4, q(6, 1)));
}

#[test]
fn cusp_family_invariants_over_the_rationals() {
    let k = Tower::rationals();
    let (inv, r) = invariant(&model(&k, &["x"], "y", "y^2 - x^3")).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (2, q(3, 1)));
    assert_eq!(r.delta, Some(q(3, 2)));
    // All terms of the cusp lie on the face.
    assert_eq!(r.f_delta, r.model.f);

    let (inv, r) = invariant(&model(&k, &["x"], "y", "y^2 - x^4")).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (2, q(4, 1)));
    assert_eq!(r.delta, Some(q(2, 1)));
}

#[test]
fn dissolution_in_characteristic_two() {
    let k = Tower::prime(2).unwrap();
    let m = model(&k, &["x"], "y", "y^2 + x^4 + x^5");
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("must prepare");
    };
    let poly = build_polyhedron(&pm).unwrap();
    assert_eq!(poly.vertices, vec![vec![q(2, 1)]]);
    // Vertex 2 is solvable with lambda = 1: one dissolution to vertex 5/2.
    let r = dissolve(&pm).unwrap();
    assert_eq!(r.z_change.len(), 1);
    assert_eq!(r.z_change[0].0, vec![2]);
    assert!(r.z_change[0].1.is_one());
    assert_eq!(r.polyhedron.vertices, vec![vec![q(5, 2)]]);
    assert_eq!(r.delta, Some(q(5, 2)));
    assert_eq!(r.model.f.render(), "y^2 + x^5");
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (2, q(5, 1)));
    assert_eq!(r.f_delta.render(), "y^2 + x^5");
}

#[test]
fn inseparable_coefficient_blocks_dissolution() {
    // Same shape over GF(2)(t) with coefficient t: t is not a square, so the
    // vertex stays unsolved.
    let k = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let m = model(&k, &["x"], "y", "y^2 + t*x^4 + x^5");
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("must prepare");
    };
    let r = dissolve(&pm).unwrap();
    assert!(r.z_change.is_empty());
    assert_eq!(r.delta, Some(q(2, 1)));
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (2, q(4, 1)));
}

/// Two-parameter family over GF(2)(t): the origin chart of the running
/// imperfect-residue example with p = 2, m = 3, a = t.
#[test]
fn two_parameter_example_at_the_origin() {
    let k = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let m = model(
        &k,
        &["x1", "x2"],
        "y",
        "y^2 + x1^3*(x1^2 + t)^7 + t*x2^6",
    );
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("must prepare");
    };
    let poly = build_polyhedron(&pm).unwrap();
    assert_eq!(
        poly.vertices,
        vec![vec![q(0, 1), q(3, 1)], vec![q(3, 2), q(0, 1)]]
    );
    // in at (0,3) is Y^2 + t X2^6; t has no square root, so not solvable.
    let v2 = vec![q(0, 1), q(3, 1)];
    let vd = initial_at_vertex(&pm, &poly, &v2).unwrap();
    assert_eq!(vd.initial_form.render(), "y^2 + t*x2^6");
    assert!(vd.solvable.is_none());
    let r = dissolve(&pm).unwrap();
    assert!(r.z_change.is_empty());
    assert_eq!(r.delta, Some(q(3, 2)));
}

/// The same family at the point where the inseparable coefficient acquires a
/// square root theta (theta^2 = t): the axis vertex dissolves.
#[test]
fn two_parameter_example_after_residue_extension() {
    let k = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let w = curveres::exactfield::UPoly::from_elems(
        &k,
        vec![
            k.generator_by_name("t").unwrap(),
            k.zero(),
            k.one(),
        ],
    )
    .unwrap();
    let kk = k.add_algebraic("theta", &w).unwrap();
    let m = model(
        &kk,
        &["u1", "x2"],
        "y",
        "y^2 + theta^3*u1^7 + u1*x2^6 + theta^2*x2^6",
    );
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("must prepare");
    };
    let poly = build_polyhedron(&pm).unwrap();
    assert_eq!(
        poly.vertices,
        vec![vec![q(0, 1), q(3, 1)], vec![q(7, 2), q(0, 1)]]
    );
    let r = dissolve(&pm).unwrap();
    // One dissolution: z = y + theta * x2^3.
    assert_eq!(r.z_change.len(), 1);
    assert_eq!(r.z_change[0].0, vec![0, 3]);
    assert_eq!(r.z_change[0].1.render(), "theta");
    assert_eq!(
        r.polyhedron.vertices,
        vec![vec![q(1, 2), q(3, 1)], vec![q(7, 2), q(0, 1)]]
    );
    assert_eq!(r.delta, Some(q(7, 2)));
}

#[test]
fn quasiregular_detection() {
    let k = Tower::rationals();
    assert!(quasiregular_check(&model(&k, &["x"], "y", "y^2")).unwrap());
    assert!(quasiregular_check(&model(&k, &["x"], "y", "((1 - x)*y - x)^2")).unwrap());
    assert!(!quasiregular_check(&model(&k, &["x"], "y", "y^2 - x^3")).unwrap());
    // Two crossing doubled lines: reduced but singular.
    assert!(!quasiregular_check(&model(&k, &["x"], "y", "(x*y)^2")).unwrap());
    let f2 = Tower::prime(2).unwrap();
    assert!(quasiregular_check(&model(&f2, &["x"], "y", "y^2")).unwrap());
    assert!(!quasiregular_check(&model(&f2, &["x"], "y", "y^2 + x^5")).unwrap());

    // The invariant pipeline rejects quasi-regular inputs.
    assert!(matches!(
        invariant(&model(&k, &["x"], "y", "y^2")),
        Err(Error::QuasiRegular(_))
    ));
}

#[test]
fn budget_stops_a_quasiregular_input_with_the_guard_disabled() {
    // ((1-x)y - x)^2 would dissolve forever; calling dissolve directly
    // (bypassing the quasi-regularity guard) must stop with a budget error.
    let k = Tower::rationals();
    let m = model(&k, &["x"], "y", "((1 - x)*y - x)^2");
    let Prep::Prepared(pm) = maximal_contact_prep(&m).unwrap() else {
        panic!("must prepare");
    };
    assert!(matches!(
        dissolve(&pm),
        Err(Error::DissolutionBudget { .. })
    ));
}

#[test]
fn directrix_zero_branch_sets_delta_to_one() {
    let k = Tower::rationals();
    let m = model(&k, &["x"], "y", "y^2 + x^2");
    let (inv, r) = invariant(&m).unwrap();
    assert_eq!((inv.a1, inv.a2.clone()), (2, q(2, 1)));
    assert!(r.directrix_zero);
    assert_eq!(r.delta, Some(q(1, 1)));
    assert_eq!(r.f_delta.render(), "x^2 + y^2");
}

#[test]
fn face_lift_shares_the_invariant_and_center_data() {
    // The face lift of the quartic has the same invariant as the quartic.
    let m = quartic_model();
    let (inv, r) = invariant(&m).unwrap();
    let lift_model = LocalModel::new(
        m.tower.clone(),
        m.xparams.clone(),
        m.yparam.clone(),
        r.f_delta.clone(),
    )
    .unwrap();
    let (inv2, r2) = invariant(&lift_model).unwrap();
    assert_eq!(inv, inv2);
    assert_eq!(r.delta, r2.delta);
}

#[test]
fn delta_lift_matches_hand_expansion() {
    let k = Tower::rationals();
    let m = model(&k, &["x"], "y", "y^2 - x^3");
    let lift = delta_initial_lift(&m, 2, &q(3, 2)).unwrap();
    assert_eq!(lift, m.f);
}
