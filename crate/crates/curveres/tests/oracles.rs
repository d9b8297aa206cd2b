//! The independent cross-checks agree with the symbolic engine on hand-made
//! inputs before the randomized comparisons lean on them.

use curveres::charpoly::invariant;
use curveres::error::Error;
use curveres::exactfield::{Tower, UPoly};
use curveres::mpoly::{LocalModel, Poly};
use curveres::oracle::{bruteforce_max_center, independent_order, separable_basechange_check};

fn model(tower: &Tower, text: &str) -> LocalModel {
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse(text, tower, &vars).unwrap();
    LocalModel::new(tower.clone(), vec!["x".into()], "y".into(), f).unwrap()
}

#[test]
fn brute_force_agrees_on_the_cusp() {
    let qq = Tower::rationals();
    let m = model(&qq, "y^2 - x^3");
    let probe = bruteforce_max_center(&m, 100_000).unwrap();
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!(probe.a1, inv.a1);
    assert_eq!(probe.a2.unwrap(), inv.a2);
    assert!(probe.shift.is_empty());
    assert!(!probe.swapped);
}

#[test]
fn brute_force_finds_the_dissolving_shift_in_characteristic_two() {
    let f2 = Tower::prime(2).unwrap();
    let m = model(&f2, "y^2 + x^4 + x^5");
    let probe = bruteforce_max_center(&m, 100_000).unwrap();
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!((probe.a1, probe.a2.clone().unwrap()), (inv.a1, inv.a2.clone()));
    assert_eq!(inv.a2.to_string(), "5");
    // The winning frame used the shift y -> y + x^2.
    assert_eq!(probe.shift.len(), 1);
    assert_eq!(probe.shift[0].0, 2);
    assert!(probe.shift[0].1.is_one());
}

#[test]
fn brute_force_confirms_an_unsolvable_vertex_over_a_function_field() {
    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let m = model(&f2t, "y^2 + t*x^4 + x^5");
    let probe = bruteforce_max_center(&m, 1_000_000).unwrap();
    let (inv, _) = invariant(&m).unwrap();
    assert_eq!((probe.a1, probe.a2.unwrap()), (inv.a1, inv.a2.clone()));
    assert_eq!(inv.a2.to_string(), "4");
}

#[test]
fn brute_force_swaps_parameters_when_that_wins() {
    let qq = Tower::rationals();
    let m = model(&qq, "x^2 + y^3");
    let probe = bruteforce_max_center(&m, 100_000).unwrap();
    assert_eq!(probe.a1, 2);
    assert_eq!(probe.a2.unwrap().to_string(), "3");
    assert!(probe.swapped);
}

#[test]
fn brute_force_reports_budget_exhaustion() {
    let qq = Tower::rationals();
    let m = model(&qq, "y^3 + x^7 + x^8*y");
    match bruteforce_max_center(&m, 3) {
        Err(Error::BudgetExhausted(_)) => {}
        other => panic!("expected a budget report, got {other:?}"),
    }
}

#[test]
fn dense_order_matches_the_sparse_layer() {
    let qq = Tower::rationals();
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse("y^2 - x^3", &qq, &vars).unwrap();
    let origin = [qq.zero(), qq.zero()];
    assert_eq!(independent_order(&f, &qq, &origin).unwrap(), f.ord().unwrap());
    // At the smooth point (1, 1) the order is 1.
    let p = [qq.one(), qq.one()];
    assert_eq!(independent_order(&f, &qq, &p).unwrap(), 1);
    // At a point off the curve the order is 0.
    let q = [qq.from_i64(2), qq.one()];
    assert_eq!(independent_order(&f, &qq, &q).unwrap(), 0);
}

#[test]
fn dense_order_works_in_positive_characteristic() {
    let f2 = Tower::prime(2).unwrap();
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse("y^2 + x^2*y + x^5", &f2, &vars).unwrap();
    let origin = [f2.zero(), f2.zero()];
    assert_eq!(independent_order(&f, &f2, &origin).unwrap(), 2);
    let p = [f2.one(), f2.one()];
    assert_eq!(
        independent_order(&f, &f2, &p).unwrap(),
        f.taylor_shift(&f2, &p).unwrap().ord().unwrap()
    );
}

#[test]
fn separable_extensions_leave_the_invariant_alone() {
    let qq = Tower::rationals();
    let m = model(&qq, "y^2 - x^3");
    // theta^2 - 2 over QQ.
    let h = UPoly::from_elems(&qq, vec![qq.from_i64(-2), qq.zero(), qq.one()]).unwrap();
    let rep = separable_basechange_check(&m, "theta", &h).unwrap();
    assert!(rep.separable);
    assert!(!rep.changed);

    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let m2 = model(&f2t, "y^2 + t*x^6 + x^13");
    // theta^2 + theta + t: Artin-Schreier, separable.
    let t = f2t.generator_by_name("t").unwrap();
    let h2 = UPoly::from_elems(&f2t, vec![t, f2t.one(), f2t.one()]).unwrap();
    let rep2 = separable_basechange_check(&m2, "theta", &h2).unwrap();
    assert!(rep2.separable);
    assert!(!rep2.changed);
}

#[test]
fn an_inseparable_extension_changes_the_invariant_and_says_so() {
    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let m = model(&f2t, "y^2 + t*x^6 + x^13");
    let t = f2t.generator_by_name("t").unwrap();
    // theta^2 + t: inseparable; the unsolvable vertex dissolves after it.
    let h = UPoly::from_elems(&f2t, vec![t, f2t.zero(), f2t.one()]).unwrap();
    let rep = separable_basechange_check(&m, "theta", &h).unwrap();
    assert!(!rep.separable);
    assert!(rep.changed);
    assert_eq!(rep.base.a2.to_string(), "6");
    assert_eq!(rep.extended.a2.to_string(), "13");
}
