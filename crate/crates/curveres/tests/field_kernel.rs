//! End-to-end checks of the field-tower kernel: descriptors, arithmetic,
//! roots, and univariate factorization across the supported tower shapes.

use curveres::exactfield::{Tower, UPoly};

fn upoly(tower: &Tower, coeffs: &[i64]) -> UPoly {
    UPoly::from_elems(
        tower,
        coeffs.iter().map(|&c| tower.from_i64(c)).collect(),
    )
    .unwrap()
}

#[test]
fn descriptor_round_trip() {
    let q = Tower::rationals();
    let f2 = Tower::prime(2).unwrap();
    let f2t = f2.add_transcendental("t").unwrap();
    let t = f2t.generator_by_name("t").unwrap();
    // w^2 + t (inseparable quadratic)
    let m = UPoly::from_elems(&f2t, vec![t.clone(), f2t.zero(), f2t.one()]).unwrap();
    let ext = f2t.add_algebraic("w", &m).unwrap();

    for tower in [&q, &f2, &f2t, &ext] {
        let d = tower.descriptor();
        let back = Tower::parse_descriptor(&d).unwrap();
        assert_eq!(&back, tower, "round trip of {d}");
        assert_eq!(back.descriptor(), d);
    }
    assert_eq!(ext.descriptor(), "GF(2)(t)[w]/(w^2+t)");
}

#[test]
fn rational_arithmetic_and_nth_root() {
    let q = Tower::rationals();
    let a = q.from_i64(27);
    let r = a.nth_root(3).unwrap().unwrap();
    assert_eq!(r, q.from_i64(3));
    assert!(q.from_i64(2).nth_root(2).unwrap().is_none());
    let half = q.from_i64(1).div(&q.from_i64(2)).unwrap();
    assert_eq!(
        half.add(&half).unwrap(),
        q.one(),
        "1/2 + 1/2 = 1"
    );
}

#[test]
fn pth_root_in_imperfect_tower() {
    // GF(2)(t): t has no square root; t^2 does.
    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let t = f2t.generator_by_name("t").unwrap();
    assert!(t.pth_root().unwrap().is_none());
    let t2 = t.mul(&t).unwrap();
    assert_eq!(t2.pth_root().unwrap().unwrap(), t);

    // GF(2)(t)[w]/(w^2+t): now t = w^2 has the root w, and w itself has no
    // square root (the extension is inseparable of degree 2).
    let m = UPoly::from_elems(&f2t, vec![t.clone(), f2t.zero(), f2t.one()]).unwrap();
    let ext = f2t.add_algebraic("w", &m).unwrap();
    let w = ext.generator_by_name("w").unwrap();
    let t_up = ext.embed(&t).unwrap();
    assert_eq!(t_up.pth_root().unwrap().unwrap(), w);
    assert!(w.pth_root().unwrap().is_none());
}

#[test]
fn factor_over_rationals() {
    let q = Tower::rationals();
    // (x^2+1)(x-2)^2 (x+3)
    let f = upoly(&q, &[1, 0, 1])
        .mul(&upoly(&q, &[-2, 1]))
        .mul(&upoly(&q, &[-2, 1]))
        .mul(&upoly(&q, &[3, 1]));
    let facs = f.factor().unwrap();
    let mut found = facs
        .iter()
        .map(|(g, e)| (g.to_string_var("x"), *e))
        .collect::<Vec<_>>();
    found.sort();
    assert_eq!(
        found,
        vec![
            ("x + 3".to_string(), 1),
            ("x - 2".to_string(), 2),
            ("x^2 + 1".to_string(), 1),
        ]
    );
}

#[test]
fn factor_over_finite_fields() {
    let f2 = Tower::prime(2).unwrap();
    // x^4 + x + 1 is irreducible over GF(2); x^4 + x^2 + 1 = (x^2+x+1)^2.
    let irr = upoly(&f2, &[1, 1, 0, 0, 1]);
    assert_eq!(irr.factor().unwrap(), vec![(irr.clone(), 1)]);
    let sq = upoly(&f2, &[1, 0, 1, 0, 1]);
    let facs = sq.factor().unwrap();
    assert_eq!(facs.len(), 1);
    assert_eq!(facs[0].0.to_string_var("x"), "x^2 + x + 1");
    assert_eq!(facs[0].1, 2);

    // GF(9) = GF(3)[i]/(i^2+1): x^2+1 splits there.
    let f3 = Tower::prime(3).unwrap();
    let m = upoly(&f3, &[1, 0, 1]);
    let f9 = f3.add_algebraic("i", &m).unwrap();
    let x2p1 = upoly(&f9, &[1, 0, 1]);
    let facs = x2p1.factor().unwrap();
    assert_eq!(facs.len(), 2);
    let prod = facs[0].0.mul(&facs[1].0);
    assert_eq!(prod, x2p1);
}

#[test]
fn factor_over_function_fields() {
    // GF(2)(t): x^2 + t is irreducible (inseparable); x^2 + t^2 = (x+t)^2.
    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let t = f2t.generator_by_name("t").unwrap();
    let x2t = UPoly::from_elems(&f2t, vec![t.clone(), f2t.zero(), f2t.one()]).unwrap();
    assert_eq!(x2t.factor().unwrap(), vec![(x2t.clone(), 1)]);
    let t2 = t.mul(&t).unwrap();
    let x2t2 = UPoly::from_elems(&f2t, vec![t2, f2t.zero(), f2t.one()]).unwrap();
    let facs = x2t2.factor().unwrap();
    assert_eq!(facs.len(), 1);
    assert_eq!(facs[0].1, 2);

    // (x - t)(x - t - 1)(x^2 + x + t) over GF(2)(t).
    let a = UPoly::from_elems(&f2t, vec![t.clone(), f2t.one()]).unwrap();
    let b = UPoly::from_elems(&f2t, vec![t.add(&f2t.one()).unwrap(), f2t.one()]).unwrap();
    let c = UPoly::from_elems(&f2t, vec![t.clone(), f2t.one(), f2t.one()]).unwrap();
    let f = a.mul(&b).mul(&c);
    let facs = f.factor().unwrap();
    assert_eq!(facs.len(), 3);
    let mut prod = UPoly::one(&f2t);
    for (g, e) in &facs {
        assert_eq!(*e, 1);
        prod = prod.mul(&g.pow(*e as u64));
    }
    assert_eq!(prod, f);

    // QQ(t): (x - t)(x + t)(x^2 - t).
    let qt = Tower::rationals().add_transcendental("t").unwrap();
    let tq = qt.generator_by_name("t").unwrap();
    let a = UPoly::from_elems(&qt, vec![tq.neg(), qt.one()]).unwrap();
    let b = UPoly::from_elems(&qt, vec![tq.clone(), qt.one()]).unwrap();
    let c = UPoly::from_elems(&qt, vec![tq.neg(), qt.zero(), qt.one()]).unwrap();
    let f = a.mul(&b).mul(&c);
    let facs = f.factor().unwrap();
    assert_eq!(facs.len(), 3);
    let mut prod = UPoly::one(&qt);
    for (g, e) in &facs {
        prod = prod.mul(&g.pow(*e as u64));
    }
    assert_eq!(prod, f);
}

#[test]
fn factor_over_algebraic_extension_of_function_field() {
    // E = GF(2)(t)[w]/(w^2+w+t), a separable quadratic; x^2 + x + t splits
    // over E as (x+w)(x+w+1).
    let f2t = Tower::prime(2).unwrap().add_transcendental("t").unwrap();
    let t = f2t.generator_by_name("t").unwrap();
    let m = UPoly::from_elems(&f2t, vec![t.clone(), f2t.one(), f2t.one()]).unwrap();
    let ext = f2t.add_algebraic("w", &m).unwrap();
    let te = ext.embed(&t).unwrap();
    let f = UPoly::from_elems(&ext, vec![te, ext.one(), ext.one()]).unwrap();
    let facs = f.factor().unwrap();
    assert_eq!(facs.len(), 2, "splits into linear factors");
    let prod = facs[0].0.mul(&facs[1].0);
    assert_eq!(prod, f);
}

#[test]
fn irreducibility_check_guards_tower_construction() {
    let q = Tower::rationals();
    let reducible = upoly(&q, &[-1, 0, 1]); // x^2 - 1
    assert!(q.add_algebraic("a", &reducible).is_err());
    let ok = upoly(&q, &[-2, 0, 1]); // x^2 - 2
    let ext = q.add_algebraic("a", &ok).unwrap();
    let a = ext.generator_by_name("a").unwrap();
    assert_eq!(a.mul(&a).unwrap(), ext.from_i64(2));
}
