//! Property suites: field axioms, valuation laws, factorization round-trips,
//! dissolution monotonicity, and determinism, over randomized inputs.

mod common;

use curveres::charpoly::{invariant, quasiregular_check};
use curveres::exactfield::{FieldElem, Tower, UPoly};
use curveres::mpoly::{MonomialValuation, Poly};
use num::rational::BigRational;
use num::BigInt;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn elem(tower: &Tower, n: i64, d: i64) -> FieldElem {
    if tower.characteristic() == 0 {
        tower.from_rational(q(n, d.max(1))).unwrap()
    } else {
        tower.from_i64(n)
    }
}

fn axiom_towers() -> Vec<Tower> {
    let mut ts = common::towers();
    ts.push(Tower::prime(2).unwrap().add_transcendental("t").unwrap());
    ts
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_hold(an in -20i64..20, ad in 1i64..6, bn in -20i64..20, bd in 1i64..6, cn in -20i64..20, cd in 1i64..6) {
        for tower in axiom_towers() {
            let a = elem(&tower, an, ad);
            let b = elem(&tower, bn, bd);
            let c = elem(&tower, cn, cd);
            // Associativity and commutativity.
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            // Distributivity.
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            // Inverses.
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
            }
            prop_assert!(a.add(&a.neg()).unwrap().is_zero());
        }
    }

    #[test]
    fn monomial_valuation_is_a_valuation(
        ea in prop::collection::vec((0u32..5, 0u32..4, 1i64..5), 1..4),
        eb in prop::collection::vec((0u32..5, 0u32..4, 1i64..5), 1..4),
        a1 in 1i64..5, a2 in 1i64..7,
    ) {
        let tower = Tower::rationals();
        let vars = vec!["x".to_string(), "y".to_string()];
        let build = |terms: &[(u32, u32, i64)]| {
            let mut f = Poly::zero(&tower, &vars);
            for &(i, j, c) in terms {
                let t = Poly::var(&tower, &vars, 0).pow(i).unwrap()
                    .mul(&Poly::var(&tower, &vars, 1).pow(j).unwrap()).unwrap()
                    .scale(&tower.from_i64(c));
                f = f.add(&t).unwrap();
            }
            f
        };
        let f = build(&ea);
        let g = build(&eb);
        prop_assume!(!f.is_zero() && !g.is_zero());
        let v = MonomialValuation::new(("y".into(), "x".into()), q(a1, 1), q(a2, 1)).unwrap();
        let vf = v.v_j(&f).unwrap();
        let vg = v.v_j(&g).unwrap();
        // Multiplicativity.
        prop_assert_eq!(v.v_j(&f.mul(&g).unwrap()).unwrap(), vf.clone() + vg.clone());
        // Ultrametric bound.
        let s = f.add(&g).unwrap();
        if !s.is_zero() {
            prop_assert!(v.v_j(&s).unwrap() >= vf.min(vg));
        }
    }

    #[test]
    fn univariate_factorizations_multiply_back(co in prop::collection::vec(-6i64..=6, 2..7)) {
        for tower in common::towers() {
            let coeffs: Vec<FieldElem> = co.iter().map(|&c| tower.from_i64(c)).collect();
            let f = match UPoly::from_elems(&tower, coeffs) {
                Ok(f) => f,
                Err(_) => continue,
            };
            if f.is_zero() || f.degree() == 0 {
                continue;
            }
            let factors = f.factor().unwrap();
            let mut prod = UPoly::one(&tower).scale(&f.leading_coeff());
            for (h, e) in &factors {
                prop_assert!(h.is_monic());
                prod = prod.mul(&h.pow(*e as u64));
            }
            prop_assert_eq!(prod, f);
        }
    }
}

#[test]
fn dissolution_only_raises_delta_and_preserves_the_order() {
    let mut checked = 0;
    for m in common::corpus(41, 40) {
        if quasiregular_check(&m).unwrap() {
            continue;
        }
        let (inv, r) = match invariant(&m) {
            Ok(v) => v,
            Err(curveres::error::Error::QuasiRegular(_)) => continue,
            Err(e) => panic!("invariant failed: {e}"),
        };
        assert_eq!(r.nu, inv.a1);
        assert_eq!(m.f.ord().unwrap(), inv.a1);
        // a2 = delta * nu >= nu, i.e. delta >= 1.
        assert!(inv.a2 >= BigRational::from(BigInt::from(inv.a1)));
        // Every vertex of the final polyhedron sits on or above the delta line.
        if let Some(delta) = &r.delta {
            for v in &r.polyhedron.vertices {
                let s: BigRational = v.iter().cloned().sum();
                assert!(&s >= delta);
            }
        }
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} instances exercised");
}

#[test]
fn the_invariant_is_deterministic() {
    for m in common::corpus(99, 10) {
        if quasiregular_check(&m).unwrap() {
            continue;
        }
        let a = invariant(&m);
        let b = invariant(&m);
        match (a, b) {
            (Ok((ia, ra)), Ok((ib, rb))) => {
                assert_eq!(ia, ib);
                assert_eq!(ra.model.f.render(), rb.model.f.render());
                assert_eq!(ra.polyhedron.vertices, rb.polyhedron.vertices);
            }
            (Err(ea), Err(eb)) => assert_eq!(ea.to_string(), eb.to_string()),
            other => panic!("nondeterministic outcome: {other:?}"),
        }
    }
}
