//! End-to-end resolution trees: one-step classics, certified order drops,
//! deeper descent chains, and the chart/tree exports.

use curveres::charpoly::Invariant;
use curveres::exactfield::Tower;
use curveres::mpoly::{LocalModel, Poly};
use curveres::resolver::{
    absorb_invertible, equivariant_center, exceptional_points, resolve, singular_orbits,
    tree_to_dot, tree_to_json, NodeKind, OrbitLocus, ResolutionNode,
};

fn model(tower: &Tower, text: &str) -> LocalModel {
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse(text, tower, &vars).unwrap();
    LocalModel::new(tower.clone(), vec!["x".into()], "y".into(), f).unwrap()
}

fn walk(n: &ResolutionNode, seen: &mut Vec<(String, Option<Invariant>)>) {
    let inv = match &n.kind {
        NodeKind::RegularLeaf => None,
        NodeKind::Blowup(b) => Some(b.invariant.clone()),
    };
    seen.push((n.label.clone(), inv));
    for (_, c) in &n.children {
        walk(c, seen);
    }
}

#[test]
fn cusp_resolves_in_one_step() {
    let qq = Tower::rationals();
    let t = resolve(&model(&qq, "y^2 - x^3")).unwrap();
    match &t.root.kind {
        NodeKind::Blowup(b) => {
            assert_eq!((b.invariant.a1, b.invariant.a2.to_string().as_str()), (2, "3"));
            assert_eq!(b.reduced.weights, (3, 2));
            assert_eq!(b.reduced.ell, 6);
            assert_eq!(b.stabilizers.at_p2_axis, 2);
            assert_eq!(b.stabilizers.at_p1_axis, 3);
            assert!(b.certificate.entries.iter().all(|e| e.order <= 1));
            assert!(!b.certificate.entries.is_empty());
        }
        NodeKind::RegularLeaf => panic!("cusp is singular"),
    }
    assert!(t.root.children.is_empty(), "one blow-up suffices");
    assert_eq!(t.max_depth, 0);
}

#[test]
fn tacnode_resolves_in_one_step_with_weights_two_one() {
    let qq = Tower::rationals();
    let t = resolve(&model(&qq, "y^2 - x^4")).unwrap();
    match &t.root.kind {
        NodeKind::Blowup(b) => {
            assert_eq!(b.reduced.weights, (2, 1));
            assert_eq!(b.reduced.ell, 4);
            assert!(b.certificate.entries.iter().all(|e| e.order <= 1));
        }
        NodeKind::RegularLeaf => panic!("tacnode is singular"),
    }
    assert!(t.root.children.is_empty());
}

#[test]
fn node_with_directrix_zero_resolves_in_one_step() {
    let qq = Tower::rationals();
    let t = resolve(&model(&qq, "y^2 - x^2 + x^3")).unwrap();
    match &t.root.kind {
        NodeKind::Blowup(b) => {
            assert_eq!(b.reduced.weights, (1, 1));
            assert!(b.certificate.entries.iter().all(|e| e.order <= 1));
            // Two rational branches cross here, so two exceptional points.
            assert_eq!(b.certificate.entries.len(), 2);
        }
        NodeKind::RegularLeaf => panic!("node is singular"),
    }
    assert!(t.root.children.is_empty());
}

#[test]
fn cusp_exceptional_points_are_the_two_slice_roots() {
    let qq = Tower::rationals();
    let m = model(&qq, "y^2 - x^3");
    let (inv, r) = curveres::charpoly::invariant(&m).unwrap();
    let step = curveres::resolver::blowup_step(&r, &inv).unwrap();
    let pts = exceptional_points(&step.transform, &step.chart, &qq).unwrap();
    assert_eq!(pts.len(), 2);
    for p in &pts {
        assert!(matches!(p.locus, OrbitLocus::Generic { .. }));
        assert_eq!(p.order, 1);
        assert!(!p.singular);
    }
    assert!(singular_orbits(&pts).is_empty());
    // Chart-level center descriptions stay semi-invariant.
    let ec = equivariant_center(&step.chart, &pts[0]).unwrap();
    assert_eq!(ec.characters.0, -1);
    assert_eq!(ec.characters.1, 6);
}

#[test]
fn quartic_resolution_certifies_the_order_drop_and_descends() {
    let base = Tower::prime(2).unwrap();
    let tower = base.add_transcendental("z").unwrap();
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse("y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y", &tower, &vars).unwrap();
    let m = LocalModel::new(tower, vec!["x".into()], "y".into(), f).unwrap();
    let t = resolve(&m).unwrap();
    let b = match &t.root.kind {
        NodeKind::Blowup(b) => b,
        NodeKind::RegularLeaf => panic!("quartic is singular"),
    };
    assert_eq!((b.invariant.a1, b.invariant.a2.to_string().as_str()), (4, "6"));
    let max_order = b.certificate.entries.iter().map(|e| e.order).max().unwrap();
    assert!(max_order <= 2, "max exceptional log order {max_order}");
    assert!(max_order < 4);
    // Invariants strictly descend along every root-to-leaf path.
    let mut seen = Vec::new();
    walk(&t.root, &mut seen);
    for (label, inv) in &seen {
        if let Some(inv) = inv {
            for (other_label, other) in &seen {
                if label != other_label
                    && label.starts_with(other_label.as_str())
                    && other_label.len() < label.len()
                {
                    let parent = other.as_ref().expect("interior nodes carry invariants");
                    assert!(inv < parent, "descent failed: {inv} under {parent}");
                }
            }
        }
    }
}

#[test]
fn every_leaf_of_a_deeper_tree_is_certified_regular() {
    let qq = Tower::rationals();
    let t = resolve(&model(&qq, "y^3 - x^5")).unwrap();
    let mut seen = Vec::new();
    walk(&t.root, &mut seen);
    assert!(seen.len() >= 1);
    fn assert_leaves(n: &ResolutionNode) {
        match &n.kind {
            NodeKind::RegularLeaf => assert!(n.children.is_empty()),
            NodeKind::Blowup(b) => {
                // Every certified-regular point is either absent from the
                // children or the recursion continued below it.
                assert!(b.certificate.entries.iter().all(|e| e.order < b.invariant.a1));
                for (_, c) in &n.children {
                    assert_leaves(c);
                }
            }
        }
    }
    assert_leaves(&t.root);
}

#[test]
fn invertible_ambient_variables_are_absorbed_as_transcendentals() {
    let base = Tower::prime(2).unwrap();
    let vars = vec!["x".to_string(), "y".to_string(), "z".to_string()];
    let f = Poly::parse("y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y", &base, &vars).unwrap();
    let m = absorb_invertible(&base, &f, &["z".to_string()], &["x".to_string()], "y").unwrap();
    assert_eq!(m.tower.descriptor(), "GF(2)(z)");
    assert_eq!(m.f.render(), "y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y");
    // Unknown variables are rejected.
    assert!(absorb_invertible(&base, &f, &[], &["x".to_string()], "y").is_err());
}

#[test]
fn tree_exports_are_well_formed() {
    let qq = Tower::rationals();
    let t = resolve(&model(&qq, "y^2 - x^3")).unwrap();
    let json = tree_to_json(&t);
    assert_eq!(json["root"]["status"], "blown-up");
    assert_eq!(json["root"]["weights"][0], 3);
    assert_eq!(json["root"]["weights"][1], 2);
    assert!(json["root"]["certificate"]["points"].as_array().unwrap().len() >= 1);
    let dot = tree_to_dot(&t);
    assert!(dot.starts_with("digraph resolution {"));
    assert!(dot.contains("weights (3, 2)"));
}

#[test]
fn already_regular_input_returns_a_single_leaf() {
    let qq = Tower::rationals();
    let vars = vec!["x".to_string(), "y".to_string()];
    let f = Poly::parse("y + x^2", &qq, &vars).unwrap();
    let m = LocalModel::new(qq, vec!["x".into()], "y".into(), f).unwrap();
    let t = resolve(&m).unwrap();
    assert!(matches!(t.root.kind, NodeKind::RegularLeaf));
    assert!(t.root.children.is_empty());
}
