//! Shared corpus generation for the randomized suites: seeded, deterministic
//! local models over QQ, GF(2), GF(3), GF(5) with degree <= 8.

use curveres::exactfield::{FieldElem, Tower};
use curveres::mpoly::{LocalModel, Poly};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn towers() -> Vec<Tower> {
    vec![
        Tower::rationals(),
        Tower::prime(2).unwrap(),
        Tower::prime(3).unwrap(),
        Tower::prime(5).unwrap(),
    ]
}

pub fn random_coeff(rng: &mut ChaCha8Rng, tower: &Tower) -> FieldElem {
    if tower.characteristic() == 0 {
        let n = rng.gen_range(-3i64..=3);
        tower.from_i64(if n == 0 { 1 } else { n })
    } else {
        let p = tower.characteristic() as i64;
        tower.from_i64(rng.gen_range(1..p.max(2)))
    }
}

/// A random curve germ y^nu + (terms of degree >= 2, x-degree <= 8),
/// guaranteed singular-looking at the origin (order >= 2).
pub fn random_model(rng: &mut ChaCha8Rng, tower: &Tower) -> LocalModel {
    let vars = vec!["x".to_string(), "y".to_string()];
    let nu = rng.gen_range(2u32..=4);
    let mut f = Poly::var(tower, &vars, 1).pow(nu).unwrap();
    let extra = rng.gen_range(1usize..=4);
    for _ in 0..extra {
        let a = rng.gen_range(0u32..=8);
        let b = rng.gen_range(0u32..nu);
        if a + b < 2 || a + b > 8 {
            continue;
        }
        let c = random_coeff(rng, tower);
        let term = Poly::var(tower, &vars, 0)
            .pow(a)
            .unwrap()
            .mul(&Poly::var(tower, &vars, 1).pow(b).unwrap())
            .unwrap()
            .scale(&c);
        f = f.add(&term).unwrap();
    }
    if f.is_zero() || f.ord().unwrap() == 0 {
        // The extras cancelled the lot; fall back to the bare power.
        f = Poly::var(tower, &vars, 1).pow(nu).unwrap();
    }
    LocalModel::new(tower.clone(), vec!["x".into()], "y".into(), f).unwrap()
}

pub fn corpus(seed: u64, per_tower: usize) -> Vec<LocalModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for tower in towers() {
        for _ in 0..per_tower {
            out.push(random_model(&mut rng, &tower));
        }
    }
    out
}
