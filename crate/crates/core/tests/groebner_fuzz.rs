use std::collections::BTreeMap;

use algvar_core::catalog::random_rational;
use algvar_core::groebner::{is_empty, is_empty_fast, Caps, Emptiness};
use algvar_core::{Poly, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
    let terms = rng.gen_range(1..=4);
    let mut out = Poly::zero();
    for _ in 0..terms {
        let c: i64 = rng.gen_range(-5..=5);
        let mut m = Poly::from_i64(c);
        for v in VARS {
            m = &m * &Poly::var(v).pow(rng.gen_range(0..=1));
        }
        out = &out + &m;
    }
    out
}

struct Planted {
    system: Vec<Poly>,
    nonvanishing: Vec<Poly>,
    point: BTreeMap<String, Rational>,
}

fn planted(rng: &mut ChaCha8Rng) -> Planted {
    let point: BTreeMap<String, Rational> = VARS.iter().map(|v| (v.to_string(), random_rational(rng))).collect();
    let system = (0..rng.gen_range(1..=3))
        .map(|_| {
            let p = random_poly(rng);
            let at = p.eval(&point).unwrap();
            &p - &Poly::constant(at)
        })
        .collect();
    let mut nonvanishing = Vec::new();
    while nonvanishing.len() < rng.gen_range(0..=2) {
        let q = random_poly(rng);
        if !q.eval(&point).unwrap().is_zero() {
            nonvanishing.push(q);
        }
    }
    Planted {
        system,
        nonvanishing,
        point,
    }
}

fn vars() -> Vec<String> {
    VARS.iter().map(|v| v.to_string()).collect()
}

#[test]
fn planted_systems_are_never_empty() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut decided = 0;
    for i in 0..10_000 {
        let s = planted(&mut rng);
        match is_empty_fast(&vars(), &s.system, &s.nonvanishing, Caps::default()) {
            Emptiness::Empty => panic!("case {i} declared empty: {:?} / {:?} at {:?}", s.system, s.nonvanishing, s.point),
            Emptiness::NonEmpty(_) => decided += 1,
            Emptiness::Unknown => {}
        }
    }
    assert!(decided > 9_000, "only {decided} decided");
}

#[test]
fn found_points_satisfy_the_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let s = planted(&mut rng);
        if let Emptiness::NonEmpty(Some(p)) = is_empty(&vars(), &s.system, &s.nonvanishing, Caps::default()) {
            let mut full = p.clone();
            for v in VARS {
                full.entry(v.to_string()).or_insert_with(Rational::zero);
            }
            assert!(s.system.iter().all(|e| e.eval(&full).unwrap().is_zero()));
            assert!(s.nonvanishing.iter().all(|q| !q.eval(&full).unwrap().is_zero()));
        }
    }
}
