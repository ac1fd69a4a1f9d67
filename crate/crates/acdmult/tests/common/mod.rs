//! Shared fixtures and corpus builders for the integration suites.
#![allow(dead_code)]

use acdmult::arith::{mod_inverse, reduce_rational_mod};
use acdmult::{
    random_descriptor, GenConfig, GroupDescriptor, IdempotentType, MultElement, Rational,
    ScalarTuple, TypeComponent,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

pub fn ty(primes: &[u64]) -> IdempotentType {
    IdempotentType::new(primes.iter().copied())
}

pub fn descriptor(parts: &[(&[u64], u64, u64, Option<u64>)]) -> GroupDescriptor {
    GroupDescriptor::new(
        parts
            .iter()
            .map(|(p, rank, m, s)| TypeComponent::new(ty(p), *rank, *m, *s))
            .collect(),
    )
}

/// Rigid fixture: types {11} and {19}, m = (5, 5), s = (2, 3).
pub fn f1() -> GroupDescriptor {
    descriptor(&[(&[11], 1, 5, Some(2)), (&[19], 1, 5, Some(3))])
}

pub fn f1_with_s(s1: u64, s2: u64) -> GroupDescriptor {
    descriptor(&[(&[11], 1, 5, Some(s1)), (&[19], 1, 5, Some(s2))])
}

/// Rigid fixture with small infinite primes: types {2} and {3}, m = (5, 5),
/// s = (2, 3).
pub fn f2() -> GroupDescriptor {
    descriptor(&[(&[2], 1, 5, Some(2)), (&[3], 1, 5, Some(3))])
}

pub fn rigid_mult(g: &GroupDescriptor, values: &[&str]) -> MultElement {
    MultElement::rigid(
        g.components
            .iter()
            .zip(values)
            .map(|(c, v)| (c.p_inf.clone(), v.parse().unwrap())),
    )
}

pub fn scalar(g: &GroupDescriptor, values: &[&str]) -> ScalarTuple {
    ScalarTuple::new(
        g.components
            .iter()
            .zip(values)
            .map(|(c, v)| (c.p_inf.clone(), v.parse().unwrap())),
    )
}

/// Byte-exact serialization round trip; returns the serialized form.
pub fn assert_roundtrip<T>(value: &T) -> String
where
    T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let first = serde_json::to_string(value).expect("serialize");
    let back: T = serde_json::from_str(&first).expect("parse back");
    assert_eq!(&back, value, "round trip must preserve the value");
    let second = serde_json::to_string(&back).expect("serialize again");
    assert_eq!(first, second, "round trip must be byte-exact");
    first
}

/// Same types, ranks, and invariants; numerators redrawn. Near isomorphic to
/// the input by construction.
pub fn resample_numerators(g: &GroupDescriptor, rng: &mut ChaCha8Rng) -> GroupDescriptor {
    GroupDescriptor::new(
        g.components
            .iter()
            .map(|c| {
                let s = (c.m > 1).then(|| draw_unit(rng, c.m));
                TypeComponent::new(c.p_inf.clone(), c.rank, c.m, s)
            })
            .collect(),
    )
}

/// Numerators multiplied by a shared diagonal unit and per-type products of
/// infinite primes (with an occasional sign). Isomorphic to the input by
/// construction.
pub fn twist_numerators(g: &GroupDescriptor, rng: &mut ChaCha8Rng) -> GroupDescriptor {
    let g = g.canonicalize().unwrap();
    let n = g.regulator_index().unwrap();
    let alpha = draw_unit(rng, n.max(2));
    GroupDescriptor::new(
        g.components
            .iter()
            .map(|c| {
                let s = c.s.map(|s| {
                    let m = c.m;
                    let mut t = s % m * (alpha % m) % m;
                    if c.rank == 1 {
                        for &p in c.p_inf.primes() {
                            for _ in 0..rng.random_range(0..3u32) {
                                t = (t as u128 * (p % m) as u128 % m as u128) as u64;
                            }
                        }
                        if rng.random_bool(0.3) {
                            t = (m - t) % m;
                        }
                    } else {
                        // wide types never enter the coset test
                        t = draw_unit(rng, m);
                    }
                    t
                });
                TypeComponent::new(c.p_inf.clone(), c.rank, c.m, s)
            })
            .collect(),
    )
}

fn draw_unit(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    use num_integer::Integer;
    if m <= 1 {
        return 1;
    }
    loop {
        let s = rng.random_range(1..m);
        if s.gcd(&m) == 1 {
            return s;
        }
    }
}

/// Seeded corpus of descriptor pairs in four strata: independent draws,
/// near-isomorphic variants, isomorphic twists, and identical copies.
pub fn corpus_pairs(count: usize, base_seed: u64) -> Vec<(GroupDescriptor, GroupDescriptor)> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let g = random_descriptor(&GenConfig::with_seed(base_seed.wrapping_add(2 * i)))
            .expect("corpus generation");
        let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ (i.wrapping_mul(0x9e37_79b9)));
        let h = match i % 4 {
            0 => random_descriptor(&GenConfig::with_seed(base_seed.wrapping_add(2 * i + 1)))
                .expect("corpus generation"),
            1 => resample_numerators(&g, &mut rng),
            2 => twist_numerators(&g, &mut rng),
            _ => g.clone(),
        };
        out.push((g, h));
    }
    out
}

/// A random member `k·X + m²·y` of the multiplication group of a rigid
/// descriptor, together with its scalar `k` modulo the regulator index.
pub fn random_member(g: &GroupDescriptor, rng: &mut ChaCha8Rng) -> (MultElement, u64) {
    let g = g.canonicalize().unwrap();
    assert!(g.is_rigid());
    let n = g.regulator_index().unwrap();
    let k = rng.random_range(0..n);
    let entries: Vec<(IdempotentType, Rational)> = g
        .components
        .iter()
        .map(|c| {
            let m = c.m;
            let y = random_subring_rational(c.p_inf.primes(), rng);
            let base = if m > 1 {
                let s_inv = mod_inverse(c.s.unwrap() as i64, m).unwrap();
                Rational::from((k % m) * s_inv % m)
            } else {
                Rational::zero()
            };
            let u = (base + y.mul_int(m)).mul_int(m);
            (c.p_inf.clone(), u)
        })
        .collect();
    (MultElement::rigid(entries), k)
}

/// A rational with numerator in `[-9, 9]` and denominator a small product of
/// the given primes; lies in the subring they generate.
pub fn random_subring_rational(p_inf: &[u64], rng: &mut ChaCha8Rng) -> Rational {
    let numer = rng.random_range(-9i64..=9);
    let mut denom: i64 = 1;
    for &p in p_inf {
        for _ in 0..rng.random_range(0..=2u32) {
            denom = denom.saturating_mul(p as i64);
        }
    }
    Rational::new(numer, denom).unwrap()
}

/// A unit scalar of the group: a shared residue realized at every type by a
/// signed product of its infinite primes. Falls back to the identity when a
/// drawn residue is not realizable at some type.
pub fn random_unit_scalar(g: &GroupDescriptor, rng: &mut ChaCha8Rng) -> ScalarTuple {
    let g = g.canonicalize().unwrap();
    'outer: for _ in 0..32 {
        let mut entries = Vec::new();
        let gamma = rng.random_range(1..=64u64);
        for c in &g.components {
            let primes = c.p_inf.primes();
            let target = (c.m > 1).then(|| gamma % c.m);
            match search_unit_fraction(primes, target, c.m, rng) {
                Some(u) => entries.push((c.p_inf.clone(), u)),
                None => continue 'outer,
            }
        }
        let tuple = ScalarTuple::new(entries);
        if acdmult::in_kg_star(&g, &tuple).unwrap() {
            return tuple;
        }
    }
    ScalarTuple::ones_for(&g)
}

fn search_unit_fraction(
    primes: &[u64],
    target: Option<u64>,
    m: u64,
    rng: &mut ChaCha8Rng,
) -> Option<Rational> {
    for _ in 0..64 {
        let mut value = Rational::one();
        for &p in primes {
            let e = rng.random_range(-3i32..=3);
            for _ in 0..e.abs() {
                let factor = Rational::from(p);
                value = if e > 0 {
                    value * factor
                } else {
                    value.checked_div(&factor).unwrap()
                };
            }
        }
        if rng.random_bool(0.5) {
            value = -value;
        }
        match target {
            None => return Some(value),
            Some(t) => {
                if reduce_rational_mod(&value, m).unwrap() == t {
                    return Some(value);
                }
            }
        }
    }
    None
}
