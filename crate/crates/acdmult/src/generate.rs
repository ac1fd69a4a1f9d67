//! Construction of valid random descriptors and the explicit family of
//! rigid groups that are near isomorphic, but not isomorphic, to their
//! multiplication groups.

use num_integer::Integer;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, primes_in_progression};
use crate::error::{Error, Result};
use crate::group::{condition_m, GroupDescriptor, IdempotentType, TypeComponent};
use crate::units::UnitConfig;

/// Knobs for the random descriptor generator. All draws are deterministic
/// per seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub max_types: u32,
    pub max_rank: u64,
    pub prime_pool: Vec<u64>,
    pub modulus_pool: Vec<u64>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_types: 4,
            max_rank: 3,
            prime_pool: vec![2, 3, 5, 7, 11, 13, 17, 19, 23],
            modulus_pool: vec![2, 3, 4, 5, 6, 7, 9],
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.prime_pool.is_empty() || self.modulus_pool.is_empty() {
            return Err(Error::GenerationFailure("pools must be nonempty".into()));
        }
        if self.prime_pool.iter().any(|&p| !is_prime(p)) {
            return Err(Error::GenerationFailure(
                "prime pool contains a composite".into(),
            ));
        }
        if self.modulus_pool.contains(&0) {
            return Err(Error::GenerationFailure("modulus pool contains 0".into()));
        }
        if self.max_rank == 0 || self.max_types == 0 {
            return Err(Error::GenerationFailure(
                "max_rank and max_types must be positive".into(),
            ));
        }
        if self.max_types < 2 && self.modulus_pool.iter().any(|&m| m > 1) {
            return Err(Error::GenerationFailure(
                "nontrivial moduli need at least two types to satisfy condition (m)".into(),
            ));
        }
        Ok(())
    }
}

const GENERATION_ATTEMPTS: usize = 500;

/// A validate-clean descriptor drawn from the configured pools,
/// deterministic per seed.
pub fn random_descriptor(cfg: &GenConfig) -> Result<GroupDescriptor> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nontrivial = cfg.modulus_pool.iter().any(|&m| m > 1);
    for _ in 0..GENERATION_ATTEMPTS {
        let min_types = if nontrivial { 2 } else { 1 };
        let count = rng.random_range(min_types..=cfg.max_types) as usize;
        let moduli = if rng.random_bool(0.5) {
            draw_paired_moduli(&mut rng, count, &cfg.modulus_pool)
        } else {
            (0..count)
                .map(|_| *cfg.modulus_pool.choose(&mut rng).expect("nonempty pool"))
                .collect()
        };
        if !condition_m(&moduli) {
            continue;
        }
        let Some(types) = draw_types(&mut rng, &moduli, &cfg.prime_pool) else {
            continue;
        };
        let components = types
            .into_iter()
            .zip(&moduli)
            .map(|(p_inf, &m)| {
                let rank = rng.random_range(1..=cfg.max_rank);
                let s = (m > 1).then(|| draw_unit(&mut rng, m));
                TypeComponent::new(p_inf, rank, m, s)
            })
            .collect();
        let descriptor = GroupDescriptor::new(components).canonicalize()?;
        debug_assert!(descriptor.validate().is_ok());
        return Ok(descriptor);
    }
    Err(Error::GenerationFailure(format!(
        "no valid descriptor after {GENERATION_ATTEMPTS} attempts; pools too small for \
         incomparability and condition (m)"
    )))
}

/// Assigns pool values to disjoint index pairs so every prime power is
/// matched; unpaired leftovers stay completely decomposable.
fn draw_paired_moduli(rng: &mut ChaCha8Rng, count: usize, pool: &[u64]) -> Vec<u64> {
    let mut moduli = vec![1u64; count];
    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(rng);
    let mut i = 0;
    while i + 1 < count {
        let v = *pool.choose(rng).expect("nonempty pool");
        moduli[order[i]] = v;
        moduli[order[i + 1]] = v;
        i += 2;
        if rng.random_bool(0.3) {
            break;
        }
    }
    moduli
}

fn draw_types(
    rng: &mut ChaCha8Rng,
    moduli: &[u64],
    prime_pool: &[u64],
) -> Option<Vec<IdempotentType>> {
    let mut types: Vec<IdempotentType> = Vec::with_capacity(moduli.len());
    for &m in moduli {
        let available: Vec<u64> = prime_pool
            .iter()
            .copied()
            .filter(|&p| m % p != 0)
            .collect();
        if available.is_empty() {
            return None;
        }
        let mut placed = false;
        for _ in 0..50 {
            let size = rng.random_range(1..=available.len().min(2));
            let picks = rand::seq::index::sample(rng, available.len(), size);
            let candidate = IdempotentType::new(picks.iter().map(|i| available[i]));
            if types.iter().all(|t| !t.comparable(&candidate)) {
                types.push(candidate);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Some(types)
}

fn draw_unit(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    loop {
        let s = rng.random_range(1..m);
        if s.gcd(&m) == 1 {
            return s;
        }
    }
}

/// Rigid rank-`k` groups that are near isomorphic but not isomorphic to
/// their multiplication groups. The infinite primes and the first numerator
/// are the smallest primes congruent to 1 modulo `p`; the second numerator
/// is the least candidate whose square avoids the obstructed residues.
pub fn example_4_9(k: u32, p: u64, cfg: &UnitConfig) -> Result<GroupDescriptor> {
    if k < 2 {
        return Err(Error::ConstructionFailure(format!(
            "need at least 2 types, got k = {k}"
        )));
    }
    if p <= 3 || !is_prime(p) {
        return Err(Error::ConstructionFailure(format!(
            "p = {p} must be a prime greater than 3"
        )));
    }
    let progression = primes_in_progression(1, p, k as usize + 1)?;
    let (qs, s1) = progression.split_at(k as usize);
    let s1 = s1[0];
    let q2 = qs[1];
    let s2 = (2..p - 1)
        .find(|&s| {
            let square = (s as u128 * s as u128 % p as u128) as u64;
            s.gcd(&q2) == 1
                && square != 1
                && (!cfg.include_minus_one || square != p - 1)
        })
        .ok_or_else(|| {
            Error::ConstructionFailure(format!(
                "no admissible second numerator for p = {p}: every candidate in (1, {}) has a \
                 square congruent to ±1 modulo {p}, which the -1-inclusive unit convention \
                 cannot distinguish from the first coordinate",
                p - 1
            ))
        })?;
    let components = qs
        .iter()
        .enumerate()
        .map(|(i, &q)| {
            let s = match i {
                0 => s1,
                1 => s2,
                _ => 1,
            };
            TypeComponent::new(IdempotentType::new([q]), 1, p, Some(s))
        })
        .collect();
    let descriptor = GroupDescriptor::new(components);
    debug_assert!(descriptor.validate().is_ok());
    Ok(descriptor)
}

/// Origin metadata attached to generated descriptors in JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub k: Option<u32>,
    pub p: Option<u64>,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn random(seed: u64) -> Self {
        Provenance {
            generator: "random".into(),
            k: None,
            p: None,
            seed: Some(seed),
        }
    }

    pub fn example_4_9(k: u32, p: u64) -> Self {
        Provenance {
            generator: "example_4_9".into(),
            k: Some(k),
            p: Some(p),
            seed: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::{near_iso, self_mult_iso};
    use crate::mult::mult_of;

    #[test]
    fn random_descriptors_validate() {
        for seed in 0..64 {
            let g = random_descriptor(&GenConfig::with_seed(seed)).unwrap();
            assert!(g.validate().is_ok(), "seed {seed} produced {g:?}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_descriptor(&GenConfig::with_seed(1)).unwrap();
        let b = random_descriptor(&GenConfig::with_seed(1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn singleton_modulus_pool_forces_pairs() {
        let cfg = GenConfig {
            seed: 7,
            max_types: 2,
            max_rank: 1,
            prime_pool: vec![11, 13, 17],
            modulus_pool: vec![5],
        };
        for seed in 0..16 {
            let g = random_descriptor(&GenConfig { seed, ..cfg.clone() }).unwrap();
            let ms: Vec<u64> = g.components.iter().map(|c| c.m).collect();
            assert_eq!(ms, vec![5, 5]);
        }
    }

    #[test]
    fn trivial_pool_allows_single_type() {
        let cfg = GenConfig {
            seed: 3,
            max_types: 1,
            max_rank: 3,
            prime_pool: vec![11, 13],
            modulus_pool: vec![1],
        };
        let g = random_descriptor(&cfg).unwrap();
        assert_eq!(g.components.len(), 1);
        assert_eq!(g.components[0].m, 1);
    }

    #[test]
    fn example_4_9_values() {
        let cfg = UnitConfig::default();
        let g = example_4_9(2, 7, &cfg).unwrap();
        assert_eq!(
            g.components
                .iter()
                .map(|c| (c.p_inf.primes().to_vec(), c.rank, c.m, c.s))
                .collect::<Vec<_>>(),
            vec![
                (vec![29], 1, 7, Some(71)),
                (vec![43], 1, 7, Some(2)),
            ]
        );
        assert!(self_mult_iso(&g, &cfg).unwrap().is_none());
        assert!(near_iso(&g, &mult_of(&g).unwrap()).unwrap());

        let g3 = example_4_9(3, 7, &cfg).unwrap();
        assert_eq!(
            g3.components
                .iter()
                .map(|c| c.p_inf.primes().to_vec())
                .collect::<Vec<_>>(),
            vec![vec![29], vec![43], vec![71]]
        );
        assert_eq!(g3.components[0].s, Some(113));
        assert!(self_mult_iso(&g3, &cfg).unwrap().is_none());
    }

    #[test]
    fn example_4_9_guard_for_p_5() {
        // every candidate square is ≡ -1 (mod 5), so the -1-inclusive
        // convention rejects the construction
        let include = UnitConfig::default();
        assert!(matches!(
            example_4_9(2, 5, &include),
            Err(Error::ConstructionFailure(_))
        ));
        // without -1 among the unit generators the construction goes through
        let exclude = UnitConfig {
            include_minus_one: false,
            ..UnitConfig::default()
        };
        let g = example_4_9(2, 5, &exclude).unwrap();
        assert!(self_mult_iso(&g, &exclude).unwrap().is_none());
    }

    #[test]
    fn example_4_9_rejects_bad_parameters() {
        let cfg = UnitConfig::default();
        assert!(matches!(
            example_4_9(1, 7, &cfg),
            Err(Error::ConstructionFailure(_))
        ));
        assert!(matches!(
            example_4_9(2, 4, &cfg),
            Err(Error::ConstructionFailure(_))
        ));
        assert!(matches!(
            example_4_9(2, 3, &cfg),
            Err(Error::ConstructionFailure(_))
        ));
    }
}
