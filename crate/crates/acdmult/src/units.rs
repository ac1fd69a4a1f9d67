//! Finite unit-group machinery: residue tuples over the rank-one torsion
//! types, the diagonal subgroup Γ, the localization subgroup V∞, closures of
//! generated subgroups, and the coset membership behind the isomorphism
//! criterion.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse_u64;
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;

/// Options shared by the unit-group computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitConfig {
    /// Whether `-1` is admitted as a generator of each V∞ coordinate.
    /// `±1` are P-numbers for every prime set, so the default includes it;
    /// excluding it reproduces computations that ignore signs.
    pub include_minus_one: bool,
    /// Hard bound on enumerated subgroup elements and unit scans.
    pub cap: usize,
}

pub const DEFAULT_CAP: usize = 1_000_000;

impl Default for UnitConfig {
    fn default() -> Self {
        UnitConfig {
            include_minus_one: true,
            cap: DEFAULT_CAP,
        }
    }
}

impl UnitConfig {
    pub fn with_cap(cap: usize) -> Self {
        UnitConfig {
            cap,
            ..UnitConfig::default()
        }
    }
}

/// An element of `∏ (Z/m)*`, stored as `(modulus, residue)` pairs in
/// canonical type order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueTuple {
    entries: Vec<(u64, u64)>,
}

impl ResidueTuple {
    pub fn new(entries: Vec<(u64, u64)>) -> Result<Self> {
        for &(m, r) in &entries {
            if m == 0 {
                return Err(Error::ZeroModulus);
            }
            if r >= m || r.gcd(&m) != 1 {
                return Err(Error::shape(
                    "residue tuple",
                    format!("{r} is not a unit modulo {m}"),
                ));
            }
        }
        Ok(ResidueTuple { entries })
    }

    pub fn identity(moduli: &[u64]) -> Self {
        ResidueTuple {
            entries: moduli.iter().map(|&m| (m, 1 % m)).collect(),
        }
    }

    pub fn moduli(&self) -> Vec<u64> {
        self.entries.iter().map(|&(m, _)| m).collect()
    }

    pub fn residues(&self) -> Vec<u64> {
        self.entries.iter().map(|&(_, r)| r).collect()
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mul(&self, other: &ResidueTuple) -> Result<ResidueTuple> {
        if self.moduli() != other.moduli() {
            return Err(Error::shape("residue tuple", "mismatched moduli"));
        }
        Ok(ResidueTuple {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&(m, a), &(_, b))| (m, (a as u128 * b as u128 % m as u128) as u64))
                .collect(),
        })
    }

    pub fn inverse(&self) -> ResidueTuple {
        ResidueTuple {
            entries: self
                .entries
                .iter()
                .map(|&(m, r)| (m, mod_inverse_u64(r, m).expect("residues are units")))
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> ResidueTuple {
        let mut acc = ResidueTuple::identity(&self.moduli());
        for _ in 0..e {
            acc = acc.mul(self).expect("same ambient");
        }
        acc
    }
}

/// An explicit finite subgroup of `∏ (Z/m)*`, with elements in
/// deterministic lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSubgroup {
    pub moduli: Vec<u64>,
    pub elements: BTreeSet<Vec<u64>>,
}

impl UnitSubgroup {
    fn from_residues(moduli: Vec<u64>, elements: BTreeSet<Vec<u64>>) -> Self {
        let group = UnitSubgroup { moduli, elements };
        debug_assert!(group.verify());
        group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, t: &ResidueTuple) -> bool {
        t.moduli() == self.moduli && self.elements.contains(&t.residues())
    }

    pub fn iter(&self) -> impl Iterator<Item = ResidueTuple> + '_ {
        self.elements.iter().map(move |rs| ResidueTuple {
            entries: self.moduli.iter().copied().zip(rs.iter().copied()).collect(),
        })
    }

    /// Subgroup axioms, checked exhaustively: identity, closure, inverses,
    /// and Lagrange against `∏ φ(m)`.
    pub fn verify(&self) -> bool {
        let identity: Vec<u64> = self.moduli.iter().map(|&m| 1 % m).collect();
        if !self.elements.contains(&identity) {
            return false;
        }
        for a in self.iter() {
            if !self.elements.contains(&a.inverse().residues()) {
                return false;
            }
            for b in self.iter() {
                let ab = a.mul(&b).expect("same ambient");
                if !self.elements.contains(&ab.residues()) {
                    return false;
                }
            }
        }
        let full: u128 = self
            .moduli
            .iter()
            .map(|&m| crate::arith::euler_phi(m) as u128)
            .product();
        full.is_multiple_of(self.order() as u128)
    }
}

/// Breadth-first closure of the generated subgroup. Deterministic element
/// order; fails once more than `cap` elements appear.
pub fn subgroup_closure(
    moduli: &[u64],
    generators: &[ResidueTuple],
    cap: usize,
) -> Result<UnitSubgroup> {
    for g in generators {
        if g.moduli() != moduli {
            return Err(Error::shape("residue tuple", "generator outside the ambient"));
        }
    }
    let identity = ResidueTuple::identity(moduli);
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue: VecDeque<ResidueTuple> = VecDeque::new();
    seen.insert(identity.residues());
    queue.push_back(identity);
    while let Some(current) = queue.pop_front() {
        for g in generators {
            let next = current.mul(g)?;
            let key = next.residues();
            if seen.insert(key) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        cap,
                        reached: seen.len(),
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(UnitSubgroup::from_residues(moduli.to_vec(), seen))
}

/// Moduli of the rank-one torsion types, in canonical type order.
fn t1_moduli(g: &GroupDescriptor) -> Vec<u64> {
    g.components
        .iter()
        .filter(|c| c.is_torsion() && c.rank == 1)
        .map(|c| c.m)
        .collect()
}

/// The numerator tuple `s` of the descriptor over its rank-one torsion
/// types; the arena element of the isomorphism criterion.
pub fn s_tuple(g: &GroupDescriptor) -> Result<ResidueTuple> {
    let g = g.canonicalize()?;
    ResidueTuple::new(
        g.components
            .iter()
            .filter(|c| c.is_torsion() && c.rank == 1)
            .map(|c| (c.m, c.s_residue().expect("torsion component") % c.m))
            .collect(),
    )
}

/// The image of the diagonal map `(Z/n)* → ∏ (Z/m)*`, `n` the regulator
/// index. Quotients `α·β⁻¹` of units modulo `n` form exactly this image.
pub fn gamma_subgroup(g: &GroupDescriptor, cfg: &UnitConfig) -> Result<UnitSubgroup> {
    let g = g.canonicalize()?;
    let moduli = t1_moduli(&g);
    let n = g.regulator_index()?;
    if n as u128 > cfg.cap as u128 {
        return Err(Error::CapExceeded {
            cap: cfg.cap,
            reached: cfg.cap,
        });
    }
    let mut elements = BTreeSet::new();
    for alpha in 1..=n {
        if alpha.gcd(&n) != 1 {
            continue;
        }
        elements.insert(moduli.iter().map(|&m| alpha % m).collect::<Vec<u64>>());
    }
    Ok(UnitSubgroup::from_residues(moduli, elements))
}

/// One coordinate of V∞: the subgroup of `(Z/m)*` generated by the infinite
/// primes of the type (and `-1` when admitted), with an integer witness per
/// residue. Witnesses are products of the generators, so each is a P-number
/// for the type's prime set.
pub(crate) fn unit_class_subgroup(
    m: u64,
    p_inf: &[u64],
    include_minus_one: bool,
    cap: usize,
) -> Result<BTreeMap<u64, BigInt>> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    let mut gens: Vec<(u64, BigInt)> = Vec::new();
    if m > 1 {
        for &p in p_inf {
            gens.push((p % m, BigInt::from(p)));
        }
        if include_minus_one {
            gens.push((m - 1, BigInt::from(-1)));
        }
    }
    let identity = 1 % m;
    let mut witnesses: BTreeMap<u64, BigInt> = BTreeMap::new();
    witnesses.insert(identity, BigInt::from(1));
    let mut queue = VecDeque::new();
    queue.push_back(identity);
    while let Some(r) = queue.pop_front() {
        let w = witnesses[&r].clone();
        for (gr, gw) in &gens {
            let nr = (r as u128 * *gr as u128 % m as u128) as u64;
            if !witnesses.contains_key(&nr) {
                if witnesses.len() >= cap {
                    return Err(Error::CapExceeded {
                        cap,
                        reached: witnesses.len() + 1,
                    });
                }
                witnesses.insert(nr, &w * gw);
                queue.push_back(nr);
            }
        }
    }
    Ok(witnesses)
}

/// The product over rank-one torsion types of the per-type subgroups
/// generated by their infinite primes (and `-1` when admitted).
pub fn vinf_subgroup(g: &GroupDescriptor, cfg: &UnitConfig) -> Result<UnitSubgroup> {
    let g = g.canonicalize()?;
    let mut moduli = Vec::new();
    let mut factors: Vec<Vec<u64>> = Vec::new();
    for c in g.components.iter().filter(|c| c.is_torsion() && c.rank == 1) {
        moduli.push(c.m);
        let w = unit_class_subgroup(c.m, c.p_inf.primes(), cfg.include_minus_one, cfg.cap)?;
        factors.push(w.keys().copied().collect());
    }
    let mut elements: BTreeSet<Vec<u64>> = BTreeSet::new();
    elements.insert(vec![]);
    for factor in &factors {
        let mut next = BTreeSet::new();
        for prefix in &elements {
            for &r in factor {
                if next.len() >= cfg.cap {
                    return Err(Error::CapExceeded {
                        cap: cfg.cap,
                        reached: next.len() + 1,
                    });
                }
                let mut e = prefix.clone();
                e.push(r);
                next.insert(e);
            }
        }
        elements = next;
    }
    Ok(UnitSubgroup::from_residues(moduli, elements))
}

/// The subgroup generated by Γ together with V∞. Both factors are
/// subgroups, so their product set is already the closure.
pub fn gamma_vinf_subgroup(g: &GroupDescriptor, cfg: &UnitConfig) -> Result<UnitSubgroup> {
    let gamma = gamma_subgroup(g, cfg)?;
    let vinf = vinf_subgroup(g, cfg)?;
    let moduli = gamma.moduli.clone();
    let mut elements = BTreeSet::new();
    for a in gamma.iter() {
        for b in vinf.iter() {
            elements.insert(a.mul(&b)?.residues());
            if elements.len() > cfg.cap {
                return Err(Error::CapExceeded {
                    cap: cfg.cap,
                    reached: elements.len(),
                });
            }
        }
    }
    Ok(UnitSubgroup::from_residues(moduli, elements))
}

/// Decomposition certificate for coset membership: the diagonal unit
/// `alpha` and per-type localization residues `v` with `u = diag(alpha)·v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetWitness {
    pub alpha: u64,
    pub modulus: u64,
    pub moduli: Vec<u64>,
    pub v: Vec<u64>,
}

/// Decides `u ∈ Γ·V∞` and returns a decomposition on success: some diagonal
/// unit image must shift `u` into the product of the per-type subgroups.
pub fn coset_decompose(
    g: &GroupDescriptor,
    u: &ResidueTuple,
    cfg: &UnitConfig,
) -> Result<Option<CosetWitness>> {
    let g = g.canonicalize()?;
    let torsion: Vec<_> = g
        .components
        .iter()
        .filter(|c| c.is_torsion() && c.rank == 1)
        .collect();
    let moduli: Vec<u64> = torsion.iter().map(|c| c.m).collect();
    if u.moduli() != moduli {
        return Err(Error::shape(
            "residue tuple",
            "tuple moduli do not match the group's rank-one torsion types",
        ));
    }
    let mut subgroups = Vec::with_capacity(torsion.len());
    for c in &torsion {
        subgroups.push(unit_class_subgroup(
            c.m,
            c.p_inf.primes(),
            cfg.include_minus_one,
            cfg.cap,
        )?);
    }
    let n = g.regulator_index()?;
    if n as u128 > cfg.cap as u128 {
        return Err(Error::CapExceeded {
            cap: cfg.cap,
            reached: cfg.cap,
        });
    }
    for alpha in 1..=n {
        if alpha.gcd(&n) != 1 {
            continue;
        }
        let mut v = Vec::with_capacity(torsion.len());
        for ((c, w), &(m, u_i)) in torsion.iter().zip(&subgroups).zip(u.entries()) {
            debug_assert_eq!(c.m, m);
            let inv = mod_inverse_u64(alpha % m, m)?;
            let candidate = (inv as u128 * u_i as u128 % m as u128) as u64;
            if w.contains_key(&candidate) {
                v.push(candidate);
            } else {
                break;
            }
        }
        if v.len() == torsion.len() {
            return Ok(Some(CosetWitness {
                alpha,
                modulus: n,
                moduli,
                v,
            }));
        }
    }
    Ok(None)
}

/// Coset membership `u ∈ Γ·V∞`.
pub fn in_gamma_vinf(g: &GroupDescriptor, u: &ResidueTuple, cfg: &UnitConfig) -> Result<bool> {
    Ok(coset_decompose(g, u, cfg)?.is_some())
}
