//! Descriptor data model: idempotent types, components, validation, the
//! main decomposition, and membership of hull elements in the group.
//!
//! A descriptor pins a group up to isomorphism by its critical types, ranks,
//! near-isomorphism invariants `m` and numerators `s` of the standard
//! representation `d = Σ (s/m)·e₀`. Only the residue class of `s` modulo `m`
//! carries information; [`GroupDescriptor::canonicalize`] reduces `s` into
//! `[1, m)` and sorts components so that equal groups-as-data become
//! identical values.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{
    crt_solve, is_p_number, is_prime, mod_inverse_u64, reduce_rational_mod, CrtOutcome, Rational,
};
use crate::error::{Error, Result, Violation};

/// An idempotent type, encoded by its finite set of primes with infinite
/// entry. The complement set is implied.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IdempotentType {
    p_inf: Vec<u64>,
}

impl IdempotentType {
    /// Builds a type from any iterator of primes; sorts and deduplicates.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Self {
        let mut p_inf: Vec<u64> = primes.into_iter().collect();
        p_inf.sort_unstable();
        p_inf.dedup();
        IdempotentType { p_inf }
    }

    pub fn primes(&self) -> &[u64] {
        &self.p_inf
    }

    pub fn contains(&self, p: u64) -> bool {
        self.p_inf.binary_search(&p).is_ok()
    }

    /// `self ≤ other` in the type order, i.e. set inclusion of the prime sets.
    pub fn le(&self, other: &IdempotentType) -> bool {
        self.p_inf.iter().all(|p| other.contains(*p))
    }

    pub fn comparable(&self, other: &IdempotentType) -> bool {
        self.le(other) || other.le(self)
    }

    /// Comma-joined prime list, the map key used in JSON forms.
    pub fn key(&self) -> String {
        self.p_inf
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        if key.is_empty() {
            return Ok(IdempotentType { p_inf: vec![] });
        }
        let mut p_inf = Vec::new();
        for part in key.split(',') {
            let p: u64 = part
                .trim()
                .parse()
                .map_err(|_| Error::shape("type key", format!("{key:?}")))?;
            p_inf.push(p);
        }
        Ok(IdempotentType { p_inf })
    }

    fn well_formed(&self) -> bool {
        self.p_inf.windows(2).all(|w| w[0] < w[1]) && self.p_inf.iter().all(|&p| is_prime(p))
    }
}

impl fmt::Debug for IdempotentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

impl fmt::Display for IdempotentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.key())
    }
}

/// One rank-`rank` homogeneous piece of the regulator together with its
/// invariant `m` and, when `m > 1`, the numerator `s` of the standard
/// representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeComponent {
    pub p_inf: IdempotentType,
    pub rank: u64,
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
}

impl TypeComponent {
    pub fn new(p_inf: IdempotentType, rank: u64, m: u64, s: Option<u64>) -> Self {
        TypeComponent { p_inf, rank, m, s }
    }

    /// Whether this component contributes to the regulator quotient.
    pub fn is_torsion(&self) -> bool {
        self.m > 1
    }

    /// The numerator reduced to `[1, m)`; `None` when `m = 1`.
    pub fn s_residue(&self) -> Option<u64> {
        if self.m > 1 {
            self.s.map(|s| {
                let r = s % self.m;
                debug_assert!(r != 0, "validated components have gcd(s, m) = 1");
                r
            })
        } else {
            None
        }
    }
}

/// A group in the class, up to isomorphism of descriptors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub components: Vec<TypeComponent>,
}

/// Structural classification of a descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub is_rigid: bool,
    pub is_clipped: bool,
    pub is_proper: bool,
    pub t0: Vec<IdempotentType>,
    pub t1: Vec<IdempotentType>,
    pub regulator_index: u64,
}

impl GroupDescriptor {
    pub fn new(components: Vec<TypeComponent>) -> Self {
        GroupDescriptor { components }
    }

    /// All violated invariants, in discovery order; empty means valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.components.is_empty() {
            out.push(Violation::new("components", "descriptor has no components"));
            return out;
        }
        for c in &self.components {
            if !c.p_inf.well_formed() {
                out.push(Violation::new(
                    "p_inf",
                    format!("entries of {} must be strictly ascending primes", c.p_inf),
                ));
            }
            if c.rank == 0 {
                out.push(Violation::new(
                    "rank",
                    format!("type {} has rank 0", c.p_inf),
                ));
            }
            if c.m == 0 {
                out.push(Violation::new(
                    "modulus",
                    format!("type {} has m = 0", c.p_inf),
                ));
            } else if c.p_inf.primes().iter().any(|&p| c.m % p == 0) {
                out.push(Violation::new(
                    "(2.3'')",
                    format!("m = {} is not a P0-number for type {}", c.m, c.p_inf),
                ));
            }
            match (c.m > 1, c.s) {
                (true, None) => out.push(Violation::new(
                    "s presence",
                    format!("type {} has m = {} but no s", c.p_inf, c.m),
                )),
                (false, Some(s)) => out.push(Violation::new(
                    "s presence",
                    format!("type {} has m = 1 but s = {s}", c.p_inf),
                )),
                (true, Some(s)) => {
                    if c.m != 0 && s.gcd(&c.m) != 1 {
                        out.push(Violation::new(
                            "(2.3')",
                            format!("gcd(s = {s}, m = {}) != 1 for type {}", c.m, c.p_inf),
                        ));
                    }
                }
                (false, None) => {}
            }
        }
        for (i, a) in self.components.iter().enumerate() {
            for b in &self.components[i + 1..] {
                if a.p_inf.comparable(&b.p_inf) {
                    out.push(Violation::new(
                        "comparable types",
                        format!("{} and {} are comparable", a.p_inf, b.p_inf),
                    ));
                }
            }
        }
        let ms: Vec<u64> = self
            .components
            .iter()
            .map(|c| c.m.max(1))
            .collect();
        if !condition_m(&ms) {
            let detail = self
                .components
                .iter()
                .map(|c| c.m.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            out.push(Violation::new(
                "condition (m)",
                format!("the multiset {{{detail}}} has an unmatched prime power"),
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(violations))
        }
    }

    /// Sorted components with `s` reduced into `[1, m)`. Fails on invalid
    /// input. Idempotent, and equal groups-as-data canonicalize identically.
    pub fn canonicalize(&self) -> Result<GroupDescriptor> {
        self.validate()?;
        let mut components: Vec<TypeComponent> = self
            .components
            .iter()
            .map(|c| TypeComponent {
                p_inf: c.p_inf.clone(),
                rank: c.rank,
                m: c.m,
                s: c.s_residue(),
            })
            .collect();
        components.sort_by(|a, b| a.p_inf.cmp(&b.p_inf));
        Ok(GroupDescriptor { components })
    }

    pub fn component(&self, ty: &IdempotentType) -> Option<&TypeComponent> {
        self.components.iter().find(|c| &c.p_inf == ty)
    }

    /// Types with `m > 1`, in component order.
    pub fn t0(&self) -> Vec<IdempotentType> {
        self.components
            .iter()
            .filter(|c| c.is_torsion())
            .map(|c| c.p_inf.clone())
            .collect()
    }

    /// Types with `m > 1` and rank 1, in component order.
    pub fn t1(&self) -> Vec<IdempotentType> {
        self.components
            .iter()
            .filter(|c| c.is_torsion() && c.rank == 1)
            .map(|c| c.p_inf.clone())
            .collect()
    }

    pub fn is_rigid(&self) -> bool {
        self.components.iter().all(|c| c.rank == 1)
    }

    /// No completely decomposable direct summand: every component has
    /// `m > 1` and rank 1.
    pub fn is_clipped(&self) -> bool {
        self.components.iter().all(|c| c.is_torsion() && c.rank == 1)
    }

    /// Every numerator congruent to 1 modulo its invariant.
    pub fn is_proper(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.s_residue().is_none_or(|s| s == 1))
    }

    /// `lcm` of all invariants `m`.
    pub fn regulator_index(&self) -> Result<u64> {
        let mut n: u64 = 1;
        for c in &self.components {
            let m = c.m.max(1);
            let g = n.gcd(&m);
            n = n
                .checked_mul(m / g)
                .ok_or(Error::Overflow("regulator index"))?;
        }
        Ok(n)
    }

    pub fn total_rank(&self) -> u64 {
        self.components.iter().map(|c| c.rank).sum()
    }

    pub fn structure(&self) -> Result<Structure> {
        self.validate()?;
        Ok(Structure {
            is_rigid: self.is_rigid(),
            is_clipped: self.is_clipped(),
            is_proper: self.is_proper(),
            t0: self.t0(),
            t1: self.t1(),
            regulator_index: self.regulator_index()?,
        })
    }

    /// Splits off the clipped rigid part: the first output keeps every
    /// `m > 1` type at rank 1 with its `m` and `s`; the second collects the
    /// completely decomposable complement. Either side may be absent.
    pub fn main_decomposition(
        &self,
    ) -> Result<(Option<GroupDescriptor>, Option<GroupDescriptor>)> {
        let g = self.canonicalize()?;
        let mut clipped = Vec::new();
        let mut free = Vec::new();
        for c in &g.components {
            if c.is_torsion() {
                clipped.push(TypeComponent::new(c.p_inf.clone(), 1, c.m, c.s));
                if c.rank > 1 {
                    free.push(TypeComponent::new(c.p_inf.clone(), c.rank - 1, 1, None));
                }
            } else {
                free.push(TypeComponent::new(c.p_inf.clone(), c.rank, 1, None));
            }
        }
        let g1 = (!clipped.is_empty()).then(|| GroupDescriptor::new(clipped));
        let c = (!free.is_empty()).then(|| GroupDescriptor::new(free));
        debug_assert!(g1.as_ref().is_none_or(|d| d.validate().is_ok()));
        debug_assert!(c.as_ref().is_none_or(|d| d.validate().is_ok()));
        Ok((g1, c))
    }

    /// Whether the hull element lies in the group: some integer `z` must
    /// bring every torsion coordinate of `g - z·d` into the regulator while
    /// all remaining coordinates already lie in their subrings.
    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        let desc = self.canonicalize()?;
        g.check_shape(&desc)?;
        let mut pins: Vec<(u64, u64)> = Vec::new();
        for c in &desc.components {
            let k = c.rank;
            if c.is_torsion() {
                let x = g.get(&c.p_inf, 0);
                let scaled = x.mul_int(c.m);
                if !in_subring(&scaled, &c.p_inf) {
                    return Ok(false);
                }
                let r = reduce_rational_mod(&scaled, c.m)?;
                let s_inv = mod_inverse_u64(c.s_residue().expect("torsion component"), c.m)?;
                pins.push(((r as u128 * s_inv as u128 % c.m as u128) as u64, c.m));
                for i in 1..k {
                    if !in_subring(&g.get(&c.p_inf, i), &c.p_inf) {
                        return Ok(false);
                    }
                }
            } else {
                for i in 1..=k {
                    if !in_subring(&g.get(&c.p_inf, i), &c.p_inf) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(matches!(crt_solve(&pins)?, CrtOutcome::Solved { .. }))
    }

    /// The distinguished element `d = Σ (s/m)·e₀` of a canonicalized
    /// descriptor, as a hull element.
    pub fn distinguished_element(&self) -> Result<GroupElement> {
        let g = self.canonicalize()?;
        let mut coords = Vec::new();
        for c in &g.components {
            if let Some(s) = c.s_residue() {
                coords.push(((c.p_inf.clone(), 0), Rational::new(s, c.m)?));
            }
        }
        Ok(GroupElement::new(coords))
    }
}

/// Membership of a rational in the subring with the given infinite primes:
/// the reduced denominator must factor over them.
pub(crate) fn in_subring(x: &Rational, ty: &IdempotentType) -> bool {
    is_p_number(x.denom(), ty.primes())
}

/// Condition (m): every prime power dividing one entry divides another.
pub fn condition_m(ms: &[u64]) -> bool {
    for (i, &m) in ms.iter().enumerate() {
        if m <= 1 {
            continue;
        }
        for (p, e) in crate::arith::factorize(m) {
            let matched = ms.iter().enumerate().any(|(j, &other)| {
                j != i && {
                    let mut q = other;
                    let mut v = 0;
                    while q % p == 0 {
                        q /= p;
                        v += 1;
                    }
                    v >= e
                }
            });
            if !matched {
                return false;
            }
        }
    }
    true
}

/// An element of the divisible hull, as finitely many nonzero coordinates
/// over `(type, basis index)` keys. Indices run from 0 for torsion types and
/// from 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct GroupElement {
    coords: BTreeMap<(IdempotentType, u64), Rational>,
}

impl GroupElement {
    /// Collects coordinates, summing duplicates and dropping zeros.
    pub fn new(coords: impl IntoIterator<Item = ((IdempotentType, u64), Rational)>) -> Self {
        let mut map: BTreeMap<(IdempotentType, u64), Rational> = BTreeMap::new();
        for (key, value) in coords {
            let entry = map.entry(key).or_insert_with(Rational::zero);
            *entry = &*entry + &value;
        }
        map.retain(|_, v| !v.is_zero());
        GroupElement { coords: map }
    }

    pub fn zero() -> Self {
        GroupElement {
            coords: BTreeMap::new(),
        }
    }

    pub fn get(&self, ty: &IdempotentType, index: u64) -> Rational {
        self.coords
            .get(&(ty.clone(), index))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(IdempotentType, u64), &Rational)> {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        GroupElement::new(
            self.coords
                .iter()
                .chain(other.coords.iter())
                .map(|(k, v)| (k.clone(), v.clone())),
        )
    }

    pub fn scale(&self, factor: &Rational) -> GroupElement {
        GroupElement::new(
            self.coords
                .iter()
                .map(|(k, v)| (k.clone(), v * factor)),
        )
    }

    fn check_shape(&self, desc: &GroupDescriptor) -> Result<()> {
        for (ty, index) in self.coords.keys() {
            let c = desc.component(ty).ok_or_else(|| {
                Error::shape("element", format!("coordinate type {ty} is not a type of the group"))
            })?;
            let (lo, hi) = if c.is_torsion() {
                (0, c.rank - 1)
            } else {
                (1, c.rank)
            };
            if *index < lo || *index > hi {
                return Err(Error::shape(
                    "element",
                    format!(
                        "index {index} out of range [{lo}, {hi}] for type {ty}"
                    ),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CoordEntry {
    p_inf: IdempotentType,
    index: u64,
    value: Rational,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    coords: Vec<CoordEntry>,
}

impl From<GroupElement> for ElementRepr {
    fn from(e: GroupElement) -> Self {
        ElementRepr {
            coords: e
                .coords
                .into_iter()
                .map(|((p_inf, index), value)| CoordEntry {
                    p_inf,
                    index,
                    value,
                })
                .collect(),
        }
    }
}

impl TryFrom<ElementRepr> for GroupElement {
    type Error = Error;

    fn try_from(repr: ElementRepr) -> Result<Self> {
        let mut map = BTreeMap::new();
        for entry in repr.coords {
            let key = (entry.p_inf, entry.index);
            if map.contains_key(&key) {
                return Err(Error::shape(
                    "element",
                    format!("duplicate coordinate ({}, {})", key.0, key.1),
                ));
            }
            if !entry.value.is_zero() {
                map.insert(key, entry.value);
            }
        }
        Ok(GroupElement { coords: map })
    }
}
