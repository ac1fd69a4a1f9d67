//! The multiplication group: its descriptor, membership of concrete
//! multiplications, the scalar ring acting as endomorphisms, and the decision
//! procedure for isomorphism of rings on rigid groups.
//!
//! A multiplication is stored per type as a square matrix whose entries are
//! coordinate vectors in the regulator piece of that type. Rank-one groups
//! collapse to a single rational per type, and serialize in a shorthand form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{
    crt_solve, is_p_fraction, mod_inverse_u64, reduce_rational_mod, CrtOutcome, Rational,
};
use crate::error::{Error, Result};
use crate::group::{in_subring, GroupDescriptor, GroupElement, IdempotentType, TypeComponent};
use crate::units::{unit_class_subgroup, UnitConfig};

/// Per-type block: `block[row][col]` is a coordinate vector of length equal
/// to the type's rank.
pub type Block = Vec<Vec<Vec<Rational>>>;

/// A candidate multiplication, shaped for a particular descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MultRepr", into = "MultRepr")]
pub struct MultElement {
    blocks: BTreeMap<IdempotentType, Block>,
}

impl MultElement {
    pub fn new(blocks: BTreeMap<IdempotentType, Block>) -> Self {
        MultElement { blocks }
    }

    /// Rank-one shorthand: one rational per type.
    pub fn rigid(entries: impl IntoIterator<Item = (IdempotentType, Rational)>) -> Self {
        MultElement {
            blocks: entries
                .into_iter()
                .map(|(ty, u)| (ty, vec![vec![vec![u]]]))
                .collect(),
        }
    }

    pub fn blocks(&self) -> &BTreeMap<IdempotentType, Block> {
        &self.blocks
    }

    pub fn block(&self, ty: &IdempotentType) -> Option<&Block> {
        self.blocks.get(ty)
    }

    /// The single entry of a 1×1 block, when this element is rank-one shaped.
    pub fn rigid_entry(&self, ty: &IdempotentType) -> Option<&Rational> {
        match self.blocks.get(ty) {
            Some(block) if block.len() == 1 && block[0].len() == 1 && block[0][0].len() == 1 => {
                Some(&block[0][0][0])
            }
            _ => None,
        }
    }

    pub fn is_rigid_shaped(&self) -> bool {
        self.blocks
            .values()
            .all(|b| b.len() == 1 && b[0].len() == 1 && b[0][0].len() == 1)
    }

    /// The zero multiplication shaped for `g`.
    pub fn zero_for(g: &GroupDescriptor) -> Self {
        let blocks = g
            .components
            .iter()
            .map(|c| {
                let k = c.rank as usize;
                let entry = vec![Rational::zero(); k];
                (c.p_inf.clone(), vec![vec![entry; k]; k])
            })
            .collect();
        MultElement { blocks }
    }

    fn zip_entries(
        &self,
        other: &MultElement,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<MultElement> {
        if self.blocks.keys().ne(other.blocks.keys()) {
            return Err(Error::shape("multiplication", "mismatched type sets"));
        }
        let mut blocks = BTreeMap::new();
        for (ty, a) in &self.blocks {
            let b = &other.blocks[ty];
            if a.len() != b.len() {
                return Err(Error::shape("multiplication", "mismatched block shapes"));
            }
            let mut block = Vec::with_capacity(a.len());
            for (ra, rb) in a.iter().zip(b) {
                if ra.len() != rb.len() {
                    return Err(Error::shape("multiplication", "mismatched block shapes"));
                }
                let mut row = Vec::with_capacity(ra.len());
                for (ea, eb) in ra.iter().zip(rb) {
                    if ea.len() != eb.len() {
                        return Err(Error::shape("multiplication", "mismatched block shapes"));
                    }
                    row.push(ea.iter().zip(eb).map(|(x, y)| f(x, y)).collect());
                }
                block.push(row);
            }
            blocks.insert(ty.clone(), block);
        }
        Ok(MultElement { blocks })
    }

    pub fn add(&self, other: &MultElement) -> Result<MultElement> {
        self.zip_entries(other, |a, b| a + b)
    }

    pub fn neg(&self) -> MultElement {
        MultElement {
            blocks: self
                .blocks
                .iter()
                .map(|(ty, block)| {
                    let neg = block
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|entry| entry.iter().map(|x| -x).collect())
                                .collect()
                        })
                        .collect();
                    (ty.clone(), neg)
                })
                .collect(),
        }
    }

    fn check_shape(&self, g: &GroupDescriptor) -> Result<()> {
        for c in &g.components {
            let block = self.blocks.get(&c.p_inf).ok_or_else(|| {
                Error::shape("multiplication", format!("missing block for type {}", c.p_inf))
            })?;
            let k = c.rank as usize;
            if block.len() != k
                || block.iter().any(|row| row.len() != k)
                || block
                    .iter()
                    .any(|row| row.iter().any(|entry| entry.len() != k))
            {
                return Err(Error::shape(
                    "multiplication",
                    format!("block for type {} must be {k}x{k} with length-{k} entries", c.p_inf),
                ));
            }
        }
        for ty in self.blocks.keys() {
            if g.component(ty).is_none() {
                return Err(Error::shape(
                    "multiplication",
                    format!("block type {ty} is not a type of the group"),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MultRepr {
    Rigid { u: BTreeMap<String, Rational> },
    General { blocks: BTreeMap<String, Block> },
}

impl From<MultElement> for MultRepr {
    fn from(e: MultElement) -> Self {
        if e.is_rigid_shaped() {
            MultRepr::Rigid {
                u: e.blocks
                    .into_iter()
                    .map(|(ty, mut block)| {
                        (ty.key(), block.remove(0).remove(0).remove(0))
                    })
                    .collect(),
            }
        } else {
            MultRepr::General {
                blocks: e.blocks.into_iter().map(|(ty, b)| (ty.key(), b)).collect(),
            }
        }
    }
}

impl TryFrom<MultRepr> for MultElement {
    type Error = Error;

    fn try_from(repr: MultRepr) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        match repr {
            MultRepr::Rigid { u } => {
                for (key, value) in u {
                    let ty = IdempotentType::from_key(&key)?;
                    blocks.insert(ty, vec![vec![vec![value]]]);
                }
            }
            MultRepr::General { blocks: raw } => {
                for (key, block) in raw {
                    let ty = IdempotentType::from_key(&key)?;
                    blocks.insert(ty, block);
                }
            }
        }
        Ok(MultElement { blocks })
    }
}

/// Descriptor of the multiplication group: same types and invariants, ranks
/// cubed, numerators inverted modulo their invariant.
pub fn mult_of(g: &GroupDescriptor) -> Result<GroupDescriptor> {
    let g = g.canonicalize()?;
    let mut components = Vec::with_capacity(g.components.len());
    for c in &g.components {
        let cubed = c
            .rank
            .checked_pow(3)
            .ok_or(Error::Overflow("cubed rank"))?;
        let s = match c.s_residue() {
            Some(s) => Some(mod_inverse_u64(s, c.m)?),
            None => None,
        };
        components.push(TypeComponent::new(c.p_inf.clone(), cubed, c.m, s));
    }
    let out = GroupDescriptor::new(components);
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// A successful membership certificate: the scalar `k` modulo the regulator
/// index with `U - k·X` in the doubly-scaled regulator block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberWitness {
    pub k: u64,
    pub modulus: u64,
}

/// Membership of `U` in the concrete multiplication group `⟨X, M⁽²⁾⟩`.
/// Returns the witness `k` on success, `None` otherwise.
pub fn mult_contains(g: &GroupDescriptor, u: &MultElement) -> Result<Option<MemberWitness>> {
    let g = g.canonicalize()?;
    u.check_shape(&g)?;
    let mut pins: Vec<(u64, u64)> = Vec::new();
    for c in &g.components {
        let block = &u.blocks[&c.p_inf];
        let k = c.rank as usize;
        let ty = &c.p_inf;
        if c.is_torsion() {
            let m = c.m;
            for (i, row) in block.iter().enumerate() {
                for (j, entry) in row.iter().enumerate() {
                    for (coord, value) in entry.iter().enumerate() {
                        let scaled_ok = if i == 0 && j == 0 && coord == 0 {
                            // pinned below
                            continue;
                        } else if i == 0 && j == 0 {
                            // remaining coordinates of the corner entry
                            value.div_int(m)?.div_int(m).map(|q| in_subring(&q, ty))?
                        } else if i == 0 || j == 0 {
                            in_subring(&value.div_int(m)?, ty)
                        } else {
                            in_subring(value, ty)
                        };
                        if !scaled_ok {
                            return Ok(None);
                        }
                    }
                }
            }
            let corner = &block[0][0][0];
            let w = corner.div_int(m)?;
            if !in_subring(&w, ty) {
                return Ok(None);
            }
            let rho = reduce_rational_mod(&w, m)?;
            let s = c.s_residue().expect("torsion component");
            pins.push(((rho as u128 * s as u128 % m as u128) as u64, m));
            let _ = k;
        } else {
            for row in block {
                for entry in row {
                    for value in entry {
                        if !in_subring(value, ty) {
                            return Ok(None);
                        }
                    }
                }
            }
        }
    }
    let n = g.regulator_index()?;
    match crt_solve(&pins)? {
        CrtOutcome::Solved { residue, modulus } => {
            debug_assert_eq!(modulus, n);
            Ok(Some(MemberWitness {
                k: residue,
                modulus: n,
            }))
        }
        CrtOutcome::Unsolvable => Ok(None),
    }
}

/// A scalar acting diagonally: one rational per type of the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub struct ScalarTuple {
    entries: BTreeMap<IdempotentType, Rational>,
}

impl ScalarTuple {
    pub fn new(entries: impl IntoIterator<Item = (IdempotentType, Rational)>) -> Self {
        ScalarTuple {
            entries: entries.into_iter().collect(),
        }
    }

    pub fn ones_for(g: &GroupDescriptor) -> Self {
        ScalarTuple {
            entries: g
                .components
                .iter()
                .map(|c| (c.p_inf.clone(), Rational::one()))
                .collect(),
        }
    }

    pub fn get(&self, ty: &IdempotentType) -> Option<&Rational> {
        self.entries.get(ty)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IdempotentType, &Rational)> {
        self.entries.iter()
    }

    pub fn product(&self, other: &ScalarTuple) -> Result<ScalarTuple> {
        if self.entries.keys().ne(other.entries.keys()) {
            return Err(Error::shape("scalar tuple", "mismatched type sets"));
        }
        Ok(ScalarTuple {
            entries: self
                .entries
                .iter()
                .map(|(ty, a)| (ty.clone(), a * &other.entries[ty]))
                .collect(),
        })
    }

    fn check_shape(&self, g: &GroupDescriptor) -> Result<()> {
        let mut expected: Vec<&IdempotentType> =
            g.components.iter().map(|c| &c.p_inf).collect();
        expected.sort();
        let got: Vec<&IdempotentType> = self.entries.keys().collect();
        if expected != got {
            return Err(Error::shape(
                "scalar tuple",
                "one entry per type of the group is required",
            ));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct ScalarRepr {
    entries: BTreeMap<String, Rational>,
}

impl From<ScalarTuple> for ScalarRepr {
    fn from(t: ScalarTuple) -> Self {
        ScalarRepr {
            entries: t.entries.into_iter().map(|(ty, v)| (ty.key(), v)).collect(),
        }
    }
}

impl TryFrom<ScalarRepr> for ScalarTuple {
    type Error = Error;

    fn try_from(repr: ScalarRepr) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (key, value) in repr.entries {
            entries.insert(IdempotentType::from_key(&key)?, value);
        }
        Ok(ScalarTuple { entries })
    }
}

/// Witness that a scalar lies in the endomorphism ring: the shared integer
/// part modulo the regulator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KgWitness {
    pub gamma: u64,
    pub modulus: u64,
}

/// Membership of `c` in the scalar ring `Z·1 + ∏ m·R`: every coordinate in
/// its subring, and one integer congruent to every torsion coordinate.
pub fn in_kg(g: &GroupDescriptor, c: &ScalarTuple) -> Result<Option<KgWitness>> {
    let g = g.canonicalize()?;
    c.check_shape(&g)?;
    let mut pins = Vec::new();
    for comp in &g.components {
        let value = &c.entries[&comp.p_inf];
        if !in_subring(value, &comp.p_inf) {
            return Ok(None);
        }
        if comp.is_torsion() {
            pins.push((reduce_rational_mod(value, comp.m)?, comp.m));
        }
    }
    let n = g.regulator_index()?;
    match crt_solve(&pins)? {
        CrtOutcome::Solved { residue, modulus } => {
            debug_assert_eq!(modulus, n);
            Ok(Some(KgWitness {
                gamma: residue,
                modulus: n,
            }))
        }
        CrtOutcome::Unsolvable => Ok(None),
    }
}

/// Membership in the unit group of the scalar ring: in the ring, and every
/// coordinate a fraction over the type's infinite primes.
pub fn in_kg_star(g: &GroupDescriptor, c: &ScalarTuple) -> Result<bool> {
    let canon = g.canonicalize()?;
    if in_kg(&canon, c)?.is_none() {
        return Ok(false);
    }
    Ok(canon
        .components
        .iter()
        .all(|comp| is_p_fraction(&c.entries[&comp.p_inf], comp.p_inf.primes())))
}

/// The endomorphism given by a ring scalar, applied coordinate-wise.
pub fn scalar_action(
    g: &GroupDescriptor,
    c: &ScalarTuple,
    x: &GroupElement,
) -> Result<GroupElement> {
    let canon = g.canonicalize()?;
    if in_kg(&canon, c)?.is_none() {
        return Err(Error::NotAnEndomorphism(
            "scalar tuple is outside the ring acting on the group".into(),
        ));
    }
    let mut coords = Vec::new();
    for ((ty, index), value) in x.iter() {
        let factor = c
            .entries
            .get(ty)
            .ok_or_else(|| Error::shape("element", format!("coordinate type {ty} has no scalar")))?;
        coords.push(((ty.clone(), *index), value * factor));
    }
    Ok(GroupElement::new(coords))
}

/// Certificate for ring isomorphism: the unit scalar and its shared integer
/// part modulo the regulator index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingIsoWitness {
    pub gamma: u64,
    pub modulus: u64,
    pub c: ScalarTuple,
}

/// Whether two member multiplications define isomorphic rings on a rigid
/// group: decides the existence of a unit scalar `c` with `U = c·V`.
///
/// Zero coordinates leave the scalar free there; the shared integer part is
/// then pinned by the nonzero coordinates and must reduce, at each doubly
/// zero torsion type, into the subgroup of residues realized by units of
/// that type's subring (signs always admitted).
pub fn ring_iso(
    g: &GroupDescriptor,
    u: &MultElement,
    v: &MultElement,
    cfg: &UnitConfig,
) -> Result<Option<RingIsoWitness>> {
    let g = g.canonicalize()?;
    if !g.is_rigid() {
        return Err(Error::Precondition(
            "ring isomorphism is decided for rigid groups only".into(),
        ));
    }
    if mult_contains(&g, u)?.is_none() || mult_contains(&g, v)?.is_none() {
        return Err(Error::Precondition(
            "both multiplications must be members of the multiplication group".into(),
        ));
    }
    let mut pinned: Vec<(u64, u64)> = Vec::new();
    let mut forced: BTreeMap<IdempotentType, Rational> = BTreeMap::new();
    // (type, modulus, residue -> unit witness) for doubly zero torsion types
    let mut free: Vec<(IdempotentType, u64, BTreeMap<u64, BigInt>)> = Vec::new();
    for comp in &g.components {
        let ty = &comp.p_inf;
        let u_val = u.rigid_entry(ty).expect("rigid shape checked");
        let v_val = v.rigid_entry(ty).expect("rigid shape checked");
        match (u_val.is_zero(), v_val.is_zero()) {
            (true, false) | (false, true) => return Ok(None),
            (false, false) => {
                let ratio = u_val.checked_div(v_val)?;
                if !is_p_fraction(&ratio, ty.primes()) {
                    return Ok(None);
                }
                if comp.is_torsion() {
                    pinned.push((reduce_rational_mod(&ratio, comp.m)?, comp.m));
                }
                forced.insert(ty.clone(), ratio);
            }
            (true, true) => {
                if comp.is_torsion() {
                    let witnesses =
                        unit_class_subgroup(comp.m, ty.primes(), true, cfg.cap)?;
                    free.push((ty.clone(), comp.m, witnesses));
                } else {
                    forced.insert(ty.clone(), Rational::one());
                }
            }
        }
    }
    let base = match crt_solve(&pinned)? {
        CrtOutcome::Solved { residue, modulus } => (residue, modulus),
        CrtOutcome::Unsolvable => return Ok(None),
    };
    let n = g.regulator_index()?;
    if n as u128 > cfg.cap as u128 {
        return Err(Error::CapExceeded {
            cap: cfg.cap,
            reached: cfg.cap,
        });
    }
    let (base_r, base_m) = base;
    let mut gamma = base_r % n.max(1);
    loop {
        let admissible = free
            .iter()
            .all(|(_, m, witnesses)| witnesses.contains_key(&(gamma % m)));
        if admissible {
            let mut entries = forced.clone();
            for (ty, m, witnesses) in &free {
                let w = witnesses[&(gamma % m)].clone();
                entries.insert(ty.clone(), Rational::from_integer(w));
            }
            let c = ScalarTuple { entries };
            debug_assert!(in_kg_star(&g, &c).unwrap_or(false));
            return Ok(Some(RingIsoWitness {
                gamma: gamma % n.max(1),
                modulus: n,
                c,
            }));
        }
        gamma += base_m;
        if gamma >= n {
            return Ok(None);
        }
    }
}
