//! Top-level decision procedures: near-isomorphism, isomorphism, whether a
//! group is the multiplication group of another, and self-Mult-isomorphism.

use crate::arith::mod_inverse_u64;
use crate::error::{Error, Result};
use crate::group::{GroupDescriptor, TypeComponent};
use crate::mult::mult_of;
use crate::units::{coset_decompose, s_tuple, CosetWitness, UnitConfig};

/// Near-isomorphism: equal type sets with equal ranks and invariants.
pub fn near_iso(g: &GroupDescriptor, h: &GroupDescriptor) -> Result<bool> {
    let g = g.canonicalize()?;
    let h = h.canonicalize()?;
    let invariants = |d: &GroupDescriptor| -> Vec<(Vec<u64>, u64, u64)> {
        d.components
            .iter()
            .map(|c| (c.p_inf.primes().to_vec(), c.rank, c.m))
            .collect()
    };
    Ok(invariants(&g) == invariants(&h))
}

/// Isomorphism: near-isomorphic, and the numerator tuples agree modulo the
/// subgroup generated by the diagonal units and the localization units.
/// Returns a decomposition certificate when the groups are isomorphic.
pub fn iso(
    g: &GroupDescriptor,
    h: &GroupDescriptor,
    cfg: &UnitConfig,
) -> Result<Option<CosetWitness>> {
    if !near_iso(g, h)? {
        return Ok(None);
    }
    let g = g.canonicalize()?;
    let h = h.canonicalize()?;
    let s = s_tuple(&g)?;
    let t = s_tuple(&h)?;
    let ratio = s.mul(&t.inverse())?;
    coset_decompose(&g, &ratio, cfg)
}

/// Whether the group is isomorphic to its own multiplication group: rigid,
/// with the square of the numerator tuple in the unit coset subgroup.
pub fn self_mult_iso(g: &GroupDescriptor, cfg: &UnitConfig) -> Result<Option<CosetWitness>> {
    let g = g.canonicalize()?;
    if !g.is_rigid() {
        return Ok(None);
    }
    let s = s_tuple(&g)?;
    let squared = s.mul(&s)?;
    coset_decompose(&g, &squared, cfg)
}

fn exact_cube_root(rank: u64) -> Option<u64> {
    let mut k = (rank as f64).cbrt().round() as u64;
    k = k.max(1);
    (k.saturating_sub(1)..=k + 1).find(|candidate| candidate.checked_pow(3) == Some(rank))
}

/// Whether the descriptor can be the multiplication group of some group:
/// every rank must be a perfect cube.
pub fn realizable(m: &GroupDescriptor) -> Result<bool> {
    m.validate()?;
    Ok(m.components.iter().all(|c| exact_cube_root(c.rank).is_some()))
}

/// A group whose multiplication group is isomorphic to `m`: cube roots of
/// the ranks, same invariants, numerators inverted modulo their invariant.
pub fn realize(m: &GroupDescriptor) -> Result<GroupDescriptor> {
    let m = m.canonicalize()?;
    let mut components = Vec::with_capacity(m.components.len());
    for c in &m.components {
        let root = exact_cube_root(c.rank).ok_or(Error::NotRealizable { rank: c.rank })?;
        let s = match c.s_residue() {
            Some(s) => Some(mod_inverse_u64(s, c.m)?),
            None => None,
        };
        components.push(TypeComponent::new(c.p_inf.clone(), root, c.m, s));
    }
    let out = GroupDescriptor::new(components);
    debug_assert!(out.validate().is_ok());
    debug_assert!(matches!(
        iso(&mult_of(&out)?, &m, &UnitConfig::default()),
        Ok(Some(_))
    ));
    Ok(out)
}
