//! Exhaustive Boolean prime implicants and exact term decoding.

use crate::encode::{BoolTerm, BoolVar, VarMap};
use crate::error::{Error, Result};
use crate::mvl::{MvTerm, ValueSet};

pub const MAX_BRUTE_VARS: u32 = 12;

/// Every prime implicant of `f` over variables `0..n`, by enumerating all
/// `3^n` terms and removing implicants strictly contained in no other.
pub fn boolean_primes_bruteforce(n: u32, f: impl Fn(&[bool]) -> bool) -> Result<Vec<BoolTerm>> {
    if n > MAX_BRUTE_VARS {
        return Err(Error::Capacity {
            what: "Boolean variables for exhaustive primes",
            needed: n as u128,
            limit: MAX_BRUTE_VARS as u128,
        });
    }
    let table: Vec<bool> = (0..1u32 << n)
        .map(|bits| f(&(0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>()))
        .collect();
    // a term is (care mask, polarity bits within the mask)
    let mut implicants: Vec<(u32, u32)> = Vec::new();
    for care in 0..1u32 << n {
        let mut bits = care;
        loop {
            let pol = bits;
            let free = !care & ((1u32 << n) - 1);
            let mut sub = free;
            let implies = loop {
                if !table[(pol | sub) as usize] {
                    break false;
                }
                if sub == 0 {
                    break true;
                }
                sub = (sub - 1) & free;
            };
            if implies {
                implicants.push((care, pol));
            }
            if bits == 0 {
                break;
            }
            bits = (bits - 1) & care;
        }
    }
    let contains = |outer: (u32, u32), inner: (u32, u32)| inner.0 & outer.0 == inner.0 && (outer.1 & inner.0) == inner.1;
    let mut out: Vec<BoolTerm> = implicants
        .iter()
        .filter(|&&t| !implicants.iter().any(|&o| o != t && contains(t, o)))
        .map(|&(care, pol)| {
            BoolTerm::from_literals((0..n).filter(|i| care >> i & 1 == 1).map(|i| (BoolVar(i), pol >> i & 1 == 1)))
                .expect("one polarity per variable")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The multi-valued term whose encodings are exactly the valid completions
/// of `term`, if there is one.
///
/// Per variable, the completions of `term` on the variable's indicators must
/// all be valid value patterns, and together they must cover every pattern of
/// each value they mention.
pub fn decode_term_exact(term: &BoolTerm, map: &VarMap) -> Option<MvTerm> {
    let space = map.space();
    let mut sets = Vec::new();
    for var in space.vars() {
        let block = map.indicators(var.id());
        let width = block.len() as u32;
        let mut values = ValueSet::default();
        let mut consistent: Vec<u32> = Vec::new();
        let mut all_valid: Vec<(u32, u32)> = Vec::new();
        for bits in 0..1u32 << width {
            let pattern: Vec<bool> = (0..width).map(|i| bits >> i & 1 == 1).collect();
            let agrees = block
                .iter()
                .zip(&pattern)
                .all(|(bv, &p)| term.get(*bv).is_none_or(|q| q == p));
            let value = map.encoding().decode_pattern(&pattern);
            if agrees {
                values.insert(value?);
                consistent.push(bits);
            }
            if let Some(v) = value {
                all_valid.push((bits, v));
            }
        }
        let covered = all_valid
            .iter()
            .filter(|(_, v)| values.contains(*v))
            .all(|(bits, _)| consistent.contains(bits));
        if !covered || values.is_empty() {
            return None;
        }
        sets.push((var.id(), values));
    }
    MvTerm::from_sets(space, sets).ok()
}
