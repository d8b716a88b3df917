//! Exhaustive implicant and prime-implicant computation for small spaces.
//!
//! These routines work straight from the definitions and are the reference
//! the BDD-based engine is checked against.

use super::{MvExpression, MvSpace, MvTerm, Value, ValueSet};
use crate::error::{Error, Result};

/// Default bound on the number of instances (and candidate terms) an
/// exhaustive routine may visit.
pub const DEFAULT_CAP: u64 = 1 << 20;

fn check_cap(what: &'static str, needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        return Err(Error::Capacity {
            what,
            needed,
            limit: cap as u128,
        });
    }
    Ok(())
}

/// Truth table of `expr` over all instances of `space`, in [`MvSpace::instances`] order.
pub fn truth_table(expr: &MvExpression, space: &MvSpace, cap: u64) -> Result<Vec<bool>> {
    check_cap("instances", space.instance_count(), cap)?;
    space.instances().map(|inst| expr.evaluate(&inst)).collect()
}

/// `term ⊨ expr`, decided by evaluating `expr` on every completion of `term`.
pub fn is_implicant(term: &MvTerm, expr: &MvExpression, space: &MvSpace, cap: u64) -> Result<bool> {
    check_cap("instances", space.instance_count(), cap)?;
    for inst in term.completions(space) {
        if !expr.evaluate(&inst)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All prime implicants of `expr`, canonically sorted.
///
/// Every term is enumerated (variables by id, value subsets by bitmask), the
/// implicants are kept, and an implicant is dropped when another implicant
/// strictly subsumes it.
pub fn prime_implicants_bruteforce(
    expr: &MvExpression,
    space: &MvSpace,
    cap: u64,
) -> Result<Vec<MvTerm>> {
    let sizes: Vec<u32> = space.vars().iter().map(|v| v.domain_size()).collect();
    if let Some(&n) = sizes.iter().find(|&&n| n > 20) {
        return Err(Error::Capacity {
            what: "domain size",
            needed: n as u128,
            limit: 20,
        });
    }
    let term_count = sizes
        .iter()
        .fold(1u128, |acc, &n| acc.saturating_mul((1u128 << n) - 1));
    check_cap("candidate terms", term_count, cap)?;
    let table = truth_table(expr, space, cap)?;

    // Mixed-radix weights matching `MvSpace::instances`, last variable fastest.
    let mut weights = vec![1usize; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        weights[i] = weights[i + 1] * sizes[i + 1] as usize;
    }

    let full: Vec<u32> = sizes.iter().map(|&n| (1u32 << n) - 1).collect();
    let mut implicants: Vec<Vec<u32>> = Vec::new();
    let mut masks = vec![1u32; sizes.len()];
    loop {
        if covers_only_true(&masks, &weights, &table) {
            implicants.push(masks.clone());
        }
        // advance, first variable most significant
        let mut pos = masks.len();
        let finished = loop {
            if pos == 0 {
                break true;
            }
            pos -= 1;
            if masks[pos] < full[pos] {
                masks[pos] += 1;
                break false;
            }
            masks[pos] = 1;
        };
        if finished {
            break;
        }
    }

    let subsumes = |outer: &[u32], inner: &[u32]| outer.iter().zip(inner).all(|(o, i)| i & !o == 0);
    let mut primes: Vec<MvTerm> = implicants
        .iter()
        .filter(|t| {
            !implicants
                .iter()
                .any(|other| other != *t && subsumes(other, t))
        })
        .map(|masks| {
            MvTerm::from_sets(
                space,
                masks.iter().enumerate().map(|(var, &m)| (var, mask_to_set(m))),
            )
        })
        .collect::<Result<_>>()?;
    primes.sort();
    Ok(primes)
}

fn mask_to_set(mask: u32) -> ValueSet {
    (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b as Value + 1)
        .collect()
}

fn covers_only_true(masks: &[u32], weights: &[usize], table: &[bool]) -> bool {
    let mut offsets = vec![0usize];
    for (var, &mask) in masks.iter().enumerate() {
        let mut next = Vec::with_capacity(offsets.len() * mask.count_ones() as usize);
        for &o in &offsets {
            for b in 0..32 {
                if mask >> b & 1 == 1 {
                    next.push(o + b * weights[var]);
                }
            }
        }
        offsets = next;
    }
    offsets.iter().all(|&o| table[o])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvl::{sample_tree_fixture, MvLiteral};

    fn set(vals: &[Value]) -> ValueSet {
        vals.iter().copied().collect()
    }

    #[test]
    fn implicants_of_sample_tree() {
        let (space, expr) = sample_tree_fixture();
        let x2 = MvTerm::from_sets(&space, [(0, set(&[2]))]).unwrap();
        let y2 = MvTerm::from_sets(&space, [(1, set(&[2]))]).unwrap();
        assert!(is_implicant(&x2, &expr, &space, DEFAULT_CAP).unwrap());
        assert!(!is_implicant(&y2, &expr, &space, DEFAULT_CAP).unwrap());
        assert!(is_implicant(&MvTerm::new(), &MvExpression::Const(true), &space, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn primes_of_sample_tree_and_its_complement() {
        let (space, expr) = sample_tree_fixture();
        let primes = prime_implicants_bruteforce(&expr, &space, DEFAULT_CAP).unwrap();
        let expected = vec![
            MvTerm::from_sets(&space, [(0, set(&[2]))]).unwrap(),
            MvTerm::from_sets(&space, [(0, set(&[1, 2])), (1, set(&[2]))]).unwrap(),
        ];
        assert_eq!(primes, expected);

        let neg = prime_implicants_bruteforce(&expr.clone().negate(), &space, DEFAULT_CAP).unwrap();
        let expected = vec![
            MvTerm::from_sets(&space, [(0, set(&[3]))]).unwrap(),
            MvTerm::from_sets(&space, [(0, set(&[1, 3])), (1, set(&[1]))]).unwrap(),
        ];
        assert_eq!(neg, expected);
    }

    #[test]
    fn primes_of_ternary_table() {
        // f = Y=y1 ∨ X=x3
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let (x, y) = (&space.vars()[0], &space.vars()[1]);
        let f = MvExpression::or([
            MvExpression::lit(MvLiteral::eq(y, 1).unwrap()),
            MvExpression::lit(MvLiteral::eq(x, 3).unwrap()),
        ]);
        let table = truth_table(&f, &space, DEFAULT_CAP).unwrap();
        assert_eq!(
            table,
            vec![true, false, false, true, false, false, true, true, true]
        );
        let primes = prime_implicants_bruteforce(&f, &space, DEFAULT_CAP).unwrap();
        assert_eq!(
            primes,
            vec![
                MvTerm::from_sets(&space, [(0, set(&[3]))]).unwrap(),
                MvTerm::from_sets(&space, [(1, set(&[1]))]).unwrap(),
            ]
        );
        let neg = prime_implicants_bruteforce(&f.negate(), &space, DEFAULT_CAP).unwrap();
        assert_eq!(
            neg,
            vec![MvTerm::from_sets(&space, [(0, set(&[1, 2])), (1, set(&[2, 3]))]).unwrap()]
        );
    }

    #[test]
    fn constants() {
        let (space, _) = sample_tree_fixture();
        assert_eq!(
            prime_implicants_bruteforce(&MvExpression::Const(true), &space, DEFAULT_CAP).unwrap(),
            vec![MvTerm::new()]
        );
        assert!(prime_implicants_bruteforce(&MvExpression::Const(false), &space, DEFAULT_CAP)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn capacity_is_enforced() {
        let (space, expr) = sample_tree_fixture();
        assert!(matches!(
            is_implicant(&MvTerm::new(), &expr, &space, 4),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            prime_implicants_bruteforce(&expr, &space, 10),
            Err(Error::Capacity { .. })
        ));
    }
}
