//! Vote aggregation over per-tree class functions.

use super::{Bdd, BddManager};
use crate::error::{Error, Result};

impl BddManager {
    /// True iff at least `k` of `fs` are true. Built by the recurrence
    /// `atleast_i(k) = ite(f_i, atleast_{i-1}(k-1), atleast_{i-1}(k))`.
    pub fn at_least(&mut self, fs: &[Bdd], k: usize) -> Result<Bdd> {
        if k == 0 {
            return Ok(Bdd::TRUE);
        }
        if k > fs.len() {
            return Ok(Bdd::FALSE);
        }
        // row[j] = "at least j of the inputs seen so far"
        let mut row = vec![Bdd::FALSE; k + 1];
        row[0] = Bdd::TRUE;
        for &f in fs {
            for j in (1..=k).rev() {
                row[j] = self.ite(f, row[j - 1], row[j])?;
            }
        }
        Ok(row[k])
    }

    /// True iff strictly more than half of `fs` are true.
    pub fn majority(&mut self, fs: &[Bdd]) -> Result<Bdd> {
        if fs.is_empty() {
            return Err(Error::invalid("majority", "no inputs"));
        }
        self.at_least(fs, fs.len() / 2 + 1)
    }

    /// Class `class` wins the vote. `votes[t][c]` is tree `t`'s class-`c`
    /// function; each tree's class functions must partition the input space.
    /// Ties go to the lowest class index, so `class` must beat every lower
    /// class strictly and every higher class at least weakly.
    pub fn plurality(&mut self, votes: &[Vec<Bdd>], class: usize) -> Result<Bdd> {
        let Some(first) = votes.first() else {
            return Err(Error::invalid("plurality", "no trees"));
        };
        let n_classes = first.len();
        if class >= n_classes || votes.iter().any(|v| v.len() != n_classes) {
            return Err(Error::invalid("plurality", "inconsistent class count"));
        }
        let mut result = Bdd::TRUE;
        for other in (0..n_classes).filter(|&d| d != class) {
            let margin = if other < class { 1 } else { 0 };
            let beats = self.lead_at_least(votes, class, other, margin)?;
            result = self.and(result, beats)?;
            if result == Bdd::FALSE {
                break;
            }
        }
        Ok(result)
    }

    /// `votes(a) - votes(b) >= margin`.
    fn lead_at_least(&mut self, votes: &[Vec<Bdd>], a: usize, b: usize, margin: i64) -> Result<Bdd> {
        let t = votes.len() as i64;
        // ge[k + t] = "difference so far >= k" for k in -t..=t+1
        let idx = |k: i64| (k + t) as usize;
        let mut ge: Vec<Bdd> = (-t..=t + 1).map(|k| if k <= 0 { Bdd::TRUE } else { Bdd::FALSE }).collect();
        let at = |ge: &Vec<Bdd>, k: i64| {
            if k < -t {
                Bdd::TRUE
            } else if k > t + 1 {
                Bdd::FALSE
            } else {
                ge[idx(k)]
            }
        };
        for tree in votes {
            let (va, vb) = (tree[a], tree[b]);
            let mut next = ge.clone();
            for k in -t..=t + 1 {
                let if_b = self.ite(vb, at(&ge, k + 1), at(&ge, k))?;
                next[idx(k)] = self.ite(va, at(&ge, k - 1), if_b)?;
            }
            ge = next;
        }
        Ok(at(&ge, margin))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_votes() {
        let mut m = BddManager::default();
        assert_eq!(m.majority(&[Bdd::TRUE, Bdd::TRUE, Bdd::FALSE]).unwrap(), Bdd::TRUE);
        assert_eq!(m.majority(&[Bdd::TRUE, Bdd::FALSE]).unwrap(), Bdd::FALSE);
        assert!(m.majority(&[]).is_err());
    }

    #[test]
    fn single_input_is_identity() {
        let mut m = BddManager::default();
        let f = m.var(3).unwrap();
        assert_eq!(m.majority(&[f]).unwrap(), f);
    }

    #[test]
    fn pointwise_vote_threshold() {
        let mut m = BddManager::default();
        let n = 5u32;
        let fs: Vec<Bdd> = (0..n).map(|i| m.var(i).unwrap()).collect();
        for size in 1..=5usize {
            let maj = m.majority(&fs[..size]).unwrap();
            for bits in 0..1u32 << n {
                let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                let ones = a[..size].iter().filter(|&&b| b).count();
                assert_eq!(m.eval(maj, &a), 2 * ones > size, "size {size} bits {bits:b}");
            }
        }
    }

    #[test]
    fn binary_plurality_is_majority() {
        let mut m = BddManager::default();
        let fs: Vec<Bdd> = (0..4).map(|i| m.var(i).unwrap()).collect();
        let votes: Vec<Vec<Bdd>> = fs.iter().map(|&f| vec![m.negate(f).unwrap(), f]).collect();
        let maj = m.majority(&fs).unwrap();
        assert_eq!(m.plurality(&votes, 1).unwrap(), maj);
        let nmaj = m.negate(maj).unwrap();
        assert_eq!(m.plurality(&votes, 0).unwrap(), nmaj);
    }

    #[test]
    fn three_class_ties_go_low() {
        let mut m = BddManager::default();
        // tree t votes class (2 bits): var 2t set -> class 1, var 2t+1 set -> class 2, else 0
        let mut votes = Vec::new();
        for t in 0..3u32 {
            let a = m.var(2 * t).unwrap();
            let b = m.var(2 * t + 1).unwrap();
            let na = m.negate(a).unwrap();
            let nb = m.negate(b).unwrap();
            let c1 = a;
            let c2 = m.and(na, b).unwrap();
            let c0 = m.and(na, nb).unwrap();
            votes.push(vec![c0, c1, c2]);
        }
        let winners: Vec<Bdd> = (0..3).map(|c| m.plurality(&votes, c).unwrap()).collect();
        for bits in 0..64u32 {
            let a: Vec<bool> = (0..6).map(|i| bits >> i & 1 == 1).collect();
            let mut count = [0usize; 3];
            for t in 0..3 {
                let c = if a[2 * t] { 1 } else if a[2 * t + 1] { 2 } else { 0 };
                count[c] += 1;
            }
            let best = (0..3).fold(0, |b, c| if count[c] > count[b] { c } else { b });
            for (c, &w) in winners.iter().enumerate() {
                assert_eq!(m.eval(w, &a), c == best);
            }
        }
    }
}
