//! Reduced ordered binary decision diagrams.
//!
//! A [`BddManager`] owns a hash-consed node table; [`Bdd`] handles are only
//! meaningful for the manager that created them. Variable `i` is the `i`-th
//! indicator of the [`VarMap`](crate::encode::VarMap) in use, and smaller
//! indices sit closer to the root. Because nodes are unique, two handles are
//! equal iff they denote the same function.

mod export;
mod majority;

use std::collections::HashMap;

use crate::encode::{BoolExpression, BoolTerm};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;
pub const DEFAULT_CACHE_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd(u32);

impl Bdd {
    pub const FALSE: Bdd = Bdd(0);
    pub const TRUE: Bdd = Bdd(1);

    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: Bdd,
    hi: Bdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BddConfig {
    pub node_budget: usize,
    /// Entries kept in the operation cache before it is flushed.
    pub cache_limit: usize,
}

impl Default for BddConfig {
    fn default() -> Self {
        BddConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            cache_limit: DEFAULT_CACHE_LIMIT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BddManager {
    nodes: Vec<Node>,
    unique: HashMap<Node, Bdd>,
    apply_cache: HashMap<(Op, Bdd, Bdd), Bdd>,
    not_cache: HashMap<Bdd, Bdd>,
    config: BddConfig,
}

impl Default for BddManager {
    fn default() -> Self {
        Self::new(BddConfig::default())
    }
}

impl BddManager {
    pub fn new(config: BddConfig) -> Self {
        let terminal = |b| Node {
            var: TERMINAL_VAR,
            lo: Bdd(b),
            hi: Bdd(b),
        };
        BddManager {
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            not_cache: HashMap::new(),
            config,
        }
    }

    pub fn config(&self) -> BddConfig {
        self.config
    }

    /// Nodes allocated so far, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn mk(&mut self, var: u32, lo: Bdd, hi: Bdd) -> Result<Bdd> {
        if lo == hi {
            return Ok(lo);
        }
        let node = Node { var, lo, hi };
        if let Some(&b) = self.unique.get(&node) {
            return Ok(b);
        }
        if self.nodes.len() >= self.config.node_budget {
            return Err(Error::Capacity {
                what: "BDD nodes",
                needed: self.nodes.len() as u128 + 1,
                limit: self.config.node_budget as u128,
            });
        }
        let b = Bdd(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, b);
        Ok(b)
    }

    pub fn constant(&self, value: bool) -> Bdd {
        if value {
            Bdd::TRUE
        } else {
            Bdd::FALSE
        }
    }

    pub fn var(&mut self, var: u32) -> Result<Bdd> {
        self.mk(var, Bdd::FALSE, Bdd::TRUE)
    }

    pub fn literal(&mut self, var: u32, positive: bool) -> Result<Bdd> {
        if positive {
            self.mk(var, Bdd::FALSE, Bdd::TRUE)
        } else {
            self.mk(var, Bdd::TRUE, Bdd::FALSE)
        }
    }

    /// `(variable, low child, high child)` of an internal node.
    pub fn node(&self, f: Bdd) -> Option<(u32, Bdd, Bdd)> {
        if f.is_const() {
            None
        } else {
            let n = self.nodes[f.0 as usize];
            Some((n.var, n.lo, n.hi))
        }
    }

    fn top_var(&self, f: Bdd) -> u32 {
        self.nodes[f.0 as usize].var
    }

    fn cofactors(&self, f: Bdd, var: u32) -> (Bdd, Bdd) {
        let n = self.nodes[f.0 as usize];
        if n.var == var {
            (n.lo, n.hi)
        } else {
            (f, f)
        }
    }

    pub fn negate(&mut self, f: Bdd) -> Result<Bdd> {
        match f {
            Bdd::FALSE => return Ok(Bdd::TRUE),
            Bdd::TRUE => return Ok(Bdd::FALSE),
            _ => {}
        }
        if let Some(&r) = self.not_cache.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f.0 as usize];
        let lo = self.negate(n.lo)?;
        let hi = self.negate(n.hi)?;
        let r = self.mk(n.var, lo, hi)?;
        self.remember_not(f, r);
        Ok(r)
    }

    fn remember_not(&mut self, f: Bdd, r: Bdd) {
        if self.not_cache.len() >= self.config.cache_limit {
            self.not_cache.clear();
        }
        self.not_cache.insert(f, r);
    }

    fn apply(&mut self, op: Op, f: Bdd, g: Bdd) -> Result<Bdd> {
        match op {
            Op::And => {
                if f == Bdd::FALSE || g == Bdd::FALSE {
                    return Ok(Bdd::FALSE);
                }
                if f == Bdd::TRUE || f == g {
                    return Ok(g);
                }
                if g == Bdd::TRUE {
                    return Ok(f);
                }
            }
            Op::Or => {
                if f == Bdd::TRUE || g == Bdd::TRUE {
                    return Ok(Bdd::TRUE);
                }
                if f == Bdd::FALSE || f == g {
                    return Ok(g);
                }
                if g == Bdd::FALSE {
                    return Ok(f);
                }
            }
            Op::Xor => {
                if f == g {
                    return Ok(Bdd::FALSE);
                }
                if f == Bdd::FALSE {
                    return Ok(g);
                }
                if g == Bdd::FALSE {
                    return Ok(f);
                }
                if f == Bdd::TRUE {
                    return self.negate(g);
                }
                if g == Bdd::TRUE {
                    return self.negate(f);
                }
            }
        }
        let key = (op, f.min(g), f.max(g));
        if let Some(&r) = self.apply_cache.get(&key) {
            return Ok(r);
        }
        let var = self.top_var(f).min(self.top_var(g));
        let (f0, f1) = self.cofactors(f, var);
        let (g0, g1) = self.cofactors(g, var);
        let lo = self.apply(op, f0, g0)?;
        let hi = self.apply(op, f1, g1)?;
        let r = self.mk(var, lo, hi)?;
        if self.apply_cache.len() >= self.config.cache_limit {
            self.apply_cache.clear();
        }
        self.apply_cache.insert(key, r);
        Ok(r)
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        self.apply(Op::And, f, g)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        self.apply(Op::Or, f, g)
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        self.apply(Op::Xor, f, g)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let nf = self.negate(f)?;
        self.or(nf, g)
    }

    pub fn ite(&mut self, cond: Bdd, then: Bdd, otherwise: Bdd) -> Result<Bdd> {
        let a = self.and(cond, then)?;
        let nc = self.negate(cond)?;
        let b = self.and(nc, otherwise)?;
        self.or(a, b)
    }

    pub fn combine(&mut self, op: BinaryOp, f: Bdd, g: Bdd) -> Result<Bdd> {
        match op {
            BinaryOp::And => self.and(f, g),
            BinaryOp::Or => self.or(f, g),
            BinaryOp::Implies => self.implies(f, g),
        }
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Result<Bdd> {
        fs.into_iter().try_fold(Bdd::TRUE, |acc, f| self.and(acc, f))
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Result<Bdd> {
        fs.into_iter().try_fold(Bdd::FALSE, |acc, f| self.or(acc, f))
    }

    pub fn term(&mut self, term: &BoolTerm) -> Result<Bdd> {
        // build bottom-up so each step adds one node
        let lits: Vec<_> = term.literals().collect();
        let mut f = Bdd::TRUE;
        for &(v, p) in lits.iter().rev() {
            f = if p {
                self.mk(v.0, Bdd::FALSE, f)?
            } else {
                self.mk(v.0, f, Bdd::FALSE)?
            };
        }
        Ok(f)
    }

    /// Compiles an expression; variable `i` of the expression is BDD variable `i`.
    pub fn compile(&mut self, expr: &BoolExpression) -> Result<Bdd> {
        match expr {
            BoolExpression::Const(b) => Ok(self.constant(*b)),
            BoolExpression::Var(v) => self.var(v.0),
            BoolExpression::Not(e) => {
                let f = self.compile(e)?;
                self.negate(f)
            }
            BoolExpression::And(es) => {
                if let Some(t) = expr.as_term() {
                    return self.term(&t);
                }
                let mut acc = Bdd::TRUE;
                for e in es {
                    let f = self.compile(e)?;
                    acc = self.and(acc, f)?;
                    if acc == Bdd::FALSE {
                        break;
                    }
                }
                Ok(acc)
            }
            BoolExpression::Or(es) => {
                let mut acc = Bdd::FALSE;
                for e in es {
                    let f = self.compile(e)?;
                    acc = self.or(acc, f)?;
                    if acc == Bdd::TRUE {
                        break;
                    }
                }
                Ok(acc)
            }
            BoolExpression::Implies(a, b) => {
                let fa = self.compile(a)?;
                let fb = self.compile(b)?;
                self.implies(fa, fb)
            }
        }
    }

    /// Value of `f` under a total assignment.
    pub fn eval(&self, f: Bdd, assignment: &[bool]) -> bool {
        let mut cur = f;
        while !cur.is_const() {
            let n = self.nodes[cur.0 as usize];
            cur = if assignment[n.var as usize] { n.hi } else { n.lo };
        }
        cur == Bdd::TRUE
    }

    /// `term ⊨ f`: every completion of the term satisfies `f`.
    pub fn term_implies(&self, term: &BoolTerm, f: Bdd) -> bool {
        let mut memo = HashMap::new();
        self.term_implies_rec(term, f, &mut memo)
    }

    fn term_implies_rec(&self, term: &BoolTerm, f: Bdd, memo: &mut HashMap<Bdd, bool>) -> bool {
        if f.is_const() {
            return f == Bdd::TRUE;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f.0 as usize];
        let r = match term.get(crate::encode::BoolVar(n.var)) {
            Some(true) => self.term_implies_rec(term, n.hi, memo),
            Some(false) => self.term_implies_rec(term, n.lo, memo),
            None => self.term_implies_rec(term, n.lo, memo) && self.term_implies_rec(term, n.hi, memo),
        };
        memo.insert(f, r);
        r
    }

    /// Highest variable index appearing in `f`.
    pub fn max_var(&self, f: Bdd) -> Option<u32> {
        let mut best = None;
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if g.is_const() || !seen.insert(g) {
                continue;
            }
            let n = self.nodes[g.0 as usize];
            best = best.max(Some(n.var));
            stack.push(n.lo);
            stack.push(n.hi);
        }
        best
    }

    fn check_vars(&self, f: Bdd, n_vars: u32) -> Result<()> {
        if let Some(v) = self.max_var(f) {
            if v >= n_vars {
                return Err(Error::invalid(
                    "variable count",
                    format!("function mentions variable {v} but n_vars is {n_vars}"),
                ));
            }
        }
        Ok(())
    }

    /// Exact number of satisfying assignments over variables `0..n_vars`.
    pub fn count_models(&self, f: Bdd, n_vars: u32) -> Result<u128> {
        if n_vars > 127 {
            return Err(Error::Capacity {
                what: "variables for exact counting",
                needed: n_vars as u128,
                limit: 127,
            });
        }
        self.check_vars(f, n_vars)?;
        let mut memo = HashMap::new();
        let level = |g: Bdd| if g.is_const() { n_vars } else { self.top_var(g) };
        let c = self.count_rec(f, n_vars, &mut memo);
        Ok(c << level(f))
    }

    /// Models of the sub-function rooted at `f` over variables `level(f)..n_vars`.
    fn count_rec(&self, f: Bdd, n_vars: u32, memo: &mut HashMap<Bdd, u128>) -> u128 {
        match f {
            Bdd::FALSE => return 0,
            Bdd::TRUE => return 1,
            _ => {}
        }
        if let Some(&c) = memo.get(&f) {
            return c;
        }
        let n = self.nodes[f.0 as usize];
        let level = |g: Bdd| if g.is_const() { n_vars } else { self.top_var(g) };
        let lo = self.count_rec(n.lo, n_vars, memo) << (level(n.lo) - n.var - 1);
        let hi = self.count_rec(n.hi, n_vars, memo) << (level(n.hi) - n.var - 1);
        memo.insert(f, lo + hi);
        lo + hi
    }

    /// All models over `0..n_vars`, lexicographic with `false < true`.
    pub fn enumerate_models(&self, f: Bdd, n_vars: u32, cap: u64) -> Result<Vec<Vec<bool>>> {
        self.check_vars(f, n_vars)?;
        if n_vars <= 127 {
            let count = self.count_models(f, n_vars)?;
            if count > cap as u128 {
                return Err(Error::Capacity {
                    what: "models",
                    needed: count,
                    limit: cap as u128,
                });
            }
        }
        let mut out = Vec::new();
        let mut current = vec![false; n_vars as usize];
        self.enumerate_rec(f, 0, &mut current, &mut out, cap)?;
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        f: Bdd,
        var: u32,
        current: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
        cap: u64,
    ) -> Result<()> {
        if f == Bdd::FALSE {
            return Ok(());
        }
        if var as usize == current.len() {
            if out.len() as u64 >= cap {
                return Err(Error::Capacity {
                    what: "models",
                    needed: out.len() as u128 + 1,
                    limit: cap as u128,
                });
            }
            out.push(current.clone());
            return Ok(());
        }
        for value in [false, true] {
            current[var as usize] = value;
            let next = if !f.is_const() && self.top_var(f) == var {
                let n = self.nodes[f.0 as usize];
                if value {
                    n.hi
                } else {
                    n.lo
                }
            } else {
                f
            };
            self.enumerate_rec(next, var + 1, current, out, cap)?;
        }
        current[var as usize] = false;
        Ok(())
    }

    /// Nodes reachable from `f`, internal ones only, in topological order (root first).
    pub fn reachable(&self, f: Bdd) -> Vec<Bdd> {
        let mut seen = std::collections::HashSet::new();
        let mut order = Vec::new();
        let mut stack = vec![f];
        while let Some(g) = stack.pop() {
            if g.is_const() || !seen.insert(g) {
                continue;
            }
            order.push(g);
            let n = self.nodes[g.0 as usize];
            stack.push(n.hi);
            stack.push(n.lo);
        }
        // variable order is a topological order for an ordered diagram
        order.sort_by_key(|&g| (self.top_var(g), g.0));
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    And,
    Or,
    Implies,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{build_constraints, encode_expression, BoolVar, VarMap};
    use crate::mvl::{MvExpression, MvLiteral, MvSpace};

    fn x(i: u32) -> BoolExpression {
        BoolExpression::Var(BoolVar(i))
    }

    fn truth_table(m: &BddManager, f: Bdd, n: u32) -> Vec<bool> {
        (0..1u32 << n)
            .map(|bits| {
                let a: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect();
                m.eval(f, &a)
            })
            .collect()
    }

    #[test]
    fn constants_and_contradictions() {
        let mut m = BddManager::default();
        assert_eq!(m.compile(&BoolExpression::Const(true)).unwrap(), Bdd::TRUE);
        let contra = BoolExpression::And(vec![x(0), x(0).negate()]);
        assert_eq!(m.compile(&contra).unwrap(), Bdd::FALSE);
        let f = m.compile(&BoolExpression::Or(vec![x(0), x(2)])).unwrap();
        let nf = m.negate(f).unwrap();
        assert_eq!(m.and(f, nf).unwrap(), Bdd::FALSE);
        assert_eq!(m.negate(nf).unwrap(), f);
    }

    #[test]
    fn canonical_for_equivalent_expressions() {
        let mut m = BddManager::default();
        // de Morgan and distribution
        let a = m
            .compile(&BoolExpression::And(vec![x(0), BoolExpression::Or(vec![x(1), x(2)])]))
            .unwrap();
        let b = m
            .compile(&BoolExpression::Or(vec![
                BoolExpression::And(vec![x(2), x(0)]),
                BoolExpression::Not(Box::new(BoolExpression::Or(vec![x(0).negate(), x(1).negate()]))),
            ]))
            .unwrap();
        assert_eq!(a, b);
    }

    fn section_example() -> (MvSpace, VarMap, BoolExpression, BoolExpression) {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let delta = MvExpression::or([
            MvExpression::Lit(MvLiteral::eq(&space.vars()[0], 1).unwrap()),
            MvExpression::Lit(MvLiteral::eq(&space.vars()[1], 1).unwrap()),
        ]);
        let db = encode_expression(&delta, &map);
        let psi = build_constraints(&map).all();
        (space, map, db, psi)
    }

    #[test]
    fn five_models_under_exactly_one() {
        let (_, map, db, psi) = section_example();
        let mut m = BddManager::default();
        let fd = m.compile(&db).unwrap();
        let fp = m.compile(&psi).unwrap();
        let both = m.and(fd, fp).unwrap();
        assert_eq!(m.count_models(both, map.len() as u32).unwrap(), 5);
        assert_eq!(m.count_models(fp, map.len() as u32).unwrap(), 9);
        let models = m.enumerate_models(both, 6, 100).unwrap();
        let b = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<bool>>();
        // x1 x2 x3 y1 y2 y3, lexicographic
        assert_eq!(
            models,
            vec![b("001100"), b("010100"), b("100001"), b("100010"), b("100100")]
        );
    }

    #[test]
    fn implication_with_constraints_truth_table() {
        let (_, _, db, psi) = section_example();
        let mut m = BddManager::default();
        let fd = m.compile(&db).unwrap();
        let fp = m.compile(&psi).unwrap();
        let g = m.implies(fp, fd).unwrap();
        for bits in 0..64u32 {
            let a: Vec<bool> = (0..6).map(|i| bits >> i & 1 == 1).collect();
            let expected = !psi.evaluate(&a) || db.evaluate(&a);
            assert_eq!(m.eval(g, &a), expected);
        }
        // 64 - 9 assignments violate the constraints, plus the 5 models
        assert_eq!(m.count_models(g, 6).unwrap(), 55 + 5);
    }

    #[test]
    fn counts_complement_to_full_space() {
        let mut m = BddManager::default();
        let f = m
            .compile(&BoolExpression::Or(vec![
                BoolExpression::And(vec![x(1), x(3).negate()]),
                x(4),
            ]))
            .unwrap();
        let nf = m.negate(f).unwrap();
        let n = 6;
        assert_eq!(m.count_models(f, n).unwrap() + m.count_models(nf, n).unwrap(), 1 << n);
        assert_eq!(m.count_models(Bdd::FALSE, n).unwrap(), 0);
        assert_eq!(m.count_models(Bdd::TRUE, n).unwrap(), 64);
        let tt = truth_table(&m, f, n);
        assert_eq!(tt.iter().filter(|&&b| b).count() as u128, m.count_models(f, n).unwrap());
        assert!(m.count_models(f, 3).is_err());
    }

    #[test]
    fn node_budget_is_enforced() {
        let mut m = BddManager::new(BddConfig {
            node_budget: 4,
            cache_limit: 16,
        });
        let e = BoolExpression::And((0..10).map(x).collect());
        assert!(matches!(m.compile(&e), Err(Error::Capacity { .. })));
    }

    #[test]
    fn term_implication() {
        let mut m = BddManager::default();
        let f = m
            .compile(&BoolExpression::Or(vec![x(0), BoolExpression::And(vec![x(1), x(2)])]))
            .unwrap();
        let t = |lits: &[(u32, bool)]| BoolTerm::from_literals(lits.iter().map(|&(v, p)| (BoolVar(v), p))).unwrap();
        assert!(m.term_implies(&t(&[(0, true)]), f));
        assert!(m.term_implies(&t(&[(1, true), (2, true)]), f));
        assert!(!m.term_implies(&t(&[(1, true)]), f));
        assert!(!m.term_implies(&BoolTerm::new(), f));
        assert!(m.term_implies(&BoolTerm::new(), Bdd::TRUE));
    }
}
