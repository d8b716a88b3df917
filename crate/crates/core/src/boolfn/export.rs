//! DOT and DIMACS renderings of a diagram.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Bdd, BddManager};

impl BddManager {
    /// Graphviz rendering; dashed edges are low (false) branches.
    pub fn to_dot(&self, f: Bdd, names: &[String]) -> String {
        let mut out = String::from("digraph bdd {\n  node [shape=circle];\n");
        let _ = writeln!(out, "  n0 [label=\"0\", shape=box];\n  n1 [label=\"1\", shape=box];");
        for g in self.reachable(f) {
            let (var, lo, hi) = self.node(g).expect("internal node");
            let label = names.get(var as usize).cloned().unwrap_or_else(|| format!("v{var}"));
            let _ = writeln!(out, "  n{} [label=\"{label}\"];", g.id());
            let _ = writeln!(out, "  n{} -> n{} [style=dashed];", g.id(), lo.id());
            let _ = writeln!(out, "  n{} -> n{};", g.id(), hi.id());
        }
        let _ = writeln!(out, "  root -> n{};\n  root [shape=point];\n}}", f.id());
        out
    }

    /// CNF whose projection onto variables `1..=n_vars` is exactly `f`.
    ///
    /// DIMACS variable `i + 1` is BDD variable `i`. Every internal node gets
    /// an auxiliary variable above `n_vars`, defined by the four clauses of
    /// `node <-> ite(var, high, low)` with terminal children folded in, and a
    /// unit clause asserts the root. A constant-false `f` yields the clauses
    /// `1` and `-1`.
    pub fn to_dimacs(&self, f: Bdd, n_vars: u32, names: &[String]) -> String {
        let nodes = self.reachable(f);
        let aux: HashMap<Bdd, i64> = nodes
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, n_vars as i64 + 1 + i as i64))
            .collect();
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        match f {
            Bdd::TRUE => {}
            Bdd::FALSE => {
                clauses.push(vec![1]);
                clauses.push(vec![-1]);
            }
            _ => clauses.push(vec![aux[&f]]),
        }
        for &g in &nodes {
            let (var, lo, hi) = self.node(g).expect("internal node");
            let n = aux[&g];
            let x = var as i64 + 1;
            // child as a literal, or a constant
            let child = |c: Bdd| -> Result<i64, bool> {
                match c {
                    Bdd::TRUE => Err(true),
                    Bdd::FALSE => Err(false),
                    _ => Ok(aux[&c]),
                }
            };
            // n ∧ x -> hi ; n ∧ ¬x -> lo ; ¬n ∧ x -> ¬hi ; ¬n ∧ ¬x -> ¬lo
            for (sign_n, sign_x, c) in [(-1, -1, hi), (-1, 1, lo)] {
                match child(c) {
                    Err(true) => {}
                    Err(false) => clauses.push(vec![sign_n * n, sign_x * x]),
                    Ok(l) => clauses.push(vec![sign_n * n, sign_x * x, l]),
                }
            }
            for (sign_x, c) in [(-1, hi), (1, lo)] {
                match child(c) {
                    Err(false) => {}
                    Err(true) => clauses.push(vec![n, sign_x * x]),
                    Ok(l) => clauses.push(vec![n, sign_x * x, -l]),
                }
            }
        }
        let total = n_vars.max(1) as i64 + nodes.len() as i64;
        let mut out = String::new();
        for (i, name) in names.iter().enumerate().take(n_vars as usize) {
            let _ = writeln!(out, "c {} {name}", i + 1);
        }
        let _ = writeln!(out, "p cnf {total} {}", clauses.len());
        for c in clauses {
            for l in c {
                let _ = write!(out, "{l} ");
            }
            out.push_str("0\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{BoolExpression, BoolVar};

    fn parse(dimacs: &str) -> (i64, Vec<Vec<i64>>) {
        let mut total = 0;
        let mut clauses = Vec::new();
        for line in dimacs.lines() {
            if line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf ") {
                total = rest.split_whitespace().next().unwrap().parse().unwrap();
                continue;
            }
            let lits: Vec<i64> = line.split_whitespace().map(|t| t.parse().unwrap()).collect();
            clauses.push(lits[..lits.len() - 1].to_vec());
        }
        (total, clauses)
    }

    /// Projection of the CNF onto the first `n` variables, by brute force.
    fn projected(dimacs: &str, n: u32) -> Vec<bool> {
        let (total, clauses) = parse(dimacs);
        let aux = total as u32 - n;
        (0..1u32 << n)
            .map(|bits| {
                (0..1u32 << aux).any(|abits| {
                    let val = |l: i64| {
                        let v = l.unsigned_abs() as u32 - 1;
                        let b = if v < n { bits >> v & 1 == 1 } else { abits >> (v - n) & 1 == 1 };
                        if l > 0 { b } else { !b }
                    };
                    clauses.iter().all(|c| c.iter().any(|&l| val(l)))
                })
            })
            .collect()
    }

    #[test]
    fn dimacs_projection_matches_function() {
        let mut m = BddManager::default();
        let x = |i| BoolExpression::Var(BoolVar(i));
        let f = m
            .compile(&BoolExpression::Or(vec![
                BoolExpression::And(vec![x(0), x(2).negate()]),
                BoolExpression::And(vec![x(1), x(2)]),
            ]))
            .unwrap();
        let cnf = m.to_dimacs(f, 3, &[]);
        let proj = projected(&cnf, 3);
        for bits in 0..8u32 {
            let a: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
            assert_eq!(proj[bits as usize], m.eval(f, &a));
        }
        assert!(projected(&m.to_dimacs(Bdd::FALSE, 2, &[]), 2).iter().all(|&b| !b));
        assert!(projected(&m.to_dimacs(Bdd::TRUE, 2, &[]), 2).iter().all(|&b| b));
    }

    #[test]
    fn dot_mentions_every_node() {
        let mut m = BddManager::default();
        let a = m.var(0).unwrap();
        let b = m.var(1).unwrap();
        let f = m.and(a, b).unwrap();
        let dot = m.to_dot(f, &["a".into(), "b".into()]);
        assert!(dot.contains("label=\"a\"") && dot.contains("label=\"b\""));
        assert!(dot.starts_with("digraph"));
    }
}
