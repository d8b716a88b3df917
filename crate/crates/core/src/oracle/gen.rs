//! Seeded generators for randomized checks.
//!
//! Expression nodes are drawn as 40% literal, 25% conjunction, 25%
//! disjunction and 10% negation; nodes at the depth limit are literals.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use crate::encode::{BoolExpression, BoolTerm, BoolVar, VarMap};
use crate::mvl::{Instance, MvExpression, MvLiteral, MvSpace, MvTerm, MvVariable, Value, ValueSet};

pub const MAX_DEPTH: u32 = 4;

const NAMES: [&str; 3] = ["A", "B", "C"];

/// Generator for trial `trial` of a run seeded with `seed`; trials are
/// independent ChaCha streams of one key.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// One to three variables with domains of two to four values.
pub fn space(rng: &mut impl Rng) -> MvSpace {
    let n = rng.random_range(1..=3);
    let spec: Vec<(&str, u32)> = (0..n).map(|i| (NAMES[i], rng.random_range(2..=4))).collect();
    MvSpace::indexed(&spec).expect("generated space is valid")
}

/// A non-empty proper subset of the variable's values.
pub fn literal(rng: &mut impl Rng, var: &MvVariable) -> MvLiteral {
    let n = var.domain_size();
    let full = (1u32 << n) - 1;
    let mask = rng.random_range(1..full);
    let values: ValueSet = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b as Value + 1).collect();
    MvLiteral::new(var, values).expect("proper non-empty subset")
}

enum Shape {
    Leaf,
    And,
    Or,
    Not,
}

fn shape(rng: &mut impl Rng, depth: u32) -> Shape {
    if depth >= MAX_DEPTH {
        return Shape::Leaf;
    }
    match rng.random_range(0..100) {
        0..40 => Shape::Leaf,
        40..65 => Shape::And,
        65..90 => Shape::Or,
        _ => Shape::Not,
    }
}

pub fn expression(rng: &mut impl Rng, space: &MvSpace) -> MvExpression {
    expression_at(rng, space, 0)
}

fn expression_at(rng: &mut impl Rng, space: &MvSpace, depth: u32) -> MvExpression {
    match shape(rng, depth) {
        Shape::Leaf => {
            let var = &space.vars()[rng.random_range(0..space.len())];
            MvExpression::lit(literal(rng, var))
        }
        Shape::Not => MvExpression::Not(Box::new(expression_at(rng, space, depth + 1))),
        s => {
            let k = rng.random_range(2..=3);
            let children: Vec<_> = (0..k).map(|_| expression_at(rng, space, depth + 1)).collect();
            if matches!(s, Shape::And) {
                MvExpression::And(children)
            } else {
                MvExpression::Or(children)
            }
        }
    }
}

/// Boolean expression over variables `0..n_vars`, same node distribution.
pub fn bool_expression(rng: &mut impl Rng, n_vars: u32) -> BoolExpression {
    bool_expression_at(rng, n_vars, 0)
}

fn bool_expression_at(rng: &mut impl Rng, n_vars: u32, depth: u32) -> BoolExpression {
    match shape(rng, depth) {
        Shape::Leaf => {
            let v = BoolExpression::Var(BoolVar(rng.random_range(0..n_vars)));
            if rng.random_bool(0.5) {
                v.negate()
            } else {
                v
            }
        }
        Shape::Not => bool_expression_at(rng, n_vars, depth + 1).negate(),
        s => {
            let k = rng.random_range(2..=3);
            let children: Vec<_> = (0..k).map(|_| bool_expression_at(rng, n_vars, depth + 1)).collect();
            if matches!(s, Shape::And) {
                BoolExpression::And(children)
            } else {
                BoolExpression::Or(children)
            }
        }
    }
}

/// Each variable is mentioned with probability one half.
pub fn term(rng: &mut impl Rng, space: &MvSpace) -> MvTerm {
    let mut lits: Vec<MvLiteral> = Vec::new();
    for v in space.vars() {
        if rng.random_bool(0.5) {
            lits.push(literal(rng, v));
        }
    }
    MvTerm::from_literals(lits).expect("distinct variables")
}

pub fn instance(rng: &mut impl Rng, space: &MvSpace) -> Instance {
    let values = space
        .vars()
        .iter()
        .map(|v| rng.random_range(1..=v.domain_size()))
        .collect();
    Instance::new(space, values).expect("values in range")
}

/// Each indicator negated with probability 0.3; may violate the constraints.
pub fn negative_term(rng: &mut impl Rng, map: &VarMap) -> BoolTerm {
    BoolTerm::negative((0..map.len() as u32).map(BoolVar).filter(|_| rng.random_bool(0.3)))
}

/// A model document with up to five trees over up to three continuous
/// features, each feature using up to three distinct thresholds.
pub fn forest_document(rng: &mut impl Rng) -> Json {
    let n_features = rng.random_range(1..=3);
    let n_classes = rng.random_range(2..=3);
    let thresholds: Vec<Vec<f64>> = (0..n_features)
        .map(|_| {
            let k = rng.random_range(1..=3);
            let mut ts: Vec<i32> = Vec::new();
            while ts.len() < k {
                let t = rng.random_range(-10..=10);
                if !ts.contains(&t) {
                    ts.push(t);
                }
            }
            ts.into_iter().map(f64::from).collect()
        })
        .collect();
    let n_trees = rng.random_range(1..=5);
    let trees: Vec<Json> = (0..n_trees)
        .map(|_| tree_node(rng, &thresholds, n_classes, &mut Vec::new()))
        .collect();
    let features: Vec<Json> = (0..n_features)
        .map(|i| json!({"id": i, "name": NAMES[i].to_lowercase(), "kind": "continuous"}))
        .collect();
    json!({"n_classes": n_classes, "features": features, "trees": trees})
}

/// `path` holds the tests of the ancestors, which are never repeated.
fn tree_node(rng: &mut impl Rng, thresholds: &[Vec<f64>], n_classes: usize, path: &mut Vec<(usize, usize)>) -> Json {
    let depth = path.len();
    let leaf = json!({"leaf": rng.random_range(0..n_classes)});
    if depth >= 3 || (depth > 0 && rng.random_bool(0.3)) {
        return leaf;
    }
    let fresh: Vec<(usize, usize)> = thresholds
        .iter()
        .enumerate()
        .flat_map(|(f, ts)| (0..ts.len()).map(move |i| (f, i)))
        .filter(|test| !path.contains(test))
        .collect();
    if fresh.is_empty() {
        return leaf;
    }
    let (f, i) = fresh[rng.random_range(0..fresh.len())];
    path.push((f, i));
    let t = tree_node(rng, thresholds, n_classes, path);
    let e = tree_node(rng, thresholds, n_classes, path);
    path.pop();
    json!({"feature": f, "threshold": thresholds[f][i], "true": t, "false": e})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = space(&mut trial_rng(7, 3));
        let b = space(&mut trial_rng(7, 3));
        assert_eq!(a, b);
        let draws: Vec<u64> = (0..4).map(|t| trial_rng(7, t).random()).collect();
        assert!(draws.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = trial_rng(1, 0);
        for _ in 0..200 {
            let s = space(&mut rng);
            assert!((1..=3).contains(&s.len()));
            expression(&mut rng, &s).validate(&s).unwrap();
            let t = term(&mut rng, &s);
            assert!(t.len() <= s.len());
            let doc = forest_document(&mut rng);
            crate::ingest::parse_model(&doc.to_string()).unwrap();
        }
    }
}
