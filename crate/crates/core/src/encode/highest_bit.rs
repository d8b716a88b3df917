use super::{BoolExpression, BoolTerm, BoolVar, Encoding, VarMap};
use crate::mvl::{MvLiteral, Value, VarId};

/// Indicators `x_2..x_n`; an assignment denotes the highest index set to 1,
/// or `x_1` when none is. Every assignment denotes some value.
#[derive(Debug, Clone, Copy, Default)]
pub struct HighestBit;

impl HighestBit {
    /// `¬x_2..¬x_n` for value 1, `x_i ¬x_{i+1}..¬x_n` otherwise.
    fn value_term(block: &[BoolVar], value: Value) -> BoolTerm {
        let mut t = BoolTerm::new();
        for (offset, &bv) in block.iter().enumerate() {
            let index = offset as Value + 2;
            if index == value {
                t.insert(bv, true);
            } else if index > value {
                t.insert(bv, false);
            }
        }
        t
    }
}

/// Repeatedly merges two terms over the same variables that differ in the
/// polarity of exactly one of them.
fn merge_adjacent(mut terms: Vec<BoolTerm>) -> Vec<BoolTerm> {
    'outer: loop {
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let (a, b) = (&terms[i], &terms[j]);
                if a.len() != b.len() || !a.vars().eq(b.vars()) {
                    continue;
                }
                let differing: Vec<BoolVar> = a
                    .literals()
                    .filter(|&(v, p)| b.get(v) != Some(p))
                    .map(|(v, _)| v)
                    .collect();
                if differing.len() != 1 {
                    continue;
                }
                terms[i] = a.without(differing[0]);
                terms.remove(j);
                continue 'outer;
            }
        }
        return terms;
    }
}

impl Encoding for HighestBit {
    fn name(&self) -> &'static str {
        "highest_bit"
    }

    fn first_indicator(&self) -> Value {
        2
    }

    fn value_pattern(&self, domain_size: u32, value: Value) -> Vec<bool> {
        (2..=domain_size).map(|j| j == value).collect()
    }

    fn decode_pattern(&self, pattern: &[bool]) -> Option<Value> {
        Some(
            pattern
                .iter()
                .rposition(|&b| b)
                .map_or(1, |i| i as Value + 2),
        )
    }

    fn encode_literal(&self, lit: &MvLiteral, map: &VarMap) -> BoolExpression {
        let block = map.indicators(lit.var());
        let terms = lit.values().iter().map(|v| Self::value_term(block, v)).collect();
        BoolExpression::any(merge_adjacent(terms).iter().map(BoolTerm::to_expression))
    }

    fn variable_constraint(&self, _var: VarId, _map: &VarMap) -> BoolExpression {
        BoolExpression::Const(true)
    }
}
