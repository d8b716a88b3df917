use super::{BoolExpression, BoolTerm, BoolVar, Encoding, VarMap};
use crate::mvl::{MvLiteral, Value, VarId};

/// One indicator per value. A literal is encoded by negating the indicators
/// of the values it excludes, so every literal becomes a negative term.
#[derive(Debug, Clone, Copy, Default)]
pub struct OneHot;

pub(super) fn excluded<'a>(lit: &'a MvLiteral, map: &'a VarMap) -> impl Iterator<Item = BoolVar> + 'a {
    map.indicators(lit.var())
        .iter()
        .enumerate()
        .filter(|(i, _)| !lit.values().contains(*i as Value + 1))
        .map(|(_, &bv)| bv)
}

impl Encoding for OneHot {
    fn name(&self) -> &'static str {
        "one_hot"
    }

    fn first_indicator(&self) -> Value {
        1
    }

    fn value_pattern(&self, domain_size: u32, value: Value) -> Vec<bool> {
        (1..=domain_size).map(|j| j == value).collect()
    }

    fn encode_literal(&self, lit: &MvLiteral, map: &VarMap) -> BoolExpression {
        BoolTerm::negative(excluded(lit, map)).to_expression()
    }

    /// Exactly one indicator is set.
    fn variable_constraint(&self, var: VarId, map: &VarMap) -> BoolExpression {
        let block = map.indicators(var);
        let x = |bv: BoolVar| BoolExpression::Var(bv);
        let mut parts = vec![BoolExpression::Or(block.iter().copied().map(x).collect())];
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                parts.push(BoolExpression::And(vec![x(a), x(b)]).negate());
            }
        }
        BoolExpression::And(parts)
    }
}
