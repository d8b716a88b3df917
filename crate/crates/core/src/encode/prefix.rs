use super::{BoolExpression, BoolTerm, Encoding, VarMap};
use crate::mvl::{MvLiteral, Value, VarId};

/// Indicators `x_2..x_n`; value `i` sets the first `i - 1` of them.
#[derive(Debug, Clone, Copy, Default)]
pub struct Prefix;

impl Encoding for Prefix {
    fn name(&self) -> &'static str {
        "prefix"
    }

    fn first_indicator(&self) -> Value {
        2
    }

    fn value_pattern(&self, domain_size: u32, value: Value) -> Vec<bool> {
        (2..=domain_size).map(|j| j <= value).collect()
    }

    fn encode_literal(&self, lit: &MvLiteral, map: &VarMap) -> BoolExpression {
        let block = map.indicators(lit.var());
        let n = map.space().vars()[lit.var()].domain_size();
        BoolExpression::any(lit.values().iter().map(|v| {
            BoolTerm::from_literals(block.iter().copied().zip(self.value_pattern(n, v)))
                .expect("distinct indicators")
                .to_expression()
        }))
    }

    /// `x_i ⇒ x_{i-1}` for `i` in `3..=n`.
    fn variable_constraint(&self, var: VarId, map: &VarMap) -> BoolExpression {
        let block = map.indicators(var);
        BoolExpression::all(block.windows(2).map(|w| {
            BoolExpression::implies(BoolExpression::Var(w[1]), BoolExpression::Var(w[0]))
        }))
    }
}
