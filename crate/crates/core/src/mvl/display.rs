use std::fmt;

use super::{MvExpression, MvLiteral, MvSpace, MvTerm};

pub struct TermDisplay<'a> {
    pub(super) term: &'a MvTerm,
    pub(super) space: &'a MvSpace,
}

pub struct ExprDisplay<'a> {
    pub(super) expr: &'a MvExpression,
    pub(super) space: &'a MvSpace,
}

fn write_literal(f: &mut fmt::Formatter<'_>, lit: &MvLiteral, space: &MvSpace) -> fmt::Result {
    let Some(var) = space.var(lit.var()) else {
        return write!(f, "v{}∈{:?}", lit.var(), lit.values());
    };
    let values = lit.values();
    if values.len() == 1 {
        let v = values.iter().next().unwrap();
        return write!(f, "{}={}", var.name(), var.label(v));
    }
    let missing = values.complement(var.domain_size());
    if missing.len() == 1 {
        let v = missing.iter().next().unwrap();
        return write!(f, "{}≠{}", var.name(), var.label(v));
    }
    write!(f, "{}∈{{", var.name())?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(var.label(v))?;
    }
    f.write_str("}")
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.term.is_empty() {
            return f.write_str("⊤");
        }
        for (i, lit) in self.term.literals().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write_literal(f, lit, self.space)?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |expr| ExprDisplay {
            expr,
            space: self.space,
        };
        match self.expr {
            MvExpression::Const(true) => f.write_str("⊤"),
            MvExpression::Const(false) => f.write_str("⊥"),
            MvExpression::Lit(lit) => write_literal(f, lit, self.space),
            MvExpression::Not(e) => write!(f, "¬({})", sub(e)),
            MvExpression::And(es) | MvExpression::Or(es) => {
                let (sep, empty) = if matches!(self.expr, MvExpression::And(_)) {
                    (" ∧ ", "⊤")
                } else {
                    (" ∨ ", "⊥")
                };
                if es.is_empty() {
                    return f.write_str(empty);
                }
                f.write_str("(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    write!(f, "{}", sub(e))?;
                }
                f.write_str(")")
            }
        }
    }
}
