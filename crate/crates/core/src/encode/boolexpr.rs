use std::collections::BTreeMap;
use std::fmt;

use super::VarMap;

/// Index of a Boolean indicator in a [`VarMap`]'s global order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolVar(pub u32);

impl BoolVar {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A conjunction of Boolean literals, at most one per variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolTerm {
    lits: BTreeMap<BoolVar, bool>,
}

impl BoolTerm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` (and leaves the term unchanged) when `var` already
    /// appears with the opposite polarity.
    pub fn insert(&mut self, var: BoolVar, positive: bool) -> bool {
        match self.lits.get(&var) {
            Some(&p) => p == positive,
            None => {
                self.lits.insert(var, positive);
                true
            }
        }
    }

    pub fn negative(vars: impl IntoIterator<Item = BoolVar>) -> Self {
        BoolTerm {
            lits: vars.into_iter().map(|v| (v, false)).collect(),
        }
    }

    pub fn from_literals(lits: impl IntoIterator<Item = (BoolVar, bool)>) -> Option<Self> {
        let mut t = BoolTerm::new();
        for (v, p) in lits {
            if !t.insert(v, p) {
                return None;
            }
        }
        Some(t)
    }

    pub fn get(&self, var: BoolVar) -> Option<bool> {
        self.lits.get(&var).copied()
    }

    pub fn literals(&self) -> impl Iterator<Item = (BoolVar, bool)> + '_ {
        self.lits.iter().map(|(&v, &p)| (v, p))
    }

    pub fn vars(&self) -> impl Iterator<Item = BoolVar> + '_ {
        self.lits.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.lits.values().all(|&p| !p)
    }

    pub fn without(&self, var: BoolVar) -> BoolTerm {
        let mut t = self.clone();
        t.lits.remove(&var);
        t
    }

    /// Literal-set inclusion: `self ⊆ other`.
    pub fn is_subterm_of(&self, other: &BoolTerm) -> bool {
        self.lits.iter().all(|(v, p)| other.lits.get(v) == Some(p))
    }

    /// `true` when `assignment` agrees with every literal.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.lits.iter().all(|(v, &p)| assignment[v.index()] == p)
    }

    pub fn to_expression(&self) -> BoolExpression {
        let lits: Vec<BoolExpression> = self
            .literals()
            .map(|(v, p)| {
                if p {
                    BoolExpression::Var(v)
                } else {
                    BoolExpression::Var(v).negate()
                }
            })
            .collect();
        match lits.len() {
            0 => BoolExpression::Const(true),
            1 => lits.into_iter().next().unwrap(),
            _ => BoolExpression::And(lits),
        }
    }

    pub fn display<'a>(&'a self, map: &'a VarMap) -> BoolTermDisplay<'a> {
        BoolTermDisplay { term: self, map }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpression {
    Const(bool),
    Var(BoolVar),
    Not(Box<BoolExpression>),
    And(Vec<BoolExpression>),
    Or(Vec<BoolExpression>),
    Implies(Box<BoolExpression>, Box<BoolExpression>),
}

impl BoolExpression {
    pub fn negate(self) -> Self {
        BoolExpression::Not(Box::new(self))
    }

    pub fn implies(premise: BoolExpression, conclusion: BoolExpression) -> Self {
        BoolExpression::Implies(Box::new(premise), Box::new(conclusion))
    }

    /// Conjunction; collapses to a constant or the single child where possible.
    pub fn all(children: impl IntoIterator<Item = BoolExpression>) -> Self {
        let mut es: Vec<_> = children.into_iter().collect();
        match es.len() {
            0 => BoolExpression::Const(true),
            1 => es.pop().unwrap(),
            _ => BoolExpression::And(es),
        }
    }

    /// Disjunction; collapses to a constant or the single child where possible.
    pub fn any(children: impl IntoIterator<Item = BoolExpression>) -> Self {
        let mut es: Vec<_> = children.into_iter().collect();
        match es.len() {
            0 => BoolExpression::Const(false),
            1 => es.pop().unwrap(),
            _ => BoolExpression::Or(es),
        }
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        match self {
            BoolExpression::Const(b) => *b,
            BoolExpression::Var(v) => assignment[v.index()],
            BoolExpression::Not(e) => !e.evaluate(assignment),
            BoolExpression::And(es) => es.iter().all(|e| e.evaluate(assignment)),
            BoolExpression::Or(es) => es.iter().any(|e| e.evaluate(assignment)),
            BoolExpression::Implies(a, b) => !a.evaluate(assignment) || b.evaluate(assignment),
        }
    }

    /// Highest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<BoolVar> {
        match self {
            BoolExpression::Const(_) => None,
            BoolExpression::Var(v) => Some(*v),
            BoolExpression::Not(e) => e.max_var(),
            BoolExpression::And(es) | BoolExpression::Or(es) => es.iter().filter_map(Self::max_var).max(),
            BoolExpression::Implies(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// If the expression is a plain conjunction of literals, returns it as a term.
    pub fn as_term(&self) -> Option<BoolTerm> {
        match self {
            BoolExpression::Const(true) => Some(BoolTerm::new()),
            BoolExpression::Var(v) => BoolTerm::from_literals([(*v, true)]),
            BoolExpression::Not(e) => match e.as_ref() {
                BoolExpression::Var(v) => BoolTerm::from_literals([(*v, false)]),
                _ => None,
            },
            BoolExpression::And(es) => {
                let mut t = BoolTerm::new();
                for e in es {
                    for (v, p) in e.as_term()?.literals() {
                        if !t.insert(v, p) {
                            return None;
                        }
                    }
                }
                Some(t)
            }
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, map: &'a VarMap) -> BoolExprDisplay<'a> {
        BoolExprDisplay { expr: self, map }
    }
}

pub struct BoolTermDisplay<'a> {
    term: &'a BoolTerm,
    map: &'a VarMap,
}

impl fmt::Display for BoolTermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.term.is_empty() {
            return f.write_str("⊤");
        }
        for (i, (v, p)) in self.term.literals().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if !p {
                f.write_str("¬")?;
            }
            f.write_str(self.map.name(v))?;
        }
        Ok(())
    }
}

pub struct BoolExprDisplay<'a> {
    expr: &'a BoolExpression,
    map: &'a VarMap,
}

impl fmt::Display for BoolExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.expr.as_term() {
            return t.display(self.map).fmt(f);
        }
        let sub = |expr| BoolExprDisplay { expr, map: self.map };
        match self.expr {
            BoolExpression::Const(b) => f.write_str(if *b { "⊤" } else { "⊥" }),
            BoolExpression::Var(v) => f.write_str(self.map.name(*v)),
            BoolExpression::Not(e) => write!(f, "¬({})", sub(e)),
            BoolExpression::Implies(a, b) => write!(f, "({} ⇒ {})", sub(a), sub(b)),
            BoolExpression::And(es) | BoolExpression::Or(es) => {
                let sep = if matches!(self.expr, BoolExpression::And(_)) { " ∧ " } else { " ∨ " };
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
