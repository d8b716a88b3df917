//! Multi-valued propositional logic.
//!
//! A variable ranges over a finite domain of `n >= 2` values, indexed `1..=n`.
//! A literal restricts one variable to a non-empty, proper subset of its
//! domain, a term is a conjunction of literals over distinct variables, and an
//! instance is a simple term mentioning every variable.

mod bruteforce;
mod display;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub use bruteforce::{is_implicant, prime_implicants_bruteforce, truth_table, DEFAULT_CAP};
pub use display::{ExprDisplay, TermDisplay};

pub type VarId = usize;
/// One-based index into a variable's domain.
pub type Value = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MvVariable {
    id: VarId,
    name: String,
    labels: Vec<String>,
}

impl MvVariable {
    pub fn new(id: VarId, name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        if labels.len() < 2 {
            return Err(Error::invalid(
                "variable",
                format!("`{name}` needs at least two values, got {}", labels.len()),
            ));
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::invalid(
                "variable",
                format!("`{name}` has duplicate value labels"),
            ));
        }
        Ok(MvVariable { id, name, labels })
    }

    /// Variable with labels `<lowercase name><index>`, e.g. `x1, x2, x3`.
    pub fn indexed(id: VarId, name: &str, domain_size: u32) -> Result<Self> {
        let stem = name.to_lowercase();
        let labels = (1..=domain_size).map(|i| format!("{stem}{i}")).collect();
        Self::new(id, name, labels)
    }

    pub fn id(&self) -> VarId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain_size(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + Clone {
        1..=self.domain_size()
    }

    pub fn label(&self, value: Value) -> &str {
        &self.labels[value as usize - 1]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn value_of_label(&self, label: &str) -> Option<Value> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as Value + 1)
    }
}

/// An ordered collection of variables whose ids are their positions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MvSpace {
    vars: Vec<MvVariable>,
}

impl MvSpace {
    pub fn new(vars: Vec<MvVariable>) -> Result<Self> {
        for (pos, v) in vars.iter().enumerate() {
            if v.id != pos {
                return Err(Error::invalid(
                    "space",
                    format!("variable `{}` has id {} at position {pos}", v.name, v.id),
                ));
            }
        }
        Ok(MvSpace { vars })
    }

    /// Space of variables named by `names` with the given domain sizes.
    pub fn indexed(spec: &[(&str, u32)]) -> Result<Self> {
        let vars = spec
            .iter()
            .enumerate()
            .map(|(id, (name, n))| MvVariable::indexed(id, name, *n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(vars)
    }

    pub fn vars(&self) -> &[MvVariable] {
        &self.vars
    }

    pub fn var(&self, id: VarId) -> Option<&MvVariable> {
        self.vars.get(id)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_by_name(&self, name: &str) -> Option<&MvVariable> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Number of instances, saturating at `u128::MAX`.
    pub fn instance_count(&self) -> u128 {
        self.vars
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.domain_size() as u128))
    }

    /// All instances, first variable most significant.
    pub fn instances(&self) -> impl Iterator<Item = Instance> + '_ {
        MixedRadix::new(self.vars.iter().map(|v| v.values().collect()).collect())
            .map(|values| Instance { values })
    }

    fn require(&self, id: VarId) -> Result<&MvVariable> {
        self.var(id)
            .ok_or_else(|| Error::invalid("variable", format!("id {id} is not in the space")))
    }
}

/// Iterates the cartesian product of per-position choices.
pub(crate) struct MixedRadix {
    choices: Vec<Vec<Value>>,
    cursor: Vec<usize>,
    done: bool,
}

impl MixedRadix {
    pub(crate) fn new(choices: Vec<Vec<Value>>) -> Self {
        let done = choices.iter().any(Vec::is_empty);
        MixedRadix {
            cursor: vec![0; choices.len()],
            choices,
            done,
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<Value>;

    fn next(&mut self) -> Option<Vec<Value>> {
        if self.done {
            return None;
        }
        let item = self
            .cursor
            .iter()
            .zip(&self.choices)
            .map(|(&c, ch)| ch[c])
            .collect();
        let mut pos = self.cursor.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.choices[pos].len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(item)
    }
}

/// A sorted set of one-based value indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ValueSet(BTreeSet<Value>);

impl ValueSet {
    pub fn full(domain_size: u32) -> Self {
        ValueSet((1..=domain_size).collect())
    }

    pub fn single(value: Value) -> Self {
        ValueSet(BTreeSet::from([value]))
    }

    pub fn contains(&self, value: Value) -> bool {
        self.0.contains(&value)
    }

    pub fn is_subset(&self, other: &ValueSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Value> + '_ {
        self.0.iter().copied()
    }

    pub fn intersection(&self, other: &ValueSet) -> ValueSet {
        ValueSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &ValueSet) -> ValueSet {
        ValueSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn insert(&mut self, value: Value) -> bool {
        self.0.insert(value)
    }

    pub fn complement(&self, domain_size: u32) -> ValueSet {
        ValueSet::full(domain_size).difference(self)
    }

    pub fn is_full(&self, domain_size: u32) -> bool {
        self.0.len() == domain_size as usize && self.0.iter().all(|&v| (1..=domain_size).contains(&v))
    }
}

impl FromIterator<Value> for ValueSet {
    fn from_iter<I: IntoIterator<Item = Value>>(iter: I) -> Self {
        ValueSet(iter.into_iter().collect())
    }
}

/// A non-trivial restriction of one variable to a set of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MvLiteral {
    var: VarId,
    values: ValueSet,
}

impl MvLiteral {
    pub fn new(var: &MvVariable, values: ValueSet) -> Result<Self> {
        let n = var.domain_size();
        if let Some(bad) = values.iter().find(|v| !(1..=n).contains(v)) {
            return Err(Error::invalid(
                "literal",
                format!("value {bad} is outside 1..={n} for `{}`", var.name),
            ));
        }
        if values.is_empty() || values.len() == n as usize {
            return Err(Error::invalid(
                "literal",
                format!(
                    "`{}` literal specifies {} of {n} values; literals must be non-empty and proper",
                    var.name,
                    values.len()
                ),
            ));
        }
        Ok(MvLiteral { var: var.id, values })
    }

    /// The simple literal `var = value`.
    pub fn eq(var: &MvVariable, value: Value) -> Result<Self> {
        Self::new(var, ValueSet::single(value))
    }

    /// The literal `var != value`.
    pub fn ne(var: &MvVariable, value: Value) -> Result<Self> {
        Self::new(var, ValueSet::single(value).complement(var.domain_size()))
    }

    pub fn one_of(var: &MvVariable, values: &[Value]) -> Result<Self> {
        Self::new(var, values.iter().copied().collect())
    }

    pub fn var(&self) -> VarId {
        self.var
    }

    pub fn values(&self) -> &ValueSet {
        &self.values
    }

    pub fn is_simple(&self) -> bool {
        self.values.len() == 1
    }
}

/// `true` iff `strong` entails `weak`, i.e. `strong`'s values are a subset of `weak`'s.
pub fn literal_subsumes(weak: &MvLiteral, strong: &MvLiteral) -> Result<bool> {
    if weak.var != strong.var {
        return Err(Error::VariableMismatch(weak.var, strong.var));
    }
    Ok(strong.values.is_subset(&weak.values))
}

/// `true` iff `strong` is strictly stronger than `weak`.
pub fn literal_strictly_subsumes(weak: &MvLiteral, strong: &MvLiteral) -> Result<bool> {
    Ok(literal_subsumes(weak, strong)? && weak.values != strong.values)
}

/// A conjunction of literals over distinct variables, kept canonical: literals
/// whose value set would be the full domain are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MvTerm {
    lits: BTreeMap<VarId, MvLiteral>,
}

impl MvTerm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = MvLiteral>) -> Result<Self> {
        let mut term = MvTerm::new();
        for lit in lits {
            let var = lit.var;
            if term.lits.insert(var, lit).is_some() {
                return Err(Error::invalid(
                    "term",
                    format!("variable {var} has more than one literal"),
                ));
            }
        }
        Ok(term)
    }

    /// Builds a term from per-variable value sets. Full sets are dropped and
    /// empty sets are rejected.
    pub fn from_sets(
        space: &MvSpace,
        sets: impl IntoIterator<Item = (VarId, ValueSet)>,
    ) -> Result<Self> {
        let mut term = MvTerm::new();
        for (id, set) in sets {
            let var = space.require(id)?;
            if set.is_full(var.domain_size()) {
                continue;
            }
            let lit = MvLiteral::new(var, set)?;
            if term.lits.insert(id, lit).is_some() {
                return Err(Error::invalid(
                    "term",
                    format!("variable {id} has more than one literal"),
                ));
            }
        }
        Ok(term)
    }

    pub fn literal(&self, var: VarId) -> Option<&MvLiteral> {
        self.lits.get(&var)
    }

    pub fn literals(&self) -> impl Iterator<Item = &MvLiteral> {
        self.lits.values()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.lits.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn is_simple(&self) -> bool {
        self.lits.values().all(MvLiteral::is_simple)
    }

    /// Values allowed for `var`; the full domain when the term does not mention it.
    pub fn allowed(&self, var: &MvVariable) -> ValueSet {
        match self.lits.get(&var.id) {
            Some(lit) => lit.values.clone(),
            None => ValueSet::full(var.domain_size()),
        }
    }

    /// Removes the literal on `var`, which is the same as weakening it to the full domain.
    pub fn without(&self, var: VarId) -> MvTerm {
        let mut t = self.clone();
        t.lits.remove(&var);
        t
    }

    /// `self` subsumes `inner` iff `inner` entails `self`.
    pub fn subsumes(&self, inner: &MvTerm) -> bool {
        self.lits.iter().all(|(var, outer_lit)| match inner.lits.get(var) {
            Some(inner_lit) => inner_lit.values.is_subset(&outer_lit.values),
            None => false,
        })
    }

    pub fn strictly_subsumes(&self, inner: &MvTerm) -> bool {
        self != inner && self.subsumes(inner)
    }

    pub fn is_consistent_with(&self, inst: &Instance) -> bool {
        self.lits
            .iter()
            .all(|(&var, lit)| inst.value(var).is_some_and(|v| lit.values.contains(v)))
    }

    pub fn completion_count(&self, space: &MvSpace) -> u128 {
        space
            .vars()
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(self.allowed(v).len() as u128))
    }

    /// Every instance consistent with the term, in the same order as [`MvSpace::instances`].
    pub fn completions<'a>(&'a self, space: &'a MvSpace) -> impl Iterator<Item = Instance> + 'a {
        MixedRadix::new(
            space
                .vars()
                .iter()
                .map(|v| self.allowed(v).iter().collect())
                .collect(),
        )
        .map(|values| Instance { values })
    }

    pub fn display<'a>(&'a self, space: &'a MvSpace) -> TermDisplay<'a> {
        TermDisplay { term: self, space }
    }
}

/// Canonical order: fewer literals first, then variable ids, then value sets.
impl Ord for MvTerm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.lits.keys().cmp(other.lits.keys()))
            .then_with(|| {
                self.lits
                    .values()
                    .map(|l| &l.values)
                    .cmp(other.lits.values().map(|l| &l.values))
            })
    }
}

impl PartialOrd for MvTerm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `outer` subsumes `inner`.
pub fn term_subsumes(outer: &MvTerm, inner: &MvTerm) -> bool {
    outer.subsumes(inner)
}

pub fn term_strictly_subsumes(outer: &MvTerm, inner: &MvTerm) -> bool {
    outer.strictly_subsumes(inner)
}

/// A total assignment of one value per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Instance {
    values: Vec<Value>,
}

impl Instance {
    pub fn new(space: &MvSpace, values: Vec<Value>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::invalid(
                "instance",
                format!("expected {} values, got {}", space.len(), values.len()),
            ));
        }
        for (var, &v) in space.vars().iter().zip(&values) {
            if !(1..=var.domain_size()).contains(&v) {
                return Err(Error::invalid(
                    "instance",
                    format!("value {v} is outside 1..={} for `{}`", var.domain_size(), var.name),
                ));
            }
        }
        Ok(Instance { values })
    }

    pub fn value(&self, var: VarId) -> Option<Value> {
        self.values.get(var).copied()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// The instance as a simple term. Binary-or-larger domains make every
    /// literal proper, so the term mentions every variable.
    pub fn as_term(&self, space: &MvSpace) -> Result<MvTerm> {
        MvTerm::from_literals(
            space
                .vars()
                .iter()
                .zip(&self.values)
                .map(|(var, &v)| MvLiteral::eq(var, v))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MvExpression {
    Const(bool),
    Lit(MvLiteral),
    Not(Box<MvExpression>),
    And(Vec<MvExpression>),
    Or(Vec<MvExpression>),
}

impl MvExpression {
    pub fn lit(lit: MvLiteral) -> Self {
        MvExpression::Lit(lit)
    }

    pub fn and(children: impl IntoIterator<Item = MvExpression>) -> Self {
        MvExpression::And(children.into_iter().collect())
    }

    pub fn or(children: impl IntoIterator<Item = MvExpression>) -> Self {
        MvExpression::Or(children.into_iter().collect())
    }

    pub fn negate(self) -> Self {
        MvExpression::Not(Box::new(self))
    }

    /// The conjunction of a term's literals; `Const(true)` for the empty term.
    pub fn from_term(term: &MvTerm) -> Self {
        match term.len() {
            0 => MvExpression::Const(true),
            1 => MvExpression::Lit(term.literals().next().unwrap().clone()),
            _ => MvExpression::and(term.literals().cloned().map(MvExpression::Lit)),
        }
    }

    pub fn evaluate(&self, inst: &Instance) -> Result<bool> {
        Ok(match self {
            MvExpression::Const(b) => *b,
            MvExpression::Lit(lit) => {
                let v = inst.value(lit.var).ok_or(Error::Unassigned(lit.var))?;
                lit.values.contains(v)
            }
            MvExpression::Not(e) => !e.evaluate(inst)?,
            MvExpression::And(es) => {
                for e in es {
                    if !e.evaluate(inst)? {
                        return Ok(false);
                    }
                }
                true
            }
            MvExpression::Or(es) => {
                for e in es {
                    if e.evaluate(inst)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Checks every literal against the space's domains.
    pub fn validate(&self, space: &MvSpace) -> Result<()> {
        match self {
            MvExpression::Const(_) => Ok(()),
            MvExpression::Lit(lit) => {
                let var = space.require(lit.var)?;
                MvLiteral::new(var, lit.values.clone()).map(|_| ())
            }
            MvExpression::Not(e) => e.validate(space),
            MvExpression::And(es) | MvExpression::Or(es) => {
                es.iter().try_for_each(|e| e.validate(space))
            }
        }
    }

    pub fn display<'a>(&'a self, space: &'a MvSpace) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, space }
    }
}

pub fn evaluate(expr: &MvExpression, inst: &Instance) -> Result<bool> {
    expr.evaluate(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The classifier `(X=x1 ∧ Y=y2) ∨ X=x2` over X ternary and Y binary.
    pub(crate) fn sample_tree() -> (MvSpace, MvExpression) {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 2)]).unwrap();
        let x = &space.vars()[0];
        let y = &space.vars()[1];
        let expr = MvExpression::or([
            MvExpression::and([
                MvExpression::lit(MvLiteral::eq(x, 1).unwrap()),
                MvExpression::lit(MvLiteral::eq(y, 2).unwrap()),
            ]),
            MvExpression::lit(MvLiteral::eq(x, 2).unwrap()),
        ]);
        (space, expr)
    }

    fn abc() -> MvSpace {
        let a = MvVariable::new(0, "A", vec!["1".into(), "2".into(), "3".into()]).unwrap();
        let b = MvVariable::new(1, "B", vec!["r".into(), "b".into(), "g".into()]).unwrap();
        let c = MvVariable::new(2, "C", vec!["l".into(), "m".into(), "h".into()]).unwrap();
        MvSpace::new(vec![a, b, c]).unwrap()
    }

    #[test]
    fn evaluate_matches_sample_table() {
        let (space, expr) = sample_tree();
        let table: Vec<bool> = space
            .instances()
            .map(|i| expr.evaluate(&i).unwrap())
            .collect();
        // rows x1y1, x1y2, x2y1, x2y2, x3y1, x3y2
        assert_eq!(table, vec![false, true, true, true, false, false]);
        let inst = Instance::new(&space, vec![2, 2]).unwrap();
        assert!(expr.evaluate(&inst).unwrap());
        let inst = Instance::new(&space, vec![3, 1]).unwrap();
        assert!(!expr.evaluate(&inst).unwrap());
        assert!(MvExpression::Const(true).evaluate(&inst).unwrap());
    }

    #[test]
    fn evaluate_reports_unassigned_variable() {
        let (space, expr) = sample_tree();
        let small = MvSpace::new(vec![space.vars()[0].clone()]).unwrap();
        let inst = Instance::new(&small, vec![1]).unwrap();
        assert_eq!(expr.evaluate(&inst), Err(Error::Unassigned(1)));
    }

    #[test]
    fn literal_invariants() {
        let space = abc();
        let b = &space.vars()[1];
        assert!(MvLiteral::new(b, ValueSet::default()).is_err());
        assert!(MvLiteral::new(b, ValueSet::full(3)).is_err());
        assert!(MvLiteral::one_of(b, &[4]).is_err());
        assert!(MvLiteral::eq(b, 1).unwrap().is_simple());
        assert!(MvVariable::new(0, "Z", vec!["a".into()]).is_err());
        assert!(MvVariable::new(0, "Z", vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn literal_strength() {
        let space = abc();
        let b = &space.vars()[1];
        let r = MvLiteral::eq(b, 1).unwrap();
        let rb = MvLiteral::one_of(b, &[1, 2]).unwrap();
        let g = MvLiteral::eq(b, 3).unwrap();
        assert!(literal_subsumes(&rb, &r).unwrap());
        assert!(literal_strictly_subsumes(&rb, &r).unwrap());
        assert!(!literal_subsumes(&rb, &g).unwrap());
        assert!(!literal_subsumes(&g, &rb).unwrap());
        assert!(literal_subsumes(&r, &r).unwrap());
        assert!(!literal_strictly_subsumes(&r, &r).unwrap());
        let a1 = MvLiteral::eq(&space.vars()[0], 1).unwrap();
        assert_eq!(literal_subsumes(&a1, &r), Err(Error::VariableMismatch(0, 1)));
    }

    #[test]
    fn term_subsumption_examples() {
        let space = abc();
        let [a, b, c] = [&space.vars()[0], &space.vars()[1], &space.vars()[2]];
        let inner = MvTerm::from_literals([
            MvLiteral::eq(a, 2).unwrap(),
            MvLiteral::one_of(b, &[1, 2]).unwrap(),
            MvLiteral::ne(c, 3).unwrap(),
        ])
        .unwrap();
        let outer1 =
            MvTerm::from_literals([MvLiteral::eq(a, 2).unwrap(), MvLiteral::ne(c, 3).unwrap()])
                .unwrap();
        let outer2 = MvTerm::from_literals([
            MvLiteral::ne(a, 1).unwrap(),
            MvLiteral::one_of(b, &[1, 2]).unwrap(),
            MvLiteral::ne(c, 3).unwrap(),
        ])
        .unwrap();
        assert!(term_strictly_subsumes(&outer1, &inner));
        assert!(term_strictly_subsumes(&outer2, &inner));
        assert!(!term_subsumes(&inner, &outer1));
        assert!(term_subsumes(&MvTerm::new(), &inner));
        assert!(term_subsumes(&inner, &inner));
        assert!(!term_strictly_subsumes(&inner, &inner));
    }

    #[test]
    fn from_sets_canonicalizes() {
        let space = abc();
        let t = MvTerm::from_sets(&space, [(0, ValueSet::full(3)), (1, ValueSet::single(2))]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(MvTerm::from_sets(&space, [(0, ValueSet::default())]).is_err());
    }

    #[test]
    fn dropping_equals_weakening_to_full() {
        let space = abc();
        let t = MvTerm::from_sets(&space, [(0, ValueSet::single(2)), (2, ValueSet::single(1))]).unwrap();
        let weakened = MvTerm::from_sets(&space, [(0, ValueSet::full(3)), (2, ValueSet::single(1))]).unwrap();
        assert_eq!(t.without(0), weakened);
    }

    #[test]
    fn completions_enumerate_allowed_values() {
        let (space, _) = sample_tree();
        let t = MvTerm::from_sets(&space, [(0, [1, 2].into_iter().collect())]).unwrap();
        let comps: Vec<_> = t.completions(&space).map(|i| i.values().to_vec()).collect();
        assert_eq!(comps, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(t.completion_count(&space), 4);
        let empty = MvSpace::default();
        assert_eq!(empty.instances().count(), 1);
    }

    #[test]
    fn canonical_order_prefers_fewer_literals() {
        let (space, _) = sample_tree();
        let long = MvTerm::from_sets(&space, [(0, ValueSet::single(1)), (1, ValueSet::single(2))]).unwrap();
        let short = MvTerm::from_sets(&space, [(1, ValueSet::single(1))]).unwrap();
        let shorter = MvTerm::from_sets(&space, [(0, ValueSet::single(3))]).unwrap();
        let mut v = vec![long.clone(), short.clone(), shorter.clone()];
        v.sort();
        assert_eq!(v, vec![shorter, short, long]);
    }
}

#[cfg(test)]
pub(crate) use tests::sample_tree as sample_tree_fixture;

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn space() -> MvSpace {
        MvSpace::indexed(&[("X", 3), ("Y", 2), ("Z", 4)]).unwrap()
    }

    fn term_strategy() -> impl Strategy<Value = MvTerm> {
        (1u64..8, 1u64..4, 1u64..16).prop_map(|(x, y, z)| {
            let space = space();
            let set = |mask: u64| (0..4).filter(|b| mask >> b & 1 == 1).map(|b| b as Value + 1).collect();
            MvTerm::from_sets(&space, [(0, set(x)), (1, set(y)), (2, set(z))]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn subsumption_is_completion_containment(a in term_strategy(), b in term_strategy()) {
            let space = space();
            let ca: BTreeSet<Instance> = a.completions(&space).collect();
            let cb: BTreeSet<Instance> = b.completions(&space).collect();
            prop_assert_eq!(a.subsumes(&b), cb.is_subset(&ca));
        }

        #[test]
        fn subsumption_is_a_partial_order(a in term_strategy(), b in term_strategy(), c in term_strategy()) {
            prop_assert!(a.subsumes(&a));
            if a.subsumes(&b) && b.subsumes(&a) {
                prop_assert_eq!(&a, &b);
            }
            if a.subsumes(&b) && b.subsumes(&c) {
                prop_assert!(a.subsumes(&c));
            }
        }
    }
}
