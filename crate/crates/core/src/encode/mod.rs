//! Boolean encodings of multi-valued logic.
//!
//! Each scheme is an [`Encoding`] strategy looked up by name in an
//! [`EncodingRegistry`]. A [`VarMap`] fixes the Boolean indicators a scheme
//! assigns to every multi-valued variable, in the global order
//! (variable id, value index) that the BDD engine also uses.

mod boolexpr;
mod highest_bit;
mod one_hot;
mod prefix;
mod registry;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mvl::{Instance, MvExpression, MvLiteral, MvSpace, MvTerm, Value, ValueSet, VarId};

pub use boolexpr::{BoolExprDisplay, BoolExpression, BoolTerm, BoolTermDisplay, BoolVar};
pub use highest_bit::HighestBit;
pub use one_hot::OneHot;
pub use prefix::Prefix;
pub use registry::{registry, EncodingRegistry};

/// A way of representing multi-valued variables with Boolean indicators.
pub trait Encoding: Send + Sync {
    /// Registry key, e.g. `"one_hot"`.
    fn name(&self) -> &'static str;

    /// Lowest value index that owns an indicator; indicators run from here to `n`.
    fn first_indicator(&self) -> Value;

    /// The canonical assignment of one variable's indicators for `value`.
    fn value_pattern(&self, domain_size: u32, value: Value) -> Vec<bool>;

    fn encode_literal(&self, lit: &MvLiteral, map: &VarMap) -> BoolExpression;

    /// The domain constraint for one variable.
    fn variable_constraint(&self, var: VarId, map: &VarMap) -> BoolExpression;

    /// The value an indicator assignment stands for, or `None` if the
    /// assignment violates the domain constraint.
    fn decode_pattern(&self, pattern: &[bool]) -> Option<Value> {
        let n = pattern.len() as u32 + self.first_indicator() - 1;
        (1..=n).find(|&v| self.value_pattern(n, v) == pattern)
    }
}

/// Indicator layout of a space under one scheme.
#[derive(Clone)]
pub struct VarMap {
    encoding: Arc<dyn Encoding>,
    space: MvSpace,
    /// Indicators owned by each multi-valued variable, in value order.
    blocks: Vec<Vec<BoolVar>>,
    owners: Vec<(VarId, Value)>,
    names: Vec<String>,
}

impl std::fmt::Debug for VarMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VarMap")
            .field("scheme", &self.scheme())
            .field("names", &self.names)
            .finish()
    }
}

impl VarMap {
    pub fn new(space: &MvSpace, encoding: Arc<dyn Encoding>) -> Self {
        let first = encoding.first_indicator();
        let mut blocks = Vec::with_capacity(space.len());
        let mut owners = Vec::new();
        let mut names = Vec::new();
        for var in space.vars() {
            let mut block = Vec::new();
            for value in first..=var.domain_size() {
                block.push(BoolVar(owners.len() as u32));
                owners.push((var.id(), value));
                names.push(format!("{}#{value}", var.name()));
            }
            blocks.push(block);
        }
        VarMap {
            encoding,
            space: space.clone(),
            blocks,
            owners,
            names,
        }
    }

    /// Looks the scheme up in the default registry.
    pub fn with_scheme(space: &MvSpace, scheme: &str) -> Result<Self> {
        let encoding = registry()
            .get(scheme)
            .ok_or_else(|| Error::UnknownScheme(scheme.to_string()))?;
        Ok(Self::new(space, encoding))
    }

    pub fn one_hot(space: &MvSpace) -> Self {
        Self::new(space, Arc::new(OneHot))
    }

    pub fn scheme(&self) -> &'static str {
        self.encoding.name()
    }

    pub fn encoding(&self) -> &dyn Encoding {
        self.encoding.as_ref()
    }

    pub fn space(&self) -> &MvSpace {
        &self.space
    }

    /// Number of Boolean indicators.
    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    pub fn indicators(&self, var: VarId) -> &[BoolVar] {
        &self.blocks[var]
    }

    pub fn indicator(&self, var: VarId, value: Value) -> Option<BoolVar> {
        let first = self.encoding.first_indicator();
        if value < first {
            return None;
        }
        self.blocks.get(var)?.get((value - first) as usize).copied()
    }

    pub fn owner(&self, bv: BoolVar) -> (VarId, Value) {
        self.owners[bv.index()]
    }

    pub fn name(&self, bv: BoolVar) -> &str {
        &self.names[bv.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub(crate) fn require_one_hot(&self) -> Result<()> {
        if self.scheme() == OneHot.name() {
            Ok(())
        } else {
            Err(Error::WrongScheme(self.scheme()))
        }
    }
}

/// Per-variable domain constraints and their conjunction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub per_variable: Vec<BoolExpression>,
}

impl ConstraintSet {
    pub fn all(&self) -> BoolExpression {
        BoolExpression::all(
            self.per_variable
                .iter()
                .filter(|e| **e != BoolExpression::Const(true))
                .cloned(),
        )
    }
}

pub fn encode_literal(lit: &MvLiteral, map: &VarMap) -> BoolExpression {
    map.encoding.encode_literal(lit, map)
}

/// Replaces every literal by its encoding, keeping the connectives.
pub fn encode_expression(expr: &MvExpression, map: &VarMap) -> BoolExpression {
    match expr {
        MvExpression::Const(b) => BoolExpression::Const(*b),
        MvExpression::Lit(lit) => encode_literal(lit, map),
        MvExpression::Not(e) => encode_expression(e, map).negate(),
        MvExpression::And(es) => BoolExpression::And(es.iter().map(|e| encode_expression(e, map)).collect()),
        MvExpression::Or(es) => BoolExpression::Or(es.iter().map(|e| encode_expression(e, map)).collect()),
    }
}

pub fn build_constraints(map: &VarMap) -> ConstraintSet {
    ConstraintSet {
        per_variable: (0..map.space.len())
            .map(|var| map.encoding.variable_constraint(var, map))
            .collect(),
    }
}

/// One-hot encoding of a term: the union of its literals' negative terms.
pub fn encode_term(term: &MvTerm, map: &VarMap) -> Result<BoolTerm> {
    map.require_one_hot()?;
    let mut out = BoolTerm::new();
    for lit in term.literals() {
        for v in one_hot::excluded(lit, map) {
            out.insert(v, false);
        }
    }
    Ok(out)
}

/// Inverse of [`encode_term`] for negative terms consistent with the
/// exactly-one constraints.
pub fn decode_negative_term(rho: &BoolTerm, map: &VarMap) -> Result<MvTerm> {
    map.require_one_hot()?;
    let mut excluded: Vec<ValueSet> = vec![ValueSet::default(); map.space.len()];
    for (bv, positive) in rho.literals() {
        if positive {
            return Err(Error::NotNegative(map.name(bv).to_string()));
        }
        let (var, value) = map.owner(bv);
        excluded[var].insert(value);
    }
    let mut sets = Vec::new();
    for (var, ex) in excluded.into_iter().enumerate() {
        if ex.is_empty() {
            continue;
        }
        let mv = &map.space.vars()[var];
        let allowed = ex.complement(mv.domain_size());
        if allowed.is_empty() {
            return Err(Error::InconsistentWithConstraint(mv.name().to_string()));
        }
        sets.push((var, allowed));
    }
    MvTerm::from_sets(&map.space, sets)
}

/// `true` unless some variable has every indicator negated.
pub fn is_negative_consistent(rho: &BoolTerm, map: &VarMap) -> bool {
    let mut negated = vec![0usize; map.space.len()];
    for (bv, p) in rho.literals() {
        if !p {
            negated[map.owner(bv).0] += 1;
        }
    }
    negated
        .iter()
        .enumerate()
        .all(|(var, &k)| k < map.blocks[var].len())
}

/// Encodes an instance by each variable's value pattern under the map's scheme.
pub fn encode_instance(inst: &Instance, map: &VarMap) -> BoolTerm {
    let mut out = BoolTerm::new();
    for var in map.space.vars() {
        let value = inst.value(var.id()).expect("instance over the map's space");
        let pattern = map.encoding.value_pattern(var.domain_size(), value);
        for (bv, p) in map.blocks[var.id()].iter().zip(pattern) {
            out.insert(*bv, p);
        }
    }
    out
}

/// The one-hot full encoding: the chosen value's indicator positive, all
/// others negative. It satisfies the exactly-one constraints by construction.
pub fn encode_instance_full(inst: &Instance, map: &VarMap) -> Result<BoolTerm> {
    map.require_one_hot()?;
    Ok(encode_instance(inst, map))
}

/// Assignment vector for a complete term.
pub fn assignment_of(term: &BoolTerm, map: &VarMap) -> Vec<bool> {
    let mut a = vec![false; map.len()];
    for (v, p) in term.literals() {
        a[v.index()] = p;
    }
    a
}

/// Maps a full indicator assignment back to an instance, if it is valid.
pub fn decode_assignment(assignment: &[bool], map: &VarMap) -> Option<Instance> {
    let values = map
        .space
        .vars()
        .iter()
        .map(|var| {
            let pattern: Vec<bool> = map.blocks[var.id()].iter().map(|bv| assignment[bv.index()]).collect();
            map.encoding.decode_pattern(&pattern)
        })
        .collect::<Option<Vec<_>>>()?;
    Instance::new(&map.space, values).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvl::MvVariable;

    fn lit(space: &MvSpace, var: VarId, values: &[Value]) -> MvLiteral {
        MvLiteral::one_of(&space.vars()[var], values).unwrap()
    }

    fn term(map: &VarMap, lits: &[(&str, bool)]) -> BoolTerm {
        BoolTerm::from_literals(lits.iter().map(|(name, p)| {
            let idx = map.names().iter().position(|n| n == name).unwrap();
            (BoolVar(idx as u32), *p)
        }))
        .unwrap()
    }

    #[test]
    fn one_hot_literals() {
        let space = MvSpace::indexed(&[("X", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        assert_eq!(
            encode_literal(&lit(&space, 0, &[2]), &map).as_term().unwrap(),
            term(&map, &[("X#1", false), ("X#3", false)])
        );
        assert_eq!(
            encode_literal(&lit(&space, 0, &[1, 2]), &map).as_term().unwrap(),
            term(&map, &[("X#3", false)])
        );
    }

    #[test]
    fn prefix_value_patterns() {
        let space = MvSpace::indexed(&[("X", 3)]).unwrap();
        let map = VarMap::with_scheme(&space, "prefix").unwrap();
        let enc: Vec<BoolTerm> = (1..=3)
            .map(|v| encode_literal(&lit(&space, 0, &[v]), &map).as_term().unwrap())
            .collect();
        assert_eq!(
            enc,
            vec![
                term(&map, &[("X#2", false), ("X#3", false)]),
                term(&map, &[("X#2", true), ("X#3", false)]),
                term(&map, &[("X#2", true), ("X#3", true)]),
            ]
        );
    }

    #[test]
    fn highest_bit_merges_adjacent_values() {
        let space = MvSpace::indexed(&[("X", 4)]).unwrap();
        let map = VarMap::with_scheme(&space, "highest_bit").unwrap();
        assert_eq!(
            encode_literal(&lit(&space, 0, &[1, 2]), &map).as_term().unwrap(),
            term(&map, &[("X#3", false), ("X#4", false)])
        );
        assert_eq!(
            encode_literal(&lit(&space, 0, &[1, 2, 3]), &map).as_term().unwrap(),
            term(&map, &[("X#4", false)])
        );
        assert_eq!(
            encode_literal(&lit(&space, 0, &[4]), &map).as_term().unwrap(),
            term(&map, &[("X#4", true)])
        );
    }

    #[test]
    fn expression_encodings_for_x1_or_x3() {
        let space = MvSpace::indexed(&[("X", 4)]).unwrap();
        let delta = MvExpression::Lit(lit(&space, 0, &[1, 3]));

        let map = VarMap::with_scheme(&space, "prefix").unwrap();
        let BoolExpression::Or(ds) = encode_expression(&delta, &map) else { panic!() };
        let ds: Vec<BoolTerm> = ds.iter().map(|d| d.as_term().unwrap()).collect();
        assert_eq!(
            ds,
            vec![
                term(&map, &[("X#2", false), ("X#3", false), ("X#4", false)]),
                term(&map, &[("X#2", true), ("X#3", true), ("X#4", false)]),
            ]
        );

        let map = VarMap::with_scheme(&space, "highest_bit").unwrap();
        let BoolExpression::Or(ds) = encode_expression(&delta, &map) else { panic!() };
        let ds: Vec<BoolTerm> = ds.iter().map(|d| d.as_term().unwrap()).collect();
        assert_eq!(
            ds,
            vec![
                term(&map, &[("X#2", false), ("X#3", false), ("X#4", false)]),
                term(&map, &[("X#3", true), ("X#4", false)]),
            ]
        );
    }

    #[test]
    fn one_hot_disjunction() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let delta = MvExpression::or([
            MvExpression::Lit(lit(&space, 0, &[1])),
            MvExpression::Lit(lit(&space, 1, &[1])),
        ]);
        let BoolExpression::Or(ds) = encode_expression(&delta, &map) else { panic!() };
        let ds: Vec<BoolTerm> = ds.iter().map(|d| d.as_term().unwrap()).collect();
        assert_eq!(
            ds,
            vec![
                term(&map, &[("X#2", false), ("X#3", false)]),
                term(&map, &[("Y#2", false), ("Y#3", false)]),
            ]
        );
    }

    #[test]
    fn constraints_per_scheme() {
        let space = MvSpace::indexed(&[("X", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let psi = build_constraints(&map).all();
        let x = |i: u32| BoolExpression::Var(BoolVar(i));
        let expected = BoolExpression::And(vec![
            BoolExpression::Or(vec![x(0), x(1), x(2)]),
            BoolExpression::And(vec![x(0), x(1)]).negate(),
            BoolExpression::And(vec![x(0), x(2)]).negate(),
            BoolExpression::And(vec![x(1), x(2)]).negate(),
        ]);
        assert_eq!(psi, expected);

        let space4 = MvSpace::indexed(&[("X", 4)]).unwrap();
        let map = VarMap::with_scheme(&space4, "prefix").unwrap();
        // indicators X#2, X#3, X#4 are 0, 1, 2
        let expected = BoolExpression::And(vec![
            BoolExpression::implies(x(1), x(0)),
            BoolExpression::implies(x(2), x(1)),
        ]);
        assert_eq!(build_constraints(&map).all(), expected);

        let map = VarMap::with_scheme(&space4, "highest_bit").unwrap();
        assert_eq!(build_constraints(&map).all(), BoolExpression::Const(true));
    }

    #[test]
    fn decode_examples() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let t = decode_negative_term(&term(&map, &[("X#1", false), ("X#3", false)]), &map).unwrap();
        assert_eq!(t, MvTerm::from_literals([lit(&space, 0, &[2])]).unwrap());
        let t = decode_negative_term(
            &term(&map, &[("X#3", false), ("Y#2", false), ("Y#3", false)]),
            &map,
        )
        .unwrap();
        assert_eq!(
            t,
            MvTerm::from_literals([lit(&space, 0, &[1, 2]), lit(&space, 1, &[1])]).unwrap()
        );
        assert_eq!(decode_negative_term(&BoolTerm::new(), &map).unwrap(), MvTerm::new());
        assert!(matches!(
            decode_negative_term(&term(&map, &[("X#1", true)]), &map),
            Err(Error::NotNegative(_))
        ));
        assert_eq!(
            decode_negative_term(&term(&map, &[("Y#1", false), ("Y#2", false), ("Y#3", false)]), &map),
            Err(Error::InconsistentWithConstraint("Y".into()))
        );
        let prefix = VarMap::with_scheme(&space, "prefix").unwrap();
        assert!(matches!(
            decode_negative_term(&BoolTerm::new(), &prefix),
            Err(Error::WrongScheme("prefix"))
        ));
    }

    #[test]
    fn full_instance_encodings() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let inst = Instance::new(&space, vec![1, 1]).unwrap();
        assert_eq!(
            encode_instance_full(&inst, &map).unwrap(),
            term(
                &map,
                &[("X#1", true), ("X#2", false), ("X#3", false), ("Y#1", true), ("Y#2", false), ("Y#3", false)]
            )
        );

        let fig = MvSpace::indexed(&[("X", 3), ("Y", 2)]).unwrap();
        let map = VarMap::one_hot(&fig);
        let inst = Instance::new(&fig, vec![2, 2]).unwrap();
        assert_eq!(
            encode_instance_full(&inst, &map).unwrap(),
            term(&map, &[("X#1", false), ("X#2", true), ("X#3", false), ("Y#1", false), ("Y#2", true)])
        );

        let bin = MvSpace::new(vec![MvVariable::indexed(0, "X", 2).unwrap()]).unwrap();
        let map = VarMap::one_hot(&bin);
        let inst = Instance::new(&bin, vec![1]).unwrap();
        assert_eq!(
            encode_instance_full(&inst, &map).unwrap(),
            term(&map, &[("X#1", true), ("X#2", false)])
        );
    }

    #[test]
    fn patterns_round_trip_and_satisfy_constraints() {
        let space = MvSpace::indexed(&[("X", 4), ("Y", 2)]).unwrap();
        for scheme in registry().names() {
            let map = VarMap::with_scheme(&space, scheme).unwrap();
            let psi = build_constraints(&map).all();
            for inst in space.instances() {
                let a = assignment_of(&encode_instance(&inst, &map), &map);
                assert!(psi.evaluate(&a), "{scheme}");
                assert_eq!(decode_assignment(&a, &map), Some(inst), "{scheme}");
            }
        }
    }

    #[test]
    fn var_names_follow_global_order() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 2)]).unwrap();
        assert_eq!(VarMap::one_hot(&space).names(), ["X#1", "X#2", "X#3", "Y#1", "Y#2"]);
        assert_eq!(
            VarMap::with_scheme(&space, "prefix").unwrap().names(),
            ["X#2", "X#3", "Y#2"]
        );
        assert!(matches!(VarMap::with_scheme(&space, "log"), Err(Error::UnknownScheme(_))));
    }
}
