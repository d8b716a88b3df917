//! Prime implicants and PI-explanations through the one-hot encoding.
//!
//! A negative Boolean term `ρ` implies `γ` iff `γ` holds on every assignment
//! that falsifies the variables of `ρ`. Reading each variable as a selector
//! ("negated in ρ or not") turns that test into a monotone function `sel(γ)`
//! whose minimal true points are exactly the negative prime implicants of
//! `γ`. Both `sel(γ)` and its minimal points are computed by one memoized
//! pass over the diagram.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use serde_json::{json, Value as Json};

use crate::boolfn::{Bdd, BddConfig, BddManager};
use crate::encode::{
    build_constraints, decode_negative_term, encode_expression, is_negative_consistent, BoolTerm, BoolVar, VarMap,
};
use crate::error::{Error, Result};
use crate::ingest::{tree_to_expression, FeatureSpace, Forest};
use crate::mvl::{Instance, MvExpression, MvSpace, MvTerm, ValueSet, VarId};

/// Upper bound on the number of candidate terms kept while enumerating.
pub const DEFAULT_PRIME_CAP: usize = 1 << 20;

/// Negative, Ψ-consistent prime implicants of `gamma`, in term order.
///
/// `gamma` is normally the compiled `Ψ ⇒ Δ_b` over the indicators of `map`.
pub fn enumerate_negative_primes(manager: &mut BddManager, gamma: Bdd, map: &VarMap) -> Result<Vec<BoolTerm>> {
    map_requires_one_hot(map)?;
    let candidates = negative_primes(manager, gamma, DEFAULT_PRIME_CAP)?;
    let mut out: Vec<BoolTerm> = candidates
        .into_iter()
        .filter(|rho| is_negative_consistent(rho, map))
        .filter(|rho| is_locally_prime(manager, rho, gamma))
        .collect();
    out.sort();
    Ok(out)
}

fn map_requires_one_hot(map: &VarMap) -> Result<()> {
    if map.scheme() == "one_hot" {
        Ok(())
    } else {
        Err(Error::WrongScheme(map.scheme()))
    }
}

/// `rho ⊨ gamma` and no term with one literal fewer does.
pub fn is_locally_prime(manager: &BddManager, rho: &BoolTerm, gamma: Bdd) -> bool {
    manager.term_implies(rho, gamma) && rho.vars().all(|v| !manager.term_implies(&rho.without(v), gamma))
}

/// Every negative prime implicant of `gamma`, consistent or not.
pub fn negative_primes(manager: &mut BddManager, gamma: Bdd, cap: usize) -> Result<Vec<BoolTerm>> {
    let mut sel_memo = HashMap::new();
    let sel = selector(manager, gamma, &mut sel_memo)?;
    let mut min_memo = HashMap::new();
    let sets = minimal_points(manager, sel, cap, &mut min_memo)?;
    Ok(sets.iter().map(|vs| BoolTerm::negative(vs.iter().map(|&v| BoolVar(v)))).collect())
}

/// `sel(f)(s)`: `f` holds whenever every variable selected by `s` is false.
fn selector(m: &mut BddManager, f: Bdd, memo: &mut HashMap<Bdd, Bdd>) -> Result<Bdd> {
    let Some((var, lo, hi)) = m.node(f) else {
        return Ok(f);
    };
    if let Some(&r) = memo.get(&f) {
        return Ok(r);
    }
    let s_lo = selector(m, lo, memo)?;
    let s_hi = selector(m, hi, memo)?;
    let both = m.and(s_lo, s_hi)?;
    // selected: only the low branch matters; free: both must hold
    let sel_var = m.var(var)?;
    let r = m.ite(sel_var, s_lo, both)?;
    memo.insert(f, r);
    Ok(r)
}

/// Minimal true points of a monotone function, as sorted variable lists.
fn minimal_points(
    m: &BddManager,
    g: Bdd,
    cap: usize,
    memo: &mut HashMap<Bdd, Rc<Vec<Vec<u32>>>>,
) -> Result<Rc<Vec<Vec<u32>>>> {
    match g {
        Bdd::FALSE => return Ok(Rc::new(Vec::new())),
        Bdd::TRUE => return Ok(Rc::new(vec![Vec::new()])),
        _ => {}
    }
    if let Some(r) = memo.get(&g) {
        return Ok(r.clone());
    }
    let (var, lo, hi) = m.node(g).expect("internal node");
    let without = minimal_points(m, lo, cap, memo)?;
    let with = minimal_points(m, hi, cap, memo)?;
    let mut out: Vec<Vec<u32>> = without.as_ref().clone();
    for rest in with.iter() {
        if holds_on_set(m, lo, rest) {
            continue;
        }
        let mut point = Vec::with_capacity(rest.len() + 1);
        point.push(var);
        point.extend_from_slice(rest);
        out.push(point);
        if out.len() > cap {
            return Err(Error::Capacity {
                what: "prime implicant candidates",
                needed: out.len() as u128,
                limit: cap as u128,
            });
        }
    }
    let out = Rc::new(out);
    memo.insert(g, out.clone());
    Ok(out)
}

/// Value of `g` on the assignment that sets exactly the variables of `set`.
fn holds_on_set(m: &BddManager, g: Bdd, set: &[u32]) -> bool {
    let mut cur = g;
    while let Some((var, lo, hi)) = m.node(cur) {
        cur = if set.binary_search(&var).is_ok() { hi } else { lo };
    }
    cur == Bdd::TRUE
}

/// Compiles `Ψ ⇒ f` for the one-hot map.
pub fn guard_with_constraints(manager: &mut BddManager, f: Bdd, map: &VarMap) -> Result<Bdd> {
    let psi = manager.compile(&build_constraints(map).all())?;
    manager.implies(psi, f)
}

/// Negative primes of `Ψ ⇒ f`, decoded to multi-valued terms.
fn decoded_primes(manager: &mut BddManager, f: Bdd, map: &VarMap) -> Result<Vec<MvTerm>> {
    let gamma = guard_with_constraints(manager, f, map)?;
    let mut out = enumerate_negative_primes(manager, gamma, map)?
        .iter()
        .map(|rho| decode_negative_term(rho, map))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// The multi-valued prime implicants of `delta`, in canonical term order.
pub fn prime_implicants(delta: &MvExpression, space: &MvSpace, config: BddConfig) -> Result<Vec<MvTerm>> {
    delta.validate(space)?;
    let map = VarMap::one_hot(space);
    let mut manager = BddManager::new(config);
    let f = manager.compile(&encode_expression(delta, &map))?;
    decoded_primes(&mut manager, f, &map)
}

/// A prime implicant of the decided class function that is consistent with
/// the explained instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub term: MvTerm,
    /// `(variable name, value-set description)` per literal, in variable order.
    pub rendered: Vec<(String, String)>,
    pub decision: usize,
    pub instance: Instance,
}

impl Explanation {
    /// One-line rendering such as `X∈[2, 6) ∧ Y∈[-7, +inf)`; `⊤` when empty.
    pub fn text(&self) -> String {
        if self.rendered.is_empty() {
            return "⊤".to_string();
        }
        self.rendered
            .iter()
            .map(|(name, set)| format!("{name}∈{set}"))
            .collect::<Vec<_>>()
            .join(" ∧ ")
    }
}

/// How value sets of a space are described to users.
pub trait Renderer {
    fn space(&self) -> &MvSpace;
    fn render(&self, var: VarId, values: &ValueSet) -> String;
}

impl Renderer for FeatureSpace {
    fn space(&self) -> &MvSpace {
        self.mv_space()
    }

    fn render(&self, var: VarId, values: &ValueSet) -> String {
        self.feature_of_var(var).render(values)
    }
}

impl Renderer for MvSpace {
    fn space(&self) -> &MvSpace {
        self
    }

    fn render(&self, var: VarId, values: &ValueSet) -> String {
        let v = &self.vars()[var];
        let labels: Vec<&str> = values.iter().map(|x| v.label(x)).collect();
        format!("{{{}}}", labels.join(", "))
    }
}

fn explanations_from(
    manager: &mut BddManager,
    target: Bdd,
    map: &VarMap,
    renderer: &dyn Renderer,
    inst: &Instance,
    decision: usize,
) -> Result<Vec<Explanation>> {
    let terms = decoded_primes(manager, target, map)?;
    Ok(terms
        .into_iter()
        .filter(|t| t.is_consistent_with(inst))
        .map(|term| {
            let rendered = term
                .literals()
                .map(|lit| {
                    let name = renderer.space().vars()[lit.var()].name().to_string();
                    (name, renderer.render(lit.var(), lit.values()))
                })
                .collect();
            Explanation {
                term,
                rendered,
                decision,
                instance: inst.clone(),
            }
        })
        .collect())
}

/// PI-explanations of a Boolean classifier given as an expression: the
/// decision is `delta(inst)` as 0 or 1, and primes of `delta` or `¬delta`.
pub fn explain_expression(
    delta: &MvExpression,
    space: &MvSpace,
    inst: &Instance,
    config: BddConfig,
) -> Result<Vec<Explanation>> {
    delta.validate(space)?;
    let positive = delta.evaluate(inst)?;
    let map = VarMap::one_hot(space);
    let mut manager = BddManager::new(config);
    let f = manager.compile(&encode_expression(delta, &map))?;
    let target = if positive { f } else { manager.negate(f)? };
    explanations_from(&mut manager, target, &map, space, inst, positive as usize)
}

/// Compiled class functions of a forest over the one-hot indicators.
pub struct CompiledForest {
    pub manager: BddManager,
    pub map: VarMap,
    /// `class_fns[c]` holds exactly where the forest predicts `c`, among
    /// assignments satisfying the exactly-one constraints.
    pub class_fns: Vec<Bdd>,
}

impl CompiledForest {
    /// With two classes, class 1 is the strict majority of the trees' class-1
    /// functions and class 0 its negation; otherwise each class is a
    /// plurality with ties to the lowest index.
    pub fn new(forest: &Forest, space: &FeatureSpace, config: BddConfig) -> Result<Self> {
        Self::with_map(forest, space, VarMap::one_hot(space.mv_space()), config)
    }

    /// As [`CompiledForest::new`] under any encoding; the class functions
    /// are then exact on the encoding's valid value patterns.
    pub fn with_map(forest: &Forest, space: &FeatureSpace, map: VarMap, config: BddConfig) -> Result<Self> {
        let mut manager = BddManager::new(config);
        let n = forest.n_classes();
        let mut votes = Vec::with_capacity(forest.trees().len());
        for tree in forest.trees() {
            let mut per_class = Vec::with_capacity(n);
            for c in 0..n {
                let expr = tree_to_expression(tree, c, n, space)?;
                per_class.push(manager.compile(&encode_expression(&expr, &map))?);
            }
            votes.push(per_class);
        }
        let class_fns = if n == 2 {
            let ones: Vec<Bdd> = votes.iter().map(|v| v[1]).collect();
            let one = manager.majority(&ones)?;
            vec![manager.negate(one)?, one]
        } else {
            (0..n).map(|c| manager.plurality(&votes, c)).collect::<Result<Vec<_>>>()?
        };
        Ok(CompiledForest {
            manager,
            map,
            class_fns,
        })
    }

    /// The class whose compiled function holds on the encoding of `inst`.
    pub fn classify(&self, inst: &Instance) -> Result<usize> {
        let pattern = crate::encode::encode_instance(inst, &self.map);
        let a = crate::encode::assignment_of(&pattern, &self.map);
        let hits: Vec<usize> = (0..self.class_fns.len())
            .filter(|&c| self.manager.eval(self.class_fns[c], &a))
            .collect();
        match hits.as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::invalid(
                "class functions",
                format!("{} classes hold on one instance", hits.len()),
            )),
        }
    }
}

/// PI-explanations of the forest's decision on `inst`.
pub fn explain_forest(
    forest: &Forest,
    space: &FeatureSpace,
    inst: &Instance,
    config: BddConfig,
) -> Result<Vec<Explanation>> {
    let mut compiled = CompiledForest::new(forest, space, config)?;
    let decision = forest.classify(inst, space)?;
    let target = compiled.class_fns[decision];
    explanations_from(&mut compiled.manager, target, &compiled.map, space, inst, decision)
}

/// The explanation report as JSON. `instance` describes the explained input;
/// an empty list still yields the decision.
pub fn explanations_json(
    decision: usize,
    instance: serde_json::Map<String, Json>,
    explanations: &[Explanation],
) -> Json {
    let list: Vec<Json> = explanations
        .iter()
        .map(|e| {
            let features: serde_json::Map<String, Json> = e
                .term
                .literals()
                .zip(&e.rendered)
                .map(|(lit, (name, render))| {
                    (
                        name.clone(),
                        json!({"values": lit.values().iter().collect::<Vec<_>>(), "render": render}),
                    )
                })
                .collect();
            json!({ "features": features })
        })
        .collect();
    json!({"decision": decision, "instance": instance, "explanations": list})
}

/// Instance description keyed by variable name: value index and label.
pub fn instance_json(inst: &Instance, space: &MvSpace) -> serde_json::Map<String, Json> {
    let mut out = BTreeMap::new();
    for var in space.vars() {
        let v = inst.value(var.id()).expect("total instance");
        out.insert(var.name().to_string(), json!({"value": v, "label": var.label(v)}));
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{lift_instance, parse_model, RawPoint};
    use crate::mvl::{sample_tree_fixture, prime_implicants_bruteforce, MvLiteral, DEFAULT_CAP};

    fn lit(space: &MvSpace, var: usize, values: &[u32]) -> MvExpression {
        MvExpression::lit(MvLiteral::one_of(&space.vars()[var], values).unwrap())
    }

    fn show(terms: &[MvTerm], space: &MvSpace) -> Vec<String> {
        terms.iter().map(|t| t.display(space).to_string()).collect()
    }

    #[test]
    fn ternary_disjunction_gamma() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let delta = MvExpression::or([lit(&space, 0, &[1]), lit(&space, 1, &[1])]);
        let map = VarMap::one_hot(&space);
        let mut m = BddManager::default();
        let f = m.compile(&encode_expression(&delta, &map)).unwrap();
        let gamma = guard_with_constraints(&mut m, f, &map).unwrap();
        let primes = enumerate_negative_primes(&mut m, gamma, &map).unwrap();
        let shown: Vec<String> = primes.iter().map(|t| t.display(&map).to_string()).collect();
        assert_eq!(shown, ["¬X#2 ¬X#3", "¬Y#2 ¬Y#3"]);
        let mv = prime_implicants(&delta, &space, BddConfig::default()).unwrap();
        assert_eq!(show(&mv, &space), ["X=x1", "Y=y1"]);
    }

    #[test]
    fn sample_tree_primes_match_oracle() {
        let (space, delta) = sample_tree_fixture();
        let map = VarMap::one_hot(&space);
        let mut m = BddManager::default();
        let f = m.compile(&encode_expression(&delta, &map)).unwrap();
        let gamma = guard_with_constraints(&mut m, f, &map).unwrap();
        let primes = enumerate_negative_primes(&mut m, gamma, &map).unwrap();
        let shown: Vec<String> = primes.iter().map(|t| t.display(&map).to_string()).collect();
        assert_eq!(shown, ["¬X#1 ¬X#3", "¬X#3 ¬Y#1"]);
        let mv = prime_implicants(&delta, &space, BddConfig::default()).unwrap();
        assert_eq!(mv, prime_implicants_bruteforce(&delta, &space, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn tautology_has_empty_prime() {
        let space = MvSpace::indexed(&[("X", 3)]).unwrap();
        let map = VarMap::one_hot(&space);
        let mut m = BddManager::default();
        let primes = enumerate_negative_primes(&mut m, Bdd::TRUE, &map).unwrap();
        assert_eq!(primes, vec![BoolTerm::new()]);
        let none = prime_implicants(&MvExpression::Const(false), &space, BddConfig::default()).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn ternary_table_single_explanation() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let f = MvExpression::or([lit(&space, 1, &[1]), lit(&space, 0, &[3])]);
        let inst = Instance::new(&space, vec![1, 2]).unwrap();
        let ex = explain_expression(&f, &space, &inst, BddConfig::default()).unwrap();
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0].decision, 0);
        assert_eq!(ex[0].term.display(&space).to_string(), "X≠x3 ∧ Y≠y1");
    }

    #[test]
    fn sample_tree_forest_explanations() {
        let (forest, space) = parse_model(crate::ingest::tests::SAMPLE_TREE).unwrap();
        let explain = |x: f64, y: f64| {
            let raw = RawPoint::from_json(&format!(r#"{{"X": {x}, "Y": {y}}}"#), &space).unwrap();
            let inst = lift_instance(&raw, &space).unwrap();
            explain_forest(&forest, &space, &inst, BddConfig::default()).unwrap()
        };
        let pos = explain(3.0, 12.0);
        assert!(pos.iter().all(|e| e.decision == 1));
        let texts: Vec<String> = pos.iter().map(Explanation::text).collect();
        assert_eq!(texts, ["X∈[2, 6)", "X∈(-inf, 6) ∧ Y∈[-7, +inf)"]);
        let neg = explain(10.0, -20.0);
        let texts: Vec<String> = neg.iter().map(Explanation::text).collect();
        assert_eq!(texts, ["X∈[6, +inf)", "X∈(-inf, 2) ∪ [6, +inf) ∧ Y∈(-inf, -7)"]);
        assert!(neg.iter().all(|e| e.decision == 0));
    }

    #[test]
    fn compiled_forest_agrees_with_traversal() {
        let (forest, space) = parse_model(crate::ingest::tests::SAMPLE_TREE).unwrap();
        let compiled = CompiledForest::new(&forest, &space, BddConfig::default()).unwrap();
        for inst in space.mv_space().instances() {
            assert_eq!(compiled.classify(&inst).unwrap(), forest.classify(&inst, &space).unwrap());
        }
    }

    #[test]
    fn json_report_shape() {
        let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).unwrap();
        let f = MvExpression::or([lit(&space, 1, &[1]), lit(&space, 0, &[3])]);
        let inst = Instance::new(&space, vec![1, 2]).unwrap();
        let ex = explain_expression(&f, &space, &inst, BddConfig::default()).unwrap();
        let j = explanations_json(0, instance_json(&inst, &space), &ex);
        assert_eq!(j["decision"], 0);
        assert_eq!(j["explanations"][0]["features"]["X"]["values"], json!([1, 2]));
        assert_eq!(j["instance"]["Y"]["label"], "y2");
    }
}
