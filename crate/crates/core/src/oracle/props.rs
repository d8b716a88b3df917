//! One randomized trial per property. A trial returns `Some(details)` when
//! the two sides disagree.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use super::boolean::boolean_primes_bruteforce;
use super::{gen, Limits};
use crate::boolfn::{Bdd, BddManager};
use crate::encode::{
    assignment_of, build_constraints, decode_negative_term, encode_expression, encode_instance_full, encode_term,
    BoolExpression, BoolTerm, VarMap,
};
use crate::error::Result;
use crate::ingest::parse_model;
use crate::mvl::{
    is_implicant, prime_implicants_bruteforce, Instance, MvExpression, MvLiteral, MvSpace, MvTerm,
};
use crate::pi::{enumerate_negative_primes, guard_with_constraints, negative_primes, prime_implicants, CompiledForest};

pub(super) type Trial = fn(&mut ChaCha8Rng, &Limits) -> Result<Option<Json>>;

fn domains(space: &MvSpace) -> Json {
    json!(space.vars().iter().map(|v| v.domain_size()).collect::<Vec<_>>())
}

fn show_terms(terms: &[MvTerm], space: &MvSpace) -> Json {
    json!(terms.iter().map(|t| t.display(space).to_string()).collect::<Vec<_>>())
}

fn show_bool_terms(terms: &[BoolTerm], map: &VarMap) -> Json {
    json!(terms.iter().map(|t| t.display(map).to_string()).collect::<Vec<_>>())
}

/// Exactly one indicator of every variable is set.
fn exactly_one(a: &[bool], map: &VarMap) -> bool {
    (0..map.space().len()).all(|var| map.indicators(var).iter().filter(|bv| a[bv.index()]).count() == 1)
}

fn assignments(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |bits| (0..n).map(|i| bits >> i & 1 == 1).collect())
}

/// `ρ ⊨_Ψ Γ`: every completion of `ρ` satisfying Ψ satisfies `Γ`.
fn implies_under_constraints(rho: &BoolTerm, gamma: &BoolExpression, map: &VarMap) -> bool {
    assignments(map.len())
        .filter(|a| rho.satisfied_by(a) && exactly_one(a, map))
        .all(|a| gamma.evaluate(&a))
}

/// `ρ ⊨ Γ` over every completion.
fn implies_plain(rho: &BoolTerm, gamma: &BoolExpression, map: &VarMap) -> bool {
    assignments(map.len()).filter(|a| rho.satisfied_by(a)).all(|a| gamma.evaluate(&a))
}

fn compile_guarded(m: &mut BddManager, expr: &BoolExpression, map: &VarMap) -> Result<Bdd> {
    let f = m.compile(expr)?;
    guard_with_constraints(m, f, map)
}

/// Decoding inverts encoding, and entailment between terms matches literal
/// inclusion between their encodings.
pub(super) fn prop1(rng: &mut ChaCha8Rng, _limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let t1 = gen::term(rng, &space);
    let t2 = gen::term(rng, &space);
    let r1 = encode_term(&t1, &map)?;
    let r2 = encode_term(&t2, &map)?;
    let back = decode_negative_term(&r1, &map)?;
    let entails = t1.completions(&space).all(|inst| t2.is_consistent_with(&inst));
    let included = r2.is_subterm_of(&r1);
    let equivalent = entails && t2.completions(&space).all(|inst| t1.is_consistent_with(&inst));
    if back != t1 || entails != included || equivalent != (r1 == r2) {
        return Ok(Some(json!({
            "domains": domains(&space),
            "tau1": t1.display(&space).to_string(),
            "tau2": t2.display(&space).to_string(),
            "decoded": back.display(&space).to_string(),
            "tau1_entails_tau2": entails,
            "encoding_inclusion": included,
        })));
    }
    Ok(None)
}

pub(super) fn prop2(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let rho = gen::negative_term(rng, &map);
    let gamma = gen::bool_expression(rng, map.len() as u32);
    let lhs = implies_under_constraints(&rho, &gamma, &map);
    let mut m = BddManager::new(limits.bdd);
    let guarded = compile_guarded(&mut m, &gamma, &map)?;
    let rhs = m.term_implies(&rho, guarded);
    if lhs != rhs {
        return Ok(Some(json!({
            "domains": domains(&space),
            "rho": rho.display(&map).to_string(),
            "gamma": gamma.display(&map).to_string(),
            "implies_under_constraints": lhs,
            "implies_guarded": rhs,
        })));
    }
    Ok(None)
}

pub(super) fn prop3(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let delta = gen::expression(rng, &space);
    let tau = gen::term(rng, &space);
    let lhs = is_implicant(&tau, &delta, &space, limits.cap)?;
    let mut m = BddManager::new(limits.bdd);
    let gamma = compile_guarded(&mut m, &encode_expression(&delta, &map), &map)?;
    let rhs = m.term_implies(&encode_term(&tau, &map)?, gamma);
    if lhs != rhs {
        return Ok(Some(json!({
            "domains": domains(&space),
            "delta": delta.display(&space).to_string(),
            "tau": tau.display(&space).to_string(),
            "implicant": lhs,
            "encoded_implicant": rhs,
        })));
    }
    Ok(None)
}

/// Negative consistent primes of `Ψ ⇒ Δ_b` decode to primes of `Δ`, and
/// every prime of `Δ` encodes to one of them.
pub(super) fn prop4(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let delta = gen::expression(rng, &space);
    let oracle = prime_implicants_bruteforce(&delta, &space, limits.cap)?;
    let mut m = BddManager::new(limits.bdd);
    let gamma = compile_guarded(&mut m, &encode_expression(&delta, &map), &map)?;
    let rhos = enumerate_negative_primes(&mut m, gamma, &map)?;
    let decoded: Vec<MvTerm> = rhos
        .iter()
        .map(|r| decode_negative_term(r, &map))
        .collect::<Result<_>>()?;
    let forward = decoded.iter().all(|t| oracle.contains(t));
    let encoded: Vec<BoolTerm> = oracle.iter().map(|t| encode_term(t, &map)).collect::<Result<_>>()?;
    let backward = encoded.iter().all(|r| rhos.contains(r));
    let same: bool = decoded.iter().collect::<BTreeSet<_>>() == oracle.iter().collect::<BTreeSet<_>>();
    if !(forward && backward && same) {
        return Ok(Some(json!({
            "domains": domains(&space),
            "delta": delta.display(&space).to_string(),
            "oracle": show_terms(&oracle, &space),
            "boolean_primes": show_bool_terms(&rhos, &map),
            "decoded": show_terms(&decoded, &space),
        })));
    }
    Ok(None)
}

pub(super) fn lemma1(rng: &mut ChaCha8Rng, _limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let delta = gen::expression(rng, &space);
    let alpha = gen::instance(rng, &space);
    let lhs = delta.evaluate(&alpha)?;
    let full = encode_instance_full(&alpha, &map)?;
    let rhs = encode_expression(&delta, &map).evaluate(&assignment_of(&full, &map));
    if lhs != rhs {
        return Ok(Some(json!({
            "domains": domains(&space),
            "delta": delta.display(&space).to_string(),
            "instance": alpha.values(),
            "value": lhs,
            "encoded_value": rhs,
        })));
    }
    Ok(None)
}

/// The constraint-satisfying completions of `τ_b` are the encodings of the
/// completions of `τ`, one each.
pub(super) fn lemma2(rng: &mut ChaCha8Rng, _limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let tau = gen::term(rng, &space);
    let rho = encode_term(&tau, &map)?;
    let completions: Vec<Vec<bool>> = assignments(map.len())
        .filter(|a| rho.satisfied_by(a) && exactly_one(a, &map))
        .collect();
    let decoded: BTreeSet<Vec<u32>> = completions
        .iter()
        .map(|a| {
            (0..space.len())
                .map(|var| {
                    let pos = map.indicators(var).iter().position(|bv| a[bv.index()]).expect("one set");
                    pos as u32 + 1
                })
                .collect()
        })
        .collect();
    let expected: BTreeSet<Vec<u32>> = tau.completions(&space).map(|i| i.values().to_vec()).collect();
    let count = tau.completion_count(&space);
    if decoded != expected || completions.len() != decoded.len() || count != completions.len() as u128 {
        return Ok(Some(json!({
            "domains": domains(&space),
            "tau": tau.display(&space).to_string(),
            "boolean_completions": completions.len(),
            "multi_valued_completions": count,
        })));
    }
    Ok(None)
}

/// Plain entailment implies entailment under the constraints, and the latter
/// equals entailment of `Γ` by `ρ ∧ Ψ`.
pub(super) fn def1(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    let rho = gen::negative_term(rng, &map);
    let gamma = gen::bool_expression(rng, map.len() as u32);
    let under = implies_under_constraints(&rho, &gamma, &map);
    let plain = implies_plain(&rho, &gamma, &map);
    let mut m = BddManager::new(limits.bdd);
    let psi = m.compile(&build_constraints(&map).all())?;
    let g = m.compile(&gamma)?;
    let ng = m.negate(g)?;
    let r = m.term(&rho)?;
    let counter = m.and_all([r, psi, ng])?;
    let conjoined = counter == Bdd::FALSE;
    if (plain && !under) || under != conjoined {
        return Ok(Some(json!({
            "domains": domains(&space),
            "rho": rho.display(&map).to_string(),
            "gamma": gamma.display(&map).to_string(),
            "entails": plain,
            "entails_under_constraints": under,
            "conjunction_entails": conjoined,
        })));
    }
    Ok(None)
}

/// The converse of "plain entailment implies constrained entailment" fails:
/// `ρ = ¬x2¬x3` with `Γ = Δ_b ∧ Ψ` for `Δ = X=x1 ∨ Y=y1` over ternary
/// variables. Returns both entailments and a completion of `ρ` falsifying
/// `Γ` that breaks as few exactly-one constraints as possible.
pub fn def1_witness() -> (bool, bool, String) {
    let space = MvSpace::indexed(&[("X", 3), ("Y", 3)]).expect("valid space");
    let map = VarMap::one_hot(&space);
    let x = &space.vars()[0];
    let y = &space.vars()[1];
    let delta = MvExpression::or([
        MvExpression::lit(MvLiteral::eq(x, 1).expect("valid")),
        MvExpression::lit(MvLiteral::eq(y, 1).expect("valid")),
    ]);
    let gamma = BoolExpression::And(vec![encode_expression(&delta, &map), build_constraints(&map).all()]);
    let x1 = MvTerm::from_literals([MvLiteral::eq(x, 1).expect("valid")]).expect("term");
    let rho = encode_term(&x1, &map).expect("one-hot");
    let under = implies_under_constraints(&rho, &gamma, &map);
    let plain = implies_plain(&rho, &gamma, &map);
    let broken = |a: &Vec<bool>| {
        (0..space.len())
            .filter(|&v| map.indicators(v).iter().filter(|bv| a[bv.index()]).count() != 1)
            .count()
    };
    let witness = assignments(map.len())
        .filter(|a| rho.satisfied_by(a) && !gamma.evaluate(a))
        .min_by_key(|a| (broken(a), a.iter().filter(|&&b| b).count()))
        .map(|a| {
            let full = BoolTerm::from_literals(a.iter().enumerate().map(|(i, &p)| (crate::encode::BoolVar(i as u32), p)))
                .expect("one polarity per variable");
            full.display(&map).to_string()
        })
        .unwrap_or_default();
    (under, plain, witness)
}

/// The engine's prime implicants equal the exhaustive ones, order included.
pub(super) fn pipeline(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let space = gen::space(rng);
    let delta = gen::expression(rng, &space);
    let oracle = prime_implicants_bruteforce(&delta, &space, limits.cap)?;
    let engine = prime_implicants(&delta, &space, limits.bdd)?;
    if oracle != engine {
        return Ok(Some(json!({
            "domains": domains(&space),
            "delta": delta.display(&space).to_string(),
            "oracle": show_terms(&oracle, &space),
            "engine": show_terms(&engine, &space),
        })));
    }
    Ok(None)
}

/// Negative primes found by the restricted search are exactly the negative
/// members of the unrestricted prime set, for a random function and for a
/// random guarded one-hot encoding.
pub(super) fn localization(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    use rand::Rng;
    let n = rng.random_range(2..=6u32);
    let f = gen::bool_expression(rng, n);
    let mut m = BddManager::new(limits.bdd);
    let g = m.compile(&f)?;
    let all = boolean_primes_bruteforce(n, |a| f.evaluate(a))?;
    let expected: Vec<BoolTerm> = all.into_iter().filter(BoolTerm::is_negative).collect();
    let mut found = negative_primes(&mut m, g, usize::MAX)?;
    found.sort();
    if expected != found {
        return Ok(Some(json!({
            "vars": n,
            "function": format!("{f:?}"),
            "expected": expected.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>(),
            "found": found.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>(),
        })));
    }

    let space = gen::space(rng);
    let map = VarMap::one_hot(&space);
    if map.len() > 8 {
        return Ok(None);
    }
    let delta = gen::expression(rng, &space);
    let delta_b = encode_expression(&delta, &map);
    let psi = build_constraints(&map).all();
    let gamma = compile_guarded(&mut m, &delta_b, &map)?;
    let all = boolean_primes_bruteforce(map.len() as u32, |a| !psi.evaluate(a) || delta_b.evaluate(a))?;
    let expected: Vec<BoolTerm> = all
        .into_iter()
        .filter(|t| t.is_negative() && crate::encode::is_negative_consistent(t, &map))
        .collect();
    let found = enumerate_negative_primes(&mut m, gamma, &map)?;
    if expected != found {
        return Ok(Some(json!({
            "domains": domains(&space),
            "delta": delta.display(&space).to_string(),
            "expected": show_bool_terms(&expected, &map),
            "found": show_bool_terms(&found, &map),
        })));
    }
    Ok(None)
}

/// The compiled class functions agree with vote counting on a
/// representative point of every lifted instance.
pub(super) fn majority(rng: &mut ChaCha8Rng, limits: &Limits) -> Result<Option<Json>> {
    let doc = gen::forest_document(rng);
    let (forest, space) = parse_model(&doc.to_string())?;
    let compiled = CompiledForest::new(&forest, &space, limits.bdd)?;
    for inst in space.mv_space().instances() {
        let raw = space.representative(&inst);
        let votes = forest.votes(|t| t.predict(&raw, &space))?;
        let expected = crate::ingest::Forest::winner(&votes);
        let got = compiled.classify(&inst)?;
        if got != expected {
            return Ok(Some(json!({
                "model": doc,
                "instance": instance_values(&inst),
                "votes": votes,
                "vote_winner": expected,
                "compiled": got,
            })));
        }
    }
    Ok(None)
}

fn instance_values(inst: &Instance) -> Json {
    json!(inst.values())
}
