//! The disjunction `X∈{x1,x3}` over a four-valued `X` under each encoding.
//!
//! Under prefix and highest-bit the Boolean prime implicants of `Δ_b ∧ Ψ`
//! miss the single multi-valued prime; under one-hot the negative consistent
//! primes of `Ψ ⇒ Δ_b` recover it.

use serde_json::json;

use super::boolean::{boolean_primes_bruteforce, decode_term_exact};
use super::CheckReport;
use crate::encode::{build_constraints, encode_expression, BoolTerm, BoolVar, VarMap};
use crate::error::Result;
use crate::mvl::{prime_implicants_bruteforce, MvExpression, MvLiteral, MvSpace, MvTerm, DEFAULT_CAP};
use crate::pi::prime_implicants;

fn demo_input() -> (MvSpace, MvExpression) {
    let space = MvSpace::indexed(&[("X", 4)]).expect("valid space");
    let lit = MvLiteral::one_of(&space.vars()[0], &[1, 3]).expect("valid literal");
    (space, MvExpression::lit(lit))
}

/// Outcome of encoding the demo disjunction under one scheme.
#[derive(Debug, Clone)]
pub struct DemoOutcome {
    pub map: VarMap,
    pub boolean_primes: Vec<BoolTerm>,
    /// Exact decoding of each Boolean prime, when one exists.
    pub decoded: Vec<Option<MvTerm>>,
    pub mv_primes: Vec<MvTerm>,
    /// Boolean primes that decode to a multi-valued prime.
    pub representable: usize,
    /// Whether any Boolean implicant of `Δ_b ∧ Ψ` decodes to a multi-valued prime.
    pub any_implicant_represents: bool,
}

/// Boolean primes of `Δ_b ∧ Ψ` for the demo disjunction under `scheme`.
pub fn encoding_outcome(scheme: &str) -> Result<DemoOutcome> {
    let (space, delta) = demo_input();
    let map = VarMap::with_scheme(&space, scheme)?;
    let delta_b = encode_expression(&delta, &map);
    let psi = build_constraints(&map).all();
    let n = map.len() as u32;
    let f = |a: &[bool]| delta_b.evaluate(a) && psi.evaluate(a);
    let boolean_primes = boolean_primes_bruteforce(n, f)?;
    let decoded: Vec<Option<MvTerm>> = boolean_primes.iter().map(|t| decode_term_exact(t, &map)).collect();
    let mv_primes = prime_implicants_bruteforce(&delta, &space, DEFAULT_CAP)?;
    let representable = decoded
        .iter()
        .filter(|d| d.as_ref().is_some_and(|t| mv_primes.contains(t)))
        .count();
    let any_implicant_represents = all_terms(n)
        .filter(|t| implies(t, n, &f))
        .any(|t| decode_term_exact(&t, &map).is_some_and(|d| mv_primes.contains(&d)));
    Ok(DemoOutcome {
        map,
        boolean_primes,
        decoded,
        mv_primes,
        representable,
        any_implicant_represents,
    })
}

fn all_terms(n: u32) -> impl Iterator<Item = BoolTerm> {
    (0..3u32.pow(n)).map(move |mut code| {
        let mut t = BoolTerm::new();
        for i in 0..n {
            match code % 3 {
                1 => {
                    t.insert(BoolVar(i), false);
                }
                2 => {
                    t.insert(BoolVar(i), true);
                }
                _ => {}
            }
            code /= 3;
        }
        t
    })
}

fn implies(t: &BoolTerm, n: u32, f: &impl Fn(&[bool]) -> bool) -> bool {
    (0..1u32 << n)
        .map(|bits| (0..n).map(|i| bits >> i & 1 == 1).collect::<Vec<bool>>())
        .filter(|a| t.satisfied_by(a))
        .all(|a| f(&a))
}

fn outcome_report(name: &str, o: &DemoOutcome, failures: Vec<String>) -> CheckReport {
    let space = o.map.space();
    let primes: Vec<String> = o.boolean_primes.iter().map(|t| t.display(&o.map).to_string()).collect();
    let decoded: Vec<Option<String>> = o
        .decoded
        .iter()
        .map(|d| d.as_ref().map(|t| t.display(space).to_string()))
        .collect();
    let mv: Vec<String> = o.mv_primes.iter().map(|t| t.display(space).to_string()).collect();
    let mut notes = vec![format!("multi-valued primes: {}", mv.join("; "))];
    for (p, d) in primes.iter().zip(&decoded) {
        notes.push(format!("Boolean prime {p} -> {}", d.as_deref().unwrap_or("no multi-valued term")));
    }
    notes.push(format!("representable primes: {}", o.representable));
    CheckReport {
        name: name.to_string(),
        trials: 1,
        seed: 0,
        failures: failures.into_iter().map(|f| json!({ "reason": f })).collect(),
        notes,
        details: json!({
            "scheme": o.map.scheme(),
            "boolean_primes": primes,
            "decoded": decoded,
            "mv_primes": mv,
            "representable": o.representable,
        }),
    }
}

/// Prefix: no Boolean term implying `Δ_b ∧ Ψ` stands for `X∈{x1,x3}`.
pub fn demo_prefix_failure() -> Result<CheckReport> {
    let o = encoding_outcome("prefix")?;
    let mut failures = Vec::new();
    if o.mv_primes.len() != 1 {
        failures.push(format!("expected one multi-valued prime, got {}", o.mv_primes.len()));
    }
    if o.representable != 0 || o.any_implicant_represents {
        failures.push("a Boolean term represents the multi-valued prime".to_string());
    }
    Ok(outcome_report("prefix", &o, failures))
}

/// Highest-bit: exactly `¬x2¬x4` and `x3¬x4`, the first standing for no
/// multi-valued term and the second for the non-prime `X=x3`.
pub fn demo_highest_bit_failure() -> Result<CheckReport> {
    let o = encoding_outcome("highest_bit")?;
    let mut failures = Vec::new();
    let shown: Vec<String> = o.boolean_primes.iter().map(|t| t.display(&o.map).to_string()).collect();
    if shown != ["¬X#2 ¬X#4", "X#3 ¬X#4"] {
        failures.push(format!("unexpected Boolean primes {shown:?}"));
    }
    let decoded: Vec<Option<String>> = o
        .decoded
        .iter()
        .map(|d| d.as_ref().map(|t| t.display(o.map.space()).to_string()))
        .collect();
    if decoded != [None, Some("X=x3".to_string())] {
        failures.push(format!("unexpected decodings {decoded:?}"));
    }
    if o.representable != 0 {
        failures.push("a Boolean prime represents the multi-valued prime".to_string());
    }
    Ok(outcome_report("highest_bit", &o, failures))
}

/// One-hot: the pipeline returns the multi-valued prime itself.
pub fn demo_one_hot_control() -> Result<CheckReport> {
    let (space, delta) = demo_input();
    let map = VarMap::one_hot(&space);
    let engine = prime_implicants(&delta, &space, Default::default())?;
    let oracle = prime_implicants_bruteforce(&delta, &space, DEFAULT_CAP)?;
    let encoded: Vec<String> = engine
        .iter()
        .map(|t| crate::encode::encode_term(t, &map).map(|r| r.display(&map).to_string()))
        .collect::<Result<_>>()?;
    let shown: Vec<String> = engine.iter().map(|t| t.display(&space).to_string()).collect();
    let mut failures = Vec::new();
    if engine != oracle {
        failures.push("pipeline primes differ from the exhaustive primes".to_string());
    }
    if encoded != ["¬X#2 ¬X#4"] {
        failures.push(format!("unexpected Boolean primes {encoded:?}"));
    }
    Ok(CheckReport {
        name: "one_hot".to_string(),
        trials: 1,
        seed: 0,
        failures: failures.into_iter().map(|f| json!({ "reason": f })).collect(),
        notes: encoded
            .iter()
            .zip(&shown)
            .map(|(b, m)| format!("Boolean prime {b} -> {m}"))
            .collect(),
        details: json!({"scheme": "one_hot", "boolean_primes": encoded, "mv_primes": shown}),
    })
}
