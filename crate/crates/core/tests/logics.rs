mod common;

use std::collections::BTreeSet;

use common::{set, structure, subsets, true_atoms, vocab_of, Models, Set};
use modsys::frontend::{parse_prop, parse_rules};
use modsys::logics::{prop_models, stable_models, well_founded_model, LogicProgram, Semantics};
use modsys::structures::{Domain, GroundAtom};
use proptest::prelude::*;

const INPUTS: [&str; 2] = ["p", "q"];
const OUTPUTS: [&str; 4] = ["a", "b", "c", "d"];

#[derive(Debug, Clone)]
enum Rule {
    Normal { head: String, pos: Vec<String>, neg: Vec<String> },
    Choice { heads: Vec<String>, pos: Vec<String>, neg: Vec<String> },
}

impl Rule {
    fn body(&self) -> (&[String], &[String]) {
        match self {
            Rule::Normal { pos, neg, .. } | Rule::Choice { pos, neg, .. } => (pos, neg),
        }
    }

    fn text(&self) -> String {
        let (pos, neg) = self.body();
        let body: Vec<String> = pos.iter().cloned().chain(neg.iter().map(|n| format!("not {n}"))).collect();
        let head = match self {
            Rule::Normal { head, .. } => head.clone(),
            Rule::Choice { heads, .. } => format!("{{{}}}", heads.join("; ")),
        };
        if body.is_empty() {
            format!("{head}.")
        } else {
            format!("{head} :- {}.", body.join(", "))
        }
    }
}

fn name() -> impl Strategy<Value = String> {
    proptest::sample::select(INPUTS.iter().chain(OUTPUTS.iter()).copied().collect::<Vec<_>>()).prop_map(String::from)
}

fn output() -> impl Strategy<Value = String> {
    proptest::sample::select(OUTPUTS.to_vec()).prop_map(String::from)
}

fn body() -> impl Strategy<Value = (Vec<String>, Vec<String>)> {
    (proptest::collection::vec(name(), 0..3), proptest::collection::vec(name(), 0..2))
}

fn rule(choice: bool) -> impl Strategy<Value = Rule> {
    let normal = (output(), body()).prop_map(|(head, (pos, neg))| Rule::Normal { head, pos, neg });
    if choice {
        prop_oneof![
            3 => normal,
            1 => (proptest::collection::btree_set(output(), 1..3), body())
                .prop_map(|(heads, (pos, neg))| Rule::Choice { heads: heads.into_iter().collect(), pos, neg }),
        ]
        .boxed()
    } else {
        normal.boxed()
    }
}

fn program(choice: bool) -> impl Strategy<Value = Vec<Rule>> {
    proptest::collection::vec(rule(choice), 1..7)
}

fn facts() -> impl Strategy<Value = Set> {
    proptest::collection::btree_set(proptest::sample::select(INPUTS.to_vec()).prop_map(String::from), 0..=2)
}

fn build(rules: &[Rule], semantics: Semantics) -> LogicProgram {
    let text: String = rules.iter().map(Rule::text).collect::<Vec<_>>().join(" ");
    let parsed = parse_rules(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
    LogicProgram::new(parsed, semantics, vocab_of(&set(&INPUTS)), vocab_of(&set(&OUTPUTS)), Default::default())
        .unwrap()
}

fn input(f: &Set) -> modsys::structures::Structure {
    structure(&set(&INPUTS), f)
}

/// Least model of the reduct of `rules ∪ facts` relative to `i`.
fn reduct_least_model(rules: &[Rule], facts: &Set, i: &Set) -> Set {
    let mut m = facts.clone();
    loop {
        let before = m.len();
        for r in rules {
            let (pos, neg) = r.body();
            if neg.iter().any(|n| i.contains(n)) || !pos.iter().all(|p| m.contains(p)) {
                continue;
            }
            match r {
                Rule::Normal { head, .. } => {
                    m.insert(head.clone());
                }
                Rule::Choice { heads, .. } => m.extend(heads.iter().filter(|h| i.contains(*h)).cloned()),
            }
        }
        if m.len() == before {
            return m;
        }
    }
}

/// Stable models by guessing every output set and checking the reduct.
fn oracle_stable(rules: &[Rule], facts: &Set) -> Models {
    subsets(&set(&OUTPUTS))
        .into_iter()
        .map(|m| m.union(facts).cloned().collect::<Set>())
        .filter(|i| &reduct_least_model(rules, facts, i) == i)
        .collect()
}

fn satisfies(rules: &[Rule], i: &Set) -> bool {
    rules.iter().all(|r| {
        let (pos, neg) = r.body();
        let body = pos.iter().all(|p| i.contains(p)) && !neg.iter().any(|n| i.contains(n));
        match r {
            Rule::Normal { head, .. } => !body || i.contains(head),
            Rule::Choice { .. } => true,
        }
    })
}

fn engine_stable(rules: &[Rule], f: &Set) -> Models {
    stable_models(&build(rules, Semantics::Stable), &input(f)).unwrap().iter().map(true_atoms).collect()
}

fn atom_names(s: &BTreeSet<GroundAtom>) -> Set {
    s.iter().map(|a| a.symbol.name.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stable_models_match_the_reduct_oracle(rules in program(true), f in facts()) {
        prop_assert_eq!(engine_stable(&rules, &f), oracle_stable(&rules, &f));
    }

    #[test]
    fn stable_models_are_classical_models(rules in program(true), f in facts()) {
        for m in engine_stable(&rules, &f) {
            prop_assert!(satisfies(&rules, &m), "{:?} violates a rule", m);
            prop_assert_eq!(m.intersection(&set(&INPUTS)).cloned().collect::<Set>(), f.clone());
        }
    }

    #[test]
    fn negation_free_programs_have_one_model(rules in program(false), f in facts()) {
        let positive: Vec<Rule> = rules
            .into_iter()
            .map(|r| match r {
                Rule::Normal { head, pos, .. } => Rule::Normal { head, pos, neg: vec![] },
                other => other,
            })
            .collect();
        let least = reduct_least_model(&positive, &f, &Set::new());
        prop_assert_eq!(engine_stable(&positive, &f), Models::from([least.clone()]));
        let wf = well_founded_model(&build(&positive, Semantics::WellFounded), &input(&f)).unwrap();
        prop_assert!(wf.is_total());
        prop_assert_eq!(atom_names(&wf.true_atoms), least);
    }

    #[test]
    fn well_founded_model_approximates_stable_models(rules in program(false), f in facts()) {
        let wf = well_founded_model(&build(&rules, Semantics::WellFounded), &input(&f)).unwrap();
        let (t, fls) = (atom_names(&wf.true_atoms), atom_names(&wf.false_atoms));
        let sms = oracle_stable(&rules, &f);
        for m in &sms {
            prop_assert!(t.is_subset(m), "{:?} misses well-founded truths {:?}", m, t);
            prop_assert!(fls.is_disjoint(m), "{:?} contains well-founded falsities {:?}", m, fls);
        }
        if wf.is_total() {
            prop_assert_eq!(sms, Models::from([t]));
        }
    }
}

#[derive(Debug, Clone)]
enum Formula {
    Atom(&'static str),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    fn text(&self) -> String {
        match self {
            Formula::Atom(a) => a.to_string(),
            Formula::Not(f) => format!("~({})", f.text()),
            Formula::And(a, b) => format!("({}) & ({})", a.text(), b.text()),
            Formula::Or(a, b) => format!("({}) | ({})", a.text(), b.text()),
            Formula::Implies(a, b) => format!("({}) -> ({})", a.text(), b.text()),
            Formula::Iff(a, b) => format!("({}) <-> ({})", a.text(), b.text()),
        }
    }

    fn eval(&self, t: &Set) -> bool {
        match self {
            Formula::Atom(a) => t.contains(*a),
            Formula::Not(f) => !f.eval(t),
            Formula::And(a, b) => a.eval(t) && b.eval(t),
            Formula::Or(a, b) => a.eval(t) || b.eval(t),
            Formula::Implies(a, b) => !a.eval(t) || b.eval(t),
            Formula::Iff(a, b) => a.eval(t) == b.eval(t),
        }
    }
}

const PROPS: [&str; 4] = ["a", "b", "c", "d"];

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = proptest::sample::select(PROPS.to_vec()).prop_map(Formula::Atom);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
        ]
    })
}

fn engine_prop(text: &str) -> Models {
    let phi = parse_prop(text).unwrap();
    prop_models(&phi, &vocab_of(&set(&PROPS)), &Domain::propositional()).unwrap().iter().map(true_atoms).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn prop_models_match_truth_tables(f in formula()) {
        let want: Models = subsets(&set(&PROPS)).into_iter().filter(|t| f.eval(t)).collect();
        prop_assert_eq!(engine_prop(&f.text()), want);
    }

    #[test]
    fn negation_complements_models(f in formula()) {
        let pos = engine_prop(&f.text());
        let neg = engine_prop(&format!("~({})", f.text()));
        prop_assert!(pos.is_disjoint(&neg));
        prop_assert_eq!(pos.len() + neg.len(), 1 << PROPS.len());
    }

    #[test]
    fn formulas_render_and_parse_back(f in formula()) {
        let phi = parse_prop(&f.text()).unwrap();
        prop_assert_eq!(parse_prop(&phi.to_string()).unwrap(), phi);
    }
}
