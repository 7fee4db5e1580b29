mod common;

use common::{model_sets, operators, random_system, reference, structure, subsets, true_atoms, vocab_of, Set};
use modsys::algebra::{signature_of, ModuleExpr};
use modsys::semantics::{expand, mt_models, op_models, OpEngine};
use modsys::structures::{enumerate_structures, expands, Domain, Symbol, Vocabulary};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn system(seed: u64) -> common::RandomSystem {
    random_system(&mut StdRng::seed_from_u64(seed), 4)
}

fn tau_of(e: &ModuleExpr) -> Vocabulary {
    e.all_symbols().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mt_models_match_the_reference(seed in any::<u64>()) {
        let s = system(seed);
        let want = reference(&s.expr, &s.prims);
        let got = mt_models(&s.expr, &Domain::propositional()).unwrap();
        prop_assert_eq!(common::names(&got.signature.sigma), want.sigma.clone(), "{}", s.expr);
        prop_assert_eq!(common::names(&got.signature.epsilon), want.eps.clone(), "{}", s.expr);
        prop_assert_eq!(model_sets(&got), want.models, "{}", s.expr);
    }

    #[test]
    fn op_models_match_mt_models(seed in any::<u64>()) {
        let s = system(seed);
        let d = Domain::propositional();
        let mt = mt_models(&s.expr, &d).unwrap();
        let op = op_models(&s.expr, &tau_of(&s.expr), &d).unwrap();
        prop_assert_eq!(op, mt, "{}", s.expr);
    }

    #[test]
    fn every_successor_is_a_fixpoint(seed in any::<u64>()) {
        let s = system(seed);
        let tau = tau_of(&s.expr);
        let engine = OpEngine::new(&s.expr, &tau, &Domain::propositional()).unwrap();
        for b1 in enumerate_structures(&tau, &Domain::propositional()).unwrap() {
            for b2 in engine.step(&b1).unwrap() {
                prop_assert!(engine.step(&b2).unwrap().contains(&b2), "{} from {} to {}", s.expr, b1, b2);
                prop_assert!(engine.is_fixpoint(&b2).unwrap());
            }
        }
    }

    #[test]
    fn double_complement_is_identity(seed in any::<u64>()) {
        let s = system(seed);
        let d = Domain::propositional();
        let twice = ModuleExpr::complement(ModuleExpr::complement(s.expr.clone()));
        prop_assert_eq!(mt_models(&twice, &d).unwrap(), mt_models(&s.expr, &d).unwrap());
    }

    #[test]
    fn complement_partitions_all_structures(seed in any::<u64>()) {
        let s = system(seed);
        let d = Domain::propositional();
        let m = model_sets(&mt_models(&s.expr, &d).unwrap());
        let c = model_sets(&mt_models(&ModuleExpr::complement(s.expr.clone()), &d).unwrap());
        let all = reference(&s.expr, &s.prims).vocab();
        prop_assert!(m.is_disjoint(&c));
        prop_assert_eq!(m.len() + c.len(), 1usize << all.len());
    }

    #[test]
    fn projections_have_witnesses(seed in any::<u64>(), keep in proptest::collection::vec(any::<bool>(), 6)) {
        let s = system(seed);
        let d = Domain::propositional();
        let sig = signature_of(&s.expr).unwrap();
        let nu: Set = common::names(&sig.vocab()).into_iter().zip(keep).filter(|(_, k)| *k).map(|(n, _)| n).collect();
        let inner = mt_models(&s.expr, &d).unwrap();
        let projected = mt_models(&ModuleExpr::project(vocab_of(&nu), s.expr.clone()), &d).unwrap();
        for b in &projected.structures {
            prop_assert!(inner.structures.iter().any(|w| expands(w, b)), "{} has no witness", b);
        }
        let restricted: std::collections::BTreeSet<Set> =
            inner.structures.iter().map(|w| true_atoms(w).intersection(&nu).cloned().collect()).collect();
        prop_assert_eq!(model_sets(&projected), restricted);
    }

    #[test]
    fn feedback_equates_the_pair(seed in any::<u64>()) {
        let s = system(seed);
        let sig = signature_of(&s.expr).unwrap();
        let (Some(r), Some(o)) = (sig.sigma.names().next(), sig.epsilon.names().next()) else {
            return Ok(());
        };
        let e = ModuleExpr::feedback(s.expr.clone(), r, o);
        if !modsys::algebra::check_wellformed(&e).ok() {
            return Ok(());
        }
        for m in mt_models(&e, &Domain::propositional()).unwrap().structures {
            let atoms = true_atoms(&m);
            prop_assert_eq!(atoms.contains(r), atoms.contains(o));
        }
    }

    #[test]
    fn expansion_filters_the_models(seed in any::<u64>(), pick in any::<u8>()) {
        let s = system(seed);
        let d = Domain::propositional();
        let sig = signature_of(&s.expr).unwrap();
        let sigma = common::names(&sig.sigma);
        let inputs = subsets(&sigma);
        let instance = structure(&sigma, &inputs[pick as usize % inputs.len()]);
        let all = mt_models(&s.expr, &d).unwrap();
        let want: Vec<_> = all.structures.iter().filter(|b| expands(b, &instance)).cloned().collect();
        prop_assert_eq!(expand(&s.expr, &instance).unwrap().structures, want);
    }

    #[test]
    fn fresh_tau_symbols_change_nothing(seed in any::<u64>()) {
        let s = system(seed);
        let d = Domain::propositional();
        let tau = tau_of(&s.expr);
        let mut wide = tau.clone();
        wide.insert(Symbol::prop("fresh_x")).unwrap();
        wide.insert(Symbol::prop("fresh_y")).unwrap();
        prop_assert_eq!(op_models(&s.expr, &wide, &d).unwrap(), op_models(&s.expr, &tau, &d).unwrap());
    }

    #[test]
    fn rendered_expressions_parse_back(seed in any::<u64>()) {
        let s = system(seed);
        let text = s.expr.to_string();
        let parsed = s.document().parse_expr(&text).unwrap();
        prop_assert_eq!(&parsed, &s.expr, "{}", text);
        prop_assert_eq!(parsed.to_string(), text);
    }
}

#[test]
fn the_generator_exercises_every_operator() {
    let mut seen = std::collections::BTreeSet::new();
    for seed in 0..200 {
        seen.extend(operators(&system(seed).expr));
    }
    let want = std::collections::BTreeSet::from([
        "primitive",
        "projection",
        "composition",
        "union",
        "feedback",
        "complement",
    ]);
    assert_eq!(seen, want);
}
