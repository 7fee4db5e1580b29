//! Model-theoretic semantics by structural recursion.
//!
//! Evaluation is instance-directed: a node is asked only for the models
//! agreeing with a partial assignment (`fixed` bits set to `vals`). With no
//! fixed bits this is the full model set; for model expansion the instance
//! fixes σ, and composition pushes each left model's values into the right.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};

use super::{pairs_agree, Kind, ModelSet, Node, Plan};
use crate::algebra::{signature_of, ModuleExpr};
use crate::error::{Error, Result};
use crate::limits;
use crate::structures::{Domain, Structure};
use crate::universe::{popcount, subsets, Mask};

/// All models of `e` over `domain`.
pub fn mt_models(e: &ModuleExpr, domain: &Domain) -> Result<ModelSet> {
    let plan = Plan::new(e, &e.all_symbols()?, domain)?;
    let masks = eval(&plan, &plan.root, 0, 0)?;
    Ok(decode(&plan, masks, domain))
}

/// All models of `e` expanding `instance`, which must interpret exactly σ.
pub fn expand(e: &ModuleExpr, instance: &Structure) -> Result<ModelSet> {
    let sig = signature_of(e)?;
    if instance.vocab() != &sig.sigma {
        return Err(Error::VocabularyMismatch(format!(
            "instance over {} but the system reads {}",
            instance.vocab(),
            sig.sigma
        )));
    }
    let domain = instance.domain();
    let plan = Plan::new(e, &e.all_symbols()?, domain)?;
    let vals = plan.universe.encode(instance)?;
    let masks = eval(&plan, &plan.root, plan.root.sigma, vals)?;
    Ok(decode(&plan, masks, domain))
}

fn decode(plan: &Plan, masks: Vec<Mask>, domain: &Domain) -> ModelSet {
    let vocab = plan.root.sig.vocab();
    ModelSet::new(
        plan.root.sig.clone(),
        domain.clone(),
        masks.into_iter().map(|m| plan.universe.decode(m, &vocab)),
    )
}

/// Models of `node` (as masks over its vocabulary) whose `fixed` bits equal
/// those of `vals`. Fixed bits outside the node's vocabulary are ignored.
pub(crate) fn eval(plan: &Plan, node: &Node, fixed: Mask, vals: Mask) -> Result<Vec<Mask>> {
    let vocab = node.vocab();
    let fixed = fixed & vocab;
    let vals = vals & fixed;
    let agrees = |m: Mask| m & fixed == vals;
    match &node.kind {
        Kind::Prim { .. } => {
            let free = node.sigma & !fixed;
            limits::guard(popcount(free))?;
            let mut out = Vec::new();
            for s in subsets(free) {
                let input = (vals & node.sigma) | s;
                out.extend(plan.expansions(node, input)?.iter().copied().filter(|&m| agrees(m)));
            }
            Ok(out)
        }
        Kind::Project { nu, child, .. } => {
            let seen: HashSet<Mask> = eval(plan, child, fixed, vals)?.into_iter().map(|m| m & nu).collect();
            Ok(seen.into_iter().collect())
        }
        Kind::Compose(l, r) => {
            let shared = l.vocab() & r.vocab();
            let mut memo: HashMap<Mask, Vec<Mask>> = HashMap::new();
            let mut out = Vec::new();
            for ml in eval(plan, l, fixed, vals)? {
                let key = ml & shared;
                let rs = match memo.entry(key) {
                    Entry::Occupied(e) => e.into_mut(),
                    Entry::Vacant(e) => e.insert(eval(plan, r, fixed | shared, (vals & !shared) | key)?),
                };
                out.extend(rs.iter().map(|&mr| ml | mr));
            }
            Ok(out)
        }
        Kind::Union(l, r) => {
            let mut seen = HashSet::new();
            for (this, other) in [(l, r), (r, l)] {
                let off = other.vocab() & !this.vocab();
                let free = off & !fixed;
                limits::guard(popcount(free))?;
                for m in eval(plan, this, fixed, vals)? {
                    for x in subsets(free) {
                        seen.insert(m | (vals & off) | x);
                    }
                }
            }
            Ok(seen.into_iter().collect())
        }
        Kind::Feedback { pairs, child, .. } => {
            // R and S must agree, so a fixed bit on either side fixes both.
            let (mut fixed2, mut vals2) = (fixed, vals);
            for &(r, s) in pairs {
                for (from, to) in [(r, s), (s, r)] {
                    if fixed >> from & 1 == 1 {
                        fixed2 |= 1 << to;
                        vals2 |= (vals >> from & 1) << to;
                    }
                }
            }
            if vals2 & fixed != vals {
                return Ok(Vec::new());
            }
            Ok(eval(plan, child, fixed2, vals2)?.into_iter().filter(|&m| pairs_agree(pairs, m, m)).collect())
        }
        Kind::Complement { child, .. } => {
            let free = vocab & !fixed;
            limits::guard(popcount(free))?;
            let inside: HashSet<Mask> = eval(plan, child, fixed, vals)?.into_iter().collect();
            Ok(subsets(free).map(|x| vals | x).filter(|m| !inside.contains(m)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::{module_of_axioms, AtomPattern, Axioms, BodyLiteral, Logic, LogicProgram, Rule, Semantics};
    use crate::primitive::{ExplicitModule, Signature};
    use crate::structures::Vocabulary;

    fn atom(n: &str) -> AtomPattern {
        AtomPattern::prop(n)
    }

    fn m1() -> ModuleExpr {
        let p = LogicProgram::new(
            vec![
                Rule::new(atom("a'"), vec![BodyLiteral::pos(atom("i")), BodyLiteral::not(atom("b"))]),
                Rule::new(atom("b'"), vec![BodyLiteral::pos(atom("i")), BodyLiteral::not(atom("a"))]),
            ],
            Semantics::Stable,
            Vocabulary::props(["i", "a", "b"]),
            Vocabulary::props(["a'", "b'"]),
            Vocabulary::empty(),
        )
        .unwrap();
        ModuleExpr::prim("M1", module_of_axioms(Logic::Stable, Axioms::Program(p), None).unwrap().into_arc())
    }

    fn m2() -> ModuleExpr {
        ModuleExpr::feedback(ModuleExpr::feedback(m1(), "a", "a'"), "b", "b'")
    }

    fn lines(m: &ModelSet) -> Vec<String> {
        m.lines()
    }

    #[test]
    fn feedback_turns_m1_into_m2() {
        let d = Domain::propositional();
        assert_eq!(lines(&mt_models(&m2(), &d).unwrap()), ["{}", "{a,a',i}", "{b,b',i}"]);
        let p = ModuleExpr::project(Vocabulary::props(["i", "a", "b"]), m2());
        assert_eq!(lines(&mt_models(&p, &d).unwrap()), ["{}", "{a,i}", "{b,i}"]);
    }

    #[test]
    fn expand_m2_on_true_input() {
        let inst = Structure::props(&["i"], &["i"]);
        assert_eq!(lines(&expand(&m2(), &inst).unwrap()), ["{a,a',i}", "{b,b',i}"]);
        let bad = Structure::props(&["a"], &[]);
        assert!(matches!(expand(&m2(), &bad), Err(Error::VocabularyMismatch(_))));
    }

    #[test]
    fn complement_of_m0_by_subtraction() {
        let sig = Signature::new(Vocabulary::props(["i"]), Vocabulary::props(["a", "b"])).unwrap();
        let v = ["a", "b", "i"];
        let m0 = [Structure::props(&v, &[]), Structure::props(&v, &["i", "a"]), Structure::props(&v, &["i", "b"])];
        let e = ModuleExpr::prim("M0", ExplicitModule::new(sig, m0.clone()).unwrap().into_arc());
        let d = Domain::propositional();
        let comp = mt_models(&ModuleExpr::complement(e.clone()), &d).unwrap();
        // Oracle: all 8 structures minus the three models.
        let all = crate::structures::enumerate_structures(&Vocabulary::props(v), &d).unwrap();
        let expected: Vec<_> = all.into_iter().filter(|s| !m0.contains(s)).collect();
        assert_eq!(comp.structures.len(), 5);
        assert_eq!(comp.structures, {
            let mut e = expected;
            e.sort();
            e
        });
        let back = mt_models(&ModuleExpr::complement(ModuleExpr::complement(e.clone())), &d).unwrap();
        assert_eq!(back, mt_models(&e, &d).unwrap());
    }

    #[test]
    fn union_leaves_off_branch_symbols_free() {
        let d = Domain::propositional();
        let a = ExplicitModule::new(
            Signature::new(Vocabulary::empty(), Vocabulary::props(["a"])).unwrap(),
            [Structure::props(&["a"], &["a"])],
        )
        .unwrap();
        let b = ExplicitModule::new(
            Signature::new(Vocabulary::empty(), Vocabulary::props(["b"])).unwrap(),
            [Structure::props(&["b"], &["b"])],
        )
        .unwrap();
        let e = ModuleExpr::union(ModuleExpr::prim("A", a.into_arc()), ModuleExpr::prim("B", b.into_arc()));
        assert_eq!(lines(&mt_models(&e, &d).unwrap()), ["{a}", "{a,b}", "{b}"]);
    }

    #[test]
    fn ill_formed_is_rejected() {
        let a = ExplicitModule::new(Signature::new(Vocabulary::empty(), Vocabulary::props(["a"])).unwrap(), [])
            .unwrap()
            .into_arc();
        let e = ModuleExpr::compose(ModuleExpr::prim("A", a.clone()), ModuleExpr::prim("B", a));
        assert!(matches!(mt_models(&e, &Domain::propositional()), Err(Error::IllFormed(_))));
    }
}
