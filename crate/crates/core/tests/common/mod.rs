//! Shared test support: a seeded generator of small well-formed systems over
//! propositional explicit modules, and a naive set-based reference semantics
//! written directly from the definitions of the six operators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use modsys::algebra::{check_wellformed, signature_of, ModuleExpr};
use modsys::frontend::{ModuleKind, Span, SpecDocument};
use modsys::primitive::{ExplicitModule, PrimitiveModule, Signature};
use modsys::semantics::ModelSet;
use modsys::structures::{Domain, GroundAtom, Structure, Vocabulary};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const POOL: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
pub const MAX_PRIMS: usize = 4;

pub type Set = BTreeSet<String>;
pub type Models = BTreeSet<Set>;

pub fn set(items: &[&str]) -> Set {
    items.iter().map(|s| s.to_string()).collect()
}

/// Every subset of `v`.
pub fn subsets(v: &Set) -> Vec<Set> {
    let items: Vec<&String> = v.iter().collect();
    (0..1usize << items.len())
        .map(|bits| (0..items.len()).filter(|i| bits >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

pub fn vocab_of(s: &Set) -> Vocabulary {
    Vocabulary::props(s.iter().map(String::as_str))
}

pub fn names(v: &Vocabulary) -> Set {
    v.names().map(str::to_string).collect()
}

pub fn structure(vocab: &Set, atoms: &Set) -> Structure {
    Structure::new(vocab_of(vocab), Domain::propositional(), atoms.iter().map(|a| GroundAtom::prop(a)))
        .expect("atoms within the vocabulary")
}

pub fn true_atoms(s: &Structure) -> Set {
    s.atoms().iter().map(|a| a.symbol.name.clone()).collect()
}

pub fn model_sets(ms: &ModelSet) -> Models {
    ms.structures.iter().map(true_atoms).collect()
}

#[derive(Debug, Clone)]
pub struct RandomPrim {
    pub sigma: Set,
    pub eps: Set,
    pub models: Models,
    pub module: Arc<dyn PrimitiveModule>,
}

#[derive(Debug, Clone)]
pub struct RandomSystem {
    pub expr: ModuleExpr,
    pub prims: BTreeMap<String, RandomPrim>,
}

impl RandomSystem {
    /// A document declaring the primitives, so rendered expressions parse.
    pub fn document(&self) -> SpecDocument {
        let mut doc = SpecDocument::new(Domain::propositional());
        for (name, p) in &self.prims {
            doc.add_module(name, ModuleKind::Explicit, p.module.clone(), Span::default()).expect("fresh names");
        }
        doc
    }
}

fn pick(rng: &mut StdRng, from: &[&str], lo: usize, hi: usize) -> Set {
    let n = rng.gen_range(lo..=hi.min(from.len()));
    from.choose_multiple(rng, n).map(|s| s.to_string()).collect()
}

/// A primitive with 0–2 inputs, 1–2 outputs and a random extension.
pub fn random_prim(rng: &mut StdRng) -> RandomPrim {
    let sigma = pick(rng, &POOL, 0, 2);
    let rest: Vec<&str> = POOL.iter().copied().filter(|s| !sigma.contains(*s)).collect();
    let eps = pick(rng, &rest, 1, 2);
    let all: Set = sigma.union(&eps).cloned().collect();
    let models: Models = subsets(&all).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    let signature = Signature::new(vocab_of(&sigma), vocab_of(&eps)).expect("disjoint");
    let module = ExplicitModule::new(signature, models.iter().map(|m| structure(&all, m)))
        .expect("models over the module vocabulary")
        .into_arc();
    RandomPrim { sigma, eps, models, module }
}

struct Gen<'a> {
    rng: &'a mut StdRng,
    prims: BTreeMap<String, RandomPrim>,
}

impl Gen<'_> {
    fn leaf(&mut self) -> ModuleExpr {
        if self.prims.len() < MAX_PRIMS && (self.prims.is_empty() || self.rng.gen_bool(0.6)) {
            let name = format!("P{}", self.prims.len() + 1);
            let p = random_prim(self.rng);
            let e = ModuleExpr::prim(name.clone(), p.module.clone());
            self.prims.insert(name, p);
            return e;
        }
        let names: Vec<&String> = self.prims.keys().collect();
        let name = names.choose(self.rng).expect("at least one primitive").to_string();
        ModuleExpr::prim(name.clone(), self.prims[&name].module.clone())
    }

    fn expr(&mut self, depth: usize) -> ModuleExpr {
        if depth == 0 || self.rng.gen_bool(0.2) {
            return self.leaf();
        }
        for _ in 0..25 {
            let candidate = match self.rng.gen_range(0..5) {
                0 => {
                    let child = self.expr(depth - 1);
                    let all = names(&signature_of(&child).expect("well-formed child").vocab());
                    let keep: Vec<&str> = all.iter().map(String::as_str).collect();
                    let nu = pick(self.rng, &keep, 1, keep.len());
                    ModuleExpr::project(vocab_of(&nu), child)
                }
                1 => ModuleExpr::compose(self.expr(depth - 1), self.expr(depth - 1)),
                2 => ModuleExpr::union(self.expr(depth - 1), self.expr(depth - 1)),
                3 => {
                    let child = self.expr(depth - 1);
                    let sig = signature_of(&child).expect("well-formed child");
                    let sigma: Vec<String> = names(&sig.sigma).into_iter().collect();
                    let eps: Vec<String> = names(&sig.epsilon).into_iter().collect();
                    if sigma.is_empty() || eps.is_empty() {
                        continue;
                    }
                    let r = sigma.choose(self.rng).unwrap().clone();
                    let s = eps.choose(self.rng).unwrap().clone();
                    ModuleExpr::feedback(child, r, s)
                }
                _ => ModuleExpr::complement(self.expr(depth - 1)),
            };
            if check_wellformed(&candidate).ok() {
                return candidate;
            }
        }
        self.leaf()
    }
}

/// A well-formed system of depth at most `max_depth` over at most
/// [`MAX_PRIMS`] primitives.
pub fn random_system(rng: &mut StdRng, max_depth: usize) -> RandomSystem {
    let mut g = Gen { rng, prims: BTreeMap::new() };
    let expr = g.expr(max_depth);
    let used: BTreeSet<String> = expr.primitives().iter().map(|p| p.name.clone()).collect();
    let prims = g.prims.into_iter().filter(|(n, _)| used.contains(n)).collect();
    RandomSystem { expr, prims }
}

/// The operators occurring in `e`.
pub fn operators(e: &ModuleExpr) -> BTreeSet<&'static str> {
    let mut out = BTreeSet::from([e.operator()]);
    for c in e.children() {
        out.extend(operators(c));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub sigma: Set,
    pub eps: Set,
    pub models: Models,
}

impl Reference {
    pub fn vocab(&self) -> Set {
        self.sigma.union(&self.eps).cloned().collect()
    }
}

fn restrict(b: &Set, v: &Set) -> Set {
    b.intersection(v).cloned().collect()
}

/// Model sets computed by brute force from the operator definitions.
pub fn reference(e: &ModuleExpr, prims: &BTreeMap<String, RandomPrim>) -> Reference {
    match e {
        ModuleExpr::Prim(p) => {
            let rp = &prims[&p.name];
            Reference { sigma: rp.sigma.clone(), eps: rp.eps.clone(), models: rp.models.clone() }
        }
        ModuleExpr::Project { vocab, child } => {
            let c = reference(child, prims);
            let nu = names(vocab);
            Reference {
                sigma: restrict(&c.sigma, &nu),
                eps: restrict(&c.eps, &nu),
                models: c.models.iter().map(|b| restrict(b, &nu)).collect(),
            }
        }
        ModuleExpr::Compose(l, r) | ModuleExpr::Union(l, r) => {
            let (a, b) = (reference(l, prims), reference(r, prims));
            let is_compose = matches!(e, ModuleExpr::Compose(..));
            let sigma: Set = if is_compose {
                a.sigma.union(&b.sigma.difference(&a.eps).cloned().collect()).cloned().collect()
            } else {
                a.sigma.union(&b.sigma).cloned().collect()
            };
            let eps: Set = a.eps.union(&b.eps).cloned().collect();
            let all: Set = sigma.union(&eps).cloned().collect();
            let (va, vb) = (a.vocab(), b.vocab());
            let models = subsets(&all)
                .into_iter()
                .filter(|s| {
                    let (in_a, in_b) = (a.models.contains(&restrict(s, &va)), b.models.contains(&restrict(s, &vb)));
                    if is_compose {
                        in_a && in_b
                    } else {
                        in_a || in_b
                    }
                })
                .collect();
            Reference { sigma, eps, models }
        }
        ModuleExpr::Feedback { child, input, output } => {
            let c = reference(child, prims);
            let mut sigma = c.sigma.clone();
            sigma.remove(input);
            let mut eps = c.eps.clone();
            eps.insert(input.clone());
            let models = c.models.into_iter().filter(|b| b.contains(input) == b.contains(output)).collect();
            Reference { sigma, eps, models }
        }
        ModuleExpr::Complement(child) => {
            let c = reference(child, prims);
            let models = subsets(&c.vocab()).into_iter().filter(|b| !c.models.contains(b)).collect();
            Reference { models, ..c }
        }
    }
}

/// A random CNF over the first `n` atoms of [`POOL`], with its models found
/// by truth table. Clauses are lists of `(atom, polarity)`.
pub fn random_theory(rng: &mut StdRng, n: usize) -> (Set, Vec<Vec<(String, bool)>>, Models) {
    let atoms: Set = POOL[..n].iter().map(|s| s.to_string()).collect();
    let clauses: Vec<Vec<(String, bool)>> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let width = rng.gen_range(1..=3.min(n));
            POOL[..n].choose_multiple(rng, width).map(|a| (a.to_string(), rng.gen_bool(0.5))).collect()
        })
        .collect();
    let models = subsets(&atoms)
        .into_iter()
        .filter(|t| clauses.iter().all(|c| c.iter().any(|(a, pos)| t.contains(a) == *pos)))
        .collect();
    (atoms, clauses, models)
}

/// Literals as `(atom, polarity)`; true iff `model` agrees with all of them.
pub fn agrees(model: &Set, lits: &[(String, bool)]) -> bool {
    lits.iter().all(|(a, pos)| model.contains(a) == *pos)
}
