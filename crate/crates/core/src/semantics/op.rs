//! Structural operational semantics: modules as nondeterministic operators
//! on τ-states.
//!
//! Every transition changes only the bits of the node's ε; the rules differ
//! in how the new ε-values are chosen:
//!
//! * primitive: `B2|σ∪ε ∈ M`, everything else kept;
//! * projection: the child runs from a state that may disagree with `B1` on
//!   the hidden symbols, and only the visible outputs are copied back;
//! * composition: the right module runs on the left module's result;
//! * union: either side's transition;
//! * feedback: a child transition with `R` before equal to `S` after;
//! * complement: any new ε-values whose observable pair `(B1|σ, B2|ε)` is
//!   not produced by the child.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use super::{pairs_agree, Kind, ModelSet, Node, Plan};
use crate::algebra::{ExprPath, ModuleExpr};
use crate::error::{Error, Result};
use crate::limits;
use crate::structures::{Domain, Structure, Vocabulary};
use crate::universe::{popcount, subsets, Mask};

/// The minimal τ: every symbol occurring in the system, hidden ones included.
pub fn default_tau(e: &ModuleExpr) -> Result<Vocabulary> {
    e.all_symbols()
}

/// Transition relation of one expression over a fixed τ and domain.
pub struct OpEngine {
    plan: Plan,
    tau: Vocabulary,
}

impl OpEngine {
    pub fn new(e: &ModuleExpr, tau: &Vocabulary, domain: &Domain) -> Result<Self> {
        Ok(Self { plan: Plan::new(e, tau, domain)?, tau: tau.clone() })
    }

    pub fn tau(&self) -> &Vocabulary {
        &self.tau
    }

    pub fn domain(&self) -> &Domain {
        self.plan.universe.domain()
    }

    fn encode_state(&self, b: &Structure) -> Result<Mask> {
        if b.vocab() != &self.tau {
            return Err(Error::VocabularyMismatch(format!("state over {} but tau is {}", b.vocab(), self.tau)));
        }
        self.plan.universe.encode(b)
    }

    fn decode_state(&self, m: Mask) -> Structure {
        self.plan.universe.decode(m, &self.tau)
    }

    /// All `B2` with `(e, B1) ⟶ B2`, sorted.
    pub fn step(&self, b1: &Structure) -> Result<Vec<Structure>> {
        let m = self.encode_state(b1)?;
        let mut out: Vec<Structure> =
            self.step_mask(&self.plan.root, m)?.into_iter().map(|m| self.decode_state(m)).collect();
        out.sort();
        Ok(out)
    }

    pub fn is_fixpoint(&self, b: &Structure) -> Result<bool> {
        let m = self.encode_state(b)?;
        Ok(self.step_mask(&self.plan.root, m)?.contains(&m))
    }

    /// The operational models: `(B1|σ) ∪ (B2|ε)` over every transition from
    /// every τ-state `B1`.
    pub fn op_models(&self) -> Result<ModelSet> {
        let u = &self.plan.universe;
        let n = u.len();
        limits::guard(n)?;
        let root = &self.plan.root;
        let found = (0..1u64 << n)
            .into_par_iter()
            .try_fold(HashSet::new, |mut acc, b1| {
                let b1 = b1 as Mask;
                for b2 in self.step_mask(root, b1)? {
                    acc.insert((b1 & root.sigma) | (b2 & root.eps));
                }
                Ok::<_, Error>(acc)
            })
            .try_reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                Ok(a)
            })?;
        let vocab = root.sig.vocab();
        Ok(ModelSet::new(root.sig.clone(), self.domain().clone(), found.into_iter().map(|m| u.decode(m, &vocab))))
    }

    pub(crate) fn step_mask(&self, node: &Node, b1: Mask) -> Result<Vec<Mask>> {
        let mut out = self.step_raw(node, b1)?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn step_raw(&self, node: &Node, b1: Mask) -> Result<Vec<Mask>> {
        let keep = !node.eps;
        match &node.kind {
            Kind::Prim { .. } => {
                let ms = self.plan.expansions(node, b1 & node.sigma)?;
                Ok(ms.iter().map(|&m| (b1 & keep) | (m & node.eps)).collect())
            }
            Kind::Project { hidden, child, .. } => {
                limits::guard(popcount(*hidden))?;
                let mut out = Vec::new();
                for h in subsets(*hidden) {
                    for b2 in self.step_mask(child, (b1 & !hidden) | h)? {
                        out.push((b1 & keep) | (b2 & node.eps));
                    }
                }
                Ok(out)
            }
            Kind::Compose(l, r) => {
                let mut out = Vec::new();
                for mid in self.step_mask(l, b1)? {
                    out.extend(self.step_mask(r, mid)?);
                }
                Ok(out)
            }
            Kind::Union(l, r) => {
                let mut out = self.step_mask(l, b1)?;
                out.extend(self.step_mask(r, b1)?);
                Ok(out)
            }
            Kind::Feedback { pairs, child, .. } => {
                Ok(self.step_mask(child, b1)?.into_iter().filter(|&b2| pairs_agree(pairs, b1, b2)).collect())
            }
            Kind::Complement { .. } => {
                let inside = self.child_models(node)?;
                let input = b1 & node.sigma;
                limits::guard(popcount(node.eps))?;
                Ok(subsets(node.eps)
                    .filter(|&x| !inside.contains(&(input | x)))
                    .map(|x| (b1 & keep) | x)
                    .collect())
            }
        }
    }

    /// Operational models of a complement node's child, restricted to the
    /// child's vocabulary. A transition reads only the bits of the node's
    /// vocabulary, so enumerating those bits covers every τ-state.
    fn child_models<'a>(&self, node: &'a Node) -> Result<&'a HashSet<Mask>> {
        let Kind::Complement { child, child_models } = &node.kind else {
            unreachable!("child_models of a non-complement node")
        };
        let computed = child_models.get_or_init(|| {
            let vocab = child.vocab();
            limits::guard(popcount(vocab))?;
            let mut set = HashSet::new();
            for b1 in subsets(vocab) {
                for b2 in self.step_mask(child, b1)? {
                    set.insert((b1 & child.sigma) | (b2 & child.eps));
                }
            }
            Ok(set)
        });
        computed.as_ref().map_err(Clone::clone)
    }

    /// A derivation of `(e, B1) ⟶ B2`, or `None` when none exists.
    pub fn trace(&self, b1: &Structure, b2: &Structure) -> Result<Option<DerivationTree>> {
        let (m1, m2) = (self.encode_state(b1)?, self.encode_state(b2)?);
        self.derive(&self.plan.root, m1, m2)
    }

    fn node_tree(&self, node: &Node, rule: &'static str, b1: Mask, b2: Mask) -> DerivationTree {
        DerivationTree {
            rule,
            expr: node.text.clone(),
            path: node.path.clone(),
            from: self.decode_state(b1),
            to: self.decode_state(b2),
            side_conditions: Vec::new(),
            children: Vec::new(),
        }
    }

    fn render(&self, m: Mask, vocab: Mask) -> String {
        self.plan.universe.render(m & vocab)
    }

    fn vocab_text(&self, m: Mask) -> String {
        let names: std::collections::BTreeSet<&str> =
            crate::universe::bits(m).map(|i| self.plan.universe.atoms()[i].symbol.name.as_str()).collect();
        format!("{{{}}}", names.into_iter().collect::<Vec<_>>().join(","))
    }

    fn derive(&self, node: &Node, b1: Mask, b2: Mask) -> Result<Option<DerivationTree>> {
        let frame = b1 & !node.eps == b2 & !node.eps;
        match &node.kind {
            Kind::Prim { name, .. } => {
                let model = b2 & node.vocab();
                if !frame || !self.plan.expansions(node, b1 & node.sigma)?.contains(&model) {
                    return Ok(None);
                }
                let mut t = self.node_tree(node, "prim", b1, b2);
                t.side_conditions.push(format!("B2|sigma+eps = {} in {name}", self.render(model, node.vocab())));
                t.side_conditions.push(format!("B2 = B1 off {}", self.vocab_text(node.eps)));
                Ok(Some(t))
            }
            Kind::Project { hidden, child, .. } => {
                if !frame {
                    return Ok(None);
                }
                limits::guard(popcount(*hidden))?;
                for h in subsets(*hidden) {
                    let c1 = (b1 & !hidden) | h;
                    for c2 in self.step_mask(child, c1)? {
                        if c2 & node.eps != b2 & node.eps {
                            continue;
                        }
                        if let Some(sub) = self.derive(child, c1, c2)? {
                            let mut t = self.node_tree(node, "project", b1, b2);
                            t.side_conditions.push(format!("B1' = B1 off {}", self.vocab_text(*hidden)));
                            t.side_conditions.push(format!(
                                "B2|{} = B2'|{} = {}",
                                self.vocab_text(node.eps),
                                self.vocab_text(node.eps),
                                self.render(b2, node.eps)
                            ));
                            t.children.push(sub);
                            return Ok(Some(t));
                        }
                    }
                }
                Ok(None)
            }
            Kind::Compose(l, r) => {
                if !frame {
                    return Ok(None);
                }
                for mid in self.step_mask(l, b1)? {
                    if let Some(right) = self.derive(r, mid, b2)? {
                        let left = self.derive(l, b1, mid)?.expect("step result is derivable");
                        let mut t = self.node_tree(node, "compose", b1, b2);
                        t.side_conditions.push(format!("B' = {}", self.plan.universe.render(mid)));
                        t.children = vec![left, right];
                        return Ok(Some(t));
                    }
                }
                Ok(None)
            }
            Kind::Union(l, r) => {
                for (rule, side) in [("union-left", l), ("union-right", r)] {
                    if let Some(sub) = self.derive(side, b1, b2)? {
                        let mut t = self.node_tree(node, rule, b1, b2);
                        t.children.push(sub);
                        return Ok(Some(t));
                    }
                }
                Ok(None)
            }
            Kind::Feedback { input, output, pairs, child } => {
                if !pairs_agree(pairs, b1, b2) {
                    return Ok(None);
                }
                match self.derive(child, b1, b2)? {
                    Some(sub) => {
                        let rmask = pairs.iter().fold(0, |m, &(r, _)| m | 1 << r);
                        let smask = pairs.iter().fold(0, |m, &(_, s)| m | 1 << s);
                        let mut t = self.node_tree(node, "feedback", b1, b2);
                        t.side_conditions.push(format!(
                            "{input} in B1 = {} matches {output} in B2 = {}",
                            self.render(b1, rmask),
                            self.render(b2, smask)
                        ));
                        t.children.push(sub);
                        Ok(Some(t))
                    }
                    None => Ok(None),
                }
            }
            Kind::Complement { .. } => {
                let observed = (b1 & node.sigma) | (b2 & node.eps);
                if !frame || self.child_models(node)?.contains(&observed) {
                    return Ok(None);
                }
                let mut t = self.node_tree(node, "complement", b1, b2);
                t.side_conditions.push(format!(
                    "no child transition yields {}",
                    self.render(observed, node.vocab())
                ));
                t.side_conditions.push(format!("B2 = B1 off {}", self.vocab_text(node.eps)));
                Ok(Some(t))
            }
        }
    }

    /// Re-checks every side condition of `tree` against this engine.
    pub fn replay(&self, tree: &DerivationTree) -> Result<bool> {
        let Some(node) = self.plan.root.at(&tree.path) else {
            return Ok(false);
        };
        let (b1, b2) = (self.encode_state(&tree.from)?, self.encode_state(&tree.to)?);
        let frame = b1 & !node.eps == b2 & !node.eps;
        let states = |t: &DerivationTree| -> Result<(Mask, Mask)> {
            Ok((self.encode_state(&t.from)?, self.encode_state(&t.to)?))
        };
        let child_path_ok =
            |t: &DerivationTree, i: usize| t.path == node.path.child(i);
        let ok = match (&node.kind, tree.rule, tree.children.as_slice()) {
            (Kind::Prim { .. }, "prim", []) => {
                frame && self.plan.expansions(node, b1 & node.sigma)?.contains(&(b2 & node.vocab()))
            }
            (Kind::Project { hidden, .. }, "project", [c]) => {
                let (c1, c2) = states(c)?;
                frame && child_path_ok(c, 0) && c1 & !hidden == b1 & !hidden && c2 & node.eps == b2 & node.eps
            }
            (Kind::Compose(..), "compose", [l, r]) => {
                let ((l1, l2), (r1, r2)) = (states(l)?, states(r)?);
                child_path_ok(l, 0) && child_path_ok(r, 1) && l1 == b1 && l2 == r1 && r2 == b2
            }
            (Kind::Union(..), "union-left" | "union-right", [c]) => {
                let i = usize::from(tree.rule == "union-right");
                child_path_ok(c, i) && states(c)? == (b1, b2)
            }
            (Kind::Feedback { pairs, .. }, "feedback", [c]) => {
                child_path_ok(c, 0) && pairs_agree(pairs, b1, b2) && states(c)? == (b1, b2)
            }
            (Kind::Complement { .. }, "complement", []) => {
                frame && !self.child_models(node)?.contains(&((b1 & node.sigma) | (b2 & node.eps)))
            }
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
        for c in &tree.children {
            if !self.replay(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A derivation of one transition by the operational rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree {
    /// One of `prim`, `project`, `compose`, `union-left`, `union-right`,
    /// `feedback`, `complement`.
    pub rule: &'static str,
    pub expr: String,
    pub path: ExprPath,
    pub from: Structure,
    pub to: Structure,
    pub side_conditions: Vec<String>,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        write!(f, "{pad}{} {}: {} -> {}", self.rule, self.expr, self.from.canonical(), self.to.canonical())?;
        if !self.side_conditions.is_empty() {
            write!(f, " [{}]", self.side_conditions.join("; "))?;
        }
        writeln!(f)?;
        for c in &self.children {
            c.write(f, depth + 1)?;
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }
}

impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// `step` with τ and domain taken from the state.
pub fn step(e: &ModuleExpr, b1: &Structure) -> Result<Vec<Structure>> {
    OpEngine::new(e, b1.vocab(), b1.domain())?.step(b1)
}

pub fn op_models(e: &ModuleExpr, tau: &Vocabulary, domain: &Domain) -> Result<ModelSet> {
    OpEngine::new(e, tau, domain)?.op_models()
}

pub fn is_fixpoint(e: &ModuleExpr, b: &Structure) -> Result<bool> {
    OpEngine::new(e, b.vocab(), b.domain())?.is_fixpoint(b)
}

pub fn derivation_trace(e: &ModuleExpr, b1: &Structure, b2: &Structure) -> Result<Option<DerivationTree>> {
    if b1.vocab() != b2.vocab() || b1.domain() != b2.domain() {
        return Err(Error::VocabularyMismatch("both states must be over the same tau and domain".into()));
    }
    OpEngine::new(e, b1.vocab(), b1.domain())?.trace(b1, b2)
}

/// Replays a tree produced for `e` over the tree's own τ and domain.
pub fn replay(e: &ModuleExpr, tree: &DerivationTree) -> Result<bool> {
    OpEngine::new(e, tree.from.vocab(), tree.from.domain())?.replay(tree)
}
