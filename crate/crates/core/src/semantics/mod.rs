//! The three semantics of modular systems.
//!
//! Both the model-theoretic and the operational engine work on a [`Plan`]:
//! the expression compiled against a bitmask [`Universe`] over τ, with every
//! node's σ and ε turned into masks.

pub mod inference;
pub mod mt;
pub mod op;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::algebra::{check_wellformed, signature_of, ExprPath, ModuleExpr};
use crate::error::{Error, Result};
use crate::primitive::{PrimitiveModule, Signature};
use crate::structures::{Domain, Structure, Vocabulary};
use crate::universe::{Mask, Universe};

pub use inference::{
    ent_inferences, inf_models, module_from_inferences, parse_inferences, propagate, propagate_in_order,
    Inference, InferenceModule, InferenceSet, Propagation,
};
pub use mt::{expand, mt_models};
pub use op::{default_tau, derivation_trace, is_fixpoint, op_models, replay, step, DerivationTree, OpEngine};

/// A set of models of a system: structures over σ∪ε, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    pub signature: Signature,
    pub domain: Domain,
    pub structures: Vec<Structure>,
}

impl ModelSet {
    pub(crate) fn new(signature: Signature, domain: Domain, structures: impl IntoIterator<Item = Structure>) -> Self {
        let set: BTreeSet<Structure> = structures.into_iter().collect();
        Self { signature, domain, structures: set.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn contains(&self, s: &Structure) -> bool {
        self.structures.binary_search(s).is_ok()
    }

    /// One canonical structure per line.
    pub fn lines(&self) -> Vec<String> {
        self.structures.iter().map(Structure::canonical).collect()
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.structures {
            writeln!(f, "{}", s.canonical())?;
        }
        Ok(())
    }
}

pub(crate) struct Node {
    pub kind: Kind,
    pub sig: Signature,
    pub sigma: Mask,
    pub eps: Mask,
    pub path: ExprPath,
    pub text: String,
}

pub(crate) enum Kind {
    Prim {
        name: String,
        module: Arc<dyn PrimitiveModule>,
        cache: RwLock<HashMap<Mask, Arc<Vec<Mask>>>>,
    },
    Project {
        /// Bits kept visible.
        nu: Mask,
        /// Child bits projected away.
        hidden: Mask,
        child: Box<Node>,
    },
    Compose(Box<Node>, Box<Node>),
    Union(Box<Node>, Box<Node>),
    Feedback {
        input: String,
        output: String,
        pairs: Vec<(usize, usize)>,
        child: Box<Node>,
    },
    Complement {
        child: Box<Node>,
        /// Operational models of the child over its own vocabulary.
        child_models: OnceLock<std::result::Result<HashSet<Mask>, Error>>,
    },
}

impl Node {
    pub fn vocab(&self) -> Mask {
        self.sigma | self.eps
    }

    pub fn children(&self) -> Vec<&Node> {
        match &self.kind {
            Kind::Prim { .. } => vec![],
            Kind::Project { child, .. } | Kind::Feedback { child, .. } | Kind::Complement { child, .. } => {
                vec![child]
            }
            Kind::Compose(l, r) | Kind::Union(l, r) => vec![l, r],
        }
    }

    pub fn at(&self, path: &ExprPath) -> Option<&Node> {
        path.0.iter().try_fold(self, |n, &i| n.children().get(i).copied())
    }
}

/// An expression compiled over a fixed τ and domain.
pub(crate) struct Plan {
    pub universe: Universe,
    pub root: Node,
}

impl Plan {
    pub fn new(e: &ModuleExpr, tau: &Vocabulary, domain: &Domain) -> Result<Self> {
        let report = check_wellformed(e);
        if !report.ok() {
            return Err(Error::IllFormed(report.to_string()));
        }
        let used = e.all_symbols()?;
        if !used.is_subset(tau) {
            return Err(Error::VocabularyMismatch(format!(
                "tau {tau} must contain every symbol of the system, {used}"
            )));
        }
        let universe = Universe::new(tau, domain)?;
        let root = build(e, &universe, ExprPath::root())?;
        Ok(Self { universe, root })
    }

    /// Expansions of a primitive node for an input given as a σ-mask.
    pub fn expansions(&self, node: &Node, input: Mask) -> Result<Arc<Vec<Mask>>> {
        let Kind::Prim { module, cache, .. } = &node.kind else {
            unreachable!("expansions of a non-primitive node")
        };
        if let Some(hit) = cache.read().expect("cache lock").get(&input) {
            return Ok(hit.clone());
        }
        let u = &self.universe;
        let structure = u.decode(input, &node.sig.sigma);
        let mut out = Vec::new();
        for m in module.expansions(&structure)? {
            out.push(u.encode(&m)?);
        }
        out.sort_unstable();
        out.dedup();
        let out = Arc::new(out);
        cache.write().expect("cache lock").insert(input, out.clone());
        Ok(out)
    }
}

fn build(e: &ModuleExpr, u: &Universe, path: ExprPath) -> Result<Node> {
    let sig = signature_of(e)?;
    let sigma = u.vocab_mask(&sig.sigma);
    let eps = u.vocab_mask(&sig.epsilon);
    let kind = match e {
        ModuleExpr::Prim(p) => Kind::Prim {
            name: p.name.clone(),
            module: p.module.clone(),
            cache: RwLock::new(HashMap::new()),
        },
        ModuleExpr::Project { vocab, child } => {
            let child = build(child, u, path.child(0))?;
            let nu = u.vocab_mask(vocab);
            Kind::Project { nu, hidden: child.vocab() & !nu, child: Box::new(child) }
        }
        ModuleExpr::Compose(l, r) => {
            Kind::Compose(Box::new(build(l, u, path.child(0))?), Box::new(build(r, u, path.child(1))?))
        }
        ModuleExpr::Union(l, r) => {
            Kind::Union(Box::new(build(l, u, path.child(0))?), Box::new(build(r, u, path.child(1))?))
        }
        ModuleExpr::Feedback { child, input, output } => {
            let pairs = u.symbol_bits(input).iter().copied().zip(u.symbol_bits(output).iter().copied()).collect();
            Kind::Feedback {
                input: input.clone(),
                output: output.clone(),
                pairs,
                child: Box::new(build(child, u, path.child(0))?),
            }
        }
        ModuleExpr::Complement(child) => Kind::Complement {
            child: Box::new(build(child, u, path.child(0))?),
            child_models: OnceLock::new(),
        },
    };
    Ok(Node { kind, sig, sigma, eps, path, text: e.to_string() })
}

/// True iff `R` in `a` and `S` in `b` agree tuple by tuple.
pub(crate) fn pairs_agree(pairs: &[(usize, usize)], a: Mask, b: Mask) -> bool {
    pairs.iter().all(|&(r, s)| (a >> r & 1) == (b >> s & 1))
}
