//! Primitive modules: sets of structures with an input/output signature.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits;
use crate::structures::{enumerate_structures, restrict, Domain, Structure, Vocabulary};

/// Input (σ) and output (ε) vocabularies of a module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub sigma: Vocabulary,
    pub epsilon: Vocabulary,
}

impl Signature {
    pub fn new(sigma: Vocabulary, epsilon: Vocabulary) -> Result<Self> {
        if !sigma.is_disjoint(&epsilon) {
            return Err(Error::InvalidVocabulary(format!(
                "input {sigma} and output {epsilon} overlap"
            )));
        }
        // Also rejects one name at two arities.
        sigma.union(&epsilon)?;
        Ok(Self { sigma, epsilon })
    }

    pub fn vocab(&self) -> Vocabulary {
        self.sigma.union(&self.epsilon).expect("signature vocabularies are compatible")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma={} epsilon={}", self.sigma, self.epsilon)
    }
}

/// A model expansion task given as a set of (σ∪ε)-structures.
///
/// Implementations answer one question: which models expand a given input.
/// That keeps axiomatised modules lazy, so instance-driven evaluation only
/// solves the inputs it actually meets.
pub trait PrimitiveModule: fmt::Debug + Send + Sync {
    fn signature(&self) -> &Signature;

    /// All models over σ∪ε whose σ-part is `input`.
    fn expansions(&self, input: &Structure) -> Result<Vec<Structure>>;

    /// Short description of how the module is given, used in traces.
    fn describe(&self) -> String;
}

/// Full extension of a primitive module over `domain`, sorted.
pub fn extension(module: &dyn PrimitiveModule, domain: &Domain) -> Result<Vec<Structure>> {
    let sig = module.signature();
    limits::guard(sig.sigma.atom_count(domain))?;
    let mut out = BTreeSet::new();
    for input in enumerate_structures(&sig.sigma, domain)? {
        out.extend(module.expansions(&input)?);
    }
    Ok(out.into_iter().collect())
}

/// A module listed model by model.
#[derive(Debug, Clone)]
pub struct ExplicitModule {
    signature: Signature,
    models: BTreeSet<Structure>,
}

impl ExplicitModule {
    pub fn new(signature: Signature, models: impl IntoIterator<Item = Structure>) -> Result<Self> {
        let vocab = signature.vocab();
        let mut set = BTreeSet::new();
        for m in models {
            if m.vocab() != &vocab {
                return Err(Error::VocabularyMismatch(format!(
                    "model {m} is over {} but the module vocabulary is {vocab}",
                    m.vocab()
                )));
            }
            set.insert(m);
        }
        Ok(Self { signature, models: set })
    }

    pub fn models(&self) -> &BTreeSet<Structure> {
        &self.models
    }

    pub fn into_arc(self) -> Arc<dyn PrimitiveModule> {
        Arc::new(self)
    }
}

impl PrimitiveModule for ExplicitModule {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn expansions(&self, input: &Structure) -> Result<Vec<Structure>> {
        let mut out = Vec::new();
        for m in &self.models {
            if m.domain() == input.domain()
                && restrict(m, &self.signature.sigma)?.atoms() == input.atoms()
            {
                out.push(m.clone());
            }
        }
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("explicit set of {} structures", self.models.len())
    }
}
