//! Primitive modules given by axioms in one of the supported logics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use super::program::{LogicProgram, Semantics};
use super::stable::Grounding;
use super::prop::PropFormula;
use super::{stable, wellfounded};
use crate::error::{Error, Result};
use crate::limits;
use crate::primitive::{PrimitiveModule, Signature};
use crate::structures::{restrict, Domain, Structure};
use crate::universe::{subsets, Universe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Propositional,
    Stable,
    WellFounded,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Propositional => "propositional",
            Logic::Stable => "stable",
            Logic::WellFounded => "well-founded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axioms {
    Formula(PropFormula),
    Program(LogicProgram),
}

/// A module whose models are those of its axioms, restricted to σ∪ε.
#[derive(Debug, Clone)]
pub struct AxiomModule {
    logic: Logic,
    axioms: Axioms,
    signature: Signature,
    /// Ground programs per domain; an evaluation asks for many inputs over
    /// the same domain.
    groundings: Arc<RwLock<HashMap<Domain, Arc<Grounding>>>>,
}

impl AxiomModule {
    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn axioms(&self) -> &Axioms {
        &self.axioms
    }

    pub fn into_arc(self) -> Arc<dyn PrimitiveModule> {
        Arc::new(self)
    }

    fn grounding(&self, p: &LogicProgram, domain: &Domain) -> Result<Arc<Grounding>> {
        if let Some(np) = self.groundings.read().expect("grounding cache lock").get(domain) {
            return Ok(np.clone());
        }
        let np = Arc::new(stable::grounded(p, domain)?);
        self.groundings.write().expect("grounding cache lock").insert(domain.clone(), np.clone());
        Ok(np)
    }
}

/// Builds a primitive module. For formulas `signature` is required and every
/// atom must be over σ∪ε; for programs the signature is the program's own
/// (σ, ε) and `signature`, if given, must agree with it.
pub fn module_of_axioms(logic: Logic, axioms: Axioms, signature: Option<Signature>) -> Result<AxiomModule> {
    let signature = match (&axioms, logic) {
        (Axioms::Formula(phi), Logic::Propositional) => {
            let sig = signature.ok_or_else(|| {
                Error::Precondition("a formula module needs an explicit signature".into())
            })?;
            let vocab = sig.vocab();
            for a in phi.atoms() {
                if !vocab.contains(&a.symbol) {
                    return Err(Error::SymbolLeakage(format!("{} in `{phi}` is not in {vocab}", a.symbol)));
                }
            }
            sig
        }
        (Axioms::Program(p), Logic::Stable | Logic::WellFounded) => {
            let wanted = if logic == Logic::Stable { Semantics::Stable } else { Semantics::WellFounded };
            if p.semantics != wanted {
                return Err(Error::Precondition(format!(
                    "program is declared with {:?} semantics, not {logic}",
                    p.semantics
                )));
            }
            if logic == Logic::WellFounded && p.has_choice() {
                return Err(Error::Unsupported("choice rules have no well-founded reading".into()));
            }
            let own = Signature::new(p.sigma.clone(), p.epsilon.clone())?;
            if let Some(sig) = signature {
                if sig != own {
                    return Err(Error::VocabularyMismatch(format!(
                        "declared {sig} but the program has {own}"
                    )));
                }
            }
            own
        }
        (_, logic) => {
            return Err(Error::Precondition(format!("axioms do not belong to the {logic} logic")));
        }
    };
    Ok(AxiomModule { logic, axioms, signature, groundings: Arc::default() })
}

impl PrimitiveModule for AxiomModule {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn expansions(&self, input: &Structure) -> Result<Vec<Structure>> {
        if input.vocab() != &self.signature.sigma {
            return Err(Error::VocabularyMismatch(format!(
                "input over {} but the module reads {}",
                input.vocab(),
                self.signature.sigma
            )));
        }
        let vocab = self.signature.vocab();
        match &self.axioms {
            Axioms::Formula(phi) => {
                let eps_atoms = self.signature.epsilon.atom_count(input.domain());
                limits::guard(eps_atoms)?;
                let u = Universe::new(&vocab, input.domain())?;
                let compiled = phi.compile(&u)?;
                let base = u.encode_atoms(input.atoms())?;
                let eps = u.vocab_mask(&self.signature.epsilon);
                Ok(subsets(eps)
                    .map(|m| base | m)
                    .filter(|&m| compiled.eval(m))
                    .map(|m| u.decode(m, &vocab))
                    .collect())
            }
            Axioms::Program(p) => {
                let g = self.grounding(p, input.domain())?;
                let full = match self.logic {
                    Logic::Stable => stable::stable_models_in(p, &g, input)?,
                    _ => {
                        let wf = wellfounded::compute_in(&g.np, input)?;
                        if !wf.model.is_total() || wf.violates_constraints {
                            Vec::new()
                        } else {
                            let atoms = wf.model.true_atoms.clone();
                            vec![Structure::new(p.vocab()?, input.domain().clone(), atoms)?]
                        }
                    }
                };
                let mut out = BTreeSet::new();
                for m in full {
                    out.insert(restrict(&m, &vocab)?);
                }
                Ok(out.into_iter().collect())
            }
        }
    }

    fn describe(&self) -> String {
        match &self.axioms {
            Axioms::Formula(phi) => format!("propositional formula {phi}"),
            Axioms::Program(p) => format!("{} program with {} rules", self.logic, p.rules.len()),
        }
    }
}
