//! Well-founded model via the alternating fixpoint of the reduct operator.

use std::collections::BTreeSet;
use std::fmt;

use super::program::{LogicProgram, NormalProgram};
use crate::error::{Error, Result};
use crate::structures::{GroundAtom, Structure};

/// A three-valued interpretation; the three sets partition the atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeValuedModel {
    pub true_atoms: BTreeSet<GroundAtom>,
    pub false_atoms: BTreeSet<GroundAtom>,
    pub undefined_atoms: BTreeSet<GroundAtom>,
}

impl ThreeValuedModel {
    pub fn is_total(&self) -> bool {
        self.undefined_atoms.is_empty()
    }
}

impl fmt::Display for ThreeValuedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &BTreeSet<GroundAtom>| {
            s.iter().map(GroundAtom::to_string).collect::<Vec<_>>().join(",")
        };
        write!(
            f,
            "true={{{}}} false={{{}}} undefined={{{}}}",
            show(&self.true_atoms),
            show(&self.false_atoms),
            show(&self.undefined_atoms)
        )
    }
}

pub(crate) struct WfResult {
    pub model: ThreeValuedModel,
    /// Whether some constraint's body is true in the model (only meaningful
    /// for total models).
    pub violates_constraints: bool,
}

pub(crate) fn compute(p: &LogicProgram, facts: &Structure) -> Result<WfResult> {
    if p.has_choice() {
        return Err(Error::Unsupported(
            "choice rules have no well-founded reading".into(),
        ));
    }
    if !facts.vocab().is_subset(&p.sigma) {
        return Err(Error::Precondition(format!(
            "facts over {} must interpret only the input vocabulary {}",
            facts.vocab(),
            p.sigma
        )));
    }
    compute_in(&super::stable::grounded(p, facts.domain())?.np, facts)
}

/// As [`compute`], with `np` the grounding of the program over the facts'
/// domain; the caller has already validated the program and the facts.
pub(crate) fn compute_in(np: &NormalProgram, facts: &Structure) -> Result<WfResult> {
    let mut seed = vec![false; np.len()];
    for a in facts.atoms() {
        seed[np.index[a]] = true;
    }
    // T grows, U shrinks; each is the reduct's least model w.r.t. the other.
    let mut t = seed.clone();
    let mut u = np.least_model(&seed, Some(&t));
    loop {
        let t2 = np.least_model(&seed, Some(&u));
        let u2 = np.least_model(&seed, Some(&t2));
        if t2 == t && u2 == u {
            break;
        }
        t = t2;
        u = u2;
    }
    let mut model = ThreeValuedModel {
        true_atoms: BTreeSet::new(),
        false_atoms: BTreeSet::new(),
        undefined_atoms: BTreeSet::new(),
    };
    for (i, atom) in np.atoms.iter().enumerate() {
        let set = match (t[i], u[i]) {
            (true, _) => &mut model.true_atoms,
            (false, true) => &mut model.undefined_atoms,
            (false, false) => &mut model.false_atoms,
        };
        set.insert(atom.clone());
    }
    let violates_constraints = np.violates_denials(&t);
    Ok(WfResult { model, violates_constraints })
}

/// The well-founded model of `p ∪ facts`. Constraints play no part here.
pub fn well_founded_model(p: &LogicProgram, facts: &Structure) -> Result<ThreeValuedModel> {
    Ok(compute(p, facts)?.model)
}
