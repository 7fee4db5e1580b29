//! Inference-based semantics: sets of pairs `(S, l)` read as "any structure
//! consistent with S is consistent with l".

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::limits;
use crate::primitive::{PrimitiveModule, Signature};
use crate::structures::{split_top_level, parse_atom, Domain, Literal, PartialAssignment, Structure, Vocabulary};
use crate::universe::{bits, subsets, Mask, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inference {
    pub premise: PartialAssignment,
    pub conclusion: Literal,
}

impl Inference {
    /// The premise must be consistent and must not contain the conclusion.
    pub fn new(premise: PartialAssignment, conclusion: Literal) -> Result<Self> {
        if !premise.is_consistent() {
            return Err(Error::InconsistentAssignment(format!("premise {premise} is inconsistent")));
        }
        if premise.contains(&conclusion) {
            return Err(Error::Precondition(format!("conclusion {conclusion} already in premise {premise}")));
        }
        Ok(Self { premise, conclusion })
    }

    fn key(&self) -> (usize, Vec<Literal>, &Literal) {
        (self.premise.len(), self.premise.literals().collect(), &self.conclusion)
    }

    /// Parses `a,b | c => ~d`: positive premise atoms, then negative ones.
    pub fn parse(line: &str) -> Result<Self> {
        let (lhs, rhs) = line
            .split_once("=>")
            .ok_or_else(|| Error::InvalidAtom(format!("inference `{}` lacks `=>`", line.trim())))?;
        let (pos, neg) = lhs.split_once('|').unwrap_or((lhs, ""));
        let mut premise = PartialAssignment::new();
        for a in split_top_level(pos) {
            premise.insert(Literal::pos(parse_atom(a)?));
        }
        for a in split_top_level(neg) {
            premise.insert(Literal::neg(parse_atom(a)?));
        }
        Self::new(premise, Literal::parse(rhs)?)
    }
}

impl PartialOrd for Inference {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Inference {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<crate::structures::GroundAtom>| {
            s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
        };
        let pos = join(self.premise.positive());
        let neg = join(self.premise.negative());
        let lhs = match (pos.is_empty(), neg.is_empty()) {
            (true, true) => "|".to_string(),
            (false, true) => format!("{pos} |"),
            (true, false) => format!("| {neg}"),
            (false, false) => format!("{pos} | {neg}"),
        };
        write!(f, "{lhs} => {}", self.conclusion)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceSet {
    pub vocab: Vocabulary,
    pub domain: Domain,
    inferences: BTreeSet<Inference>,
}

impl InferenceSet {
    pub fn new(vocab: Vocabulary, domain: Domain, inferences: impl IntoIterator<Item = Inference>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for i in inferences {
            for l in i.premise.literals().chain([i.conclusion.clone()]) {
                l.atom.check(&vocab, &domain)?;
            }
            set.insert(i);
        }
        Ok(Self { vocab, domain, inferences: set })
    }

    pub fn len(&self) -> usize {
        self.inferences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inferences.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Inference> {
        self.inferences.iter()
    }

    pub fn contains(&self, i: &Inference) -> bool {
        self.inferences.contains(i)
    }

    pub fn is_subset(&self, other: &InferenceSet) -> bool {
        self.inferences.is_subset(&other.inferences)
    }

    fn compile(&self, u: &Universe) -> Result<Vec<Compiled>> {
        self.inferences.iter().map(|i| Compiled::new(i, u)).collect()
    }
}

impl fmt::Display for InferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.inferences {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Reads one inference per line; blank lines and `%` comments are skipped.
pub fn parse_inferences(text: &str, vocab: &Vocabulary, domain: &Domain) -> Result<InferenceSet> {
    let lines = text
        .lines()
        .map(|l| l.split('%').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(Inference::parse)
        .collect::<Result<Vec<_>>>()?;
    InferenceSet::new(vocab.clone(), domain.clone(), lines)
}

#[derive(Debug, Clone, Copy)]
struct Compiled {
    pos: Mask,
    neg: Mask,
    bit: usize,
    positive: bool,
}

impl Compiled {
    fn new(i: &Inference, u: &Universe) -> Result<Self> {
        Ok(Self {
            pos: u.encode_atoms(i.premise.positive())?,
            neg: u.encode_atoms(i.premise.negative())?,
            bit: u.bit(&i.conclusion.atom).ok_or_else(|| {
                Error::VocabularyMismatch(format!("{} is not over {}", i.conclusion.atom, u.vocab()))
            })?,
            positive: i.conclusion.positive,
        })
    }

    fn holds_in(&self, b: Mask) -> bool {
        let applies = b & self.pos == self.pos && b & self.neg == 0;
        !applies || (b >> self.bit & 1 == 1) == self.positive
    }
}

/// Every inference `(S, l)` with `|S| ≤ max_premise`, `S` consistent and
/// `l ∉ S`, such that each structure of `extension` consistent with `S` is
/// consistent with `l`.
pub fn ent_inferences(
    extension: &[Structure],
    vocab: &Vocabulary,
    domain: &Domain,
    max_premise: usize,
) -> Result<InferenceSet> {
    let u = Universe::new(vocab, domain)?;
    limits::guard(u.len())?;
    let models = extension
        .iter()
        .map(|s| {
            if s.vocab() != vocab {
                return Err(Error::VocabularyMismatch(format!("{s} is over {}, not {vocab}", s.vocab())));
            }
            u.encode(s)
        })
        .collect::<Result<Vec<Mask>>>()?;
    let full = u.full_mask();
    let mut premises = Vec::new();
    for pos in subsets(full).filter(|p| (p.count_ones() as usize) <= max_premise) {
        let room = max_premise - pos.count_ones() as usize;
        premises.extend(subsets(full & !pos).filter(|n| (n.count_ones() as usize) <= room).map(|neg| (pos, neg)));
    }
    let found: Vec<Inference> = premises
        .par_iter()
        .flat_map_iter(|&(pos, neg)| {
            let (mut all, mut any) = (full, 0 as Mask);
            for &m in &models {
                if m & pos == pos && m & neg == 0 {
                    all &= m;
                    any |= m;
                }
            }
            let premise = PartialAssignment::from_literals(
                bits(pos)
                    .map(|i| Literal::pos(u.atoms()[i].clone()))
                    .chain(bits(neg).map(|i| Literal::neg(u.atoms()[i].clone()))),
            );
            let mut out = Vec::new();
            for i in 0..u.len() {
                let atom = &u.atoms()[i];
                if pos >> i & 1 == 0 && all >> i & 1 == 1 {
                    out.push(Inference { premise: premise.clone(), conclusion: Literal::pos(atom.clone()) });
                }
                if neg >> i & 1 == 0 && any >> i & 1 == 0 {
                    out.push(Inference { premise: premise.clone(), conclusion: Literal::neg(atom.clone()) });
                }
            }
            out
        })
        .collect();
    InferenceSet::new(vocab.clone(), domain.clone(), found)
}

/// Every structure over the set's vocabulary satisfying all its inferences.
pub fn inf_models(set: &InferenceSet) -> Result<Vec<Structure>> {
    let u = Universe::new(&set.vocab, &set.domain)?;
    limits::guard(u.len())?;
    let compiled = set.compile(&u)?;
    let mut out: Vec<Structure> = subsets(u.full_mask())
        .filter(|&b| compiled.iter().all(|c| c.holds_in(b)))
        .map(|b| u.decode(b, &set.vocab))
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    /// The closure of the start assignment under the inferences.
    Closed(PartialAssignment),
    /// Some inference derived the complement of a literal already present.
    Conflict { literal: Literal, inference: Inference },
}

impl fmt::Display for Propagation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Propagation::Closed(s) => write!(f, "{s}"),
            Propagation::Conflict { literal, inference } => write!(f, "CONFLICT on {literal} by {inference}"),
        }
    }
}

/// Closure of `start`: fire `(S, l)` whenever `S ⊆` the current literals.
pub fn propagate(set: &InferenceSet, start: &PartialAssignment) -> Result<Propagation> {
    let order: Vec<usize> = (0..set.len()).collect();
    propagate_in_order(set, start, &order)
}

/// As [`propagate`], scanning the inferences in the given order on every
/// pass. `order` must be a permutation of `0..set.len()`.
pub fn propagate_in_order(set: &InferenceSet, start: &PartialAssignment, order: &[usize]) -> Result<Propagation> {
    if !start.is_consistent() {
        return Err(Error::InconsistentAssignment(format!("start {start} is inconsistent")));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..set.len()).collect::<Vec<_>>() {
        return Err(Error::Precondition("firing order must be a permutation of the inferences".into()));
    }
    for l in start.literals() {
        l.atom.check(&set.vocab, &set.domain)?;
    }
    let all: Vec<&Inference> = set.iter().collect();
    let mut current = start.clone();
    loop {
        let mut changed = false;
        for &k in order {
            let inf = all[k];
            if current.contains(&inf.conclusion) || !inf.premise.is_subset(&current) {
                continue;
            }
            if current.contains(&inf.conclusion.complement()) {
                return Ok(Propagation::Conflict { literal: inf.conclusion.clone(), inference: inf.clone() });
            }
            current.insert(inf.conclusion.clone());
            changed = true;
        }
        if !changed {
            return Ok(Propagation::Closed(current));
        }
    }
}

/// A primitive module whose models are the structures satisfying a set of
/// inferences.
#[derive(Debug, Clone)]
pub struct InferenceModule {
    signature: Signature,
    set: InferenceSet,
}

impl InferenceModule {
    pub fn inferences(&self) -> &InferenceSet {
        &self.set
    }

    pub fn into_arc(self) -> std::sync::Arc<dyn PrimitiveModule> {
        std::sync::Arc::new(self)
    }
}

pub fn module_from_inferences(set: InferenceSet, sigma: Vocabulary, epsilon: Vocabulary) -> Result<InferenceModule> {
    let signature = Signature::new(sigma, epsilon)?;
    if set.vocab != signature.vocab() {
        return Err(Error::VocabularyMismatch(format!(
            "inferences over {} but the module vocabulary is {}",
            set.vocab,
            signature.vocab()
        )));
    }
    Ok(InferenceModule { signature, set })
}

impl PrimitiveModule for InferenceModule {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn expansions(&self, input: &Structure) -> Result<Vec<Structure>> {
        let vocab = self.signature.vocab();
        let u = Universe::new(&vocab, input.domain())?;
        let eps = u.vocab_mask(&self.signature.epsilon);
        limits::guard(eps.count_ones() as usize)?;
        let set = InferenceSet { domain: input.domain().clone(), ..self.set.clone() };
        let compiled = set.compile(&u)?;
        let base = u.encode_atoms(input.atoms())?;
        Ok(subsets(eps)
            .map(|x| base | x)
            .filter(|&b| compiled.iter().all(|c| c.holds_in(b)))
            .map(|b| u.decode(b, &vocab))
            .collect())
    }

    fn describe(&self) -> String {
        format!("{} inferences", self.set.len())
    }
}
