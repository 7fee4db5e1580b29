//! Stable models by guess-and-check against the Gelfond–Lifschitz reduct.

use std::collections::BTreeSet;

use super::program::{ground, LogicProgram, NormalProgram};
use crate::error::{Error, Result};
use crate::limits;
use crate::structures::{expands, Domain, Structure, Vocabulary};

struct Prepared<'a> {
    np: &'a NormalProgram,
    vocab: Vocabulary,
    domain: Domain,
    facts: Vec<bool>,
}

fn check_facts(p: &LogicProgram, facts: &Structure) -> Result<()> {
    if !facts.vocab().is_subset(&p.sigma) {
        return Err(Error::Precondition(format!(
            "facts over {} must interpret only the input vocabulary {}",
            facts.vocab(),
            p.sigma
        )));
    }
    Ok(())
}

/// A program grounded over one domain, with the atoms its stable models
/// are guessed on.
#[derive(Debug)]
pub(crate) struct Grounding {
    pub np: NormalProgram,
    /// Atoms occurring negatively, outside σ and the hidden complements. The
    /// reduct depends on nothing else.
    guess: Vec<usize>,
}

pub(crate) fn grounded(p: &LogicProgram, domain: &Domain) -> Result<Grounding> {
    let np = NormalProgram::build(&ground(p, domain), &p.vocab()?, domain)?;
    let guess = np
        .rules
        .iter()
        .flat_map(|r| r.neg.iter().copied())
        .filter(|&a| !np.hidden.contains(&a) && !p.sigma.contains(&np.atoms[a].symbol))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(Grounding { np, guess })
}

fn prepare<'a>(p: &LogicProgram, np: &'a NormalProgram, facts: &Structure) -> Result<Prepared<'a>> {
    check_facts(p, facts)?;
    let mut fv = vec![false; np.len()];
    for a in facts.atoms() {
        fv[np.index[a]] = true;
    }
    Ok(Prepared { np, vocab: p.vocab()?, domain: facts.domain().clone(), facts: fv })
}

impl Prepared<'_> {
    /// Extends a candidate over the user atoms with the values its hidden
    /// guessing atoms must take: `a#not` holds iff one of its rules fires.
    /// Those rules only mention user atoms in their bodies.
    fn complete(&self, interp: &mut [bool]) {
        for &h in &self.np.hidden {
            interp[h] = false;
        }
        for r in &self.np.rules {
            if self.np.hidden.contains(&r.head)
                && r.pos.iter().all(|&a| interp[a])
                && r.neg.iter().all(|&a| !interp[a])
            {
                interp[r.head] = true;
            }
        }
    }

    fn is_stable(&self, interp: &[bool]) -> bool {
        !self.np.violates_denials(interp) && self.np.least_model(&self.facts, Some(interp)) == interp
    }

    fn to_structure(&self, interp: &[bool]) -> Structure {
        let atoms: BTreeSet<_> = interp
            .iter()
            .enumerate()
            .filter(|&(i, &t)| t && !self.np.hidden.contains(&i))
            .map(|(i, _)| self.np.atoms[i].clone())
            .collect();
        Structure::from_parts_unchecked(self.vocab.clone(), self.domain.clone(), atoms)
    }
}

/// Checks `candidate` (over σ∪ε∪ε_a) against the reduct of `p ∪ facts`.
pub fn is_stable_model(p: &LogicProgram, facts: &Structure, candidate: &Structure) -> Result<bool> {
    check_facts(p, facts)?;
    let g = grounded(p, facts.domain())?;
    let prep = prepare(p, &g.np, facts)?;
    if candidate.vocab() != &prep.vocab || !expands(candidate, facts) {
        return Err(Error::Precondition(format!(
            "candidate {candidate} over {} does not expand the facts {facts}",
            candidate.vocab()
        )));
    }
    let mut interp = vec![false; prep.np.len()];
    for a in candidate.atoms() {
        interp[prep.np.index[a]] = true;
    }
    prep.complete(&mut interp);
    Ok(prep.is_stable(&interp))
}

/// All stable models of `p ∪ facts`, over σ∪ε∪ε_a, sorted.
pub fn stable_models(p: &LogicProgram, facts: &Structure) -> Result<Vec<Structure>> {
    check_facts(p, facts)?;
    stable_models_in(p, &grounded(p, facts.domain())?, facts)
}

/// As [`stable_models`], with `g` the grounding of `p` over the facts'
/// domain.
///
/// Each guess over the negatively occurring atoms determines one least
/// model; it is a stable model when it agrees with the guess and passes the
/// full check.
pub(crate) fn stable_models_in(p: &LogicProgram, g: &Grounding, facts: &Structure) -> Result<Vec<Structure>> {
    let (np, guess) = (&g.np, &g.guess);
    let prep = prepare(p, np, facts)?;
    limits::guard(guess.len())?;
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << guess.len()) {
        let mut assumed = prep.facts.clone();
        for (k, &a) in guess.iter().enumerate() {
            assumed[a] = bits >> k & 1 == 1;
        }
        // A chosen atom blocks its complement; an unchosen one is derived
        // exactly when its rule body holds, which the reduct leaves intact.
        for (&h, &a) in &np.complement_of {
            assumed[h] = !assumed[a];
        }
        let mut model = np.least_model(&prep.facts, Some(&assumed));
        if guess.iter().any(|&a| model[a] != assumed[a]) {
            continue;
        }
        prep.complete(&mut model);
        if prep.is_stable(&model) {
            out.push(prep.to_structure(&model));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::program::{AtomPattern, BodyLiteral, Rule, Semantics};

    fn atom(n: &str) -> AtomPattern {
        AtomPattern::prop(n)
    }

    fn p_m0() -> LogicProgram {
        LogicProgram::new(
            vec![
                Rule::new(atom("a"), vec![BodyLiteral::pos(atom("i")), BodyLiteral::not(atom("b"))]),
                Rule::new(atom("b"), vec![BodyLiteral::pos(atom("i")), BodyLiteral::not(atom("a"))]),
            ],
            Semantics::Stable,
            Vocabulary::props(["i"]),
            Vocabulary::props(["a", "b"]),
            Vocabulary::empty(),
        )
        .unwrap()
    }

    fn all(t: &[&str]) -> Structure {
        Structure::props(&["a", "b", "i"], t)
    }

    #[test]
    fn choice_program_with_input_true() {
        let facts = Structure::props(&["i"], &["i"]);
        let got = stable_models(&p_m0(), &facts).unwrap();
        assert_eq!(got, vec![all(&["i", "a"]), all(&["i", "b"])]);
        assert!(is_stable_model(&p_m0(), &facts, &all(&["i", "a"])).unwrap());
        assert!(!is_stable_model(&p_m0(), &facts, &all(&["i", "a", "b"])).unwrap());
    }

    #[test]
    fn choice_program_with_input_false() {
        let facts = Structure::props(&["i"], &[]);
        assert_eq!(stable_models(&p_m0(), &facts).unwrap(), vec![all(&[])]);
        assert!(is_stable_model(&p_m0(), &facts, &all(&[])).unwrap());
    }

    #[test]
    fn candidate_must_expand_facts() {
        let facts = Structure::props(&["i"], &["i"]);
        assert!(matches!(
            is_stable_model(&p_m0(), &facts, &all(&["a"])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn unconditional_denial_has_no_models() {
        let p = LogicProgram::new(
            vec![Rule::constraint(vec![])],
            Semantics::Stable,
            Vocabulary::props(["i"]),
            Vocabulary::props(["a"]),
            Vocabulary::empty(),
        )
        .unwrap();
        for facts in [Structure::props(&["i"], &[]), Structure::props(&["i"], &["i"])] {
            assert!(stable_models(&p, &facts).unwrap().is_empty());
        }
    }

    #[test]
    fn choice_rule_picks_exactly_one() {
        let p = LogicProgram::new(
            vec![Rule::choice(1, 1, vec![atom("r"), atom("g"), atom("b")], vec![BodyLiteral::pos(atom("v"))])
                .unwrap()],
            Semantics::Stable,
            Vocabulary::props(["v"]),
            Vocabulary::props(["r", "g", "b"]),
            Vocabulary::empty(),
        )
        .unwrap();
        let on = stable_models(&p, &Structure::props(&["v"], &["v"])).unwrap();
        let txt: Vec<_> = on.iter().map(Structure::canonical).collect();
        assert_eq!(txt, ["{b,v}", "{g,v}", "{r,v}"]);
        let off = stable_models(&p, &Structure::props(&["v"], &[])).unwrap();
        assert_eq!(off.len(), 1);
        assert!(off[0].is_empty());
    }

    #[test]
    fn choice_with_open_bounds() {
        let p = LogicProgram::new(
            vec![Rule::choice(0, 2, vec![atom("x"), atom("y")], vec![]).unwrap()],
            Semantics::Stable,
            Vocabulary::empty(),
            Vocabulary::props(["x", "y"]),
            Vocabulary::empty(),
        )
        .unwrap();
        let facts = Structure::empty(Vocabulary::empty(), Domain::propositional());
        assert_eq!(stable_models(&p, &facts).unwrap().len(), 4);
    }

    #[test]
    fn even_loop_through_negation() {
        // a :- not a. has no stable model.
        let p = LogicProgram::new(
            vec![Rule::new(atom("a"), vec![BodyLiteral::not(atom("a"))])],
            Semantics::Stable,
            Vocabulary::empty(),
            Vocabulary::props(["a"]),
            Vocabulary::empty(),
        )
        .unwrap();
        let facts = Structure::empty(Vocabulary::empty(), Domain::propositional());
        assert!(stable_models(&p, &facts).unwrap().is_empty());
    }
}
