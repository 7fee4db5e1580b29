//! Normal logic programs with constraints and one cardinality-choice form,
//! their grounding, and desugaring into a normal program over indexed atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::structures::{Domain, GroundAtom, Symbol, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomPattern {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl AtomPattern {
    pub fn prop(name: &str) -> Self {
        Self { predicate: name.to_string(), args: Vec::new() }
    }

    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Self { predicate: predicate.to_string(), args }
    }

    pub fn symbol(&self) -> Symbol {
        Symbol::new(self.predicate.clone(), self.args.len())
    }

    fn vars(&self, out: &mut Vec<String>) {
        for t in &self.args {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
    }

    fn substitute(&self, binding: &HashMap<&str, &str>) -> AtomPattern {
        AtomPattern {
            predicate: self.predicate.clone(),
            args: self
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => Term::Const(binding[v.as_str()].to_string()),
                    c => c.clone(),
                })
                .collect(),
        }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| matches!(t, Term::Const(_)))
    }

    pub fn to_ground(&self) -> Result<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Ok(c.clone()),
                Term::Var(v) => Err(Error::Precondition(format!("variable {v} in {self} is not ground"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroundAtom { symbol: self.symbol(), args })
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            let a: Vec<String> = self.args.iter().map(Term::to_string).collect();
            write!(f, "({})", a.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BodyLiteral {
    pub atom: AtomPattern,
    pub positive: bool,
}

impl BodyLiteral {
    pub fn pos(atom: AtomPattern) -> Self {
        Self { atom, positive: true }
    }

    pub fn not(atom: AtomPattern) -> Self {
        Self { atom, positive: false }
    }
}

impl fmt::Display for BodyLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Head {
    Atom(AtomPattern),
    /// `⊥`: the body must not hold.
    Constraint,
    /// `lower {a1; ...; ak} upper`.
    Choice { lower: usize, upper: usize, atoms: Vec<AtomPattern> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyLiteral>,
}

impl Rule {
    pub fn new(head: AtomPattern, body: Vec<BodyLiteral>) -> Self {
        Self { head: Head::Atom(head), body }
    }

    pub fn constraint(body: Vec<BodyLiteral>) -> Self {
        Self { head: Head::Constraint, body }
    }

    pub fn choice(lower: usize, upper: usize, atoms: Vec<AtomPattern>, body: Vec<BodyLiteral>) -> Result<Self> {
        if lower > upper || upper > atoms.len() {
            return Err(Error::Precondition(format!(
                "choice bounds {lower}..{upper} invalid for {} atoms",
                atoms.len()
            )));
        }
        Ok(Self { head: Head::Choice { lower, upper, atoms }, body })
    }

    pub fn atoms(&self) -> impl Iterator<Item = &AtomPattern> {
        let head: Vec<&AtomPattern> = match &self.head {
            Head::Atom(a) => vec![a],
            Head::Constraint => vec![],
            Head::Choice { atoms, .. } => atoms.iter().collect(),
        };
        head.into_iter().chain(self.body.iter().map(|l| &l.atom))
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.atoms() {
            a.vars(&mut out);
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.atoms().all(AtomPattern::is_ground)
    }

    fn substitute(&self, binding: &HashMap<&str, &str>) -> Rule {
        let head = match &self.head {
            Head::Atom(a) => Head::Atom(a.substitute(binding)),
            Head::Constraint => Head::Constraint,
            Head::Choice { lower, upper, atoms } => Head::Choice {
                lower: *lower,
                upper: *upper,
                atoms: atoms.iter().map(|a| a.substitute(binding)).collect(),
            },
        };
        let body = self
            .body
            .iter()
            .map(|l| BodyLiteral { atom: l.atom.substitute(binding), positive: l.positive })
            .collect();
        Rule { head, body }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Atom(a) => write!(f, "{a}")?,
            Head::Constraint => {}
            Head::Choice { lower, upper, atoms } => {
                let a: Vec<String> = atoms.iter().map(AtomPattern::to_string).collect();
                write!(f, "{lower} {{{}}} {upper}", a.join("; "))?;
            }
        }
        if !self.body.is_empty() {
            if !matches!(self.head, Head::Constraint) {
                f.write_str(" ")?;
            }
            let b: Vec<String> = self.body.iter().map(BodyLiteral::to_string).collect();
            write!(f, ":- {}", b.join(", "))?;
        } else if matches!(self.head, Head::Constraint) {
            f.write_str(":-")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    Stable,
    WellFounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicProgram {
    pub rules: Vec<Rule>,
    pub semantics: Semantics,
    pub sigma: Vocabulary,
    pub epsilon: Vocabulary,
    pub aux: Vocabulary,
}

impl LogicProgram {
    pub fn new(
        rules: Vec<Rule>,
        semantics: Semantics,
        sigma: Vocabulary,
        epsilon: Vocabulary,
        aux: Vocabulary,
    ) -> Result<Self> {
        let p = Self { rules, semantics, sigma, epsilon, aux };
        p.check_symbols()?;
        Ok(p)
    }

    /// σ ∪ ε ∪ ε_a.
    pub fn vocab(&self) -> Result<Vocabulary> {
        self.sigma.union(&self.epsilon)?.union(&self.aux)
    }

    /// Every rule symbol must be declared.
    pub fn check_symbols(&self) -> Result<()> {
        if !self.sigma.is_disjoint(&self.epsilon)
            || !self.sigma.is_disjoint(&self.aux)
            || !self.epsilon.is_disjoint(&self.aux)
        {
            return Err(Error::InvalidVocabulary(
                "input, output and hidden vocabularies must be pairwise disjoint".into(),
            ));
        }
        let vocab = self.vocab()?;
        for r in &self.rules {
            for a in r.atoms() {
                if !vocab.contains(&a.symbol()) {
                    return Err(Error::SymbolLeakage(format!(
                        "{} in rule `{r}` is not in {vocab}",
                        a.symbol()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_ground(&self) -> bool {
        self.rules.iter().all(Rule::is_ground)
    }

    pub fn has_choice(&self) -> bool {
        self.rules.iter().any(|r| matches!(r.head, Head::Choice { .. }))
    }
}

impl fmt::Display for LogicProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Instantiates every rule once per substitution of its variables by domain
/// elements. Ground rules pass through unchanged.
pub fn ground(program: &LogicProgram, domain: &Domain) -> LogicProgram {
    let mut rules = Vec::new();
    for r in &program.rules {
        let vars = r.variables();
        if vars.is_empty() {
            rules.push(r.clone());
            continue;
        }
        for tuple in domain.tuples(vars.len()) {
            let binding: HashMap<&str, &str> =
                vars.iter().map(String::as_str).zip(tuple.iter().map(String::as_str)).collect();
            rules.push(r.substitute(&binding));
        }
    }
    LogicProgram { rules, ..program.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct NormalRule {
    pub head: usize,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Denial {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

/// A ground normal program over indexed atoms. Choice heads are replaced by
/// guessing pairs over fresh hidden atoms plus count-bounding denials.
#[derive(Debug, Clone)]
pub(crate) struct NormalProgram {
    pub atoms: Vec<GroundAtom>,
    pub index: HashMap<GroundAtom, usize>,
    pub rules: Vec<NormalRule>,
    pub denials: Vec<Denial>,
    /// Fresh atoms introduced by desugaring; never part of any result.
    pub hidden: BTreeSet<usize>,
    /// For each hidden atom, the choice atom it complements.
    pub complement_of: BTreeMap<usize, usize>,
}

/// Name of the fresh atom paired with a choice atom. `#` never lexes as part
/// of an identifier, so the name cannot collide with user symbols.
fn primed(atom: &GroundAtom) -> GroundAtom {
    GroundAtom {
        symbol: Symbol::new(format!("{}#not", atom.symbol.name), atom.symbol.arity),
        args: atom.args.clone(),
    }
}

impl NormalProgram {
    fn intern(&mut self, atom: GroundAtom) -> usize {
        if let Some(&i) = self.index.get(&atom) {
            return i;
        }
        let i = self.atoms.len();
        self.index.insert(atom.clone(), i);
        self.atoms.push(atom);
        i
    }

    /// `program` must be ground. All atoms of `vocab` over `domain` are
    /// interned first, in canonical order.
    pub fn build(program: &LogicProgram, vocab: &Vocabulary, domain: &Domain) -> Result<Self> {
        let mut np = NormalProgram {
            atoms: Vec::new(),
            index: HashMap::new(),
            rules: Vec::new(),
            denials: Vec::new(),
            hidden: BTreeSet::new(),
            complement_of: BTreeMap::new(),
        };
        for a in crate::structures::ground_atoms(vocab, domain) {
            np.intern(a);
        }
        for r in &program.rules {
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for l in &r.body {
                let g = l.atom.to_ground()?;
                g.check(vocab, domain)?;
                let i = np.intern(g);
                if l.positive {
                    pos.push(i);
                } else {
                    neg.push(i);
                }
            }
            match &r.head {
                Head::Atom(a) => {
                    let g = a.to_ground()?;
                    g.check(vocab, domain)?;
                    let head = np.intern(g);
                    np.rules.push(NormalRule { head, pos, neg });
                }
                Head::Constraint => np.denials.push(Denial { pos, neg }),
                Head::Choice { lower, upper, atoms } => {
                    let mut chosen = Vec::new();
                    for a in atoms {
                        let g = a.to_ground()?;
                        g.check(vocab, domain)?;
                        let ai = np.intern(g.clone());
                        let pi = np.intern(primed(&g));
                        np.hidden.insert(pi);
                        np.complement_of.insert(pi, ai);
                        // ai :- body, not ai'.   ai' :- body, not ai.
                        let mut n1 = neg.clone();
                        n1.push(pi);
                        np.rules.push(NormalRule { head: ai, pos: pos.clone(), neg: n1 });
                        let mut n2 = neg.clone();
                        n2.push(ai);
                        np.rules.push(NormalRule { head: pi, pos: pos.clone(), neg: n2 });
                        if !chosen.contains(&ai) {
                            chosen.push(ai);
                        }
                    }
                    let k = chosen.len();
                    // Fewer than `lower` true: some k-lower+1 atoms all false.
                    if *lower > k {
                        np.denials.push(Denial { pos: pos.clone(), neg: neg.clone() });
                    } else if *lower > 0 {
                        for subset in combinations(&chosen, k + 1 - lower) {
                            let mut n = neg.clone();
                            n.extend(subset);
                            np.denials.push(Denial { pos: pos.clone(), neg: n });
                        }
                    }
                    // More than `upper` true: some upper+1 atoms all true.
                    if *upper < k {
                        for subset in combinations(&chosen, upper + 1) {
                            let mut p = pos.clone();
                            p.extend(subset);
                            np.denials.push(Denial { pos: p, neg: neg.clone() });
                        }
                    }
                }
            }
        }
        Ok(np)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Least model of the reduct of the rules w.r.t. `interp`, seeded with
    /// `facts`. With `interp = None` negative literals are ignored entirely
    /// (only valid for negation-free programs).
    pub fn least_model(&self, facts: &[bool], interp: Option<&[bool]>) -> Vec<bool> {
        let n = self.atoms.len();
        let mut truth = facts.to_vec();
        truth.resize(n, false);
        let live: Vec<&NormalRule> = self
            .rules
            .iter()
            .filter(|r| match interp {
                Some(i) => r.neg.iter().all(|&a| !i[a]),
                None => true,
            })
            .collect();
        let mut missing: Vec<usize> = live.iter().map(|r| r.pos.len()).collect();
        let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ri, r) in live.iter().enumerate() {
            for &p in &r.pos {
                watch[p].push(ri);
            }
        }
        let mut queue: Vec<usize> = (0..n).filter(|&a| truth[a]).collect();
        for r in &live {
            if r.pos.is_empty() && !truth[r.head] {
                truth[r.head] = true;
                queue.push(r.head);
            }
        }
        while let Some(a) = queue.pop() {
            for &ri in &watch[a] {
                missing[ri] -= 1;
                if missing[ri] == 0 {
                    let h = live[ri].head;
                    if !truth[h] {
                        truth[h] = true;
                        queue.push(h);
                    }
                }
            }
        }
        truth
    }

    pub fn violates_denials(&self, interp: &[bool]) -> bool {
        self.denials
            .iter()
            .any(|d| d.pos.iter().all(|&a| interp[a]) && d.neg.iter().all(|&a| !interp[a]))
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        go(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(x: &str) -> Term {
        Term::Var(x.into())
    }

    #[test]
    fn grounds_unary_rule() {
        let rule = Rule::new(
            AtomPattern::new("p", vec![var("X")]),
            vec![BodyLiteral::pos(AtomPattern::new("q", vec![var("X")]))],
        );
        let p = LogicProgram::new(
            vec![rule],
            Semantics::Stable,
            Vocabulary::new([Symbol::new("q", 1)]).unwrap(),
            Vocabulary::new([Symbol::new("p", 1)]).unwrap(),
            Vocabulary::empty(),
        )
        .unwrap();
        let g = ground(&p, &Domain::new(["1", "2"]).unwrap());
        let txt: Vec<String> = g.rules.iter().map(Rule::to_string).collect();
        assert_eq!(txt, ["p(1) :- q(1).", "p(2) :- q(2)."]);
        assert_eq!(ground(&g, &Domain::new(["1", "2"]).unwrap()), g);
    }

    #[test]
    fn grounds_two_variables() {
        let rule = Rule::constraint(vec![BodyLiteral::pos(AtomPattern::new("e", vec![var("X"), var("Y")]))]);
        let p = LogicProgram::new(
            vec![rule],
            Semantics::Stable,
            Vocabulary::new([Symbol::new("e", 2)]).unwrap(),
            Vocabulary::empty(),
            Vocabulary::empty(),
        )
        .unwrap();
        assert_eq!(ground(&p, &Domain::new(["1", "2"]).unwrap()).rules.len(), 4);
    }

    #[test]
    fn rejects_undeclared_symbol() {
        let rule = Rule::new(AtomPattern::prop("z"), vec![]);
        let err = LogicProgram::new(
            vec![rule],
            Semantics::Stable,
            Vocabulary::empty(),
            Vocabulary::props(["a"]),
            Vocabulary::empty(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::SymbolLeakage(_)));
    }

    #[test]
    fn rejects_bad_choice_bounds() {
        assert!(Rule::choice(2, 1, vec![AtomPattern::prop("a"), AtomPattern::prop("b")], vec![]).is_err());
        assert!(Rule::choice(0, 3, vec![AtomPattern::prop("a")], vec![]).is_err());
    }

    #[test]
    fn rule_display() {
        let r = Rule::choice(
            1,
            1,
            vec![AtomPattern::new("R", vec![var("X")]), AtomPattern::new("G", vec![var("X")])],
            vec![BodyLiteral::pos(AtomPattern::new("V", vec![var("X")]))],
        )
        .unwrap();
        assert_eq!(r.to_string(), "1 {R(X); G(X)} 1 :- V(X).");
        let c = Rule::constraint(vec![BodyLiteral::not(AtomPattern::prop("a"))]);
        assert_eq!(c.to_string(), ":- not a.");
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(combinations(&[1, 2], 3).len(), 0);
    }
}
