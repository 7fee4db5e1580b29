use std::collections::BTreeSet;
use std::fmt;

use crate::error::Result;
use crate::limits;
use crate::structures::{Domain, GroundAtom, Structure, Vocabulary};
use crate::universe::{subsets, Mask, Universe};

/// Classical propositional formula over ground atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropFormula {
    True,
    False,
    Atom(GroundAtom),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(name: &str) -> Self {
        Self::Atom(GroundAtom::prop(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        Self::Not(Box::new(f))
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        Self::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        Self::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        Self::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> Self {
        Self::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of a list; `True` when empty.
    pub fn all(fs: impl IntoIterator<Item = PropFormula>) -> Self {
        fs.into_iter().reduce(Self::and).unwrap_or(Self::True)
    }

    pub fn eval(&self, truth: &dyn Fn(&GroundAtom) -> bool) -> bool {
        match self {
            Self::True => true,
            Self::False => false,
            Self::Atom(a) => truth(a),
            Self::Not(f) => !f.eval(truth),
            Self::And(a, b) => a.eval(truth) && b.eval(truth),
            Self::Or(a, b) => a.eval(truth) || b.eval(truth),
            Self::Implies(a, b) => !a.eval(truth) || b.eval(truth),
            Self::Iff(a, b) => a.eval(truth) == b.eval(truth),
        }
    }

    pub fn holds_in(&self, s: &Structure) -> bool {
        self.eval(&|a| s.holds(a))
    }

    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<GroundAtom>) {
        match self {
            Self::True | Self::False => {}
            Self::Atom(a) => {
                out.insert(a.clone());
            }
            Self::Not(f) => f.collect_atoms(out),
            Self::And(a, b) | Self::Or(a, b) | Self::Implies(a, b) | Self::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub(crate) fn compile(&self, u: &Universe) -> Result<Compiled> {
        Ok(match self {
            Self::True => Compiled::Const(true),
            Self::False => Compiled::Const(false),
            Self::Atom(a) => {
                a.check(u.vocab(), u.domain())?;
                Compiled::Bit(u.bit(a).expect("checked atom has a bit"))
            }
            Self::Not(f) => Compiled::Not(Box::new(f.compile(u)?)),
            Self::And(a, b) => Compiled::And(Box::new(a.compile(u)?), Box::new(b.compile(u)?)),
            Self::Or(a, b) => Compiled::Or(Box::new(a.compile(u)?), Box::new(b.compile(u)?)),
            Self::Implies(a, b) => Compiled::Or(
                Box::new(Compiled::Not(Box::new(a.compile(u)?))),
                Box::new(b.compile(u)?),
            ),
            Self::Iff(a, b) => Compiled::Iff(Box::new(a.compile(u)?), Box::new(b.compile(u)?)),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Self::Iff(..) => 1,
            Self::Implies(..) => 2,
            Self::Or(..) => 3,
            Self::And(..) => 4,
            Self::Not(..) => 5,
            _ => 6,
        }
    }
}

/// Bit-indexed form used inside enumeration loops.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Const(bool),
    Bit(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn eval(&self, m: Mask) -> bool {
        match self {
            Self::Const(b) => *b,
            Self::Bit(i) => m >> i & 1 == 1,
            Self::Not(f) => !f.eval(m),
            Self::And(a, b) => a.eval(m) && b.eval(m),
            Self::Or(a, b) => a.eval(m) || b.eval(m),
            Self::Iff(a, b) => a.eval(m) == b.eval(m),
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Binary operators parenthesise any child that does not bind tighter;
        // `->` is right-associative, the rest left-associative.
        let wrap = |f: &mut fmt::Formatter<'_>, child: &PropFormula, min: u8| {
            if child.precedence() < min {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        };
        let binary = |f: &mut fmt::Formatter<'_>, a: &PropFormula, op: &str, b: &PropFormula, p: u8, right: bool| {
            wrap(f, a, if right { p + 1 } else { p })?;
            write!(f, " {op} ")?;
            wrap(f, b, if right { p } else { p + 1 })
        };
        match self {
            Self::True => f.write_str("true"),
            Self::False => f.write_str("false"),
            Self::Atom(a) => write!(f, "{a}"),
            Self::Not(x) => {
                f.write_str("~")?;
                wrap(f, x, 5)
            }
            Self::And(a, b) => binary(f, a, "&", b, 4, false),
            Self::Or(a, b) => binary(f, a, "|", b, 3, false),
            Self::Implies(a, b) => binary(f, a, "->", b, 2, true),
            Self::Iff(a, b) => binary(f, a, "<->", b, 1, false),
        }
    }
}

/// Every structure over `vocab` × `domain` satisfying `phi`, sorted.
pub fn prop_models(phi: &PropFormula, vocab: &Vocabulary, domain: &Domain) -> Result<Vec<Structure>> {
    limits::guard(vocab.atom_count(domain))?;
    let u = Universe::new(vocab, domain)?;
    let compiled = phi.compile(&u)?;
    let mut out: Vec<Structure> = subsets(u.full_mask())
        .filter(|&m| compiled.eval(m))
        .map(|m| u.decode(m, vocab))
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2_m4() -> PropFormula {
        PropFormula::iff(
            PropFormula::or(PropFormula::atom("b'"), PropFormula::atom("c'")),
            PropFormula::not(PropFormula::atom("d")),
        )
    }

    #[test]
    fn m4_formula_models() {
        // Truth table oracle over the 8 assignments of (b', c', d).
        let mut expected = Vec::new();
        for bits in 0..8u8 {
            let (b, c, d) = (bits & 1 == 1, bits & 2 == 2, bits & 4 == 4);
            if (b || c) == !d {
                let mut t = Vec::new();
                if b {
                    t.push("b'");
                }
                if c {
                    t.push("c'");
                }
                if d {
                    t.push("d");
                }
                expected.push(Structure::props(&["b'", "c'", "d"], &t));
            }
        }
        expected.sort();
        let got = prop_models(&fig2_m4(), &Vocabulary::props(["b'", "c'", "d"]), &Domain::propositional())
            .unwrap();
        assert_eq!(got, expected);
        let txt: Vec<_> = got.iter().map(Structure::canonical).collect();
        assert_eq!(txt, ["{b'}", "{b',c'}", "{c'}", "{d}"]);
    }

    #[test]
    fn tautology_and_contradiction() {
        let v = Vocabulary::props(["p"]);
        let d = Domain::propositional();
        assert_eq!(prop_models(&PropFormula::True, &v, &d).unwrap().len(), 2);
        let contra = PropFormula::and(PropFormula::atom("p"), PropFormula::not(PropFormula::atom("p")));
        assert!(prop_models(&contra, &v, &d).unwrap().is_empty());
    }

    #[test]
    fn display_round_trips_precedence() {
        assert_eq!(fig2_m4().to_string(), "b' | c' <-> ~d");
        let f = PropFormula::implies(
            PropFormula::implies(PropFormula::atom("a"), PropFormula::atom("b")),
            PropFormula::atom("c"),
        );
        assert_eq!(f.to_string(), "(a -> b) -> c");
    }
}
