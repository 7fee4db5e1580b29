//! Bitmask encoding of structures over a fixed vocabulary and domain.
//!
//! The semantics engines work on `Mask` values: bit `i` is the truth value
//! of the `i`-th ground atom in canonical order. Restriction becomes a bitwise
//! and, expansion a bitwise or.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::structures::{ground_atoms, Domain, GroundAtom, Structure, Symbol, Vocabulary};

pub type Mask = u128;

pub const MAX_ATOMS: usize = Mask::BITS as usize;

#[derive(Debug, Clone)]
pub struct Universe {
    vocab: Vocabulary,
    domain: Domain,
    atoms: Vec<GroundAtom>,
    index: HashMap<GroundAtom, usize>,
    by_symbol: BTreeMap<String, Vec<usize>>,
}

impl Universe {
    pub fn new(vocab: &Vocabulary, domain: &Domain) -> Result<Self> {
        let count = vocab.atom_count(domain);
        if count > MAX_ATOMS {
            return Err(Error::UniverseTooLarge(count));
        }
        let atoms = ground_atoms(vocab, domain);
        let index = atoms.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let mut by_symbol: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            by_symbol.entry(a.symbol.name.clone()).or_default().push(i);
        }
        Ok(Self { vocab: vocab.clone(), domain: domain.clone(), atoms, index, by_symbol })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn full_mask(&self) -> Mask {
        low_bits(self.atoms.len())
    }

    pub fn bit(&self, atom: &GroundAtom) -> Option<usize> {
        self.index.get(atom).copied()
    }

    /// Bit positions of `symbol`'s atoms, in argument-tuple order.
    pub fn symbol_bits(&self, symbol: &str) -> &[usize] {
        self.by_symbol.get(symbol).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn symbol_mask(&self, symbol: &str) -> Mask {
        self.symbol_bits(symbol).iter().fold(0, |m, &i| m | 1 << i)
    }

    /// Symbols of `v` not in the universe are ignored.
    pub fn vocab_mask(&self, v: &Vocabulary) -> Mask {
        v.iter()
            .filter(|s| self.vocab.contains(s))
            .fold(0, |m, s| m | self.symbol_mask(&s.name))
    }

    pub fn encode(&self, s: &Structure) -> Result<Mask> {
        if s.domain() != &self.domain {
            return Err(Error::VocabularyMismatch(format!(
                "structure domain {} differs from {}",
                s.domain(),
                self.domain
            )));
        }
        s.atoms().iter().try_fold(0, |m, a| match self.bit(a) {
            Some(i) => Ok(m | 1 << i),
            None => Err(Error::VocabularyMismatch(format!(
                "atom {a} is not over {}",
                self.vocab
            ))),
        })
    }

    pub fn encode_atoms<'a>(&self, atoms: impl IntoIterator<Item = &'a GroundAtom>) -> Result<Mask> {
        atoms.into_iter().try_fold(0, |m, a| match self.bit(a) {
            Some(i) => Ok(m | 1 << i),
            None => Err(Error::VocabularyMismatch(format!("atom {a} is not over {}", self.vocab))),
        })
    }

    /// Decodes `mask` as a structure over `vocab` (bits outside it are dropped).
    pub fn decode(&self, mask: Mask, vocab: &Vocabulary) -> Structure {
        let keep = mask & self.vocab_mask(vocab);
        let atoms: BTreeSet<GroundAtom> = bits(keep).map(|i| self.atoms[i].clone()).collect();
        Structure::from_parts_unchecked(vocab.clone(), self.domain.clone(), atoms)
    }

    pub fn render(&self, mask: Mask) -> String {
        let parts: Vec<String> = bits(mask).map(|i| self.atoms[i].to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// True iff `R` in `a` equals `S` in `b`, tuple by tuple.
    pub fn same_extension(&self, r: &Symbol, a: Mask, s: &Symbol, b: Mask) -> bool {
        let rb = self.symbol_bits(&r.name);
        let sb = self.symbol_bits(&s.name);
        rb.len() == sb.len() && rb.iter().zip(sb).all(|(&i, &j)| (a >> i & 1) == (b >> j & 1))
    }
}

pub fn low_bits(n: usize) -> Mask {
    if n >= MAX_ATOMS {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

pub fn popcount(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Indices of set bits, ascending.
pub fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Every submask of `mask`, in increasing numeric order (binary counter over
/// the set bits, lowest bit fastest).
pub fn subsets(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(0 as Mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some((cur | !mask).wrapping_add(1) & mask) };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_counts_and_order() {
        let m: Mask = 0b1011_0000;
        let all: Vec<Mask> = subsets(m).collect();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|s| s & !m == 0));
        assert_eq!(subsets(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn encode_decode() {
        let v = Vocabulary::props(["a", "b", "c"]);
        let u = Universe::new(&v, &Domain::propositional()).unwrap();
        let s = Structure::props(&["a", "b", "c"], &["a", "c"]);
        let m = u.encode(&s).unwrap();
        assert_eq!(m, 0b101);
        assert_eq!(u.decode(m, &v), s);
        assert_eq!(u.render(m), "{a,c}");
        assert_eq!(u.decode(m, &Vocabulary::props(["c"])).canonical(), "{c}");
    }

    #[test]
    fn rejects_oversized_universe() {
        let v = Vocabulary::new([Symbol::new("e", 2)]).unwrap();
        let d = Domain::new((0..12).map(|i| i.to_string())).unwrap();
        assert!(matches!(Universe::new(&v, &d), Err(Error::UniverseTooLarge(144))));
    }
}
