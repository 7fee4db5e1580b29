//! Finite relational vocabularies, domains and structures.
//!
//! Structures are stored as sets of true ground atoms. Every collection is
//! ordered so that iteration and printing are deterministic: atoms sort by
//! `(symbol name, arity, argument tuple)` and structures sort by their atom
//! lists, which puts the empty structure first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::limits;

/// A predicate symbol. Arity 0 is a propositional atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Self { name: name.into(), arity }
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Self::new(name, 0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A finite set of predicate symbols with unique names.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vocabulary {
    symbols: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self> {
        let mut vocab = Self::empty();
        for s in symbols {
            vocab.insert(s)?;
        }
        Ok(vocab)
    }

    /// Vocabulary of arity-0 symbols.
    pub fn props<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut vocab = Self::empty();
        for n in names {
            vocab.symbols.insert(n.to_string(), 0);
        }
        vocab
    }

    pub fn insert(&mut self, symbol: Symbol) -> Result<()> {
        if symbol.name.is_empty() {
            return Err(Error::InvalidVocabulary("empty symbol name".into()));
        }
        match self.symbols.get(&symbol.name) {
            Some(&a) if a != symbol.arity => Err(Error::InvalidVocabulary(format!(
                "symbol `{}` declared with arities {} and {}",
                symbol.name, a, symbol.arity
            ))),
            _ => {
                self.symbols.insert(symbol.name, symbol.arity);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.symbols.get(name).map(|&arity| Symbol::new(name, arity))
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.symbols.get(&symbol.name) == Some(&symbol.arity)
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(|(n, &a)| Symbol::new(n.clone(), a))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.symbols.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols match by name and arity.
    pub fn is_subset(&self, other: &Vocabulary) -> bool {
        self.iter().all(|s| other.contains(&s))
    }

    pub fn union(&self, other: &Vocabulary) -> Result<Vocabulary> {
        let mut out = self.clone();
        for s in other.iter() {
            out.insert(s)?;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &Vocabulary) -> Vocabulary {
        Vocabulary {
            symbols: self
                .symbols
                .iter()
                .filter(|(n, a)| other.symbols.get(*n) == Some(a))
                .map(|(n, &a)| (n.clone(), a))
                .collect(),
        }
    }

    pub fn difference(&self, other: &Vocabulary) -> Vocabulary {
        Vocabulary {
            symbols: self
                .symbols
                .iter()
                .filter(|(n, a)| other.symbols.get(*n) != Some(a))
                .map(|(n, &a)| (n.clone(), a))
                .collect(),
        }
    }

    pub fn without(&self, symbol: &Symbol) -> Vocabulary {
        let mut out = self.clone();
        if out.contains(symbol) {
            out.symbols.remove(&symbol.name);
        }
        out
    }

    pub fn is_disjoint(&self, other: &Vocabulary) -> bool {
        self.symbols.keys().all(|n| !other.symbols.contains_key(n))
    }

    /// Number of ground atoms over `domain`.
    pub fn atom_count(&self, domain: &Domain) -> usize {
        self.symbols
            .values()
            .map(|&a| domain.len().saturating_pow(a as u32))
            .fold(0usize, |acc, n| acc.saturating_add(n))
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if s.arity == 0 {
                f.write_str(&s.name)?;
            } else {
                write!(f, "{s}")?;
            }
        }
        f.write_str("}")
    }
}

/// The fixed finite universal domain, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain {
    elements: Vec<String>,
}

impl Domain {
    pub fn new<S: Into<String>>(elements: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(Error::InvalidDomain("domain must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &elements {
            if e.is_empty() {
                return Err(Error::InvalidDomain("empty element name".into()));
            }
            if !seen.insert(e.as_str()) {
                return Err(Error::InvalidDomain(format!("duplicate element `{e}`")));
            }
        }
        Ok(Self { elements })
    }

    /// One-element domain; arity-0 atoms do not look at it.
    pub fn propositional() -> Self {
        Self { elements: vec!["u".to_string()] }
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn contains(&self, element: &str) -> bool {
        self.elements.iter().any(|e| e == element)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// All argument tuples of the given length, lexicographic in domain order.
    pub fn tuples(&self, arity: usize) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new()];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    self.elements.iter().map(move |e| {
                        let mut t = prefix.clone();
                        t.push(e.clone());
                        t
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.elements.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub symbol: Symbol,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(name: &str, args: impl IntoIterator<Item = S>) -> Self {
        let args: Vec<String> = args.into_iter().map(Into::into).collect();
        Self { symbol: Symbol::new(name, args.len()), args }
    }

    pub fn prop(name: &str) -> Self {
        Self { symbol: Symbol::prop(name), args: Vec::new() }
    }

    pub fn check(&self, vocab: &Vocabulary, domain: &Domain) -> Result<()> {
        if self.args.len() != self.symbol.arity {
            return Err(Error::InvalidAtom(format!("{self}: wrong number of arguments")));
        }
        if !vocab.contains(&self.symbol) {
            return Err(Error::VocabularyMismatch(format!(
                "atom {self} is not over vocabulary {vocab}"
            )));
        }
        if let Some(bad) = self.args.iter().find(|a| !domain.contains(a)) {
            return Err(Error::InvalidAtom(format!("{self}: `{bad}` is not a domain element")));
        }
        Ok(())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol.name)?;
        if !self.args.is_empty() {
            write!(f, "({})", self.args.join(","))?;
        }
        Ok(())
    }
}

/// All ground atoms of `vocab` over `domain`, in canonical order.
pub fn ground_atoms(vocab: &Vocabulary, domain: &Domain) -> Vec<GroundAtom> {
    let mut atoms: Vec<GroundAtom> = vocab
        .iter()
        .flat_map(|s| {
            domain
                .tuples(s.arity)
                .into_iter()
                .map(move |args| GroundAtom { symbol: s.clone(), args })
        })
        .collect();
    atoms.sort();
    atoms
}

/// A total structure: every ground atom not listed is false.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Vocabulary,
    domain: Domain,
    atoms: BTreeSet<GroundAtom>,
}

impl Structure {
    pub fn new(
        vocab: Vocabulary,
        domain: Domain,
        atoms: impl IntoIterator<Item = GroundAtom>,
    ) -> Result<Self> {
        let atoms: BTreeSet<GroundAtom> = atoms.into_iter().collect();
        for a in &atoms {
            a.check(&vocab, &domain)?;
        }
        Ok(Self { vocab, domain, atoms })
    }

    /// Caller guarantees every atom is over `vocab` × `domain`.
    pub(crate) fn from_parts_unchecked(
        vocab: Vocabulary,
        domain: Domain,
        atoms: BTreeSet<GroundAtom>,
    ) -> Self {
        Self { vocab, domain, atoms }
    }

    pub fn empty(vocab: Vocabulary, domain: Domain) -> Self {
        Self { vocab, domain, atoms: BTreeSet::new() }
    }

    /// Propositional structure over the one-element domain.
    pub fn props<'a>(vocab: &[&'a str], true_atoms: &[&'a str]) -> Self {
        Self::new(
            Vocabulary::props(vocab.iter().copied()),
            Domain::propositional(),
            true_atoms.iter().map(|a| GroundAtom::prop(a)),
        )
        .expect("propositional atoms outside the vocabulary")
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn atoms(&self) -> &BTreeSet<GroundAtom> {
        &self.atoms
    }

    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The extension of `symbol`, as argument tuples.
    pub fn extension(&self, symbol: &Symbol) -> BTreeSet<&[String]> {
        self.atoms
            .iter()
            .filter(|a| &a.symbol == symbol)
            .map(|a| a.args.as_slice())
            .collect()
    }

    /// Canonical text form: `{a,b(1,2)}`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl PartialOrd for Structure {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

// Atom lists first so that sorted model sets read {} before {a}.
impl Ord for Structure {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.atoms
            .cmp(&other.atoms)
            .then_with(|| self.vocab.cmp(&other.vocab))
            .then_with(|| self.domain.cmp(&other.domain))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Enumerates every structure over `vocab` and `domain` in binary-counter
/// order over the canonically sorted atoms (first atom is the low bit).
pub fn enumerate_structures(
    vocab: &Vocabulary,
    domain: &Domain,
) -> Result<impl Iterator<Item = Structure>> {
    enumerate_structures_with_ceiling(vocab, domain, limits::atom_ceiling())
}

pub fn enumerate_structures_with_ceiling(
    vocab: &Vocabulary,
    domain: &Domain,
    ceiling: usize,
) -> Result<impl Iterator<Item = Structure>> {
    limits::guard_with(vocab.atom_count(domain), ceiling)?;
    let atoms = ground_atoms(vocab, domain);
    let n = atoms.len();
    let vocab = vocab.clone();
    let domain = domain.clone();
    Ok((0u64..(1u64 << n)).map(move |bits| {
        let set = (0..n)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| atoms[i].clone())
            .collect();
        Structure::from_parts_unchecked(vocab.clone(), domain.clone(), set)
    }))
}

/// `B|_ν`: keep the atoms whose symbol is in `nu`.
pub fn restrict(b: &Structure, nu: &Vocabulary) -> Result<Structure> {
    if let Some(missing) = nu.iter().find(|s| !b.vocab.contains(s)) {
        return Err(Error::VocabularyMismatch(format!(
            "cannot restrict to {missing}: not in {}",
            b.vocab
        )));
    }
    let atoms = b.atoms.iter().filter(|a| nu.contains(&a.symbol)).cloned().collect();
    Ok(Structure::from_parts_unchecked(nu.clone(), b.domain.clone(), atoms))
}

/// True iff `bp` has the same domain as `b`, a larger vocabulary, and agrees
/// with `b` on `b`'s vocabulary.
pub fn expands(bp: &Structure, b: &Structure) -> bool {
    bp.domain == b.domain
        && b.vocab.is_subset(&bp.vocab)
        && bp
            .atoms
            .iter()
            .filter(|a| b.vocab.contains(&a.symbol))
            .eq(b.atoms.iter())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: GroundAtom) -> Self {
        Self { atom, positive: true }
    }

    pub fn neg(atom: GroundAtom) -> Self {
        Self { atom, positive: false }
    }

    pub fn complement(&self) -> Self {
        Self { atom: self.atom.clone(), positive: !self.positive }
    }

    /// Parses `a`, `~a`, `p(1,2)`, `~p(1,2)`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (positive, rest) = match text.strip_prefix('~') {
            Some(r) => (false, r.trim()),
            None => (true, text),
        };
        Ok(Self { atom: parse_atom(rest)?, positive })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A set of literals, split into its positive and negative parts.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialAssignment {
    positive: BTreeSet<GroundAtom>,
    negative: BTreeSet<GroundAtom>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Self {
        let mut s = Self::new();
        for l in lits {
            s.insert(l);
        }
        s
    }

    pub fn insert(&mut self, lit: Literal) -> bool {
        if lit.positive {
            self.positive.insert(lit.atom)
        } else {
            self.negative.insert(lit.atom)
        }
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        if lit.positive {
            self.positive.contains(&lit.atom)
        } else {
            self.negative.contains(&lit.atom)
        }
    }

    pub fn positive(&self) -> &BTreeSet<GroundAtom> {
        &self.positive
    }

    pub fn negative(&self) -> &BTreeSet<GroundAtom> {
        &self.negative
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        let mut all: Vec<Literal> = self
            .positive
            .iter()
            .cloned()
            .map(Literal::pos)
            .chain(self.negative.iter().cloned().map(Literal::neg))
            .collect();
        all.sort();
        all.into_iter()
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    pub fn is_subset(&self, other: &PartialAssignment) -> bool {
        self.positive.is_subset(&other.positive) && self.negative.is_subset(&other.negative)
    }

    /// S⁺ ∩ S⁻ = ∅.
    pub fn is_consistent(&self) -> bool {
        self.positive.is_disjoint(&self.negative)
    }
}

impl fmt::Display for PartialAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.literals().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

pub fn is_consistent(s: &PartialAssignment) -> bool {
    s.is_consistent()
}

/// S⁺ ⊆ B and S⁻ ∩ B = ∅.
pub fn consistent_with(s: &PartialAssignment, b: &Structure) -> Result<bool> {
    for a in s.positive.iter().chain(s.negative.iter()) {
        if !b.vocab.contains(&a.symbol) {
            return Err(Error::VocabularyMismatch(format!(
                "literal atom {a} is not over {}",
                b.vocab
            )));
        }
    }
    Ok(s.positive.iter().all(|a| b.atoms.contains(a))
        && s.negative.iter().all(|a| !b.atoms.contains(a)))
}

/// Parses `name` or `name(e1,...,ek)`.
pub fn parse_atom(text: &str) -> Result<GroundAtom> {
    let text = text.trim();
    let bad = || Error::InvalidAtom(format!("cannot parse atom `{text}`"));
    let (name, args) = match text.find('(') {
        None => (text, Vec::new()),
        Some(open) => {
            let inner = text[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let args: Vec<String> = inner.split(',').map(|a| a.trim().to_string()).collect();
            if args.iter().any(String::is_empty) {
                return Err(bad());
            }
            (text[..open].trim(), args)
        }
    };
    if name.is_empty() || name.contains(|c: char| c.is_whitespace() || ",{}()~".contains(c)) {
        return Err(bad());
    }
    Ok(GroundAtom::new(name, args))
}

/// Splits a comma-separated atom list at top level, ignoring commas inside
/// parentheses.
pub(crate) fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

/// Parses the canonical text form `{a,b(1,2)}` against a vocabulary.
pub fn parse_structure(text: &str, vocab: &Vocabulary, domain: &Domain) -> Result<Structure> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidAtom(format!("structure must be braced: `{t}`")))?;
    let atoms = split_top_level(inner)
        .into_iter()
        .map(parse_atom)
        .collect::<Result<Vec<_>>>()?;
    Structure::new(vocab.clone(), domain.clone(), atoms)
}

/// Parses a literal list such as `i,~a` or `{i,~a}`.
pub fn parse_literals(text: &str) -> Result<PartialAssignment> {
    let t = text.trim();
    let t = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')).unwrap_or(t);
    let lits = split_top_level(t)
        .into_iter()
        .map(Literal::parse)
        .collect::<Result<Vec<_>>>()?;
    Ok(PartialAssignment::from_literals(lits))
}
