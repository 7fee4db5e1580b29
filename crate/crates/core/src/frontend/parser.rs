//! Recursive-descent parser for documents, algebra expressions, rules,
//! propositional formulas and multi-language formulas.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::lexer::{lex, Tok, Token};
use super::logic::{compile_logic_formula, Leaf, LogicFormula};
use super::{ModuleKind, Span, SpecDocument, SpecError, SystemSource};
use crate::algebra::ModuleExpr;
use crate::error::Error;
use crate::logics::{
    module_of_axioms, AtomPattern, Axioms, BodyLiteral, Logic, LogicProgram, PropFormula, Rule, Semantics, Term,
};
use crate::primitive::{ExplicitModule, PrimitiveModule, Signature};
use crate::semantics::{module_from_inferences, Inference, InferenceSet};
use crate::structures::{Domain, GroundAtom, Literal, PartialAssignment, Structure, Symbol, Vocabulary};

type PResult<T> = Result<T, SpecError>;

#[derive(Debug, Clone)]
struct SymDecl {
    name: String,
    arity: Option<usize>,
    span: Span,
}

#[derive(Default)]
struct Header {
    inputs: Vec<SymDecl>,
    outputs: Vec<SymDecl>,
    hidden: Vec<SymDecl>,
}

enum Body {
    Rules(Vec<Rule>),
    Formula(PropFormula),
    Models(Vec<Vec<GroundAtom>>),
    Inferences(Vec<Inference>),
}

impl Body {
    /// Arity of every symbol the body mentions, by first use.
    fn usage(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        let mut note = |name: &str, arity: usize| {
            out.entry(name.to_string()).or_insert(arity);
        };
        match self {
            Body::Rules(rules) => {
                for a in rules.iter().flat_map(Rule::atoms) {
                    note(&a.predicate, a.args.len());
                }
            }
            Body::Formula(f) => {
                for a in f.atoms() {
                    note(&a.symbol.name, a.symbol.arity);
                }
            }
            Body::Models(ms) => {
                for a in ms.iter().flatten() {
                    note(&a.symbol.name, a.symbol.arity);
                }
            }
            Body::Inferences(is) => {
                for i in is {
                    for l in i.premise.literals().chain([i.conclusion.clone()]) {
                        note(&l.atom.symbol.name, l.atom.symbol.arity);
                    }
                }
            }
        }
        out
    }
}

fn is_number(s: &str) -> Option<usize> {
    s.parse().ok()
}

fn is_variable(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Self { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, what: &str) -> SpecError {
        SpecError::syntax(self.span(), format!("expected {what}, found {}", self.peek()))
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<Span> {
        if self.peek() == t {
            Ok(self.bump().span)
        } else {
            Err(self.error(&t.to_string()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => Err(self.error(what)),
        }
    }

    fn expect_end(&self, after: &str) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(SpecError::syntax(self.span(), format!("unexpected {t} after {after}"))),
        }
    }

    // ---- shared pieces ----------------------------------------------------

    /// `{ a, b', p/2 }`
    fn sym_decls(&mut self) -> PResult<Vec<SymDecl>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if !out.is_empty() {
                self.expect(&Tok::Comma)?;
            }
            let (name, span) = self.ident("a symbol")?;
            let arity = if self.eat(&Tok::Slash) {
                let (n, at) = self.ident("an arity")?;
                Some(is_number(&n).ok_or_else(|| SpecError::syntax(at, format!("arity `{n}` is not a number")))?)
            } else {
                None
            };
            out.push(SymDecl { name, arity, span });
        }
        Ok(out)
    }

    /// `name` or `name(c1,...,ck)` with constant arguments.
    fn ground_atom(&mut self) -> PResult<GroundAtom> {
        let (name, _) = self.ident("an atom")?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.ident("a domain element")?.0);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(GroundAtom::new(&name, args))
    }

    /// `{ a, p(1) }`
    fn atom_set(&mut self) -> PResult<Vec<GroundAtom>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if !out.is_empty() {
                self.expect(&Tok::Comma)?;
            }
            out.push(self.ground_atom()?);
        }
        Ok(out)
    }

    fn domain(&mut self) -> PResult<Domain> {
        let at = self.expect(&Tok::LBrace)?;
        let mut elems = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if !elems.is_empty() {
                self.expect(&Tok::Comma)?;
            }
            let (first, fspan) = self.ident("a domain element")?;
            if self.eat(&Tok::DotDot) {
                let (last, lspan) = self.ident("a range end")?;
                let lo = is_number(&first).ok_or_else(|| SpecError::syntax(fspan, "range bounds must be numbers"))?;
                let hi = is_number(&last).ok_or_else(|| SpecError::syntax(lspan, "range bounds must be numbers"))?;
                elems.extend((lo..=hi).map(|n| n.to_string()));
            } else {
                elems.push(first);
            }
        }
        Domain::new(elems).map_err(|e| SpecError::invalid(at, e))
    }

    fn pairs(&mut self) -> PResult<Vec<(String, String)>> {
        self.expect(&Tok::LBracket)?;
        let mut out = Vec::new();
        loop {
            let (r, _) = self.ident("an input symbol")?;
            self.expect(&Tok::Eq)?;
            let (s, _) = self.ident("an output symbol")?;
            out.push((r, s));
            if !(self.eat(&Tok::Comma) || self.eat(&Tok::Amp) || self.eat_kw("and")) {
                break;
            }
        }
        self.expect(&Tok::RBracket)?;
        Ok(out)
    }

    // ---- rules -------------------------------------------------------------

    fn pattern(&mut self) -> PResult<AtomPattern> {
        let (name, _) = self.ident("an atom")?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let (t, _) = self.ident("a term")?;
                args.push(if is_variable(&t) { Term::Var(t) } else { Term::Const(t) });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(AtomPattern::new(&name, args))
    }

    fn rule_body(&mut self) -> PResult<Vec<BodyLiteral>> {
        let mut body = Vec::new();
        loop {
            let negated = self.is_kw("not") && matches!(self.peek_at(1), Tok::Ident(_));
            if negated {
                self.bump();
                body.push(BodyLiteral::not(self.pattern()?));
            } else {
                body.push(BodyLiteral::pos(self.pattern()?));
            }
            if !self.eat(&Tok::Comma) {
                return Ok(body);
            }
        }
    }

    fn bound(&mut self) -> Option<usize> {
        match self.peek() {
            Tok::Ident(s) => {
                let n = is_number(s)?;
                self.bump();
                Some(n)
            }
            _ => None,
        }
    }

    fn rule(&mut self) -> PResult<Rule> {
        let at = self.span();
        let rule = if self.eat(&Tok::If) {
            Rule::constraint(self.rule_body()?)
        } else if self.peek() == &Tok::LBrace
            || (matches!(self.peek(), Tok::Ident(s) if is_number(s).is_some()) && self.peek_at(1) == &Tok::LBrace)
        {
            let lower = self.bound();
            self.expect(&Tok::LBrace)?;
            let mut atoms = vec![self.pattern()?];
            while self.eat(&Tok::Semi) || self.eat(&Tok::Comma) {
                atoms.push(self.pattern()?);
            }
            self.expect(&Tok::RBrace)?;
            let upper = self.bound();
            let body = if self.eat(&Tok::If) { self.rule_body()? } else { Vec::new() };
            let n = atoms.len();
            Rule::choice(lower.unwrap_or(0), upper.unwrap_or(n), atoms, body)
                .map_err(|e| SpecError::invalid(at, e))?
        } else {
            let head = self.pattern()?;
            let body = if self.eat(&Tok::If) { self.rule_body()? } else { Vec::new() };
            Rule::new(head, body)
        };
        self.expect(&Tok::Dot)?;
        Ok(rule)
    }

    fn rules(&mut self) -> PResult<Vec<Rule>> {
        let mut out = Vec::new();
        while self.peek() != &Tok::RBrace {
            out.push(self.rule()?);
        }
        Ok(out)
    }

    // ---- propositional formulas -------------------------------------------

    fn prop(&mut self) -> PResult<PropFormula> {
        let mut f = self.prop_implies()?;
        while self.eat(&Tok::Iff) {
            f = PropFormula::iff(f, self.prop_implies()?);
        }
        Ok(f)
    }

    fn prop_implies(&mut self) -> PResult<PropFormula> {
        let f = self.prop_or()?;
        if self.eat(&Tok::Arrow) {
            return Ok(PropFormula::implies(f, self.prop_implies()?));
        }
        Ok(f)
    }

    fn prop_or(&mut self) -> PResult<PropFormula> {
        let mut f = self.prop_and()?;
        while self.eat(&Tok::Pipe) {
            f = PropFormula::or(f, self.prop_and()?);
        }
        Ok(f)
    }

    fn prop_and(&mut self) -> PResult<PropFormula> {
        let mut f = self.prop_unary()?;
        while self.eat(&Tok::Amp) {
            f = PropFormula::and(f, self.prop_unary()?);
        }
        Ok(f)
    }

    fn prop_unary(&mut self) -> PResult<PropFormula> {
        if self.eat(&Tok::Tilde) {
            return Ok(PropFormula::not(self.prop_unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.prop()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        if self.eat_kw("true") {
            return Ok(PropFormula::True);
        }
        if self.eat_kw("false") {
            return Ok(PropFormula::False);
        }
        if !matches!(self.peek(), Tok::Ident(_)) {
            return Err(self.error("a formula"));
        }
        Ok(PropFormula::Atom(self.ground_atom()?))
    }

    // ---- inferences ---------------------------------------------------------

    fn inference(&mut self) -> PResult<Inference> {
        let at = self.span();
        let mut premise = PartialAssignment::new();
        let mut positive = true;
        loop {
            match self.peek() {
                Tok::Entails => break,
                Tok::Pipe if positive => {
                    self.bump();
                    positive = false;
                }
                Tok::Comma => {
                    self.bump();
                }
                Tok::Ident(_) => {
                    let a = self.ground_atom()?;
                    premise.insert(if positive { Literal::pos(a) } else { Literal::neg(a) });
                }
                _ => return Err(self.error("a premise atom, `|` or `=>`")),
            }
        }
        self.expect(&Tok::Entails)?;
        let conclusion =
            if self.eat(&Tok::Tilde) { Literal::neg(self.ground_atom()?) } else { Literal::pos(self.ground_atom()?) };
        Inference::new(premise, conclusion).map_err(|e| SpecError::invalid(at, e))
    }

    // ---- modules ------------------------------------------------------------

    fn header_section(&mut self, header: &mut Header) -> PResult<bool> {
        let slot = match self.peek() {
            Tok::Ident(s) if s == "inputs" => &mut header.inputs,
            Tok::Ident(s) if s == "outputs" => &mut header.outputs,
            Tok::Ident(s) if s == "hidden" => &mut header.hidden,
            _ => return Ok(false),
        };
        self.pos += 1;
        let decls = self.sym_decls()?;
        slot.extend(decls);
        Ok(true)
    }

    /// Body content up to (not including) the closing brace.
    fn body(&mut self, kind: ModuleKind) -> PResult<Body> {
        Ok(match kind {
            ModuleKind::Stable | ModuleKind::WellFounded => Body::Rules(self.rules()?),
            ModuleKind::Propositional => Body::Formula(self.prop()?),
            ModuleKind::Explicit => {
                let mut models = Vec::new();
                while self.peek() != &Tok::RBrace {
                    models.push(self.atom_set()?);
                    self.eat(&Tok::Comma);
                }
                Body::Models(models)
            }
            ModuleKind::Inferences => {
                let mut infs = Vec::new();
                while self.peek() != &Tok::RBrace {
                    infs.push(self.inference()?);
                    if !self.eat(&Tok::Semi) && self.peek() != &Tok::RBrace {
                        return Err(self.error("`;` or `}`"));
                    }
                }
                Body::Inferences(infs)
            }
        })
    }

    fn kind(&mut self) -> PResult<ModuleKind> {
        let (kw, at) = self.ident("a module kind (p, sm, wf, set or inf)")?;
        ModuleKind::from_keyword(&kw)
            .ok_or_else(|| SpecError::syntax(at, format!("unknown module kind `{kw}`; expected p, sm, wf, set or inf")))
    }

    /// `module NAME : kind { sections }`, after the keyword.
    fn module_def(&mut self, doc: &mut SpecDocument) -> PResult<()> {
        let (name, at) = self.ident("a module name")?;
        self.expect(&Tok::Colon)?;
        let kind = self.kind()?;
        self.expect(&Tok::LBrace)?;
        let mut header = Header::default();
        let mut body = None;
        while !self.eat(&Tok::RBrace) {
            if self.header_section(&mut header)? {
                continue;
            }
            let (section, sat) = self.ident("a module section")?;
            if !["rules", "formula", "models", "inferences"].contains(&section.as_str()) {
                return Err(SpecError::syntax(
                    sat,
                    format!("unknown section `{section}`; expected inputs, outputs, hidden, rules, formula, models or inferences"),
                ));
            }
            if body.is_some() {
                return Err(SpecError::syntax(sat, "a module has exactly one body section"));
            }
            self.expect(&Tok::LBrace)?;
            body = Some(self.body(kind)?);
            self.expect(&Tok::RBrace)?;
        }
        let body = body.unwrap_or(match kind {
            ModuleKind::Stable | ModuleKind::WellFounded => Body::Rules(Vec::new()),
            ModuleKind::Propositional => Body::Formula(PropFormula::True),
            ModuleKind::Explicit => Body::Models(Vec::new()),
            ModuleKind::Inferences => Body::Inferences(Vec::new()),
        });
        let module = build_module(doc, kind, &header, body, at)?;
        doc.add_module(&name, kind, module, at)
    }

    /// `{ kind inputs {..} outputs {..} hidden {..} : body }`
    fn leaf(&mut self, doc: &SpecDocument) -> PResult<Leaf> {
        let at = self.expect(&Tok::LBrace)?;
        let kind = self.kind()?;
        let mut header = Header::default();
        while self.header_section(&mut header)? {}
        self.expect(&Tok::Colon)?;
        let body = self.body(kind)?;
        self.expect(&Tok::RBrace)?;
        let module = build_module(doc, kind, &header, body, at)?;
        Ok(Leaf { kind, module, span: at })
    }

    // ---- algebra ------------------------------------------------------------

    fn expr(&mut self, doc: &SpecDocument) -> PResult<ModuleExpr> {
        let mut e = self.compose(doc)?;
        while self.eat(&Tok::Pipe) {
            e = ModuleExpr::union(e, self.compose(doc)?);
        }
        Ok(e)
    }

    fn compose(&mut self, doc: &SpecDocument) -> PResult<ModuleExpr> {
        let mut e = self.prefix(doc)?;
        while self.eat(&Tok::Compose) {
            e = ModuleExpr::compose(e, self.prefix(doc)?);
        }
        Ok(e)
    }

    fn prefix(&mut self, doc: &SpecDocument) -> PResult<ModuleExpr> {
        if self.eat(&Tok::Tilde) {
            return Ok(ModuleExpr::complement(self.prefix(doc)?));
        }
        let mut e = self.primary(doc)?;
        while self.peek() == &Tok::LBracket {
            for (r, s) in self.pairs()? {
                e = ModuleExpr::feedback(e, r, s);
            }
        }
        Ok(e)
    }

    fn primary(&mut self, doc: &SpecDocument) -> PResult<ModuleExpr> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr(doc)?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(kw) if kw == "project" && self.peek_at(1) == &Tok::LBrace => {
                let at = self.bump().span;
                let decls = self.sym_decls()?;
                self.expect(&Tok::LParen)?;
                let child = self.expr(doc)?;
                self.expect(&Tok::RParen)?;
                let known = child.all_symbols().unwrap_or_default();
                let vocab = resolve_vocab(&decls, &[&known, &doc.declared], &BTreeMap::new())
                    .map_err(|e| SpecError::invalid(at, e))?;
                Ok(ModuleExpr::project(vocab, child))
            }
            Tok::Ident(name) => {
                let at = self.bump().span;
                doc.resolve(&name).ok_or(SpecError::Undefined { line: at.line, col: at.col, name })
            }
            _ => Err(self.error("a module expression")),
        }
    }

    // ---- multi-language formulas -------------------------------------------

    fn lformula(&mut self, doc: &SpecDocument) -> PResult<LogicFormula> {
        let mut f = self.lconj(doc)?;
        loop {
            let at = self.span();
            if !(self.eat_kw("or") || self.eat(&Tok::Pipe)) {
                return Ok(f);
            }
            f = LogicFormula::Or(Box::new(f), Box::new(self.lconj(doc)?), at);
        }
    }

    fn lconj(&mut self, doc: &SpecDocument) -> PResult<LogicFormula> {
        let mut f = self.lunary(doc)?;
        loop {
            let at = self.span();
            if !(self.eat_kw("and") || self.eat(&Tok::Amp)) {
                return Ok(f);
            }
            f = LogicFormula::And(Box::new(f), Box::new(self.lunary(doc)?), at);
        }
    }

    fn lunary(&mut self, doc: &SpecDocument) -> PResult<LogicFormula> {
        if self.is_kw("exists") {
            let at = self.bump().span;
            let symbols = if self.peek() == &Tok::LBrace {
                self.sym_decls()?.into_iter().map(|d| d.name).collect()
            } else {
                let mut syms = vec![self.ident("a quantified symbol")?.0];
                while self.eat(&Tok::Comma) {
                    syms.push(self.ident("a quantified symbol")?.0);
                }
                syms
            };
            let body = self.lunary(doc)?;
            return Ok(LogicFormula::Exists { symbols, body: Box::new(body), span: at });
        }
        let mut f = self.latom(doc)?;
        while self.peek() == &Tok::LBracket {
            let at = self.span();
            let pairs = self.pairs()?;
            f = LogicFormula::Feedback { body: Box::new(f), pairs, span: at };
        }
        Ok(f)
    }

    fn latom(&mut self, doc: &SpecDocument) -> PResult<LogicFormula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.lformula(doc)?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::LBrace => Ok(LogicFormula::Leaf(self.leaf(doc)?)),
            Tok::LBracket => {
                let at = self.span();
                Ok(LogicFormula::Equalities { pairs: self.pairs()?, span: at })
            }
            Tok::Ident(name) if !["and", "or", "exists"].contains(&name.as_str()) => {
                let at = self.bump().span;
                let expr = doc
                    .resolve(&name)
                    .ok_or_else(|| SpecError::Undefined { line: at.line, col: at.col, name: name.clone() })?;
                Ok(LogicFormula::Named { name, expr, span: at })
            }
            _ => Err(self.error("a formula")),
        }
    }
}

/// Arity of each declared symbol: explicit `/k`, else the first vocabulary
/// in `known` that has it, else its use in the body, else 0.
fn resolve_vocab(
    decls: &[SymDecl],
    known: &[&Vocabulary],
    usage: &BTreeMap<String, usize>,
) -> Result<Vocabulary, Error> {
    Vocabulary::new(decls.iter().map(|d| {
        let arity = d
            .arity
            .or_else(|| known.iter().find_map(|v| v.get(&d.name)).map(|s| s.arity))
            .or_else(|| usage.get(&d.name).copied())
            .unwrap_or(0);
        Symbol::new(d.name.clone(), arity)
    }))
}

fn build_module(
    doc: &SpecDocument,
    kind: ModuleKind,
    header: &Header,
    body: Body,
    at: Span,
) -> PResult<Arc<dyn PrimitiveModule>> {
    let usage = body.usage();
    let vocab = |decls: &[SymDecl]| {
        resolve_vocab(decls, &[&doc.declared], &usage).map_err(|e| {
            let span = decls.first().map_or(at, |d| d.span);
            SpecError::invalid(span, e)
        })
    };
    let (sigma, eps, aux) = (vocab(&header.inputs)?, vocab(&header.outputs)?, vocab(&header.hidden)?);
    let invalid = |e| SpecError::invalid(at, e);
    if !aux.is_empty() && !matches!(kind, ModuleKind::Stable | ModuleKind::WellFounded) {
        return Err(invalid(Error::Precondition(format!("hidden symbols are only allowed in sm and wf modules, not {kind}"))));
    }
    Ok(match body {
        Body::Rules(rules) => {
            let (logic, semantics) = if kind == ModuleKind::Stable {
                (Logic::Stable, Semantics::Stable)
            } else {
                (Logic::WellFounded, Semantics::WellFounded)
            };
            let p = LogicProgram::new(rules, semantics, sigma, eps, aux).map_err(invalid)?;
            module_of_axioms(logic, Axioms::Program(p), None).map_err(invalid)?.into_arc()
        }
        Body::Formula(f) => {
            let sig = Signature::new(sigma, eps).map_err(invalid)?;
            module_of_axioms(Logic::Propositional, Axioms::Formula(f), Some(sig)).map_err(invalid)?.into_arc()
        }
        Body::Models(models) => {
            let sig = Signature::new(sigma, eps).map_err(invalid)?;
            let structures = models
                .into_iter()
                .map(|atoms| Structure::new(sig.vocab(), doc.domain.clone(), atoms))
                .collect::<Result<Vec<_>, _>>()
                .map_err(invalid)?;
            ExplicitModule::new(sig, structures).map_err(invalid)?.into_arc()
        }
        Body::Inferences(infs) => {
            let sig = Signature::new(sigma.clone(), eps.clone()).map_err(invalid)?;
            let set = InferenceSet::new(sig.vocab(), doc.domain.clone(), infs).map_err(invalid)?;
            module_from_inferences(set, sigma, eps).map_err(invalid)?.into_arc()
        }
    })
}

pub(crate) fn parse_document(text: &str) -> PResult<SpecDocument> {
    let mut p = Parser::new(text)?;
    let mut doc = SpecDocument::new(Domain::propositional());
    let mut domain_seen = false;
    loop {
        let at = p.span();
        let kw = match p.peek() {
            Tok::Eof => return Ok(doc),
            Tok::Ident(kw) => kw.clone(),
            _ => return Err(p.error("a declaration")),
        };
        match kw.as_str() {
            "domain" => {
                p.bump();
                if domain_seen || !doc.modules().is_empty() || !doc.instances().is_empty() {
                    return Err(SpecError::syntax(at, "the domain must be declared once, before any module or instance"));
                }
                domain_seen = true;
                doc.domain = p.domain()?;
            }
            "vocab" => {
                p.bump();
                for d in p.sym_decls()? {
                    let sym = Symbol::new(d.name, d.arity.unwrap_or(0));
                    doc.declared.insert(sym).map_err(|e| SpecError::invalid(d.span, e))?;
                }
            }
            "module" => {
                p.bump();
                p.module_def(&mut doc)?;
            }
            "system" => {
                p.bump();
                let (name, nat) = p.ident("a system name")?;
                p.expect(&Tok::Eq)?;
                let expr = p.expr(&doc)?;
                p.eat(&Tok::Semi);
                doc.add_system(&name, expr, SystemSource::Algebra, nat)?;
            }
            "formula" => {
                p.bump();
                let (name, nat) = p.ident("a formula name")?;
                p.expect(&Tok::Eq)?;
                let f = p.lformula(&doc)?;
                p.eat(&Tok::Semi);
                let expr = compile_logic_formula(&f, &name)?;
                doc.add_system(&name, expr, SystemSource::Formula(f), nat)?;
            }
            "instance" => {
                p.bump();
                let (name, nat) = p.ident("an instance name")?;
                let atoms = p.atom_set()?;
                doc.add_instance(&name, atoms, nat)?;
            }
            _ => {
                return Err(SpecError::syntax(
                    at,
                    format!("expected `domain`, `vocab`, `module`, `system`, `formula` or `instance`, found `{kw}`"),
                ))
            }
        }
    }
}

pub(crate) fn parse_expr_text(text: &str, doc: &SpecDocument) -> PResult<ModuleExpr> {
    let mut p = Parser::new(text)?;
    let e = p.expr(doc)?;
    p.expect_end("the expression")?;
    Ok(e)
}

pub(crate) fn parse_logic_text(text: &str, doc: &SpecDocument) -> PResult<LogicFormula> {
    let mut p = Parser::new(text)?;
    let f = p.lformula(doc)?;
    p.expect_end("the formula")?;
    Ok(f)
}

/// Parses a rule list, as written inside `rules { ... }`.
pub fn parse_rules(text: &str) -> PResult<Vec<Rule>> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        out.push(p.rule()?);
    }
    Ok(out)
}

/// Parses a propositional formula such as `(b' | c') <-> ~d`.
pub fn parse_prop(text: &str) -> PResult<PropFormula> {
    let mut p = Parser::new(text)?;
    let f = p.prop()?;
    p.expect_end("the formula")?;
    Ok(f)
}
