//! Expressions of the module algebra and their static checks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::primitive::{PrimitiveModule, Signature};
use crate::structures::Vocabulary;

/// A named primitive module. Two references are equal when they carry the
/// same name and signature.
#[derive(Clone)]
pub struct PrimRef {
    pub name: String,
    pub module: Arc<dyn PrimitiveModule>,
}

impl PrimRef {
    pub fn new(name: impl Into<String>, module: Arc<dyn PrimitiveModule>) -> Self {
        Self { name: name.into(), module }
    }
}

impl fmt::Debug for PrimRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prim({})", self.name)
    }
}

impl PartialEq for PrimRef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.module.signature() == other.module.signature()
    }
}

impl Eq for PrimRef {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleExpr {
    Prim(PrimRef),
    /// `π_ν(child)`.
    Project { vocab: Vocabulary, child: Box<ModuleExpr> },
    /// `left ▷ right`.
    Compose(Box<ModuleExpr>, Box<ModuleExpr>),
    Union(Box<ModuleExpr>, Box<ModuleExpr>),
    /// `child[input=output]`: the input `R` is identified with the output `S`.
    Feedback { child: Box<ModuleExpr>, input: String, output: String },
    Complement(Box<ModuleExpr>),
}

impl ModuleExpr {
    pub fn prim(name: impl Into<String>, module: Arc<dyn PrimitiveModule>) -> Self {
        Self::Prim(PrimRef::new(name, module))
    }

    pub fn project(vocab: Vocabulary, child: ModuleExpr) -> Self {
        Self::Project { vocab, child: Box::new(child) }
    }

    pub fn compose(left: ModuleExpr, right: ModuleExpr) -> Self {
        Self::Compose(Box::new(left), Box::new(right))
    }

    pub fn union(left: ModuleExpr, right: ModuleExpr) -> Self {
        Self::Union(Box::new(left), Box::new(right))
    }

    pub fn feedback(child: ModuleExpr, input: impl Into<String>, output: impl Into<String>) -> Self {
        Self::Feedback { child: Box::new(child), input: input.into(), output: output.into() }
    }

    pub fn complement(child: ModuleExpr) -> Self {
        Self::Complement(Box::new(child))
    }

    pub fn children(&self) -> Vec<&ModuleExpr> {
        match self {
            Self::Prim(_) => vec![],
            Self::Project { child, .. } | Self::Feedback { child, .. } | Self::Complement(child) => vec![child],
            Self::Compose(l, r) | Self::Union(l, r) => vec![l, r],
        }
    }

    /// Operator name used in reports and traces.
    pub fn operator(&self) -> &'static str {
        match self {
            Self::Prim(_) => "primitive",
            Self::Project { .. } => "projection",
            Self::Compose(..) => "composition",
            Self::Union(..) => "union",
            Self::Feedback { .. } => "feedback",
            Self::Complement(_) => "complement",
        }
    }

    pub fn at(&self, path: &ExprPath) -> Option<&ModuleExpr> {
        path.0.iter().try_fold(self, |e, &i| e.children().get(i).copied())
    }

    /// Every symbol mentioned anywhere, including hidden ones.
    pub fn all_symbols(&self) -> Result<Vocabulary> {
        let mut v = Vocabulary::empty();
        self.collect_symbols(&mut v)?;
        Ok(v)
    }

    fn collect_symbols(&self, v: &mut Vocabulary) -> Result<()> {
        match self {
            Self::Prim(p) => {
                for s in p.module.signature().vocab().iter() {
                    v.insert(s)?;
                }
            }
            Self::Project { vocab, child } => {
                child.collect_symbols(v)?;
                for s in vocab.iter() {
                    v.insert(s)?;
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_symbols(v)?;
                }
            }
        }
        Ok(())
    }

    pub fn primitives(&self) -> Vec<&PrimRef> {
        match self {
            Self::Prim(p) => vec![p],
            _ => self.children().into_iter().flat_map(ModuleExpr::primitives).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    fn precedence(&self) -> u8 {
        match self {
            Self::Union(..) => 1,
            Self::Compose(..) => 2,
            Self::Complement(_) => 3,
            Self::Feedback { .. } => 4,
            Self::Prim(_) | Self::Project { .. } => 5,
        }
    }
}

/// Canonical algebra text; `parse_expr(render(e))` rebuilds `e`.
impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, child: &ModuleExpr, min: u8| {
            if child.precedence() < min {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        };
        match self {
            Self::Prim(p) => f.write_str(&p.name),
            Self::Project { vocab, child } => write!(f, "project {vocab} ({child})"),
            Self::Compose(l, r) => {
                wrap(f, l, 2)?;
                f.write_str(" >> ")?;
                wrap(f, r, 3)
            }
            Self::Union(l, r) => {
                wrap(f, l, 1)?;
                f.write_str(" | ")?;
                wrap(f, r, 2)
            }
            Self::Feedback { child, input, output } => {
                wrap(f, child, 4)?;
                write!(f, "[{input}={output}]")
            }
            Self::Complement(c) => {
                f.write_str("~")?;
                wrap(f, c, 3)
            }
        }
    }
}

/// Child indices from the root; the root itself is the empty path.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExprPath(pub Vec<usize>);

impl ExprPath {
    pub fn root() -> Self {
        Self(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Self(v)
    }
}

impl fmt::Display for ExprPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "root.{}", parts.join("."))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// Composed modules share an output symbol.
    OutputInterference,
    /// In `M ▷ M'`, an input of `M` is an output of `M'`.
    CyclicDependency,
    /// In `M ∪ M'`, one side reads what the other writes.
    UnionDependency,
    ProjectionOutOfScope,
    FeedbackOnClosedModule,
    FeedbackInputMissing,
    FeedbackOutputMissing,
    FeedbackArityMismatch,
    /// One symbol name used at two arities.
    ArityClash,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: ExprPath,
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.kind, self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WellFormednessReport {
    pub violations: Vec<Violation>,
}

impl WellFormednessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for WellFormednessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("well-formed");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Validates every node. Signatures are computed on a best-effort basis so
/// that violations below an offending node are still reported.
pub fn check_wellformed(e: &ModuleExpr) -> WellFormednessReport {
    let mut report = WellFormednessReport::default();
    walk(e, &ExprPath::root(), &mut report.violations);
    report
}

/// The signature of a well-formed expression.
pub fn signature_of(e: &ModuleExpr) -> Result<Signature> {
    let mut violations = Vec::new();
    let sig = walk(e, &ExprPath::root(), &mut violations);
    match (violations.is_empty(), sig) {
        (true, Some(sig)) => Ok(sig),
        _ => Err(Error::IllFormed(
            violations.iter().map(Violation::to_string).collect::<Vec<_>>().join("; "),
        )),
    }
}

fn names(v: &Vocabulary) -> String {
    v.to_string()
}

fn walk(e: &ModuleExpr, path: &ExprPath, out: &mut Vec<Violation>) -> Option<Signature> {
    match e {
        ModuleExpr::Prim(p) => Some(p.module.signature().clone()),
        ModuleExpr::Project { vocab, child } => {
            let c = walk(child, &path.child(0), out)?;
            let scope = c.vocab();
            let outside = vocab.difference(&scope);
            let mut push = |kind, message: String| out.push(Violation { path: path.clone(), kind, message });
            if !outside.is_empty() {
                push(
                    ViolationKind::ProjectionOutOfScope,
                    format!("projection onto {vocab} mentions {} outside {}", names(&outside), names(&scope)),
                );
            }
            for s in vocab.iter() {
                if let Some(t) = scope.get(&s.name) {
                    if t.arity != s.arity {
                        push(ViolationKind::ArityClash, format!("{s} is {t} in the projected module"));
                    }
                }
            }
            Some(Signature { sigma: c.sigma.intersection(vocab), epsilon: c.epsilon.intersection(vocab) })
        }
        ModuleExpr::Compose(l, r) => {
            let a = walk(l, &path.child(0), out);
            let b = walk(r, &path.child(1), out);
            let (a, b) = (a?, b?);
            let mut push = |kind, message: String| out.push(Violation { path: path.clone(), kind, message });
            let shared = a.epsilon.intersection(&b.epsilon);
            if !shared.is_empty() {
                push(
                    ViolationKind::OutputInterference,
                    format!("both sides of >> output {}", names(&shared)),
                );
            }
            let back = a.sigma.intersection(&b.epsilon);
            if !back.is_empty() {
                push(
                    ViolationKind::CyclicDependency,
                    format!("left side of >> reads {} written by the right side", names(&back)),
                );
            }
            let sigma = a.sigma.union(&b.sigma.difference(&a.epsilon));
            let epsilon = a.epsilon.union(&b.epsilon);
            match (sigma, epsilon) {
                (Ok(sigma), Ok(epsilon)) => Some(Signature { sigma, epsilon }),
                (Err(err), _) | (_, Err(err)) => {
                    push(ViolationKind::ArityClash, err.to_string());
                    None
                }
            }
        }
        ModuleExpr::Union(l, r) => {
            let a = walk(l, &path.child(0), out);
            let b = walk(r, &path.child(1), out);
            let (a, b) = (a?, b?);
            let mut push = |kind, message: String| out.push(Violation { path: path.clone(), kind, message });
            let ab = a.sigma.intersection(&b.epsilon);
            let ba = b.sigma.intersection(&a.epsilon);
            if !ab.is_empty() || !ba.is_empty() {
                let both = ab.union(&ba).unwrap_or(ab);
                push(
                    ViolationKind::UnionDependency,
                    format!("sides of | depend on each other through {}", names(&both)),
                );
            }
            match (a.sigma.union(&b.sigma), a.epsilon.union(&b.epsilon)) {
                (Ok(sigma), Ok(epsilon)) => Some(Signature { sigma, epsilon }),
                (Err(err), _) | (_, Err(err)) => {
                    push(ViolationKind::ArityClash, err.to_string());
                    None
                }
            }
        }
        ModuleExpr::Feedback { child, input, output } => {
            let c = walk(child, &path.child(0), out)?;
            let mut push = |kind, message: String| out.push(Violation { path: path.clone(), kind, message });
            if c.sigma.is_empty() {
                push(
                    ViolationKind::FeedbackOnClosedModule,
                    format!("feedback [{input}={output}] on a module without inputs"),
                );
            }
            let r = c.sigma.get(input);
            let s = c.epsilon.get(output);
            if r.is_none() {
                push(ViolationKind::FeedbackInputMissing, format!("{input} is not an input of {}", names(&c.sigma)));
            }
            if s.is_none() {
                push(
                    ViolationKind::FeedbackOutputMissing,
                    format!("{output} is not an output of {}", names(&c.epsilon)),
                );
            }
            if let (Some(r), Some(s)) = (&r, &s) {
                if r.arity != s.arity {
                    push(ViolationKind::FeedbackArityMismatch, format!("{r} and {s} differ in arity"));
                }
            }
            match r {
                Some(r) => {
                    let mut epsilon = c.epsilon.clone();
                    epsilon.insert(r.clone()).ok()?;
                    Some(Signature { sigma: c.sigma.without(&r), epsilon })
                }
                None => Some(c),
            }
        }
        ModuleExpr::Complement(child) => walk(child, &path.child(0), out),
    }
}

/// Every subexpression, children before parents, with its path.
pub fn subsystems(e: &ModuleExpr) -> Vec<(ExprPath, &ModuleExpr)> {
    fn go<'a>(e: &'a ModuleExpr, path: ExprPath, out: &mut Vec<(ExprPath, &'a ModuleExpr)>) {
        for (i, c) in e.children().into_iter().enumerate() {
            go(c, path.child(i), out);
        }
        out.push((path, e));
    }
    let mut out = Vec::new();
    go(e, ExprPath::root(), &mut out);
    out
}
