//! Multi-language formulas and their compilation into the algebra.
//!
//! Leaves are primitive modules in some logic; `and` becomes sequential
//! composition, `or` union, `exists` projection, and equality annotations
//! feedback. A conjunction is composed in the written order when that is
//! well-formed and in the swapped order otherwise.

use std::fmt;
use std::sync::Arc;

use super::{ModuleKind, Span, SpecError};
use crate::algebra::{check_wellformed, signature_of, ModuleExpr};
use crate::error::Error;
use crate::primitive::PrimitiveModule;
use crate::structures::Vocabulary;

#[derive(Clone)]
pub struct Leaf {
    pub kind: ModuleKind,
    pub module: Arc<dyn PrimitiveModule>,
    pub span: Span,
}

impl fmt::Debug for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Leaf({} {} @{})", self.kind, self.module.signature(), self.span)
    }
}

#[derive(Debug, Clone)]
pub enum LogicFormula {
    Leaf(Leaf),
    /// A module or system defined elsewhere in the document.
    Named { name: String, expr: ModuleExpr, span: Span },
    And(Box<LogicFormula>, Box<LogicFormula>, Span),
    Or(Box<LogicFormula>, Box<LogicFormula>, Span),
    Exists { symbols: Vec<String>, body: Box<LogicFormula>, span: Span },
    /// `φ[R=S]...`
    Feedback { body: Box<LogicFormula>, pairs: Vec<(String, String)>, span: Span },
    /// A conjunct `[R=S and ...]`, applied to the rest of its conjunction.
    Equalities { pairs: Vec<(String, String)>, span: Span },
}

impl LogicFormula {
    pub fn span(&self) -> Span {
        match self {
            Self::Leaf(l) => l.span,
            Self::Named { span, .. }
            | Self::And(_, _, span)
            | Self::Or(_, _, span)
            | Self::Exists { span, .. }
            | Self::Feedback { span, .. }
            | Self::Equalities { span, .. } => *span,
        }
    }
}

/// Compiles `f` into an algebraic expression. Inline leaves become
/// primitives named `{name}_1`, `{name}_2`, ... in source order.
pub fn compile_logic_formula(f: &LogicFormula, name: &str) -> Result<ModuleExpr, SpecError> {
    let mut leaves = 0;
    compile(f, name, &mut leaves)
}

fn ill_formed(at: Span, e: &ModuleExpr) -> Option<SpecError> {
    let report = check_wellformed(e);
    (!report.ok()).then(|| SpecError::invalid(at, Error::IllFormed(report.to_string())))
}

fn feedback(mut e: ModuleExpr, pairs: &[(String, String)], at: Span) -> Result<ModuleExpr, SpecError> {
    for (r, s) in pairs {
        e = ModuleExpr::feedback(e, r.clone(), s.clone());
        if let Some(err) = ill_formed(at, &e) {
            return Err(err);
        }
    }
    Ok(e)
}

fn conjuncts<'a>(f: &'a LogicFormula, out: &mut Vec<&'a LogicFormula>) {
    match f {
        LogicFormula::And(l, r, _) => {
            conjuncts(l, out);
            conjuncts(r, out);
        }
        other => out.push(other),
    }
}

fn compile(f: &LogicFormula, name: &str, leaves: &mut usize) -> Result<ModuleExpr, SpecError> {
    match f {
        LogicFormula::Leaf(leaf) => {
            *leaves += 1;
            Ok(ModuleExpr::prim(format!("{name}_{leaves}"), leaf.module.clone()))
        }
        LogicFormula::Named { expr, .. } => Ok(expr.clone()),
        LogicFormula::Or(l, r, at) => {
            let e = ModuleExpr::union(compile(l, name, leaves)?, compile(r, name, leaves)?);
            match ill_formed(*at, &e) {
                Some(err) => Err(err),
                None => Ok(e),
            }
        }
        LogicFormula::And(_, _, at) => {
            let mut parts = Vec::new();
            conjuncts(f, &mut parts);
            let mut acc: Option<ModuleExpr> = None;
            let mut equalities = Vec::new();
            for part in parts {
                if let LogicFormula::Equalities { pairs, span } = part {
                    equalities.push((pairs, *span));
                    continue;
                }
                let next = compile(part, name, leaves)?;
                acc = Some(match acc {
                    None => next,
                    Some(prev) => {
                        let written = ModuleExpr::compose(prev.clone(), next.clone());
                        match ill_formed(*at, &written) {
                            None => written,
                            Some(err) => {
                                let swapped = ModuleExpr::compose(next, prev);
                                if ill_formed(*at, &swapped).is_some() {
                                    return Err(err);
                                }
                                swapped
                            }
                        }
                    }
                });
            }
            let mut e = acc.ok_or_else(|| {
                SpecError::invalid(*at, Error::Precondition("equalities need a formula to apply to".into()))
            })?;
            for (pairs, span) in equalities {
                e = feedback(e, pairs, span)?;
            }
            Ok(e)
        }
        LogicFormula::Exists { symbols, body, span } => {
            let inner = compile(body, name, leaves)?;
            let vocab = signature_of(&inner).map_err(|e| SpecError::invalid(*span, e))?.vocab();
            let mut keep: Vocabulary = vocab.clone();
            for s in symbols {
                let sym = vocab.get(s).ok_or_else(|| {
                    SpecError::invalid(
                        *span,
                        Error::Precondition(format!("`{s}` is not a symbol of the quantified formula {vocab}")),
                    )
                })?;
                keep = keep.without(&sym);
            }
            Ok(ModuleExpr::project(keep, inner))
        }
        LogicFormula::Feedback { body, pairs, span } => feedback(compile(body, name, leaves)?, pairs, *span),
        LogicFormula::Equalities { span, .. } => Err(SpecError::invalid(
            *span,
            Error::Precondition("equalities must be a conjunct of a formula".into()),
        )),
    }
}
