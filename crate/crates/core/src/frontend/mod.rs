//! The `.msl` text format: documents declaring a domain, primitive modules,
//! algebraic systems, multi-language formulas and instances.

mod lexer;
mod logic;
mod parser;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::ModuleExpr;
use crate::error::Error;
use crate::primitive::PrimitiveModule;
use crate::structures::{Domain, GroundAtom, Structure, Vocabulary};

pub use lexer::{lex, Tok, Token};
pub use logic::{compile_logic_formula, Leaf, LogicFormula};
pub use parser::{parse_prop, parse_rules};

/// A 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },

    #[error("{line}:{col}: undefined name `{name}`")]
    Undefined { line: usize, col: usize, name: String },

    #[error("{line}:{col}: duplicate definition of `{name}`")]
    Duplicate { line: usize, col: usize, name: String },

    #[error("{line}:{col}: {error}")]
    Invalid { line: usize, col: usize, error: Error },
}

impl SpecError {
    pub(crate) fn syntax(at: Span, message: impl Into<String>) -> Self {
        Self::Syntax { line: at.line, col: at.col, message: message.into() }
    }

    pub(crate) fn invalid(at: Span, error: Error) -> Self {
        Self::Invalid { line: at.line, col: at.col, error }
    }

    pub fn span(&self) -> Span {
        let (line, col) = match self {
            Self::Syntax { line, col, .. }
            | Self::Undefined { line, col, .. }
            | Self::Duplicate { line, col, .. }
            | Self::Invalid { line, col, .. } => (*line, *col),
        };
        Span { line, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Propositional,
    Stable,
    WellFounded,
    /// Models listed explicitly.
    Explicit,
    /// Models given by a set of inferences.
    Inferences,
}

impl ModuleKind {
    pub(crate) fn from_keyword(kw: &str) -> Option<Self> {
        Some(match kw {
            "p" => Self::Propositional,
            "sm" => Self::Stable,
            "wf" => Self::WellFounded,
            "set" => Self::Explicit,
            "inf" => Self::Inferences,
            _ => return None,
        })
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Propositional => "p",
            Self::Stable => "sm",
            Self::WellFounded => "wf",
            Self::Explicit => "set",
            Self::Inferences => "inf",
        })
    }
}

#[derive(Clone)]
pub struct ModuleDef {
    pub name: String,
    pub kind: ModuleKind,
    pub module: Arc<dyn PrimitiveModule>,
    pub span: Span,
}

impl fmt::Debug for ModuleDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "module {} : {} {}", self.name, self.kind, self.module.signature())
    }
}

#[derive(Debug, Clone)]
pub enum SystemSource {
    Algebra,
    Formula(LogicFormula),
}

#[derive(Debug, Clone)]
pub struct SystemDef {
    pub name: String,
    pub expr: ModuleExpr,
    pub source: SystemSource,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDef {
    pub name: String,
    pub atoms: Vec<GroundAtom>,
    pub span: Span,
}

/// A parsed document. Modules, systems, formulas and instances share one
/// namespace; every name must be defined before it is used.
#[derive(Debug, Clone)]
pub struct SpecDocument {
    pub domain: Domain,
    /// Symbols declared in `vocab { ... }` blocks, used to resolve arities.
    pub declared: Vocabulary,
    modules: Vec<ModuleDef>,
    systems: Vec<SystemDef>,
    instances: Vec<InstanceDef>,
}

impl SpecDocument {
    pub fn new(domain: Domain) -> Self {
        Self {
            domain,
            declared: Vocabulary::empty(),
            modules: Vec::new(),
            systems: Vec::new(),
            instances: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        parser::parse_document(text)
    }

    pub fn modules(&self) -> &[ModuleDef] {
        &self.modules
    }

    pub fn systems(&self) -> &[SystemDef] {
        &self.systems
    }

    pub fn instances(&self) -> &[InstanceDef] {
        &self.instances
    }

    pub fn module(&self, name: &str) -> Option<&ModuleDef> {
        self.modules.iter().find(|m| m.name == name)
    }

    pub fn system(&self, name: &str) -> Option<&SystemDef> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn instance(&self, name: &str) -> Option<&InstanceDef> {
        self.instances.iter().find(|i| i.name == name)
    }

    /// The expression a name stands for: a system's expression, or a
    /// primitive module.
    pub fn resolve(&self, name: &str) -> Option<ModuleExpr> {
        if let Some(s) = self.system(name) {
            return Some(s.expr.clone());
        }
        self.module(name).map(|m| ModuleExpr::prim(m.name.clone(), m.module.clone()))
    }

    pub fn is_defined(&self, name: &str) -> bool {
        self.module(name).is_some() || self.system(name).is_some() || self.instance(name).is_some()
    }

    fn claim(&self, name: &str, span: Span) -> Result<(), SpecError> {
        if self.is_defined(name) {
            Err(SpecError::Duplicate { line: span.line, col: span.col, name: name.to_string() })
        } else {
            Ok(())
        }
    }

    pub fn add_module(
        &mut self,
        name: &str,
        kind: ModuleKind,
        module: Arc<dyn PrimitiveModule>,
        span: Span,
    ) -> Result<(), SpecError> {
        self.claim(name, span)?;
        self.modules.push(ModuleDef { name: name.to_string(), kind, module, span });
        Ok(())
    }

    pub fn add_system(
        &mut self,
        name: &str,
        expr: ModuleExpr,
        source: SystemSource,
        span: Span,
    ) -> Result<(), SpecError> {
        self.claim(name, span)?;
        self.systems.push(SystemDef { name: name.to_string(), expr, source, span });
        Ok(())
    }

    pub fn add_instance(&mut self, name: &str, atoms: Vec<GroundAtom>, span: Span) -> Result<(), SpecError> {
        self.claim(name, span)?;
        for a in &atoms {
            for arg in &a.args {
                if !self.domain.contains(arg) {
                    return Err(SpecError::invalid(
                        span,
                        Error::InvalidAtom(format!("{a}: `{arg}` is not in the domain {}", self.domain)),
                    ));
                }
            }
        }
        self.instances.push(InstanceDef { name: name.to_string(), atoms, span });
        Ok(())
    }

    /// Parses an algebra expression whose names refer to this document.
    pub fn parse_expr(&self, text: &str) -> Result<ModuleExpr, SpecError> {
        parser::parse_expr_text(text, self)
    }

    /// Parses a multi-language formula whose named leaves refer to this
    /// document.
    pub fn parse_logic_formula(&self, text: &str) -> Result<LogicFormula, SpecError> {
        parser::parse_logic_text(text, self)
    }

    /// The instance `name` as a structure over `sigma`.
    pub fn instance_structure(&self, name: &str, sigma: &Vocabulary) -> Result<Structure, SpecError> {
        let inst = self
            .instance(name)
            .ok_or_else(|| SpecError::Undefined { line: 0, col: 0, name: name.to_string() })?;
        Structure::new(sigma.clone(), self.domain.clone(), inst.atoms.iter().cloned())
            .map_err(|e| SpecError::invalid(inst.span, e))
    }
}

/// Parses a standalone expression against `doc`.
pub fn parse_expr(text: &str, doc: &SpecDocument) -> Result<ModuleExpr, SpecError> {
    doc.parse_expr(text)
}
