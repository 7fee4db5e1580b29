//! Logics for axiomatising primitive modules.

pub mod axioms;
pub mod program;
pub mod prop;
pub mod stable;
pub mod wellfounded;

pub use axioms::{module_of_axioms, AxiomModule, Axioms, Logic};
pub use program::{ground, AtomPattern, BodyLiteral, Head, LogicProgram, Rule, Semantics, Term};
pub use prop::{prop_models, PropFormula};
pub use stable::{is_stable_model, stable_models};
pub use wellfounded::{well_founded_model, ThreeValuedModel};
