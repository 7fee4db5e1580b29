//! The golden suite behind `modsys selftest`.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::frontend::{parse_rules, SpecDocument};
use crate::logics::{stable_models, LogicProgram, Semantics};
use crate::semantics::mt_models;
use crate::structures::{Domain, Structure, Vocabulary};

/// The shipped choice document.
pub const CHOICE: &str = include_str!("../msl/choice.msl");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// What was computed, one canonical structure per entry.
    pub got: Vec<String>,
    pub expected: Vec<String>,
}

fn sorted(v: impl IntoIterator<Item = String>) -> Vec<String> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn check(name: &'static str, got: Vec<String>, expected: &[&str]) -> Check {
    let got = sorted(got);
    let expected = sorted(expected.iter().map(|s| s.to_string()));
    Check { name, passed: got == expected, got, expected }
}

/// P_M0, written out independently of the shipped document.
fn p_m0() -> Result<LogicProgram> {
    let rules = parse_rules("a :- i, not b. b :- i, not a.").expect("fixed rule text parses");
    LogicProgram::new(rules, Semantics::Stable, Vocabulary::props(["i"]), Vocabulary::props(["a", "b"]), Vocabulary::empty())
}

/// Runs every check of the suite.
pub fn run() -> Result<Vec<Check>> {
    let doc = SpecDocument::parse(CHOICE).expect("the shipped choice document parses");
    let d = Domain::propositional();
    let lines = |name: &str| -> Result<Vec<String>> {
        Ok(mt_models(&doc.resolve(name).expect("shipped system"), &d)?.lines())
    };
    let p_m0 = p_m0()?;
    let facts = |on: bool| Structure::props(&["i"], if on { &["i"] } else { &[] });
    let sm = |on: bool| -> Result<Vec<String>> {
        Ok(stable_models(&p_m0, &facts(on))?.iter().map(Structure::canonical).collect())
    };
    let m0 = lines("M0")?;
    let p = lines("P")?;
    Ok(vec![
        check("stable models of P_M0 with i true", sm(true)?, &["{a,i}", "{b,i}"]),
        check("stable models of P_M0 with i false", sm(false)?, &["{}"]),
        check("models of M0", m0.clone(), &["{}", "{a,i}", "{b,i}"]),
        check(
            "models of M1",
            lines("M1")?,
            &["{}", "{a}", "{b}", "{a,b}", "{a',b',i}", "{a,a',i}", "{b,b',i}", "{a,b,i}"],
        ),
        check("models of M2", lines("M2")?, &["{}", "{a,a',i}", "{b,b',i}"]),
        Check { name: "projection of M2 onto {i,a,b} equals M0", passed: p == m0, got: p, expected: m0 },
    ])
}
