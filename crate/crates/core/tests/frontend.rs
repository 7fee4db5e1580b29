use modsys::algebra::{check_wellformed, subsystems, ViolationKind};
use modsys::frontend::{compile_logic_formula, SpecDocument, SpecError, SystemSource};
use modsys::semantics::mt_models;
use modsys::structures::Domain;

const CHOICE: &str = include_str!("../msl/choice.msl");
const MIXED: &str = include_str!("../msl/mixed.msl");
const COLORING: &str = include_str!("../msl/coloring.msl");

fn lines(doc: &SpecDocument, name: &str) -> Vec<String> {
    mt_models(&doc.resolve(name).unwrap(), &doc.domain).unwrap().lines()
}

#[test]
fn shipped_documents_are_well_formed() {
    for text in [CHOICE, MIXED, COLORING] {
        let doc = SpecDocument::parse(text).unwrap();
        for s in doc.systems() {
            assert!(check_wellformed(&s.expr).ok(), "{}", s.name);
        }
    }
}

#[test]
fn system_expressions_render_and_parse_back() {
    for text in [CHOICE, MIXED, COLORING] {
        let doc = SpecDocument::parse(text).unwrap();
        for s in doc.systems().iter().filter(|s| matches!(s.source, SystemSource::Algebra)) {
            let rendered = s.expr.to_string();
            assert_eq!(doc.parse_expr(&rendered).unwrap(), s.expr, "{rendered}");
        }
    }
}

#[test]
fn the_formula_and_the_expression_agree() {
    let doc = SpecDocument::parse(MIXED).unwrap();
    let want = vec!["{a,b}", "{a,b,c}", "{a,c}", "{d}"];
    assert_eq!(lines(&doc, "M"), want);
    assert_eq!(lines(&doc, "PHI"), want);
}

#[test]
fn formulas_over_named_modules_compile_like_the_algebra() {
    let doc = SpecDocument::parse(MIXED).unwrap();
    let f = doc.parse_logic_formula("exists b', c' (((M1 or M2) and M3 and M4) and [c=c' and b=b'])").unwrap();
    let e = compile_logic_formula(&f, "F").unwrap();
    assert_eq!(e, doc.resolve("M").unwrap());
}

#[test]
fn mixed_system_has_ten_subsystems() {
    let doc = SpecDocument::parse(MIXED).unwrap();
    let m = doc.resolve("M").unwrap();
    let subs = subsystems(&m);
    assert_eq!(subs.len(), 10);
    let count = |op: &str| subs.iter().filter(|(_, e)| e.operator() == op).count();
    assert_eq!(
        [count("primitive"), count("union"), count("composition"), count("feedback"), count("projection")],
        [4, 1, 2, 2, 1]
    );
}

fn error(text: &str) -> SpecError {
    SpecDocument::parse(text).unwrap_err()
}

#[test]
fn errors_carry_positions() {
    let base = "module A : p { inputs {x} outputs {y} formula { y <-> x } }\n\
                module B : p { inputs {y} outputs {z} formula { z <-> y } }\n";
    let cases: &[(&str, (usize, usize), &str)] = &[
        ("system S = A >> ;", (3, 17), "syntax error"),
        ("system S = A >> C;", (3, 17), "undefined name `C`"),
        ("system A = B;", (3, 8), "duplicate definition of `A`"),
        ("system S = (A | B;", (3, 18), "syntax error"),
        ("instance i { x(1) }", (3, 10), "not in the domain"),
        ("module C : q { }", (3, 12), "syntax error"),
    ];
    for (line, (l, c), needle) in cases {
        let e = error(&format!("{base}{line}\n"));
        assert_eq!((e.span().line, e.span().col), (*l, *c), "{line}: {e}");
        assert!(e.to_string().contains(needle), "{line}: {e}");
    }
}

#[test]
fn ill_formed_expressions_parse_but_are_reported() {
    let doc = SpecDocument::parse(
        "module A : p { inputs {x} outputs {y} formula { y <-> x } }\n\
         module B : p { inputs {y} outputs {x} formula { x <-> y } }\n",
    )
    .unwrap();
    let report = check_wellformed(&doc.parse_expr("A >> B").unwrap());
    assert!(report.violations.iter().any(|v| v.kind == ViolationKind::CyclicDependency), "{report}");
    let report = check_wellformed(&doc.parse_expr("A[q=y]").unwrap());
    assert!(report.violations.iter().any(|v| v.kind == ViolationKind::FeedbackInputMissing), "{report}");
}

#[test]
fn comments_and_ranges_are_accepted() {
    let doc = SpecDocument::parse(
        "// a line comment\n% another\ndomain {1..3}\n\
         module A : sm { inputs {P/1} outputs {Q/1} rules { Q(X) :- P(X). } }\n\
         instance two { P(1), P(3) }\n",
    )
    .unwrap();
    assert_eq!(doc.domain, Domain::new(["1", "2", "3"]).unwrap());
    let sigma = doc.module("A").unwrap().module.signature().sigma.clone();
    let inst = doc.instance_structure("two", &sigma).unwrap();
    let got = modsys::semantics::expand(&doc.resolve("A").unwrap(), &inst).unwrap().lines();
    assert_eq!(got, vec!["{P(1),P(3),Q(1),Q(3)}"]);
}
