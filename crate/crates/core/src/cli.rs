//! The `modsys` command line. [`run`] is the whole program minus process
//! I/O, so tests drive it directly.
//!
//! Exit codes: 0 success, 1 a semantic assertion failed (`equiv` found a
//! difference, `trace` found no derivation, `selftest` failed), 2 the input
//! could not be parsed or validated.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{check_wellformed, signature_of, ModuleExpr};
use crate::error::Error;
use crate::frontend::{SpecDocument, SpecError};
use crate::primitive::Signature;
use crate::selftest;
use crate::semantics::{
    default_tau, derivation_trace, ent_inferences, expand, mt_models, op_models, propagate, DerivationTree,
    InferenceSet, ModelSet, Propagation,
};
use crate::structures::{parse_literals, parse_structure, Structure, Symbol, Vocabulary};

#[derive(Parser, Debug)]
#[command(name = "modsys", version, about = "Evaluate modular systems written in the .msl format")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Target {
    /// The .msl document.
    file: PathBuf,
    /// Name of a system or module defined in the document.
    #[arg(long)]
    system: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report signatures and well-formedness of every definition.
    Check { file: PathBuf },
    /// Model-theoretic models of a system.
    Models(Target),
    /// Models of a system expanding a named instance.
    Expand {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        instance: String,
    },
    /// Operational models of a system.
    OpModels {
        #[command(flatten)]
        target: Target,
        /// Extra propositional symbols added to the state vocabulary.
        #[arg(long, value_delimiter = ',')]
        extend_tau: Vec<String>,
    },
    /// Assert that the model-theoretic and operational models coincide.
    Equiv(Target),
    /// Derivation tree of one transition between two states.
    Trace {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The entailed inferences of a system.
    Infer {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        max_premise: usize,
    },
    /// Close a set of literals under the entailed inferences of a system.
    Propagate {
        #[command(flatten)]
        target: Target,
        /// Literals such as `i,~a`.
        #[arg(long, allow_hyphen_values = true)]
        assume: String,
        #[arg(long, default_value_t = 3)]
        max_premise: usize,
    },
    /// Run the built-in golden suite.
    Selftest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { code: 0, text, json }
    }
}

/// Parse and validation failures; always exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<Report, Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match &cli.command {
        Command::Check { file } => check(file),
        Command::Models(t) => models(t),
        Command::Expand { target, instance } => expand_cmd(target, instance),
        Command::OpModels { target, extend_tau } => op_models_cmd(target, extend_tau),
        Command::Equiv(t) => equiv(t),
        Command::Trace { target, from, to } => trace(target, from, to),
        Command::Infer { target, max_premise } => infer(target, *max_premise),
        Command::Propagate { target, assume, max_premise } => propagate_cmd(target, assume, *max_premise),
        Command::Selftest => selftest_cmd(),
    };
    match (result, cli.json) {
        (Ok(r), false) => Outcome { code: r.code, stdout: r.text, stderr: String::new() },
        (Ok(r), true) => Outcome { code: r.code, stdout: pretty(&r.json), stderr: String::new() },
        (Err(Failure(msg)), false) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
        (Err(Failure(msg)), true) => Outcome { code: 2, stdout: pretty(&json!({ "error": msg })), stderr: String::new() },
    }
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("JSON values always serialise"))
}

fn load(file: &Path) -> Result<SpecDocument, Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure(format!("{}: {e}", file.display())))?;
    SpecDocument::parse(&text).map_err(|e: SpecError| Failure(format!("{}:{e}", file.display())))
}

fn target(t: &Target) -> Result<(SpecDocument, ModuleExpr), Failure> {
    let doc = load(&t.file)?;
    let e = doc
        .resolve(&t.system)
        .ok_or_else(|| Failure(format!("{}: no system or module named `{}`", t.file.display(), t.system)))?;
    let report = check_wellformed(&e);
    if !report.ok() {
        return Err(Failure(format!("system `{}` is ill-formed:\n{report}", t.system)));
    }
    Ok((doc, e))
}

fn vocab_json(v: &Vocabulary) -> Value {
    json!(v.iter().map(|s: Symbol| if s.arity == 0 { s.name } else { s.to_string() }).collect::<Vec<_>>())
}

fn signature_json(sig: &Signature) -> Value {
    json!({ "sigma": vocab_json(&sig.sigma), "epsilon": vocab_json(&sig.epsilon) })
}

fn structure_json(s: &Structure) -> Value {
    json!(s.atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>())
}

fn model_set_text(ms: &ModelSet) -> String {
    if ms.is_empty() {
        "none exists\n".to_string()
    } else {
        ms.to_string()
    }
}

fn model_set_json(system: &str, ms: &ModelSet) -> Value {
    json!({
        "system": system,
        "signature": signature_json(&ms.signature),
        "count": ms.len(),
        "models": ms.structures.iter().map(structure_json).collect::<Vec<_>>(),
    })
}

fn check(file: &Path) -> CmdResult {
    let doc = load(file)?;
    let mut text = String::new();
    let mut modules = Vec::new();
    let mut systems = Vec::new();
    let mut ok = true;
    for m in doc.modules() {
        let sig = m.module.signature();
        text += &format!("module {} : {} {sig}\n", m.name, m.kind);
        modules.push(json!({ "name": m.name, "kind": m.kind.to_string(), "signature": signature_json(sig) }));
    }
    for s in doc.systems() {
        let report = check_wellformed(&s.expr);
        ok &= report.ok();
        text += &format!("system {} = {}\n", s.name, s.expr);
        let sig = if report.ok() { Some(signature_of(&s.expr)?) } else { None };
        if let Some(sig) = &sig {
            text += &format!("  {sig}\n");
        }
        for line in report.to_string().lines() {
            text += &format!("  {line}\n");
        }
        systems.push(json!({
            "name": s.name,
            "expr": s.expr.to_string(),
            "signature": sig.as_ref().map(signature_json),
            "well_formed": report.ok(),
            "violations": report.violations.iter().map(|v| json!({
                "path": v.path.to_string(),
                "kind": v.kind.to_string(),
                "message": v.message,
            })).collect::<Vec<_>>(),
        }));
    }
    for i in doc.instances() {
        text += &format!("instance {} ({} atoms)\n", i.name, i.atoms.len());
    }
    let json = json!({ "domain": doc.domain.elements(), "modules": modules, "systems": systems, "well_formed": ok });
    Ok(Report { code: if ok { 0 } else { 2 }, text, json })
}

fn models(t: &Target) -> CmdResult {
    let (doc, e) = target(t)?;
    let ms = mt_models(&e, &doc.domain)?;
    Ok(Report::ok(model_set_text(&ms), model_set_json(&t.system, &ms)))
}

fn expand_cmd(t: &Target, instance: &str) -> CmdResult {
    let (doc, e) = target(t)?;
    if doc.instance(instance).is_none() {
        return Err(Failure(format!("{}: no instance named `{instance}`", t.file.display())));
    }
    let sig = signature_of(&e)?;
    let inst = doc
        .instance_structure(instance, &sig.sigma)
        .map_err(|e| Failure(format!("{}:{e}", t.file.display())))?;
    let ms = expand(&e, &inst)?;
    let mut json = model_set_json(&t.system, &ms);
    json["instance"] = json!(instance);
    Ok(Report::ok(model_set_text(&ms), json))
}

fn tau_of(e: &ModuleExpr, extra: &[String]) -> Result<Vocabulary, Failure> {
    let mut tau = default_tau(e)?;
    for name in extra.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        tau.insert(Symbol::prop(name))?;
    }
    Ok(tau)
}

fn op_models_cmd(t: &Target, extra: &[String]) -> CmdResult {
    let (doc, e) = target(t)?;
    let tau = tau_of(&e, extra)?;
    let ms = op_models(&e, &tau, &doc.domain)?;
    let mut json = model_set_json(&t.system, &ms);
    json["tau"] = vocab_json(&tau);
    Ok(Report::ok(model_set_text(&ms), json))
}

fn equiv(t: &Target) -> CmdResult {
    let (doc, e) = target(t)?;
    let mt = mt_models(&e, &doc.domain)?;
    let op = op_models(&e, &default_tau(&e)?, &doc.domain)?;
    let only_mt: Vec<&Structure> = mt.structures.iter().filter(|s| !op.contains(s)).collect();
    let only_op: Vec<&Structure> = op.structures.iter().filter(|s| !mt.contains(s)).collect();
    let equal = only_mt.is_empty() && only_op.is_empty();
    let text = if equal {
        format!("equivalent: {} models\n", mt.len())
    } else {
        let mut t = format!("NOT equivalent: {} mt models, {} op models\n", mt.len(), op.len());
        for s in &only_mt {
            t += &format!("- {} (mt only)\n", s.canonical());
        }
        for s in &only_op {
            t += &format!("+ {} (op only)\n", s.canonical());
        }
        t
    };
    let json = json!({
        "system": t.system,
        "equivalent": equal,
        "count": mt.len(),
        "only_mt": only_mt.iter().map(|s| structure_json(s)).collect::<Vec<_>>(),
        "only_op": only_op.iter().map(|s| structure_json(s)).collect::<Vec<_>>(),
    });
    Ok(Report { code: if equal { 0 } else { 1 }, text, json })
}

fn tree_json(t: &DerivationTree) -> Value {
    json!({
        "rule": t.rule,
        "expr": t.expr,
        "path": t.path.to_string(),
        "from": t.from.canonical(),
        "to": t.to.canonical(),
        "side_conditions": t.side_conditions,
        "children": t.children.iter().map(tree_json).collect::<Vec<_>>(),
    })
}

fn trace(t: &Target, from: &str, to: &str) -> CmdResult {
    let (doc, e) = target(t)?;
    let tau = default_tau(&e)?;
    let b1 = parse_structure(from, &tau, &doc.domain)?;
    let b2 = parse_structure(to, &tau, &doc.domain)?;
    Ok(match derivation_trace(&e, &b1, &b2)? {
        Some(tree) => Report::ok(tree.to_string(), json!({ "derivable": true, "tree": tree_json(&tree) })),
        None => Report {
            code: 1,
            text: format!("not derivable: {} -> {}\n", b1.canonical(), b2.canonical()),
            json: json!({ "derivable": false, "from": b1.canonical(), "to": b2.canonical() }),
        },
    })
}

fn inferences_of(doc: &SpecDocument, e: &ModuleExpr, max_premise: usize) -> Result<InferenceSet, Failure> {
    let ms = mt_models(e, &doc.domain)?;
    Ok(ent_inferences(&ms.structures, &ms.signature.vocab(), &doc.domain, max_premise)?)
}

fn infer(t: &Target, max_premise: usize) -> CmdResult {
    let (doc, e) = target(t)?;
    let set = inferences_of(&doc, &e, max_premise)?;
    let lines: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    let json = json!({ "system": t.system, "max_premise": max_premise, "count": lines.len(), "inferences": lines });
    Ok(Report::ok(set.to_string(), json))
}

fn propagate_cmd(t: &Target, assume: &str, max_premise: usize) -> CmdResult {
    let (doc, e) = target(t)?;
    let set = inferences_of(&doc, &e, max_premise)?;
    let start = parse_literals(assume)?;
    let result = propagate(&set, &start)?;
    let json = match &result {
        Propagation::Closed(s) => json!({
            "conflict": false,
            "literals": s.literals().map(|l| l.to_string()).collect::<Vec<_>>(),
        }),
        Propagation::Conflict { literal, inference } => json!({
            "conflict": true,
            "literal": literal.to_string(),
            "inference": inference.to_string(),
        }),
    };
    Ok(Report::ok(format!("{result}\n"), json))
}

fn selftest_cmd() -> CmdResult {
    let checks = selftest::run()?;
    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        if c.passed {
            text += &format!("PASS {}\n", c.name);
        } else {
            text += &format!("FAIL {}: got {:?}, expected {:?}\n", c.name, c.got, c.expected);
        }
    }
    text += if passed { "selftest passed\n" } else { "selftest FAILED\n" };
    let json = json!({
        "passed": passed,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "got": c.got,
            "expected": c.expected,
        })).collect::<Vec<_>>(),
    });
    Ok(Report { code: if passed { 0 } else { 1 }, text, json })
}
