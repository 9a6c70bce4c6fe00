//! The `morita` command line.
//!
//! Exit codes: 0 for success and verified verdicts, 1 for failed,
//! inequivalent or refuted verdicts, 2 for usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde_json::{json, Value};

use morita_core::category::{
    build_category, check_functor, discrete_equivalence_verdict, is_discrete, projection_for_step, truncated_theories,
    BoundedModelCategory, DiscreteVerdict,
};
use morita_core::equivalence::{categorical_check, verify_definitional_witness, verify_morita_witness, LogicalVerdict};
use morita_core::expansion::expand_chain;
use morita_core::extensions::{extend_theory, extended_bound, validate_step, ExtensionStep, ValidationStatus};
use morita_core::morphisms::{is_elementary_embedding, is_isomorphism, lift_morphism};
use morita_core::structures::{enumerate_models, Bound, FiniteStructure};
use morita_core::syntax::{simplify_truth, Formula, Sort, Theory, Var};
use morita_core::text::parse_formula;
use morita_core::translator::{codes_for, translate_formula, translate_through_chain, Code, Witness};

use crate::checks::check_translation;
use crate::formats::{parse_morphism, print_model};
use crate::gen::FormulaGen;
use crate::witness::load_witness;
use crate::{load_model, load_step, load_theory, Error};

#[derive(Parser, Debug)]
#[command(name = "morita", version, about = "Definitional and Morita extensions over finite models")]
pub struct Cli {
    /// Carrier size cap per sort.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Depth cap for generated formulas.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_formula_depth: usize,
    /// Remove trivially true or false subformulas from printed translations.
    #[arg(long, global = true)]
    pub simplify: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a theory and validate a chain of extension steps over it.
    Check {
        theory: PathBuf,
        /// Extension files, applied in order.
        #[arg(long)]
        step: Vec<PathBuf>,
    },
    /// Enumerate the models of a theory up to isomorphism.
    Models {
        theory: PathBuf,
        /// Print counts only.
        #[arg(long)]
        count: bool,
    },
    /// Expand a model (or every bounded model) along a chain of steps.
    Expand {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, required = true)]
        step: Vec<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Translate an extended formula back to the base signature.
    Translate {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, required = true)]
        step: Vec<PathBuf>,
        #[arg(long)]
        formula: Option<String>,
        /// Free variable as `name:sort`; repeatable.
        #[arg(long = "free")]
        free: Vec<String>,
        /// Compare each translation with the original on every bounded model.
        #[arg(long)]
        verify: bool,
        /// Check this many generated formulas instead of `--formula`.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a Morita (or definitional) equivalence witness.
    VerifyWitness {
        witness: PathBuf,
        #[arg(long)]
        definitional: bool,
        /// Also check the projection functors and the composed equivalence.
        #[arg(long)]
        categorical: bool,
    },
    /// Build the bounded category of models of a theory.
    Category {
        theory: Option<PathBuf>,
        /// Compare with another theory, both categories discrete.
        #[arg(long)]
        compare: Option<PathBuf>,
        /// Use the one-point theories over N unary predicates instead of files.
        #[arg(long, value_name = "N")]
        truncated: Option<usize>,
    },
    /// Decide fullness, faithfulness and essential surjectivity of the projection functor of a step.
    CheckPi {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        step: PathBuf,
    },
    /// Check a map between two models, optionally lifting it along a step.
    CheckMorphism {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        step: Option<PathBuf>,
    },
}

/// Rendered result of one invocation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    text: String,
    data: Value,
    ok: bool,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

const DEFAULT_BOUND: u32 = 3;

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: rendered },
            };
        }
    };
    if cli.bound == Some(0) {
        return Outcome { code: 2, stdout: String::new(), stderr: "error: --bound must be positive\n".into() };
    }
    match execute(&cli) {
        Ok(r) => {
            let stdout = match cli.format {
                OutputFormat::Text => r.text,
                OutputFormat::Structured => {
                    serde_json::to_string_pretty(&r.data).expect("json values serialize") + "\n"
                }
            };
            Outcome { code: if r.ok { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let bound = cli.bound.unwrap_or(DEFAULT_BOUND);
    match &cli.command {
        Command::Check { theory, step } => check(theory, step, bound),
        Command::Models { theory, count } => models(theory, *count, bound),
        Command::Expand { theory, step, model } => expand(theory, step, model.as_deref(), bound),
        Command::Translate { theory, step, formula, free, verify, samples, seed } => translate(
            cli,
            TranslateArgs { theory, steps: step, formula: formula.as_deref(), free, verify: *verify, samples: *samples, seed: *seed },
            bound,
        ),
        Command::VerifyWitness { witness, definitional, categorical } => {
            verify_witness(witness, *definitional, *categorical, cli.bound)
        }
        Command::Category { theory, compare, truncated } => {
            category(theory.as_deref(), compare.as_deref(), *truncated, cli.bound)
        }
        Command::CheckPi { theory, step } => check_pi(theory, step, bound),
        Command::CheckMorphism { theory, source, target, map, step } => {
            check_morphism(theory, source, target, map, step.as_deref())
        }
    }
}

fn load_chain(t: &Theory, paths: &[PathBuf]) -> Result<(Vec<ExtensionStep>, Vec<Theory>)> {
    let mut steps = Vec::new();
    let mut theories = vec![t.clone()];
    for p in paths {
        let current = theories.last().expect("nonempty");
        let s = load_step(p, current)?;
        let next = extend_theory(current, &s).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        steps.push(s);
        theories.push(next);
    }
    Ok((steps, theories))
}

fn status_text(s: &ValidationStatus) -> String {
    s.to_string()
}

fn check(path: &Path, steps: &[PathBuf], bound: u32) -> Result<Report> {
    let t = load_theory(path)?;
    let sig = &t.signature;
    let mut text = format!(
        "theory {}: {} sorts, {} predicates, {} functions, {} constants, {} axioms\n",
        path.display(),
        sig.sorts().len(),
        sig.predicates().len(),
        sig.functions().len(),
        sig.constants().len(),
        t.axioms.len()
    );
    let (chain, theories) = load_chain(&t, steps)?;
    let mut ok = true;
    let mut b = Bound::uniform(bound);
    let mut step_data = Vec::new();
    for (i, s) in chain.iter().enumerate() {
        let r = validate_step(&theories[i], s, &b);
        ok &= !r.is_invalid();
        let _ = writeln!(text, "step {} ({}): {}", i + 1, steps[i].display(), status_text(&r.status));
        let mut findings = Vec::new();
        for f in &r.findings {
            let line = match f {
                morita_core::extensions::Finding::Syntactic(e) => format!("{e}"),
                morita_core::extensions::Finding::Admissibility { definition, condition, status } => {
                    let st = match status {
                        morita_core::extensions::ConditionStatus::Axiom => "axiom".to_string(),
                        morita_core::extensions::ConditionStatus::Checked(morita_core::structures::Entailment::Refuted(_)) => {
                            "refuted".to_string()
                        }
                        morita_core::extensions::ConditionStatus::Checked(
                            morita_core::structures::Entailment::NoCountermodelUpTo(b),
                        ) => format!("no countermodel up to bound {b}"),
                    };
                    format!("{definition}: {condition}: {st}")
                }
            };
            let _ = writeln!(text, "  {line}");
            findings.push(Value::String(line));
        }
        if let Some(bad) = r.findings.iter().find_map(|f| match f {
            morita_core::extensions::Finding::Admissibility {
                status: morita_core::extensions::ConditionStatus::Checked(morita_core::structures::Entailment::Refuted(m)),
                ..
            } => Some(m),
            _ => None,
        }) {
            let _ = writeln!(text, "  countermodel:");
            for l in print_model(bad).lines() {
                let _ = writeln!(text, "    {l}");
            }
        }
        step_data.push(json!({ "step": i + 1, "status": status_text(&r.status), "findings": findings }));
        b = extended_bound(&b, s);
    }
    Ok(Report {
        text,
        data: json!({
            "theory": path.display().to_string(),
            "sorts": sig.sorts().len(),
            "axioms": t.axioms.len(),
            "bound": bound,
            "steps": step_data,
        }),
        ok,
    })
}

fn size_text(m: &FiniteStructure) -> String {
    let parts: Vec<String> = m.signature().sorts().iter().zip(m.sizes()).map(|(s, n)| format!("|{s}|={n}")).collect();
    parts.join(" ")
}

fn models(path: &Path, count_only: bool, bound: u32) -> Result<Report> {
    let t = load_theory(path)?;
    let ms: Vec<FiniteStructure> = enumerate_models(&t, &Bound::uniform(bound)).collect();
    let mut text = format!("{} models up to isomorphism at bound {bound}\n", ms.len());
    if !count_only {
        for (i, m) in ms.iter().enumerate() {
            let _ = writeln!(text, "\nmodel {} ({})", i + 1, size_text(m));
            text.push_str(&print_model(m));
        }
    }
    let data = json!({
        "bound": bound,
        "count": ms.len(),
        "models": if count_only { Vec::new() } else { ms.iter().map(|m| Value::String(print_model(m))).collect() },
    });
    Ok(Report { text, data, ok: true })
}

fn expand(path: &Path, steps: &[PathBuf], model: Option<&Path>, bound: u32) -> Result<Report> {
    let t = load_theory(path)?;
    let (chain, _) = load_chain(&t, steps)?;
    let inputs: Vec<FiniteStructure> = match model {
        Some(p) => vec![load_model(p, &t.signature)?],
        None => enumerate_models(&t, &Bound::uniform(bound)).collect(),
    };
    let mut text = String::new();
    let mut out = Vec::new();
    let mut ok = true;
    if model.is_none() {
        let _ = writeln!(text, "expanding {} models at bound {bound}", inputs.len());
    }
    for (i, m) in inputs.iter().enumerate() {
        if model.is_none() {
            let _ = writeln!(text, "\nmodel {}", i + 1);
        }
        match expand_chain(m, &t, &chain) {
            Ok(e) => {
                let s = print_model(&e);
                text.push_str(&s);
                out.push(json!({ "expansion": s }));
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "expansion failed: {e}");
                out.push(json!({ "error": e.to_string() }));
            }
        }
    }
    Ok(Report { text, data: json!({ "results": out }), ok })
}

struct TranslateArgs<'a> {
    theory: &'a Path,
    steps: &'a [PathBuf],
    formula: Option<&'a str>,
    free: &'a [String],
    verify: bool,
    samples: Option<usize>,
    seed: u64,
}

fn code_text(code: &Code) -> String {
    if code.is_empty() {
        return "empty".into();
    }
    let parts: Vec<String> = code
        .entries
        .iter()
        .map(|e| match &e.witness {
            Witness::Product(a, b) => format!("{} ~ ({}, {})", e.var.name, a.name, b.name),
            Witness::Left(y) => format!("{} ~ left {}", e.var.name, y.name),
            Witness::Right(y) => format!("{} ~ right {}", e.var.name, y.name),
            Witness::Subsort(y) => format!("{} ~ sub {}", e.var.name, y.name),
            Witness::Quotient(y) => format!("{} ~ class {}", e.var.name, y.name),
        })
        .collect();
    parts.join(", ")
}

fn translate(cli: &Cli, a: TranslateArgs<'_>, bound: u32) -> Result<Report> {
    let t = load_theory(a.theory)?;
    let (chain, theories) = load_chain(&t, a.steps)?;
    let top = theories.last().expect("nonempty");
    let mut free = Vec::new();
    for spec in a.free {
        let (name, sort) = spec.split_once(':').ok_or_else(|| usage(format!("--free expects name:sort, got `{spec}`")))?;
        let sort = Sort::new(sort.trim());
        if !top.signature.has_sort(&sort) {
            return Err(usage(format!("unknown sort `{sort}` in --free")));
        }
        free.push(Var::new(name.trim(), &sort));
    }
    let show = |f: &Formula| if cli.simplify { simplify_truth(f) } else { f.clone() };
    let last = chain.last().expect("at least one step");
    let models_for_check = || -> Vec<FiniteStructure> {
        let mut b = Bound::uniform(bound);
        for s in &chain {
            b = extended_bound(&b, s);
        }
        enumerate_models(top, &b).collect()
    };
    if let Some(n) = a.samples {
        if chain.len() != 1 {
            return Err(usage("--samples works with a single step"));
        }
        let models = models_for_check();
        let g = FormulaGen::new(&top.signature);
        let mut rng = StdRng::seed_from_u64(a.seed);
        let mut checked = 0usize;
        for _ in 0..n {
            let phi = g.generate(&mut rng, &free, cli.max_formula_depth);
            match check_translation(&phi, last, &models) {
                Ok(r) => checked += r.assignments,
                Err(e) => {
                    let text = format!("disagreement for {phi} at bound {bound}: {e}\n");
                    return Ok(Report { text, data: json!({ "agree": false, "formula": phi.to_string(), "error": e.to_string() }), ok: false });
                }
            }
        }
        let text = format!(
            "{n} generated formulas (depth <= {}), {checked} code-satisfying assignments: all agree at bound {bound}\n",
            cli.max_formula_depth
        );
        return Ok(Report { text, data: json!({ "agree": true, "formulas": n, "assignments": checked, "bound": bound }), ok: true });
    }
    let src = a.formula.ok_or_else(|| usage("give --formula or --samples"))?;
    let phi = parse_formula(&top.signature, &free, src).map_err(|e| usage(format!("formula:{}:{}: {}", e.line, e.column, e.message)))?;
    let mut text = String::new();
    let mut rows = Vec::new();
    if chain.len() > 1 {
        if !phi.is_sentence() {
            return Err(usage("translation through several steps needs a sentence"));
        }
        let star = translate_through_chain(&phi, &chain).map_err(|e| usage(e.to_string()))?;
        let _ = writeln!(text, "{}", show(&star));
        rows.push(json!({ "code": "empty", "translation": show(&star).to_string() }));
    } else {
        let new_vars: Vec<Var> = phi.free_variables().into_iter().filter(|v| last.is_new_sort(&v.sort)).collect();
        let codes = codes_for(&new_vars, last).map_err(|e| usage(e.to_string()))?;
        for code in &codes {
            let star = translate_formula(&phi, code, last).map_err(|e| usage(e.to_string()))?;
            let _ = writeln!(text, "code {}: {}", code_text(code), show(&star));
            rows.push(json!({ "code": code_text(code), "translation": show(&star).to_string() }));
        }
    }
    let mut ok = true;
    let mut verdict = Value::Null;
    if a.verify {
        if chain.len() != 1 {
            return Err(usage("--verify works with a single step"));
        }
        let models = models_for_check();
        match check_translation(&phi, last, &models) {
            Ok(r) => {
                let _ = writeln!(
                    text,
                    "agrees on {} models, {} code-satisfying assignments at bound {bound}",
                    models.len(),
                    r.assignments
                );
                verdict = json!({ "agree": true, "models": models.len(), "assignments": r.assignments, "bound": bound });
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "DISAGREES at bound {bound}: {e}");
                verdict = json!({ "agree": false, "error": e.to_string(), "bound": bound });
            }
        }
    }
    Ok(Report { text, data: json!({ "formula": phi.to_string(), "translations": rows, "verification": verdict }), ok })
}

fn verify_witness(path: &Path, definitional: bool, categorical: bool, flag: Option<u32>) -> Result<Report> {
    let wf = load_witness(path)?;
    let bound = flag.or(wf.bound).unwrap_or(DEFAULT_BOUND);
    let report =
        if definitional { verify_definitional_witness(&wf.witness, bound) } else { verify_morita_witness(&wf.witness, bound) };
    let mut text = report.render();
    let mut ok = report.verdict.is_verified();
    let logical = match &report.logical {
        Some(LogicalVerdict::EquivalentUpToBound(b)) => json!({ "verdict": "EquivalentUpToBound", "bound": b.to_string() }),
        Some(LogicalVerdict::Inequivalent { model, satisfies }) => {
            json!({ "verdict": "Inequivalent", "satisfies": satisfies.to_string(), "model": print_model(model) })
        }
        None => Value::Null,
    };
    let mut data = json!({
        "bound": bound,
        "steps": report.steps.iter().map(|s| json!({
            "side": s.side.to_string(), "step": s.index + 1, "status": status_text(&s.report.status)
        })).collect::<Vec<_>>(),
        "final_signatures_equal": report.final_signatures_equal,
        "bases_covered": report.bases_covered,
        "logical": logical,
        "same_sorts": report.same_sorts,
        "verdict": report.verdict.to_string(),
    });
    if categorical {
        let c = categorical_check(&wf.witness, bound);
        text.push_str(&c.render());
        ok &= c.steps_hold() && c.composed_holds();
        data["categorical"] = json!({ "steps_hold": c.steps_hold(), "composed_holds": c.composed_holds() });
    }
    Ok(Report { text, data, ok })
}

fn describe_category(label: &str, c: &BoundedModelCategory, text: &mut String) -> Value {
    let autos = c.automorphism_counts();
    let _ = writeln!(text, "{label}: bound {}", c.bound);
    let _ = writeln!(text, "  objects: {}", c.objects.len());
    let _ = writeln!(text, "  arrows: {}", c.arrow_count());
    let _ = writeln!(text, "  automorphism group sizes: {autos:?}");
    let _ = writeln!(text, "  discrete: {}", is_discrete(c));
    json!({
        "bound": c.bound.to_string(),
        "objects": c.objects.len(),
        "arrows": c.arrow_count(),
        "automorphisms": autos,
        "discrete": is_discrete(c),
    })
}

const TRUNCATION_NOTE: &str = "note: the equivalence of the untruncated theories rests on both having \
2^aleph_0 non-isomorphic models over infinitely many predicates; a finite truncation cannot exhibit it, \
so only the truncated counts are reported";

fn category(theory: Option<&Path>, compare: Option<&Path>, truncated: Option<usize>, flag: Option<u32>) -> Result<Report> {
    let mut text = String::new();
    if let Some(n) = truncated {
        if theory.is_some() || compare.is_some() {
            return Err(usage("--truncated takes no theory files"));
        }
        if n == 0 || n > 12 {
            return Err(usage("--truncated expects 1 to 12 predicates"));
        }
        let bound = flag.unwrap_or(1);
        let (t1, t2) = truncated_theories(n);
        let b = Bound::uniform(bound);
        let (c1, c2) = (build_category(&t1, &b), build_category(&t2, &b));
        let d1 = describe_category(&format!("T1 truncated to {n} predicates"), &c1, &mut text);
        let d2 = describe_category(&format!("T2 truncated to {n} predicates"), &c2, &mut text);
        let verdict = discrete_equivalence_verdict(&c1, &c2).map_err(|e| usage(e.to_string()))?;
        let v = verdict_text(&verdict, bound);
        let _ = writeln!(text, "{v}");
        let _ = writeln!(text, "{TRUNCATION_NOTE}");
        let ok = verdict == DiscreteVerdict::EquivalentAtBound;
        return Ok(Report { text, data: json!({ "left": d1, "right": d2, "verdict": v, "note": TRUNCATION_NOTE }), ok });
    }
    let bound = flag.unwrap_or(DEFAULT_BOUND);
    let path = theory.ok_or_else(|| usage("give a theory file or --truncated"))?;
    let b = Bound::uniform(bound);
    let c = build_category(&load_theory(path)?, &b);
    let d = describe_category(&path.display().to_string(), &c, &mut text);
    let Some(other) = compare else {
        return Ok(Report { text, data: d, ok: true });
    };
    let c2 = build_category(&load_theory(other)?, &b);
    let d2 = describe_category(&other.display().to_string(), &c2, &mut text);
    match discrete_equivalence_verdict(&c, &c2) {
        Ok(v) => {
            let line = verdict_text(&v, bound);
            let _ = writeln!(text, "{line}");
            Ok(Report { text, data: json!({ "left": d, "right": d2, "verdict": line }), ok: v == DiscreteVerdict::EquivalentAtBound })
        }
        Err(e) => {
            let _ = writeln!(text, "no verdict at bound {bound}: {e}");
            Ok(Report { text, data: json!({ "left": d, "right": d2, "verdict": Value::Null, "error": e.to_string() }), ok: false })
        }
    }
}

fn verdict_text(v: &DiscreteVerdict, bound: u32) -> String {
    match v {
        DiscreteVerdict::EquivalentAtBound => format!("EquivalentAtBound({bound})"),
        DiscreteVerdict::NotEquivalentAtBound { left_objects, right_objects } => {
            format!("NotEquivalentAtBound({bound}): {left_objects} vs {right_objects} objects")
        }
    }
}

fn check_pi(theory: &Path, step: &Path, bound: u32) -> Result<Report> {
    let t = load_theory(theory)?;
    let s = load_step(step, &t)?;
    let b = Bound::uniform(bound);
    let f = projection_for_step(&t, &s, &b).map_err(|e| usage(e.to_string()))?;
    let p = check_functor(&f);
    let laws = f.preserves_structure();
    let text = format!(
        "source objects: {} (bound {})\ntarget objects: {} (bound {bound})\nfunctor laws: {laws}\nfull: {}\nfaithful: {}\nessentially surjective: {}\n",
        f.source.objects.len(),
        f.source.bound,
        f.target.objects.len(),
        p.full,
        p.faithful,
        p.essentially_surjective
    );
    let data = json!({
        "bound": bound,
        "source_objects": f.source.objects.len(),
        "target_objects": f.target.objects.len(),
        "functor_laws": laws,
        "full": p.full,
        "faithful": p.faithful,
        "essentially_surjective": p.essentially_surjective,
    });
    Ok(Report { text, data, ok: p.all() && laws })
}

fn check_morphism(theory: &Path, source: &Path, target: &Path, map: &Path, step: Option<&Path>) -> Result<Report> {
    let t = load_theory(theory)?;
    let m = Arc::new(load_model(source, &t.signature)?);
    let n = Arc::new(load_model(target, &t.signature)?);
    let text_map = std::fs::read_to_string(map).map_err(|e| Error::Io { path: map.to_owned(), source: e })?;
    let h = parse_morphism(&text_map, &m, &n).map_err(|e| Error::parse(map, e))?;
    let iso = is_isomorphism(&h);
    let elem = is_elementary_embedding(&h);
    let mut text = format!("isomorphism: {iso}\nelementary embedding: {elem}\n");
    let mut data = json!({ "isomorphism": iso, "elementary_embedding": elem });
    let mut ok = elem;
    if let Some(p) = step {
        let s = load_step(p, &t)?;
        let chain = [s.clone()];
        let mp = expand_chain(&m, &t, &chain).map_err(|e| usage(format!("source: {e}")))?;
        let np = expand_chain(&n, &t, &chain).map_err(|e| usage(format!("target: {e}")))?;
        match lift_morphism(&h, &Arc::new(mp), &Arc::new(np), &s) {
            Ok(l) => {
                let lifted_elem = is_elementary_embedding(&l);
                let _ = writeln!(text, "lifted along {}:", p.display());
                text.push_str(&l.to_string());
                let _ = writeln!(text, "lifted elementary embedding: {lifted_elem}");
                data["lifted"] = json!({ "map": l.to_string(), "elementary_embedding": lifted_elem });
                ok &= lifted_elem;
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "lift failed: {e}");
                data["lifted"] = json!({ "error": e.to_string() });
            }
        }
    }
    Ok(Report { text, data, ok })
}
