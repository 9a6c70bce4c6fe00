//! Checking user-supplied equivalence witnesses at a bound.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::category::{build_category, check_functor, projection_functor, projection_for_step, FunctorProperties};
use crate::expansion::expand_chain;
use crate::extensions::{extend_theory, extended_bound, is_definitional, validate_step, ExtensionStep, ValidationReport};
use crate::structures::{enumerate_models, Bound, CompiledTheory, FiniteStructure};
use crate::syntax::Theory;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EquivalenceError {
    SignatureMismatch,
}

impl fmt::Display for EquivalenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceError::SignatureMismatch => write!(f, "theories are over different signatures"),
        }
    }
}

impl core::error::Error for EquivalenceError {}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogicalVerdict {
    EquivalentUpToBound(Bound),
    /// `model` satisfies the theory on `satisfies` and not the other one.
    Inequivalent { model: FiniteStructure, satisfies: Side },
}

impl LogicalVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, LogicalVerdict::EquivalentUpToBound(_))
    }
}

fn separating(models_of: &Theory, other: &CompiledTheory, bound: &Bound) -> Option<FiniteStructure> {
    enumerate_models(models_of, bound).find(|m| !other.is_model(m))
}

/// Compares `Mod(T)` and `Mod(T′)` among structures within `bound`. The two
/// signatures must declare the same symbols, possibly in another order.
pub fn bounded_logical_equivalence(t: &Theory, u: &Theory, bound: &Bound) -> Result<LogicalVerdict, EquivalenceError> {
    if !t.signature.same_symbols(&u.signature) {
        return Err(EquivalenceError::SignatureMismatch);
    }
    let u = Theory { signature: t.signature.clone(), axioms: u.axioms.clone() };
    let ct = CompiledTheory::new(t).map_err(|_| EquivalenceError::SignatureMismatch)?;
    let cu = CompiledTheory::new(&u).map_err(|_| EquivalenceError::SignatureMismatch)?;
    if let Some(model) = separating(t, &cu, bound) {
        return Ok(LogicalVerdict::Inequivalent { model, satisfies: Side::Left });
    }
    if let Some(model) = separating(&u, &ct, bound) {
        return Ok(LogicalVerdict::Inequivalent { model, satisfies: Side::Right });
    }
    Ok(LogicalVerdict::EquivalentUpToBound(bound.clone()))
}

/// Two theories and a chain of extension steps out of each, meant to end in
/// logically equivalent theories over one signature.
#[derive(Clone, Debug)]
pub struct MoritaWitness {
    pub left: Theory,
    pub right: Theory,
    pub left_chain: Vec<ExtensionStep>,
    pub right_chain: Vec<ExtensionStep>,
}

impl MoritaWitness {
    pub fn chain(&self, side: Side) -> &[ExtensionStep] {
        match side {
            Side::Left => &self.left_chain,
            Side::Right => &self.right_chain,
        }
    }

    pub fn theory(&self, side: Side) -> &Theory {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// The last theory of a chain, or the step that breaks it.
    pub fn final_theory(&self, side: Side) -> Result<Theory, usize> {
        let mut t = self.theory(side).clone();
        for (i, s) in self.chain(side).iter().enumerate() {
            t = extend_theory(&t, s).map_err(|_| i)?;
        }
        Ok(t)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Failure {
    /// A step's base is not the signature reached so far.
    BrokenChain { side: Side, step: usize },
    InvalidStep { side: Side, step: usize },
    SignatureMismatch,
    BaseNotCovered(Side),
    Inequivalent,
    NotDefinitional { side: Side, step: usize },
    DifferentSorts,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::BrokenChain { side, step } => write!(f, "BrokenChain({side} step {})", step + 1),
            Failure::InvalidStep { side, step } => write!(f, "InvalidStep({side} step {})", step + 1),
            Failure::SignatureMismatch => write!(f, "SignatureMismatch"),
            Failure::BaseNotCovered(side) => write!(f, "BaseNotCovered({side})"),
            Failure::Inequivalent => write!(f, "Inequivalent"),
            Failure::NotDefinitional { side, step } => write!(f, "NotDefinitional({side} step {})", step + 1),
            Failure::DifferentSorts => write!(f, "DifferentSorts"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    VerifiedUpToBound(u32),
    Failed(Vec<Failure>),
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::VerifiedUpToBound(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::VerifiedUpToBound(n) => write!(f, "VerifiedUpToBound({n})"),
            Verdict::Failed(reasons) => {
                let parts: Vec<String> = reasons.iter().map(|r| format!("{r}")).collect();
                write!(f, "Failed({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub side: Side,
    pub index: usize,
    pub report: ValidationReport,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub bound: u32,
    pub steps: Vec<StepResult>,
    pub final_signatures_equal: bool,
    pub bases_covered: bool,
    pub logical: Option<LogicalVerdict>,
    /// Present for definitional checks only.
    pub same_sorts: Option<bool>,
    pub verdict: Verdict,
}

fn walk_chain(
    w: &MoritaWitness,
    side: Side,
    bound: &Bound,
    steps: &mut Vec<StepResult>,
    failures: &mut Vec<Failure>,
) -> Option<Theory> {
    let mut t = w.theory(side).clone();
    for (index, s) in w.chain(side).iter().enumerate() {
        let report = validate_step(&t, s, bound);
        let invalid = report.is_invalid();
        steps.push(StepResult { side, index, report });
        if invalid {
            failures.push(Failure::InvalidStep { side, step: index });
        }
        match extend_theory(&t, s) {
            Ok(next) => t = next,
            Err(_) => {
                failures.push(Failure::BrokenChain { side, step: index });
                return None;
            }
        }
    }
    Some(t)
}

/// Validates both chains step by step, compares the final signatures, and
/// checks the final theories for logical equivalence, all within a uniform
/// carrier bound.
pub fn verify_morita_witness(w: &MoritaWitness, bound: u32) -> WitnessReport {
    let b = Bound::uniform(bound);
    let mut steps = Vec::new();
    let mut failures = Vec::new();
    let left = walk_chain(w, Side::Left, &b, &mut steps, &mut failures);
    let right = walk_chain(w, Side::Right, &b, &mut steps, &mut failures);
    let mut report = WitnessReport {
        bound,
        steps,
        final_signatures_equal: false,
        bases_covered: false,
        logical: None,
        same_sorts: None,
        verdict: Verdict::VerifiedUpToBound(bound),
    };
    if let (Some(l), Some(r)) = (left, right) {
        report.final_signatures_equal = l.signature.same_symbols(&r.signature);
        if !report.final_signatures_equal {
            failures.push(Failure::SignatureMismatch);
        }
        let covers_left = l.signature.contains(&w.left.signature) && l.signature.contains(&w.right.signature);
        let covers_right = r.signature.contains(&w.left.signature) && r.signature.contains(&w.right.signature);
        report.bases_covered = covers_left && covers_right;
        if !covers_left {
            failures.push(Failure::BaseNotCovered(Side::Left));
        }
        if !covers_right {
            failures.push(Failure::BaseNotCovered(Side::Right));
        }
        if report.final_signatures_equal {
            let v = bounded_logical_equivalence(&l, &r, &b).expect("signatures agree");
            if !v.is_equivalent() {
                failures.push(Failure::Inequivalent);
            }
            report.logical = Some(v);
        }
    }
    if !failures.is_empty() {
        report.verdict = Verdict::Failed(failures);
    }
    report
}

/// As [`verify_morita_witness`], and additionally requires every step to be
/// definitional and both base signatures to have the same sort symbols.
pub fn verify_definitional_witness(w: &MoritaWitness, bound: u32) -> WitnessReport {
    let mut report = verify_morita_witness(w, bound);
    let mut failures = match core::mem::replace(&mut report.verdict, Verdict::VerifiedUpToBound(bound)) {
        Verdict::Failed(f) => f,
        Verdict::VerifiedUpToBound(_) => Vec::new(),
    };
    for side in [Side::Left, Side::Right] {
        for (step, s) in w.chain(side).iter().enumerate() {
            if !is_definitional(s) {
                failures.push(Failure::NotDefinitional { side, step });
            }
        }
    }
    let mut ls: Vec<_> = w.left.signature.sorts().to_vec();
    let mut rs: Vec<_> = w.right.signature.sorts().to_vec();
    ls.sort();
    rs.sort();
    let same = ls == rs;
    report.same_sorts = Some(same);
    if !same {
        failures.push(Failure::DifferentSorts);
    }
    if !failures.is_empty() {
        report.verdict = Verdict::Failed(failures);
    }
    report
}

impl WitnessReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let _ = writeln!(out, "step {} {}: {}", s.side, s.index + 1, s.report.status);
        }
        let _ = writeln!(out, "final signatures equal: {}", self.final_signatures_equal);
        let _ = writeln!(out, "base signatures covered: {}", self.bases_covered);
        match &self.logical {
            Some(LogicalVerdict::EquivalentUpToBound(b)) => {
                let _ = writeln!(out, "logical equivalence: EquivalentUpToBound({b})");
            }
            Some(LogicalVerdict::Inequivalent { model, satisfies }) => {
                let _ = writeln!(out, "logical equivalence: Inequivalent; separating model satisfies the {satisfies} theory only:");
                model.write_model(&mut out);
            }
            None => {
                let _ = writeln!(out, "logical equivalence: not checked");
            }
        }
        if let Some(same) = self.same_sorts {
            let _ = writeln!(out, "same sort symbols: {same}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

/// The composite reduct functors seen from one side's bound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SideCheck {
    /// Bound on the common signature, extended from the uniform base bound
    /// along this side's chain.
    pub bound: Bound,
    pub objects: usize,
    /// Reduct to this side's base theory.
    pub near: Option<FunctorProperties>,
    /// Reduct to the other side's base theory.
    pub far: Option<FunctorProperties>,
    /// Every object of the far category missed by the reduct expands beyond the bound.
    pub misses_exceed_bound: bool,
}

impl SideCheck {
    pub fn holds(&self) -> bool {
        self.near.is_some_and(|p| p.all())
            && self.far.is_some_and(|p| p.full && p.faithful)
            && self.misses_exceed_bound
    }
}

/// Projection functors along both chains, and the composed equivalence
/// `Mod(T1) ≃ Mod(T2)` through the common extension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CategoricalReport {
    pub bound: u32,
    /// Per step, `None` when the functor could not be formed.
    pub left_steps: Vec<Option<FunctorProperties>>,
    pub right_steps: Vec<Option<FunctorProperties>>,
    pub from_left: Option<SideCheck>,
    pub from_right: Option<SideCheck>,
}

impl CategoricalReport {
    pub fn steps_hold(&self) -> bool {
        self.left_steps.iter().chain(&self.right_steps).all(|p| p.is_some_and(|p| p.all()))
    }

    pub fn composed_holds(&self) -> bool {
        self.from_left.as_ref().is_some_and(SideCheck::holds) && self.from_right.as_ref().is_some_and(SideCheck::holds)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let show = |p: &Option<FunctorProperties>| match p {
            Some(p) => format!("{p}"),
            None => String::from("not a functor at this bound"),
        };
        for (side, steps) in [(Side::Left, &self.left_steps), (Side::Right, &self.right_steps)] {
            for (i, p) in steps.iter().enumerate() {
                let _ = writeln!(out, "pi {side} step {}: {}", i + 1, show(p));
            }
        }
        for (side, check) in [(Side::Left, &self.from_left), (Side::Right, &self.from_right)] {
            match check {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "composite from {side} at bound {}: objects={} near: {} far: {} misses exceed bound: {}",
                        c.bound,
                        c.objects,
                        show(&c.near),
                        show(&c.far),
                        c.misses_exceed_bound
                    );
                }
                None => {
                    let _ = writeln!(out, "composite from {side}: chain does not compose");
                }
            }
        }
        let verdict = if self.steps_hold() && self.composed_holds() { "EquivalentAtBound" } else { "NotEstablished" };
        let _ = writeln!(out, "categorical equivalence at bound {}: {verdict}", self.bound);
        out
    }
}

fn fits(m: &FiniteStructure, bound: &Bound) -> bool {
    m.signature().sorts().iter().zip(m.sizes()).all(|(s, &n)| n <= bound.get(s))
}

fn side_check(w: &MoritaWitness, side: Side, bound: u32) -> Option<SideCheck> {
    let other = match side {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    };
    let mut b = Bound::uniform(bound);
    let mut t = w.theory(side).clone();
    for s in w.chain(side) {
        b = extended_bound(&b, s);
        t = extend_theory(&t, s).ok()?;
    }
    let common = Arc::new(build_category(&t, &b));
    let near = build_category(w.theory(side), &b);
    let far_theory = w.theory(other);
    let far = Arc::new(build_category(far_theory, &b));
    let near = projection_functor(common.clone(), Arc::new(near)).ok().map(|f| check_functor(&f));
    let far_functor = projection_functor(common.clone(), far.clone()).ok();
    let far_props = far_functor.as_ref().map(check_functor);
    let misses_exceed_bound = far_functor.as_ref().is_some_and(|f| {
        (0..far.objects.len()).filter(|j| !f.objects.contains(j)).all(|j| {
            match expand_chain(&far.objects[j], far_theory, w.chain(other)) {
                Ok(e) => !fits(&e, &b),
                Err(_) => false,
            }
        })
    });
    Some(SideCheck { bound: b, objects: common.objects.len(), near, far: far_props, misses_exceed_bound })
}

/// Checks every projection functor along both chains at the bounds the
/// chain induces from `bound`, then the composite reducts from each side's
/// common extension to both base theories.
pub fn categorical_check(w: &MoritaWitness, bound: u32) -> CategoricalReport {
    let chain_props = |side: Side| {
        let mut b = Bound::uniform(bound);
        let mut t = w.theory(side).clone();
        let mut out = Vec::new();
        for s in w.chain(side) {
            out.push(projection_for_step(&t, s, &b).ok().map(|f| check_functor(&f)));
            match extend_theory(&t, s) {
                Ok(next) => t = next,
                Err(_) => break,
            }
            b = extended_bound(&b, s);
        }
        out
    };
    CategoricalReport {
        bound,
        left_steps: chain_props(Side::Left),
        right_steps: chain_props(Side::Right),
        from_left: side_check(w, Side::Left, bound),
        from_right: side_check(w, Side::Right, bound),
    }
}
