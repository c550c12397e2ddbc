//! Nondeterministic Martelli–Montanari unification, with the occur-check
//! (`Mma`) and without it (`MmaMinus`).
//!
//! `Mma` has the actions decompose, clash, delete, orient, eliminate and
//! occur-check failure. `MmaMinus` drops the occur-check failure and
//! replaces elimination by variable/variable elimination plus collapsing
//! two bindings `X = t`, `X = u` of the same variable into `t = u`. It
//! always terminates; the triple `(norm, f45a, f5b)` decreases
//! lexicographically with every step.
//!
//! Equation sets are sequences with an insertion stamp per equation.
//! Equation indices in choices and traces are positions in the sequence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon;
use crate::render::{render_pairs, render_term};
use crate::term::{occurrence_counts, Substitution, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnifyError {
    #[error("choice {0} is not applicable")]
    Inapplicable(Choice),
    #[error("script ended at step {0} but the run is not finished")]
    ScriptExhausted(usize),
    #[error("script has {0} unused choices after the run finished")]
    ScriptTooLong(usize),
    #[error("equation set is not in solved form")]
    NotSolved,
    #[error("equation set is not in semi-solved form")]
    NotSemiSolved,
    #[error("k = {k} is too small, need at least {needed}")]
    KTooSmall { k: u64, needed: u64 },
    #[error("run did not succeed")]
    FailedRun,
    #[error("expected a run of {0}")]
    WrongAlgorithm(Algorithm),
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub stamp: u64,
}

/// A multiset of equations in insertion order.
#[derive(Clone, Debug, Default)]
pub struct EquationSet {
    eqs: Vec<Equation>,
    next_stamp: u64,
}

impl PartialEq for EquationSet {
    fn eq(&self, other: &Self) -> bool {
        self.eqs.len() == other.eqs.len()
            && self
                .eqs
                .iter()
                .zip(&other.eqs)
                .all(|(a, b)| a.lhs == b.lhs && a.rhs == b.rhs)
    }
}

impl Eq for EquationSet {}

impl EquationSet {
    pub fn new() -> Self {
        EquationSet::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Self {
        let mut e = EquationSet::new();
        for (l, r) in pairs {
            e.push(l, r);
        }
        e
    }

    /// `s1 = t1, ..., sn = tn` for two sequences of equal length.
    pub fn from_sequences(s: &[Term], t: &[Term]) -> Result<Self, UnifyError> {
        if s.len() != t.len() {
            return Err(UnifyError::LengthMismatch(s.len(), t.len()));
        }
        Ok(EquationSet::from_pairs(
            s.iter().cloned().zip(t.iter().cloned()),
        ))
    }

    pub fn push(&mut self, lhs: Term, rhs: Term) {
        let stamp = self.next_stamp;
        self.next_stamp += 1;
        self.eqs.push(Equation { lhs, rhs, stamp });
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equation> {
        self.eqs.iter()
    }

    pub fn get(&self, i: usize) -> Option<&Equation> {
        self.eqs.get(i)
    }

    pub fn pairs(&self) -> Vec<(Term, Term)> {
        self.eqs
            .iter()
            .map(|e| (e.lhs.clone(), e.rhs.clone()))
            .collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.eqs.iter().flat_map(|e| [&e.lhs, &e.rhs])
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        crate::term::vars_of(self.terms())
    }

    pub fn max_arity(&self) -> usize {
        self.terms().map(Term::max_arity).max().unwrap_or(0)
    }

    /// Union with `other`; `other`'s equations come after `self`'s.
    pub fn union(&self, other: &EquationSet) -> EquationSet {
        let mut out = self.clone();
        for e in &other.eqs {
            out.push(e.lhs.clone(), e.rhs.clone());
        }
        out
    }

    pub fn apply(&self, s: &Substitution) -> EquationSet {
        EquationSet {
            eqs: self
                .eqs
                .iter()
                .map(|e| Equation {
                    lhs: s.apply(&e.lhs),
                    rhs: s.apply(&e.rhs),
                    stamp: e.stamp,
                })
                .collect(),
            next_stamp: self.next_stamp,
        }
    }

    /// Whether `s` solves every equation.
    pub fn solved_by(&self, s: &Substitution) -> bool {
        self.eqs.iter().all(|e| s.apply(&e.lhs) == s.apply(&e.rhs))
    }

    pub fn canonical(&self) -> Vec<(Term, Term)> {
        canon::canonical_pairs(&self.pairs())
    }

    /// Equal as multisets modulo variable renaming.
    pub fn is_variant_of(&self, other: &EquationSet) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    pub fn render(&self) -> String {
        render_pairs(self.eqs.iter().map(|e| (&e.lhs, &e.rhs)))
    }

    fn counts(&self) -> BTreeMap<Var, usize> {
        occurrence_counts(self.terms())
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Mma,
    MmaMinus,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Mma => "mma",
            Algorithm::MmaMinus => "mma-minus",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    Decompose,
    Clash,
    Delete,
    Orient,
    Eliminate,
    OccurFail,
    VarVar,
    Collapse,
}

impl ActionKind {
    /// The action's number in the classical presentation.
    pub fn number(self) -> &'static str {
        match self {
            ActionKind::Decompose => "1",
            ActionKind::Clash => "2",
            ActionKind::Delete => "3",
            ActionKind::Orient => "4",
            ActionKind::Eliminate => "5",
            ActionKind::OccurFail => "6",
            ActionKind::VarVar => "5a",
            ActionKind::Collapse => "5b",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Decompose => "decompose",
            ActionKind::Clash => "clash",
            ActionKind::Delete => "delete",
            ActionKind::Orient => "orient",
            ActionKind::Eliminate => "eliminate",
            ActionKind::OccurFail => "occur-check",
            ActionKind::VarVar => "var-var",
            ActionKind::Collapse => "collapse",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The selected equation; collapse also names the partner equation
/// (`index < partner`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Choice {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partner: Option<usize>,
}

impl Choice {
    pub fn at(index: usize) -> Self {
        Choice {
            index,
            partner: None,
        }
    }

    pub fn pair(index: usize, partner: usize) -> Self {
        Choice {
            index,
            partner: Some(partner),
        }
    }
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.partner {
            Some(p) => write!(f, "{},{}", self.index, p),
            None => write!(f, "{}", self.index),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Applicable {
    pub choice: Choice,
    pub action: ActionKind,
}

fn occurs_elsewhere(counts: &BTreeMap<Var, usize>, e: &Equation, x: &Var) -> bool {
    let here = occurrence_counts([&e.lhs, &e.rhs]).get(x).copied().unwrap_or(0);
    counts.get(x).copied().unwrap_or(0) > here
}

/// Every (choice, action) pair applicable in `set`, in position order.
pub fn applicable(set: &EquationSet, algo: Algorithm) -> Vec<Applicable> {
    let counts = set.counts();
    let mut out = Vec::new();
    for (i, e) in set.eqs.iter().enumerate() {
        let one = |action| Applicable {
            choice: Choice::at(i),
            action,
        };
        match (&e.lhs, &e.rhs) {
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f == g && xs.len() == ys.len() {
                    out.push(one(ActionKind::Decompose));
                } else {
                    out.push(one(ActionKind::Clash));
                }
            }
            (Term::Var(x), Term::Var(y)) if x == y => out.push(one(ActionKind::Delete)),
            (Term::App(..), Term::Var(_)) => out.push(one(ActionKind::Orient)),
            (Term::Var(x), t) => match algo {
                Algorithm::Mma => {
                    if t.occurs(x) {
                        out.push(one(ActionKind::OccurFail));
                    } else if occurs_elsewhere(&counts, e, x) {
                        out.push(one(ActionKind::Eliminate));
                    }
                }
                Algorithm::MmaMinus => {
                    if t.is_var() {
                        if occurs_elsewhere(&counts, e, x) {
                            out.push(one(ActionKind::VarVar));
                        }
                    } else {
                        for (j, other) in set.eqs.iter().enumerate().skip(i + 1) {
                            if other.lhs.as_var() == Some(x) && !other.rhs.is_var() {
                                out.push(Applicable {
                                    choice: Choice::pair(i, j),
                                    action: ActionKind::Collapse,
                                });
                            }
                        }
                    }
                }
            },
        }
    }
    out
}

/// `applicable` restricted to the classical algorithm.
pub fn applicable_mma(set: &EquationSet) -> Vec<Applicable> {
    applicable(set, Algorithm::Mma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    Clash,
    Occur,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub kind: FailureKind,
    pub lhs: Term,
    pub rhs: Term,
}

impl Failure {
    /// `clash a/b`, `occur-check X/f(X)`.
    pub fn describe(&self) -> String {
        match self.kind {
            FailureKind::Clash => {
                let (f, n) = self.lhs.functor().unwrap_or(("?", 0));
                let (g, m) = self.rhs.functor().unwrap_or(("?", 0));
                if f == g {
                    format!("clash {f}/{n} vs {g}/{m}")
                } else {
                    format!("clash {f}/{g}")
                }
            }
            FailureKind::Occur => {
                format!("occur-check {}/{}", render_term(&self.lhs), render_term(&self.rhs))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Next(EquationSet),
    Failed(Failure),
}

fn eliminate(set: &EquationSet, i: usize) -> EquationSet {
    let e = &set.eqs[i];
    let x = e.lhs.as_var().expect("eliminated equation has a variable lhs").clone();
    let binding = Substitution::singleton(x, e.rhs.clone());
    let mut out = set.clone();
    for (j, eq) in out.eqs.iter_mut().enumerate() {
        if j != i {
            eq.lhs = binding.apply(&eq.lhs);
            eq.rhs = binding.apply(&eq.rhs);
        }
    }
    out
}

fn apply_action(set: &EquationSet, app: Applicable) -> StepOutcome {
    let i = app.choice.index;
    let e = &set.eqs[i];
    match app.action {
        ActionKind::Decompose => {
            let (Term::App(_, xs), Term::App(_, ys)) = (&e.lhs, &e.rhs) else {
                unreachable!("decompose on non-compound equation")
            };
            let mut out = EquationSet {
                eqs: Vec::with_capacity(set.eqs.len() + xs.len()),
                next_stamp: set.next_stamp,
            };
            for (j, eq) in set.eqs.iter().enumerate() {
                if j == i {
                    for (x, y) in xs.iter().zip(ys) {
                        out.push(x.clone(), y.clone());
                    }
                } else {
                    out.eqs.push(eq.clone());
                }
            }
            StepOutcome::Next(out)
        }
        ActionKind::Clash => StepOutcome::Failed(Failure {
            kind: FailureKind::Clash,
            lhs: e.lhs.clone(),
            rhs: e.rhs.clone(),
        }),
        ActionKind::OccurFail => StepOutcome::Failed(Failure {
            kind: FailureKind::Occur,
            lhs: e.lhs.clone(),
            rhs: e.rhs.clone(),
        }),
        ActionKind::Delete => {
            let mut out = set.clone();
            out.eqs.remove(i);
            StepOutcome::Next(out)
        }
        ActionKind::Orient => {
            let mut out = set.clone();
            let eq = &mut out.eqs[i];
            std::mem::swap(&mut eq.lhs, &mut eq.rhs);
            StepOutcome::Next(out)
        }
        ActionKind::Eliminate | ActionKind::VarVar => StepOutcome::Next(eliminate(set, i)),
        ActionKind::Collapse => {
            let j = app.choice.partner.expect("collapse names two equations");
            let (a, b) = (&set.eqs[i], &set.eqs[j]);
            let (sa, sb) = (a.rhs.size(), b.rhs.size());
            // the larger right-hand side is replaced; ties keep the older one
            let replace_b = sa < sb || (sa == sb && a.stamp <= b.stamp);
            let (keep, replace) = if replace_b { (i, j) } else { (j, i) };
            let mut out = set.clone();
            let small = set.eqs[keep].rhs.clone();
            let big = set.eqs[replace].rhs.clone();
            out.eqs[replace].lhs = small;
            out.eqs[replace].rhs = big;
            StepOutcome::Next(out)
        }
    }
}

/// One rewrite of `set` by the action selected with `choice`.
pub fn step(set: &EquationSet, choice: Choice, algo: Algorithm) -> Result<StepOutcome, UnifyError> {
    let app = applicable(set, algo)
        .into_iter()
        .find(|a| a.choice == choice)
        .ok_or(UnifyError::Inapplicable(choice))?;
    Ok(apply_action(set, app))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// The first applicable action in position order.
    FirstApplicable,
    /// Uniform choice among applicable actions, reproducible per seed.
    SeededRandom(u64),
    /// An explicit sequence of choices.
    Scripted(Vec<Choice>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub action: ActionKind,
    pub choice: Choice,
    /// `None` for a failing step.
    pub after: Option<EquationSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success(EquationSet),
    Failure { step: usize, failure: Failure },
}

/// A maximal run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub algorithm: Algorithm,
    pub initial: EquationSet,
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

impl RunTrace {
    pub fn choices(&self) -> Vec<Choice> {
        self.steps.iter().map(|s| s.choice).collect()
    }

    pub fn performs(&self, action: ActionKind) -> bool {
        self.steps.iter().any(|s| s.action == action)
    }

    pub fn succeeded(&self) -> bool {
        matches!(self.outcome, Outcome::Success(_))
    }

    pub fn final_set(&self) -> Option<&EquationSet> {
        match &self.outcome {
            Outcome::Success(e) => Some(e),
            Outcome::Failure { .. } => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match &self.outcome {
            Outcome::Failure { failure, .. } => Some(failure),
            Outcome::Success(_) => None,
        }
    }

    /// The set each step was applied to.
    pub fn before(&self, step: usize) -> &EquationSet {
        if step == 0 {
            &self.initial
        } else {
            self.steps[step - 1]
                .after
                .as_ref()
                .expect("only the last step can fail")
        }
    }

    /// One line per step: `<stepNo> <action> <eqIndex> | <rendered set>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("0 start - | {}\n", self.initial.render());
        for (n, s) in self.steps.iter().enumerate() {
            let set = match &s.after {
                Some(e) => e.render(),
                None => format!(
                    "failure ({})",
                    self.failure().map(Failure::describe).unwrap_or_default()
                ),
            };
            out.push_str(&format!("{} {} {} | {}\n", n + 1, s.action, s.choice, set));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<serde_json::Value> = self
            .steps
            .iter()
            .enumerate()
            .map(|(n, s)| {
                serde_json::json!({
                    "step": n + 1,
                    "action": s.action.name(),
                    "index": s.choice.to_string(),
                    "set": s.after.as_ref().map(EquationSet::render),
                })
            })
            .collect();
        let outcome = match &self.outcome {
            Outcome::Success(e) => serde_json::json!({"result": "success", "set": e.render()}),
            Outcome::Failure { step, failure } => serde_json::json!({
                "result": "failure",
                "step": step + 1,
                "reason": failure.kind,
                "equation": render_pairs([(&failure.lhs, &failure.rhs)]),
            }),
        };
        serde_json::json!({
            "algorithm": self.algorithm,
            "initial": self.initial.render(),
            "steps": steps,
            "outcome": outcome,
        })
    }
}

/// Execute one maximal run.
pub fn run(set: &EquationSet, strategy: &Strategy, algo: Algorithm) -> Result<RunTrace, UnifyError> {
    let mut rng = match strategy {
        Strategy::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let k = choose_k(set);
    let mut cur = set.clone();
    let mut steps = Vec::new();
    loop {
        let apps = applicable(&cur, algo);
        if apps.is_empty() {
            if let Strategy::Scripted(script) = strategy {
                if script.len() > steps.len() {
                    return Err(UnifyError::ScriptTooLong(script.len() - steps.len()));
                }
            }
            return Ok(RunTrace {
                algorithm: algo,
                initial: set.clone(),
                steps,
                outcome: Outcome::Success(cur),
            });
        }
        let app = match strategy {
            Strategy::FirstApplicable => apps[0],
            Strategy::SeededRandom(_) => {
                let rng = rng.as_mut().expect("seeded");
                apps[rng.gen_range(0..apps.len())]
            }
            Strategy::Scripted(script) => {
                let choice = *script
                    .get(steps.len())
                    .ok_or(UnifyError::ScriptExhausted(steps.len()))?;
                *apps
                    .iter()
                    .find(|a| a.choice == choice)
                    .ok_or(UnifyError::Inapplicable(choice))?
            }
        };
        match apply_action(&cur, app) {
            StepOutcome::Next(next) => {
                if cfg!(debug_assertions) && algo == Algorithm::MmaMinus {
                    let before = measure_unchecked(&cur, k);
                    let after = measure_unchecked(&next, k);
                    debug_assert!(after < before, "measure did not decrease: {before:?} -> {after:?}");
                }
                steps.push(TraceStep {
                    action: app.action,
                    choice: app.choice,
                    after: Some(next.clone()),
                });
                cur = next;
            }
            StepOutcome::Failed(failure) => {
                let n = steps.len();
                if let Strategy::Scripted(script) = strategy {
                    if script.len() > n + 1 {
                        return Err(UnifyError::ScriptTooLong(script.len() - n - 1));
                    }
                }
                steps.push(TraceStep {
                    action: app.action,
                    choice: app.choice,
                    after: None,
                });
                return Ok(RunTrace {
                    algorithm: algo,
                    initial: set.clone(),
                    steps,
                    outcome: Outcome::Failure { step: n, failure },
                });
            }
        }
    }
}

/// `{X1 = t1, ..., Xn = tn}` with distinct `Xi`, `Xi` not `ti`, and a
/// variable `ti` only when `Xi` occurs once in the set.
pub fn is_semi_solved(set: &EquationSet) -> bool {
    let counts = set.counts();
    let mut lhs_seen = std::collections::BTreeSet::new();
    set.eqs.iter().all(|e| match &e.lhs {
        Term::Var(x) => {
            lhs_seen.insert(x.clone())
                && e.rhs.as_var() != Some(x)
                && (!e.rhs.is_var() || counts.get(x) == Some(&1))
        }
        Term::App(..) => false,
    })
}

/// Semi-solved with no left-hand variable occurring on any right-hand side.
pub fn is_solved(set: &EquationSet) -> bool {
    if !is_semi_solved(set) {
        return false;
    }
    let rhs_vars = crate::term::vars_of(set.eqs.iter().map(|e| &e.rhs));
    set.eqs
        .iter()
        .all(|e| e.lhs.as_var().is_some_and(|x| !rhs_vars.contains(x)))
}

pub fn extract_mgu(set: &EquationSet) -> Result<Substitution, UnifyError> {
    if !is_solved(set) {
        return Err(UnifyError::NotSolved);
    }
    Ok(Substitution::from_pairs(set.eqs.iter().map(|e| {
        (
            e.lhs.as_var().expect("solved form").clone(),
            e.rhs.clone(),
        )
    })))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finished {
    Mgu(Substitution),
    /// The classical algorithm failed on the semi-solved set: no finite
    /// unifier exists.
    NotUnifiable(RunTrace),
}

/// Complete a semi-solved set with the classical algorithm.
pub fn finish_semi_solved(set: &EquationSet) -> Result<Finished, UnifyError> {
    if !is_semi_solved(set) {
        return Err(UnifyError::NotSemiSolved);
    }
    let trace = run(set, &Strategy::FirstApplicable, Algorithm::Mma)?;
    match &trace.outcome {
        Outcome::Success(f) => Ok(Finished::Mgu(extract_mgu(f)?)),
        Outcome::Failure { .. } => Ok(Finished::NotUnifiable(trace)),
    }
}

/// `max(2, 1 + max arity)`.
pub fn choose_k(set: &EquationSet) -> u64 {
    (set.max_arity() as u64 + 1).max(2)
}

fn check_k(set: &EquationSet, k: u64) -> Result<(), UnifyError> {
    let needed = choose_k(set);
    if k < needed {
        return Err(UnifyError::KTooSmall { k, needed });
    }
    Ok(())
}

pub(crate) fn norm_unchecked(set: &EquationSet, k: u64) -> BigUint {
    set.eqs
        .iter()
        .map(|e| equation_norm(&e.lhs, &e.rhs, k))
        .sum()
}

pub(crate) fn equation_norm(lhs: &Term, rhs: &Term, k: u64) -> BigUint {
    let exp = lhs.size().max(rhs.size()) as u32;
    BigUint::from(k).pow(exp)
}

/// Sum over equations of `k^max(|lhs|, |rhs|)`.
pub fn norm(set: &EquationSet, k: u64) -> Result<BigUint, UnifyError> {
    check_k(set, k)?;
    Ok(norm_unchecked(set, k))
}

/// The termination measure, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Measure {
    pub norm: BigUint,
    pub f45a: usize,
    pub f5b: usize,
}

pub(crate) fn measure_unchecked(set: &EquationSet, k: u64) -> Measure {
    let f45a = applicable(set, Algorithm::MmaMinus)
        .iter()
        .filter(|a| matches!(a.action, ActionKind::Orient | ActionKind::VarVar))
        .count();
    let f5b = set
        .eqs
        .iter()
        .filter(|e| e.lhs.is_var() && !e.rhs.is_var())
        .count();
    Measure {
        norm: norm_unchecked(set, k),
        f45a,
        f5b,
    }
}

pub fn measure(set: &EquationSet, k: u64) -> Result<Measure, UnifyError> {
    check_k(set, k)?;
    Ok(measure_unchecked(set, k))
}

/// Composition of the bindings `{X/t}` of the elimination steps of a
/// successful classical run, in order, followed by the final equations
/// whose variable was never eliminated (those never occurred elsewhere,
/// so action (5) did not apply to them).
pub fn composition_of_run(trace: &RunTrace) -> Result<Substitution, UnifyError> {
    if trace.algorithm != Algorithm::Mma {
        return Err(UnifyError::WrongAlgorithm(Algorithm::Mma));
    }
    if !trace.succeeded() {
        return Err(UnifyError::FailedRun);
    }
    let mut theta = Substitution::new();
    for (n, s) in trace.steps.iter().enumerate() {
        if s.action == ActionKind::Eliminate {
            let e = &trace.before(n).eqs[s.choice.index];
            let x = e.lhs.as_var().expect("eliminate selects X = t").clone();
            theta = theta.compose(&Substitution::singleton(x, e.rhs.clone()));
        }
    }
    let eliminated = theta.domain();
    let rest = trace.final_set().expect("succeeded").iter().filter_map(|e| {
        let x = e.lhs.as_var()?;
        (!eliminated.contains(x)).then(|| (x.clone(), e.rhs.clone()))
    });
    Ok(theta.compose(&Substitution::from_pairs(rest)))
}

/// Result of a full MMA run: the mgu, or `None` when not unifiable.
pub fn mgu(set: &EquationSet) -> Option<Substitution> {
    let trace = run(set, &Strategy::FirstApplicable, Algorithm::Mma).ok()?;
    trace.final_set().map(|f| extract_mgu(f).expect("a successful run ends solved"))
}

/// Mgu of two term sequences.
pub fn unify_sequences(s: &[Term], t: &[Term]) -> Option<Substitution> {
    mgu(&EquationSet::from_sequences(s, t).ok()?)
}

/// How a maximal run ended, as seen by [`enumerate_runs`].
pub enum RunEnd<'a> {
    Success(&'a EquationSet),
    Failure(&'a Failure),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunEnumeration {
    pub runs: usize,
    pub truncated: bool,
}

/// Visit every maximal run (as its choice sequence and end), up to
/// `max_runs` runs.
pub fn enumerate_runs(
    set: &EquationSet,
    algo: Algorithm,
    max_runs: usize,
    visit: &mut dyn FnMut(&[Choice], RunEnd<'_>),
) -> RunEnumeration {
    fn go(
        set: &EquationSet,
        algo: Algorithm,
        path: &mut Vec<Choice>,
        max_runs: usize,
        count: &mut usize,
        visit: &mut dyn FnMut(&[Choice], RunEnd<'_>),
    ) -> bool {
        let apps = applicable(set, algo);
        if apps.is_empty() {
            *count += 1;
            visit(path, RunEnd::Success(set));
            return *count < max_runs;
        }
        for app in apps {
            path.push(app.choice);
            let keep_going = match apply_action(set, app) {
                StepOutcome::Next(next) => go(&next, algo, path, max_runs, count, visit),
                StepOutcome::Failed(f) => {
                    *count += 1;
                    visit(path, RunEnd::Failure(&f));
                    *count < max_runs
                }
            };
            path.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    let mut count = 0;
    let complete = go(set, algo, &mut Vec::new(), max_runs, &mut count, visit);
    RunEnumeration {
        runs: count,
        truncated: !complete,
    }
}
