//! Deciding whether the occur-check can be omitted for an equation set.
//!
//! `decide_nsto` asks whether *no* run of the classical algorithm performs
//! the occur-check failure; `decide_wnsto` asks whether *some* run avoids
//! it. Both search the run space exhaustively with a node budget and
//! memoize states modulo variable renaming. The cheap sufficient
//! conditions (`nsto_by_*`, `wnsto_by_*`) are sound but incomplete.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::moding::{split, Mode, Moding};
use crate::modes;
use crate::term::{disjoint, is_linear, vars_of, Atom, Substitution, Term, Var};
use crate::unify::{
    applicable_mma, enumerate_runs, extract_mgu, mgu, run, ActionKind, Algorithm, Choice,
    EquationSet, RunEnd, RunTrace, Strategy, StepOutcome,
};

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NstoError {
    #[error("sequences have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("atoms {0} and {1} have different predicates")]
    PredicateMismatch(String, String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Nsto,
    Wnsto,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Nsto => "nsto",
            Property::Wnsto => "wnsto",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    True,
    False,
    BudgetExceeded,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Value::True => "true",
            Value::False => "false",
            Value::BudgetExceeded => "budget_exceeded",
        })
    }
}

/// The sufficient condition that settled a verdict without search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    AtomConditions,
    Linearity,
    WeaklyLinear,
    Split,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::AtomConditions => "atom-conditions",
            Certificate::Linearity => "linearity",
            Certificate::WeaklyLinear => "weakly-linear",
            Certificate::Split => "split",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub value: Value,
    /// For a false NSTO verdict, a run performing the occur-check failure;
    /// for a true WNSTO verdict, a run avoiding it.
    pub witness: Option<RunTrace>,
    pub certificate: Option<Certificate>,
    /// States expanded by the search (0 when a certificate applied).
    pub nodes: usize,
}

impl Verdict {
    fn certified(property: Property, certificate: Certificate) -> Self {
        Verdict {
            property,
            value: Value::True,
            witness: None,
            certificate: Some(certificate),
            nodes: 0,
        }
    }

    pub fn is_true(&self) -> bool {
        self.value == Value::True
    }

    pub fn is_false(&self) -> bool {
        self.value == Value::False
    }
}

struct Search {
    budget: usize,
    nodes: usize,
    settled: HashSet<Vec<(Term, Term)>>,
    path: Vec<Choice>,
}

enum Found {
    Yes,
    No,
    OutOfBudget,
}

impl Search {
    fn new(budget: usize) -> Self {
        Search {
            budget: budget.max(1),
            nodes: 0,
            settled: HashSet::new(),
            path: Vec::new(),
        }
    }

    fn expand(&mut self, set: &EquationSet) -> Option<Vec<(Choice, ActionKind)>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        Some(
            applicable_mma(set)
                .into_iter()
                .map(|a| (a.choice, a.action))
                .collect(),
        )
    }

    /// Look for a run reaching the occur-check failure. `settled` holds
    /// states from which no run does.
    fn occur_reachable(&mut self, set: &EquationSet) -> Found {
        let key = set.canonical();
        if self.settled.contains(&key) {
            return Found::No;
        }
        let Some(apps) = self.expand(set) else {
            return Found::OutOfBudget;
        };
        if let Some((choice, _)) = apps.iter().find(|(_, a)| *a == ActionKind::OccurFail) {
            self.path.push(*choice);
            return Found::Yes;
        }
        for (choice, _) in apps {
            let Ok(StepOutcome::Next(next)) = crate::unify::step(set, choice, Algorithm::Mma) else {
                continue;
            };
            self.path.push(choice);
            match self.occur_reachable(&next) {
                Found::No => {
                    self.path.pop();
                }
                other => return other,
            }
        }
        self.settled.insert(key);
        Found::No
    }

    /// Look for a run that avoids the occur-check failure. `settled`
    /// holds dead states.
    fn clean_run(&mut self, set: &EquationSet) -> Found {
        let key = set.canonical();
        if self.settled.contains(&key) {
            return Found::No;
        }
        let Some(apps) = self.expand(set) else {
            return Found::OutOfBudget;
        };
        if apps.is_empty() {
            return Found::Yes;
        }
        if let Some((choice, _)) = apps.iter().find(|(_, a)| *a == ActionKind::Clash) {
            self.path.push(*choice);
            return Found::Yes;
        }
        for (choice, action) in apps {
            if action == ActionKind::OccurFail {
                continue;
            }
            let Ok(StepOutcome::Next(next)) = crate::unify::step(set, choice, Algorithm::Mma) else {
                continue;
            };
            self.path.push(choice);
            match self.clean_run(&next) {
                Found::No => {
                    self.path.pop();
                }
                other => return other,
            }
        }
        self.settled.insert(key);
        Found::No
    }
}

fn replay(set: &EquationSet, path: Vec<Choice>) -> RunTrace {
    run(set, &Strategy::Scripted(path), Algorithm::Mma).expect("search paths replay")
}

/// Whether no run of the classical algorithm on `set` performs the
/// occur-check failure.
pub fn decide_nsto(set: &EquationSet, budget: usize) -> Verdict {
    let mut s = Search::new(budget);
    let found = s.occur_reachable(set);
    let (value, witness) = match found {
        Found::Yes => (Value::False, Some(replay(set, std::mem::take(&mut s.path)))),
        Found::No => (Value::True, None),
        Found::OutOfBudget => (Value::BudgetExceeded, None),
    };
    Verdict {
        property: Property::Nsto,
        value,
        witness,
        certificate: None,
        nodes: s.nodes,
    }
}

/// Whether some run of the classical algorithm on `set` avoids the
/// occur-check failure.
pub fn decide_wnsto(set: &EquationSet, budget: usize) -> Verdict {
    let mut s = Search::new(budget);
    let found = s.clean_run(set);
    let (value, witness) = match found {
        Found::Yes => (Value::True, Some(replay(set, std::mem::take(&mut s.path)))),
        Found::No => (Value::False, None),
        Found::OutOfBudget => (Value::BudgetExceeded, None),
    };
    Verdict {
        property: Property::Wnsto,
        value,
        witness,
        certificate: None,
        nodes: s.nodes,
    }
}

pub fn decide(set: &EquationSet, property: Property, budget: usize) -> Verdict {
    match property {
        Property::Nsto => decide_nsto(set, budget),
        Property::Wnsto => decide_wnsto(set, budget),
    }
}

/// `s = t` is NSTO when the sides share no variable and one is linear.
pub fn nsto_by_linearity(s: &[Term], t: &[Term]) -> Result<bool, NstoError> {
    if s.len() != t.len() {
        return Err(NstoError::LengthMismatch(s.len(), t.len()));
    }
    Ok(disjoint(&vars_of(s), &vars_of(t)) && (is_linear(s) || is_linear(t)))
}

fn same_predicate(a: &Atom, h: &Atom) -> Result<(), NstoError> {
    if a.key() != h.key() {
        return Err(NstoError::PredicateMismatch(a.key().to_string(), h.key().to_string()));
    }
    Ok(())
}

fn two_valued_modes(atom: &Atom, m: &Moding) -> Option<Vec<Mode>> {
    let modes = m.get(&atom.key())?;
    (!modes.contains(&Mode::Neutral)).then(|| modes.into_owned())
}

/// Variable-disjoint atoms where one is input-output disjoint, one is
/// input linear and the other output linear. Needs a 2-valued moding of
/// the predicate; otherwise the condition is not established.
pub fn nsto_by_atom_conditions(a: &Atom, h: &Atom, m: &Moding) -> Result<bool, NstoError> {
    same_predicate(a, h)?;
    let Some(modes) = two_valued_modes(a, m) else {
        return Ok(false);
    };
    if !disjoint(&a.vars(), &h.vars()) {
        return Ok(false);
    }
    let (pa, ph) = (split(a, &modes), split(h, &modes));
    let io_disjoint = |p: &crate::moding::Projection| disjoint(&vars_of(&p.input), &vars_of(&p.output));
    let in_lin = |p: &crate::moding::Projection| is_linear(&p.input);
    let out_lin = |p: &crate::moding::Projection| is_linear(&p.output);
    Ok((io_disjoint(&pa) || io_disjoint(&ph))
        && ((in_lin(&pa) && out_lin(&ph)) || (in_lin(&ph) && out_lin(&pa))))
}

/// WNSTO of `e1 ∪ e2` from NSTO of the parts: either `e1` is NSTO and not
/// unifiable, or `e1` is NSTO with mgu θ and `e2θ` is NSTO. Falls back to
/// the exact search when neither applies.
pub fn wnsto_by_split(e1: &EquationSet, e2: &EquationSet, budget: usize) -> Verdict {
    let first = decide_nsto(e1, budget);
    let mut used = first.nodes;
    if first.is_true() {
        match mgu(e1) {
            None => return Verdict::certified(Property::Wnsto, Certificate::Split),
            Some(theta) => {
                let second = decide_nsto(&e2.apply(&theta), budget.saturating_sub(used).max(1));
                used += second.nodes;
                if second.is_true() {
                    return Verdict::certified(Property::Wnsto, Certificate::Split);
                }
            }
        }
    }
    let mut v = decide_wnsto(&e1.union(e2), budget);
    v.nodes += used;
    v
}

/// The inputs of `a` are ground and `h` is weakly linear. `⊥` positions
/// count as non-input.
pub fn wnsto_by_weakly_linear(a: &Atom, h: &Atom, m: &Moding) -> Result<bool, NstoError> {
    same_predicate(a, h)?;
    let Some(modes) = m.get(&a.key()) else {
        return Ok(false);
    };
    if !disjoint(&a.vars(), &h.vars()) {
        return Ok(false);
    }
    let inputs_ground = split(a, &modes).input.iter().all(Term::is_ground);
    Ok(inputs_ground && modes::weakly_linear_with(h, &modes))
}

fn atom_equations(a: &Atom, h: &Atom) -> EquationSet {
    EquationSet::from_pairs(a.args.iter().cloned().zip(h.args.iter().cloned()))
}

/// Classify the unification `a = h`, trying the sufficient conditions
/// first (atom conditions, linearity, weakly linear heads, split on input
/// positions) and searching only when none applies. A true NSTO verdict
/// is also a true WNSTO verdict.
pub fn classify_atoms(
    a: &Atom,
    h: &Atom,
    m: &Moding,
    property: Property,
    budget: usize,
) -> Result<Verdict, NstoError> {
    same_predicate(a, h)?;
    if nsto_by_atom_conditions(a, h, m)? {
        return Ok(Verdict::certified(property, Certificate::AtomConditions));
    }
    if nsto_by_linearity(&a.args, &h.args)? {
        return Ok(Verdict::certified(property, Certificate::Linearity));
    }
    if property == Property::Wnsto {
        if wnsto_by_weakly_linear(a, h, m)? {
            return Ok(Verdict::certified(property, Certificate::WeaklyLinear));
        }
        if let Some(modes) = m.get(&a.key()) {
            let mut e1 = EquationSet::new();
            let mut e2 = EquationSet::new();
            for ((x, y), mode) in a.args.iter().zip(&h.args).zip(modes.iter()) {
                if *mode == Mode::In {
                    e1.push(x.clone(), y.clone());
                } else {
                    e2.push(x.clone(), y.clone());
                }
            }
            if !e1.is_empty() {
                return Ok(wnsto_by_split(&e1, &e2, budget));
            }
        }
    }
    Ok(decide(&atom_equations(a, h), property, budget))
}

/// Outcome of searching classical runs for an mgu θ of `s = t` such that
/// θ restricted to Var(s) is linear for `avoid` and has its range inside
/// Var(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMguSearch {
    pub unifiable: bool,
    pub found: Option<Substitution>,
    pub runs: usize,
    pub truncated: bool,
}

/// Enumerate classical runs on `s = t` (both orientations) looking for an
/// mgu with the linearity property described on [`LinearMguSearch`].
pub fn search_linear_mgu(s: &[Term], t: &[Term], avoid: &std::collections::BTreeSet<Var>, max_runs: usize) -> Result<LinearMguSearch, NstoError> {
    if s.len() != t.len() {
        return Err(NstoError::LengthMismatch(s.len(), t.len()));
    }
    let s_vars = vars_of(s);
    let t_vars = vars_of(t);
    let mut out = LinearMguSearch {
        unifiable: false,
        found: None,
        runs: 0,
        truncated: false,
    };
    let forward = EquationSet::from_pairs(s.iter().cloned().zip(t.iter().cloned()));
    let backward = EquationSet::from_pairs(t.iter().cloned().zip(s.iter().cloned()));
    for set in [forward, backward] {
        let remaining = max_runs.saturating_sub(out.runs);
        if remaining == 0 || out.found.is_some() {
            break;
        }
        let mut found = None;
        let mut unifiable = false;
        let r = enumerate_runs(&set, Algorithm::Mma, remaining, &mut |_, end| {
            if let (RunEnd::Success(f), None) = (end, &found) {
                unifiable = true;
                let theta = extract_mgu(f).expect("classical runs end solved");
                let on_s = theta.restrict(&s_vars);
                if on_s.linear_for(avoid) && on_s.range().is_subset(&t_vars) {
                    found = Some(theta);
                }
            }
        });
        out.runs += r.runs;
        out.truncated |= r.truncated;
        out.unifiable |= unifiable;
        if found.is_some() {
            out.found = found;
        }
    }
    Ok(out)
}
