//! Bounded SLD-resolution.
//!
//! Trees are built breadth-first. At every node each selected atom is
//! resolved against every clause of its predicate (standardized apart with
//! one fresh-variable counter per tree); each such atom/head pair is an
//! *available unification* and is classified as NSTO / WNSTO. The sound
//! engine unifies with the occur-check; the unsound engine runs the
//! occur-check-free algorithm and completes the resulting semi-solved form.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::canon::canonical_sequence;
use crate::moding::{is_builtin, split, Moding};
use crate::modes::{self, ModeError};
use crate::nsto::{classify_atoms, Property, Value, Verdict, DEFAULT_BUDGET};
use crate::parser::Program;
use crate::render::{render_atom, render_query, render_substitution};
use crate::term::{query_vars, standardize_apart, Atom, Clause, Substitution, Term, VarGen};
use crate::unify::{finish_semi_solved, run, Algorithm, EquationSet, FailureKind, Finished, Strategy};

pub const DEFAULT_MAX_DEPTH: usize = 500;
pub const DEFAULT_MAX_NODES: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SldError {
    #[error("cannot select from the empty query")]
    EmptyQuery,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SelectionRule {
    Leftmost,
    /// The first atom whose input positions are ground.
    ModeCompatible(Moding),
    /// Branch over every atom position.
    AllRules,
}

impl SelectionRule {
    pub fn name(&self) -> &'static str {
        match self {
            SelectionRule::Leftmost => "leftmost",
            SelectionRule::ModeCompatible(_) => "mode-compatible",
            SelectionRule::AllRules => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    Atoms(Vec<usize>),
    Flounder,
}

/// Input positions of `atom` are ground under `m`; atoms of undeclared
/// predicates have no input positions.
pub fn ground_inputs(atom: &Atom, m: &Moding) -> bool {
    match m.get(&atom.key()) {
        Some(modes) => split(atom, &modes).input.iter().all(Term::is_ground),
        None => true,
    }
}

pub fn select(query: &[Atom], rule: &SelectionRule) -> Result<Selection, SldError> {
    if query.is_empty() {
        return Err(SldError::EmptyQuery);
    }
    Ok(match rule {
        SelectionRule::Leftmost => Selection::Atoms(vec![0]),
        SelectionRule::AllRules => Selection::Atoms((0..query.len()).collect()),
        SelectionRule::ModeCompatible(m) => match query.iter().position(|a| ground_inputs(a, m)) {
            Some(i) => Selection::Atoms(vec![i]),
            None => Selection::Flounder,
        },
    })
}

/// Every atom's input positions are ground under `m`.
pub fn check_query_ground_inputs(query: &[Atom], m: &Moding) -> Result<bool, ModeError> {
    for a in query {
        let p = modes::project(a, m)?;
        if !p.input.iter().all(Term::is_ground) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotUnifiable {
    Clash,
    OccurCheck,
}

fn replace_atom(query: &[Atom], i: usize, body: &[Atom], s: &Substitution) -> Vec<Atom> {
    query[..i]
        .iter()
        .chain(body)
        .chain(&query[i + 1..])
        .map(|a| a.apply(s))
        .collect()
}

/// `H = A`, head on the left so that clause variables get bound to query
/// variables rather than the other way round.
fn head_equations(a: &Atom, head: &Atom) -> EquationSet {
    EquationSet::from_pairs(head.args.iter().cloned().zip(a.args.iter().cloned()))
}

/// SLD-resolvent of `query` and `clause` (already standardized apart) on
/// atom `i`, using the sound algorithm.
pub fn resolve(query: &[Atom], i: usize, clause: &Clause) -> Result<(Vec<Atom>, Substitution), NotUnifiable> {
    let a = &query[i];
    if a.key() != clause.head.key() {
        return Err(NotUnifiable::Clash);
    }
    let e = head_equations(a, &clause.head);
    let trace = run(&e, &Strategy::FirstApplicable, Algorithm::Mma).expect("unscripted runs do not error");
    match trace.failure() {
        Some(f) if f.kind == FailureKind::Occur => Err(NotUnifiable::OccurCheck),
        Some(_) => Err(NotUnifiable::Clash),
        None => {
            let theta = crate::unify::extract_mgu(trace.final_set().expect("succeeded"))
                .expect("classical runs end solved");
            Ok((replace_atom(query, i, &clause.body, &theta), theta))
        }
    }
}

enum UnsoundStep {
    Resolvent(Vec<Atom>, Substitution),
    Fail,
    Cyclic(String),
}

fn resolve_unsound(query: &[Atom], i: usize, clause: &Clause) -> UnsoundStep {
    let a = &query[i];
    let e = head_equations(a, &clause.head);
    let trace = run(&e, &Strategy::FirstApplicable, Algorithm::MmaMinus).expect("unscripted runs do not error");
    let Some(f) = trace.final_set() else {
        return UnsoundStep::Fail;
    };
    match finish_semi_solved(f).expect("occur-check-free runs end semi-solved") {
        Finished::Mgu(theta) => UnsoundStep::Resolvent(replace_atom(query, i, &clause.body, &theta), theta),
        Finished::NotUnifiable(_) => UnsoundStep::Cyclic(f.render()),
    }
}

fn run_builtin(atom: &Atom) -> bool {
    match (&*atom.pred, atom.args.as_slice()) {
        ("constant", [t]) => matches!(t, Term::App(_, args) if args.is_empty()),
        ("\\==", [x, y]) => x != y,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    /// Expanded (has children) or not yet visited.
    Open,
    Success,
    Failure,
    Floundered,
    DepthCut,
    /// Unsound engine only: the occur-check-free unification left a
    /// semi-solved form without a finite solution.
    CyclicBinding,
    /// All-rules trees only: the query is a variant of an earlier node's
    /// query, whose subtree covers the same unifications.
    Subsumed,
}

impl fmt::Display for NodeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NodeStatus::Open => "open",
            NodeStatus::Success => "success",
            NodeStatus::Failure => "failure",
            NodeStatus::Floundered => "floundered",
            NodeStatus::DepthCut => "depth_cut",
            NodeStatus::CyclicBinding => "cyclic_binding",
            NodeStatus::Subsumed => "subsumed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub parent: usize,
    pub atom: usize,
    /// Clause index, `None` for a built-in step.
    pub clause: Option<usize>,
    pub mgu: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SldNode {
    pub id: usize,
    pub query: Vec<Atom>,
    pub depth: usize,
    pub incoming: Option<Edge>,
    pub status: NodeStatus,
    pub children: Vec<usize>,
    /// Atom positions selected when the node was expanded.
    pub selected: Vec<usize>,
    /// Composition of the mgus from the root.
    pub answer: Substitution,
    /// The unsolvable semi-solved form of a cyclic-binding node.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvailableUnification {
    pub node: usize,
    pub atom_index: usize,
    pub clause: usize,
    pub atom: Atom,
    pub head: Atom,
    pub nsto: Option<Verdict>,
    pub wnsto: Option<Verdict>,
}

impl AvailableUnification {
    pub fn verdict(&self, property: Property) -> Option<&Verdict> {
        match property {
            Property::Nsto => self.nsto.as_ref(),
            Property::Wnsto => self.wnsto.as_ref(),
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{} = {} (node {}, clause {})",
            render_atom(&self.atom),
            render_atom(&self.head),
            self.node,
            self.clause + 1
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Sound,
    Unsound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_depth: DEFAULT_MAX_DEPTH,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeOptions {
    pub rule: SelectionRule,
    pub bounds: Bounds,
    pub engine: Engine,
    /// Properties to decide for each available unification.
    pub classify: Vec<Property>,
    /// Search budget per decision.
    pub budget: usize,
    /// Stop expanding once some unification is classified as failing
    /// this property. The nodes left unexpanded stay `Open`.
    pub stop_on: Option<Property>,
}

impl TreeOptions {
    pub fn new(rule: SelectionRule) -> Self {
        TreeOptions {
            rule,
            bounds: Bounds::default(),
            engine: Engine::Sound,
            classify: vec![Property::Nsto, Property::Wnsto],
            budget: DEFAULT_BUDGET,
            stop_on: None,
        }
    }

    pub fn bounds(mut self, max_depth: usize, max_nodes: usize) -> Self {
        self.bounds = Bounds { max_depth, max_nodes };
        self
    }

    pub fn engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn classify(mut self, properties: &[Property]) -> Self {
        self.classify = properties.to_vec();
        self
    }

    pub fn stop_on(mut self, property: Option<Property>) -> Self {
        self.stop_on = property;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SldTree {
    pub nodes: Vec<SldNode>,
    pub unifications: Vec<AvailableUnification>,
    pub options: TreeOptions,
    pub initial: Vec<Atom>,
    /// Some node was cut by a bound.
    pub truncated: bool,
    /// Expansion stopped early at a refuted unification.
    pub stopped: bool,
}

impl SldTree {
    pub fn root(&self) -> &SldNode {
        &self.nodes[0]
    }

    pub fn leaves(&self, status: NodeStatus) -> impl Iterator<Item = &SldNode> {
        self.nodes.iter().filter(move |n| n.status == status)
    }

    /// Answer substitutions of the success leaves, restricted to the
    /// variables of the initial query.
    pub fn answers(&self) -> Vec<Substitution> {
        let vars = query_vars(&self.initial);
        self.leaves(NodeStatus::Success)
            .map(|n| n.answer.restrict(&vars))
            .collect()
    }

    /// Answers as instances of the initial query, modulo renaming, sorted.
    pub fn answer_instances(&self) -> Vec<Vec<Term>> {
        let mut out: Vec<Vec<Term>> = self
            .leaves(NodeStatus::Success)
            .map(|n| {
                let inst: Vec<Term> = self.initial.iter().map(|a| a.apply(&n.answer).to_term()).collect();
                canonical_sequence(&inst)
            })
            .collect();
        out.sort();
        out
    }

    /// The failure frontier: parent queries (modulo renaming) of failed
    /// leaves, sorted.
    pub fn failure_frontier(&self) -> Vec<Vec<Term>> {
        let mut out: Vec<Vec<Term>> = self
            .leaves(NodeStatus::Failure)
            .map(|n| canonical_sequence(&n.query.iter().map(Atom::to_term).collect::<Vec<_>>()))
            .collect();
        out.sort();
        out
    }

    pub fn count(&self, status: NodeStatus) -> usize {
        self.leaves(status).count()
    }

    /// Indented human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let n = &self.nodes[id];
            let via = match &n.incoming {
                Some(Edge { atom, clause: Some(c), mgu, .. }) => {
                    format!("atom {} clause {} {} ", atom + 1, c + 1, render_substitution(mgu))
                }
                Some(Edge { atom, clause: None, .. }) => format!("atom {} builtin ", atom + 1),
                None => String::new(),
            };
            let status = match n.status {
                NodeStatus::Open if !n.children.is_empty() => String::new(),
                s => format!("  [{s}]"),
            };
            out.push_str(&format!(
                "{}{}{}: {}{}\n",
                "  ".repeat(n.depth),
                via,
                n.id,
                render_query(&n.query),
                status
            ));
            stack.extend(n.children.iter().rev());
        }
        out
    }
}

/// Builds trees; `rule`, bounds and engine come from the options.
struct Builder<'a> {
    program: &'a Program,
    opts: &'a TreeOptions,
    gen: VarGen,
    nodes: Vec<SldNode>,
    unifications: Vec<AvailableUnification>,
    seen_unifications: HashSet<(Vec<Term>, usize, usize)>,
    verdicts: HashMap<Vec<Term>, Vec<Verdict>>,
    expanded_queries: HashSet<Vec<Term>>,
    truncated: bool,
    stopped: bool,
}

impl<'a> Builder<'a> {
    fn classify(&mut self, atom: &Atom, head: &Atom) -> Vec<Verdict> {
        let key = canonical_sequence(&[atom.to_term(), head.to_term()]);
        if let Some(v) = self.verdicts.get(&key) {
            return v.clone();
        }
        let v: Vec<Verdict> = self
            .opts
            .classify
            .iter()
            .map(|p| {
                classify_atoms(atom, head, &self.program.modes, *p, self.opts.budget)
                    .expect("same predicate by construction")
            })
            .collect();
        self.verdicts.insert(key, v.clone());
        v
    }

    fn add_child(&mut self, parent: usize, query: Vec<Atom>, edge: Edge, status: NodeStatus, note: Option<String>) {
        let id = self.nodes.len();
        let answer = self.nodes[parent].answer.compose(&edge.mgu);
        let depth = self.nodes[parent].depth + 1;
        self.nodes.push(SldNode {
            id,
            query,
            depth,
            incoming: Some(edge),
            status,
            children: Vec::new(),
            selected: Vec::new(),
            answer,
            note,
        });
        self.nodes[parent].children.push(id);
    }

    fn expand(&mut self, id: usize) {
        let query = self.nodes[id].query.clone();
        if query.is_empty() {
            self.nodes[id].status = NodeStatus::Success;
            return;
        }
        if self.nodes[id].depth >= self.opts.bounds.max_depth {
            self.nodes[id].status = NodeStatus::DepthCut;
            self.truncated = true;
            return;
        }
        let canon = canonical_sequence(&query.iter().map(Atom::to_term).collect::<Vec<_>>());
        if self.opts.rule == SelectionRule::AllRules && !self.expanded_queries.insert(canon.clone()) {
            self.nodes[id].status = NodeStatus::Subsumed;
            return;
        }
        let selected = match select(&query, &self.opts.rule).expect("query is nonempty") {
            Selection::Flounder => {
                self.nodes[id].status = NodeStatus::Floundered;
                return;
            }
            Selection::Atoms(s) => s,
        };
        self.nodes[id].selected = selected.clone();
        for i in selected {
            let atom = &query[i];
            if is_builtin(&atom.key()) {
                if run_builtin(atom) {
                    let rest = replace_atom(&query, i, &[], &Substitution::new());
                    let edge = Edge {
                        parent: id,
                        atom: i,
                        clause: None,
                        mgu: Substitution::new(),
                    };
                    self.add_child(id, rest, edge, NodeStatus::Open, None);
                }
                continue;
            }
            let key = atom.key();
            let clauses: Vec<(usize, Clause)> = self
                .program
                .clauses_for(&key)
                .map(|(ci, c)| (ci, c.clone()))
                .collect();
            for (ci, clause) in clauses {
                let fresh = standardize_apart(&clause, &BTreeSet::new(), &mut self.gen);
                if self.seen_unifications.insert((canon.clone(), i, ci)) {
                    let verdicts = self.classify(atom, &fresh.head);
                    let pick = |p: Property| {
                        self.opts
                            .classify
                            .iter()
                            .position(|q| *q == p)
                            .map(|k| verdicts[k].clone())
                    };
                    self.unifications.push(AvailableUnification {
                        node: id,
                        atom_index: i,
                        clause: ci,
                        atom: atom.clone(),
                        head: fresh.head.clone(),
                        nsto: pick(Property::Nsto),
                        wnsto: pick(Property::Wnsto),
                    });
                    if let Some(p) = self.opts.stop_on {
                        let last = self.unifications.last().expect("just pushed");
                        if last.verdict(p).is_some_and(|v| v.value == Value::False) {
                            self.stopped = true;
                        }
                    }
                }
                let edge = |mgu| Edge {
                    parent: id,
                    atom: i,
                    clause: Some(ci),
                    mgu,
                };
                match self.opts.engine {
                    Engine::Sound => {
                        if let Ok((q, theta)) = resolve(&query, i, &fresh) {
                            self.add_child(id, q, edge(theta), NodeStatus::Open, None);
                        }
                    }
                    Engine::Unsound => match resolve_unsound(&query, i, &fresh) {
                        UnsoundStep::Resolvent(q, theta) => {
                            self.add_child(id, q, edge(theta), NodeStatus::Open, None)
                        }
                        UnsoundStep::Fail => {}
                        UnsoundStep::Cyclic(note) => self.add_child(
                            id,
                            Vec::new(),
                            edge(Substitution::new()),
                            NodeStatus::CyclicBinding,
                            Some(note),
                        ),
                    },
                }
            }
        }
        if self.nodes[id].children.is_empty() {
            self.nodes[id].status = NodeStatus::Failure;
        }
    }
}

fn build(program: &Program, query: &[Atom], opts: &TreeOptions) -> SldTree {
    let mut gen = program.vars.clone();
    gen.reserve(&program.clauses.iter().flat_map(Clause::vars).collect::<BTreeSet<_>>());
    gen.reserve(&query_vars(query));
    let mut b = Builder {
        program,
        opts,
        gen,
        nodes: vec![SldNode {
            id: 0,
            query: query.to_vec(),
            depth: 0,
            incoming: None,
            status: NodeStatus::Open,
            children: Vec::new(),
            selected: Vec::new(),
            answer: Substitution::new(),
            note: None,
        }],
        unifications: Vec::new(),
        seen_unifications: HashSet::new(),
        verdicts: HashMap::new(),
        expanded_queries: HashSet::new(),
        truncated: false,
        stopped: false,
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        if b.stopped {
            break;
        }
        if b.nodes[id].status != NodeStatus::Open {
            continue;
        }
        if b.nodes.len() >= opts.bounds.max_nodes && !b.nodes[id].query.is_empty() {
            b.nodes[id].status = NodeStatus::DepthCut;
            b.truncated = true;
            continue;
        }
        let before = b.nodes.len();
        b.expand(id);
        queue.extend(before..b.nodes.len());
    }
    SldTree {
        nodes: b.nodes,
        unifications: b.unifications,
        options: opts.clone(),
        initial: query.to_vec(),
        truncated: b.truncated,
        stopped: b.stopped,
    }
}

/// SLD-tree with sound unification.
pub fn build_tree(program: &Program, query: &[Atom], opts: &TreeOptions) -> SldTree {
    let mut o = opts.clone();
    o.engine = Engine::Sound;
    build(program, query, &o)
}

/// SLD-tree with occur-check-free unification.
pub fn execute_unsound(program: &Program, query: &[Atom], opts: &TreeOptions) -> SldTree {
    let mut o = opts.clone();
    o.engine = Engine::Unsound;
    build(program, query, &o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Every available unification is NSTO.
    Strict,
    /// Every available unification is WNSTO.
    Weak,
}

impl VerifyMode {
    pub fn property(self) -> Property {
        match self {
            VerifyMode::Strict => Property::Nsto,
            VerifyMode::Weak => Property::Wnsto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    /// No available unification was refuted. `complete` is false when the
    /// tree was cut by a bound, so the claim holds only up to the bounds.
    Verified { complete: bool, unifications: usize },
    Refuted(Box<AvailableUnification>),
    /// Some decision ran out of budget and none was refuted.
    Inconclusive { unifications: usize },
}

/// Check every available unification of the tree.
pub fn verify_occur_check_free(tree: &SldTree, mode: VerifyMode) -> Verification {
    let p = mode.property();
    let mut exceeded = false;
    for u in &tree.unifications {
        match u.verdict(p).map(|v| v.value) {
            Some(Value::False) => return Verification::Refuted(Box::new(u.clone())),
            Some(Value::BudgetExceeded) | None => exceeded = true,
            Some(Value::True) => {}
        }
    }
    if exceeded {
        Verification::Inconclusive {
            unifications: tree.unifications.len(),
        }
    } else {
        Verification::Verified {
            complete: !tree.truncated,
            unifications: tree.unifications.len(),
        }
    }
}

/// A syntactic reason why every tree for the program and query is
/// occur-check free (strict) or weakly so (weak), independent of bounds.
/// A syntactic reason why every tree for `query` is (weakly) occur-check
/// free. Tidiness works for any selection rule; the well-3-moded argument
/// needs a rule that only selects atoms with ground inputs.
pub fn unconditional_certificate(
    program: &Program,
    query: &[Atom],
    mode: VerifyMode,
    rule: &SelectionRule,
) -> Option<&'static str> {
    let m = &program.modes;
    match mode {
        VerifyMode::Strict => {
            let ok = modes::is_tidy_program(&program.clauses, m).unwrap_or(false)
                && modes::is_tidy_query(query, m).unwrap_or(false);
            ok.then_some("tidy program and query")
        }
        VerifyMode::Weak => {
            let ok = !matches!(rule, SelectionRule::AllRules)
                && modes::is_well_3_moded_program(&program.clauses, m).unwrap_or(false)
                && modes::is_well_3_moded_query(query, m).unwrap_or(false)
                && modes::has_weakly_linear_heads(&program.clauses, m).unwrap_or(false);
            ok.then_some("well-3-moded with weakly linear heads")
        }
    }
}
