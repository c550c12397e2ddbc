//! Finite first-order terms, atoms, clauses and substitutions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Interned-ish symbol name. Cloning is a refcount bump.
pub type Sym = Arc<str>;

/// A logic variable. Identity is the integer id; the name is only a
/// rendering hint.
#[derive(Clone, Debug)]
pub struct Var {
    pub id: u32,
    pub name: Option<Sym>,
}

impl Var {
    pub fn new(id: u32) -> Self {
        Var { id, name: None }
    }

    pub fn named(id: u32, name: &str) -> Self {
        Var {
            id,
            name: Some(Arc::from(name)),
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id.cmp(&other.id)
    }
}

/// Monotone source of fresh variables, one per analysis session.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    /// A generator whose fresh variables never collide with `vars`.
    pub fn above<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Self {
        let mut gen = VarGen::new();
        gen.reserve(vars);
        gen
    }

    pub fn reserve<'a>(&mut self, vars: impl IntoIterator<Item = &'a Var>) {
        for v in vars {
            if v.id >= self.next {
                self.next = v.id + 1;
            }
        }
    }

    pub fn fresh(&mut self) -> Var {
        let v = Var::new(self.next);
        self.next += 1;
        v
    }

    pub fn fresh_named(&mut self, name: &str) -> Var {
        let v = Var::named(self.next, name);
        self.next += 1;
        v
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

/// A first-order term. Constants are 0-ary applications; a functor is
/// identified by its name together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Sym, Vec<Term>),
}

pub const NIL: &str = "[]";
pub const CONS: &str = ".";

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn constant(name: &str) -> Term {
        Term::App(Arc::from(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(name), args)
    }

    pub fn nil() -> Term {
        Term::constant(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::app(CONS, vec![head, tail])
    }

    pub fn list(items: Vec<Term>, tail: Term) -> Term {
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, item| Term::cons(item, acc))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Name and arity of the principal functor, `None` for variables.
    pub fn functor(&self) -> Option<(&str, usize)> {
        match self {
            Term::Var(_) => None,
            Term::App(f, args) => Some((f, args.len())),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Number of variable and symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn max_arity(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args
                .iter()
                .map(Term::max_arity)
                .fold(args.len(), usize::max),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    /// Visit every variable occurrence, left to right.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => {
                for a in args {
                    a.for_each_var(f);
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.for_each_var(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::App(name, args) => {
                Term::App(name.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

pub fn occurs_in(v: &Var, t: &Term) -> bool {
    t.occurs(v)
}

pub fn term_size(t: &Term) -> usize {
    t.size()
}

/// Variables of a sequence of terms.
pub fn vars_of<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for t in terms {
        t.for_each_var(&mut |v| {
            out.insert(v.clone());
        });
    }
    out
}

/// A sequence of terms is linear when no variable occurs in it twice.
pub fn is_linear<'a>(terms: impl IntoIterator<Item = &'a Term>) -> bool {
    let mut seen = BTreeSet::new();
    let mut linear = true;
    for t in terms {
        t.for_each_var(&mut |v| {
            if !seen.insert(v.id) {
                linear = false;
            }
        });
        if !linear {
            return false;
        }
    }
    linear
}

/// Number of occurrences of each variable across the given terms.
pub fn occurrence_counts<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeMap<Var, usize> {
    let mut counts = BTreeMap::new();
    for t in terms {
        t.for_each_var(&mut |v| *counts.entry(v.clone()).or_insert(0) += 1);
    }
    counts
}

pub fn disjoint(a: &BTreeSet<Var>, b: &BTreeSet<Var>) -> bool {
    a.intersection(b).next().is_none()
}

/// Predicate symbol together with its arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredKey {
    pub name: Sym,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: &str, arity: usize) -> Self {
        PredKey {
            name: Arc::from(name),
            arity,
        }
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: Arc::from(pred),
            args,
        }
    }

    pub fn key(&self) -> PredKey {
        PredKey {
            name: self.pred.clone(),
            arity: self.args.len(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// The atom viewed as a term, for unification.
    pub fn to_term(&self) -> Term {
        Term::App(self.pred.clone(), self.args.clone())
    }

    pub fn from_term(t: &Term) -> Option<Atom> {
        match t {
            Term::App(f, args) => Some(Atom {
                pred: f.clone(),
                args: args.clone(),
            }),
            Term::Var(_) => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        vars_of(&self.args)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn is_linear(&self) -> bool {
        is_linear(&self.args)
    }

    pub fn apply(&self, s: &Substitution) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| s.apply(a)).collect(),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(|a| a.map_vars(f)).collect(),
        }
    }
}

/// A definite clause `head :- body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn fact(head: Atom) -> Self {
        Clause {
            head,
            body: Vec::new(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.head.vars();
        for a in &self.body {
            out.extend(a.vars());
        }
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Clause {
        Clause {
            head: self.head.map_vars(f),
            body: self.body.iter().map(|a| a.map_vars(f)).collect(),
        }
    }
}

pub fn query_vars(query: &[Atom]) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    for a in query {
        out.extend(a.vars());
    }
    out
}

/// Rename `clause` apart from `avoid`. Renamed variables keep their source
/// name as a prefix so traces stay readable.
pub fn standardize_apart(clause: &Clause, avoid: &BTreeSet<Var>, gen: &mut VarGen) -> Clause {
    gen.reserve(avoid);
    gen.reserve(&clause.vars());
    let mut renaming: BTreeMap<Var, Var> = BTreeMap::new();
    clause.map_vars(&mut |v| {
        let fresh = renaming
            .entry(v.clone())
            .or_insert_with(|| {
                let id = gen.peek();
                match &v.name {
                    Some(n) => gen.fresh_named(&format!("{}_{}", n.trim_start_matches('_'), id)),
                    None => gen.fresh(),
                }
            })
            .clone();
        Term::Var(fresh)
    })
}

/// Finite map from variables to terms with no identity bindings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(v, t);
        s
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Term)>) -> Self {
        let mut s = Substitution::new();
        for (v, t) in pairs {
            s.insert(v, t);
        }
        s
    }

    /// Adds a binding; `X/X` is dropped.
    pub fn insert(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.map.keys().cloned().collect()
    }

    pub fn range(&self) -> BTreeSet<Var> {
        vars_of(self.map.values())
    }

    /// `Dom ∪ Ran`.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.domain();
        out.extend(self.range());
        out
    }

    /// Simultaneous application.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| match self.map.get(v) {
            Some(u) => u.clone(),
            None => Term::Var(v.clone()),
        })
    }

    /// `self` followed by `then`: `apply(compose(θ,γ), e) = apply(γ, apply(θ, e))`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(v.clone(), then.apply(t));
        }
        for (v, t) in &then.map {
            if !self.map.contains_key(v) {
                out.insert(v.clone(), t.clone());
            }
        }
        out
    }

    /// `θ|S`.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        disjoint(&self.domain(), &self.range())
    }

    /// For every two distinct `X, Y` in `vars`, the pair `Xθ, Yθ` is linear.
    pub fn linear_for(&self, vars: &BTreeSet<Var>) -> bool {
        let images: Vec<Term> = vars.iter().map(|v| self.apply(&Term::Var(v.clone()))).collect();
        for i in 0..images.len() {
            for j in (i + 1)..images.len() {
                if !is_linear([&images[i], &images[j]]) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether `self` unifies every pair.
    pub fn unifies<'a>(&self, pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>) -> bool {
        pairs.into_iter().all(|(l, r)| self.apply(l) == self.apply(r))
    }
}

pub fn compose(first: &Substitution, then: &Substitution) -> Substitution {
    first.compose(then)
}

pub fn restrict(s: &Substitution, vars: &BTreeSet<Var>) -> Substitution {
    s.restrict(vars)
}

pub fn linear_for(s: &Substitution, vars: &BTreeSet<Var>) -> bool {
    s.linear_for(vars)
}
