//! Random terms, equation sets, queries and clauses shared by the
//! property tests and the acceptance suite.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;

use occur::moding::{Mode, Moding};
use occur::term::{Atom, Clause, Term, Var};
use occur::unify::EquationSet;

/// Function symbols used by every generator: two constants and one
/// symbol each of arity 1, 2 and 3.
pub const SIGNATURE: [(&str, usize); 5] = [("a", 0), ("b", 0), ("f", 1), ("g", 2), ("h", 3)];

pub fn var(i: u32) -> Term {
    Term::var(Var::named(i, &format!("V{i}")))
}

/// A term of at most `max_size` symbols over variables `V0..V{nvars-1}`.
pub fn random_term<R: Rng>(rng: &mut R, max_size: usize, nvars: u32) -> Term {
    if max_size <= 1 || rng.gen_bool(0.3) {
        return if nvars > 0 && rng.gen_bool(0.6) {
            var(rng.gen_range(0..nvars))
        } else {
            Term::constant(SIGNATURE[rng.gen_range(0..2)].0)
        };
    }
    let fitting: Vec<_> = SIGNATURE.iter().filter(|(_, n)| *n >= 1 && *n < max_size).collect();
    let &(name, arity) = fitting[rng.gen_range(0..fitting.len())];
    let mut left = max_size - 1;
    let mut args = Vec::with_capacity(arity);
    for i in 0..arity {
        let share = (left / (arity - i)).max(1);
        let size = rng.gen_range(1..=share);
        left = left.saturating_sub(size);
        args.push(random_term(rng, size, nvars));
    }
    Term::app(name, args)
}

/// A copy of `t` with some subterms swapped for variables or for fresh
/// random terms. Pairs built this way often get past the first clash.
pub fn perturb<R: Rng>(rng: &mut R, t: &Term, nvars: u32) -> Term {
    let roll: f64 = rng.gen();
    if roll < 0.2 && nvars > 0 {
        return var(rng.gen_range(0..nvars));
    }
    if roll < 0.3 {
        return random_term(rng, t.size().max(1), nvars);
    }
    match t {
        Term::App(name, args) => Term::App(name.clone(), args.iter().map(|a| perturb(rng, a, nvars)).collect()),
        Term::Var(_) => t.clone(),
    }
}

/// One to three equations whose sides have at most `max_size` symbols.
/// Most right-hand sides are perturbed copies of their left-hand side.
pub fn random_set<R: Rng>(rng: &mut R, max_size: usize, nvars: u32) -> EquationSet {
    let n = rng.gen_range(1..=3);
    EquationSet::from_pairs((0..n).map(|_| {
        let lhs = random_term(rng, max_size, nvars);
        let rhs = if rng.gen_bool(0.7) {
            perturb(rng, &lhs, nvars)
        } else {
            random_term(rng, max_size, nvars)
        };
        (lhs, rhs)
    }))
}

/// Proptest strategy for terms over `V0..V{nvars-1}`.
pub fn term_strategy(nvars: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..nvars).prop_map(var),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Term::app("g", vec![x, y])),
            (inner.clone(), inner.clone(), inner).prop_map(|(x, y, z)| Term::app("h", vec![x, y, z])),
        ]
    })
}

pub fn set_strategy(nvars: u32) -> impl Strategy<Value = EquationSet> {
    prop::collection::vec((term_strategy(nvars), term_strategy(nvars)), 1..=3)
        .prop_map(EquationSet::from_pairs)
}

/// Predicates `p/2`, `q/2`, `r/3` with a random 2-valued moding.
pub const PREDICATES: [(&str, usize); 3] = [("p", 2), ("q", 2), ("r", 3)];

pub fn random_moding<R: Rng>(rng: &mut R, modes: &[Mode]) -> Moding {
    let mut m = Moding::new();
    for (name, arity) in PREDICATES {
        let ms: Vec<Mode> = (0..arity).map(|_| modes[rng.gen_range(0..modes.len())]).collect();
        m = m.with(name, &ms);
    }
    m
}

pub fn random_atom<R: Rng>(rng: &mut R, max_size: usize, vars: std::ops::Range<u32>) -> Atom {
    let (name, arity) = PREDICATES[rng.gen_range(0..PREDICATES.len())];
    let args = (0..arity).map(|_| shifted(random_term(rng, max_size, vars.len() as u32), vars.start)).collect();
    Atom::new(name, args)
}

/// Renumbers `V0..` to start at `base`.
fn shifted(t: Term, base: u32) -> Term {
    t.map_vars(&mut |v| var(v.id + base))
}

pub fn random_query<R: Rng>(rng: &mut R, len: usize, max_size: usize, vars: std::ops::Range<u32>) -> Vec<Atom> {
    (0..len).map(|_| random_atom(rng, max_size, vars.clone())).collect()
}

pub fn random_clause<R: Rng>(rng: &mut R, body_len: usize, max_size: usize, vars: std::ops::Range<u32>) -> Clause {
    Clause {
        head: random_atom(rng, max_size, vars.clone()),
        body: random_query(rng, body_len, max_size, vars),
    }
}

/// Ground terms small enough to enumerate as candidate solutions.
pub fn small_ground_terms() -> Vec<Term> {
    let a = Term::constant("a");
    let b = Term::constant("b");
    vec![
        a.clone(),
        b.clone(),
        Term::app("f", vec![a.clone()]),
        Term::app("f", vec![b.clone()]),
        Term::app("g", vec![a.clone(), b.clone()]),
        Term::app("f", vec![Term::app("f", vec![a])]),
    ]
}

/// Draws until `keep` accepts, giving up after `tries` draws.
pub fn draw<R: Rng, T>(rng: &mut R, tries: usize, mut gen: impl FnMut(&mut R) -> T, keep: impl Fn(&T) -> bool) -> Option<T> {
    (0..tries).map(|_| gen(rng)).find(|x| keep(x))
}

/// A query on variables `V0..V3` and a clause on `V10..V13` that both
/// satisfy their checks under a random moding drawn from `modes`, such
/// that some query atom resolves with the clause.
pub fn related_pair<R: Rng>(
    rng: &mut R,
    modes: &[Mode],
    ok_query: impl Fn(&[Atom], &Moding) -> bool,
    ok_clause: impl Fn(&Clause, &Moding) -> bool,
) -> Option<(Vec<Atom>, Clause, Moding)> {
    for _ in 0..200 {
        let m = random_moding(rng, modes);
        let Some(q) = draw(
            rng,
            200,
            |r| {
                let len = r.gen_range(1..=3);
                random_query(r, len, 4, 0..4)
            },
            |q| ok_query(q, &m),
        ) else {
            continue;
        };
        let Some(c) = draw(
            rng,
            400,
            |r| {
                let len = r.gen_range(0..=2);
                random_clause(r, len, 4, 10..14)
            },
            |c| {
                q.iter()
                    .enumerate()
                    .any(|(i, a)| a.key() == c.head.key() && occur::sld::resolve(&q, i, c).is_ok())
                    && ok_clause(c, &m)
            },
        ) else {
            continue;
        };
        return Some((q, c, m));
    }
    None
}
