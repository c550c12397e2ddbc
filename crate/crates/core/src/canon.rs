//! Canonical representatives modulo variable renaming.
//!
//! The canonical form of a state is itself a variant of the state, so two
//! states with equal canonical forms are always renamings of each other.
//! Isomorphic states may still get different forms when the sort is not a
//! fixpoint; that only costs a memo miss.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::term::{Term, Var};

fn cmp_shape(a: &Term, b: &Term) -> Ordering {
    match (a, b) {
        (Term::Var(_), Term::Var(_)) => Ordering::Equal,
        (Term::Var(_), Term::App(..)) => Ordering::Less,
        (Term::App(..), Term::Var(_)) => Ordering::Greater,
        (Term::App(f, xs), Term::App(g, ys)) => f
            .cmp(g)
            .then(xs.len().cmp(&ys.len()))
            .then_with(|| {
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| cmp_shape(x, y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            }),
    }
}

fn cmp_pair_shape(a: &(Term, Term), b: &(Term, Term)) -> Ordering {
    cmp_shape(&a.0, &b.0).then_with(|| cmp_shape(&a.1, &b.1))
}

/// Rename variables to `0, 1, ...` by first occurrence, dropping names.
pub fn renumber<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Vec<Term> {
    let mut map: HashMap<u32, u32> = HashMap::new();
    terms
        .into_iter()
        .map(|t| {
            t.map_vars(&mut |v| {
                let n = map.len() as u32;
                let id = *map.entry(v.id).or_insert(n);
                Term::Var(Var::new(id))
            })
        })
        .collect()
}

fn renumber_pairs(pairs: &[(Term, Term)]) -> Vec<(Term, Term)> {
    let flat: Vec<&Term> = pairs.iter().flat_map(|(l, r)| [l, r]).collect();
    let renamed = renumber(flat);
    renamed
        .chunks(2)
        .map(|c| (c[0].clone(), c[1].clone()))
        .collect()
}

/// Canonical form of a multiset of oriented equations.
pub fn canonical_pairs(pairs: &[(Term, Term)]) -> Vec<(Term, Term)> {
    let mut cur = pairs.to_vec();
    cur.sort_by(cmp_pair_shape);
    cur = renumber_pairs(&cur);
    for _ in 0..2 {
        let mut next = cur.clone();
        next.sort();
        let next = renumber_pairs(&next);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

/// Canonical form of an ordered sequence (no reordering).
pub fn canonical_sequence(terms: &[Term]) -> Vec<Term> {
    renumber(terms)
}

/// Whether two ordered sequences are variants of each other.
pub fn is_variant(a: &[Term], b: &[Term]) -> bool {
    a.len() == b.len() && canonical_sequence(a) == canonical_sequence(b)
}
