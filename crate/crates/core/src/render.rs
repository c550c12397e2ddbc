//! Printing terms back in the reader's syntax.

use std::fmt::Write;

use crate::term::{Atom, Clause, Substitution, Term, Var, CONS, NIL};

fn infix_prec(name: &str) -> Option<u32> {
    match name {
        "^" => Some(200),
        "*" => Some(400),
        "+" => Some(500),
        _ => None,
    }
}

fn prec_of(t: &Term) -> u32 {
    match t {
        Term::App(f, args) if args.len() == 2 => infix_prec(f).unwrap_or(0),
        _ => 0,
    }
}

fn plain_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => name.chars().all(|c| c.is_ascii_digit()),
        _ => name == NIL,
    }
}

fn write_name(out: &mut String, name: &str) {
    if plain_name(name) {
        out.push_str(name);
    } else {
        let _ = write!(out, "'{name}'");
    }
}

pub fn render_var(v: &Var) -> String {
    match &v.name {
        Some(n) => n.to_string(),
        None => format!("_G{}", v.id),
    }
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(v) => out.push_str(&render_var(v)),
        Term::App(f, args) if &**f == CONS && args.len() == 2 => {
            out.push('[');
            write_term(out, &args[0]);
            let mut tail = &args[1];
            loop {
                match tail {
                    Term::App(g, rest) if &**g == CONS && rest.len() == 2 => {
                        out.push(',');
                        write_term(out, &rest[0]);
                        tail = &rest[1];
                    }
                    Term::App(g, rest) if &**g == NIL && rest.is_empty() => break,
                    other => {
                        out.push('|');
                        write_term(out, other);
                        break;
                    }
                }
            }
            out.push(']');
        }
        Term::App(f, args) if args.len() == 2 && infix_prec(f).is_some() => {
            let p = infix_prec(f).unwrap_or(0);
            let (l, r) = (&args[0], &args[1]);
            let lp = prec_of(l) > p;
            let rp = prec_of(r) >= p && prec_of(r) > 0;
            if lp {
                out.push('(');
            }
            write_term(out, l);
            if lp {
                out.push(')');
            }
            if &**f == "+" {
                out.push_str(" + ");
            } else {
                out.push_str(f);
            }
            if rp {
                out.push('(');
            }
            write_term(out, r);
            if rp {
                out.push(')');
            }
        }
        Term::App(f, args) => {
            write_name(out, f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(out, a);
                }
                out.push(')');
            }
        }
    }
}

pub fn render_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

pub fn render_atom(a: &Atom) -> String {
    if &*a.pred == "\\==" && a.args.len() == 2 {
        return format!("{} \\== {}", render_term(&a.args[0]), render_term(&a.args[1]));
    }
    render_term(&a.to_term())
}

pub fn render_query(q: &[Atom]) -> String {
    if q.is_empty() {
        return "true".to_string();
    }
    q.iter().map(render_atom).collect::<Vec<_>>().join(", ")
}

pub fn render_clause(c: &Clause) -> String {
    if c.body.is_empty() {
        format!("{}.", render_atom(&c.head))
    } else {
        format!("{} :- {}.", render_atom(&c.head), render_query(&c.body))
    }
}

/// `{X/t, ...}`.
pub fn render_substitution(s: &Substitution) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|(v, t)| format!("{}/{}", render_var(v), render_term(t)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// `X = t, ...`, or `true` for the empty set.
pub fn render_pairs<'a>(pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>) -> String {
    let parts: Vec<String> = pairs
        .into_iter()
        .map(|(l, r)| format!("{} = {}", render_term(l), render_term(r)))
        .collect();
    if parts.is_empty() {
        "true".to_string()
    } else {
        parts.join(", ")
    }
}
