//! Mode-based syntactic checks: linearity of projections, the dependency
//! relation between atoms of a query, tidy / nicely moded / well-moded
//! programs, and exhaustive search over 2-valued modings.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::moding::{is_builtin, split, Mode, Moding, Projection};
use crate::render::render_var;
use crate::term::{disjoint, is_linear, occurrence_counts, vars_of, Atom, Clause, PredKey, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModeError {
    #[error("no moding declared for {0}")]
    Undeclared(PredKey),
    #[error("moding of {0} has neutral positions; a 2-valued moding is required")]
    NotTwoValued(PredKey),
    #[error("{positions} argument positions exceed the search cap of {cap}")]
    CapExceeded { positions: usize, cap: usize },
}

fn modes_of<'a>(atom: &Atom, m: &'a Moding) -> Result<Cow<'a, [Mode]>, ModeError> {
    m.get(&atom.key()).ok_or_else(|| ModeError::Undeclared(atom.key()))
}

fn two_valued<'a>(atom: &Atom, m: &'a Moding) -> Result<Cow<'a, [Mode]>, ModeError> {
    let modes = modes_of(atom, m)?;
    if modes.contains(&Mode::Neutral) {
        return Err(ModeError::NotTwoValued(atom.key()));
    }
    Ok(modes)
}

/// The terms in input, output and neutral positions of `atom`.
pub fn project(atom: &Atom, m: &Moding) -> Result<Projection, ModeError> {
    Ok(split(atom, &modes_of(atom, m)?))
}

pub fn input_linear(atom: &Atom, m: &Moding) -> Result<bool, ModeError> {
    Ok(is_linear(&project(atom, m)?.input))
}

pub fn output_linear(atom: &Atom, m: &Moding) -> Result<bool, ModeError> {
    Ok(is_linear(&project(atom, m)?.output))
}

pub fn input_output_disjoint(atom: &Atom, m: &Moding) -> Result<bool, ModeError> {
    let p = project(atom, m)?;
    Ok(disjoint(&vars_of(&p.input), &vars_of(&p.output)))
}

pub(crate) fn weakly_linear_with(atom: &Atom, modes: &[Mode]) -> bool {
    let inputs = vars_of(&split(atom, modes).input);
    occurrence_counts(&atom.args)
        .into_iter()
        .all(|(v, n)| n == 1 || inputs.contains(&v))
}

/// Every variable occurring more than once in `atom` occurs in one of its
/// input positions.
pub fn weakly_linear(atom: &Atom, m: &Moding) -> Result<bool, ModeError> {
    Ok(weakly_linear_with(atom, &modes_of(atom, m)?))
}

/// Edges `i -> j` when a variable occurs in an output position of atom `i`
/// and an input position of atom `j` (self-loops included).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepGraph {
    pub nodes: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DepGraph {
    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.nodes];
        for &(_, j) in &self.edges {
            indegree[j] += 1;
        }
        let mut ready: Vec<usize> = (0..self.nodes).filter(|&i| indegree[i] == 0).collect();
        let mut removed = 0;
        while let Some(i) = ready.pop() {
            removed += 1;
            for &(_, j) in self.edges.range((i, 0)..(i + 1, 0)) {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        removed == self.nodes
    }

    pub fn left_to_right(&self) -> bool {
        self.edges.iter().all(|&(i, j)| i < j)
    }
}

pub fn dep_graph(query: &[Atom], m: &Moding) -> Result<DepGraph, ModeError> {
    let projections: Vec<Projection> = query.iter().map(|a| project(a, m)).collect::<Result<_, _>>()?;
    let outs: Vec<BTreeSet<Var>> = projections.iter().map(|p| vars_of(&p.output)).collect();
    let ins: Vec<BTreeSet<Var>> = projections.iter().map(|p| vars_of(&p.input)).collect();
    let mut edges = BTreeSet::new();
    for (i, out) in outs.iter().enumerate() {
        for (j, inp) in ins.iter().enumerate() {
            if !disjoint(out, inp) {
                edges.insert((i, j));
            }
        }
    }
    Ok(DepGraph {
        nodes: query.len(),
        edges,
    })
}

fn require_two_valued(atoms: &[&Atom], m: &Moding) -> Result<(), ModeError> {
    for a in atoms {
        two_valued(a, m)?;
    }
    Ok(())
}

fn output_terms(query: &[Atom], m: &Moding) -> Result<Vec<Term>, ModeError> {
    let mut out = Vec::new();
    for a in query {
        out.extend(project(a, m)?.output);
    }
    Ok(out)
}

/// Why `query` is not tidy, or `None` when it is.
pub fn tidy_query_violation(query: &[Atom], m: &Moding) -> Result<Option<String>, ModeError> {
    require_two_valued(&query.iter().collect::<Vec<_>>(), m)?;
    if !is_linear(&output_terms(query, m)?) {
        return Ok(Some("query is not output linear".into()));
    }
    if !dep_graph(query, m)?.is_acyclic() {
        return Ok(Some("dependency relation of the query is cyclic".into()));
    }
    Ok(None)
}

/// Output linear with an acyclic dependency relation.
pub fn is_tidy_query(query: &[Atom], m: &Moding) -> Result<bool, ModeError> {
    Ok(tidy_query_violation(query, m)?.is_none())
}

fn vars_list(vs: &BTreeSet<Var>) -> String {
    vs.iter().map(render_var).collect::<Vec<_>>().join(", ")
}

pub fn tidy_clause_violation(c: &Clause, m: &Moding) -> Result<Option<String>, ModeError> {
    two_valued(&c.head, m)?;
    if let Some(reason) = tidy_query_violation(&c.body, m)? {
        return Ok(Some(format!("body: {reason}")));
    }
    let head = project(&c.head, m)?;
    if !is_linear(&head.input) {
        return Ok(Some("head is not input linear".into()));
    }
    let shared: BTreeSet<Var> = vars_of(&head.input)
        .intersection(&vars_of(&output_terms(&c.body, m)?))
        .cloned()
        .collect();
    if !shared.is_empty() {
        return Ok(Some(format!(
            "head input variable {} occurs in a body output",
            vars_list(&shared)
        )));
    }
    Ok(None)
}

pub fn is_tidy_clause(c: &Clause, m: &Moding) -> Result<bool, ModeError> {
    Ok(tidy_clause_violation(c, m)?.is_none())
}

/// The first clause breaking a property, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Index of the clause in the program, from 0.
    pub clause: usize,
    pub reason: String,
}

fn first_violation(
    clauses: &[Clause],
    check: impl Fn(&Clause) -> Result<Option<String>, ModeError>,
) -> Result<Option<Violation>, ModeError> {
    for (i, c) in clauses.iter().enumerate() {
        if let Some(reason) = check(c)? {
            return Ok(Some(Violation { clause: i, reason }));
        }
    }
    Ok(None)
}

pub fn tidy_program_violation(clauses: &[Clause], m: &Moding) -> Result<Option<Violation>, ModeError> {
    first_violation(clauses, |c| tidy_clause_violation(c, m))
}

pub fn is_tidy_program(clauses: &[Clause], m: &Moding) -> Result<bool, ModeError> {
    Ok(tidy_program_violation(clauses, m)?.is_none())
}

/// Tidy, and every dependency edge goes from left to right.
pub fn nicely_moded_query_violation(query: &[Atom], m: &Moding) -> Result<Option<String>, ModeError> {
    if let Some(r) = tidy_query_violation(query, m)? {
        return Ok(Some(r));
    }
    if let Some(&(i, j)) = dep_graph(query, m)?.edges.iter().find(|(i, j)| i >= j) {
        return Ok(Some(format!("atom {} feeds atom {} to its left", i + 1, j + 1)));
    }
    Ok(None)
}

pub fn is_nicely_moded_query(query: &[Atom], m: &Moding) -> Result<bool, ModeError> {
    Ok(nicely_moded_query_violation(query, m)?.is_none())
}

/// Tidy clause (so its head is input linear) whose body is nicely moded.
pub fn nicely_moded_clause_violation(c: &Clause, m: &Moding) -> Result<Option<String>, ModeError> {
    if let Some(r) = tidy_clause_violation(c, m)? {
        return Ok(Some(r));
    }
    Ok(nicely_moded_query_violation(&c.body, m)?.map(|r| format!("body: {r}")))
}

pub fn is_nicely_moded_clause(c: &Clause, m: &Moding) -> Result<bool, ModeError> {
    Ok(nicely_moded_clause_violation(c, m)?.is_none())
}

pub fn nicely_moded_program_violation(clauses: &[Clause], m: &Moding) -> Result<Option<Violation>, ModeError> {
    first_violation(clauses, |c| nicely_moded_clause_violation(c, m))
}

pub fn is_nicely_moded_program(clauses: &[Clause], m: &Moding) -> Result<bool, ModeError> {
    Ok(nicely_moded_program_violation(clauses, m)?.is_none())
}

/// Defining-occurrence check. Inputs of each body atom must be defined by
/// a head input or an output of an earlier body atom; head outputs must be
/// defined by a head input or some body output. Neutral positions neither
/// define nor need definitions.
pub fn well_3_moded_clause_violation(c: &Clause, m: &Moding) -> Result<Option<String>, ModeError> {
    let head = project(&c.head, m)?;
    let mut defined = vars_of(&head.input);
    for (i, b) in c.body.iter().enumerate() {
        let p = project(b, m)?;
        let undefined: BTreeSet<Var> = vars_of(&p.input).difference(&defined).cloned().collect();
        if !undefined.is_empty() {
            return Ok(Some(format!(
                "input variable {} of body atom {} has no earlier definition",
                vars_list(&undefined),
                i + 1
            )));
        }
        defined.extend(vars_of(&p.output));
    }
    let undefined: BTreeSet<Var> = vars_of(&head.output).difference(&defined).cloned().collect();
    if !undefined.is_empty() {
        return Ok(Some(format!(
            "head output variable {} is never defined",
            vars_list(&undefined)
        )));
    }
    Ok(None)
}

pub fn is_well_3_moded_clause(c: &Clause, m: &Moding) -> Result<bool, ModeError> {
    Ok(well_3_moded_clause_violation(c, m)?.is_none())
}

/// A query `Q` is checked as the clause `p <- Q` with a 0-ary head.
pub fn well_3_moded_query_violation(query: &[Atom], m: &Moding) -> Result<Option<String>, ModeError> {
    let c = Clause {
        head: Atom::new("$query", vec![]),
        body: query.to_vec(),
    };
    let m = m.clone().with("$query", &[]);
    well_3_moded_clause_violation(&c, &m)
}

pub fn is_well_3_moded_query(query: &[Atom], m: &Moding) -> Result<bool, ModeError> {
    Ok(well_3_moded_query_violation(query, m)?.is_none())
}

pub fn well_3_moded_program_violation(clauses: &[Clause], m: &Moding) -> Result<Option<Violation>, ModeError> {
    first_violation(clauses, |c| well_3_moded_clause_violation(c, m))
}

pub fn is_well_3_moded_program(clauses: &[Clause], m: &Moding) -> Result<bool, ModeError> {
    Ok(well_3_moded_program_violation(clauses, m)?.is_none())
}

/// Well-moded: the well-3-moded check under a 2-valued moding.
pub fn well_moded_program_violation(clauses: &[Clause], m: &Moding) -> Result<Option<Violation>, ModeError> {
    first_violation(clauses, |c| {
        two_valued(&c.head, m)?;
        require_two_valued(&c.body.iter().collect::<Vec<_>>(), m)?;
        well_3_moded_clause_violation(c, m)
    })
}

pub fn is_well_moded_program(clauses: &[Clause], m: &Moding) -> Result<bool, ModeError> {
    Ok(well_moded_program_violation(clauses, m)?.is_none())
}

pub fn is_well_moded_query(query: &[Atom], m: &Moding) -> Result<bool, ModeError> {
    require_two_valued(&query.iter().collect::<Vec<_>>(), m)?;
    is_well_3_moded_query(query, m)
}

/// Every clause head is weakly linear.
pub fn weakly_linear_heads_violation(clauses: &[Clause], m: &Moding) -> Result<Option<Violation>, ModeError> {
    first_violation(clauses, |c| {
        Ok((!weakly_linear(&c.head, m)?).then(|| "head is not weakly linear".to_string()))
    })
}

pub fn has_weakly_linear_heads(clauses: &[Clause], m: &Moding) -> Result<bool, ModeError> {
    Ok(weakly_linear_heads_violation(clauses, m)?.is_none())
}

/// Prefix of the reserved constants introduced by [`grounding_transform`];
/// the reader cannot produce them.
pub const GROUND_PREFIX: &str = "$g";

/// Replace every variable occurring in an input position of the head by a
/// fresh reserved constant, consistently throughout the clause.
pub fn grounding_transform(c: &Clause, m: &Moding) -> Clause {
    let Some(modes) = m.get(&c.head.key()) else {
        return c.clone();
    };
    let mut names: BTreeMap<Var, Term> = BTreeMap::new();
    for (t, mode) in c.head.args.iter().zip(modes.iter()) {
        if *mode == Mode::In {
            t.for_each_var(&mut |v| {
                let n = names.len();
                names
                    .entry(v.clone())
                    .or_insert_with(|| Term::constant(&format!("{GROUND_PREFIX}{n}")));
            });
        }
    }
    c.map_vars(&mut |v| names.get(v).cloned().unwrap_or_else(|| Term::Var(v.clone())))
}

/// Tidy under `m2` (overlaid on `m`) after grounding each clause's head
/// inputs under `m`.
pub fn weakly_tidy_violation(clauses: &[Clause], m: &Moding, m2: &Moding) -> Result<Option<Violation>, ModeError> {
    let after = m.merged(m2);
    first_violation(clauses, |c| tidy_clause_violation(&grounding_transform(c, m), &after))
}

pub fn is_weakly_tidy(clauses: &[Clause], m: &Moding, m2: &Moding) -> Result<bool, ModeError> {
    Ok(weakly_tidy_violation(clauses, m, m2)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeProperty {
    Tidy,
    NicelyModed,
    WellModed,
}

impl fmt::Display for ModeProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeProperty::Tidy => "tidy",
            ModeProperty::NicelyModed => "nicely_moded",
            ModeProperty::WellModed => "well_moded",
        })
    }
}

pub fn program_violation(
    property: ModeProperty,
    clauses: &[Clause],
    m: &Moding,
) -> Result<Option<Violation>, ModeError> {
    match property {
        ModeProperty::Tidy => tidy_program_violation(clauses, m),
        ModeProperty::NicelyModed => nicely_moded_program_violation(clauses, m),
        ModeProperty::WellModed => well_moded_program_violation(clauses, m),
    }
}

pub const DEFAULT_SEARCH_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModingSearch {
    pub modings: Vec<Moding>,
    /// Number of candidate modings examined.
    pub searched: usize,
}

/// User predicates of a program in order of first appearance; built-ins
/// keep their fixed all-input moding and are not enumerated.
pub fn user_predicates(clauses: &[Clause]) -> Vec<PredKey> {
    let mut seen = Vec::new();
    for c in clauses {
        for a in std::iter::once(&c.head).chain(&c.body) {
            let k = a.key();
            if !is_builtin(&k) && !seen.contains(&k) {
                seen.push(k);
            }
        }
    }
    seen
}

/// All 2-valued modings of the user predicates under which the program
/// has `property`, up to `limit` results. Candidates are enumerated as
/// binary counters over argument positions, `+` for 0 and `-` for 1.
pub fn search_modings(
    clauses: &[Clause],
    property: ModeProperty,
    limit: usize,
    cap: usize,
) -> Result<ModingSearch, ModeError> {
    let preds = user_predicates(clauses);
    let positions: usize = preds.iter().map(|p| p.arity).sum();
    if positions > cap {
        return Err(ModeError::CapExceeded { positions, cap });
    }
    let mut found = Vec::new();
    let mut searched = 0;
    for bits in 0u64..(1u64 << positions) {
        if found.len() >= limit {
            break;
        }
        searched += 1;
        let mut m = Moding::new();
        let mut bit = 0;
        for p in &preds {
            let modes = (0..p.arity)
                .map(|_| {
                    let out = bits >> bit & 1 == 1;
                    bit += 1;
                    if out {
                        Mode::Out
                    } else {
                        Mode::In
                    }
                })
                .collect();
            m.set(p.clone(), modes);
        }
        if program_violation(property, clauses, &m)?.is_none() {
            found.push(m);
        }
    }
    Ok(ModingSearch {
        modings: found,
        searched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_moding, parse_program, parse_query, parse_terms};
    use crate::term::VarGen;

    const FLATTEN: &str = "
        flatten(Xs,Ys) :- flatten_dl(Xs,Ys,[]).
        flatten_dl([],Ys,Ys).
        flatten_dl([X|Xs],Ys,Zs) :- flatten_dl(X,Ys,Ys1), flatten_dl(Xs,Ys1,Zs).
        flatten_dl(X,[X|Xs],Xs) :- constant(X), X \\== [].
    ";

    fn atom(text: &str) -> Atom {
        let mut g = VarGen::new();
        Atom::from_term(&parse_terms(&[text], &mut g).unwrap()[0]).unwrap()
    }

    fn query(text: &str) -> Vec<Atom> {
        parse_query(text, &mut VarGen::new()).unwrap()
    }

    #[test]
    fn projections() {
        let m = parse_moding("pq(+,-,-,-)").unwrap();
        let p = project(&atom("pq(I,Cs,Us,Ds)"), &m).unwrap();
        assert_eq!(p.input.len(), 1);
        assert_eq!(p.output.len(), 3);
        assert!(p.neutral.is_empty());
        let m = parse_moding("d(+,?,?)").unwrap();
        let p = project(&atom("d(F*G,X,D)"), &m).unwrap();
        assert_eq!((p.input.len(), p.output.len(), p.neutral.len()), (1, 0, 2));
        assert!(matches!(project(&atom("z(a)"), &m), Err(ModeError::Undeclared(_))));
    }

    #[test]
    fn linearity_classes() {
        let m = parse_moding("pq(+,-,-,-)").unwrap();
        let a = atom("pq(I,[I|_],[I|_],[I|_])");
        assert!(input_linear(&a, &m).unwrap());
        assert!(!output_linear(&a, &m).unwrap());
        assert!(!input_output_disjoint(&a, &m).unwrap());
        assert!(weakly_linear(&a, &m).unwrap());
        let all_out = parse_moding("pq(-,-,-,-)").unwrap();
        assert!(!weakly_linear(&a, &all_out).unwrap());
        let p = parse_moding("p(+,-)").unwrap();
        assert!(!input_output_disjoint(&atom("p(X,X)"), &p).unwrap());
        let g = atom("p(a,b)");
        assert!(input_linear(&g, &p).unwrap() && output_linear(&g, &p).unwrap());
        assert!(input_output_disjoint(&g, &p).unwrap());
    }

    #[test]
    fn flatten_graph_and_tidiness() {
        let prog = parse_program(FLATTEN).unwrap();
        let m1 = parse_moding("flatten(+,-), flatten_dl(+,-,+)").unwrap();
        let m2 = parse_moding("flatten(-,+), flatten_dl(-,+,-)").unwrap();
        let body = &prog.clauses[2].body;
        assert_eq!(dep_graph(body, &m1).unwrap().edges, BTreeSet::from([(1, 0)]));
        assert_eq!(dep_graph(body, &m2).unwrap().edges, BTreeSet::from([(0, 1)]));
        assert!(is_tidy_program(&prog.clauses, &m1).unwrap());
        assert!(is_tidy_program(&prog.clauses, &m2).unwrap());
        assert!(is_nicely_moded_program(&prog.clauses, &m2).unwrap());
        assert!(!is_nicely_moded_program(&prog.clauses, &m1).unwrap());
    }

    #[test]
    fn cyclic_query_is_not_tidy() {
        let m = parse_moding("q(+,-)").unwrap();
        let q = query("q(X,Y), q(Y,Z), q(Z,X)");
        assert!(!dep_graph(&q, &m).unwrap().is_acyclic());
        assert!(!is_tidy_query(&q, &m).unwrap());
        let m = parse_moding("p(+,-)").unwrap();
        assert!(!is_tidy_query(&query("p(X,X)"), &m).unwrap());
    }

    #[test]
    fn tidy_needs_two_valued_moding() {
        let m = parse_moding("p(+,?)").unwrap();
        assert!(matches!(
            is_tidy_query(&query("p(X,Y)"), &m),
            Err(ModeError::NotTwoValued(_))
        ));
    }

    #[test]
    fn nicely_moded_rejects_right_to_left_edge() {
        let m = parse_moding("p(+,-)").unwrap();
        let q = query("p(Y,Z), p(a,Y)");
        assert!(is_tidy_query(&q, &m).unwrap());
        assert!(!is_nicely_moded_query(&q, &m).unwrap());
    }

    #[test]
    fn derivative_moding() {
        let prog = parse_program(
            "d(X,X,s(0)).
             d(X^s(N),X,s(N)*X^N).
             d(F*G,X,F*DG + DF*G) :- d(F,X,DF), d(G,X,DG).",
        )
        .unwrap();
        let m = parse_moding("d(-,+,-)").unwrap();
        assert!(is_tidy_program(&prog.clauses, &m).unwrap());
        assert!(is_nicely_moded_program(&prog.clauses, &m).unwrap());
        let m3 = parse_moding("d(+,?,?)").unwrap();
        assert!(is_well_3_moded_program(&prog.clauses, &m3).unwrap());
        assert!(has_weakly_linear_heads(&prog.clauses, &m3).unwrap());
        assert!(is_well_3_moded_query(&query("d(x*x,x,D)"), &m3).unwrap());
    }

    #[test]
    fn well_3_moded_examples() {
        let prog = parse_program(
            "pqs(0,_,_,_).
             pqs(s(I),Cs,Us,[_|Ds]) :- pqs(I,Cs,[_|Us],Ds), pq(s(I),Cs,Us,Ds).
             pq(I,[I|_],[I|_],[I|_]).
             pq(I,[_|Cs],[_|Us],[_|Ds]) :- pq(I,Cs,Us,Ds).",
        )
        .unwrap();
        let m = parse_moding("pqs(+,?,?,?), pq(+,?,?,?)").unwrap();
        assert!(is_well_3_moded_program(&prog.clauses, &m).unwrap());
        assert!(is_well_3_moded_query(&query("pqs(s(0),A,B,C)"), &m).unwrap());
        assert!(!is_well_3_moded_query(&query("pqs(N,A,B,C)"), &m).unwrap());
        let m = parse_moding("p(+,-)").unwrap();
        let prog = parse_program("p(X,Y) :- p(Z,Y).").unwrap();
        let v = well_moded_program_violation(&prog.clauses, &m).unwrap().unwrap();
        assert_eq!(v.clause, 0);
        assert!(v.reason.contains('Z'));
        let prog = parse_program("p(X,Y).").unwrap();
        assert!(!is_well_moded_program(&prog.clauses, &m).unwrap());
    }

    #[test]
    fn grounding_and_weak_tidiness() {
        let prog = parse_program(
            "p(X) :- q(X,Y), q(Y,Z), q(Z,X).
             q(W,f(W)).",
        )
        .unwrap();
        let m = parse_moding("p(+), q(?,?)").unwrap();
        let g = grounding_transform(&prog.clauses[0], &m);
        assert_eq!(
            crate::render::render_clause(&g),
            "p('$g0') :- q('$g0',Y), q(Y,Z), q(Z,'$g0')."
        );
        let fact = parse_program("r(a).").unwrap();
        let mr = parse_moding("r(+)").unwrap();
        assert_eq!(grounding_transform(&fact.clauses[0], &mr), fact.clauses[0]);
        for q in ["q(+,-)", "q(-,+)"] {
            let m2 = parse_moding(q).unwrap();
            assert!(is_weakly_tidy(&prog.clauses, &m, &m2).unwrap(), "{q}");
        }
        let s = search_modings(&prog.clauses, ModeProperty::Tidy, usize::MAX, 16).unwrap();
        assert!(s.modings.is_empty());
        assert_eq!(s.searched, 8);
    }

    #[test]
    fn head_variable_grounded_in_body_output() {
        let prog = parse_program("p(X,Y) :- q(Y,X).").unwrap();
        let m = parse_moding("p(+,-), q(+,-)").unwrap();
        let g = grounding_transform(&prog.clauses[0], &m);
        assert_eq!(crate::render::render_clause(&g), "p('$g0',Y) :- q(Y,'$g0').");
    }

    #[test]
    fn search_flatten() {
        let prog = parse_program(FLATTEN).unwrap();
        let s = search_modings(&prog.clauses, ModeProperty::Tidy, usize::MAX, 16).unwrap();
        let m1 = parse_moding("flatten(+,-), flatten_dl(+,-,+)").unwrap();
        let m2 = parse_moding("flatten(-,+), flatten_dl(-,+,-)").unwrap();
        assert!(s.modings.contains(&m1));
        assert!(s.modings.contains(&m2));
        assert_eq!(s.searched, 32);
    }

    #[test]
    fn search_cap() {
        let prog = parse_program("p(A,B,C,D,E).").unwrap();
        assert_eq!(
            search_modings(&prog.clauses, ModeProperty::Tidy, 10, 4),
            Err(ModeError::CapExceeded { positions: 5, cap: 4 })
        );
    }
}
