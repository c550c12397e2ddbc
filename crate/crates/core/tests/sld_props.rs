use proptest::prelude::*;

use occur::corpus;
use occur::modes::{is_tidy_query, is_well_3_moded_query};
use occur::parser::{parse_program, Program};
use occur::render::render_term;
use occur::sld::{
    build_tree, execute_unsound, ground_inputs, verify_occur_check_free, NodeStatus, SelectionRule, SldTree,
    TreeOptions, Verification, VerifyMode,
};
use occur::term::{Atom, Term};

fn program(name: &str) -> Program {
    parse_program(corpus::program(name).unwrap()).unwrap()
}

fn tree(p: &mut Program, query: &str, rule: SelectionRule) -> SldTree {
    let q = p.query(query).unwrap();
    build_tree(p, &q, &TreeOptions::new(rule).bounds(60, 5_000))
}

/// Well-3-moded programs with well-3-moded queries.
const WELL_3_MODED: [(&str, &str); 4] = [
    ("derivative.pl", "d(x*x,x,D)"),
    ("derivative.pl", "d(x^s(s(0))*x,x,D)"),
    ("nqueens.pl", "pqs(s(s(0)),[A,B],_,_)"),
    ("use2.pl", "p([a,b,c],X,Y)"),
];

#[test]
fn leftmost_selects_atoms_with_ground_inputs() {
    for (name, query) in WELL_3_MODED {
        let mut p = program(name);
        assert!(is_well_3_moded_query(&p.query(query).unwrap(), &p.modes).unwrap());
        let t = tree(&mut p, query, SelectionRule::Leftmost);
        for n in t.nodes.iter().filter(|n| !n.selected.is_empty()) {
            let atom = &n.query[n.selected[0]];
            assert!(ground_inputs(atom, &p.modes), "{name}: node {} selects {atom:?}", n.id);
            assert!(is_well_3_moded_query(&n.query, &p.modes).unwrap(), "{name}: node {}", n.id);
        }
    }
}

#[test]
fn mode_compatible_rule_never_flounders() {
    for (name, query) in WELL_3_MODED {
        let mut p = program(name);
        let rule = SelectionRule::ModeCompatible(p.modes.clone());
        let t = tree(&mut p, query, rule);
        assert_eq!(t.count(NodeStatus::Floundered), 0, "{name} {query}");
    }
}

fn first_argument_ground(q: &[Atom]) -> bool {
    q.iter().all(|a| a.args.first().is_some_and(Term::is_ground))
}

#[test]
fn one_ground_queries_stay_one_ground() {
    for (name, query) in [("nqueens.pl", "pqs(s(s(0)),[A,B],_,_)"), ("use2.pl", "p([a,b],X,Y)")] {
        let mut p = program(name);
        let t = tree(&mut p, query, SelectionRule::AllRules);
        for n in &t.nodes {
            assert!(first_argument_ground(&n.query), "{name}: node {}", n.id);
        }
    }
}

#[test]
fn verified_trees_agree_with_the_unsound_engine() {
    let cases = [
        ("nqueens.pl", "pqs(s(s(0)),[A,B],_,_)", SelectionRule::AllRules),
        ("use2.pl", "p([a,b],X,Y)", SelectionRule::AllRules),
        ("derivative.pl", "d(x*x,x,D)", SelectionRule::Leftmost),
        ("flatten.pl", "flatten([[a],b,[]],R)", SelectionRule::Leftmost),
    ];
    for (name, query, rule) in cases {
        let mut p = program(name);
        let q = p.query(query).unwrap();
        let opts = TreeOptions::new(rule).bounds(60, 5_000);
        let sound = build_tree(&p, &q, &opts);
        assert!(matches!(
            verify_occur_check_free(&sound, VerifyMode::Weak),
            Verification::Verified { .. }
        ));
        let unsound = execute_unsound(&p, &q, &opts);
        assert_eq!(sound.answer_instances(), unsound.answer_instances(), "{name}");
        assert_eq!(sound.failure_frontier(), unsound.failure_frontier(), "{name}");
        assert_eq!(unsound.count(NodeStatus::CyclicBinding), 0);
    }
}

fn nested_list() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant("a")), Just(Term::constant("b")), Just(Term::nil())];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop::collection::vec(inner, 0..3).prop_map(|items| Term::list(items, Term::nil()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tidy_queries_stay_tidy(t in nested_list()) {
        let mut p = program("flatten.pl");
        let query = format!("flatten({},R)", render_term(&t));
        for rule in [SelectionRule::Leftmost, SelectionRule::AllRules] {
            let tr = tree(&mut p, &query, rule);
            for n in &tr.nodes {
                prop_assert!(is_tidy_query(&n.query, &p.modes).unwrap(), "node {}", n.id);
            }
            let verified = matches!(
                verify_occur_check_free(&tr, VerifyMode::Strict),
                Verification::Verified { .. }
            );
            prop_assert!(verified);
        }
    }
}
