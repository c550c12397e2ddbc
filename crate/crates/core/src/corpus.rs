//! Example programs and named scenarios bundled into the binary, so that
//! `occur modes flatten.pl` works from any directory.

/// Bundled program files, by file name.
pub const PROGRAMS: &[(&str, &str)] = &[
    ("cycle.pl", include_str!("../corpus/cycle.pl")),
    ("derivative.pl", include_str!("../corpus/derivative.pl")),
    ("eq.pl", include_str!("../corpus/eq.pl")),
    ("flatten.pl", include_str!("../corpus/flatten.pl")),
    ("normalize.pl", include_str!("../corpus/normalize.pl")),
    ("nqueens.pl", include_str!("../corpus/nqueens.pl")),
    ("quicksort_dl.pl", include_str!("../corpus/quicksort_dl.pl")),
    ("use2.pl", include_str!("../corpus/use2.pl")),
];

/// Named scenarios: command lines reproducing the worked examples, one
/// argument per line.
pub const SCENARIOS: &[(&str, &str)] = &[
    ("cycle-no-tidy", include_str!("../scenarios/cycle-no-tidy.args")),
    ("cycle-weakly-tidy", include_str!("../scenarios/cycle-weakly-tidy.args")),
    ("cycle-weakly-tidy-dual", include_str!("../scenarios/cycle-weakly-tidy-dual.args")),
    ("asto-clause3", include_str!("../scenarios/asto-clause3.args")),
    ("clash-before-occur", include_str!("../scenarios/clash-before-occur.args")),
    ("cyclic-wnsto", include_str!("../scenarios/cyclic-wnsto.args")),
    ("derivative-answer", include_str!("../scenarios/derivative-answer.args")),
    ("derivative-nicely", include_str!("../scenarios/derivative-nicely.args")),
    ("derivative-well3", include_str!("../scenarios/derivative-well3.args")),
    ("eq-cyclic", include_str!("../scenarios/eq-cyclic.args")),
    ("flatten-nicely-m2", include_str!("../scenarios/flatten-nicely-m2.args")),
    ("flatten-search", include_str!("../scenarios/flatten-search.args")),
    ("flatten-strict", include_str!("../scenarios/flatten-strict.args")),
    ("flatten-tidy", include_str!("../scenarios/flatten-tidy.args")),
    ("flatten-unsound", include_str!("../scenarios/flatten-unsound.args")),
    ("linear-nsto", include_str!("../scenarios/linear-nsto.args")),
    ("motivating-pair", include_str!("../scenarios/motivating-pair.args")),
    ("nqueens-asto-strict", include_str!("../scenarios/nqueens-asto-strict.args")),
    ("nqueens-no-nicely", include_str!("../scenarios/nqueens-no-nicely.args")),
    ("nqueens-no-tidy", include_str!("../scenarios/nqueens-no-tidy.args")),
    ("nqueens-weak-all-rules", include_str!("../scenarios/nqueens-weak-all-rules.args")),
    ("nqueens-weakly-linear", include_str!("../scenarios/nqueens-weakly-linear.args")),
    ("nqueens-well3", include_str!("../scenarios/nqueens-well3.args")),
    ("occur-fail-trace", include_str!("../scenarios/occur-fail-trace.args")),
    ("swi-display", include_str!("../scenarios/swi-display.args")),
    ("trivial-mgu", include_str!("../scenarios/trivial-mgu.args")),
    ("use2-search", include_str!("../scenarios/use2-search.args")),
    ("use2-unsound", include_str!("../scenarios/use2-unsound.args")),
    ("use2-well3", include_str!("../scenarios/use2-well3.args")),
];

pub fn program(name: &str) -> Option<&'static str> {
    PROGRAMS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// The argument list of a scenario.
pub fn scenario(name: &str) -> Option<Vec<String>> {
    SCENARIOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.lines().filter(|l| !l.is_empty()).map(String::from).collect())
}
