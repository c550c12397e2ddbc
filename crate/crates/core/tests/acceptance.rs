//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails or overruns its time limit.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_set, random_term, related_pair};
use occur::corpus;
use occur::modes::{
    has_weakly_linear_heads, is_nicely_moded_program, is_tidy_clause, is_tidy_program, is_tidy_query,
    is_weakly_tidy, is_well_3_moded_clause, is_well_3_moded_program, is_well_3_moded_query, search_modings,
    ModeProperty, DEFAULT_SEARCH_CAP,
};
use occur::moding::{Mode, Moding};
use occur::nsto::{decide_nsto, decide_wnsto, wnsto_by_split, Certificate, Value, DEFAULT_BUDGET};
use occur::parser::{parse_moding, parse_program, parse_terms, Program};
use occur::render::render_term;
use occur::sld::{
    build_tree, execute_unsound, resolve, verify_occur_check_free, NodeStatus, SelectionRule, TreeOptions,
    Verification, VerifyMode,
};
use occur::term::{Term, VarGen};
use occur::unify::{
    choose_k, composition_of_run, enumerate_runs, extract_mgu, finish_semi_solved, measure, mgu, run,
    ActionKind, Algorithm, EquationSet, FailureKind, Finished, RunEnd, Strategy,
};

type Check = fn() -> Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    check: Check,
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn program(name: &str) -> Program {
    parse_program(corpus::program(name).expect("bundled")).expect("bundled programs parse")
}

fn equation(lhs: &str, rhs: &str) -> EquationSet {
    let t = parse_terms(&[lhs, rhs], &mut VarGen::new()).unwrap();
    EquationSet::from_pairs([(t[0].clone(), t[1].clone())])
}

fn motivating_pair() -> Result<String, String> {
    let set = equation("p(a,f(X),X)", "p(b,Y,Y)");
    let n = decide_nsto(&set, DEFAULT_BUDGET);
    ensure(n.value == Value::False, "NSTO should be false")?;
    let w = n.witness.ok_or("NSTO needs a witness")?;
    ensure(
        w.failure().is_some_and(|f| f.kind == FailureKind::Occur),
        "NSTO witness must end in the occur-check failure",
    )?;
    let wn = decide_wnsto(&set, DEFAULT_BUDGET);
    ensure(wn.value == Value::True, "WNSTO should be true")?;
    let ww = wn.witness.ok_or("WNSTO needs a witness")?;
    ensure(!ww.performs(ActionKind::OccurFail), "WNSTO witness must avoid the occur-check failure")?;
    let (mut runs, mut clashes) = (0, 0);
    let e = enumerate_runs(&set, Algorithm::MmaMinus, 1_000_000, &mut |_, end| {
        runs += 1;
        if matches!(end, RunEnd::Failure(f) if f.kind == FailureKind::Clash) {
            clashes += 1;
        }
    });
    ensure(!e.truncated, "enumeration truncated")?;
    ensure(runs == clashes, format!("{clashes} of {runs} runs clash"))?;
    Ok(format!("{runs} runs without occur-check, all clash"))
}

fn swi_display() -> Result<String, String> {
    let set = equation("g(X,X)", "g(Y,f(Y))");
    let trace = run(&set, &Strategy::FirstApplicable, Algorithm::MmaMinus).unwrap();
    let f = trace.final_set().ok_or("run failed")?;
    let expected = {
        let t = parse_terms(&["X", "Y", "Y", "f(Y)"], &mut VarGen::new()).unwrap();
        EquationSet::from_pairs([(t[0].clone(), t[1].clone()), (t[2].clone(), t[3].clone())])
    };
    ensure(f.is_variant_of(&expected), format!("ended in {}", f.render()))?;
    ensure(decide_wnsto(&set, DEFAULT_BUDGET).value == Value::False, "WNSTO should be false")?;
    ensure(mgu(&set).is_none(), "the sound algorithm should fail")?;
    Ok(format!("semi-solved {}", f.render()))
}

fn measure_decreases() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut steps, mut violations) = (0usize, 0usize);
    for i in 0..1_000u64 {
        let set = random_set(&mut rng, 12, 6);
        let k = choose_k(&set);
        let trace = run(&set, &Strategy::SeededRandom(i), Algorithm::MmaMinus).map_err(|e| e.to_string())?;
        for (n, step) in trace.steps.iter().enumerate() {
            if let Some(after) = &step.after {
                steps += 1;
                if measure(after, k).unwrap() >= measure(trace.before(n), k).unwrap() {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, format!("{violations} steps did not decrease the measure"))?;
    Ok(format!("1000 sets, {steps} steps, all decreasing, all runs halted"))
}

fn soundness_without_occur_check() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut sets, mut runs, mut wrong) = (0, 0usize, 0usize);
    while sets < 500 {
        let set = random_set(&mut rng, 8, 4);
        if decide_wnsto(&set, DEFAULT_BUDGET).value != Value::True {
            continue;
        }
        sets += 1;
        let oracle = mgu(&set);
        enumerate_runs(&set, Algorithm::MmaMinus, 5_000, &mut |_, end| {
            runs += 1;
            let ok = match (end, &oracle) {
                (RunEnd::Failure(_), None) => true,
                (RunEnd::Success(f), Some(_)) => {
                    matches!(finish_semi_solved(f).unwrap(), Finished::Mgu(theta) if set.solved_by(&theta))
                }
                _ => false,
            };
            if !ok {
                wrong += 1;
            }
        });
    }
    ensure(wrong == 0, format!("{wrong} incorrect runs"))?;
    Ok(format!("{sets} WNSTO sets, {runs} runs, all correct"))
}

fn run_composition() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut successes = 0;
    let mut seed = 0u64;
    while successes < 500 {
        seed += 1;
        let set = random_set(&mut rng, 8, 4);
        let trace = run(&set, &Strategy::SeededRandom(seed), Algorithm::Mma).unwrap();
        let Some(f) = trace.final_set() else { continue };
        successes += 1;
        let composed = composition_of_run(&trace).map_err(|e| e.to_string())?;
        let solved = extract_mgu(f).unwrap();
        ensure(composed == solved, format!("composition differs on {}", set.render()))?;
    }
    let (mut splits, mut certified) = (0, 0);
    while splits < 200 {
        let e1 = random_set(&mut rng, 6, 3);
        let e2 = random_set(&mut rng, 6, 3);
        splits += 1;
        let v = wnsto_by_split(&e1, &e2, DEFAULT_BUDGET);
        if v.certificate == Some(Certificate::Split) {
            certified += 1;
        }
        let exact = decide_wnsto(&e1.union(&e2), DEFAULT_BUDGET).value;
        ensure(v.value == exact, format!("split says {} but exact says {exact}", v.value))?;
    }
    ensure(certified > 0, "the split certificate never applied")?;
    Ok(format!("500 compositions equal, 200 splits agree ({certified} certified)"))
}

fn tidy_results() -> Result<String, String> {
    let mut p = program("flatten.pl");
    let m1 = p.modes.clone();
    let m2 = p.secondary.clone().ok_or("flatten needs its second moding")?;
    ensure(is_tidy_program(&p.clauses, &m1).unwrap(), "flatten not tidy under M1")?;
    ensure(is_tidy_program(&p.clauses, &m2).unwrap(), "flatten not tidy under M2")?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let t = random_term(&mut rng, 10, 4);
        let q = p.query(&format!("flatten({},R)", render_term(&t))).unwrap();
        ensure(is_tidy_query(&q, &m1).unwrap(), format!("query on {} not tidy", render_term(&t)))?;
    }
    let q = p.query("flatten([[a],b,[]],R)").unwrap();
    for rule in [SelectionRule::Leftmost, SelectionRule::AllRules] {
        let name = rule.name();
        let t = build_tree(&p, &q, &TreeOptions::new(rule));
        let v = verify_occur_check_free(&t, VerifyMode::Strict);
        ensure(matches!(v, Verification::Verified { .. }), format!("{name}: not verified"))?;
    }
    Ok("M1, M2 tidy; 100 random queries tidy; strict verification under leftmost and all rules".into())
}

fn nqueens_negative() -> Result<String, String> {
    let p = program("nqueens.pl");
    for property in [ModeProperty::Tidy, ModeProperty::NicelyModed] {
        let s = search_modings(&p.clauses, property, usize::MAX, DEFAULT_SEARCH_CAP).unwrap();
        ensure(s.searched == 256, format!("searched {}", s.searched))?;
        if let Some(m) = s.modings.first() {
            return Err(format!("{property:?}: found {m}"));
        }
    }
    Ok("no tidy or nicely moded moding among 256".into())
}

fn nqueens_weakly_free() -> Result<String, String> {
    let mut p = program("nqueens.pl");
    let q = p.query("pqs(s(s(0)),[A,B],_,_)").unwrap();
    let opts = TreeOptions::new(SelectionRule::AllRules).bounds(60, 20_000).classify(&[occur::nsto::Property::Wnsto]);
    let t = build_tree(&p, &q, &opts);
    let count = match verify_occur_check_free(&t, VerifyMode::Weak) {
        Verification::Verified { unifications, .. } => unifications,
        other => return Err(format!("weak verification: {other:?}")),
    };
    let q = p.query("pq(a,L,[L|_],_)").unwrap();
    let opts = TreeOptions::new(SelectionRule::Leftmost)
        .classify(&[occur::nsto::Property::Nsto])
        .stop_on(Some(occur::nsto::Property::Nsto));
    let t = build_tree(&p, &q, &opts);
    match verify_occur_check_free(&t, VerifyMode::Strict) {
        Verification::Refuted(u) => ensure(u.clause == 2, format!("refuted at clause {}", u.clause + 1))?,
        other => return Err(format!("strict check not refuted: {other:?}")),
    }
    Ok(format!("{count} unifications WNSTO; strict refuted at clause 3"))
}

fn use2() -> Result<String, String> {
    let mut p = program("use2.pl");
    let s = search_modings(&p.clauses, ModeProperty::Tidy, usize::MAX, DEFAULT_SEARCH_CAP).unwrap();
    let key = p.predicates()[0].clone();
    let found: BTreeSet<Vec<Mode>> = s.modings.iter().map(|m| m.get(&key).unwrap().to_vec()).collect();
    let mut expected = BTreeSet::new();
    for bits in 0..8u32 {
        let modes: Vec<Mode> = (0..3).map(|i| if bits >> i & 1 == 1 { Mode::In } else { Mode::Out }).collect();
        if modes.iter().filter(|m| **m == Mode::In).count() <= 1 {
            expected.insert(modes);
        }
    }
    ensure(found == expected, format!("found {} modings", found.len()))?;
    let q = p.query("p([a,b],X,Y)").unwrap();
    let opts = TreeOptions::new(SelectionRule::AllRules);
    let sound = build_tree(&p, &q, &opts);
    let v = verify_occur_check_free(&sound, VerifyMode::Weak);
    ensure(matches!(v, Verification::Verified { .. }), "weak verification failed")?;
    let unsound = execute_unsound(&p, &q, &opts);
    ensure(sound.answer_instances() == unsound.answer_instances(), "engines disagree")?;
    Ok(format!("{} tidy modings, weakly occur-check free, engines agree", found.len()))
}

fn derivative() -> Result<String, String> {
    let mut p = program("derivative.pl");
    let m2 = parse_moding("d(-,+,-)").unwrap();
    let m3 = parse_moding("d(+,?,?)").unwrap();
    ensure(is_tidy_program(&p.clauses, &m2).unwrap(), "not tidy")?;
    ensure(is_nicely_moded_program(&p.clauses, &m2).unwrap(), "not nicely moded")?;
    ensure(is_well_3_moded_program(&p.clauses, &m3).unwrap(), "program not well-3-moded")?;
    let q = p.query("d(x*x,x,D)").unwrap();
    ensure(is_well_3_moded_query(&q, &m3).unwrap(), "query not well-3-moded")?;
    ensure(has_weakly_linear_heads(&p.clauses, &m3).unwrap(), "heads not weakly linear")?;
    let t = build_tree(&p, &q, &TreeOptions::new(SelectionRule::Leftmost));
    let answers = t.answers();
    ensure(answers.len() == 1, format!("{} answers", answers.len()))?;
    let d = q[0].args[2].as_var().unwrap().clone();
    let value = render_term(&answers[0].apply(&Term::var(d)));
    ensure(value == "x*s(0) + s(0)*x", format!("D = {value}"))?;
    let t = build_tree(&p, &q, &TreeOptions::new(SelectionRule::ModeCompatible(m3)));
    ensure(t.count(NodeStatus::Floundered) == 0, "floundered")?;
    Ok(format!("D = {value}"))
}

fn weakly_tidy_cycle() -> Result<String, String> {
    let p = program("cycle.pl");
    let m = parse_moding("p(+)").unwrap();
    for second in ["q(+,-)", "q(-,+)"] {
        let m2 = parse_moding(second).unwrap();
        ensure(is_weakly_tidy(&p.clauses, &m, &m2).unwrap(), format!("not weakly tidy with {second}"))?;
    }
    let s = search_modings(&p.clauses, ModeProperty::Tidy, usize::MAX, DEFAULT_SEARCH_CAP).unwrap();
    ensure(s.modings.is_empty(), format!("tidy under {}", s.modings.first().map(Moding::to_string).unwrap_or_default()))?;
    Ok(format!("weakly tidy both ways; not tidy under any of {} modings", s.searched))
}

fn closure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut resolvents = [0usize; 2];
    let two = [Mode::In, Mode::Out];
    let three = [Mode::In, Mode::Out, Mode::Neutral];
    for round in 0..600 {
        let tidy = round % 2 == 0;
        let pair = if tidy {
            related_pair(&mut rng, &two, |q, m| is_tidy_query(q, m).unwrap(), |c, m| is_tidy_clause(c, m).unwrap())
        } else {
            related_pair(
                &mut rng,
                &three,
                |q, m| is_well_3_moded_query(q, m).unwrap(),
                |c, m| is_well_3_moded_clause(c, m).unwrap(),
            )
        };
        let (q, c, m) = pair.ok_or("could not generate a pair")?;
        for i in 0..q.len() {
            if q[i].key() != c.head.key() {
                continue;
            }
            let Ok((r, _)) = resolve(&q, i, &c) else { continue };
            resolvents[usize::from(!tidy)] += 1;
            let ok = if tidy { is_tidy_query(&r, &m) } else { is_well_3_moded_query(&r, &m) };
            ensure(ok.unwrap(), format!("resolvent lost the property (round {round})"))?;
        }
    }
    Ok(format!(
        "300 + 300 pairs, {} tidy and {} well-3-moded resolvents",
        resolvents[0], resolvents[1]
    ))
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "motivating pair", limit: secs(1), check: motivating_pair },
        Criterion { id: 2, title: "semi-solved display", limit: secs(1), check: swi_display },
        Criterion { id: 3, title: "termination measure", limit: secs(60), check: measure_decreases },
        Criterion { id: 4, title: "soundness without occur-check", limit: secs(60), check: soundness_without_occur_check },
        Criterion { id: 5, title: "run composition and splitting", limit: secs(60), check: run_composition },
        Criterion { id: 6, title: "tidy flatten", limit: secs(5), check: tidy_results },
        Criterion { id: 7, title: "nqueens is not tidy", limit: secs(1), check: nqueens_negative },
        Criterion { id: 8, title: "nqueens weakly occur-check free", limit: secs(30), check: nqueens_weakly_free },
        Criterion { id: 9, title: "use2", limit: secs(5), check: use2 },
        Criterion { id: 10, title: "derivative", limit: secs(5), check: derivative },
        Criterion { id: 11, title: "weakly tidy cycle program", limit: secs(1), check: weakly_tidy_cycle },
        Criterion { id: 12, title: "closure of tidy and well-3-moded", limit: secs(60), check: closure },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("over time limit; {d}")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "{verdict} criterion {:>2} {} [{:.2}s of {}s]: {detail}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
