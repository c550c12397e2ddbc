//! The four analysis commands (`unify`, `nsto`, `modes`, `derive`) as
//! library calls returning a [`Report`]. The command-line tool and the C
//! API are thin layers over these.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::moding::Moding;
use crate::modes::{self, ModeError, ModeProperty, Violation, DEFAULT_SEARCH_CAP};
use crate::nsto::{self, classify_atoms, nsto_by_linearity, Certificate, Property, Value, Verdict};
use crate::parser::{parse_equations, parse_moding, parse_program, parse_terms, Program};
use crate::render::{render_query, render_substitution};
use crate::sld::{
    build_tree, execute_unsound, unconditional_certificate, verify_occur_check_free, Bounds, Engine,
    NodeStatus, SelectionRule, SldTree, TreeOptions, Verification, VerifyMode,
};
use crate::term::{Atom, Term, VarGen};
use crate::unify::{
    extract_mgu, finish_semi_solved, run, Algorithm, Choice, EquationSet, Finished, Outcome, Strategy,
};

pub const TOOL: &str = "occur";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SCHEMA: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A budget or bound prevented a verdict.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    /// A run or unification backing the verdict, rendered as text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Result of one command, both as human text and as a JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub scenario: Option<String>,
    pub command: String,
    /// SHA-256 of the command name and its inputs.
    pub input_digest: String,
    pub checks: Vec<Check>,
    pub output: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub exit_status: i32,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    fn new(command: &str, inputs: &BTreeMap<&str, String>) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        hasher.update(serde_json::to_vec(inputs).expect("string maps serialize"));
        Report {
            tool: TOOL,
            version: VERSION,
            schema: SCHEMA,
            scenario: None,
            command: command.to_string(),
            input_digest: hex::encode(hasher.finalize()),
            checks: Vec::new(),
            output: Json::Null,
            error: None,
            exit_status: EXIT_PASS,
            text: String::new(),
        }
    }

    fn fail_usage(mut self, message: impl Into<String>) -> Self {
        let message = message.into();
        self.text = format!("error: {message}\n");
        self.error = Some(message);
        self.exit_status = EXIT_USAGE;
        self
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn check(&mut self, id: &str, status: Status, verdict: impl Into<String>) -> &mut Check {
        self.checks.push(Check {
            id: id.to_string(),
            status,
            verdict: verdict.into(),
            certificate: None,
            witness: None,
        });
        self.checks.last_mut().expect("just pushed")
    }

    fn finish(mut self, output: Json) -> Self {
        self.output = output;
        self.exit_status = if self.checks.iter().any(|c| c.status == Status::Fail) {
            EXIT_REFUTED
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            EXIT_BUDGET
        } else {
            EXIT_PASS
        };
        self
    }

    pub fn with_scenario(mut self, name: &str) -> Self {
        self.scenario = Some(name.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// A report for arguments that could not be interpreted at all.
pub fn usage_report(message: impl Into<String>) -> Report {
    Report::new("usage", &BTreeMap::new()).fail_usage(message)
}

fn indent(text: &str, by: &str) -> String {
    text.lines().map(|l| format!("{by}{l}\n")).collect()
}

/// Parse `random:SEED`, `first`, or `script:0;1;2,3` (a `;`-separated
/// list of equation indices, `i,j` for a collapse pair).
pub fn parse_strategy(text: &str) -> Result<Strategy, String> {
    if text == "first" {
        return Ok(Strategy::FirstApplicable);
    }
    if let Some(seed) = text.strip_prefix("random:") {
        return seed
            .parse()
            .map(Strategy::SeededRandom)
            .map_err(|_| format!("bad seed in strategy '{text}'"));
    }
    if let Some(script) = text.strip_prefix("script:") {
        let mut choices = Vec::new();
        for part in script.split(';').filter(|p| !p.trim().is_empty()) {
            let nums: Result<Vec<usize>, _> = part.split(',').map(|n| n.trim().parse()).collect();
            match nums.as_deref() {
                Ok([i]) => choices.push(Choice::at(*i)),
                Ok([i, j]) => choices.push(Choice::pair(*i, *j)),
                _ => return Err(format!("bad choice '{part}' in strategy")),
            }
        }
        return Ok(Strategy::Scripted(choices));
    }
    Err(format!("unknown strategy '{text}' (expected first, random:SEED or script:...)"))
}

#[derive(Clone, Debug)]
pub struct UnifyRequest {
    pub lhs: String,
    pub rhs: String,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    pub trace: bool,
}

pub fn cmd_unify(req: &UnifyRequest) -> Report {
    let inputs = BTreeMap::from([
        ("lhs", req.lhs.clone()),
        ("rhs", req.rhs.clone()),
        ("algorithm", req.algorithm.to_string()),
        ("strategy", format!("{:?}", req.strategy)),
        ("trace", req.trace.to_string()),
    ]);
    let mut r = Report::new("unify", &inputs);
    let mut gen = VarGen::new();
    let terms = match parse_terms(&[&req.lhs, &req.rhs], &mut gen) {
        Ok(t) => t,
        Err(e) => return r.fail_usage(e.to_string()),
    };
    let set = EquationSet::from_pairs([(terms[0].clone(), terms[1].clone())]);
    let trace = match run(&set, &req.strategy, req.algorithm) {
        Ok(t) => t,
        Err(e) => return r.fail_usage(e.to_string()),
    };
    if req.trace {
        r.text.push_str(&trace.to_text());
    }
    let mut out = json!({
        "algorithm": req.algorithm,
        "steps": trace.steps.len(),
    });
    match &trace.outcome {
        Outcome::Failure { failure, .. } => {
            let what = failure.describe();
            r.line(format!("failure ({what})"));
            r.check("unifiable", Status::Fail, "false");
            out["outcome"] = json!("failure");
            out["failure"] = json!(what);
        }
        Outcome::Success(f) => {
            out["outcome"] = json!("success");
            let theta = match req.algorithm {
                Algorithm::Mma => Some(extract_mgu(f).expect("classical runs end solved")),
                Algorithm::MmaMinus => {
                    r.line(format!("semi-solved: {}", f.render()));
                    out["semi_solved"] = json!(f.render());
                    match finish_semi_solved(f).expect("occur-check-free runs end semi-solved") {
                        Finished::Mgu(theta) => Some(theta),
                        Finished::NotUnifiable(_) => None,
                    }
                }
            };
            match theta {
                Some(theta) => {
                    r.line(format!("mgu: {}", render_substitution(&theta)));
                    r.check("unifiable", Status::Pass, "true");
                    out["mgu"] = json!(render_substitution(&theta));
                }
                None => {
                    r.line("no finite unifier: completing the semi-solved form fails the occur-check");
                    r.check("unifiable", Status::Fail, "false");
                    out["mgu"] = Json::Null;
                }
            }
        }
    }
    if req.trace {
        out["trace"] = trace.to_json();
    }
    r.finish(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyChoice {
    Nsto,
    Wnsto,
    Both,
}

impl PropertyChoice {
    fn properties(self) -> Vec<Property> {
        match self {
            PropertyChoice::Nsto => vec![Property::Nsto],
            PropertyChoice::Wnsto => vec![Property::Wnsto],
            PropertyChoice::Both => vec![Property::Nsto, Property::Wnsto],
        }
    }
}

#[derive(Clone, Debug)]
pub struct NstoRequest {
    /// `l1 = r1, l2 = r2, ...`
    pub equations: String,
    pub property: PropertyChoice,
    pub budget: usize,
    /// Moding used by the atom-based sufficient conditions.
    pub moding: Option<String>,
}

/// Classify an equation set. A single equation between two atoms of the
/// same predicate goes through the atom-based conditions; otherwise the
/// linearity condition is tried on the two sides before searching.
pub fn classify_set(pairs: &[(Term, Term)], m: &Moding, property: Property, budget: usize) -> Verdict {
    if let [(l, r)] = pairs {
        if let (Some(a), Some(h)) = (Atom::from_term(l), Atom::from_term(r)) {
            if a.key() == h.key() && !l.is_var() && !r.is_var() {
                return classify_atoms(&a, &h, m, property, budget).expect("same predicate");
            }
        }
    }
    let lhs: Vec<Term> = pairs.iter().map(|p| p.0.clone()).collect();
    let rhs: Vec<Term> = pairs.iter().map(|p| p.1.clone()).collect();
    if nsto_by_linearity(&lhs, &rhs).expect("equal lengths") {
        return Verdict {
            property,
            value: Value::True,
            witness: None,
            certificate: Some(Certificate::Linearity),
            nodes: 0,
        };
    }
    nsto::decide(&EquationSet::from_pairs(pairs.iter().cloned()), property, budget)
}

fn verdict_status(v: Value) -> Status {
    match v {
        Value::True => Status::Pass,
        Value::False => Status::Fail,
        Value::BudgetExceeded => Status::Inconclusive,
    }
}

fn verdict_json(v: &Verdict) -> Json {
    json!({
        "value": v.value,
        "certificate": v.certificate,
        "nodes": v.nodes,
        "witness": v.witness.as_ref().map(|w| w.to_json()),
    })
}

pub fn cmd_nsto(req: &NstoRequest) -> Report {
    let inputs = BTreeMap::from([
        ("equations", req.equations.clone()),
        ("property", format!("{:?}", req.property)),
        ("budget", req.budget.to_string()),
        ("moding", req.moding.clone().unwrap_or_default()),
    ]);
    let mut r = Report::new("nsto", &inputs);
    let mut gen = VarGen::new();
    let pairs = match parse_equations(&req.equations, &mut gen) {
        Ok(p) => p,
        Err(e) => return r.fail_usage(e.to_string()),
    };
    let m = match req.moding.as_deref().map(parse_moding).transpose() {
        Ok(m) => m.unwrap_or_default(),
        Err(e) => return r.fail_usage(e.to_string()),
    };
    let mut out = BTreeMap::new();
    for p in req.property.properties() {
        let v = classify_set(&pairs, &m, p, req.budget);
        let name = p.to_string().to_uppercase();
        let mut line = format!("{name}: {}", v.value);
        if let Some(c) = v.certificate {
            line.push_str(&format!(" (certificate: {c})"));
        } else if v.nodes > 0 {
            line.push_str(&format!(" ({} states explored)", v.nodes));
        }
        r.line(line);
        let witness = v.witness.as_ref().map(|w| w.to_text());
        if let Some(w) = &witness {
            let label = match p {
                Property::Nsto => "witness run performing the occur-check failure:",
                Property::Wnsto => "witness run avoiding the occur-check failure:",
            };
            r.line(format!("  {label}"));
            r.text.push_str(&indent(w, "    "));
        }
        let c = r.check(&p.to_string(), verdict_status(v.value), v.value.to_string());
        c.certificate = v.certificate.map(|c| c.to_string());
        c.witness = witness;
        out.insert(p.to_string(), verdict_json(&v));
    }
    r.finish(json!(out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeCheck {
    Tidy,
    Nicely,
    Well,
    Well3,
    WeaklyTidy,
    WeaklyLinearHeads,
}

impl ModeCheck {
    pub fn name(self) -> &'static str {
        match self {
            ModeCheck::Tidy => "tidy",
            ModeCheck::Nicely => "nicely",
            ModeCheck::Well => "well",
            ModeCheck::Well3 => "well3",
            ModeCheck::WeaklyTidy => "weakly-tidy",
            ModeCheck::WeaklyLinearHeads => "weakly-linear-heads",
        }
    }

    fn search_property(self) -> Option<ModeProperty> {
        match self {
            ModeCheck::Tidy => Some(ModeProperty::Tidy),
            ModeCheck::Nicely => Some(ModeProperty::NicelyModed),
            ModeCheck::Well => Some(ModeProperty::WellModed),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModesRequest {
    /// Name shown in reports (e.g. the file name).
    pub program_name: String,
    pub program_text: String,
    pub check: ModeCheck,
    /// Overrides the declared moding.
    pub moding: Option<String>,
    /// Overrides the declared secondary moding (weakly-tidy only).
    pub moding2: Option<String>,
    /// Search all 2-valued modings instead of checking one.
    pub search: bool,
    pub query: Option<String>,
    pub limit: usize,
}

fn pick_moding(program: &Program, given: &Option<String>, two_valued: bool) -> Result<Moding, String> {
    if let Some(text) = given {
        return parse_moding(text).map_err(|e| e.to_string());
    }
    if !two_valued || (program.modes.is_two_valued() && program.modes.declared().next().is_some()) {
        return Ok(program.modes.clone());
    }
    match &program.secondary {
        Some(m) if m.is_two_valued() => Ok(m.clone()),
        _ => Err("no 2-valued moding declared; pass --moding".into()),
    }
}

fn violation_json(v: &Option<Violation>) -> Json {
    match v {
        None => Json::Null,
        Some(v) => json!({"clause": v.clause + 1, "reason": v.reason}),
    }
}

pub fn cmd_modes(req: &ModesRequest) -> Report {
    let inputs = BTreeMap::from([
        ("program", req.program_text.clone()),
        ("check", req.check.name().to_string()),
        ("moding", req.moding.clone().unwrap_or_default()),
        ("moding2", req.moding2.clone().unwrap_or_default()),
        ("search", req.search.to_string()),
        ("query", req.query.clone().unwrap_or_default()),
        ("limit", req.limit.to_string()),
    ]);
    let mut r = Report::new("modes", &inputs);
    let mut program = match parse_program(&req.program_text) {
        Ok(p) => p,
        Err(e) => return r.fail_usage(format!("{}: {e}", req.program_name)),
    };
    let check = req.check.name();
    let mut out = json!({"program": req.program_name, "check": check});

    if req.search {
        let Some(property) = req.check.search_property() else {
            return r.fail_usage(format!("--search supports tidy, nicely and well, not {check}"));
        };
        let s = match modes::search_modings(&program.clauses, property, req.limit, DEFAULT_SEARCH_CAP) {
            Ok(s) => s,
            Err(e) => return r.fail_usage(e.to_string()),
        };
        if s.modings.is_empty() {
            r.line(format!("no moding found ({} searched)", s.searched));
        } else {
            r.line(format!("{} modings found ({} searched)", s.modings.len(), s.searched));
            for m in &s.modings {
                r.line(format!("  {m}"));
            }
        }
        let status = if s.modings.is_empty() { Status::Fail } else { Status::Pass };
        r.check(&format!("search-{check}"), status, format!("{} found", s.modings.len()));
        out["searched"] = json!(s.searched);
        out["found"] = json!(s.modings.iter().map(|m| m.to_string()).collect::<Vec<_>>());
        return r.finish(out);
    }

    let two_valued = matches!(req.check, ModeCheck::Tidy | ModeCheck::Nicely | ModeCheck::Well);
    let m = match pick_moding(&program, &req.moding, two_valued) {
        Ok(m) => m,
        Err(e) => return r.fail_usage(e),
    };
    let clauses = &program.clauses;
    let result: Result<(Option<Violation>, String), ModeError> = match req.check {
        ModeCheck::Tidy => modes::tidy_program_violation(clauses, &m).map(|v| (v, m.to_string())),
        ModeCheck::Nicely => modes::nicely_moded_program_violation(clauses, &m).map(|v| (v, m.to_string())),
        ModeCheck::Well => modes::well_moded_program_violation(clauses, &m).map(|v| (v, m.to_string())),
        ModeCheck::Well3 => modes::well_3_moded_program_violation(clauses, &m).map(|v| (v, m.to_string())),
        ModeCheck::WeaklyLinearHeads => {
            modes::weakly_linear_heads_violation(clauses, &m).map(|v| (v, m.to_string()))
        }
        ModeCheck::WeaklyTidy => {
            let m2 = match &req.moding2 {
                Some(t) => match parse_moding(t) {
                    Ok(m2) => m2,
                    Err(e) => return r.fail_usage(e.to_string()),
                },
                None => match &program.secondary {
                    Some(m2) => m2.clone(),
                    None => return r.fail_usage("no secondary moding declared; pass --moding2"),
                },
            };
            modes::weakly_tidy_violation(clauses, &m, &m2).map(|v| (v, format!("{m}; then {m2}")))
        }
    };
    let (violation, shown) = match result {
        Ok(x) => x,
        Err(e) => return r.fail_usage(e.to_string()),
    };
    match &violation {
        None => r.line(format!("{check} under {shown}: pass")),
        Some(v) => r.line(format!("{check} under {shown}: fail (clause {}: {})", v.clause + 1, v.reason)),
    }
    let status = if violation.is_none() { Status::Pass } else { Status::Fail };
    let verdict = if violation.is_none() { "pass" } else { "fail" };
    r.check(check, status, verdict).witness = violation.as_ref().map(|v| format!("clause {}: {}", v.clause + 1, v.reason));
    out["moding"] = json!(shown);
    out["violation"] = violation_json(&violation);

    if let Some(qtext) = &req.query {
        let q = match program.query(qtext) {
            Ok(q) => q,
            Err(e) => return r.fail_usage(e.to_string()),
        };
        let qres = match req.check {
            ModeCheck::Tidy => modes::tidy_query_violation(&q, &m),
            ModeCheck::Nicely => modes::nicely_moded_query_violation(&q, &m),
            ModeCheck::Well => modes::is_well_moded_query(&q, &m)
                .map(|ok| (!ok).then(|| "query is not well-moded".to_string())),
            ModeCheck::Well3 => modes::well_3_moded_query_violation(&q, &m),
            ModeCheck::WeaklyTidy | ModeCheck::WeaklyLinearHeads => {
                return r.fail_usage(format!("--query is not supported with --check {check}"))
            }
        };
        let qv = match qres {
            Ok(v) => v,
            Err(e) => return r.fail_usage(e.to_string()),
        };
        match &qv {
            None => r.line(format!("query {}: pass", render_query(&q))),
            Some(reason) => r.line(format!("query {}: fail ({reason})", render_query(&q))),
        }
        let status = if qv.is_none() { Status::Pass } else { Status::Fail };
        r.check(&format!("{check}-query"), status, if qv.is_none() { "pass" } else { "fail" })
            .witness = qv.clone();
        out["query"] = json!({"text": render_query(&q), "violation": qv});
    }
    r.finish(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleChoice {
    Leftmost,
    ModeCompatible,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyChoice {
    None,
    Nsto,
    Wnsto,
}

#[derive(Clone, Debug)]
pub struct DeriveRequest {
    pub program_name: String,
    pub program_text: String,
    pub query: String,
    pub rule: RuleChoice,
    pub verify: VerifyChoice,
    pub engine: Engine,
    pub bounds: Bounds,
    pub budget: usize,
    /// Overrides the declared moding (selection and certificates).
    pub moding: Option<String>,
    /// Include the indented tree in the output.
    pub tree: bool,
}

/// Statuses of the leaves; interior nodes carry no verdict of their own.
fn status_counts(tree: &SldTree) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for n in tree.nodes.iter().filter(|n| n.children.is_empty()) {
        *counts.entry(n.status.to_string()).or_insert(0) += 1;
    }
    counts
}

pub fn cmd_derive(req: &DeriveRequest) -> Report {
    let inputs = BTreeMap::from([
        ("program", req.program_text.clone()),
        ("query", req.query.clone()),
        ("rule", format!("{:?}", req.rule)),
        ("verify", format!("{:?}", req.verify)),
        ("engine", format!("{:?}", req.engine)),
        ("max_depth", req.bounds.max_depth.to_string()),
        ("max_nodes", req.bounds.max_nodes.to_string()),
        ("budget", req.budget.to_string()),
        ("moding", req.moding.clone().unwrap_or_default()),
    ]);
    let mut r = Report::new("derive", &inputs);
    let mut program = match parse_program(&req.program_text) {
        Ok(p) => p,
        Err(e) => return r.fail_usage(format!("{}: {e}", req.program_name)),
    };
    if let Some(text) = &req.moding {
        match parse_moding(text) {
            Ok(m) => program.modes = m,
            Err(e) => return r.fail_usage(e.to_string()),
        }
    }
    let query = match program.query(&req.query) {
        Ok(q) => q,
        Err(e) => return r.fail_usage(e.to_string()),
    };
    let rule = match req.rule {
        RuleChoice::Leftmost => SelectionRule::Leftmost,
        RuleChoice::ModeCompatible => SelectionRule::ModeCompatible(program.modes.clone()),
        RuleChoice::All => SelectionRule::AllRules,
    };
    let verify_mode = match req.verify {
        VerifyChoice::None => None,
        VerifyChoice::Nsto => Some(VerifyMode::Strict),
        VerifyChoice::Wnsto => Some(VerifyMode::Weak),
    };
    let mut opts = TreeOptions::new(rule.clone())
        .bounds(req.bounds.max_depth, req.bounds.max_nodes)
        .classify(&verify_mode.map(|v| vec![v.property()]).unwrap_or_default())
        .stop_on(verify_mode.map(|v| v.property()));
    opts.budget = req.budget;
    let tree = match req.engine {
        Engine::Sound => build_tree(&program, &query, &opts),
        Engine::Unsound => execute_unsound(&program, &query, &opts),
    };

    // Anonymous query variables are left out of answers, as in Prolog.
    let named: std::collections::BTreeSet<_> = query
        .iter()
        .flat_map(|a| a.vars())
        .filter(|v| v.name.is_some())
        .collect();
    let answers: Vec<String> = tree
        .answers()
        .iter()
        .map(|a| render_substitution(&a.restrict(&named)))
        .collect();
    if answers.is_empty() {
        r.line("no answers");
    } else {
        r.line(format!("answers ({}):", answers.len()));
        for a in &answers {
            r.line(format!("  {a}"));
        }
    }
    let counts = status_counts(&tree);
    let summary: Vec<String> = counts
        .iter()
        .map(|(k, v)| format!("{k} {v}"))
        .collect();
    r.line(format!(
        "tree: {} nodes, leaves: {}{}",
        tree.nodes.len(),
        summary.join(", "),
        if tree.stopped {
            ", stopped at the first refutation"
        } else if tree.truncated {
            ", cut by bounds"
        } else {
            ""
        }
    ));
    let mut out = json!({
        "program": req.program_name,
        "query": render_query(&query),
        "rule": rule.name(),
        "engine": req.engine,
        "bounds": req.bounds,
        "nodes": tree.nodes.len(),
        "statuses": counts,
        "truncated": tree.truncated,
        "stopped": tree.stopped,
        "answers": answers,
    });

    if let Some(mode) = verify_mode {
        let id = match mode {
            VerifyMode::Strict => "occur-check-free",
            VerifyMode::Weak => "weakly-occur-check-free",
        };
        let bounds_note = if tree.truncated {
            format!(
                "up to bounds (depth {}, nodes {})",
                req.bounds.max_depth, req.bounds.max_nodes
            )
        } else {
            "complete tree".to_string()
        };
        match verify_occur_check_free(&tree, mode) {
            Verification::Verified { complete, unifications } => {
                r.line(format!(
                    "{id}: verified for all {unifications} available unifications, {bounds_note}"
                ));
                r.check(id, Status::Pass, if complete { "verified" } else { "verified_up_to_bound" });
                out["verification"] = json!({
                    "result": "verified",
                    "complete": complete,
                    "unifications": unifications,
                });
            }
            Verification::Refuted(u) => {
                let v = u.verdict(mode.property()).expect("classified");
                r.line(format!("{id}: refuted at {} which is not {}", u.describe(), mode.property().to_string().to_uppercase()));
                let witness = v.witness.as_ref().map(|w| w.to_text());
                if let Some(w) = &witness {
                    r.text.push_str(&indent(w, "    "));
                }
                r.check(id, Status::Fail, "refuted").witness = Some(u.describe());
                out["verification"] = json!({
                    "result": "refuted",
                    "node": u.node,
                    "clause": u.clause + 1,
                    "atom": crate::render::render_atom(&u.atom),
                    "head": crate::render::render_atom(&u.head),
                    "witness": v.witness.as_ref().map(|w| w.to_json()),
                });
            }
            Verification::Inconclusive { unifications } => {
                r.line(format!("{id}: inconclusive, a search budget was exceeded ({unifications} unifications)"));
                r.check(id, Status::Inconclusive, "budget_exceeded");
                out["verification"] = json!({"result": "budget_exceeded", "unifications": unifications});
            }
        }
        let unconditional = unconditional_certificate(&program, &query, mode, &rule);
        if let Some(c) = unconditional {
            r.line(format!("unconditional: {c}"));
        }
        out["unconditional"] = json!(unconditional);
    }

    if req.engine == Engine::Unsound {
        let reference = build_tree(&program, &query, &opts.clone().classify(&[]));
        let agree = reference.answer_instances() == tree.answer_instances()
            && reference.failure_frontier() == tree.failure_frontier()
            && tree.count(NodeStatus::CyclicBinding) == 0;
        r.line(format!(
            "unsound engine agrees with sound engine: {}",
            if agree { "yes" } else { "no" }
        ));
        r.check("engines-agree", if agree { Status::Pass } else { Status::Fail }, agree.to_string());
        out["engines_agree"] = json!(agree);
        out["cyclic_bindings"] = json!(tree
            .leaves(NodeStatus::CyclicBinding)
            .filter_map(|n| n.note.clone())
            .collect::<Vec<_>>());
    }
    if req.tree {
        out["tree"] = json!(tree.to_text());
        r.text.push_str(&tree.to_text());
    }
    r.finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unify(lhs: &str, rhs: &str, algorithm: Algorithm) -> Report {
        cmd_unify(&UnifyRequest {
            lhs: lhs.into(),
            rhs: rhs.into(),
            algorithm,
            strategy: Strategy::FirstApplicable,
            trace: false,
        })
    }

    #[test]
    fn unify_texts() {
        let r = unify("g(X,X)", "g(Y,f(Y))", Algorithm::MmaMinus);
        assert!(r.text.starts_with("semi-solved: X = Y, Y = f(Y)\n"));
        assert_eq!(r.exit_status, EXIT_REFUTED);
        let r = unify("p(a,f(X),X)", "p(b,Y,Y)", Algorithm::MmaMinus);
        assert_eq!(r.text, "failure (clash a/b)\n");
        let r = unify("f(X)", "f(X)", Algorithm::Mma);
        assert_eq!(r.text, "mgu: {}\n");
        assert_eq!(r.exit_status, EXIT_PASS);
        let r = unify("f(X", "a", Algorithm::Mma);
        assert_eq!(r.exit_status, EXIT_USAGE);
    }

    #[test]
    fn strategies_parse() {
        assert_eq!(parse_strategy("first"), Ok(Strategy::FirstApplicable));
        assert_eq!(parse_strategy("random:7"), Ok(Strategy::SeededRandom(7)));
        assert_eq!(
            parse_strategy("script:0;1,2"),
            Ok(Strategy::Scripted(vec![Choice::at(0), Choice::pair(1, 2)]))
        );
        assert!(parse_strategy("script:x").is_err());
        assert!(parse_strategy("other").is_err());
    }

    #[test]
    fn nsto_reports() {
        let req = |eqs: &str, property| NstoRequest {
            equations: eqs.into(),
            property,
            budget: nsto::DEFAULT_BUDGET,
            moding: None,
        };
        let r = cmd_nsto(&req("p(a,f(X),X) = p(b,Y,Y)", PropertyChoice::Both));
        assert_eq!(r.checks[0].verdict, "false");
        assert_eq!(r.checks[1].verdict, "true");
        assert!(r.checks[1].witness.is_some());
        let r = cmd_nsto(&req("X = f(X)", PropertyChoice::Wnsto));
        assert_eq!(r.checks[0].verdict, "false");
        let r = cmd_nsto(&req("f(X,Y) = f(a,b)", PropertyChoice::Nsto));
        assert_eq!(r.checks[0].certificate.as_deref(), Some("linearity"));
        assert_eq!(r.exit_status, EXIT_PASS);
    }

    #[test]
    fn digests_are_stable() {
        let a = unify("f(X)", "f(X)", Algorithm::Mma);
        let b = unify("f(X)", "f(X)", Algorithm::Mma);
        let c = unify("f(Y)", "f(Y)", Algorithm::Mma);
        assert_eq!(a.input_digest, b.input_digest);
        assert_ne!(a.input_digest, c.input_digest);
        assert_eq!(a.to_json(), b.to_json());
    }
}
