//! Reader for the definite-clause subset: clauses, queries, equation
//! lists and `:- mode` / `:- mode2` declarations.
//!
//! Syntax: lowercase or digit-initial names are functors and constants,
//! uppercase or `_`-initial names are variables, every bare `_` is a
//! distinct fresh variable. Lists use `[H|T]`. The infix operators are
//! `^` (tightest), `*`, `+`, all left-associative; `\==` may appear
//! between two terms in a clause body.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::moding::{is_builtin, Mode, Moding};
use crate::term::{Atom, Clause, PredKey, Term, Var, VarGen};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("empty query")]
    EmptyQuery,
    #[error("mode declaration for {declared} does not match the arity used in clauses ({used})")]
    ModeArity { declared: String, used: String },
    #[error("conflicting mode declarations for {0}")]
    ModeConflict(String),
}

/// A moded definite program.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub clauses: Vec<Clause>,
    /// Primary (possibly 3-valued) moding from `:- mode` declarations.
    pub modes: Moding,
    /// Secondary 2-valued moding from `:- mode2` declarations.
    pub secondary: Option<Moding>,
    /// Fresh-variable state after parsing; parse queries with it so that
    /// their variables are disjoint from the program's.
    pub vars: VarGen,
}

impl Program {
    /// User predicates, in order of first appearance (heads, then bodies).
    pub fn predicates(&self) -> Vec<PredKey> {
        let mut out: Vec<PredKey> = Vec::new();
        let mut push = |k: PredKey| {
            if !is_builtin(&k) && !out.contains(&k) {
                out.push(k);
            }
        };
        for c in &self.clauses {
            push(c.head.key());
        }
        for c in &self.clauses {
            for a in &c.body {
                push(a.key());
            }
        }
        out
    }

    pub fn clauses_for<'a>(&'a self, key: &'a PredKey) -> impl Iterator<Item = (usize, &'a Clause)> + 'a {
        self.clauses
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.head.key() == *key)
    }

    pub fn query(&mut self, text: &str) -> Result<Vec<Atom>, ParseError> {
        parse_query(text, &mut self.vars)
    }
}

pub type Query = Vec<Atom>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Name(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bar,
    Comma,
    End,
    Neck,
    Caret,
    Star,
    Plus,
    Minus,
    Question,
    NotIdentical,
    Equals,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable {v}"),
            Tok::Name(n) => format!("name {n}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrack => "'['".into(),
            Tok::RBrack => "']'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "'.'".into(),
            Tok::Neck => "':-'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Question => "'?'".into(),
            Tok::NotIdentical => "'\\=='".into(),
            Tok::Equals => "'='".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
                col += 1;
            }
            let word: String = chars[start..i].iter().collect();
            if c.is_ascii_uppercase() || c == '_' {
                Tok::Var(word)
            } else if c.is_ascii_digit() && !word.chars().all(|d| d.is_ascii_digit()) {
                return Err(err(l0, c0, format!("malformed number {word}")));
            } else {
                Tok::Name(word)
            }
        } else {
            let two: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            let (tok, n) = if two.starts_with("\\==") {
                (Tok::NotIdentical, 3)
            } else if two.starts_with(":-") {
                (Tok::Neck, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '|' => Tok::Bar,
                    ',' => Tok::Comma,
                    '.' => Tok::End,
                    '^' | '↑' => Tok::Caret,
                    '*' => Tok::Star,
                    '+' => Tok::Plus,
                    '-' | '−' => Tok::Minus,
                    '?' | '⊥' => Tok::Question,
                    '=' => Tok::Equals,
                    other => return Err(err(l0, c0, format!("unexpected character {other:?}"))),
                };
                (t, 1)
            };
            i += n;
            col += n;
            tok
        };
        out.push(Spanned {
            tok,
            line: l0,
            column: c0,
        });
    }
    Ok(out)
}

struct Parser<'g> {
    toks: Vec<Spanned>,
    pos: usize,
    gen: &'g mut VarGen,
    scope: HashMap<String, Var>,
    eof: (usize, usize),
}

impl<'g> Parser<'g> {
    fn new(text: &str, gen: &'g mut VarGen) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        let lines: Vec<&str> = text.split('\n').collect();
        let eof = (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser {
            toks,
            pos: 0,
            gen,
            scope: HashMap::new(),
            eof,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .map_or(self.eof, |s| (s.line, s.column));
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.error(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn variable(&mut self, name: &str) -> Term {
        if name == "_" {
            return Term::Var(self.gen.fresh());
        }
        if let Some(v) = self.scope.get(name) {
            return Term::Var(v.clone());
        }
        let v = self.gen.fresh_named(name);
        self.scope.insert(name.to_string(), v.clone());
        Term::Var(v)
    }

    // expr := mul ('+' mul)*
    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut left = self.mul()?;
        while self.eat(&Tok::Plus) {
            let right = self.mul()?;
            left = Term::app("+", vec![left, right]);
        }
        Ok(left)
    }

    fn mul(&mut self) -> Result<Term, ParseError> {
        let mut left = self.pow()?;
        while self.eat(&Tok::Star) {
            let right = self.pow()?;
            left = Term::app("*", vec![left, right]);
        }
        Ok(left)
    }

    fn pow(&mut self) -> Result<Term, ParseError> {
        let mut left = self.primary()?;
        while self.eat(&Tok::Caret) {
            let right = self.primary()?;
            left = Term::app("^", vec![left, right]);
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Var(name)) => {
                self.pos += 1;
                Ok(self.variable(&name))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                if self.eat(&Tok::LParen) {
                    let args = self.args()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::app(&name, args))
                } else {
                    Ok(Term::constant(&name))
                }
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                if self.eat(&Tok::RBrack) {
                    return Ok(Term::nil());
                }
                let items = self.args()?;
                let tail = if self.eat(&Tok::Bar) {
                    self.expr()?
                } else {
                    Term::nil()
                };
                self.expect(Tok::RBrack)?;
                Ok(Term::list(items, tail))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(t) => Err(self.error(format!("expected a term, found {}", t.describe()))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            args.push(self.expr()?);
        }
        Ok(args)
    }

    fn goal(&mut self) -> Result<Atom, ParseError> {
        let start = self.pos;
        let t = self.expr()?;
        if self.eat(&Tok::NotIdentical) {
            let r = self.expr()?;
            return Ok(Atom::new("\\==", vec![t, r]));
        }
        match Atom::from_term(&t) {
            Some(a) => Ok(a),
            None => {
                self.pos = start;
                Err(self.error("a variable cannot be used as a goal"))
            }
        }
    }

    fn goals(&mut self) -> Result<Vec<Atom>, ParseError> {
        let mut gs = vec![self.goal()?];
        while self.eat(&Tok::Comma) {
            gs.push(self.goal()?);
        }
        Ok(gs)
    }

    fn mode_spec(&mut self) -> Result<(PredKey, Vec<Mode>), ParseError> {
        let name = match self.next() {
            Some(Tok::Name(n)) => n,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected a predicate name in mode declaration"));
            }
        };
        let mut modes = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let m = match self.next() {
                    Some(Tok::Plus) => Mode::In,
                    Some(Tok::Minus) => Mode::Out,
                    Some(Tok::Question) => Mode::Neutral,
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        return Err(self.error("expected one of + - ? in mode declaration"));
                    }
                };
                modes.push(m);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok((PredKey::new(&name, modes.len()), modes))
    }
}

fn insert_mode(m: &mut Moding, key: PredKey, modes: Vec<Mode>) -> Result<(), ParseError> {
    if let Some(existing) = m.get(&key) {
        if existing.as_ref() != modes.as_slice() {
            return Err(ParseError::ModeConflict(key.to_string()));
        }
    }
    m.set(key, modes);
    Ok(())
}

/// Parse a program text. Clauses keep source order.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut gen = VarGen::new();
    let mut clauses = Vec::new();
    let mut modes = Moding::new();
    let mut secondary: Option<Moding> = None;
    {
        let mut p = Parser::new(text, &mut gen)?;
        while !p.at_eof() {
            p.scope.clear();
            if p.peek() == Some(&Tok::Neck) {
                p.pos += 1;
                let which = match p.next() {
                    Some(Tok::Name(n)) if n == "mode" || n == "mode2" => n,
                    _ => {
                        p.pos -= 1;
                        return Err(p.error("only ':- mode' and ':- mode2' directives are supported"));
                    }
                };
                loop {
                    let (key, ms) = p.mode_spec()?;
                    if which == "mode" {
                        insert_mode(&mut modes, key, ms)?;
                    } else {
                        insert_mode(secondary.get_or_insert_with(Moding::new), key, ms)?;
                    }
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(Tok::End)?;
                continue;
            }
            let head = p.goal()?;
            let body = if p.eat(&Tok::Neck) { p.goals()? } else { Vec::new() };
            p.expect(Tok::End)?;
            clauses.push(Clause { head, body });
        }
    }
    let program = Program {
        clauses,
        modes,
        secondary,
        vars: gen,
    };
    check_mode_arities(&program)?;
    Ok(program)
}

fn check_mode_arities(p: &Program) -> Result<(), ParseError> {
    let used = p.predicates();
    let mut by_name: BTreeMap<&str, Vec<&PredKey>> = BTreeMap::new();
    for k in &used {
        by_name.entry(&k.name).or_default().push(k);
    }
    let declared = p
        .modes
        .declared()
        .chain(p.secondary.iter().flat_map(|m| m.declared()));
    for (key, _) in declared {
        if let Some(keys) = by_name.get(&*key.name) {
            if !keys.contains(&key) {
                return Err(ParseError::ModeArity {
                    declared: key.to_string(),
                    used: keys.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "),
                });
            }
        }
    }
    Ok(())
}

/// Parse a comma-separated list of atoms; the final `.` is optional.
pub fn parse_query(text: &str, gen: &mut VarGen) -> Result<Query, ParseError> {
    let mut p = Parser::new(text, gen)?;
    if p.at_eof() || (p.peek() == Some(&Tok::End) && p.peek2().is_none()) {
        return Err(ParseError::EmptyQuery);
    }
    let goals = p.goals()?;
    p.eat(&Tok::End);
    if !p.at_eof() {
        return Err(p.error("unexpected input after query"));
    }
    Ok(goals)
}

/// Parse a single term.
pub fn parse_term(text: &str, gen: &mut VarGen) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, gen)?;
    let t = p.expr()?;
    p.eat(&Tok::End);
    if !p.at_eof() {
        return Err(p.error("unexpected input after term"));
    }
    Ok(t)
}

/// Parse several terms sharing one variable scope.
pub fn parse_terms(texts: &[&str], gen: &mut VarGen) -> Result<Vec<Term>, ParseError> {
    let mut scope = HashMap::new();
    let mut out = Vec::new();
    for text in texts {
        let mut p = Parser::new(text, gen)?;
        p.scope = scope;
        let t = p.expr()?;
        p.eat(&Tok::End);
        if !p.at_eof() {
            return Err(p.error("unexpected input after term"));
        }
        scope = std::mem::take(&mut p.scope);
        out.push(t);
    }
    Ok(out)
}

/// Parse `s1 = t1, s2 = t2, ...` into equation sides.
pub fn parse_equations(text: &str, gen: &mut VarGen) -> Result<Vec<(Term, Term)>, ParseError> {
    let mut p = Parser::new(text, gen)?;
    let mut out = Vec::new();
    loop {
        let l = p.expr()?;
        p.expect(Tok::Equals)?;
        let r = p.expr()?;
        out.push((l, r));
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.eat(&Tok::End);
    if !p.at_eof() {
        return Err(p.error("unexpected input after equations"));
    }
    Ok(out)
}

/// Parse mode specs such as `d(-,+,-), q(+,-)` (no `:-`, no final `.`
/// required).
pub fn parse_moding(text: &str) -> Result<Moding, ParseError> {
    let mut gen = VarGen::new();
    let mut p = Parser::new(text, &mut gen)?;
    let mut m = Moding::new();
    loop {
        let (key, ms) = p.mode_spec()?;
        insert_mode(&mut m, key, ms)?;
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.eat(&Tok::End);
    if !p.at_eof() {
        return Err(p.error("unexpected input after moding"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::render_term;

    #[test]
    fn anonymous_variables_are_distinct() {
        let p = parse_program("pqs(0,_,_,_).").unwrap();
        assert_eq!(p.clauses.len(), 1);
        let c = &p.clauses[0];
        assert!(c.body.is_empty());
        let vs = c.head.vars();
        assert_eq!(vs.len(), 3);
    }

    #[test]
    fn use2_clause() {
        let p = parse_program("p([X|Xs], f(X,Xs1), [g(X,_)|Xs2]) :- p(Xs,Xs1,Xs2).").unwrap();
        let c = &p.clauses[0];
        assert_eq!(c.head.arity(), 3);
        assert_eq!(c.body.len(), 1);
        assert_eq!(render_term(&c.head.to_term()), "p([X|Xs],f(X,Xs1),[g(X,_G3)|Xs2])");
        assert_eq!(c.vars().len(), 5);
    }

    #[test]
    fn mode_declaration_three_valued() {
        let p = parse_program(":- mode d(+,?,?).\nd(X,X,s(0)).").unwrap();
        let m = p.modes.get(&PredKey::new("d", 3)).unwrap();
        assert_eq!(m.as_ref(), &[Mode::In, Mode::Neutral, Mode::Neutral]);
    }

    #[test]
    fn infix_operators() {
        let mut g = VarGen::new();
        let q = parse_query("d(x*x, x, D).", &mut g).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(
            q[0].args[0],
            Term::app("*", vec![Term::constant("x"), Term::constant("x")])
        );
        let t = parse_term("F*DG + DF*G", &mut g).unwrap();
        assert_eq!(t.functor(), Some(("+", 2)));
        let t = parse_term("s(N)*X^N", &mut g).unwrap();
        match &t {
            Term::App(f, args) => {
                assert_eq!(&**f, "*");
                assert_eq!(args[1].functor(), Some(("^", 2)));
            }
            _ => panic!(),
        }
        let t = parse_term("a*b*c", &mut g).unwrap();
        assert_eq!(render_term(&t), "a*b*c");
        match &t {
            Term::App(_, args) => assert_eq!(args[0].functor(), Some(("*", 2))),
            _ => panic!(),
        }
    }

    #[test]
    fn empty_query_is_an_error() {
        let mut g = VarGen::new();
        assert_eq!(parse_query("", &mut g), Err(ParseError::EmptyQuery));
        assert_eq!(parse_query("  . ", &mut g), Err(ParseError::EmptyQuery));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_program("p(a).\nq(b :- r.") {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 5);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_program("p('$g0')."),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn mode_arity_mismatch() {
        let err = parse_program(":- mode p(+,-).\np(a).").unwrap_err();
        assert!(matches!(err, ParseError::ModeArity { .. }));
    }

    #[test]
    fn builtins_in_bodies() {
        let p = parse_program("f(X,[X|Xs],Xs) :- constant(X), X \\== [].").unwrap();
        let body = &p.clauses[0].body;
        assert_eq!(body[0].key(), PredKey::new("constant", 1));
        assert_eq!(body[1].key(), PredKey::new("\\==", 2));
        assert_eq!(body[1].args[1], Term::nil());
    }

    #[test]
    fn equations() {
        let mut g = VarGen::new();
        let eqs = parse_equations("p(a,f(X),X) = p(b,Y,Y)", &mut g).unwrap();
        assert_eq!(eqs.len(), 1);
        let eqs = parse_equations("X = f(X), Y = X.", &mut g).unwrap();
        assert_eq!(eqs.len(), 2);
        assert_eq!(eqs[0].0, eqs[1].1);
    }

    #[test]
    fn secondary_modes() {
        let p = parse_program(":- mode p(+).\n:- mode2 p(-), q(+,-).\np(X) :- q(X,X).").unwrap();
        let s = p.secondary.unwrap();
        assert!(s.is_two_valued());
        assert!(s.is_declared(&PredKey::new("q", 2)));
    }
}
