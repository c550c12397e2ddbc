//! Argument-position annotations: `+` input, `-` output, `?` neutral.

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Atom, PredKey, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    In,
    Out,
    Neutral,
}

impl Mode {
    pub fn symbol(self) -> char {
        match self {
            Mode::In => '+',
            Mode::Out => '-',
            Mode::Neutral => '?',
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Built-in predicates executed natively by the SLD engine. All their
/// argument positions count as input.
pub const BUILTINS: [(&str, usize); 2] = [("constant", 1), ("\\==", 2)];

pub fn is_builtin(key: &PredKey) -> bool {
    BUILTINS
        .iter()
        .any(|(n, a)| *a == key.arity && &*key.name == *n)
}

/// A (3-)moding: one mode per argument position for each declared
/// predicate. A moding without `?` positions is a standard 2-valued one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Moding {
    modes: BTreeMap<PredKey, Vec<Mode>>,
}

impl Moding {
    pub fn new() -> Self {
        Moding::default()
    }

    pub fn set(&mut self, key: PredKey, modes: Vec<Mode>) {
        debug_assert_eq!(key.arity, modes.len());
        self.modes.insert(key, modes);
    }

    pub fn with(mut self, name: &str, modes: &[Mode]) -> Self {
        self.set(PredKey::new(name, modes.len()), modes.to_vec());
        self
    }

    /// Modes for a predicate; built-ins are implicitly all-input.
    pub fn get(&self, key: &PredKey) -> Option<std::borrow::Cow<'_, [Mode]>> {
        if let Some(m) = self.modes.get(key) {
            return Some(std::borrow::Cow::Borrowed(m.as_slice()));
        }
        if is_builtin(key) {
            return Some(std::borrow::Cow::Owned(vec![Mode::In; key.arity]));
        }
        None
    }

    pub fn declared(&self) -> impl Iterator<Item = (&PredKey, &Vec<Mode>)> {
        self.modes.iter()
    }

    pub fn is_declared(&self, key: &PredKey) -> bool {
        self.get(key).is_some()
    }

    pub fn is_two_valued(&self) -> bool {
        self.modes
            .values()
            .all(|ms| ms.iter().all(|m| *m != Mode::Neutral))
    }

    /// Overlay `other` on top of `self`.
    pub fn merged(&self, other: &Moding) -> Moding {
        let mut out = self.clone();
        for (k, v) in &other.modes {
            out.modes.insert(k.clone(), v.clone());
        }
        out
    }

    /// The moding assigning `mode` to every position of every listed predicate.
    pub fn uniform<'a>(preds: impl IntoIterator<Item = &'a PredKey>, mode: Mode) -> Moding {
        let mut m = Moding::new();
        for p in preds {
            m.set(p.clone(), vec![mode; p.arity]);
        }
        m
    }
}

impl fmt::Display for Moding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, ms) in &self.modes {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}(", k.name)?;
            for (i, m) in ms.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{m}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `p(s;t;u)`: the terms in input, output and neutral positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Projection {
    pub input: Vec<Term>,
    pub output: Vec<Term>,
    pub neutral: Vec<Term>,
}

pub(crate) fn split(atom: &Atom, modes: &[Mode]) -> Projection {
    let mut p = Projection::default();
    for (t, m) in atom.args.iter().zip(modes) {
        match m {
            Mode::In => p.input.push(t.clone()),
            Mode::Out => p.output.push(t.clone()),
            Mode::Neutral => p.neutral.push(t.clone()),
        }
    }
    p
}
