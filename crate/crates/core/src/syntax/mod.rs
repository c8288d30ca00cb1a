//! Abstract syntax for tests, KAT programs and GKAT programs.
//!
//! Symbols are interned in a [`Universe`]: expressions carry [`TestId`] and
//! [`ActionId`] indices, so every expression is only meaningful together with
//! the universe it was parsed against.

mod parse;
mod render;

pub use parse::{parse_gkat, parse_gkat_in, parse_header, parse_kat, parse_kat_in};
pub use render::{render_bexp, render_gkat, render_kat};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, HARD_MAX_TESTS};

/// Index of a primitive test in its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TestId(pub usize);

/// Index of a primitive action in its universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionId(pub usize);

/// The primitive tests and actions of a session, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Universe {
    tests: Vec<String>,
    actions: Vec<String>,
}

impl Universe {
    pub fn new<S: Into<String>>(
        tests: impl IntoIterator<Item = S>,
        actions: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let tests: Vec<String> = tests.into_iter().map(Into::into).collect();
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        for (i, t) in tests.iter().enumerate() {
            if tests[..i].contains(t) {
                return Err(Error::DuplicateSymbol(t.clone()));
            }
        }
        for (i, a) in actions.iter().enumerate() {
            if actions[..i].contains(a) {
                return Err(Error::DuplicateSymbol(a.clone()));
            }
            if tests.contains(a) {
                return Err(Error::ConflictingSymbol(a.clone()));
            }
        }
        if tests.len() > HARD_MAX_TESTS {
            return Err(Error::AtomBlowup {
                tests: tests.len(),
                cap: HARD_MAX_TESTS,
            });
        }
        Ok(Universe { tests, actions })
    }

    pub fn tests(&self) -> &[String] {
        &self.tests
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn test_id(&self, name: &str) -> Option<TestId> {
        self.tests.iter().position(|t| t == name).map(TestId)
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name).map(ActionId)
    }

    pub fn test_name(&self, t: TestId) -> &str {
        &self.tests[t.0]
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a.0]
    }

    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> {
        (0..self.actions.len()).map(ActionId)
    }

    /// Number of atoms, `2^|tests|`.
    pub fn num_atoms(&self) -> usize {
        1usize << self.tests.len()
    }

    /// Union of two universes: symbols of `self` keep their indices, new
    /// symbols of `other` are appended in their declaration order.
    pub fn merge(&self, other: &Universe) -> Result<Universe> {
        let mut tests = self.tests.clone();
        let mut actions = self.actions.clone();
        for t in &other.tests {
            if !tests.contains(t) {
                tests.push(t.clone());
            }
        }
        for a in &other.actions {
            if !actions.contains(a) {
                actions.push(a.clone());
            }
        }
        Universe::new(tests, actions)
    }
}

/// Boolean tests over the primitive tests of a universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BExp {
    Zero,
    One,
    Test(TestId),
    Or(Box<BExp>, Box<BExp>),
    And(Box<BExp>, Box<BExp>),
    Not(Box<BExp>),
}

impl BExp {
    pub fn test(t: TestId) -> Self {
        BExp::Test(t)
    }

    pub fn or(self, other: BExp) -> Self {
        BExp::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: BExp) -> Self {
        BExp::And(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        BExp::Not(Box::new(self))
    }

    pub fn scoped_in(&self, u: &Universe) -> bool {
        match self {
            BExp::Zero | BExp::One => true,
            BExp::Test(t) => t.0 < u.tests.len(),
            BExp::Or(b, c) | BExp::And(b, c) => b.scoped_in(u) && c.scoped_in(u),
            BExp::Not(b) => b.scoped_in(u),
        }
    }
}

/// KAT expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KatExp {
    Test(BExp),
    Act(ActionId),
    Plus(Box<KatExp>, Box<KatExp>),
    Seq(Box<KatExp>, Box<KatExp>),
    Star(Box<KatExp>),
}

impl KatExp {
    pub fn zero() -> Self {
        KatExp::Test(BExp::Zero)
    }

    pub fn one() -> Self {
        KatExp::Test(BExp::One)
    }

    pub fn plus(self, other: KatExp) -> Self {
        KatExp::Plus(Box::new(self), Box::new(other))
    }

    pub fn seq(self, other: KatExp) -> Self {
        KatExp::Seq(Box::new(self), Box::new(other))
    }

    pub fn star(self) -> Self {
        KatExp::Star(Box::new(self))
    }

    /// Number of AST nodes; a test leaf counts 1 whatever its Boolean structure.
    pub fn size(&self) -> usize {
        match self {
            KatExp::Test(_) | KatExp::Act(_) => 1,
            KatExp::Plus(e, f) | KatExp::Seq(e, f) => 1 + e.size() + f.size(),
            KatExp::Star(e) => 1 + e.size(),
        }
    }

    pub fn scoped_in(&self, u: &Universe) -> bool {
        match self {
            KatExp::Test(b) => b.scoped_in(u),
            KatExp::Act(a) => a.0 < u.actions.len(),
            KatExp::Plus(e, f) | KatExp::Seq(e, f) => e.scoped_in(u) && f.scoped_in(u),
            KatExp::Star(e) => e.scoped_in(u),
        }
    }

    /// Merges `+` and `;` nodes whose operands are both tests into a single
    /// test (`Or` / `And`). This is the shape the algebraic parser produces.
    pub fn fold_tests(self) -> KatExp {
        match self {
            KatExp::Plus(e, f) => match (e.fold_tests(), f.fold_tests()) {
                (KatExp::Test(b), KatExp::Test(c)) => KatExp::Test(b.or(c)),
                (e, f) => e.plus(f),
            },
            KatExp::Seq(e, f) => match (e.fold_tests(), f.fold_tests()) {
                (KatExp::Test(b), KatExp::Test(c)) => KatExp::Test(b.and(c)),
                (e, f) => e.seq(f),
            },
            KatExp::Star(e) => e.fold_tests().star(),
            leaf => leaf,
        }
    }
}

/// GKAT expressions: the deterministic fragment built from `if` and `while`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GkatExp {
    Test(BExp),
    Act(ActionId),
    /// `e +_b f`, i.e. `if b then e else f`.
    If(BExp, Box<GkatExp>, Box<GkatExp>),
    Seq(Box<GkatExp>, Box<GkatExp>),
    /// `e^(b)`, i.e. `while b do e`.
    While(BExp, Box<GkatExp>),
}

impl GkatExp {
    pub fn zero() -> Self {
        GkatExp::Test(BExp::Zero)
    }

    pub fn one() -> Self {
        GkatExp::Test(BExp::One)
    }

    pub fn if_then_else(b: BExp, e: GkatExp, f: GkatExp) -> Self {
        GkatExp::If(b, Box::new(e), Box::new(f))
    }

    pub fn seq(self, other: GkatExp) -> Self {
        GkatExp::Seq(Box::new(self), Box::new(other))
    }

    pub fn while_do(b: BExp, body: GkatExp) -> Self {
        GkatExp::While(b, Box::new(body))
    }

    /// Number of AST nodes; a test leaf counts 1 whatever its Boolean structure.
    pub fn size(&self) -> usize {
        match self {
            GkatExp::Test(_) | GkatExp::Act(_) => 1,
            GkatExp::If(_, e, f) | GkatExp::Seq(e, f) => 1 + e.size() + f.size(),
            GkatExp::While(_, e) => 1 + e.size(),
        }
    }

    pub fn scoped_in(&self, u: &Universe) -> bool {
        match self {
            GkatExp::Test(b) => b.scoped_in(u),
            GkatExp::Act(a) => a.0 < u.actions.len(),
            GkatExp::If(b, e, f) => b.scoped_in(u) && e.scoped_in(u) && f.scoped_in(u),
            GkatExp::Seq(e, f) => e.scoped_in(u) && f.scoped_in(u),
            GkatExp::While(b, e) => b.scoped_in(u) && e.scoped_in(u),
        }
    }

    /// The standard translation into KAT: `e +_b f` becomes `b·e + !b·f` and
    /// `e^(b)` becomes `(b·e)*·!b`.
    pub fn embed(&self) -> KatExp {
        match self {
            GkatExp::Test(b) => KatExp::Test(b.clone()),
            GkatExp::Act(a) => KatExp::Act(*a),
            GkatExp::If(b, e, f) => KatExp::Test(b.clone())
                .seq(e.embed())
                .plus(KatExp::Test(b.clone().not()).seq(f.embed())),
            GkatExp::Seq(e, f) => e.embed().seq(f.embed()),
            GkatExp::While(b, e) => KatExp::Test(b.clone())
                .seq(e.embed())
                .star()
                .seq(KatExp::Test(b.clone().not())),
        }
    }

    /// The test `E(e)` describing the atoms at which `e` terminates without
    /// performing an action. No simplification is applied.
    pub fn termination_condition(&self) -> BExp {
        match self {
            GkatExp::Test(b) => b.clone(),
            GkatExp::Act(_) => BExp::Zero,
            GkatExp::If(b, e, f) => b
                .clone()
                .and(e.termination_condition())
                .or(b.clone().not().and(f.termination_condition())),
            GkatExp::Seq(e, f) => e.termination_condition().and(f.termination_condition()),
            GkatExp::While(b, _) => b.clone().not(),
        }
    }
}

/// An expression of either kind, as read from a program file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Gkat(GkatExp),
    Kat(KatExp),
}

impl Program {
    pub fn size(&self) -> usize {
        match self {
            Program::Gkat(e) => e.size(),
            Program::Kat(e) => e.size(),
        }
    }

    /// The KAT view of the program (GKAT programs are embedded).
    pub fn to_kat(&self) -> KatExp {
        match self {
            Program::Gkat(e) => e.embed(),
            Program::Kat(e) => e.clone(),
        }
    }
}

/// Renders an expression with symbol names from a universe.
pub struct Display<'a, T: ?Sized> {
    exp: &'a T,
    universe: &'a Universe,
}

impl<'a, T: ?Sized> Display<'a, T> {
    pub fn new(exp: &'a T, universe: &'a Universe) -> Self {
        Display { exp, universe }
    }
}

impl fmt::Display for Display<'_, GkatExp> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_gkat(self.exp, self.universe))
    }
}

impl fmt::Display for Display<'_, KatExp> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_kat(self.exp, self.universe))
    }
}

impl fmt::Display for Display<'_, BExp> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_bexp(self.exp, self.universe))
    }
}
