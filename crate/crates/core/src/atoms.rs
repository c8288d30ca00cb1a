//! Atoms (total truth assignments to the primitive tests) and atom sets.

use std::fmt;

use crate::error::{Error, Limits, Result};
use crate::syntax::{BExp, TestId, Universe};

/// A truth assignment: bit `i` holds the value of the `i`-th test.
///
/// Atoms are ordered numerically; every iteration over atoms in this crate
/// follows that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub u32);

impl Atom {
    pub fn holds(self, t: TestId) -> bool {
        self.0 >> t.0 & 1 == 1
    }

    /// All atoms of a universe with `tests` primitive tests, in order.
    pub fn all(tests: usize) -> impl Iterator<Item = Atom> + Clone {
        (0..1u32 << tests).map(Atom)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Renders as `{t1,t3}`, listing the true tests in universe order.
    pub fn render(self, u: &Universe) -> String {
        let names: Vec<&str> = (0..u.tests().len())
            .filter(|&i| self.holds(TestId(i)))
            .map(|i| u.tests()[i].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses the `{t1,t3}` notation.
    pub fn parse(text: &str, u: &Universe) -> Result<Atom> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::MalformedGuardedString(format!("`{text}` is not an atom")))?;
        let mut bits = 0u32;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let t = u.test_id(name).ok_or_else(|| {
                Error::MalformedGuardedString(format!("unknown test `{name}` in atom `{text}`"))
            })?;
            bits |= 1 << t.0;
        }
        Ok(Atom(bits))
    }
}

/// Whether `atom` satisfies `b` (`+` is or, `·` is and, overline is not).
pub fn eval(b: &BExp, atom: Atom) -> bool {
    match b {
        BExp::Zero => false,
        BExp::One => true,
        BExp::Test(t) => atom.holds(*t),
        BExp::Or(l, r) => eval(l, atom) || eval(r, atom),
        BExp::And(l, r) => eval(l, atom) && eval(r, atom),
        BExp::Not(inner) => !eval(inner, atom),
    }
}

/// A set of atoms over a fixed universe, stored as a bitset of length 2^|T|.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
    len: usize,
}

impl AtomSet {
    /// The empty set over `num_atoms` atoms.
    pub fn empty(num_atoms: usize) -> Self {
        AtomSet {
            words: vec![0; num_atoms.div_ceil(64)],
            len: num_atoms,
        }
    }

    /// The set of all `num_atoms` atoms.
    pub fn full(num_atoms: usize) -> Self {
        let mut s = AtomSet::empty(num_atoms);
        for w in &mut s.words {
            *w = !0;
        }
        s.trim();
        s
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe_size(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, a: Atom) {
        self.words[a.index() / 64] |= 1 << (a.index() % 64);
    }

    pub fn contains(&self, a: Atom) -> bool {
        a.index() < self.len && self.words[a.index() / 64] >> (a.index() % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = AtomSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.trim();
        s
    }

    fn zip(&self, other: &AtomSet, op: impl Fn(u64, u64) -> u64) -> AtomSet {
        debug_assert_eq!(self.len, other.len);
        AtomSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
            len: self.len,
        }
    }

    /// Members in numeric order.
    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.len as u32).map(Atom).filter(|a| self.contains(*a))
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// The atoms satisfying `b`, computed by set algebra over the test structure.
pub fn satisfying(b: &BExp, u: &Universe, limits: &Limits) -> Result<AtomSet> {
    limits.check_tests(u.tests().len())?;
    Ok(denote(b, u.num_atoms()))
}

pub(crate) fn denote(b: &BExp, num_atoms: usize) -> AtomSet {
    match b {
        BExp::Zero => AtomSet::empty(num_atoms),
        BExp::One => AtomSet::full(num_atoms),
        BExp::Test(t) => {
            let mut s = AtomSet::empty(num_atoms);
            for a in (0..num_atoms as u32).map(Atom).filter(|a| a.holds(*t)) {
                s.insert(a);
            }
            s
        }
        BExp::Or(l, r) => denote(l, num_atoms).union(&denote(r, num_atoms)),
        BExp::And(l, r) => denote(l, num_atoms).intersection(&denote(r, num_atoms)),
        BExp::Not(inner) => denote(inner, num_atoms).complement(),
    }
}

/// Whether `b` is equivalent to `0` in Boolean algebra.
pub fn is_zero(b: &BExp, u: &Universe, limits: &Limits) -> Result<bool> {
    Ok(satisfying(b, u, limits)?.is_empty())
}
