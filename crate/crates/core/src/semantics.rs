//! Reference semantics: bounded guarded languages and relational models.
//!
//! Everything here follows the inductive definitions literally and is meant
//! as an oracle for the automata and the equivalence checker, not as a fast
//! path.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::atoms::{eval, Atom};
use crate::error::{Error, Limits, Result};
use crate::syntax::{ActionId, BExp, GkatExp, KatExp, Universe};

/// An alternating word `α0 p0 α1 p1 ... αn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedString {
    atoms: Vec<Atom>,
    actions: Vec<ActionId>,
}

impl GuardedString {
    /// The length-0 string consisting of one atom.
    pub fn atom(a: Atom) -> Self {
        GuardedString {
            atoms: vec![a],
            actions: Vec::new(),
        }
    }

    pub fn new(atoms: Vec<Atom>, actions: Vec<ActionId>) -> Result<Self> {
        if atoms.len() != actions.len() + 1 {
            return Err(Error::MalformedGuardedString(format!(
                "{} atoms and {} actions do not alternate",
                atoms.len(),
                actions.len()
            )));
        }
        Ok(GuardedString { atoms, actions })
    }

    /// Builds `α0 p0 ... αn-1 pn-1 αn` from a trace of steps and a final atom.
    pub fn from_trace(trace: &[(Atom, ActionId)], last: Atom) -> Self {
        let mut atoms: Vec<Atom> = trace.iter().map(|(a, _)| *a).collect();
        atoms.push(last);
        GuardedString {
            atoms,
            actions: trace.iter().map(|(_, p)| *p).collect(),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn actions(&self) -> &[ActionId] {
        &self.actions
    }

    /// Number of actions.
    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn first(&self) -> Atom {
        self.atoms[0]
    }

    pub fn last(&self) -> Atom {
        *self.atoms.last().expect("at least one atom")
    }

    /// `(αi, pi)` pairs followed by the final atom.
    pub fn steps(&self) -> impl Iterator<Item = (Atom, ActionId)> + '_ {
        self.atoms.iter().copied().zip(self.actions.iter().copied())
    }

    /// `wα ⋄ αx = wαx`; `None` when the boundary atoms differ.
    pub fn fuse(&self, other: &GuardedString) -> Option<GuardedString> {
        if self.last() != other.first() {
            return None;
        }
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms[1..]);
        let mut actions = self.actions.clone();
        actions.extend_from_slice(&other.actions);
        Some(GuardedString { atoms, actions })
    }

    /// Renders as `{b} p {} q {b,c}`.
    pub fn render(&self, u: &Universe) -> String {
        self.render_with(u, &|a| a.render(u))
    }

    pub(crate) fn render_with(&self, u: &Universe, atom: &dyn Fn(Atom) -> String) -> String {
        let mut out = atom(self.atoms[0]);
        for (p, a) in self.actions.iter().zip(&self.atoms[1..]) {
            out.push(' ');
            out.push_str(u.action_name(*p));
            out.push(' ');
            out.push_str(&atom(*a));
        }
        out
    }

    /// Parses `{b} p {} q {b,c}`.
    pub fn parse(text: &str, u: &Universe) -> Result<Self> {
        Self::parse_with(text, u, &|_| None)
    }

    /// Parses a guarded string where bare identifiers may name atoms via
    /// `alias` (used by automaton fixtures that name atoms `α`, `β`).
    pub fn parse_with(
        text: &str,
        u: &Universe,
        alias: &dyn Fn(&str) -> Option<Atom>,
    ) -> Result<Self> {
        let mut atoms = Vec::new();
        let mut actions = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let (item, tail) = if rest.starts_with('{') {
                let end = rest.find('}').ok_or_else(|| {
                    Error::MalformedGuardedString(format!("unterminated atom in `{text}`"))
                })?;
                rest.split_at(end + 1)
            } else {
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                rest.split_at(end)
            };
            rest = tail.trim_start();
            let expect_atom = atoms.len() == actions.len();
            if item.starts_with('{') {
                if !expect_atom {
                    return Err(Error::MalformedGuardedString(format!(
                        "two consecutive atoms in `{text}`"
                    )));
                }
                atoms.push(Atom::parse(item, u)?);
            } else if let Some(a) = alias(item).filter(|_| expect_atom) {
                atoms.push(a);
            } else if let Some(p) = u.action_id(item).filter(|_| !expect_atom) {
                actions.push(p);
            } else {
                return Err(Error::MalformedGuardedString(format!(
                    "unexpected `{item}` in `{text}`"
                )));
            }
        }
        GuardedString::new(atoms, actions)
    }
}

impl Ord for GuardedString {
    /// Shorter strings first (by action count), then lexicographically by
    /// the interleaved sequence of atoms and actions.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for i in 0..self.atoms.len() {
                let c = self.atoms[i].cmp(&other.atoms[i]).then_with(|| {
                    match (self.actions.get(i), other.actions.get(i)) {
                        (Some(p), Some(q)) => p.cmp(q),
                        _ => Ordering::Equal,
                    }
                });
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for GuardedString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite set of guarded strings, each with at most `bound` actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedLanguage {
    pub strings: BTreeSet<GuardedString>,
    pub bound: usize,
}

impl GuardedLanguage {
    /// All length-0 strings, i.e. the language of `1`.
    pub fn atoms(num_atoms: usize) -> Self {
        GuardedLanguage {
            strings: (0..num_atoms as u32)
                .map(|a| GuardedString::atom(Atom(a)))
                .collect(),
            bound: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, w: &GuardedString) -> bool {
        self.strings.contains(w)
    }
}

/// Fusion product `L1 ⋄ L2 = { wαx | wα ∈ L1, αx ∈ L2 }`.
pub fn fusion(l1: &GuardedLanguage, l2: &GuardedLanguage) -> GuardedLanguage {
    let mut by_first: BTreeMap<Atom, Vec<&GuardedString>> = BTreeMap::new();
    for x in &l2.strings {
        by_first.entry(x.first()).or_default().push(x);
    }
    let mut strings = BTreeSet::new();
    for w in &l1.strings {
        for x in by_first.get(&w.last()).into_iter().flatten() {
            strings.insert(w.fuse(x).expect("matching boundary"));
        }
    }
    GuardedLanguage {
        strings,
        bound: l1.bound + l2.bound,
    }
}

type Lang = HashSet<GuardedString>;

struct Bounded<'a> {
    n: usize,
    num_atoms: usize,
    limits: &'a Limits,
}

impl Bounded<'_> {
    fn guard(&self, l: Lang) -> Result<Lang> {
        if l.len() > self.limits.max_strings {
            Err(Error::ResourceLimit {
                what: "guarded strings",
                limit: self.limits.max_strings,
            })
        } else {
            Ok(l)
        }
    }

    fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.num_atoms as u32).map(Atom)
    }

    fn fuse(&self, l1: &Lang, l2: &Lang) -> Result<Lang> {
        let mut by_first: HashMap<Atom, Vec<&GuardedString>> = HashMap::new();
        for x in l2 {
            by_first.entry(x.first()).or_default().push(x);
        }
        for xs in by_first.values_mut() {
            xs.sort_unstable_by_key(|x| x.len());
        }
        let mut out = Lang::new();
        for w in l1 {
            let Some(room) = self.n.checked_sub(w.len()) else {
                continue;
            };
            for x in by_first.get(&w.last()).into_iter().flatten() {
                if x.len() > room {
                    break;
                }
                out.insert(w.fuse(x).expect("matching boundary"));
            }
            if out.len() > self.limits.max_strings {
                return self.guard(out);
            }
        }
        Ok(out)
    }

    fn lang(&self, e: &KatExp) -> Result<Lang> {
        match e {
            KatExp::Test(b) => Ok(self
                .atoms()
                .filter(|a| eval(b, *a))
                .map(GuardedString::atom)
                .collect()),
            KatExp::Act(p) => {
                let mut out = Lang::new();
                if self.n >= 1 {
                    for a in self.atoms() {
                        for b in self.atoms() {
                            out.insert(GuardedString {
                                atoms: vec![a, b],
                                actions: vec![*p],
                            });
                        }
                    }
                }
                self.guard(out)
            }
            KatExp::Plus(e, f) => {
                let mut l = self.lang(e)?;
                l.extend(self.lang(f)?);
                self.guard(l)
            }
            KatExp::Seq(e, f) => {
                let l1 = self.lang(e)?;
                if l1.is_empty() {
                    return Ok(l1);
                }
                self.fuse(&l1, &self.lang(f)?)
            }
            KatExp::Star(e) => {
                let body = self.lang(e)?;
                // L^(0) = At, then L^(k+1) = L^(k) ⋄ L on the new strings only.
                let mut acc: Lang = self.atoms().map(GuardedString::atom).collect();
                let mut frontier = acc.clone();
                while !frontier.is_empty() {
                    let next = self.fuse(&frontier, &body)?;
                    frontier = next.into_iter().filter(|w| !acc.contains(w)).collect();
                    acc.extend(frontier.iter().cloned());
                    acc = self.guard(acc)?;
                }
                Ok(acc)
            }
        }
    }
}

/// `{ w ∈ ⟦e⟧ | w has at most n actions }`, with every intermediate language
/// truncated at `n` actions.
pub fn lang_bounded(
    e: &KatExp,
    n: usize,
    u: &Universe,
    limits: &Limits,
) -> Result<GuardedLanguage> {
    limits.check_tests(u.tests().len())?;
    let strings = Bounded {
        n,
        num_atoms: u.num_atoms(),
        limits,
    }
    .lang(e)?;
    Ok(GuardedLanguage {
        strings: strings.into_iter().collect(),
        bound: n,
    })
}

/// Whether `w ∈ ⟦e⟧`.
///
/// Decided directly from the inductive definition on substrings of `w`
/// rather than by enumerating the bounded language; the two agree
/// (see the tests below).
pub fn membership(e: &KatExp, w: &GuardedString, u: &Universe, limits: &Limits) -> Result<bool> {
    limits.check_tests(u.tests().len())?;
    Ok(member(e, w, 0, w.len()))
}

/// Membership of the substring of `w` between atom positions `i` and `j`.
fn member(e: &KatExp, w: &GuardedString, i: usize, j: usize) -> bool {
    match e {
        KatExp::Test(b) => i == j && eval(b, w.atoms[i]),
        KatExp::Act(p) => j == i + 1 && w.actions[i] == *p,
        KatExp::Plus(e, f) => member(e, w, i, j) || member(f, w, i, j),
        KatExp::Seq(e, f) => (i..=j).any(|k| member(e, w, i, k) && member(f, w, k, j)),
        // Iterations that perform no action only filter the boundary atom,
        // which the star's own length-0 case already admits.
        KatExp::Star(body) => {
            i == j || (i + 1..=j).any(|k| member(body, w, i, k) && member(e, w, k, j))
        }
    }
}

/// A binary relation on the states `0..n` of an interpretation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            pairs: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            n,
            pairs: (0..n).map(|s| (s, s)).collect(),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Relation {
            n,
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.pairs.contains(&(s, t))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// `self` followed by `other`: `{(s, u) | (s, t) ∈ self, (t, u) ∈ other}`.
    pub fn then(&self, other: &Relation) -> Relation {
        let mut pairs = BTreeSet::new();
        for &(s, t) in &self.pairs {
            for &(_, u) in other.pairs.range((t, 0)..=(t, usize::MAX)) {
                pairs.insert((s, u));
            }
        }
        Relation { n: self.n, pairs }
    }

    /// Reflexive-transitive closure by naive fixpoint iteration.
    pub fn star(&self) -> Relation {
        let mut acc = Relation::identity(self.n);
        loop {
            let next = acc.union(&acc.then(self));
            if next == acc {
                return acc;
            }
            acc = next;
        }
    }

    /// No state has two distinct successors.
    pub fn is_partial_function(&self) -> bool {
        self.pairs
            .iter()
            .zip(self.pairs.iter().skip(1))
            .all(|(a, b)| a.0 != b.0)
    }
}

/// A finite model of the primitive symbols, as read from JSON:
///
/// ```json
/// { "states": ["s0","s1"], "functional": true,
///   "tau": {"b": ["s0"]}, "sigma": {"p": [["s0","s1"]]} }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub states: Vec<String>,
    #[serde(default)]
    pub functional: bool,
    #[serde(default)]
    pub tau: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub sigma: BTreeMap<String, Vec<(String, String)>>,
}

/// An interpretation resolved against a universe.
#[derive(Debug, Clone)]
pub struct Model {
    n: usize,
    functional: bool,
    tau: Vec<Option<Vec<bool>>>,
    sigma: Vec<Option<Relation>>,
    test_names: Vec<String>,
    action_names: Vec<String>,
}

impl Interpretation {
    pub fn from_json(text: &str) -> Result<Self> {
        let interp: Interpretation = serde_json::from_str(text)?;
        interp.validate()?;
        Ok(interp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::InvalidInterpretation(format!("unknown state `{name}`")))
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(Error::InvalidInterpretation(format!(
                    "duplicate state `{s}`"
                )));
            }
        }
        for members in self.tau.values() {
            for s in members {
                self.state_index(s)?;
            }
        }
        for (p, pairs) in &self.sigma {
            let mut succ: BTreeMap<&str, &str> = BTreeMap::new();
            for (s, t) in pairs {
                self.state_index(s)?;
                self.state_index(t)?;
                if self.functional {
                    if let Some(prev) = succ.insert(s, t) {
                        if prev != t {
                            return Err(Error::InvalidInterpretation(format!(
                                "`{p}` is not a partial function at state `{s}`"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Resolves symbol names against `u`. Symbols of `u` the interpretation
    /// does not mention stay unbound and are reported when used.
    pub fn resolve(&self, u: &Universe) -> Result<Model> {
        self.validate()?;
        let n = self.states.len();
        let mut tau = vec![None; u.tests().len()];
        for (name, members) in &self.tau {
            if let Some(t) = u.test_id(name) {
                let mut holds = vec![false; n];
                for s in members {
                    holds[self.state_index(s)?] = true;
                }
                tau[t.0] = Some(holds);
            }
        }
        let mut sigma = vec![None; u.actions().len()];
        for (name, pairs) in &self.sigma {
            if let Some(p) = u.action_id(name) {
                let mut rel = Relation::empty(n);
                for (s, t) in pairs {
                    rel.pairs
                        .insert((self.state_index(s)?, self.state_index(t)?));
                }
                sigma[p.0] = Some(rel);
            }
        }
        Ok(Model {
            n,
            functional: self.functional,
            tau,
            sigma,
            test_names: u.tests().to_vec(),
            action_names: u.actions().to_vec(),
        })
    }

    /// JSON rendering of a relation over this interpretation's states:
    /// a map from state to successor when `functional`, otherwise from state
    /// to the list of successors. States without successors are omitted.
    pub fn relation_json(&self, r: &Relation) -> serde_json::Value {
        let mut out = serde_json::Map::new();
        let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(s, t) in r.pairs() {
            grouped.entry(s).or_default().push(t);
        }
        for (s, ts) in grouped {
            let value = if self.functional && ts.len() == 1 {
                serde_json::Value::String(self.states[ts[0]].clone())
            } else {
                ts.iter().map(|&t| self.states[t].clone()).collect()
            };
            out.insert(self.states[s].clone(), value);
        }
        serde_json::Value::Object(out)
    }
}

impl Model {
    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn is_functional(&self) -> bool {
        self.functional
    }

    fn test_holds(&self, b: &BExp, s: usize) -> Result<bool> {
        Ok(match b {
            BExp::Zero => false,
            BExp::One => true,
            BExp::Test(t) => self.tau[t.0]
                .as_ref()
                .ok_or_else(|| Error::MissingSymbol(self.test_names[t.0].clone()))?[s],
            BExp::Or(l, r) => self.test_holds(l, s)? || self.test_holds(r, s)?,
            BExp::And(l, r) => self.test_holds(l, s)? && self.test_holds(r, s)?,
            BExp::Not(inner) => !self.test_holds(inner, s)?,
        })
    }

    /// `⟦b⟧ = {(s, s) | s satisfies b}`.
    pub fn test_relation(&self, b: &BExp) -> Result<Relation> {
        let mut pairs = BTreeSet::new();
        for s in 0..self.n {
            if self.test_holds(b, s)? {
                pairs.insert((s, s));
            }
        }
        Ok(Relation { n: self.n, pairs })
    }
}

/// Relational semantics of a KAT expression.
pub fn rel_sem(e: &KatExp, m: &Model) -> Result<Relation> {
    match e {
        KatExp::Test(b) => m.test_relation(b),
        KatExp::Act(p) => m.sigma[p.0]
            .clone()
            .ok_or_else(|| Error::MissingSymbol(m.action_names[p.0].clone())),
        KatExp::Plus(e, f) => Ok(rel_sem(e, m)?.union(&rel_sem(f, m)?)),
        KatExp::Seq(e, f) => Ok(rel_sem(e, m)?.then(&rel_sem(f, m)?)),
        KatExp::Star(e) => Ok(rel_sem(e, m)?.star()),
    }
}

/// Relational semantics of a GKAT expression via its KAT embedding. Under a
/// functional model the result must be a partial function.
pub fn rel_sem_gkat(e: &GkatExp, m: &Model) -> Result<Relation> {
    let r = rel_sem(&e.embed(), m)?;
    if m.functional && !r.is_partial_function() {
        return Err(Error::FunctionalityViolation(format!(
            "program of size {}",
            e.size()
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::TestId;
    use proptest::prelude::*;

    fn u1() -> Universe {
        Universe::new(["t"], ["p", "q"]).unwrap()
    }

    fn gs(atoms: &[u32], actions: &[usize]) -> GuardedString {
        GuardedString::new(
            atoms.iter().map(|&a| Atom(a)).collect(),
            actions.iter().map(|&p| ActionId(p)).collect(),
        )
        .unwrap()
    }

    fn lang(strings: &[GuardedString], bound: usize) -> GuardedLanguage {
        GuardedLanguage {
            strings: strings.iter().cloned().collect(),
            bound,
        }
    }

    #[test]
    fn fusion_examples() {
        let l1 = lang(&[gs(&[0, 1], &[0])], 1);
        let l2 = lang(&[gs(&[1, 0], &[1])], 1);
        let fused = fusion(&l1, &l2);
        assert_eq!(
            fused.strings.iter().collect::<Vec<_>>(),
            [&gs(&[0, 1, 0], &[0, 1])]
        );
        assert_eq!(fused.bound, 2);
        let l3 = lang(&[gs(&[0, 0], &[1])], 1);
        assert!(fusion(&l1, &l3).is_empty());
    }

    #[test]
    fn fusion_with_atoms_is_identity() {
        // At ⋄ L = L, checked against the set-builder definition directly.
        let l = lang(
            &[gs(&[0], &[]), gs(&[1, 0], &[0]), gs(&[3, 2, 1], &[1, 0])],
            2,
        );
        let at = GuardedLanguage::atoms(4);
        let fused = fusion(&at, &l);
        let mut expected = BTreeSet::new();
        for w in &at.strings {
            for x in &l.strings {
                if w.last() == x.first() {
                    let mut atoms = w.atoms.clone();
                    atoms.extend_from_slice(&x.atoms[1..]);
                    let mut actions = w.actions.clone();
                    actions.extend_from_slice(&x.actions);
                    expected.insert(GuardedString::new(atoms, actions).unwrap());
                }
            }
        }
        assert_eq!(fused.strings, expected);
        assert_eq!(fused.strings, l.strings);
    }

    #[test]
    fn lang_bounded_examples() {
        let u = u1();
        let lim = Limits::default();
        let one = lang_bounded(&KatExp::one(), 3, &u, &lim).unwrap();
        assert_eq!(one.strings, GuardedLanguage::atoms(2).strings);
        let p = lang_bounded(&KatExp::Act(ActionId(0)), 3, &u, &lim).unwrap();
        assert_eq!(p.len(), 4);
        let diverge = GkatExp::while_do(BExp::One, GkatExp::Act(ActionId(0))).embed();
        assert!(lang_bounded(&diverge, 5, &u, &lim).unwrap().is_empty());
    }

    #[test]
    fn string_ceiling_is_an_error() {
        let u = u1();
        let lim = Limits {
            max_strings: 50,
            ..Limits::default()
        };
        let e = KatExp::Act(ActionId(0))
            .plus(KatExp::Act(ActionId(1)))
            .star();
        assert!(matches!(
            lang_bounded(&e, 6, &u, &lim),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let u = u1();
        let lim = Limits::default();
        let b = BExp::Test(TestId(0));
        let w = GkatExp::while_do(b, GkatExp::Act(ActionId(0))).embed();
        assert!(membership(&w, &gs(&[0], &[]), &u, &lim).unwrap());
        assert!(!membership(&w, &gs(&[1], &[]), &u, &lim).unwrap());
        assert!(!membership(&KatExp::zero(), &gs(&[0, 1], &[0]), &u, &lim).unwrap());
        assert!(membership(&KatExp::Act(ActionId(0)), &gs(&[1, 0], &[0]), &u, &lim).unwrap());
    }

    #[test]
    fn guarded_string_text() {
        let u = Universe::new(["b", "c"], ["p", "q"]).unwrap();
        let w = gs(&[1, 0, 3], &[0, 1]);
        assert_eq!(w.render(&u), "{b} p {} q {b,c}");
        assert_eq!(GuardedString::parse("{b} p {} q {b, c}", &u).unwrap(), w);
        assert!(GuardedString::parse("{b} p", &u).is_err());
        assert!(GuardedString::parse("{b} {c}", &u).is_err());
    }

    fn interp() -> Interpretation {
        Interpretation::from_json(
            r#"{ "states": ["s0","s1","s2"], "functional": true,
                 "tau": {"t": ["s0", "s2"]},
                 "sigma": {"p": [["s0","s1"],["s1","s2"]], "q": [["s1","s0"],["s2","s2"]]} }"#,
        )
        .unwrap()
    }

    #[test]
    fn guarded_branch_relation() {
        let u = u1();
        let m = interp().resolve(&u).unwrap();
        let t = BExp::Test(TestId(0));
        let e = KatExp::Test(t.clone())
            .seq(KatExp::Act(ActionId(0)))
            .plus(KatExp::Test(t.not()).seq(KatExp::Act(ActionId(1))));
        // s0 satisfies t and takes p; s1 does not and takes q; s2 satisfies
        // t but p is undefined there.
        assert_eq!(
            rel_sem(&e, &m).unwrap(),
            Relation::from_pairs(3, [(0, 1), (1, 0)])
        );
        assert_eq!(rel_sem(&KatExp::one(), &m).unwrap(), Relation::identity(3));
    }

    #[test]
    fn gkat_relations() {
        let u = u1();
        let m = interp().resolve(&u).unwrap();
        let t = BExp::Test(TestId(0));
        assert_eq!(
            rel_sem_gkat(&GkatExp::Test(t), &m).unwrap(),
            Relation::from_pairs(3, [(0, 0), (2, 2)])
        );
        let forever = GkatExp::while_do(BExp::One, GkatExp::Act(ActionId(0)));
        assert!(rel_sem_gkat(&forever, &m).unwrap().is_empty());
        assert!(rel_sem(&forever.embed(), &m).unwrap().is_empty());
        let pq = GkatExp::Act(ActionId(0)).seq(GkatExp::Act(ActionId(1)));
        // p then q, composed by hand: s0 -p-> s1 -q-> s0, s1 -p-> s2 -q-> s2.
        assert_eq!(
            rel_sem_gkat(&pq, &m).unwrap(),
            Relation::from_pairs(3, [(0, 0), (1, 2)])
        );
    }

    #[test]
    fn missing_symbol_is_reported() {
        let u = Universe::new(["t"], ["p", "r"]).unwrap();
        let m = interp().resolve(&u).unwrap();
        assert!(matches!(
            rel_sem(&KatExp::Act(ActionId(1)), &m),
            Err(Error::MissingSymbol(s)) if s == "r"
        ));
    }

    #[test]
    fn invalid_interpretations() {
        assert!(Interpretation::from_json(
            r#"{"states":["a"],"functional":true,"sigma":{"p":[["a","b"]]}}"#
        )
        .is_err());
        assert!(Interpretation::from_json(
            r#"{"states":["a","b"],"functional":true,"sigma":{"p":[["a","a"],["a","b"]]}}"#
        )
        .is_err());
        assert!(Interpretation::from_json(
            r#"{"states":["a","b"],"functional":false,"sigma":{"p":[["a","a"],["a","b"]]}}"#
        )
        .is_ok());
    }

    #[test]
    fn relation_json_shapes() {
        let i = interp();
        let r = Relation::from_pairs(3, [(0, 1)]);
        assert_eq!(i.relation_json(&r).to_string(), r#"{"s0":"s1"}"#);
        assert_eq!(i.relation_json(&Relation::empty(3)).to_string(), "{}");
    }

    fn kat_exp() -> impl Strategy<Value = KatExp> {
        let leaf = prop_oneof![
            Just(KatExp::zero()),
            Just(KatExp::one()),
            Just(KatExp::Test(BExp::Test(TestId(0)))),
            Just(KatExp::Test(BExp::Test(TestId(0)).not())),
            (0..2usize).prop_map(|p| KatExp::Act(ActionId(p))),
        ];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.plus(b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.seq(b)),
                inner.prop_map(KatExp::star),
            ]
        })
    }

    proptest! {
        #[test]
        fn bounded_languages_grow_monotonically(e in kat_exp(), n in 0usize..3) {
            let u = u1();
            let lim = Limits::default();
            let small = lang_bounded(&e, n, &u, &lim).unwrap();
            let big = lang_bounded(&e, n + 1, &u, &lim).unwrap();
            prop_assert!(small.strings.is_subset(&big.strings));
            for w in big.strings.difference(&small.strings) {
                prop_assert!(w.len() > n);
            }
        }

        #[test]
        fn membership_agrees_with_enumeration(e in kat_exp()) {
            let u = u1();
            let lim = Limits::default();
            let l = lang_bounded(&e, 2, &u, &lim).unwrap();
            for a0 in 0..2u32 {
                prop_assert_eq!(membership(&e, &gs(&[a0], &[]), &u, &lim).unwrap(),
                                l.contains(&gs(&[a0], &[])));
                for a1 in 0..2u32 {
                    for p in 0..2usize {
                        let w = gs(&[a0, a1], &[p]);
                        prop_assert_eq!(membership(&e, &w, &u, &lim).unwrap(), l.contains(&w));
                        for (a2, q) in (0..2u32).flat_map(|a| (0..2usize).map(move |q| (a, q))) {
                            let w = gs(&[a0, a1, a2], &[p, q]);
                            prop_assert_eq!(membership(&e, &w, &u, &lim).unwrap(), l.contains(&w));
                        }
                    }
                }
            }
        }
    }
}
