//! Automata on guarded strings.
//!
//! Two representations are used:
//!
//! * [`DetAutomaton`]: deterministic in the GKAT sense. Every (state, atom)
//!   pair has exactly one [`Outcome`]: accept, reject, or a single step with
//!   one action to one state. GKAT expressions compile to these.
//! * [`GuardedDfa`]: deterministic in the classical sense over the alphabet
//!   of (atom, action) pairs. Every (state, atom) pair has an acceptance bit
//!   and at most one successor per action. KAT expressions compile to these;
//!   a KAT program may both accept and step, or step with several actions,
//!   at the same atom. Every `DetAutomaton` converts losslessly to a
//!   `GuardedDfa`, which is what the equivalence checker walks.

mod export;
mod gkat;
mod kat;

pub use export::{dfa_to_dot, from_json, to_dot, to_json};
pub(crate) use gkat::build_gkat_unlabelled;
pub use gkat::{build_gkat, derivative, Derivative};
pub use kat::{build_kat, determinize, KatNfa};

use std::collections::{BTreeMap, VecDeque};

use crate::atoms::{Atom, AtomSet};
use crate::error::{Error, Result};
use crate::semantics::GuardedString;
use crate::syntax::{ActionId, Universe};

pub type StateId = usize;

/// What a deterministic automaton does at a state when it reads an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accept,
    Reject,
    Step(ActionId, StateId),
}

/// A GKAT-deterministic automaton with a dense transition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetAutomaton {
    universe: Universe,
    initial: StateId,
    num_states: usize,
    /// `delta[s * num_atoms + atom]`.
    delta: Vec<Outcome>,
    labels: Vec<Option<String>>,
    atom_names: BTreeMap<Atom, String>,
    reachable: Vec<StateId>,
}

impl DetAutomaton {
    /// Builds an automaton from one row of outcomes per state (indexed by
    /// atom). Fails if a row is not total or a step target does not exist.
    pub fn new(
        universe: Universe,
        initial: StateId,
        rows: Vec<Vec<Outcome>>,
        labels: Vec<Option<String>>,
    ) -> Result<Self> {
        let num_atoms = universe.num_atoms();
        let num_states = rows.len();
        if initial >= num_states {
            return Err(Error::MalformedAutomaton(format!(
                "initial state {initial} out of range ({num_states} states)"
            )));
        }
        let mut delta = Vec::with_capacity(num_states * num_atoms);
        for (s, row) in rows.into_iter().enumerate() {
            if row.len() != num_atoms {
                return Err(Error::MalformedAutomaton(format!(
                    "state {s} has {} outcomes, expected one per atom ({num_atoms})",
                    row.len()
                )));
            }
            for o in &row {
                if let Outcome::Step(p, t) = o {
                    if *t >= num_states || p.0 >= universe.actions().len() {
                        return Err(Error::MalformedAutomaton(format!(
                            "state {s} steps to an unknown state or action"
                        )));
                    }
                }
            }
            delta.extend(row);
        }
        let labels = if labels.is_empty() {
            vec![None; num_states]
        } else if labels.len() == num_states {
            labels
        } else {
            return Err(Error::MalformedAutomaton(
                "one label per state expected".into(),
            ));
        };
        let mut a = DetAutomaton {
            universe,
            initial,
            num_states,
            delta,
            labels,
            atom_names: BTreeMap::new(),
            reachable: Vec::new(),
        };
        a.reachable = a.compute_reachable();
        Ok(a)
    }

    fn compute_reachable(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for o in self.row(s) {
                if let Outcome::Step(_, t) = *o {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        (0..self.num_states).filter(|&s| seen[s]).collect()
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_atoms(&self) -> usize {
        self.universe.num_atoms()
    }

    pub fn outcome(&self, s: StateId, atom: Atom) -> Outcome {
        self.delta[s * self.num_atoms() + atom.index()]
    }

    pub fn row(&self, s: StateId) -> &[Outcome] {
        let n = self.num_atoms();
        &self.delta[s * n..(s + 1) * n]
    }

    pub fn label(&self, s: StateId) -> Option<&str> {
        self.labels[s].as_deref()
    }

    /// States reachable from the initial state, in increasing order.
    pub fn reachable(&self) -> &[StateId] {
        &self.reachable
    }

    /// Display names for atoms (e.g. `α`); atoms without one render as `{..}`.
    pub fn atom_names(&self) -> &BTreeMap<Atom, String> {
        &self.atom_names
    }

    pub fn with_atom_names(mut self, names: BTreeMap<Atom, String>) -> Self {
        self.atom_names = names;
        self
    }

    pub fn atom_name(&self, atom: Atom) -> String {
        self.atom_names
            .get(&atom)
            .cloned()
            .unwrap_or_else(|| atom.render(&self.universe))
    }

    /// Parses a guarded string, resolving this automaton's atom names.
    pub fn parse_guarded_string(&self, text: &str) -> Result<GuardedString> {
        GuardedString::parse_with(text, &self.universe, &|name| {
            self.atom_names
                .iter()
                .find(|(_, n)| n.as_str() == name)
                .map(|(a, _)| *a)
        })
    }

    /// Whether the guarded string `w` is accepted from state `s`.
    pub fn accepts(&self, s: StateId, w: &GuardedString) -> bool {
        let mut state = s;
        for (atom, action) in w.steps() {
            match self.outcome(state, atom) {
                Outcome::Step(p, t) if p == action => state = t,
                _ => return false,
            }
        }
        self.outcome(state, w.last()) == Outcome::Accept
    }

    /// States from which some accepting outcome is reachable.
    pub fn live_states(&self) -> Vec<bool> {
        let mut live = vec![false; self.num_states];
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states];
        let mut queue = VecDeque::new();
        for (s, is_live) in live.iter_mut().enumerate() {
            for o in self.row(s) {
                match *o {
                    Outcome::Accept if !*is_live => {
                        *is_live = true;
                        queue.push_back(s);
                    }
                    Outcome::Step(_, t) => preds[t].push(s),
                    _ => {}
                }
            }
        }
        while let Some(t) = queue.pop_front() {
            for &s in &preds[t] {
                if !live[s] {
                    live[s] = true;
                    queue.push_back(s);
                }
            }
        }
        live
    }

    /// Rewrites every step into a dead state (one that can never accept) to
    /// `Reject`. The guarded-string language is unchanged; afterwards
    /// bisimilarity coincides with language equivalence.
    pub fn normalize_live(&self) -> DetAutomaton {
        let live = self.live_states();
        let mut out = self.clone();
        for o in &mut out.delta {
            if let Outcome::Step(_, t) = *o {
                if !live[t] {
                    *o = Outcome::Reject;
                }
            }
        }
        out.reachable = out.compute_reachable();
        out
    }

    /// The same automaton in the classical representation.
    pub fn to_dfa(&self) -> GuardedDfa {
        let n = self.num_atoms();
        let mut accept = vec![AtomSet::empty(n); self.num_states];
        let mut moves = Vec::with_capacity(self.delta.len());
        for (s, accepting) in accept.iter_mut().enumerate() {
            for (i, o) in self.row(s).iter().enumerate() {
                match *o {
                    Outcome::Accept => {
                        accepting.insert(Atom(i as u32));
                        moves.push(Vec::new());
                    }
                    Outcome::Reject => moves.push(Vec::new()),
                    Outcome::Step(p, t) => moves.push(vec![(p, t)]),
                }
            }
        }
        GuardedDfa {
            universe: self.universe.clone(),
            initial: self.initial,
            num_states: self.num_states,
            accept,
            moves,
            labels: self.labels.clone(),
        }
    }
}

/// A classically deterministic automaton on guarded strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedDfa {
    universe: Universe,
    initial: StateId,
    num_states: usize,
    accept: Vec<AtomSet>,
    /// `moves[s * num_atoms + atom]`, sorted by action, one entry per action.
    moves: Vec<Vec<(ActionId, StateId)>>,
    labels: Vec<Option<String>>,
}

impl GuardedDfa {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_atoms(&self) -> usize {
        self.universe.num_atoms()
    }

    pub fn accepts_atom(&self, s: StateId, atom: Atom) -> bool {
        self.accept[s].contains(atom)
    }

    pub fn accepting_atoms(&self, s: StateId) -> &AtomSet {
        &self.accept[s]
    }

    pub fn moves(&self, s: StateId, atom: Atom) -> &[(ActionId, StateId)] {
        &self.moves[s * self.num_atoms() + atom.index()]
    }

    pub fn successor(&self, s: StateId, atom: Atom, action: ActionId) -> Option<StateId> {
        self.moves(s, atom)
            .iter()
            .find(|(p, _)| *p == action)
            .map(|(_, t)| *t)
    }

    pub fn label(&self, s: StateId) -> Option<&str> {
        self.labels[s].as_deref()
    }

    pub fn accepts(&self, s: StateId, w: &GuardedString) -> bool {
        let mut state = s;
        for (atom, action) in w.steps() {
            match self.successor(state, atom, action) {
                Some(t) => state = t,
                None => return false,
            }
        }
        self.accepts_atom(state, w.last())
    }

    /// Number of states reachable from the initial state.
    pub fn reachable_count(&self) -> usize {
        let mut seen = vec![false; self.num_states];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        let mut count = 0;
        while let Some(s) = stack.pop() {
            count += 1;
            for a in Atom::all(self.universe.tests().len()) {
                for &(_, t) in self.moves(s, a) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        count
    }

    pub fn live_states(&self) -> Vec<bool> {
        let mut live: Vec<bool> = self.accept.iter().map(|a| !a.is_empty()).collect();
        let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states];
        let atoms = self.num_atoms();
        for s in 0..self.num_states {
            for i in 0..atoms {
                for &(_, t) in &self.moves[s * atoms + i] {
                    preds[t].push(s);
                }
            }
        }
        let mut queue: VecDeque<StateId> = (0..self.num_states).filter(|&s| live[s]).collect();
        while let Some(t) = queue.pop_front() {
            for &s in &preds[t] {
                if !live[s] {
                    live[s] = true;
                    queue.push_back(s);
                }
            }
        }
        live
    }

    /// Drops every transition into a dead state; the language is unchanged.
    pub fn normalize_live(&self) -> GuardedDfa {
        let live = self.live_states();
        let mut out = self.clone();
        for m in &mut out.moves {
            m.retain(|&(_, t)| live[t]);
        }
        out
    }
}
