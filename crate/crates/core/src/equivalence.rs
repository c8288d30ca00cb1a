//! Equivalence checking by a product walk over two automata.
//!
//! Equivalence (bisimilarity, and language equivalence after live-state
//! normalization) is decided with a Hopcroft–Karp union-find: related states
//! are merged, and each merged pair is explored once per atom. When the
//! automata differ, a breadth-first walk over the product extracts a
//! shortest, lexicographically least witness. Inclusion is not an
//! equivalence relation, so it uses the plain breadth-first walk directly.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::atoms::Atom;
use crate::automata::{build_gkat_unlabelled, build_kat, DetAutomaton, GuardedDfa, StateId};
use crate::error::{Error, Limits, Result};
use crate::semantics::GuardedString;
use crate::syntax::{ActionId, GkatExp, KatExp, Program, Universe};

/// Which relation between two programs is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Bisimilarity of the automata as built.
    #[serde(rename = "bisim")]
    Bisim,
    /// Equality of guarded languages.
    #[serde(rename = "lang")]
    Lang,
    /// Inclusion of the left language in the right one.
    #[serde(rename = "incl")]
    LangInclusion,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Bisim => "bisim",
            Mode::Lang => "lang",
            Mode::LangInclusion => "incl",
        }
    }

    fn is_language(self) -> bool {
        self != Mode::Bisim
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// What one automaton can do at a state on a given atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Behavior {
    pub accepts: bool,
    /// Actions with a successor, in ascending order.
    pub actions: Vec<ActionId>,
}

impl Behavior {
    fn of(a: &GuardedDfa, s: StateId, atom: Atom) -> Self {
        Behavior {
            accepts: a.accepts_atom(s, atom),
            actions: a.moves(s, atom).iter().map(|(p, _)| *p).collect(),
        }
    }

    fn describe(&self, u: &Universe) -> String {
        let names: Vec<&str> = self.actions.iter().map(|&p| u.action_name(p)).collect();
        match (self.accepts, names.is_empty()) {
            (true, true) => "accepts".to_string(),
            (false, true) => "rejects".to_string(),
            (false, false) => format!("steps with {}", names.join(" or ")),
            (true, false) => format!("accepts or steps with {}", names.join(" or ")),
        }
    }
}

/// The first point at which the two automata disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Divergence {
    /// One side accepts the atom and the other does not.
    AcceptMismatch {
        atom: Atom,
        accepting: Side,
        left: Behavior,
        right: Behavior,
    },
    /// Both sides step, but with different actions.
    ActionMismatch {
        atom: Atom,
        left: Behavior,
        right: Behavior,
    },
    /// One side steps while the other has no step at all.
    StepVsStop {
        atom: Atom,
        stopped: Side,
        left: Behavior,
        right: Behavior,
    },
}

impl Divergence {
    pub fn atom(&self) -> Atom {
        match self {
            Divergence::AcceptMismatch { atom, .. }
            | Divergence::ActionMismatch { atom, .. }
            | Divergence::StepVsStop { atom, .. } => *atom,
        }
    }

    pub fn left(&self) -> &Behavior {
        match self {
            Divergence::AcceptMismatch { left, .. }
            | Divergence::ActionMismatch { left, .. }
            | Divergence::StepVsStop { left, .. } => left,
        }
    }

    pub fn right(&self) -> &Behavior {
        match self {
            Divergence::AcceptMismatch { right, .. }
            | Divergence::ActionMismatch { right, .. }
            | Divergence::StepVsStop { right, .. } => right,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Divergence::AcceptMismatch { .. } => "acceptMismatch",
            Divergence::ActionMismatch { .. } => "actionMismatch",
            Divergence::StepVsStop { .. } => "stepVsStop",
        }
    }
}

/// Evidence of inequivalence: the steps both sides take in lockstep, the
/// point where they disagree, and in the language modes a guarded string
/// accepted by exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub trace: Vec<(Atom, ActionId)>,
    pub divergence: Divergence,
    pub string: Option<(GuardedString, Side)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    Inequivalent(Witness),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Equivalent => None,
            Verdict::Inequivalent(w) => Some(w),
        }
    }
}

/// Work done by a check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// State pairs taken off the worklist by the deciding walk.
    pub pairs_explored: usize,
    pub left_states: usize,
    pub right_states: usize,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            x = std::mem::replace(&mut self.parent[x], root);
        }
        root
    }

    /// Merges the classes of `x` and `y`; false if they were already merged.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Compares the two sides at one atom. With `inclusion`, only what the left
/// side does has to be matched by the right side.
fn diverges(
    a: &GuardedDfa,
    s: StateId,
    b: &GuardedDfa,
    t: StateId,
    atom: Atom,
    inclusion: bool,
) -> Option<Divergence> {
    let left = Behavior::of(a, s, atom);
    let right = Behavior::of(b, t, atom);
    let (accept_ok, actions_ok) = if inclusion {
        (
            !left.accepts || right.accepts,
            left.actions.iter().all(|p| right.actions.contains(p)),
        )
    } else {
        (left.accepts == right.accepts, left.actions == right.actions)
    };
    if accept_ok && actions_ok {
        return None;
    }
    Some(if actions_ok {
        let accepting = if left.accepts {
            Side::Left
        } else {
            Side::Right
        };
        Divergence::AcceptMismatch {
            atom,
            accepting,
            left,
            right,
        }
    } else if left.actions.is_empty() || right.actions.is_empty() {
        let stopped = if left.actions.is_empty() {
            Side::Left
        } else {
            Side::Right
        };
        Divergence::StepVsStop {
            atom,
            stopped,
            left,
            right,
        }
    } else {
        Divergence::ActionMismatch { atom, left, right }
    })
}

/// Hopcroft–Karp: true iff the states are related, plus the number of pairs
/// explored.
fn union_find_walk(a: &GuardedDfa, s: StateId, b: &GuardedDfa, t: StateId) -> (bool, usize) {
    let n = a.num_states();
    let mut uf = UnionFind::new(n + b.num_states());
    let mut queue = VecDeque::from([(s, t)]);
    uf.union(s, n + t);
    let mut explored = 0;
    let tests = a.universe().tests().len();
    while let Some((x, y)) = queue.pop_front() {
        explored += 1;
        for atom in Atom::all(tests) {
            if a.accepts_atom(x, atom) != b.accepts_atom(y, atom) {
                return (false, explored);
            }
            let (mx, my) = (a.moves(x, atom), b.moves(y, atom));
            if mx.len() != my.len() {
                return (false, explored);
            }
            for (&(p, x2), &(q, y2)) in mx.iter().zip(my) {
                if p != q {
                    return (false, explored);
                }
                if uf.union(x2, n + y2) {
                    queue.push_back((x2, y2));
                }
            }
        }
    }
    (true, explored)
}

/// Breadth-first walk over the product, visiting pairs in order of trace
/// length and then of trace (atoms numerically, actions by index). Returns
/// the first divergence and the trace leading to it, plus the number of
/// pairs explored.
/// A divergence, the trace reaching it, and the pair of states it occurs at.
type Found = (Vec<(Atom, ActionId)>, StateId, StateId, Divergence);

fn product_walk(
    a: &GuardedDfa,
    s: StateId,
    b: &GuardedDfa,
    t: StateId,
    inclusion: bool,
) -> (Option<Found>, usize) {
    struct Node {
        pair: (StateId, StateId),
        parent: Option<(usize, Atom, ActionId)>,
    }
    let tests = a.universe().tests().len();
    let mut nodes = vec![Node {
        pair: (s, t),
        parent: None,
    }];
    let mut seen: HashMap<(StateId, StateId), ()> = HashMap::from([((s, t), ())]);
    let mut next = 0;
    while next < nodes.len() {
        let (x, y) = nodes[next].pair;
        for atom in Atom::all(tests) {
            if let Some(d) = diverges(a, x, b, y, atom, inclusion) {
                let mut trace = Vec::new();
                let mut cur = next;
                while let Some((parent, atom, p)) = nodes[cur].parent {
                    trace.push((atom, p));
                    cur = parent;
                }
                trace.reverse();
                return (Some((trace, x, y, d)), next + 1);
            }
            for &(p, x2) in a.moves(x, atom) {
                // Under inclusion the right side may have extra actions.
                let Some(y2) = b.successor(y, atom, p) else {
                    continue;
                };
                if seen.insert((x2, y2), ()).is_none() {
                    nodes.push(Node {
                        pair: (x2, y2),
                        parent: Some((next, atom, p)),
                    });
                }
            }
        }
        next += 1;
    }
    (None, next)
}

/// Shortest accepted continuation from `s`: the steps taken and the final
/// atom. Atoms and actions are tried in ascending order.
fn shortest_accepted(a: &GuardedDfa, s: StateId) -> Option<(Vec<(Atom, ActionId)>, Atom)> {
    let tests = a.universe().tests().len();
    let mut parent: HashMap<StateId, Option<(StateId, Atom, ActionId)>> =
        HashMap::from([(s, None)]);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if let Some(atom) = a.accepting_atoms(x).iter().next() {
            let mut steps = Vec::new();
            let mut cur = x;
            while let Some((prev, atom, p)) = parent[&cur] {
                steps.push((atom, p));
                cur = prev;
            }
            steps.reverse();
            return Some((steps, atom));
        }
        for atom in Atom::all(tests) {
            for &(p, y) in a.moves(x, atom) {
                parent.entry(y).or_insert_with(|| {
                    queue.push_back(y);
                    Some((x, atom, p))
                });
            }
        }
    }
    None
}

/// A guarded string accepted by exactly one side, for automata whose states
/// are all live (as after normalization).
fn distinguishing_string(
    a: &GuardedDfa,
    x: StateId,
    b: &GuardedDfa,
    y: StateId,
    trace: &[(Atom, ActionId)],
    d: &Divergence,
) -> Option<(GuardedString, Side)> {
    let atom = d.atom();
    let (left, right) = (d.left(), d.right());
    if left.accepts != right.accepts {
        let side = if left.accepts {
            Side::Left
        } else {
            Side::Right
        };
        return Some((GuardedString::from_trace(trace, atom), side));
    }
    let only = |mine: &Behavior, theirs: &Behavior| {
        mine.actions
            .iter()
            .find(|p| !theirs.actions.contains(p))
            .copied()
    };
    let (side, p) = match (only(left, right), only(right, left)) {
        (Some(p), Some(q)) if q < p => (Side::Right, q),
        (Some(p), _) => (Side::Left, p),
        (None, Some(q)) => (Side::Right, q),
        (None, None) => return None,
    };
    let (dfa, state) = match side {
        Side::Left => (a, a.successor(x, atom, p)?),
        Side::Right => (b, b.successor(y, atom, p)?),
    };
    let (suffix, last) = shortest_accepted(dfa, state)?;
    let mut steps = trace.to_vec();
    steps.push((atom, p));
    steps.extend(suffix);
    Some((GuardedString::from_trace(&steps, last), side))
}

/// Decides `mode` between state `s` of `a` and state `t` of `b`. In the
/// language modes both automata are normalized first.
pub fn decide(
    a: &GuardedDfa,
    s: StateId,
    b: &GuardedDfa,
    t: StateId,
    mode: Mode,
) -> Result<(Verdict, Stats)> {
    if a.universe() != b.universe() {
        return Err(Error::UniverseMismatch(
            "the two automata are over different universes".to_string(),
        ));
    }
    for (dfa, state) in [(a, s), (b, t)] {
        if state >= dfa.num_states() {
            return Err(Error::MalformedAutomaton(format!(
                "state {state} out of range ({} states)",
                dfa.num_states()
            )));
        }
    }
    let (na, nb);
    let (a, b) = if mode.is_language() {
        na = a.normalize_live();
        nb = b.normalize_live();
        (&na, &nb)
    } else {
        (a, b)
    };
    let mut stats = Stats {
        pairs_explored: 0,
        left_states: a.num_states(),
        right_states: b.num_states(),
    };
    let inclusion = mode == Mode::LangInclusion;
    if !inclusion {
        let (related, explored) = union_find_walk(a, s, b, t);
        stats.pairs_explored = explored;
        if related {
            return Ok((Verdict::Equivalent, stats));
        }
    }
    let (found, explored) = product_walk(a, s, b, t, inclusion);
    if inclusion {
        stats.pairs_explored = explored;
    }
    let Some((trace, x, y, divergence)) = found else {
        // The union-find walk and the product walk compute the same relation.
        debug_assert!(inclusion);
        return Ok((Verdict::Equivalent, stats));
    };
    let string = if mode.is_language() {
        distinguishing_string(a, x, b, y, &trace, &divergence)
    } else {
        None
    };
    Ok((
        Verdict::Inequivalent(Witness {
            trace,
            divergence,
            string,
        }),
        stats,
    ))
}

/// Replays a witness against the automata it was computed from (as passed
/// to [`check_automata`]): both sides follow the trace, disagree at the
/// recorded atom exactly as recorded, and the guarded string, if any, is
/// accepted by the named side only.
pub fn validate_witness(a: &GuardedDfa, b: &GuardedDfa, mode: Mode, w: &Witness) -> bool {
    let (a, b) = if mode.is_language() {
        (a.normalize_live(), b.normalize_live())
    } else {
        (a.clone(), b.clone())
    };
    let (mut x, mut y) = (a.initial(), b.initial());
    for &(atom, p) in &w.trace {
        match (a.successor(x, atom, p), b.successor(y, atom, p)) {
            (Some(x2), Some(y2)) => (x, y) = (x2, y2),
            _ => return false,
        }
    }
    let d = &w.divergence;
    let replayed = diverges(&a, x, &b, y, d.atom(), mode == Mode::LangInclusion);
    if replayed.as_ref() != Some(d) {
        return false;
    }
    match &w.string {
        None => !mode.is_language(),
        Some((s, side)) => {
            let (in_a, in_b) = (a.accepts(a.initial(), s), b.accepts(b.initial(), s));
            match side {
                Side::Left => in_a && !in_b,
                Side::Right => in_b && !in_a,
            }
        }
    }
}

/// Bisimilarity of state `s1` of `a1` and state `s2` of `a2`.
pub fn bisim(a1: &DetAutomaton, s1: StateId, a2: &DetAutomaton, s2: StateId) -> Result<Verdict> {
    Ok(decide(&a1.to_dfa(), s1, &a2.to_dfa(), s2, Mode::Bisim)?.0)
}

/// Checks two automata from their initial states.
pub fn check_automata(a: &GuardedDfa, b: &GuardedDfa, mode: Mode) -> Result<(Verdict, Stats)> {
    decide(a, a.initial(), b, b.initial(), mode)
}

pub fn check_gkat_with_stats(
    e: &GkatExp,
    f: &GkatExp,
    u: &Universe,
    mode: Mode,
    limits: &Limits,
) -> Result<(Verdict, Stats)> {
    let a = build_gkat_unlabelled(e, u, limits)?.to_dfa();
    let b = build_gkat_unlabelled(f, u, limits)?.to_dfa();
    check_automata(&a, &b, mode)
}

/// Checks two GKAT programs through their deterministic automata.
pub fn check_gkat(
    e: &GkatExp,
    f: &GkatExp,
    u: &Universe,
    mode: Mode,
    limits: &Limits,
) -> Result<Verdict> {
    Ok(check_gkat_with_stats(e, f, u, mode, limits)?.0)
}

pub fn check_kat_with_stats(
    e: &KatExp,
    f: &KatExp,
    u: &Universe,
    mode: Mode,
    limits: &Limits,
) -> Result<(Verdict, Stats)> {
    let a = build_kat(e, u, limits)?;
    let b = build_kat(f, u, limits)?;
    check_automata(&a, &b, mode)
}

/// Checks two KAT programs through their determinized automata.
pub fn check_kat(
    e: &KatExp,
    f: &KatExp,
    u: &Universe,
    mode: Mode,
    limits: &Limits,
) -> Result<Verdict> {
    Ok(check_kat_with_stats(e, f, u, mode, limits)?.0)
}

/// Checks two programs of either kind. Two GKAT programs use the GKAT
/// pipeline; otherwise both sides are embedded into KAT.
pub fn check_programs(
    e: &Program,
    f: &Program,
    u: &Universe,
    mode: Mode,
    limits: &Limits,
) -> Result<(Verdict, Stats)> {
    match (e, f) {
        (Program::Gkat(e), Program::Gkat(f)) => check_gkat_with_stats(e, f, u, mode, limits),
        _ => check_kat_with_stats(&e.to_kat(), &f.to_kat(), u, mode, limits),
    }
}

fn render_trace(trace: &[(Atom, ActionId)], u: &Universe) -> String {
    trace
        .iter()
        .map(|&(a, p)| format!("{} {}", a.render(u), u.action_name(p)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Human-readable account of a witness. Fails on `Equivalent`.
pub fn explain(v: &Verdict, u: &Universe) -> Result<String> {
    let w = v.witness().ok_or(Error::NoWitness)?;
    let d = &w.divergence;
    let mut out = String::new();
    if !w.trace.is_empty() {
        out.push_str(&format!("after {}, ", render_trace(&w.trace, u)));
    }
    out.push_str(&format!("at {}: ", d.atom().render(u)));
    match d {
        Divergence::AcceptMismatch { accepting, .. } => out.push_str(&format!(
            "{} accepts, {} does not",
            accepting.name(),
            accepting.other().name()
        )),
        _ => out.push_str(&format!(
            "left {}, right {}",
            d.left().describe(u),
            d.right().describe(u)
        )),
    }
    if let Some((s, side)) = &w.string {
        out.push_str(&format!(
            "\nguarded string {} is accepted by the {} side only",
            s.render(u),
            side.name()
        ));
    }
    Ok(out)
}

/// The verdict as a JSON document.
pub fn verdict_json(v: &Verdict, mode: Mode, u: &Universe) -> Value {
    let Some(w) = v.witness() else {
        return json!({ "equivalent": true, "mode": mode.name() });
    };
    let actions =
        |b: &Behavior| -> Vec<&str> { b.actions.iter().map(|&p| u.action_name(p)).collect() };
    let d = &w.divergence;
    let mut divergence = json!({ "kind": d.kind(), "atom": d.atom().render(u) });
    let obj = divergence.as_object_mut().expect("object");
    match d {
        Divergence::AcceptMismatch { accepting, .. } => {
            obj.insert("accepting".into(), json!(accepting.name()));
        }
        Divergence::ActionMismatch { left, right, .. } => {
            obj.insert("left".into(), json!(actions(left)));
            obj.insert("right".into(), json!(actions(right)));
        }
        Divergence::StepVsStop {
            stopped,
            left,
            right,
            ..
        } => {
            obj.insert("stopped".into(), json!(stopped.name()));
            let stepping = if *stopped == Side::Left { right } else { left };
            obj.insert("actions".into(), json!(actions(stepping)));
        }
    }
    let trace: Vec<Value> = w
        .trace
        .iter()
        .map(|&(a, p)| json!([a.render(u), u.action_name(p)]))
        .collect();
    let mut witness = json!({ "trace": trace, "divergence": divergence });
    if let Some((s, side)) = &w.string {
        witness.as_object_mut().expect("object").insert(
            "string".into(),
            json!({ "text": s.render(u), "acceptedBy": side.name() }),
        );
    }
    json!({ "equivalent": false, "mode": mode.name(), "witness": witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build_gkat;
    use crate::syntax::{parse_gkat, parse_gkat_in, BExp, TestId};

    fn u() -> Universe {
        Universe::new(["b"], ["p", "q"]).unwrap()
    }

    fn p() -> GkatExp {
        GkatExp::Act(ActionId(0))
    }

    fn q() -> GkatExp {
        GkatExp::Act(ActionId(1))
    }

    fn b() -> BExp {
        BExp::Test(TestId(0))
    }

    fn check(e: &GkatExp, f: &GkatExp, mode: Mode) -> Verdict {
        check_gkat(e, f, &u(), mode, &Limits::default()).unwrap()
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 3));
        assert_eq!(uf.find(0), uf.find(2));
        assert_ne!(uf.find(4), uf.find(0));
    }

    #[test]
    fn late_failure_separates_modes() {
        let e = p().seq(GkatExp::zero());
        assert!(check(&e, &GkatExp::zero(), Mode::Lang).is_equivalent());
        let v = check(&e, &GkatExp::zero(), Mode::Bisim);
        let w = v.witness().unwrap();
        assert!(w.trace.is_empty());
        assert_eq!(
            w.divergence,
            Divergence::StepVsStop {
                atom: Atom(0),
                stopped: Side::Right,
                left: Behavior {
                    accepts: false,
                    actions: vec![ActionId(0)]
                },
                right: Behavior {
                    accepts: false,
                    actions: vec![]
                },
            }
        );
        assert_eq!(
            explain(&v, &u()).unwrap(),
            "at {}: left steps with p, right rejects"
        );
    }

    #[test]
    fn reflexive() {
        let a = crate::automata::from_json(include_str!("../fixtures/p2-cycle.json")).unwrap();
        for s in 0..a.num_states() {
            assert!(bisim(&a, s, &a, s).unwrap().is_equivalent());
        }
        assert!(!bisim(&a, 0, &a, 1).unwrap().is_equivalent());
    }

    #[test]
    fn dead_code_after_infinite_loop() {
        let forever = GkatExp::while_do(BExp::One, p());
        let a = build_gkat(&forever.clone().seq(q()), &u(), &Limits::default()).unwrap();
        let b = build_gkat(&forever, &u(), &Limits::default()).unwrap();
        assert!(bisim(&a, 0, &b, 0).unwrap().is_equivalent());
    }

    #[test]
    fn intro_loop_unrolling() {
        let text = "tests: b\nactions: e\n";
        let (u, lhs) =
            parse_gkat(&format!("{text}if b then {{ e; while b do e }} else skip")).unwrap();
        let rhs = parse_gkat_in(&format!("{text}while b do e"), &u).unwrap();
        for mode in [Mode::Lang, Mode::Bisim, Mode::LangInclusion] {
            assert!(check_gkat(&lhs, &rhs, &u, mode, &Limits::default())
                .unwrap()
                .is_equivalent());
        }
    }

    #[test]
    fn loop_postcondition() {
        let w = GkatExp::while_do(b(), p());
        let post = w.clone().seq(GkatExp::Test(b().not()));
        assert!(check(&w, &post, Mode::Lang).is_equivalent());
    }

    #[test]
    fn accept_mismatch_witness() {
        let spin = GkatExp::while_do(BExp::One, GkatExp::one()).seq(GkatExp::one());
        for mode in [Mode::Bisim, Mode::Lang] {
            let v = check(&GkatExp::one(), &spin, mode);
            let d = &v.witness().unwrap().divergence;
            assert!(matches!(
                d,
                Divergence::AcceptMismatch {
                    accepting: Side::Left,
                    ..
                }
            ));
            assert_eq!(d.atom(), Atom(0));
            assert!(explain(&v, &u())
                .unwrap()
                .contains("left accepts, right does not"));
        }
    }

    #[test]
    fn witness_is_shortest() {
        // p; p; q versus p; p; p: they first differ after two steps.
        let e = p().seq(p().seq(q()));
        let f = p().seq(p().seq(p()));
        let v = check(&e, &f, Mode::Lang);
        let w = v.witness().unwrap();
        assert_eq!(w.trace, vec![(Atom(0), ActionId(0)); 2]);
        assert!(matches!(w.divergence, Divergence::ActionMismatch { .. }));
        let (s, side) = w.string.clone().unwrap();
        assert_eq!(side, Side::Right);
        assert_eq!(s.render(&u()), "{} p {} p {} p {}");
        assert!(explain(&v, &u())
            .unwrap()
            .starts_with("after {} p {} p, at {}: left steps with q, right steps with p"));
    }

    #[test]
    fn inclusion_is_one_sided() {
        let e = GkatExp::if_then_else(b(), p(), GkatExp::zero());
        let f = GkatExp::if_then_else(b(), p(), q());
        assert!(check(&e, &f, Mode::LangInclusion).is_equivalent());
        let v = check(&f, &e, Mode::LangInclusion);
        let w = v.witness().unwrap();
        assert_eq!(w.string.as_ref().unwrap().1, Side::Left);
        assert!(!check(&e, &f, Mode::Lang).is_equivalent());
    }

    #[test]
    fn json_shape() {
        let v = check(&p().seq(GkatExp::zero()), &GkatExp::zero(), Mode::Bisim);
        assert_eq!(
            verdict_json(&v, Mode::Bisim, &u()).to_string(),
            r#"{"equivalent":false,"mode":"bisim","witness":{"trace":[],"divergence":{"kind":"stepVsStop","atom":"{}","stopped":"right","actions":["p"]}}}"#
        );
        assert!(explain(&Verdict::Equivalent, &u()).is_err());
    }

    #[test]
    fn universe_mismatch() {
        let a = build_gkat(&p(), &u(), &Limits::default()).unwrap().to_dfa();
        let other = Universe::new(["c"], ["p", "q"]).unwrap();
        let b = build_gkat(&p(), &other, &Limits::default())
            .unwrap()
            .to_dfa();
        assert!(matches!(
            check_automata(&a, &b, Mode::Lang),
            Err(Error::UniverseMismatch(_))
        ));
    }

    #[test]
    fn kat_choice_is_commutative() {
        let u = u();
        let (pk, qk) = (KatExp::Act(ActionId(0)), KatExp::Act(ActionId(1)));
        let v = check_kat(
            &pk.clone().plus(qk.clone()),
            &qk.plus(pk),
            &u,
            Mode::Bisim,
            &Limits::default(),
        )
        .unwrap();
        assert!(v.is_equivalent());
    }
}
