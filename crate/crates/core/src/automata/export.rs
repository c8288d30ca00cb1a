//! JSON and Graphviz DOT output for automata.
//!
//! Automaton JSON:
//!
//! ```json
//! { "tests": ["b"], "actions": ["p"], "initial": 0,
//!   "atoms": { "α": "{b}" },
//!   "states": [ { "outcomes": [ {"atom": "{b}", "step": ["p", 0]},
//!                               {"atom": "{}", "accept": true} ] } ] }
//! ```
//!
//! Atoms missing from a state's `outcomes` reject. The optional `atoms` map
//! names atoms for display; names may be used wherever an atom is expected.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::atoms::Atom;
use crate::error::{Error, Result};
use crate::syntax::Universe;

use super::{DetAutomaton, GuardedDfa, Outcome};

#[derive(Debug, Serialize, Deserialize)]
struct AutomatonJson {
    tests: Vec<String>,
    actions: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    atoms: BTreeMap<String, String>,
    initial: usize,
    states: Vec<StateJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default)]
    outcomes: Vec<OutcomeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeJson {
    atom: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    step: Option<(String, usize)>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    accept: bool,
}

pub fn to_json(a: &DetAutomaton) -> String {
    let u = a.universe();
    let states = (0..a.num_states())
        .map(|s| StateJson {
            label: a.label(s).map(str::to_string),
            outcomes: Atom::all(u.tests().len())
                .filter_map(|atom| {
                    let text = atom.render(u);
                    match a.outcome(s, atom) {
                        Outcome::Accept => Some(OutcomeJson {
                            atom: text,
                            step: None,
                            accept: true,
                        }),
                        Outcome::Reject => None,
                        Outcome::Step(p, t) => Some(OutcomeJson {
                            atom: text,
                            step: Some((u.action_name(p).to_string(), t)),
                            accept: false,
                        }),
                    }
                })
                .collect(),
        })
        .collect();
    let doc = AutomatonJson {
        tests: u.tests().to_vec(),
        actions: u.actions().to_vec(),
        atoms: a
            .atom_names()
            .iter()
            .map(|(atom, name)| (name.clone(), atom.render(u)))
            .collect(),
        initial: a.initial(),
        states,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn from_json(text: &str) -> Result<DetAutomaton> {
    let doc: AutomatonJson = serde_json::from_str(text)?;
    let u = Universe::new(doc.tests, doc.actions)?;
    let mut names = BTreeMap::new();
    for (name, atom_text) in &doc.atoms {
        let atom = Atom::parse(atom_text, &u)?;
        if names.insert(atom, name.clone()).is_some() {
            return Err(Error::MalformedAutomaton(format!(
                "atom {atom_text} is named twice"
            )));
        }
    }
    let resolve = |text: &str| -> Result<Atom> {
        if text.trim_start().starts_with('{') {
            return Atom::parse(text, &u);
        }
        names
            .iter()
            .find(|(_, n)| n.as_str() == text)
            .map(|(a, _)| *a)
            .ok_or_else(|| Error::MalformedAutomaton(format!("unknown atom `{text}`")))
    };
    let mut rows = Vec::with_capacity(doc.states.len());
    let mut labels = Vec::with_capacity(doc.states.len());
    for (s, state) in doc.states.iter().enumerate() {
        let mut row = vec![Outcome::Reject; u.num_atoms()];
        let mut seen = vec![false; u.num_atoms()];
        for o in &state.outcomes {
            let atom = resolve(&o.atom)?;
            if std::mem::replace(&mut seen[atom.index()], true) {
                return Err(Error::MalformedAutomaton(format!(
                    "state {s} has two outcomes for atom {}",
                    o.atom
                )));
            }
            row[atom.index()] = match (&o.step, o.accept) {
                (Some(_), true) => {
                    return Err(Error::MalformedAutomaton(format!(
                        "state {s} both accepts and steps on atom {}",
                        o.atom
                    )))
                }
                (Some((p, t)), false) => {
                    let p = u.action_id(p).ok_or_else(|| {
                        Error::MalformedAutomaton(format!("unknown action `{p}`"))
                    })?;
                    Outcome::Step(p, *t)
                }
                (None, true) => Outcome::Accept,
                (None, false) => Outcome::Reject,
            };
        }
        rows.push(row);
        labels.push(state.label.clone());
    }
    Ok(DetAutomaton::new(u, doc.initial, rows, labels)?.with_atom_names(names))
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Shared DOT writer. `rows[s]` lists, per atom, whether the atom is
/// accepted and the `(action, target)` moves.
fn write_dot(
    num_states: usize,
    initial: usize,
    atom_name: &dyn Fn(Atom) -> String,
    num_tests: usize,
    accepted: &dyn Fn(usize, Atom) -> bool,
    moves: &dyn Fn(usize, Atom) -> Vec<(String, usize)>,
    label: &dyn Fn(usize) -> Option<String>,
) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
    out.push_str("  start [shape=point];\n");
    let _ = writeln!(out, "  start -> q{initial};");
    for s in 0..num_states {
        let acc: Vec<String> = Atom::all(num_tests)
            .filter(|&a| accepted(s, a))
            .map(atom_name)
            .collect();
        let tooltip = label(s)
            .map(|l| format!(", tooltip=\"{}\"", escape(&l)))
            .unwrap_or_default();
        if acc.is_empty() {
            let _ = writeln!(out, "  q{s} [shape=circle, label=\"q{s}\"{tooltip}];");
        } else {
            let _ = writeln!(
                out,
                "  q{s} [shape=doublecircle, label=\"q{s}\\n⇒ {}\"{tooltip}];",
                escape(&acc.join(", "))
            );
        }
    }
    for s in 0..num_states {
        // Group atoms by (action, target), in order of first appearance.
        let mut groups: Vec<((String, usize), Vec<String>)> = Vec::new();
        for a in Atom::all(num_tests) {
            for key in moves(s, a) {
                match groups.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, atoms)) => atoms.push(atom_name(a)),
                    None => groups.push((key, vec![atom_name(a)])),
                }
            }
        }
        for ((action, t), atoms) in groups {
            let _ = writeln!(
                out,
                "  q{s} -> q{t} [label=\"{}|{}\"];",
                escape(&atoms.join(", ")),
                escape(&action)
            );
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering. Atoms with the same step share one edge label; accepting
/// states are double circles annotated with their accepted atoms.
pub fn to_dot(a: &DetAutomaton) -> String {
    let u = a.universe();
    write_dot(
        a.num_states(),
        a.initial(),
        &|atom| a.atom_name(atom),
        u.tests().len(),
        &|s, atom| a.outcome(s, atom) == Outcome::Accept,
        &|s, atom| match a.outcome(s, atom) {
            Outcome::Step(p, t) => vec![(u.action_name(p).to_string(), t)],
            _ => vec![],
        },
        &|s| a.label(s).map(str::to_string),
    )
}

pub fn dfa_to_dot(a: &GuardedDfa) -> String {
    let u = a.universe();
    write_dot(
        a.num_states(),
        a.initial(),
        &|atom| atom.render(u),
        u.tests().len(),
        &|s, atom| a.accepts_atom(s, atom),
        &|s, atom| {
            a.moves(s, atom)
                .iter()
                .map(|(p, t)| (u.action_name(*p).to_string(), *t))
                .collect()
        },
        &|s| a.label(s).map(str::to_string),
    )
}
