//! GKAT expressions to deterministic automata, by closing an expression
//! under its operational derivatives.

use std::collections::{HashMap, VecDeque};

use crate::atoms::{eval, Atom};
use crate::error::{Error, Limits, Result};
use crate::syntax::{render_bexp, ActionId, BExp, GkatExp, Universe};

use super::{DetAutomaton, Outcome};

/// One transition of the operational semantics: `e ⇓ α`, `e -α|p-> e'`, or
/// neither.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivative {
    Accept,
    Reject,
    Step(ActionId, GkatExp),
}

/// Sequencing with the normalizations that keep the derivative closure
/// finite: `1·e = e`, `0·e = 0`, `(e·f)·g = e·(f·g)`. `e·0` is kept as is.
fn seq(e: GkatExp, f: GkatExp) -> GkatExp {
    match e {
        GkatExp::Test(BExp::One) => f,
        GkatExp::Test(BExp::Zero) => e,
        GkatExp::Seq(a, b) => GkatExp::Seq(a, Box::new(seq(*b, f))),
        e => GkatExp::Seq(Box::new(e), Box::new(f)),
    }
}

/// The unique transition of `e` at atom `atom`. Rules:
///
/// ```text
///   α ≤ E(e)               ⟹  e ⇓ α
///   p -α|p-> 1
///   e -α|p-> e', α ≤ b     ⟹  e +_b f -α|p-> e'
///   f -α|p-> f', α ≤ !b    ⟹  e +_b f -α|p-> f'
///   e -α|p-> e'            ⟹  e·f -α|p-> e'·f
///   e ⇓ α, f -α|p-> f'     ⟹  e·f -α|p-> f'
///   e -α|p-> e', α ≤ b     ⟹  e^(b) -α|p-> e'·e^(b)
/// ```
pub fn derivative(e: &GkatExp, atom: Atom) -> Derivative {
    match e {
        GkatExp::Test(b) => {
            if eval(b, atom) {
                Derivative::Accept
            } else {
                Derivative::Reject
            }
        }
        GkatExp::Act(p) => Derivative::Step(*p, GkatExp::one()),
        GkatExp::If(b, then, els) => {
            if eval(b, atom) {
                derivative(then, atom)
            } else {
                derivative(els, atom)
            }
        }
        GkatExp::Seq(first, rest) => match derivative(first, atom) {
            Derivative::Step(p, next) => Derivative::Step(p, seq(next, (**rest).clone())),
            Derivative::Accept => derivative(rest, atom),
            Derivative::Reject => Derivative::Reject,
        },
        GkatExp::While(b, body) => {
            if !eval(b, atom) {
                return Derivative::Accept;
            }
            match derivative(body, atom) {
                Derivative::Step(p, next) => Derivative::Step(p, seq(next, e.clone())),
                // A body that terminates without acting would loop forever.
                Derivative::Accept | Derivative::Reject => Derivative::Reject,
            }
        }
    }
}

type NodeId = u32;

/// An expression node whose children are arena ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Test(BExp),
    Act(ActionId),
    If(BExp, NodeId, NodeId),
    Seq(NodeId, NodeId),
    While(BExp, NodeId),
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Accept,
    Reject,
    Step(ActionId, NodeId),
}

/// Hash-consed expressions: structurally equal subterms share one id.
/// Mirrors [`derivative`] and the normalizing `seq` exactly.
#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    ids: HashMap<Node, NodeId>,
    seqs: HashMap<(NodeId, NodeId), NodeId>,
    derivatives: HashMap<(NodeId, Atom), Move>,
}

impl Arena {
    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.ids.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node.clone());
        self.ids.insert(node, id);
        id
    }

    fn add(&mut self, e: &GkatExp) -> NodeId {
        let node = match e {
            GkatExp::Test(b) => Node::Test(b.clone()),
            GkatExp::Act(p) => Node::Act(*p),
            GkatExp::If(b, then, els) => {
                let then = self.add(then);
                let els = self.add(els);
                Node::If(b.clone(), then, els)
            }
            GkatExp::Seq(first, rest) => {
                let first = self.add(first);
                let rest = self.add(rest);
                Node::Seq(first, rest)
            }
            GkatExp::While(b, body) => {
                let body = self.add(body);
                Node::While(b.clone(), body)
            }
        };
        self.intern(node)
    }

    fn seq(&mut self, e: NodeId, f: NodeId) -> NodeId {
        if let Some(&id) = self.seqs.get(&(e, f)) {
            return id;
        }
        let id = match self.nodes[e as usize] {
            Node::Test(BExp::One) => f,
            Node::Test(BExp::Zero) => e,
            Node::Seq(a, b) => {
                let rest = self.seq(b, f);
                self.intern(Node::Seq(a, rest))
            }
            _ => self.intern(Node::Seq(e, f)),
        };
        self.seqs.insert((e, f), id);
        id
    }

    fn derivative(&mut self, e: NodeId, atom: Atom) -> Move {
        if let Some(&d) = self.derivatives.get(&(e, atom)) {
            return d;
        }
        let d = match self.nodes[e as usize].clone() {
            Node::Test(b) => {
                if eval(&b, atom) {
                    Move::Accept
                } else {
                    Move::Reject
                }
            }
            Node::Act(p) => Move::Step(p, self.intern(Node::Test(BExp::One))),
            Node::If(b, then, els) => {
                if eval(&b, atom) {
                    self.derivative(then, atom)
                } else {
                    self.derivative(els, atom)
                }
            }
            Node::Seq(first, rest) => match self.derivative(first, atom) {
                Move::Step(p, next) => Move::Step(p, self.seq(next, rest)),
                Move::Accept => self.derivative(rest, atom),
                Move::Reject => Move::Reject,
            },
            Node::While(b, body) => {
                if !eval(&b, atom) {
                    Move::Accept
                } else {
                    match self.derivative(body, atom) {
                        Move::Step(p, next) => Move::Step(p, self.seq(next, e)),
                        Move::Accept | Move::Reject => Move::Reject,
                    }
                }
            }
        };
        self.derivatives.insert((e, atom), d);
        d
    }

    /// Same output as [`render_gkat`] on the expression `id` stands for.
    fn render(&self, id: NodeId, u: &Universe) -> String {
        let mut out = String::new();
        self.prog(id, u, &mut out);
        out
    }

    fn prog(&self, id: NodeId, u: &Universe, out: &mut String) {
        match self.nodes[id as usize] {
            Node::Seq(first, rest) => {
                self.block(first, u, out);
                out.push_str("; ");
                self.prog(rest, u, out);
            }
            _ => self.block(id, u, out),
        }
    }

    fn block(&self, id: NodeId, u: &Universe, out: &mut String) {
        match &self.nodes[id as usize] {
            Node::Seq(..) => {
                out.push_str("{ ");
                self.prog(id, u, out);
                out.push_str(" }");
            }
            Node::Test(BExp::One) => out.push_str("skip"),
            Node::Test(BExp::Zero) => out.push_str("fail"),
            Node::Test(b) => {
                out.push_str("assert ");
                out.push_str(&render_bexp(b, u));
            }
            Node::Act(a) => out.push_str(u.action_name(*a)),
            Node::If(b, then, els) => {
                out.push_str("if ");
                out.push_str(&render_bexp(b, u));
                out.push_str(" then ");
                self.block(*then, u, out);
                out.push_str(" else ");
                self.block(*els, u, out);
            }
            Node::While(b, body) => {
                out.push_str("while ");
                out.push_str(&render_bexp(b, u));
                out.push_str(" do ");
                self.block(*body, u, out);
            }
        }
    }
}

/// The derivative automaton of `e`: its states are the distinct normalized
/// expressions reachable by steps, the initial state is `e` itself, and each
/// state is labelled with its expression.
pub fn build_gkat(e: &GkatExp, u: &Universe, limits: &Limits) -> Result<DetAutomaton> {
    let (arena, states, rows) = closure(e, u, limits)?;
    let labels = states.iter().map(|&s| Some(arena.render(s, u))).collect();
    DetAutomaton::new(u.clone(), 0, rows, labels)
}

/// [`build_gkat`] without state labels.
pub(crate) fn build_gkat_unlabelled(
    e: &GkatExp,
    u: &Universe,
    limits: &Limits,
) -> Result<DetAutomaton> {
    let (_, states, rows) = closure(e, u, limits)?;
    DetAutomaton::new(u.clone(), 0, rows, vec![None; states.len()])
}

type Closure = (Arena, Vec<NodeId>, Vec<Vec<Outcome>>);

fn closure(e: &GkatExp, u: &Universe, limits: &Limits) -> Result<Closure> {
    limits.check_tests(u.tests().len())?;
    let atoms: Vec<Atom> = Atom::all(u.tests().len()).collect();
    let mut arena = Arena::default();
    let root = arena.add(e);
    let mut index: HashMap<NodeId, usize> = HashMap::from([(root, 0)]);
    let mut states: Vec<NodeId> = vec![root];
    let mut rows: Vec<Vec<Outcome>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let mut row = Vec::with_capacity(atoms.len());
        for &a in &atoms {
            let outcome = match arena.derivative(states[s], a) {
                Move::Accept => Outcome::Accept,
                Move::Reject => Outcome::Reject,
                Move::Step(p, next) => {
                    let t = match index.get(&next) {
                        Some(&t) => t,
                        None => {
                            let t = states.len();
                            if t >= limits.max_states {
                                return Err(Error::ResourceLimit {
                                    what: "automaton states",
                                    limit: limits.max_states,
                                });
                            }
                            index.insert(next, t);
                            states.push(next);
                            queue.push_back(t);
                            t
                        }
                    };
                    Outcome::Step(p, t)
                }
            };
            row.push(outcome);
        }
        // States are discovered in BFS order, so row `s` lands at index `s`.
        debug_assert_eq!(rows.len(), s);
        rows.push(row);
    }
    Ok((arena, states, rows))
}
