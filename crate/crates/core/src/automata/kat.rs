//! KAT expressions to automata: partial derivatives over the alphabet of
//! (atom, action) pairs, then the subset construction.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::atoms::{denote, eval, Atom, AtomSet};
use crate::error::{Error, Limits, Result};
use crate::syntax::{render_kat, ActionId, BExp, KatExp, Universe};

use super::GuardedDfa;

fn seq(e: KatExp, f: KatExp) -> KatExp {
    match e {
        KatExp::Test(BExp::One) => f,
        KatExp::Test(BExp::Zero) => e,
        KatExp::Seq(a, b) => KatExp::Seq(a, Box::new(seq(*b, f))),
        e => KatExp::Seq(Box::new(e), Box::new(f)),
    }
}

/// Atoms `α` with `α ∈ ⟦e⟧` (the length-0 strings of the language).
fn output(e: &KatExp, num_atoms: usize) -> AtomSet {
    match e {
        KatExp::Test(b) => denote(b, num_atoms),
        KatExp::Act(_) => AtomSet::empty(num_atoms),
        KatExp::Plus(e, f) => output(e, num_atoms).union(&output(f, num_atoms)),
        KatExp::Seq(e, f) => output(e, num_atoms).intersection(&output(f, num_atoms)),
        KatExp::Star(_) => AtomSet::full(num_atoms),
    }
}

fn nullable(e: &KatExp, atom: Atom) -> bool {
    match e {
        KatExp::Test(b) => eval(b, atom),
        KatExp::Act(_) => false,
        KatExp::Plus(e, f) => nullable(e, atom) || nullable(f, atom),
        KatExp::Seq(e, f) => nullable(e, atom) && nullable(f, atom),
        KatExp::Star(_) => true,
    }
}

/// All `(p, e')` with `e'` a partial derivative of `e` by `(atom, p)`.
fn partial_derivatives(e: &KatExp, atom: Atom, out: &mut Vec<(ActionId, KatExp)>) {
    match e {
        KatExp::Test(_) => {}
        KatExp::Act(p) => out.push((*p, KatExp::one())),
        KatExp::Plus(e, f) => {
            partial_derivatives(e, atom, out);
            partial_derivatives(f, atom, out);
        }
        KatExp::Seq(first, rest) => {
            let mut heads = Vec::new();
            partial_derivatives(first, atom, &mut heads);
            out.extend(
                heads
                    .into_iter()
                    .map(|(p, d)| (p, seq(d, (**rest).clone()))),
            );
            if nullable(first, atom) {
                partial_derivatives(rest, atom, out);
            }
        }
        KatExp::Star(body) => {
            let mut heads = Vec::new();
            partial_derivatives(body, atom, &mut heads);
            out.extend(heads.into_iter().map(|(p, d)| (p, seq(d, e.clone()))));
        }
    }
}

/// Successors of one term at one atom, grouped by action.
type Moves = Vec<(ActionId, Vec<usize>)>;

/// The partial-derivative automaton of a KAT expression. Term 0 is the
/// expression itself.
#[derive(Debug, Clone)]
pub struct KatNfa {
    universe: Universe,
    terms: Vec<KatExp>,
    output: Vec<AtomSet>,
    /// `moves[term][atom]`: successors grouped by action, sorted.
    moves: Vec<Vec<Moves>>,
}

impl KatNfa {
    pub fn build(e: &KatExp, u: &Universe, limits: &Limits) -> Result<Self> {
        limits.check_tests(u.tests().len())?;
        let num_atoms = u.num_atoms();
        let mut index: HashMap<KatExp, usize> = HashMap::from([(e.clone(), 0)]);
        let mut terms = vec![e.clone()];
        let mut output_sets = Vec::new();
        let mut moves = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        let mut buf = Vec::new();
        while let Some(i) = queue.pop_front() {
            output_sets.push(output(&terms[i], num_atoms));
            let mut per_atom = Vec::with_capacity(num_atoms);
            for a in Atom::all(u.tests().len()) {
                buf.clear();
                partial_derivatives(&terms[i], a, &mut buf);
                let mut grouped: BTreeMap<ActionId, BTreeSet<usize>> = BTreeMap::new();
                for (p, d) in buf.drain(..) {
                    let t = match index.get(&d) {
                        Some(&t) => t,
                        None => {
                            let t = terms.len();
                            if t >= limits.max_states {
                                return Err(Error::ResourceLimit {
                                    what: "automaton states",
                                    limit: limits.max_states,
                                });
                            }
                            index.insert(d.clone(), t);
                            terms.push(d);
                            queue.push_back(t);
                            t
                        }
                    };
                    grouped.entry(p).or_default().insert(t);
                }
                per_atom.push(
                    grouped
                        .into_iter()
                        .map(|(p, ts)| (p, ts.into_iter().collect()))
                        .collect(),
                );
            }
            moves.push(per_atom);
        }
        Ok(KatNfa {
            universe: u.clone(),
            terms,
            output: output_sets,
            moves,
        })
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, i: usize) -> &KatExp {
        &self.terms[i]
    }

    pub fn output(&self, i: usize) -> &AtomSet {
        &self.output[i]
    }

    pub fn moves(&self, i: usize, atom: Atom) -> &[(ActionId, Vec<usize>)] {
        &self.moves[i][atom.index()]
    }
}

/// Subset construction. Only nonempty subsets become states; an undefined
/// move is the implicit reject sink.
pub fn determinize(nfa: &KatNfa, limits: &Limits) -> Result<GuardedDfa> {
    let u = &nfa.universe;
    let num_atoms = u.num_atoms();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(vec![0], 0)]);
    let mut subsets: Vec<Vec<usize>> = vec![vec![0]];
    let mut accept = Vec::new();
    let mut moves = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let subset = subsets[s].clone();
        let mut acc = AtomSet::empty(num_atoms);
        for &t in &subset {
            acc = acc.union(&nfa.output[t]);
        }
        accept.push(acc);
        for a in Atom::all(u.tests().len()) {
            let mut targets: BTreeMap<ActionId, BTreeSet<usize>> = BTreeMap::new();
            for &t in &subset {
                for (p, succ) in nfa.moves(t, a) {
                    targets.entry(*p).or_default().extend(succ.iter().copied());
                }
            }
            let mut row = Vec::with_capacity(targets.len());
            for (p, set) in targets {
                let key: Vec<usize> = set.into_iter().collect();
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        if id >= limits.max_states {
                            return Err(Error::ResourceLimit {
                                what: "determinized states",
                                limit: limits.max_states,
                            });
                        }
                        index.insert(key.clone(), id);
                        subsets.push(key);
                        queue.push_back(id);
                        id
                    }
                };
                row.push((p, id));
            }
            moves.push(row);
        }
    }
    let labels = subsets
        .iter()
        .map(|set| {
            let parts: Vec<String> = set.iter().map(|&t| render_kat(&nfa.terms[t], u)).collect();
            Some(format!("{{{}}}", parts.join(", ")))
        })
        .collect();
    Ok(GuardedDfa {
        universe: u.clone(),
        initial: 0,
        num_states: subsets.len(),
        accept,
        moves,
        labels,
    })
}

/// Partial derivatives followed by determinization.
pub fn build_kat(e: &KatExp, u: &Universe, limits: &Limits) -> Result<GuardedDfa> {
    determinize(&KatNfa::build(e, u, limits)?, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::GuardedString;
    use crate::syntax::TestId;

    fn u() -> Universe {
        Universe::new(["t"], ["p", "q"]).unwrap()
    }

    #[test]
    fn single_test() {
        let a = build_kat(
            &KatExp::Test(BExp::Test(TestId(0))),
            &u(),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(a.num_states(), 1);
        assert!(a.accepts_atom(0, Atom(1)));
        assert!(!a.accepts_atom(0, Atom(0)));
        assert!(a.moves(0, Atom(0)).is_empty() && a.moves(0, Atom(1)).is_empty());
    }

    #[test]
    fn choice_between_actions() {
        let u = u();
        let e = KatExp::Act(ActionId(0)).plus(KatExp::Act(ActionId(1)));
        let a = build_kat(&e, &u, &Limits::default()).unwrap();
        for atom in [Atom(0), Atom(1)] {
            let m = a.moves(0, atom);
            assert_eq!(m.len(), 2);
            assert_eq!(m[0].0, ActionId(0));
            assert_eq!(m[1].0, ActionId(1));
        }
        for w in ["{} p {t}", "{t} q {}"] {
            assert!(a.accepts(0, &GuardedString::parse(w, &u).unwrap()), "{w}");
        }
        assert!(!a.accepts(0, &GuardedString::parse("{t}", &u).unwrap()));
        assert!(!a.accepts(0, &GuardedString::parse("{t} p {} p {}", &u).unwrap()));
    }

    #[test]
    fn star_terms_stay_finite() {
        let p = KatExp::Act(ActionId(0));
        let q = KatExp::Act(ActionId(1));
        let e = p
            .clone()
            .star()
            .seq(q.clone().star())
            .star()
            .seq(p.plus(q).star());
        let nfa = KatNfa::build(&e, &u(), &Limits::default()).unwrap();
        assert!(nfa.num_terms() <= 2 * e.size());
        let dfa = determinize(&nfa, &Limits::default()).unwrap();
        assert!(dfa.accepts(
            0,
            &GuardedString::parse("{} p {} q {t} p {}", &u()).unwrap()
        ));
    }
}
