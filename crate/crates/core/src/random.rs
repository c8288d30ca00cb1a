//! Seeded random generation of expressions and interpretations, for
//! property tests and law checking. The same seed always produces the same
//! sequence on every platform.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semantics::Interpretation;
use crate::syntax::{ActionId, BExp, GkatExp, KatExp, TestId, Universe};

/// The deterministic generator used throughout.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A universe with `tests` tests named `b, c, d, ...` and `actions` actions
/// named `p, q, r, ...` (at most eight of each).
pub fn universe(tests: usize, actions: usize) -> Universe {
    const TESTS: [&str; 8] = ["b", "c", "d", "t", "u", "v", "w", "x"];
    const ACTIONS: [&str; 8] = ["p", "q", "r", "s", "e", "f", "g", "h"];
    Universe::new(TESTS[..tests].to_vec(), ACTIONS[..actions].to_vec()).expect("distinct names")
}

/// A random universe with 1 to `max_tests` tests and 1 to `max_actions`
/// actions.
pub fn random_universe<R: Rng>(rng: &mut R, max_tests: usize, max_actions: usize) -> Universe {
    let tests = rng.random_range(1..=max_tests.max(1));
    let actions = rng.random_range(1..=max_actions.max(1));
    universe(tests, actions)
}

fn random_test<R: Rng>(rng: &mut R, u: &Universe) -> BExp {
    if u.tests().is_empty() {
        return if rng.random_bool(0.5) {
            BExp::One
        } else {
            BExp::Zero
        };
    }
    BExp::Test(TestId(rng.random_range(0..u.tests().len())))
}

fn random_action<R: Rng>(rng: &mut R, u: &Universe) -> ActionId {
    ActionId(rng.random_range(0..u.actions().len()))
}

/// A Boolean expression of height at most `depth`.
pub fn random_bexp<R: Rng>(rng: &mut R, u: &Universe, depth: usize) -> BExp {
    let leaf = depth == 0 || rng.random_bool(0.4);
    if leaf {
        return match rng.random_range(0..10) {
            0 => BExp::Zero,
            1 => BExp::One,
            _ => random_test(rng, u),
        };
    }
    match rng.random_range(0..3) {
        0 => random_bexp(rng, u, depth - 1).or(random_bexp(rng, u, depth - 1)),
        1 => random_bexp(rng, u, depth - 1).and(random_bexp(rng, u, depth - 1)),
        _ => random_bexp(rng, u, depth - 1).not(),
    }
}

/// A guard: a test of depth at most 1.
fn random_guard<R: Rng>(rng: &mut R, u: &Universe) -> BExp {
    random_bexp(rng, u, 1)
}

/// A GKAT expression whose program constructors nest at most `depth` deep.
pub fn random_gkat<R: Rng>(rng: &mut R, u: &Universe, depth: usize) -> GkatExp {
    assert!(!u.actions().is_empty(), "random programs need an action");
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        return match rng.random_range(0..8) {
            0 => GkatExp::one(),
            1 => GkatExp::zero(),
            2 => GkatExp::Test(random_guard(rng, u)),
            _ => GkatExp::Act(random_action(rng, u)),
        };
    }
    match rng.random_range(0..7) {
        0 | 1 => GkatExp::if_then_else(
            random_guard(rng, u),
            random_gkat(rng, u, depth - 1),
            random_gkat(rng, u, depth - 1),
        ),
        2..=4 => random_gkat(rng, u, depth - 1).seq(random_gkat(rng, u, depth - 1)),
        _ => GkatExp::while_do(random_guard(rng, u), random_gkat(rng, u, depth - 1)),
    }
}

/// A KAT expression whose program constructors nest at most `depth` deep.
pub fn random_kat<R: Rng>(rng: &mut R, u: &Universe, depth: usize) -> KatExp {
    assert!(!u.actions().is_empty(), "random programs need an action");
    let leaf = depth == 0 || rng.random_bool(0.25);
    if leaf {
        return match rng.random_range(0..8) {
            0 => KatExp::one(),
            1 => KatExp::zero(),
            2 => KatExp::Test(random_guard(rng, u)),
            _ => KatExp::Act(random_action(rng, u)),
        };
    }
    match rng.random_range(0..7) {
        0 | 1 => random_kat(rng, u, depth - 1).plus(random_kat(rng, u, depth - 1)),
        2..=4 => random_kat(rng, u, depth - 1).seq(random_kat(rng, u, depth - 1)),
        _ => random_kat(rng, u, depth - 1).star(),
    }
}

/// A functional interpretation with 1 to `max_states` states: every test
/// holds in a random subset of the states, and every action is a random
/// partial function.
pub fn random_interpretation<R: Rng>(
    rng: &mut R,
    u: &Universe,
    max_states: usize,
) -> Interpretation {
    let n = rng.random_range(1..=max_states.max(1));
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let tau: BTreeMap<String, Vec<String>> = u
        .tests()
        .iter()
        .map(|t| {
            let members = states
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .cloned()
                .collect();
            (t.clone(), members)
        })
        .collect();
    let sigma: BTreeMap<String, Vec<(String, String)>> = u
        .actions()
        .iter()
        .map(|p| {
            let mut pairs = Vec::new();
            for s in &states {
                if rng.random_bool(0.8) {
                    pairs.push((s.clone(), states[rng.random_range(0..n)].clone()));
                }
            }
            (p.clone(), pairs)
        })
        .collect();
    Interpretation {
        states,
        functional: true,
        tau,
        sigma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn height(e: &GkatExp) -> usize {
        match e {
            GkatExp::Test(_) | GkatExp::Act(_) => 0,
            GkatExp::If(_, e, f) | GkatExp::Seq(e, f) => 1 + height(e).max(height(f)),
            GkatExp::While(_, e) => 1 + height(e),
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let u = universe(3, 3);
        let a: Vec<GkatExp> = {
            let mut r = rng(7);
            (0..20).map(|_| random_gkat(&mut r, &u, 4)).collect()
        };
        let mut r = rng(7);
        let b: Vec<GkatExp> = (0..20).map(|_| random_gkat(&mut r, &u, 4)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn respects_depth_and_scope() {
        let mut r = rng(1);
        for _ in 0..200 {
            let u = random_universe(&mut r, 3, 3);
            let e = random_gkat(&mut r, &u, 4);
            assert!(height(&e) <= 4);
            assert!(e.scoped_in(&u));
            assert!(random_kat(&mut r, &u, 4).scoped_in(&u));
        }
    }

    #[test]
    fn interpretations_are_functional() {
        let mut r = rng(3);
        let u = universe(2, 2);
        for _ in 0..50 {
            let i = random_interpretation(&mut r, &u, 5);
            assert!(i.states.len() <= 5);
            i.validate().unwrap();
            let m = i.resolve(&u).unwrap();
            assert!(m.is_functional());
        }
    }
}
