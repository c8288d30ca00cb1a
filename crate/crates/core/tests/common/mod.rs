//! Random corpora shared by the integration tests.

#![allow(dead_code)]

use gkat::random::{random_bexp, random_gkat, random_universe, rng};
use gkat::{ActionId, BExp, GkatExp, Universe};
use rand::Rng;

pub const SEED: u64 = 0x6b61_7432;
pub const MAX_TESTS: usize = 3;
pub const MAX_ACTIONS: usize = 3;
pub const DEPTH: usize = 4;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Rewrites one random subterm with a rule that preserves the guarded
/// language.
fn rewrite_preserving<R: Rng>(rng: &mut R, u: &Universe, e: &GkatExp) -> GkatExp {
    let descend = rng.random_bool(0.5);
    match e {
        GkatExp::If(b, x, y) if descend => {
            if rng.random_bool(0.5) {
                GkatExp::if_then_else(b.clone(), rewrite_preserving(rng, u, x), (**y).clone())
            } else {
                GkatExp::if_then_else(b.clone(), (**x).clone(), rewrite_preserving(rng, u, y))
            }
        }
        GkatExp::Seq(x, y) if descend => {
            if rng.random_bool(0.5) {
                rewrite_preserving(rng, u, x).seq((**y).clone())
            } else {
                (**x).clone().seq(rewrite_preserving(rng, u, y))
            }
        }
        GkatExp::While(b, x) if descend => {
            GkatExp::while_do(b.clone(), rewrite_preserving(rng, u, x))
        }
        _ => match (e, rng.random_range(0..6)) {
            (GkatExp::If(b, x, y), 0) => {
                GkatExp::if_then_else(b.clone().not(), (**y).clone(), (**x).clone())
            }
            (GkatExp::While(b, x), 1) => {
                GkatExp::if_then_else(b.clone(), (**x).clone().seq(e.clone()), GkatExp::one())
            }
            (GkatExp::While(b, _), 2) => e.clone().seq(GkatExp::Test(b.clone().not())),
            (GkatExp::Seq(x, y), 3) => match &**y {
                GkatExp::Seq(y1, y2) => (**x).clone().seq((**y1).clone()).seq((**y2).clone()),
                _ => e.clone().seq(GkatExp::one()),
            },
            (_, 4) => GkatExp::if_then_else(random_bexp(rng, u, 1), e.clone(), e.clone()),
            _ => GkatExp::one().seq(e.clone()),
        },
    }
}

/// Changes one random subterm in a way that usually changes the language.
fn mutate<R: Rng>(rng: &mut R, u: &Universe, e: &GkatExp) -> GkatExp {
    let descend = rng.random_bool(0.6);
    match e {
        GkatExp::If(b, x, y) if descend => {
            GkatExp::if_then_else(b.clone(), mutate(rng, u, x), (**y).clone())
        }
        GkatExp::Seq(x, y) if descend => (**x).clone().seq(mutate(rng, u, y)),
        GkatExp::While(b, x) if descend => GkatExp::while_do(b.clone(), mutate(rng, u, x)),
        GkatExp::If(b, x, y) => GkatExp::if_then_else(b.clone(), (**y).clone(), (**x).clone()),
        GkatExp::Act(ActionId(p)) => GkatExp::Act(ActionId((p + 1) % u.actions().len())),
        GkatExp::While(_, x) => GkatExp::while_do(random_bexp(rng, u, 1), (**x).clone()),
        _ => random_gkat(rng, u, 1),
    }
}

/// `n` pairs of GKAT programs over random universes: a third independent,
/// a third related by language-preserving rewrites, a third by mutation.
pub fn gkat_pairs(n: usize, seed: u64) -> Vec<(Universe, GkatExp, GkatExp)> {
    let mut rng = rng(seed);
    (0..n)
        .map(|i| {
            let u = random_universe(&mut rng, MAX_TESTS, MAX_ACTIONS);
            let e = random_gkat(&mut rng, &u, DEPTH);
            let f = match i % 3 {
                0 => random_gkat(&mut rng, &u, DEPTH),
                1 => {
                    let mut f = e.clone();
                    for _ in 0..rng.random_range(1..=3) {
                        f = rewrite_preserving(&mut rng, &u, &f);
                    }
                    f
                }
                _ => mutate(&mut rng, &u, &e),
            };
            (u, e, f)
        })
        .collect()
}

/// `n` random GKAT programs over random universes.
pub fn gkat_corpus(n: usize, seed: u64) -> Vec<(Universe, GkatExp)> {
    let mut rng = rng(seed);
    (0..n)
        .map(|_| {
            let u = random_universe(&mut rng, MAX_TESTS, MAX_ACTIONS);
            let e = random_gkat(&mut rng, &u, DEPTH);
            (u, e)
        })
        .collect()
}

/// The nested loop `(...(p^(b))^(b)...)^(b)` with `k` loops.
pub fn tower(k: usize) -> GkatExp {
    let b = BExp::Test(gkat::TestId(0));
    (0..k).fold(GkatExp::Act(ActionId(0)), |e, _| {
        GkatExp::while_do(b.clone(), e)
    })
}

/// Nested loops with an action before each inner loop:
/// `while b do { p; while b do { p; ... } }` with `k` loops.
pub fn action_tower(k: usize) -> GkatExp {
    let b = BExp::Test(gkat::TestId(0));
    let p = GkatExp::Act(ActionId(0));
    (1..k).fold(GkatExp::while_do(b.clone(), p.clone()), |e, _| {
        GkatExp::while_do(b.clone(), p.clone().seq(e))
    })
}
