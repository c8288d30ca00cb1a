//! Workloads shared by the benchmarks.

use gkat::{parse_gkat, parse_gkat_in, parse_kat, parse_kat_in};
use gkat::{ActionId, BExp, GkatExp, KatExp, TestId, Universe};

const TRIPLE_GKAT: &str = "tests: b c\nactions: e f g\n\
    e; while b do f; while c do { g; while b do f }";
const SINGLE_GKAT: &str = "tests: b c\nactions: e f g\n\
    e; while b or c do { if b then f else g }";
const TRIPLE_KAT: &str = "tests: b c\nactions: e f g\n\
    e;(b;f)*;!b;(c;g;(b;f)*;!b)*;!c";
const SINGLE_KAT: &str = "tests: b c\nactions: e f g\n\
    e;((b+c);(b;f + !b;g))*;!(b+c)";

/// The three-loop and single-loop versions of the same program, as GKAT.
pub fn flagship_gkat() -> (Universe, GkatExp, GkatExp) {
    let (u, triple) = parse_gkat(TRIPLE_GKAT).expect("valid program");
    let single = parse_gkat_in(SINGLE_GKAT, &u).expect("valid program");
    (u, triple, single)
}

/// The same pair written directly in KAT.
pub fn flagship_kat() -> (Universe, KatExp, KatExp) {
    let (u, triple) = parse_kat(TRIPLE_KAT).expect("valid program");
    let single = parse_kat_in(SINGLE_KAT, &u).expect("valid program");
    (u, triple, single)
}

/// One test `b` and one action `p`.
pub fn tower_universe() -> Universe {
    Universe::new(["b"], ["p"]).expect("distinct names")
}

/// The nested loop `(...(p^(b))^(b)...)^(b)` with `k` loops.
pub fn tower(k: usize) -> GkatExp {
    let b = BExp::Test(TestId(0));
    (0..k).fold(GkatExp::Act(ActionId(0)), |e, _| {
        GkatExp::while_do(b.clone(), e)
    })
}

/// `while b do { p; while b do { p; ... } }` with `k` loops: one automaton
/// state per level.
pub fn action_tower(k: usize) -> GkatExp {
    let b = BExp::Test(TestId(0));
    let p = GkatExp::Act(ActionId(0));
    (1..k).fold(GkatExp::while_do(b.clone(), p.clone()), |e, _| {
        GkatExp::while_do(b.clone(), p.clone().seq(e))
    })
}
