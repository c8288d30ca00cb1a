//! Decide propositional equivalence of imperative programs.
//!
//! Programs are GKAT expressions (`if`/`while` programs over uninterpreted
//! tests and actions) or, more generally, KAT expressions. Both compile to
//! automata on guarded strings; equivalence is decided by a union-find walk
//! over the product of two automata, either as bisimilarity or as equality
//! of guarded languages.
//!
//! ```
//! use gkat::{check_gkat, parse_gkat, parse_gkat_in, Limits, Mode};
//!
//! let (u, lhs) = parse_gkat("tests: b\nactions: e\nif b then { e; while b do e } else skip").unwrap();
//! let rhs = parse_gkat_in("tests: b\nactions: e\nwhile b do e", &u).unwrap();
//! let verdict = check_gkat(&lhs, &rhs, &u, Mode::Bisim, &Limits::default()).unwrap();
//! assert!(verdict.is_equivalent());
//! ```

pub mod atoms;
pub mod automata;
pub mod equivalence;
pub mod error;
pub mod laws;
pub mod random;
pub mod semantics;
pub mod syntax;

pub use atoms::{eval, is_zero, satisfying, Atom, AtomSet};
pub use automata::{build_gkat, build_kat, DetAutomaton, GuardedDfa, Outcome, StateId};
pub use equivalence::{check_gkat, check_kat, Divergence, Mode, Side, Verdict, Witness};
pub use error::{Error, Limits, Result};
pub use semantics::{GuardedLanguage, GuardedString, Interpretation, Relation};
pub use syntax::{
    parse_gkat, parse_gkat_in, parse_kat, parse_kat_in, ActionId, BExp, GkatExp, KatExp, Program,
    TestId, Universe,
};
