//! The axioms of KAT and GKAT as instantiable schemas, and a seeded runner
//! that checks random instances against the decision procedure.
//!
//! ```
//! use gkat::laws::{find_law, instantiate, Binding, Bindings};
//! use gkat::{ActionId, GkatExp, Program};
//!
//! let law = find_law("gkat.branch-idem").unwrap();
//! let mut bindings = Bindings::new();
//! bindings.insert("e".into(), Binding::Program(Program::Gkat(GkatExp::Act(ActionId(0)))));
//! bindings.insert("b".into(), Binding::Test(gkat::BExp::One));
//! let instance = instantiate(&law, &bindings).unwrap();
//! assert_eq!(instance.rhs, Program::Gkat(GkatExp::Act(ActionId(0))));
//! ```

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::atoms::is_zero;
use crate::equivalence::{check_gkat, check_kat, explain, Mode};
use crate::error::{Error, Limits, Result};
use crate::random::{random_bexp, random_gkat, random_kat, random_universe, rng};
use crate::syntax::{
    render_bexp, render_gkat, render_kat, BExp, GkatExp, KatExp, Program, Universe,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Kat,
    Gkat,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Kat => "kat",
            Family::Gkat => "gkat",
        }
    }
}

/// A test-valued template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    Hole(&'static str),
    Zero,
    One,
    Or(Box<Guard>, Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Not(Box<Guard>),
}

/// A program-valued template. `Plus` and `Star` occur only in KAT laws,
/// `If` and `While` only in GKAT laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Template {
    Hole(&'static str),
    Test(Guard),
    Plus(Box<Template>, Box<Template>),
    Seq(Box<Template>, Box<Template>),
    Star(Box<Template>),
    If(Guard, Box<Template>, Box<Template>),
    While(Guard, Box<Template>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleKind {
    Program,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaVar {
    pub name: &'static str,
    pub kind: HoleKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PremiseTemplate {
    Equivalent(Template, Template),
    Included(Template, Template),
    /// The termination condition of the (GKAT) program is unsatisfiable.
    Productive(Template),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawKind {
    Equation,
    Inclusion,
    ConditionalEquation,
    ConditionalInclusion,
}

impl LawKind {
    pub fn name(self) -> &'static str {
        match self {
            LawKind::Equation => "equation",
            LawKind::Inclusion => "inclusion",
            LawKind::ConditionalEquation => "conditionalEquation",
            LawKind::ConditionalInclusion => "conditionalInclusion",
        }
    }

    fn is_inclusion(self) -> bool {
        matches!(self, LawKind::Inclusion | LawKind::ConditionalInclusion)
    }
}

/// Builds bindings that satisfy a conditional law's premises.
pub type Constructor = fn(&mut ChaCha8Rng, &Universe, usize) -> Bindings;

#[derive(Debug, Clone)]
pub struct LawSchema {
    pub id: &'static str,
    pub family: Family,
    pub kind: LawKind,
    pub lhs: Template,
    pub rhs: Template,
    pub premises: Vec<PremiseTemplate>,
    /// False for rules kept only to confirm that the checker refutes them.
    pub sound: bool,
    /// Whether instances are also bisimilar, not just language equivalent.
    pub bisimilar: bool,
    pub note: Option<&'static str>,
    construct: Option<Constructor>,
}

impl LawSchema {
    /// Holes in order of first appearance.
    pub fn metavars(&self) -> Vec<MetaVar> {
        let mut out = Vec::new();
        self.lhs.holes(&mut out);
        self.rhs.holes(&mut out);
        for p in &self.premises {
            match p {
                PremiseTemplate::Equivalent(a, b) | PremiseTemplate::Included(a, b) => {
                    a.holes(&mut out);
                    b.holes(&mut out);
                }
                PremiseTemplate::Productive(a) => a.holes(&mut out),
            }
        }
        out
    }

    /// The law in algebraic notation, premises first.
    pub fn statement(&self) -> String {
        let rel = if self.kind.is_inclusion() {
            "≦"
        } else {
            "≡"
        };
        let conclusion = format!("{} {rel} {}", self.lhs, self.rhs);
        if self.premises.is_empty() {
            return conclusion;
        }
        let premises: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        format!("{} ⟹ {conclusion}", premises.join(" and "))
    }

    pub fn to_json(&self) -> Value {
        let metavars: Vec<Value> = self
            .metavars()
            .iter()
            .map(|m| {
                let kind = match m.kind {
                    HoleKind::Program => "program",
                    HoleKind::Test => "test",
                };
                json!({ "name": m.name, "kind": kind })
            })
            .collect();
        let mut v = json!({
            "id": self.id,
            "family": self.family.name(),
            "kind": self.kind.name(),
            "metavars": metavars,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "premises": self.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "sound": self.sound,
            "bisimilar": self.bisimilar,
        });
        if let Some(note) = self.note {
            v.as_object_mut()
                .expect("object")
                .insert("note".into(), json!(note));
        }
        v
    }
}

impl Guard {
    fn holes(&self, out: &mut Vec<MetaVar>) {
        match self {
            Guard::Hole(name) => push_hole(out, name, HoleKind::Test),
            Guard::Zero | Guard::One => {}
            Guard::Or(a, b) | Guard::And(a, b) => {
                a.holes(out);
                b.holes(out);
            }
            Guard::Not(a) => a.holes(out),
        }
    }

    fn fill(&self, bindings: &Bindings, law: &str) -> Result<BExp> {
        Ok(match self {
            Guard::Hole(name) => match bindings.get(*name) {
                Some(Binding::Test(b)) => b.clone(),
                Some(Binding::Program(_)) => return Err(miskinded(law, name, "a test")),
                None => return Err(missing(law, name)),
            },
            Guard::Zero => BExp::Zero,
            Guard::One => BExp::One,
            Guard::Or(a, b) => a.fill(bindings, law)?.or(b.fill(bindings, law)?),
            Guard::And(a, b) => a.fill(bindings, law)?.and(b.fill(bindings, law)?),
            Guard::Not(a) => a.fill(bindings, law)?.not(),
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Guard::Or(..) => 1,
            Guard::And(..) => 2,
            _ => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Guard::Hole(name) => f.write_str(name)?,
            Guard::Zero => f.write_str("0")?,
            Guard::One => f.write_str("1")?,
            Guard::Or(a, b) => {
                a.write(f, 1)?;
                f.write_str(" + ")?;
                b.write(f, 2)?;
            }
            Guard::And(a, b) => {
                a.write(f, 2)?;
                f.write_str("·")?;
                b.write(f, 3)?;
            }
            Guard::Not(a) => {
                f.write_str("!")?;
                a.write(f, 3)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

fn push_hole(out: &mut Vec<MetaVar>, name: &'static str, kind: HoleKind) {
    if !out.iter().any(|m| m.name == name) {
        out.push(MetaVar { name, kind });
    }
}

fn missing(law: &str, name: &str) -> Error {
    Error::Binding {
        law: law.to_string(),
        message: format!("no binding for `{name}`"),
    }
}

fn miskinded(law: &str, name: &str, expected: &str) -> Error {
    Error::Binding {
        law: law.to_string(),
        message: format!("`{name}` must be bound to {expected}"),
    }
}

impl Template {
    fn holes(&self, out: &mut Vec<MetaVar>) {
        match self {
            Template::Hole(name) => push_hole(out, name, HoleKind::Program),
            Template::Test(g) => g.holes(out),
            Template::Plus(a, b) | Template::Seq(a, b) => {
                a.holes(out);
                b.holes(out);
            }
            Template::Star(a) => a.holes(out),
            Template::If(g, a, b) => {
                a.holes(out);
                g.holes(out);
                b.holes(out);
            }
            Template::While(g, a) => {
                a.holes(out);
                g.holes(out);
            }
        }
    }

    fn fill_kat(&self, bindings: &Bindings, law: &str) -> Result<KatExp> {
        Ok(match self {
            Template::Hole(name) => match bindings.get(*name) {
                Some(Binding::Program(p)) => p.to_kat(),
                Some(Binding::Test(_)) => return Err(miskinded(law, name, "a program")),
                None => return Err(missing(law, name)),
            },
            Template::Test(g) => KatExp::Test(g.fill(bindings, law)?),
            Template::Plus(a, b) => a.fill_kat(bindings, law)?.plus(b.fill_kat(bindings, law)?),
            Template::Seq(a, b) => a.fill_kat(bindings, law)?.seq(b.fill_kat(bindings, law)?),
            Template::Star(a) => a.fill_kat(bindings, law)?.star(),
            Template::If(..) | Template::While(..) => unreachable!("GKAT template in a KAT law"),
        })
    }

    fn fill_gkat(&self, bindings: &Bindings, law: &str) -> Result<GkatExp> {
        Ok(match self {
            Template::Hole(name) => match bindings.get(*name) {
                Some(Binding::Program(Program::Gkat(e))) => e.clone(),
                Some(_) => return Err(miskinded(law, name, "a GKAT program")),
                None => return Err(missing(law, name)),
            },
            Template::Test(g) => GkatExp::Test(g.fill(bindings, law)?),
            Template::Seq(a, b) => a.fill_gkat(bindings, law)?.seq(b.fill_gkat(bindings, law)?),
            Template::If(g, a, b) => GkatExp::if_then_else(
                g.fill(bindings, law)?,
                a.fill_gkat(bindings, law)?,
                b.fill_gkat(bindings, law)?,
            ),
            Template::While(g, a) => {
                GkatExp::while_do(g.fill(bindings, law)?, a.fill_gkat(bindings, law)?)
            }
            Template::Plus(..) | Template::Star(..) => unreachable!("KAT template in a GKAT law"),
        })
    }

    fn fill(&self, family: Family, bindings: &Bindings, law: &str) -> Result<Program> {
        Ok(match family {
            Family::Kat => Program::Kat(self.fill_kat(bindings, law)?),
            Family::Gkat => Program::Gkat(self.fill_gkat(bindings, law)?),
        })
    }

    fn prec(&self) -> u8 {
        match self {
            Template::Plus(..) | Template::If(..) => 1,
            Template::Seq(..) => 2,
            _ => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Template::Hole(name) => f.write_str(name)?,
            Template::Test(g) => g.write(f, min.max(1))?,
            Template::Plus(a, b) => {
                a.write(f, 1)?;
                f.write_str(" + ")?;
                b.write(f, 2)?;
            }
            Template::If(g, a, b) => {
                a.write(f, 2)?;
                write!(f, " +_")?;
                g.write(f, 3)?;
                f.write_str(" ")?;
                b.write(f, 2)?;
            }
            Template::Seq(a, b) => {
                a.write(f, 3)?;
                f.write_str("·")?;
                b.write(f, 2)?;
            }
            Template::Star(a) => {
                a.write(f, 3)?;
                f.write_str("*")?;
            }
            Template::While(g, a) => {
                a.write(f, 3)?;
                f.write_str("^(")?;
                g.write(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl fmt::Display for PremiseTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PremiseTemplate::Equivalent(a, b) => write!(f, "{a} ≡ {b}"),
            PremiseTemplate::Included(a, b) => write!(f, "{a} ≦ {b}"),
            PremiseTemplate::Productive(a) => write!(f, "E({a}) ≡ 0"),
        }
    }
}

/// What a metavariable is bound to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    Program(Program),
    Test(BExp),
}

pub type Bindings = BTreeMap<String, Binding>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Premise {
    Equivalent(Program, Program),
    Included(Program, Program),
    Productive(GkatExp),
}

/// A law with its holes filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub lhs: Program,
    pub rhs: Program,
    pub premises: Vec<Premise>,
}

/// Fills a law's templates. Every metavariable must be bound, programs to
/// program holes and tests to test holes; GKAT laws need GKAT programs.
pub fn instantiate(law: &LawSchema, bindings: &Bindings) -> Result<Instance> {
    for m in law.metavars() {
        match (m.kind, bindings.get(m.name)) {
            (_, None) => return Err(missing(law.id, m.name)),
            (HoleKind::Program, Some(Binding::Test(_))) => {
                return Err(miskinded(law.id, m.name, "a program"))
            }
            (HoleKind::Test, Some(Binding::Program(_))) => {
                return Err(miskinded(law.id, m.name, "a test"))
            }
            _ => {}
        }
    }
    let fill = |t: &Template| t.fill(law.family, bindings, law.id);
    let premises = law
        .premises
        .iter()
        .map(|p| {
            Ok(match p {
                PremiseTemplate::Equivalent(a, b) => Premise::Equivalent(fill(a)?, fill(b)?),
                PremiseTemplate::Included(a, b) => Premise::Included(fill(a)?, fill(b)?),
                PremiseTemplate::Productive(a) => {
                    Premise::Productive(a.fill_gkat(bindings, law.id)?)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance {
        lhs: fill(&law.lhs)?,
        rhs: fill(&law.rhs)?,
        premises,
    })
}

fn hole(name: &'static str) -> Template {
    Template::Hole(name)
}

fn test(name: &'static str) -> Guard {
    Guard::Hole(name)
}

fn lit(g: Guard) -> Template {
    Template::Test(g)
}

fn not(g: Guard) -> Guard {
    Guard::Not(Box::new(g))
}

fn or(a: Guard, b: Guard) -> Guard {
    Guard::Or(Box::new(a), Box::new(b))
}

fn and(a: Guard, b: Guard) -> Guard {
    Guard::And(Box::new(a), Box::new(b))
}

fn plus(a: Template, b: Template) -> Template {
    Template::Plus(Box::new(a), Box::new(b))
}

fn seq(a: Template, b: Template) -> Template {
    Template::Seq(Box::new(a), Box::new(b))
}

fn star(a: Template) -> Template {
    Template::Star(Box::new(a))
}

fn ite(a: Template, g: Guard, b: Template) -> Template {
    Template::If(g, Box::new(a), Box::new(b))
}

fn while_do(a: Template, g: Guard) -> Template {
    Template::While(g, Box::new(a))
}

fn law(id: &'static str, family: Family, lhs: Template, rhs: Template) -> LawSchema {
    LawSchema {
        id,
        family,
        kind: LawKind::Equation,
        lhs,
        rhs,
        premises: vec![],
        sound: true,
        bisimilar: family == Family::Gkat,
        note: None,
        construct: None,
    }
}

fn kat_laws() -> Vec<LawSchema> {
    let k = Family::Kat;
    let (b, c, d) = (|| test("b"), || test("c"), || test("d"));
    let (e, f, g) = (|| hole("e"), || hole("f"), || hole("g"));
    let zero = || lit(Guard::Zero);
    let one = || lit(Guard::One);
    let mut star_left = law("kat.star-induction-left", k, seq(star(f()), e()), g());
    star_left.kind = LawKind::ConditionalInclusion;
    star_left.premises = vec![PremiseTemplate::Included(plus(e(), seq(f(), g())), g())];
    star_left.construct = Some(construct_star_left);
    let mut star_right = law("kat.star-induction-right", k, seq(e(), star(g())), f());
    star_right.kind = LawKind::ConditionalInclusion;
    star_right.premises = vec![PremiseTemplate::Included(plus(e(), seq(f(), g())), f())];
    star_right.construct = Some(construct_star_right);
    vec![
        law("kat.bool-excluded-middle", k, lit(or(b(), not(b()))), one()),
        law("kat.bool-contradiction", k, lit(and(b(), not(b()))), zero()),
        law("kat.bool-idem", k, lit(and(b(), b())), lit(b())),
        law("kat.bool-comm", k, lit(and(b(), c())), lit(and(c(), b()))),
        law(
            "kat.bool-distrib",
            k,
            lit(or(b(), and(c(), d()))),
            lit(and(or(b(), c()), or(b(), d()))),
        ),
        law("kat.plus-zero", k, plus(e(), zero()), e()),
        law("kat.plus-idem", k, plus(e(), e()), e()),
        law("kat.plus-comm", k, plus(e(), f()), plus(f(), e())),
        law("kat.seq-one-right", k, seq(e(), one()), e()),
        law("kat.seq-one-left", k, seq(one(), e()), e()),
        law("kat.annihilation", k, seq(e(), zero()), zero()),
        law("kat.annihilation-left", k, seq(zero(), e()), zero()),
        law(
            "kat.plus-assoc",
            k,
            plus(e(), plus(f(), g())),
            plus(plus(e(), f()), g()),
        ),
        law(
            "kat.seq-assoc",
            k,
            seq(e(), seq(f(), g())),
            seq(seq(e(), f()), g()),
        ),
        law(
            "kat.distrib-left",
            k,
            seq(e(), plus(f(), g())),
            plus(seq(e(), f()), seq(e(), g())),
        ),
        law(
            "kat.distrib-right",
            k,
            seq(plus(e(), f()), g()),
            plus(seq(e(), g()), seq(f(), g())),
        ),
        law(
            "kat.star-unroll",
            k,
            plus(one(), seq(e(), star(e()))),
            star(e()),
        ),
        law(
            "kat.star-unroll-right",
            k,
            plus(one(), seq(star(e()), e())),
            star(e()),
        ),
        star_left,
        star_right,
    ]
}

fn gkat_laws() -> Vec<LawSchema> {
    let k = Family::Gkat;
    let (b, c) = (|| test("b"), || test("c"));
    let (e, f, g) = (|| hole("e"), || hole("f"), || hole("g"));
    let zero = || lit(Guard::Zero);
    let one = || lit(Guard::One);
    let mut skew_assoc = law(
        "gkat.branch-skew-assoc",
        k,
        ite(ite(e(), b(), f()), c(), g()),
        ite(e(), and(b(), c()), ite(f(), c(), g())),
    );
    skew_assoc.note = Some("the left-hand side's third operand `g` is restored; it is missing in the usual printed form");
    let mut annihilation_right = law("gkat.annihilation-right", k, seq(e(), zero()), zero());
    annihilation_right.bisimilar = false;
    annihilation_right.note =
        Some("late failure is language equivalent to, but not bisimilar with, early failure");
    let fixpoint_premise = || PremiseTemplate::Equivalent(g(), ite(seq(e(), g()), b(), f()));
    let mut unique = law("gkat.unique-fixpoint", k, g(), seq(while_do(e(), b()), f()));
    unique.kind = LawKind::ConditionalEquation;
    unique.premises = vec![fixpoint_premise(), PremiseTemplate::Productive(e())];
    unique.bisimilar = false;
    unique.construct = Some(construct_unique_fixpoint);
    let mut least = law("gkat.least-fixpoint", k, seq(while_do(e(), b()), f()), g());
    least.kind = LawKind::ConditionalInclusion;
    least.premises = vec![PremiseTemplate::Included(ite(seq(e(), g()), b(), f()), g())];
    least.bisimilar = false;
    least.construct = Some(construct_least_fixpoint);
    let mut unguarded = law(
        "gkat.unique-fixpoint-unguarded",
        k,
        g(),
        seq(while_do(e(), b()), f()),
    );
    unguarded.kind = LawKind::ConditionalEquation;
    unguarded.premises = vec![fixpoint_premise()];
    unguarded.sound = false;
    unguarded.bisimilar = false;
    unguarded.note = Some("unsound without the productivity premise: e = f = g = b = 1 satisfies the premise but 1 ≢ 1^(1)·1");
    vec![
        law("gkat.branch-idem", k, ite(e(), b(), e()), e()),
        law(
            "gkat.branch-skew-comm",
            k,
            ite(e(), b(), f()),
            ite(f(), not(b()), e()),
        ),
        skew_assoc,
        law(
            "gkat.guard-absorb",
            k,
            ite(e(), b(), f()),
            ite(seq(lit(b()), e()), b(), f()),
        ),
        law(
            "gkat.right-distrib",
            k,
            ite(seq(e(), g()), b(), seq(f(), g())),
            seq(ite(e(), b(), f()), g()),
        ),
        law(
            "gkat.seq-assoc",
            k,
            seq(seq(e(), f()), g()),
            seq(e(), seq(f(), g())),
        ),
        law("gkat.annihilation-left", k, seq(zero(), e()), zero()),
        annihilation_right,
        law("gkat.seq-one-left", k, seq(one(), e()), e()),
        law("gkat.seq-one-right", k, seq(e(), one()), e()),
        law(
            "gkat.loop-unroll",
            k,
            while_do(e(), b()),
            ite(seq(e(), while_do(e(), b())), b(), one()),
        ),
        law(
            "gkat.loop-guard",
            k,
            while_do(seq(lit(c()), e()), b()),
            while_do(ite(e(), c(), one()), b()),
        ),
        unique,
        least,
        unguarded,
    ]
}

/// The catalogue for one family.
pub fn list_laws(family: Family) -> Vec<LawSchema> {
    match family {
        Family::Kat => kat_laws(),
        Family::Gkat => gkat_laws(),
    }
}

pub fn all_laws() -> Vec<LawSchema> {
    let mut laws = kat_laws();
    laws.extend(gkat_laws());
    laws
}

pub fn find_law(id: &str) -> Option<LawSchema> {
    all_laws().into_iter().find(|l| l.id == id)
}

pub fn catalogue_json(laws: &[LawSchema]) -> Value {
    Value::Array(laws.iter().map(LawSchema::to_json).collect())
}

fn program(e: GkatExp) -> Binding {
    Binding::Program(Program::Gkat(e))
}

fn kat_program(e: KatExp) -> Binding {
    Binding::Program(Program::Kat(e))
}

fn bindings<const N: usize>(pairs: [(&str, Binding); N]) -> Bindings {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// `g := f*·(e + h)` satisfies `e + f·g ≦ g`.
fn construct_star_left(rng: &mut ChaCha8Rng, u: &Universe, depth: usize) -> Bindings {
    let e = random_kat(rng, u, depth);
    let f = random_kat(rng, u, depth);
    let h = random_kat(rng, u, depth);
    let g = f.clone().star().seq(e.clone().plus(h));
    bindings([
        ("e", kat_program(e)),
        ("f", kat_program(f)),
        ("g", kat_program(g)),
    ])
}

/// `f := (e + h)·g*` satisfies `e + f·g ≦ f`.
fn construct_star_right(rng: &mut ChaCha8Rng, u: &Universe, depth: usize) -> Bindings {
    let e = random_kat(rng, u, depth);
    let g = random_kat(rng, u, depth);
    let h = random_kat(rng, u, depth);
    let f = e.clone().plus(h).seq(g.clone().star());
    bindings([
        ("e", kat_program(e)),
        ("f", kat_program(f)),
        ("g", kat_program(g)),
    ])
}

/// A productive body `e`, and `g` the loop `e^(b)·f` unrolled once.
fn construct_unique_fixpoint(rng: &mut ChaCha8Rng, u: &Universe, depth: usize) -> Bindings {
    let mut e = random_gkat(rng, u, depth);
    if !is_zero(&e.termination_condition(), u, &Limits::default()).unwrap_or(false) {
        let p = crate::syntax::ActionId(rng.random_range(0..u.actions().len()));
        e = GkatExp::Act(p).seq(e);
    }
    let b = random_bexp(rng, u, 1);
    let f = random_gkat(rng, u, depth);
    let body = e
        .clone()
        .seq(GkatExp::while_do(b.clone(), e.clone()).seq(f.clone()));
    let g = GkatExp::if_then_else(b.clone(), body, f.clone());
    bindings([
        ("e", program(e)),
        ("b", Binding::Test(b)),
        ("f", program(f)),
        ("g", program(g)),
    ])
}

/// `f := c·f0` and `g := e^(b)·(f0 +_c h)`, so that `e·g +_b f ≦ g`.
fn construct_least_fixpoint(rng: &mut ChaCha8Rng, u: &Universe, depth: usize) -> Bindings {
    let e = random_gkat(rng, u, depth);
    let b = random_bexp(rng, u, 1);
    let c = random_bexp(rng, u, 1);
    let f0 = random_gkat(rng, u, depth);
    let h = random_gkat(rng, u, depth);
    let f = GkatExp::Test(c.clone()).seq(f0.clone());
    let g = GkatExp::while_do(b.clone(), e.clone()).seq(GkatExp::if_then_else(c, f0, h));
    bindings([
        ("e", program(e)),
        ("b", Binding::Test(b)),
        ("f", program(f)),
        ("g", program(g)),
    ])
}

/// Settings for checking random instances of laws.
#[derive(Debug, Clone)]
pub struct LawCheckConfig {
    pub samples: usize,
    pub seed: u64,
    pub max_tests: usize,
    pub max_actions: usize,
    pub depth: usize,
    pub limits: Limits,
}

impl Default for LawCheckConfig {
    fn default() -> Self {
        LawCheckConfig {
            samples: 200,
            seed: 0,
            max_tests: 3,
            max_actions: 3,
            depth: 4,
            limits: Limits::default(),
        }
    }
}

/// One instance on which a law did not behave as expected.
#[derive(Debug, Clone)]
pub struct LawFailure {
    pub sample: usize,
    pub mode: Mode,
    pub lhs: String,
    pub rhs: String,
    pub explanation: String,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub id: &'static str,
    pub sound: bool,
    pub samples: usize,
    /// Random instances that happened to satisfy the premises.
    pub premise_held: usize,
    /// Instances built to satisfy the premises.
    pub constructed: usize,
    pub failures: Vec<LawFailure>,
    /// For unsound rules: an instance where the premises hold and the
    /// conclusion fails.
    pub refutation: Option<LawFailure>,
}

impl LawReport {
    /// Sound laws pass with no failures; unsound rules pass when refuted.
    pub fn passed(&self) -> bool {
        if self.sound {
            self.failures.is_empty()
        } else {
            self.refutation.is_some()
        }
    }
}

fn render(p: &Program, u: &Universe) -> String {
    match p {
        Program::Gkat(e) => render_gkat(e, u),
        Program::Kat(e) => render_kat(e, u),
    }
}

fn holds(
    family: Family,
    lhs: &Program,
    rhs: &Program,
    mode: Mode,
    u: &Universe,
    limits: &Limits,
) -> Result<Option<String>> {
    let verdict = match (family, lhs, rhs) {
        (Family::Gkat, Program::Gkat(e), Program::Gkat(f)) => check_gkat(e, f, u, mode, limits)?,
        _ => check_kat(&lhs.to_kat(), &rhs.to_kat(), u, mode, limits)?,
    };
    if verdict.is_equivalent() {
        Ok(None)
    } else {
        Ok(Some(explain(&verdict, u)?))
    }
}

fn premises_hold(family: Family, inst: &Instance, u: &Universe, limits: &Limits) -> Result<bool> {
    for p in &inst.premises {
        let ok = match p {
            Premise::Equivalent(a, b) => holds(family, a, b, Mode::Lang, u, limits)?.is_none(),
            Premise::Included(a, b) => {
                holds(family, a, b, Mode::LangInclusion, u, limits)?.is_none()
            }
            Premise::Productive(e) => is_zero(&e.termination_condition(), u, limits)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn random_bindings(law: &LawSchema, rng: &mut ChaCha8Rng, u: &Universe, depth: usize) -> Bindings {
    law.metavars()
        .into_iter()
        .map(|m| {
            let value = match (m.kind, law.family) {
                (HoleKind::Test, _) => Binding::Test(random_bexp(rng, u, 2)),
                (HoleKind::Program, Family::Gkat) => program(random_gkat(rng, u, depth)),
                (HoleKind::Program, Family::Kat) => kat_program(random_kat(rng, u, depth)),
            };
            (m.name.to_string(), value)
        })
        .collect()
}

/// A stable per-law seed offset, so laws draw independent samples.
fn law_seed(seed: u64, id: &str) -> u64 {
    id.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Checks `config.samples` instances of `law`. Conditional laws use random
/// instances that satisfy their premises, and constructed ones otherwise.
/// Unsound rules are searched for a refutation, starting from the all-`1`
/// instance.
pub fn check_law(law: &LawSchema, config: &LawCheckConfig) -> Result<LawReport> {
    let mut rng = rng(law_seed(config.seed, law.id));
    let mut report = LawReport {
        id: law.id,
        sound: law.sound,
        samples: config.samples,
        premise_held: 0,
        constructed: 0,
        failures: vec![],
        refutation: None,
    };
    let rel = if law.kind.is_inclusion() {
        Mode::LangInclusion
    } else {
        Mode::Lang
    };
    for sample in 0..config.samples {
        let u = random_universe(&mut rng, config.max_tests, config.max_actions);
        let mut b = if !law.sound && sample == 0 {
            all_ones(law)
        } else {
            random_bindings(law, &mut rng, &u, config.depth)
        };
        let mut inst = instantiate(law, &b)?;
        if !law.premises.is_empty() {
            if premises_hold(law.family, &inst, &u, &config.limits)? {
                report.premise_held += 1;
            } else if let Some(construct) = law.construct {
                b = construct(&mut rng, &u, config.depth);
                inst = instantiate(law, &b)?;
                report.constructed += 1;
                if !premises_hold(law.family, &inst, &u, &config.limits)? {
                    report.failures.push(LawFailure {
                        sample,
                        mode: rel,
                        lhs: render(&inst.lhs, &u),
                        rhs: render(&inst.rhs, &u),
                        explanation: "constructed instance violates the premises".into(),
                    });
                    continue;
                }
            } else {
                continue;
            }
        }
        let mut modes = vec![rel];
        if law.bisimilar {
            modes.push(Mode::Bisim);
        }
        for mode in modes {
            if let Some(explanation) =
                holds(law.family, &inst.lhs, &inst.rhs, mode, &u, &config.limits)?
            {
                let failure = LawFailure {
                    sample,
                    mode,
                    lhs: render(&inst.lhs, &u),
                    rhs: render(&inst.rhs, &u),
                    explanation,
                };
                if law.sound {
                    report.failures.push(failure);
                } else if report.refutation.is_none() {
                    report.refutation = Some(failure);
                }
            }
        }
    }
    Ok(report)
}

fn all_ones(law: &LawSchema) -> Bindings {
    law.metavars()
        .into_iter()
        .map(|m| {
            let value = match (m.kind, law.family) {
                (HoleKind::Test, _) => Binding::Test(BExp::One),
                (HoleKind::Program, Family::Gkat) => program(GkatExp::one()),
                (HoleKind::Program, Family::Kat) => kat_program(KatExp::one()),
            };
            (m.name.to_string(), value)
        })
        .collect()
}

/// Renders bindings for messages.
pub fn render_bindings(b: &Bindings, u: &Universe) -> String {
    b.iter()
        .map(|(k, v)| {
            let text = match v {
                Binding::Program(p) => render(p, u),
                Binding::Test(t) => render_bexp(t, u),
            };
            format!("{k} := {text}")
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{ActionId, TestId};

    fn u() -> Universe {
        Universe::new(["t", "u"], ["p", "q"]).unwrap()
    }

    #[test]
    fn ids_are_unique() {
        let laws = all_laws();
        for (i, l) in laws.iter().enumerate() {
            assert!(laws[..i].iter().all(|m| m.id != l.id), "{}", l.id);
        }
        assert_eq!(list_laws(Family::Kat).len(), 20);
        assert_eq!(list_laws(Family::Gkat).len(), 15);
    }

    #[test]
    fn statements() {
        let s = |id| find_law(id).unwrap().statement();
        assert_eq!(s("gkat.guard-absorb"), "e +_b f ≡ b·e +_b f");
        assert_eq!(s("kat.star-unroll"), "1 + e·e* ≡ e*");
        assert_eq!(s("gkat.loop-unroll"), "e^(b) ≡ e·e^(b) +_b 1");
        assert_eq!(
            s("gkat.branch-skew-assoc"),
            "(e +_b f) +_c g ≡ e +_(b·c) (f +_c g)"
        );
        assert_eq!(s("kat.star-induction-left"), "e + f·g ≦ g ⟹ f*·e ≦ g");
        assert_eq!(
            s("gkat.unique-fixpoint"),
            "g ≡ e·g +_b f and E(e) ≡ 0 ⟹ g ≡ e^(b)·f"
        );
    }

    #[test]
    fn instantiate_examples() {
        let (p, q) = (ActionId(0), ActionId(1));
        let (t, uu) = (BExp::Test(TestId(0)), BExp::Test(TestId(1)));
        let inst = instantiate(
            &find_law("gkat.branch-idem").unwrap(),
            &bindings([
                ("e", program(GkatExp::Act(p))),
                ("b", Binding::Test(t.clone())),
            ]),
        )
        .unwrap();
        assert_eq!(
            inst.lhs,
            Program::Gkat(GkatExp::if_then_else(
                t.clone(),
                GkatExp::Act(p),
                GkatExp::Act(p)
            ))
        );
        assert_eq!(inst.rhs, Program::Gkat(GkatExp::Act(p)));

        let inst = instantiate(
            &find_law("kat.annihilation").unwrap(),
            &bindings([("e", kat_program(KatExp::Act(p)))]),
        )
        .unwrap();
        assert_eq!(inst.lhs, Program::Kat(KatExp::Act(p).seq(KatExp::zero())));
        assert_eq!(inst.rhs, Program::Kat(KatExp::zero()));

        let inst = instantiate(
            &find_law("gkat.loop-guard").unwrap(),
            &bindings([
                ("e", program(GkatExp::Act(p))),
                ("b", Binding::Test(t.clone())),
                ("c", Binding::Test(uu.clone())),
            ]),
        )
        .unwrap();
        assert_eq!(render(&inst.lhs, &u()), "while t do { assert u; p }");
        assert_eq!(render(&inst.rhs, &u()), "while t do if u then p else skip");
        let _ = q;
    }

    #[test]
    fn binding_errors() {
        let law = find_law("gkat.branch-idem").unwrap();
        let e = program(GkatExp::Act(ActionId(0)));
        assert!(matches!(
            instantiate(&law, &bindings([("e", e.clone())])),
            Err(Error::Binding { .. })
        ));
        assert!(instantiate(&law, &bindings([("e", e.clone()), ("b", e.clone())])).is_err());
        let kat = kat_program(KatExp::Act(ActionId(0)));
        assert!(instantiate(
            &law,
            &bindings([("e", kat), ("b", Binding::Test(BExp::One))])
        )
        .is_err());
    }

    #[test]
    fn unsound_rule_is_refuted() {
        let law = find_law("gkat.unique-fixpoint-unguarded").unwrap();
        let report = check_law(
            &law,
            &LawCheckConfig {
                samples: 3,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.passed());
        let r = report.refutation.unwrap();
        assert_eq!(r.sample, 0);
        assert_eq!(r.lhs, "skip");
        assert!(r.explanation.contains("left accepts, right does not"));
    }

    #[test]
    fn quick_law_check() {
        let config = LawCheckConfig {
            samples: 10,
            depth: 3,
            ..Default::default()
        };
        for law in all_laws() {
            let report = check_law(&law, &config).unwrap();
            assert!(report.passed(), "{}: {:?}", law.id, report.failures.first());
        }
    }
}
