//! Pretty-printers inverse to the parsers.
//!
//! `parse(render(e)) == e` holds for every GKAT expression. For KAT, the
//! algebraic parser merges `+`/`;` between two tests into one Boolean test,
//! so the round trip holds for expressions already in that form
//! (see [`KatExp::fold_tests`]).

use super::{BExp, GkatExp, KatExp, Universe};

/// Renders a GKAT expression in the imperative syntax (program body only).
pub fn render_gkat(e: &GkatExp, u: &Universe) -> String {
    let mut out = String::new();
    gkat_prog(e, u, &mut out);
    out
}

/// Renders a KAT expression in the algebraic syntax (program body only).
pub fn render_kat(e: &KatExp, u: &Universe) -> String {
    let mut out = String::new();
    kat(e, u, 1, &mut out);
    out
}

/// Renders a test with `or`/`and`/`not`.
pub fn render_bexp(b: &BExp, u: &Universe) -> String {
    let mut out = String::new();
    bexp(b, u, 1, &mut out);
    out
}

fn gkat_prog(e: &GkatExp, u: &Universe, out: &mut String) {
    match e {
        GkatExp::Seq(first, rest) => {
            // A left-nested sequence is braced by `gkat_block`.
            gkat_block(first, u, out);
            out.push_str("; ");
            gkat_prog(rest, u, out);
        }
        _ => gkat_block(e, u, out),
    }
}

fn gkat_block(e: &GkatExp, u: &Universe, out: &mut String) {
    match e {
        GkatExp::Seq(..) => {
            out.push_str("{ ");
            gkat_prog(e, u, out);
            out.push_str(" }");
        }
        GkatExp::Test(BExp::One) => out.push_str("skip"),
        GkatExp::Test(BExp::Zero) => out.push_str("fail"),
        GkatExp::Test(b) => {
            out.push_str("assert ");
            bexp(b, u, 1, out);
        }
        GkatExp::Act(a) => out.push_str(u.action_name(*a)),
        GkatExp::If(b, then, els) => {
            out.push_str("if ");
            bexp(b, u, 1, out);
            out.push_str(" then ");
            gkat_block(then, u, out);
            out.push_str(" else ");
            gkat_block(els, u, out);
        }
        GkatExp::While(b, body) => {
            out.push_str("while ");
            bexp(b, u, 1, out);
            out.push_str(" do ");
            gkat_block(body, u, out);
        }
    }
}

// Precedence levels: 1 = or, 2 = and, 3 = operand of `not`.
fn bexp(b: &BExp, u: &Universe, prec: u8, out: &mut String) {
    match b {
        BExp::Zero => out.push('0'),
        BExp::One => out.push('1'),
        BExp::Test(t) => out.push_str(u.test_name(*t)),
        BExp::Not(inner) => {
            out.push_str("not ");
            bexp(inner, u, 3, out);
        }
        BExp::Or(l, r) => parens(prec > 1, out, |out| {
            bexp(l, u, 1, out);
            out.push_str(" or ");
            bexp(r, u, 2, out);
        }),
        BExp::And(l, r) => parens(prec > 2, out, |out| {
            bexp(l, u, 2, out);
            out.push_str(" and ");
            bexp(r, u, 3, out);
        }),
    }
}

// Precedence levels: 1 = `+`, 2 = right operand of `;`, 3 = left operand of
// `;`, 4 = operand of `*` or `!`.
fn kat(e: &KatExp, u: &Universe, prec: u8, out: &mut String) {
    match e {
        KatExp::Test(b) => kat_test(b, u, prec, out),
        KatExp::Act(a) => out.push_str(u.action_name(*a)),
        KatExp::Plus(l, r) => parens(prec > 1, out, |out| {
            kat(l, u, 1, out);
            out.push_str(" + ");
            kat(r, u, 2, out);
        }),
        KatExp::Seq(l, r) => parens(prec > 2, out, |out| {
            kat(l, u, 3, out);
            out.push(';');
            kat(r, u, 2, out);
        }),
        KatExp::Star(inner) => {
            kat(inner, u, 4, out);
            out.push('*');
        }
    }
}

fn kat_test(b: &BExp, u: &Universe, prec: u8, out: &mut String) {
    match b {
        BExp::Zero => out.push('0'),
        BExp::One => out.push('1'),
        BExp::Test(t) => out.push_str(u.test_name(*t)),
        BExp::Not(inner) => {
            out.push('!');
            kat_test(inner, u, 4, out);
        }
        BExp::Or(l, r) => parens(prec > 1, out, |out| {
            kat_test(l, u, 1, out);
            out.push_str(" + ");
            kat_test(r, u, 2, out);
        }),
        BExp::And(l, r) => parens(prec > 2, out, |out| {
            kat_test(l, u, 3, out);
            out.push(';');
            kat_test(r, u, 2, out);
        }),
    }
}

fn parens(wrap: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    body(out);
    if wrap {
        out.push(')');
    }
}
