//! Parsers for the two surface syntaxes.
//!
//! Both formats start with a header:
//!
//! ```text
//! tests: b c
//! actions: e f g
//! ```
//!
//! followed by one program. `.gkat` programs use the imperative syntax
//! (`if`/`while`/`assert`/`skip`/`fail`, `;` for sequencing); `.kat` programs
//! use the algebraic notation with `+ ; * ! 0 1`.

use crate::error::{Error, Result};

use super::{ActionId, BExp, GkatExp, KatExp, TestId, Universe};

const KEYWORDS: &[&str] = &[
    "skip", "fail", "assert", "if", "then", "else", "while", "do", "or", "and", "not",
];

/// Parses an imperative GKAT program file.
pub fn parse_gkat(text: &str) -> Result<(Universe, GkatExp)> {
    let (universe, body) = parse_header(text)?;
    let exp = Parser::new(&body, &universe, &universe)?.gkat_program()?;
    Ok((universe, exp))
}

/// Parses a GKAT program file whose header must be a sub-universe of
/// `universe`; symbol indices refer to `universe`.
pub fn parse_gkat_in(text: &str, universe: &Universe) -> Result<GkatExp> {
    let (own, body) = parse_header(text)?;
    check_sub_universe(&own, universe)?;
    Parser::new(&body, &own, universe)?.gkat_program()
}

/// Parses an algebraic KAT program file.
pub fn parse_kat(text: &str) -> Result<(Universe, KatExp)> {
    let (universe, body) = parse_header(text)?;
    let exp = Parser::new(&body, &universe, &universe)?.kat_program()?;
    Ok((universe, exp))
}

/// Like [`parse_gkat_in`], for the algebraic syntax.
pub fn parse_kat_in(text: &str, universe: &Universe) -> Result<KatExp> {
    let (own, body) = parse_header(text)?;
    check_sub_universe(&own, universe)?;
    Parser::new(&body, &own, universe)?.kat_program()
}

fn check_sub_universe(own: &Universe, target: &Universe) -> Result<()> {
    for t in own.tests() {
        if target.test_id(t).is_none() {
            return Err(Error::UniverseMismatch(format!(
                "test `{t}` is not a test of the shared universe"
            )));
        }
    }
    for a in own.actions() {
        if target.action_id(a).is_none() {
            return Err(Error::UniverseMismatch(format!(
                "action `{a}` is not an action of the shared universe"
            )));
        }
    }
    Ok(())
}

/// Program body with its position in the original file.
#[derive(Debug, Clone)]
pub struct Body {
    text: String,
    first_line: usize,
}

/// Reads the `tests:` / `actions:` header. Returns the declared universe and
/// the remaining program text.
pub fn parse_header(text: &str) -> Result<(Universe, Body)> {
    let mut tests: Option<Vec<String>> = None;
    let mut actions: Option<Vec<String>> = None;
    let mut lines = text.lines().enumerate().peekable();
    while tests.is_none() || actions.is_none() {
        let Some((idx, line)) = lines.next() else {
            let missing = if tests.is_none() { "tests" } else { "actions" };
            return Err(Error::Syntax {
                line: text.lines().count().max(1),
                column: 1,
                message: format!("missing `{missing}:` header line"),
            });
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (slot, rest, key) = if let Some(rest) = trimmed.strip_prefix("tests:") {
            (&mut tests, rest, "tests")
        } else if let Some(rest) = trimmed.strip_prefix("actions:") {
            (&mut actions, rest, "actions")
        } else {
            return Err(Error::Syntax {
                line: idx + 1,
                column: 1,
                message: "expected `tests:` and `actions:` header lines before the program".into(),
            });
        };
        if slot.is_some() {
            return Err(Error::Syntax {
                line: idx + 1,
                column: 1,
                message: format!("duplicate `{key}:` header line"),
            });
        }
        let mut names = Vec::new();
        for name in rest.split_whitespace() {
            if !is_ident(name) || KEYWORDS.contains(&name) {
                let column = line.find(name).map_or(1, |c| c + 1);
                return Err(Error::Syntax {
                    line: idx + 1,
                    column,
                    message: format!("`{name}` is not a valid symbol name"),
                });
            }
            names.push(name.to_string());
        }
        *slot = Some(names);
    }
    let first_line = lines.peek().map_or(text.lines().count(), |(i, _)| *i);
    let body: Vec<&str> = lines.map(|(_, l)| l).collect();
    let universe = Universe::new(tests.unwrap_or_default(), actions.unwrap_or_default())?;
    Ok((
        universe,
        Body {
            text: body.join("\n"),
            first_line,
        },
    ))
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Semi,
    Plus,
    Star,
    Bang,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Bang => "`!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(body: &Body) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut last = (body.first_line + 1, 1);
    for (i, line) in body.text.lines().enumerate() {
        let lineno = body.first_line + i + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let column = j + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                j += 1;
                continue;
            }
            let tok = match c {
                ';' => Tok::Semi,
                '+' => Tok::Plus,
                '*' => Tok::Star,
                '!' => Tok::Bang,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '0' => Tok::Zero,
                '1' => Tok::One,
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = j;
                    while j + 1 < chars.len()
                        && (chars[j + 1].is_ascii_alphanumeric()
                            || chars[j + 1] == '_'
                            || chars[j + 1] == '\'')
                    {
                        j += 1;
                    }
                    Tok::Ident(chars[start..=j].iter().collect())
                }
                other => {
                    return Err(Error::Syntax {
                        line: lineno,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            out.push(Token {
                tok,
                line: lineno,
                column,
            });
            j += 1;
        }
        last = (lineno, chars.len() + 1);
    }
    out.push(Token {
        tok: Tok::Eof,
        line: last.0,
        column: last.1,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    /// Symbols declared by the file's own header.
    declared: &'a Universe,
    /// Universe whose indices the parsed expression uses.
    target: &'a Universe,
}

enum Symbol {
    Test(TestId),
    Action(ActionId),
}

impl<'a> Parser<'a> {
    fn new(body: &Body, declared: &'a Universe, target: &'a Universe) -> Result<Self> {
        Ok(Parser {
            tokens: lex(body)?,
            pos: 0,
            declared,
            target,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.here();
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, expected: &str) -> Result<T> {
        self.error(format!(
            "expected {expected}, found {}",
            self.peek().describe()
        ))
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn resolve(&self, name: &str, token: &Token) -> Result<Symbol> {
        if self.declared.test_id(name).is_some() {
            // Present by `check_sub_universe`.
            return Ok(Symbol::Test(self.target.test_id(name).expect("checked")));
        }
        if self.declared.action_id(name).is_some() {
            return Ok(Symbol::Action(
                self.target.action_id(name).expect("checked"),
            ));
        }
        Err(Error::UndeclaredSymbol {
            name: name.to_string(),
            line: token.line,
            column: token.column,
        })
    }

    // --- imperative syntax -------------------------------------------------

    fn gkat_program(mut self) -> Result<GkatExp> {
        let e = self.prog()?;
        self.expect_eof()?;
        Ok(e)
    }

    fn prog(&mut self) -> Result<GkatExp> {
        let mut stmts = vec![self.stmt()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            stmts.push(self.stmt()?);
        }
        let mut acc = stmts.pop().expect("nonempty");
        while let Some(s) = stmts.pop() {
            acc = s.seq(acc);
        }
        Ok(acc)
    }

    fn stmt(&mut self) -> Result<GkatExp> {
        let token = self.here().clone();
        match &token.tok {
            Tok::LBrace => {
                self.bump();
                let e = self.prog()?;
                self.expect(Tok::RBrace)?;
                Ok(e)
            }
            Tok::Ident(word) => match word.as_str() {
                "skip" => {
                    self.bump();
                    Ok(GkatExp::one())
                }
                "fail" => {
                    self.bump();
                    Ok(GkatExp::zero())
                }
                "assert" => {
                    self.bump();
                    Ok(GkatExp::Test(self.bexp()?))
                }
                "if" => {
                    self.bump();
                    let b = self.bexp()?;
                    self.expect_keyword("then")?;
                    let e = self.stmt()?;
                    self.expect_keyword("else")?;
                    let f = self.stmt()?;
                    Ok(GkatExp::if_then_else(b, e, f))
                }
                "while" => {
                    self.bump();
                    let b = self.bexp()?;
                    self.expect_keyword("do")?;
                    let e = self.stmt()?;
                    Ok(GkatExp::while_do(b, e))
                }
                kw if KEYWORDS.contains(&kw) => self.unexpected("a statement"),
                name => match self.resolve(name, &token)? {
                    Symbol::Action(a) => {
                        self.bump();
                        Ok(GkatExp::Act(a))
                    }
                    Symbol::Test(_) => self.error(format!(
                        "test `{name}` used as a statement; write `assert {name}`"
                    )),
                },
            },
            _ => self.unexpected("a statement"),
        }
    }

    fn bexp(&mut self) -> Result<BExp> {
        let mut b = self.bterm()?;
        while self.is_keyword("or") {
            self.bump();
            b = b.or(self.bterm()?);
        }
        Ok(b)
    }

    fn bterm(&mut self) -> Result<BExp> {
        let mut b = self.bfact()?;
        while self.is_keyword("and") {
            self.bump();
            b = b.and(self.bfact()?);
        }
        Ok(b)
    }

    fn bfact(&mut self) -> Result<BExp> {
        let token = self.here().clone();
        match &token.tok {
            Tok::Bang => {
                self.bump();
                Ok(self.bfact()?.not())
            }
            Tok::Zero => {
                self.bump();
                Ok(BExp::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(BExp::One)
            }
            Tok::LParen => {
                self.bump();
                let b = self.bexp()?;
                self.expect(Tok::RParen)?;
                Ok(b)
            }
            Tok::Ident(w) if w == "not" => {
                self.bump();
                Ok(self.bfact()?.not())
            }
            Tok::Ident(w) if KEYWORDS.contains(&w.as_str()) => self.unexpected("a test"),
            Tok::Ident(name) => match self.resolve(name, &token)? {
                Symbol::Test(t) => {
                    self.bump();
                    Ok(BExp::Test(t))
                }
                Symbol::Action(_) => self.error(format!("action `{name}` used as a test")),
            },
            _ => self.unexpected("a test"),
        }
    }

    // --- algebraic syntax --------------------------------------------------

    fn kat_program(mut self) -> Result<KatExp> {
        let e = self.kat_sum()?;
        self.expect_eof()?;
        Ok(e)
    }

    fn kat_sum(&mut self) -> Result<KatExp> {
        let mut e = self.kat_seq()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let f = self.kat_seq()?;
            e = match (e, f) {
                (KatExp::Test(b), KatExp::Test(c)) => KatExp::Test(b.or(c)),
                (e, f) => e.plus(f),
            };
        }
        Ok(e)
    }

    fn kat_seq(&mut self) -> Result<KatExp> {
        let mut factors = vec![self.kat_star()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            factors.push(self.kat_star()?);
        }
        let mut acc = factors.pop().expect("nonempty");
        while let Some(f) = factors.pop() {
            acc = match (f, acc) {
                (KatExp::Test(b), KatExp::Test(c)) => KatExp::Test(b.and(c)),
                (f, acc) => f.seq(acc),
            };
        }
        Ok(acc)
    }

    fn kat_star(&mut self) -> Result<KatExp> {
        let mut e = self.kat_unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            e = e.star();
        }
        Ok(e)
    }

    fn kat_unary(&mut self) -> Result<KatExp> {
        if *self.peek() == Tok::Bang {
            let bang = self.bump();
            return match self.kat_unary()? {
                KatExp::Test(b) => Ok(KatExp::Test(b.not())),
                _ => Err(Error::Syntax {
                    line: bang.line,
                    column: bang.column,
                    message: "`!` applies to tests only".into(),
                }),
            };
        }
        self.kat_atom()
    }

    fn kat_atom(&mut self) -> Result<KatExp> {
        let token = self.here().clone();
        match &token.tok {
            Tok::Zero => {
                self.bump();
                Ok(KatExp::zero())
            }
            Tok::One => {
                self.bump();
                Ok(KatExp::one())
            }
            Tok::LParen => {
                self.bump();
                let e = self.kat_sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let sym = self.resolve(name, &token)?;
                self.bump();
                Ok(match sym {
                    Symbol::Test(t) => KatExp::Test(BExp::Test(t)),
                    Symbol::Action(a) => KatExp::Act(a),
                })
            }
            _ => self.unexpected("an expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> BExp {
        BExp::Test(TestId(i))
    }

    #[test]
    fn while_desugars() {
        let (u, e) = parse_gkat("tests: b\nactions: p\nwhile b do p").unwrap();
        assert_eq!(u.tests(), ["b"]);
        assert_eq!(e, GkatExp::while_do(t(0), GkatExp::Act(ActionId(0))));
    }

    #[test]
    fn intro_program_desugars() {
        let (_, e) =
            parse_gkat("tests: b\nactions: e\nif b then { e; while b do e } else skip").unwrap();
        let act = GkatExp::Act(ActionId(0));
        assert_eq!(
            e,
            GkatExp::if_then_else(
                t(0),
                act.clone().seq(GkatExp::while_do(t(0), act)),
                GkatExp::one()
            )
        );
    }

    #[test]
    fn undeclared_symbol_is_reported_with_position() {
        let err = parse_gkat("tests:\nactions: p\nwhile c do p").unwrap_err();
        match err {
            Error::UndeclaredSymbol { name, line, column } => {
                assert_eq!(name, "c");
                assert_eq!((line, column), (3, 7));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conflicting_declaration() {
        assert!(matches!(
            parse_gkat("tests: x\nactions: x\nskip"),
            Err(Error::ConflictingSymbol(_))
        ));
    }

    #[test]
    fn sequencing_is_right_associated() {
        let (_, e) = parse_gkat("tests:\nactions: p q r\np; q; r").unwrap();
        let a = |i| GkatExp::Act(ActionId(i));
        assert_eq!(e, a(0).seq(a(1).seq(a(2))));
    }

    #[test]
    fn bare_test_needs_assert() {
        let err = parse_gkat("tests: b\nactions: p\nb; p").unwrap_err();
        assert!(err.to_string().contains("assert b"), "{err}");
        let (_, e) = parse_gkat("tests: b\nactions: p\nassert b; p").unwrap();
        assert_eq!(e, GkatExp::Test(t(0)).seq(GkatExp::Act(ActionId(0))));
    }

    #[test]
    fn gkat_syntax_errors() {
        assert!(matches!(
            parse_gkat("tests: b\nactions: p\nif b then p"),
            Err(Error::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            parse_gkat("tests: b\nactions: p\np;"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse_gkat("p"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn boolean_precedence() {
        let (_, e) = parse_gkat("tests: a b c\nactions:\nassert a or b and not c").unwrap();
        assert_eq!(e, GkatExp::Test(t(0).or(t(1).and(t(2).not()))));
    }

    #[test]
    fn kat_loop_encoding() {
        let (_, e) = parse_kat("tests: b\nactions: e f\ne;(b;f)*;!b").unwrap();
        let act = |i| KatExp::Act(ActionId(i));
        assert_eq!(
            e,
            act(0).seq(
                KatExp::Test(t(0))
                    .seq(act(1))
                    .star()
                    .seq(KatExp::Test(t(0).not()))
            )
        );
    }

    #[test]
    fn kat_constants_and_star() {
        assert_eq!(parse_kat("tests:\nactions:\n0").unwrap().1, KatExp::zero());
        assert_eq!(
            parse_kat("tests:\nactions: p\np*").unwrap().1,
            KatExp::Act(ActionId(0)).star()
        );
    }

    #[test]
    fn kat_negation_of_composite_test() {
        let (_, e) = parse_kat("tests: b c\nactions:\n!(b+c)").unwrap();
        assert_eq!(e, KatExp::Test(t(0).or(t(1)).not()));
        assert!(parse_kat("tests:\nactions: p\n!p").is_err());
    }

    #[test]
    fn parse_in_shared_universe() {
        let shared = Universe::new(["b", "c"], ["p", "q"]).unwrap();
        let e = parse_gkat_in("tests: c\nactions: q\nwhile c do q", &shared).unwrap();
        assert_eq!(e, GkatExp::while_do(t(1), GkatExp::Act(ActionId(1))));
        assert!(matches!(
            parse_gkat_in("tests: z\nactions:\nskip", &shared),
            Err(Error::UniverseMismatch(_))
        ));
    }
}
