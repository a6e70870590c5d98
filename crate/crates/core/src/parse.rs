//! Text syntax for terms, types, contexts and judgments.
//!
//! Terms: `x`, `\x. M` (also `λx.M`, `\x y. M`), juxtaposition for
//! left-associative application, parentheses. An application may end with an
//! unparenthesized abstraction, so `\x. (x) \y. y` is `λx.(x)(λy.y)`.
//!
//! Types: identifiers starting with an uppercase letter are type variables,
//! except the declared atoms (`O` and `Bot` by default, `⊥` is `Bot`).
//! `A -> B` is right-associative, `forall X. A` extends as far right as
//! possible. Sugar: `A /\ B` (product), `A \/ B` (sum), `List A`, with
//! `List` binding tightest, then `/\`, then `\/`, then `->`.
//!
//! Contexts: `x : A, y : B` (optionally in braces). Judgments:
//! `Γ |- t : A`.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::classify::{mk_list, mk_product, mk_sum};
use crate::context::Context;
use crate::term::Term;
use crate::ty::Type;
use crate::typing::Judgment;
use crate::{ATOM_BOT, ATOM_O};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Character offset of the offending token.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at column {}: {}", self.pos + 1, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Lambda,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    Forall,
    And,
    Or,
    Colon,
    Comma,
    Turnstile,
    Bottom,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(x) => return write!(f, "identifier `{x}`"),
            Tok::Lambda => "`\\`",
            Tok::Dot => "`.`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::Arrow => "`->`",
            Tok::Forall => "`forall`",
            Tok::And => "`/\\`",
            Tok::Or => "`\\/`",
            Tok::Colon => "`:`",
            Tok::Comma => "`,`",
            Tok::Turnstile => "`|-`",
            Tok::Bottom => "`⊥`",
        };
        f.write_str(s)
    }
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() && c != 'λ') || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let next = chars.get(i + 1).copied();
        let tok = match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '\\' if next == Some('/') => {
                i += 2;
                Tok::Or
            }
            '/' if next == Some('\\') => {
                i += 2;
                Tok::And
            }
            '-' if next == Some('>') => {
                i += 2;
                Tok::Arrow
            }
            '|' if next == Some('-') => {
                i += 2;
                Tok::Turnstile
            }
            _ => {
                i += 1;
                match c {
                    '\\' | 'λ' => Tok::Lambda,
                    '.' => Tok::Dot,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '→' => Tok::Arrow,
                    '∀' => Tok::Forall,
                    '∧' => Tok::And,
                    '∨' => Tok::Or,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    '⊢' => Tok::Turnstile,
                    '⊥' => Tok::Bottom,
                    _ if is_ident_start(c) => {
                        while i < chars.len() && is_ident_continue(chars[i]) {
                            i += 1;
                        }
                        let word: String = chars[start..i].iter().collect();
                        if word == "forall" {
                            Tok::Forall
                        } else {
                            Tok::Ident(word)
                        }
                    }
                    _ => {
                        return Err(ParseError {
                            pos: start,
                            message: alloc::format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
        };
        toks.push((start, tok));
    }
    Ok(toks)
}

/// Parser configured with the set of atomic type constants.
#[derive(Clone, Debug)]
pub struct Parser {
    atoms: BTreeSet<String>,
}

impl Default for Parser {
    fn default() -> Self {
        Parser::new()
    }
}

impl Parser {
    /// Declares `O` and `Bot`.
    pub fn new() -> Parser {
        let mut atoms = BTreeSet::new();
        atoms.insert(ATOM_O.to_string());
        atoms.insert(ATOM_BOT.to_string());
        Parser { atoms }
    }

    pub fn with_atom(mut self, name: impl Into<String>) -> Parser {
        self.atoms.insert(name.into());
        self
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn term(&self, text: &str) -> Result<Term, ParseError> {
        let mut st = State::new(text, self)?;
        let t = st.term()?;
        st.expect_end()?;
        Ok(t)
    }

    pub fn ty(&self, text: &str) -> Result<Type, ParseError> {
        let mut st = State::new(text, self)?;
        let t = st.ty()?;
        st.expect_end()?;
        Ok(t)
    }

    pub fn context(&self, text: &str) -> Result<Context, ParseError> {
        let mut st = State::new(text, self)?;
        let ctx = st.context()?;
        st.expect_end()?;
        Ok(ctx)
    }

    pub fn judgment(&self, text: &str) -> Result<Judgment, ParseError> {
        let mut st = State::new(text, self)?;
        let ctx = st.context()?;
        st.expect(&Tok::Turnstile)?;
        let term = st.term()?;
        st.expect(&Tok::Colon)?;
        let ty = st.ty()?;
        st.expect_end()?;
        Ok(Judgment::new(ctx, term, ty))
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    Parser::new().term(text)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    Parser::new().ty(text)
}

pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    Parser::new().context(text)
}

pub fn parse_judgment(text: &str) -> Result<Judgment, ParseError> {
    Parser::new().judgment(text)
}

struct State<'p> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    parser: &'p Parser,
}

impl<'p> State<'p> {
    fn new(text: &str, parser: &'p Parser) -> Result<State<'p>, ParseError> {
        Ok(State {
            toks: lex(text)?,
            pos: 0,
            end: text.chars().count(),
            parser,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        match self.peek() {
            Some(t) => self.error(alloc::format!("expected {wanted}, found {t}")),
            None => self.error(alloc::format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.unexpected(&tok.to_string())
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => self.error(alloc::format!("unexpected {t}")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(x)) => {
                let x = x.clone();
                self.pos += 1;
                Ok(x)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut head: Option<Term> = None;
        loop {
            let arg = match self.peek() {
                Some(Tok::Ident(_)) => Term::Var(self.ident()?),
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let t = self.term()?;
                    self.expect(&Tok::RParen)?;
                    t
                }
                Some(Tok::Lambda) => {
                    let lam = self.lambda()?;
                    return Ok(match head {
                        Some(h) => Term::app(h, lam),
                        None => lam,
                    });
                }
                _ => break,
            };
            head = Some(match head {
                Some(h) => Term::app(h, arg),
                None => arg,
            });
        }
        match head {
            Some(t) => Ok(t),
            None => self.unexpected("a term"),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.expect(&Tok::Lambda)?;
        let mut binders = alloc::vec![self.ident()?];
        while let Some(Tok::Ident(_)) = self.peek() {
            binders.push(self.ident()?);
        }
        self.expect(&Tok::Dot)?;
        let body = self.term()?;
        Ok(Term::abs_many(binders, body))
    }

    // ---- types ----

    fn ty(&mut self) -> Result<Type, ParseError> {
        if self.eat(&Tok::Forall) {
            let mut binders = alloc::vec![self.type_binder()?];
            while let Some(Tok::Ident(_)) = self.peek() {
                binders.push(self.type_binder()?);
            }
            self.expect(&Tok::Dot)?;
            let body = self.ty()?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |acc, x| Type::forall(x, acc)));
        }
        let left = self.or_type()?;
        if self.eat(&Tok::Arrow) {
            let right = self.ty()?;
            Ok(Type::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn type_binder(&mut self) -> Result<String, ParseError> {
        let at = self.offset();
        let x = self.ident()?;
        if self.parser.atoms.contains(&x) {
            return Err(ParseError {
                pos: at,
                message: alloc::format!("`{x}` is an atomic constant and cannot be bound"),
            });
        }
        if !x.starts_with(|c: char| c.is_uppercase()) {
            return Err(ParseError {
                pos: at,
                message: alloc::format!("type variable `{x}` must start with an uppercase letter"),
            });
        }
        Ok(x)
    }

    fn or_type(&mut self) -> Result<Type, ParseError> {
        let left = self.and_type()?;
        if self.eat(&Tok::Or) {
            let right = self.or_type()?;
            Ok(mk_sum(&left, &right))
        } else {
            Ok(left)
        }
    }

    fn and_type(&mut self) -> Result<Type, ParseError> {
        let left = self.list_type()?;
        if self.eat(&Tok::And) {
            let right = self.and_type()?;
            Ok(mk_product(&left, &right))
        } else {
            Ok(left)
        }
    }

    fn list_type(&mut self) -> Result<Type, ParseError> {
        if let Some(Tok::Ident(x)) = self.peek() {
            if x == "List" {
                self.pos += 1;
                let elem = self.list_type()?;
                return Ok(mk_list(&elem));
            }
        }
        self.atomic_type()
    }

    fn atomic_type(&mut self) -> Result<Type, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Bottom) => {
                self.pos += 1;
                Ok(Type::atom(ATOM_BOT))
            }
            Some(Tok::Ident(_)) => {
                let at = self.offset();
                let x = self.ident()?;
                if self.parser.atoms.contains(&x) {
                    Ok(Type::Atom(x))
                } else if x.starts_with(|c: char| c.is_uppercase()) {
                    Ok(Type::Var(x))
                } else {
                    Err(ParseError {
                        pos: at,
                        message: alloc::format!(
                            "type variable `{x}` must start with an uppercase letter"
                        ),
                    })
                }
            }
            _ => self.unexpected("a type"),
        }
    }

    // ---- contexts ----

    fn context(&mut self) -> Result<Context, ParseError> {
        let braced = self.eat(&Tok::LBrace);
        let mut ctx = Context::new();
        if let Some(Tok::Ident(_)) = self.peek() {
            loop {
                let at = self.offset();
                let x = self.ident()?;
                self.expect(&Tok::Colon)?;
                let t = self.ty()?;
                if let Err(e) = ctx.insert(x, t) {
                    return Err(ParseError {
                        pos: at,
                        message: e.to_string(),
                    });
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if braced {
            self.expect(&Tok::RBrace)?;
        }
        Ok(ctx)
    }
}
