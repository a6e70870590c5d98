//! Pure λ-terms with named variables.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::names::fresh_like;

/// A λ-term: variable, abstraction or application.
///
/// Equality through `PartialEq` is syntactic; use [`Term::alpha_eq`] to
/// compare up to renaming of bound variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// De Bruijn form of a term: bound variables become indices, free ones keep
/// their names. Two terms are α-equivalent iff their nameless forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nameless {
    Bound(usize),
    Free(String),
    Abs(Box<Nameless>),
    App(Box<Nameless>, Box<Nameless>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn abs(binder: impl Into<String>, body: Term) -> Term {
        Term::Abs(binder.into(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// `(head) a₁ ... aₙ`
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// `λx₁ ... λxₙ body`
    pub fn abs_many<S: Into<String>>(binders: impl IntoIterator<Item = S>, body: Term) -> Term {
        let binders: Vec<String> = binders.into_iter().map(Into::into).collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Term::Abs(b, Box::new(acc)))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_abs(&self) -> bool {
        matches!(self, Term::Abs(..))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, body) => 1 + body.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Splits `(h) a₁ ... aₙ` into `h` and the maximal argument list.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(&x.as_str()) {
                        out.insert(x.clone());
                    }
                }
                Term::Abs(x, body) => {
                    bound.push(x);
                    go(body, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::Abs(x, body) => x != name && body.has_free(name),
            Term::App(f, a) => f.has_free(name) || a.has_free(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        fn go(t: &Term, out: &mut BTreeSet<String>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Abs(x, body) => {
                    out.insert(x.clone());
                    go(body, out);
                }
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Capture-avoiding `t[u/x]`.
    pub fn subst(&self, x: &str, u: &Term) -> Term {
        let mut map = BTreeMap::new();
        map.insert(x, u);
        subst_map(self, &map)
    }

    /// Simultaneous capture-avoiding substitution `t[u₁/x₁, ..., uₙ/xₙ]`.
    ///
    /// A later pair for an already bound name is ignored.
    pub fn subst_many(&self, pairs: &[(String, Term)]) -> Term {
        let mut map = BTreeMap::new();
        for (x, u) in pairs {
            map.entry(x.as_str()).or_insert(u);
        }
        subst_map(self, &map)
    }

    pub fn to_nameless(&self) -> Nameless {
        fn go<'a>(t: &'a Term, bound: &mut Vec<&'a str>) -> Nameless {
            match t {
                Term::Var(x) => match bound.iter().rev().position(|b| *b == x) {
                    Some(i) => Nameless::Bound(i),
                    None => Nameless::Free(x.clone()),
                },
                Term::Abs(x, body) => {
                    bound.push(x);
                    let body = go(body, bound);
                    bound.pop();
                    Nameless::Abs(Box::new(body))
                }
                Term::App(f, a) => {
                    let f = go(f, bound);
                    let a = go(a, bound);
                    Nameless::App(Box::new(f), Box::new(a))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self.to_nameless() == other.to_nameless()
    }
}

fn subst_map(t: &Term, map: &BTreeMap<&str, &Term>) -> Term {
    match t {
        Term::Var(x) => match map.get(x.as_str()) {
            Some(u) => (*u).clone(),
            None => t.clone(),
        },
        Term::App(f, a) => Term::app(subst_map(f, map), subst_map(a, map)),
        Term::Abs(x, body) => {
            let relevant: BTreeMap<&str, &Term> = map
                .iter()
                .filter(|(k, _)| **k != x.as_str() && body.has_free(k))
                .map(|(k, v)| (*k, *v))
                .collect();
            if relevant.is_empty() {
                return t.clone();
            }
            let captures = relevant.values().any(|u| u.has_free(x));
            if !captures {
                return Term::abs(x.clone(), subst_map(body, &relevant));
            }
            let body_fv = body.free_vars();
            let fresh = fresh_like(x, |n| {
                body_fv.contains(n)
                    || relevant.contains_key(n)
                    || relevant.values().any(|u| u.has_free(n))
            });
            let renamed = Term::var(fresh.clone());
            let mut extended = relevant;
            extended.insert(x.as_str(), &renamed);
            Term::abs(fresh.clone(), subst_map(body, &extended))
        }
    }
}

/// Canonical printer.
///
/// Binders keep their names unless that would shadow an enclosing binder or
/// capture a free variable, in which case they get the first fresh variant.
/// The output reparses to an α-equivalent term.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = self.free_vars();
        let mut scope = Vec::new();
        write_term(self, &free, &mut scope, Position::Top, f)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Position {
    Top,
    Function,
    Argument,
}

fn write_term(
    t: &Term,
    free: &BTreeSet<String>,
    scope: &mut Vec<(String, String)>,
    pos: Position,
    f: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    match t {
        Term::Var(x) => {
            let printed = scope
                .iter()
                .rev()
                .find(|(orig, _)| orig == x)
                .map(|(_, p)| p.as_str())
                .unwrap_or(x.as_str());
            f.write_str(printed)
        }
        Term::Abs(x, body) => {
            let printed = fresh_like(x, |n| {
                free.contains(n) || scope.iter().any(|(_, p)| p == n)
            });
            let parens = pos != Position::Top;
            if parens {
                f.write_str("(")?;
            }
            write!(f, "\\{printed}. ")?;
            scope.push((x.clone(), printed));
            write_term(body, free, scope, Position::Top, f)?;
            scope.pop();
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::App(fun, arg) => {
            let parens = pos == Position::Argument;
            if parens {
                f.write_str("(")?;
            }
            write_term(fun, free, scope, Position::Function, f)?;
            f.write_str(" ")?;
            write_term(arg, free, scope, Position::Argument, f)?;
            if parens {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn free_vars_examples() {
        assert!(Term::abs("x", v("x")).free_vars().is_empty());
        let t = Term::abs("x", Term::app(v("x"), v("alpha")));
        assert_eq!(t.free_vars().into_iter().collect::<Vec<_>>(), ["alpha"]);
        let t = Term::apps(v("x"), [v("y"), v("z")]);
        assert_eq!(t.free_vars().len(), 3);
    }

    #[test]
    fn subst_examples() {
        assert_eq!(v("x").subst("x", &v("u")), v("u"));
        // (λy.x)[y/x] renames the binder.
        let t = Term::abs("y", v("x")).subst("x", &v("y"));
        assert!(t.alpha_eq(&Term::abs("y1", v("y"))));
        match &t {
            Term::Abs(b, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, v("y"));
            }
            _ => panic!("expected abstraction"),
        }
        let id = Term::abs("z", v("z"));
        let t = Term::app(v("x"), v("x")).subst("x", &id);
        assert_eq!(t, Term::app(id.clone(), id));
    }

    #[test]
    fn simultaneous_substitution_does_not_chain() {
        let t = Term::app(v("x"), v("y"));
        let pairs = [(String::from("x"), v("y")), (String::from("y"), v("x"))];
        assert_eq!(t.subst_many(&pairs), Term::app(v("y"), v("x")));
    }

    #[test]
    fn alpha_examples() {
        assert!(Term::abs("x", v("x")).alpha_eq(&Term::abs("y", v("y"))));
        let one = Term::abs_many(["x", "y"], v("x"));
        let zero = Term::abs_many(["a", "b"], v("b"));
        assert!(!one.alpha_eq(&zero));
        // Free names matter.
        assert!(!Term::abs("x", v("y")).alpha_eq(&Term::abs("x", v("z"))));
    }

    #[test]
    fn printer_renames_shadowed_binders() {
        let t = Term::abs("x", Term::abs("x", v("x")));
        assert_eq!(t.to_string(), "\\x. \\x1. x1");
        let t = Term::abs("y", Term::app(v("y1"), v("y")));
        assert_eq!(t.to_string(), "\\y. y1 y");
        // Binder named like a free variable.
        let t = Term::app(Term::abs("y", Term::app(v("y"), v("y"))), v("y"));
        let _ = t.to_string();
    }

    #[test]
    fn printer_parenthesizes() {
        let t = Term::app(Term::abs("x", v("x")), Term::abs("y", v("y")));
        assert_eq!(t.to_string(), "(\\x. x) (\\y. y)");
        let t = Term::app(v("x"), Term::app(v("y"), v("z")));
        assert_eq!(t.to_string(), "x (y z)");
        let t = Term::apps(v("x"), [v("y"), v("z")]);
        assert_eq!(t.to_string(), "x y z");
    }
}
