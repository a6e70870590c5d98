//! Types of System F: variables, atomic constants, arrows and universal
//! quantification.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::names::fresh_like;

/// A polymorphic type.
///
/// Atoms (`O`, `Bot`, ...) are constants: they are never bound and never
/// substituted. Type variables and atoms live in separate namespaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    Atom(String),
    Arrow(Box<Type>, Box<Type>),
    Forall(String, Box<Type>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamelessType {
    Bound(usize),
    Free(String),
    Atom(String),
    Arrow(Box<NamelessType>, Box<NamelessType>),
    Forall(Box<NamelessType>),
}

impl Type {
    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn atom(name: impl Into<String>) -> Type {
        Type::Atom(name.into())
    }

    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    /// `a₁ → ... → aₙ → result`
    pub fn arrows(args: impl IntoIterator<Item = Type>, result: Type) -> Type {
        let args: Vec<Type> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| Type::arrow(a, acc))
    }

    pub fn forall(binder: impl Into<String>, body: Type) -> Type {
        Type::Forall(binder.into(), Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Type::Var(_) | Type::Atom(_) => 1,
            Type::Arrow(a, b) => 1 + a.size() + b.size(),
            Type::Forall(_, b) => 1 + b.size(),
        }
    }

    /// Free type variables; atoms are not variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go<'a>(t: &'a Type, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
            match t {
                Type::Var(x) => {
                    if !bound.contains(&x.as_str()) {
                        out.insert(x.clone());
                    }
                }
                Type::Atom(_) => {}
                Type::Arrow(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Type::Forall(x, b) => {
                    bound.push(x);
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, name: &str) -> bool {
        match self {
            Type::Var(x) => x == name,
            Type::Atom(_) => false,
            Type::Arrow(a, b) => a.has_free(name) || b.has_free(name),
            Type::Forall(x, b) => x != name && b.has_free(name),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        fn go(t: &Type, out: &mut BTreeSet<String>) {
            match t {
                Type::Var(_) => {}
                Type::Atom(a) => {
                    out.insert(a.clone());
                }
                Type::Arrow(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Type::Forall(_, b) => go(b, out),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    pub fn contains_atom(&self, name: &str) -> bool {
        match self {
            Type::Var(_) => false,
            Type::Atom(a) => a == name,
            Type::Arrow(a, b) => a.contains_atom(name) || b.contains_atom(name),
            Type::Forall(_, b) => b.contains_atom(name),
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Type::Var(_) | Type::Atom(_) => false,
            Type::Arrow(a, b) => a.has_quantifier() || b.has_quantifier(),
            Type::Forall(..) => true,
        }
    }

    /// Capture-avoiding `self[g/x]`.
    pub fn subst(&self, x: &str, g: &Type) -> Type {
        match self {
            Type::Var(y) if y == x => g.clone(),
            Type::Var(_) | Type::Atom(_) => self.clone(),
            Type::Arrow(a, b) => Type::arrow(a.subst(x, g), b.subst(x, g)),
            Type::Forall(y, body) => {
                if y == x || !body.has_free(x) {
                    return self.clone();
                }
                if !g.has_free(y) {
                    return Type::forall(y.clone(), body.subst(x, g));
                }
                let body_fv = body.free_vars();
                let fresh = fresh_like(y, |n| n == x || body_fv.contains(n) || g.has_free(n));
                let body = body.subst(y, &Type::var(fresh.clone()));
                Type::forall(fresh, body.subst(x, g))
            }
        }
    }

    /// Renames the free variable `from` to `to`.
    pub fn rename(&self, from: &str, to: &str) -> Type {
        self.subst(from, &Type::var(to))
    }

    pub fn to_nameless(&self) -> NamelessType {
        fn go<'a>(t: &'a Type, bound: &mut Vec<&'a str>) -> NamelessType {
            match t {
                Type::Var(x) => match bound.iter().rev().position(|b| *b == x) {
                    Some(i) => NamelessType::Bound(i),
                    None => NamelessType::Free(x.clone()),
                },
                Type::Atom(a) => NamelessType::Atom(a.clone()),
                Type::Arrow(a, b) => {
                    let a = go(a, bound);
                    let b = go(b, bound);
                    NamelessType::Arrow(Box::new(a), Box::new(b))
                }
                Type::Forall(x, b) => {
                    bound.push(x);
                    let b = go(b, bound);
                    bound.pop();
                    NamelessType::Forall(Box::new(b))
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Type) -> bool {
        self.to_nameless() == other.to_nameless()
    }

    /// Peels exactly `n` leading arrows, without looking through quantifiers.
    pub fn peel_arrows(&self, n: usize) -> Option<(Vec<&Type>, &Type)> {
        let mut args = Vec::with_capacity(n);
        let mut cur = self;
        for _ in 0..n {
            match cur {
                Type::Arrow(a, b) => {
                    args.push(&**a);
                    cur = b;
                }
                _ => return None,
            }
        }
        Some((args, cur))
    }

    /// Every subtree of the type, the type itself included.
    pub fn subtypes(&self) -> Vec<&Type> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            match t {
                Type::Arrow(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Type::Forall(_, b) => stack.push(b),
                _ => {}
            }
        }
        out
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(self, false, f)
    }
}

fn write_type(t: &Type, left_of_arrow: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Type::Var(x) | Type::Atom(x) => f.write_str(x),
        Type::Arrow(a, b) => {
            if left_of_arrow {
                f.write_str("(")?;
            }
            write_type(a, true, f)?;
            f.write_str(" -> ")?;
            write_type(b, false, f)?;
            if left_of_arrow {
                f.write_str(")")?;
            }
            Ok(())
        }
        Type::Forall(x, b) => {
            if left_of_arrow {
                f.write_str("(")?;
            }
            write!(f, "forall {x}. ")?;
            write_type(b, false, f)?;
            if left_of_arrow {
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

    fn tv(x: &str) -> Type {
        Type::var(x)
    }

    #[test]
    fn subst_examples() {
        let g = Type::arrow(tv("A"), tv("B"));
        assert_eq!(tv("X").subst("X", &g), g);
        let t = Type::forall("Y", Type::arrow(tv("Y"), tv("X")));
        let expected = Type::forall("Y", Type::arrow(tv("Y"), Type::atom("O")));
        assert_eq!(t.subst("X", &Type::atom("O")), expected);
        let id = Type::forall("X", Type::arrow(tv("X"), tv("X")));
        assert_eq!(id.subst("X", &g), id);
    }

    #[test]
    fn subst_avoids_capture() {
        let t = Type::forall("Y", Type::arrow(tv("Y"), tv("X")));
        let s = t.subst("X", &tv("Y"));
        let expected = Type::forall("Z", Type::arrow(tv("Z"), tv("Y")));
        assert!(s.alpha_eq(&expected));
    }

    #[test]
    fn alpha_eq_types() {
        let a = Type::forall("X", Type::arrow(tv("X"), tv("X")));
        let b = Type::forall("Y", Type::arrow(tv("Y"), tv("Y")));
        assert!(a.alpha_eq(&b));
        assert!(!tv("X").alpha_eq(&Type::atom("X")));
    }

    #[test]
    fn display() {
        let n = Type::forall(
            "X",
            Type::arrows([tv("X"), Type::arrow(tv("X"), tv("X"))], tv("X")),
        );
        assert_eq!(n.to_string(), "forall X. X -> (X -> X) -> X");
        let t = Type::arrow(Type::forall("Y", Type::arrow(tv("Y"), tv("X"))), tv("X"));
        assert_eq!(t.to_string(), "(forall Y. Y -> X) -> X");
    }
}
