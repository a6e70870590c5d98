//! The simply typed system S and quantifier erasure.
//!
//! Derivability in S is decided by unification: binders and applications get
//! unknowns, type variables of the context and goal are rigid.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::context::Context;
use crate::names::fresh_like;
use crate::term::Term;
use crate::ty::Type;
use crate::typing::{Judgment, System};

/// `Aˢ`: drop every quantifier, keeping its variable occurrences.
pub fn erase_type(a: &Type) -> Type {
    match a {
        Type::Var(_) | Type::Atom(_) => a.clone(),
        Type::Arrow(b, c) => Type::arrow(erase_type(b), erase_type(c)),
        Type::Forall(_, b) => erase_type(b),
    }
}

/// `Γˢ`, pointwise.
pub fn erase_context(ctx: &Context) -> Context {
    ctx.map_types(erase_type)
}

/// Names bound variables after the shape of their quantified subterm, so
/// that α-equivalent quantified subterms get the same binder name wherever
/// they occur in the judgment.
///
/// Inside a shape, variables bound by the subterm are de Bruijn indices and
/// variables bound further out are referred to by their new names.
pub struct BinderNamer {
    names: BTreeMap<String, String>,
    taken: BTreeSet<String>,
}

impl BinderNamer {
    /// `taken` holds the free type variables of the whole judgment.
    pub fn new(taken: BTreeSet<String>) -> BinderNamer {
        BinderNamer {
            names: BTreeMap::new(),
            taken,
        }
    }

    pub fn rename(&mut self, a: &Type) -> Type {
        let mut outer = Vec::new();
        self.go(a, &mut outer)
    }

    fn go(&mut self, a: &Type, outer: &mut Vec<(String, String)>) -> Type {
        match a {
            Type::Var(x) => match outer.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Type::var(new.clone()),
                None => a.clone(),
            },
            Type::Atom(_) => a.clone(),
            Type::Arrow(b, c) => Type::arrow(self.go(b, outer), self.go(c, outer)),
            Type::Forall(x, b) => {
                let mut key = String::new();
                shape(a, &mut Vec::new(), outer, &mut key);
                let name = self.intern(key);
                outer.push((x.clone(), name.clone()));
                let body = self.go(b, outer);
                outer.pop();
                Type::forall(name, body)
            }
        }
    }

    fn intern(&mut self, key: String) -> String {
        if let Some(n) = self.names.get(&key) {
            return n.clone();
        }
        let n = fresh_like("X", |c| self.taken.contains(c));
        self.taken.insert(n.clone());
        self.names.insert(key, n.clone());
        n
    }
}

fn shape<'a>(a: &'a Type, inner: &mut Vec<&'a str>, outer: &[(String, String)], out: &mut String) {
    match a {
        Type::Var(x) => {
            if let Some(i) = inner.iter().rev().position(|v| v == x) {
                let _ = write!(out, "i{i}");
            } else if let Some((_, new)) = outer.iter().rev().find(|(old, _)| old == x) {
                let _ = write!(out, "b{new}");
            } else {
                let _ = write!(out, "v{x}");
            }
        }
        Type::Atom(k) => {
            let _ = write!(out, "a{k}");
        }
        Type::Arrow(b, c) => {
            out.push('(');
            shape(b, inner, outer, out);
            out.push('>');
            shape(c, inner, outer, out);
            out.push(')');
        }
        Type::Forall(x, b) => {
            out.push('A');
            inner.push(x);
            shape(b, inner, outer, out);
            inner.pop();
        }
    }
}

/// Erasure of the α-representative of `Γ ⊢ t : A` given by [`BinderNamer`].
///
/// Plain erasure is not invariant under renaming of bound variables:
/// `x : ∀Y Y ⊢ x : ∀X X` holds in F₀ but erases to `x : Y ⊢ x : X`.
pub fn erase_judgment(j: &Judgment) -> Judgment {
    let mut taken = j.ctx.free_type_vars();
    taken.extend(j.ty.free_vars());
    let mut namer = BinderNamer::new(taken);
    let mut ctx = Context::new();
    for (x, a) in j.ctx.iter() {
        ctx.insert(x, erase_type(&namer.rename(a)))
            .expect("names of a context are distinct");
    }
    let ty = erase_type(&namer.rename(&j.ty));
    Judgment::new(ctx, j.term.clone(), ty).in_system(System::S)
}

/// A type given to the S checker contains a quantifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifierPresent(pub Type);

impl fmt::Display for QuantifierPresent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "system S has no quantifiers, found {}", self.0)
    }
}

impl core::error::Error for QuantifierPresent {}

#[derive(Clone, Debug)]
enum M {
    Var(String),
    Atom(String),
    Meta,
    Arrow(usize, usize),
}

/// Type graph with union-find style meta bindings; nodes are indices.
#[derive(Default)]
struct Unifier {
    nodes: Vec<M>,
    binding: BTreeMap<usize, usize>,
}

impl Unifier {
    fn push(&mut self, m: M) -> usize {
        self.nodes.push(m);
        self.nodes.len() - 1
    }

    fn meta(&mut self) -> usize {
        self.push(M::Meta)
    }

    fn import(&mut self, a: &Type) -> usize {
        match a {
            Type::Var(x) => self.push(M::Var(x.clone())),
            Type::Atom(x) => self.push(M::Atom(x.clone())),
            Type::Arrow(b, c) => {
                let b = self.import(b);
                let c = self.import(c);
                self.push(M::Arrow(b, c))
            }
            Type::Forall(..) => unreachable!("quantifiers rejected before import"),
        }
    }

    fn resolve(&self, mut i: usize) -> usize {
        while let Some(&j) = self.binding.get(&i) {
            i = j;
        }
        i
    }

    fn occurs(&self, meta: usize, i: usize) -> bool {
        let i = self.resolve(i);
        match self.nodes[i] {
            M::Meta => i == meta,
            M::Arrow(a, b) => self.occurs(meta, a) || self.occurs(meta, b),
            _ => false,
        }
    }

    fn unify(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        if a == b {
            return true;
        }
        match (self.nodes[a].clone(), self.nodes[b].clone()) {
            (M::Meta, _) => self.bind(a, b),
            (_, M::Meta) => self.bind(b, a),
            (M::Var(x), M::Var(y)) | (M::Atom(x), M::Atom(y)) => x == y,
            (M::Arrow(a1, a2), M::Arrow(b1, b2)) => self.unify(a1, b1) && self.unify(a2, b2),
            _ => false,
        }
    }

    fn bind(&mut self, meta: usize, to: usize) -> bool {
        if self.occurs(meta, to) {
            return false;
        }
        self.binding.insert(meta, to);
        true
    }

    fn infer(&mut self, env: &mut Vec<(String, usize)>, t: &Term) -> Option<usize> {
        match t {
            Term::Var(x) => env.iter().rev().find(|(n, _)| n == x).map(|(_, i)| *i),
            Term::Abs(x, body) => {
                let dom = self.meta();
                env.push((x.clone(), dom));
                let cod = self.infer(env, body);
                env.pop();
                let cod = cod?;
                Some(self.push(M::Arrow(dom, cod)))
            }
            Term::App(f, a) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, a)?;
                let r = self.meta();
                let arrow = self.push(M::Arrow(ta, r));
                self.unify(tf, arrow).then_some(r)
            }
        }
    }
}

/// Decides `Γ ⊢_S t : A`. Works for any term, normal or not.
pub fn check_s(ctx: &Context, t: &Term, a: &Type) -> Result<bool, QuantifierPresent> {
    for (_, b) in ctx.iter().chain(core::iter::once(("", a))) {
        if b.has_quantifier() {
            return Err(QuantifierPresent(b.clone()));
        }
    }
    let mut u = Unifier::default();
    let mut env: Vec<(String, usize)> = ctx
        .iter()
        .map(|(n, b)| (String::from(n), u.import(b)))
        .collect();
    let goal = u.import(a);
    Ok(match u.infer(&mut env, t) {
        Some(i) => u.unify(i, goal),
        None => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{bool_type, id_type, pn};
    use crate::parse::{parse_context, parse_term, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn examples() {
        let empty = Context::new();
        assert_eq!(check_s(&empty, &pn(2), &ty("C1 -> C2 -> D -> D")), Ok(true));
        assert_eq!(check_s(&empty, &parse_term("\\x. x").unwrap(), &ty("X -> Y")), Ok(false));
        let ctx = parse_context("x : X -> X, y : X").unwrap();
        assert_eq!(check_s(&ctx, &parse_term("x y").unwrap(), &ty("X")), Ok(true));
    }

    #[test]
    fn rigid_variables_and_occurs_check() {
        let empty = Context::new();
        let omega = parse_term("\\x. x x").unwrap();
        assert_eq!(check_s(&empty, &omega, &ty("X -> X")), Ok(false));
        let k = parse_term("\\x y. x").unwrap();
        assert_eq!(check_s(&empty, &k, &ty("(X -> X) -> Y -> X -> X")), Ok(true));
        assert_eq!(check_s(&empty, &k, &ty("X -> Y -> Y")), Ok(false));
        // Non-normal subjects are fine in S.
        let r = parse_term("(\\x. x) \\y. y").unwrap();
        assert_eq!(check_s(&empty, &r, &ty("O -> O")), Ok(true));
    }

    #[test]
    fn quantifiers_rejected() {
        let e = check_s(&Context::new(), &parse_term("\\x. x").unwrap(), &id_type());
        assert!(e.is_err());
    }

    #[test]
    fn erasure() {
        assert_eq!(erase_type(&id_type()), ty("X -> X"));
        assert_eq!(erase_type(&bool_type()), ty("X -> X -> X"));
        let ctx = parse_context("x : forall Y. Y -> X").unwrap();
        assert_eq!(erase_context(&ctx), parse_context("x : Y -> X").unwrap());
        assert!(erase_context(&Context::new()).is_empty());
    }
}
