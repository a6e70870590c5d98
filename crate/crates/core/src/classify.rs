//! Syntactic predicates on types and the standard encodings.
//!
//! Atoms behave like type variables for polarity and `ends_with`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::names::{first_unused, TYPE_BINDERS};
use crate::term::Term;
use crate::ty::Type;
use crate::{ATOM_BOT, ATOM_O};

/// Membership in the ∀⁺ and ∀⁻ classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Polarity {
    pub forall_positive: bool,
    pub forall_negative: bool,
}

/// Computes both polarity flags by the mutual induction:
/// variables are both, `B → A` is ∀⁺ (∀⁻) when `A` is ∀⁺ (∀⁻) and `B` is
/// ∀⁻ (∀⁺), and `∀X A` is ∀⁺ when `A` is ∀⁺ with `X` free in it. A
/// quantified type is never ∀⁻.
pub fn polarity(a: &Type) -> Polarity {
    match a {
        Type::Var(_) | Type::Atom(_) => Polarity {
            forall_positive: true,
            forall_negative: true,
        },
        Type::Arrow(b, c) => {
            let pb = polarity(b);
            let pc = polarity(c);
            Polarity {
                forall_positive: pc.forall_positive && pb.forall_negative,
                forall_negative: pc.forall_negative && pb.forall_positive,
            }
        }
        Type::Forall(x, body) => Polarity {
            forall_positive: polarity(body).forall_positive && body.has_free(x),
            forall_negative: false,
        },
    }
}

/// `a` ends with the variable or constant `k`.
///
/// Stripping stops at a quantifier that binds `k` itself.
pub fn ends_with(a: &Type, k: &str) -> bool {
    match a {
        Type::Var(x) | Type::Atom(x) => x == k,
        Type::Arrow(_, b) => ends_with(b, k),
        Type::Forall(x, b) => x != k && ends_with(b, k),
    }
}

/// Number of arrows.
pub fn lg(a: &Type) -> usize {
    match a {
        Type::Var(_) | Type::Atom(_) => 0,
        Type::Arrow(b, c) => 1 + lg(b) + lg(c),
        Type::Forall(_, b) => lg(b),
    }
}

/// Every quantifier binds a variable occurring in its scope.
pub fn is_proper(a: &Type) -> bool {
    match a {
        Type::Var(_) | Type::Atom(_) => true,
        Type::Arrow(b, c) => is_proper(b) && is_proper(c),
        Type::Forall(x, b) => b.has_free(x) && is_proper(b),
    }
}

/// No free type variables; atoms are allowed.
pub fn is_closed(a: &Type) -> bool {
    a.free_vars().is_empty()
}

fn fresh_for(types: &[&Type]) -> String {
    first_unused(&TYPE_BINDERS, |n| types.iter().any(|t| t.has_free(n)))
}

/// `A ∧ B = ∀X((A → (B → X)) → X)`
pub fn mk_product(a: &Type, b: &Type) -> Type {
    let x = fresh_for(&[a, b]);
    let xv = Type::var(x.clone());
    Type::forall(
        x,
        Type::arrow(
            Type::arrow(a.clone(), Type::arrow(b.clone(), xv.clone())),
            xv,
        ),
    )
}

/// `A ∨ B = ∀X((A → X) → ((B → X) → X))`
pub fn mk_sum(a: &Type, b: &Type) -> Type {
    let x = fresh_for(&[a, b]);
    let xv = Type::var(x.clone());
    Type::forall(
        x,
        Type::arrow(
            Type::arrow(a.clone(), xv.clone()),
            Type::arrow(Type::arrow(b.clone(), xv.clone()), xv),
        ),
    )
}

/// `LA = ∀X(X → ((A → (X → X)) → X))`
pub fn mk_list(a: &Type) -> Type {
    let x = fresh_for(&[a]);
    let xv = Type::var(x.clone());
    Type::forall(
        x,
        Type::arrow(
            xv.clone(),
            Type::arrow(
                Type::arrow(a.clone(), Type::arrow(xv.clone(), xv.clone())),
                xv,
            ),
        ),
    )
}

/// `¬A = A → ⊥`
pub fn neg(a: Type) -> Type {
    Type::arrow(a, Type::atom(ATOM_BOT))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottomPresent;

impl fmt::Display for BottomPresent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the constant {ATOM_BOT} already occurs in the type")
    }
}

impl core::error::Error for BottomPresent {}

/// Gödel translation: every atomic leaf `R` becomes `¬R`.
pub fn godel_translate(a: &Type) -> Result<Type, BottomPresent> {
    if a.contains_atom(ATOM_BOT) {
        return Err(BottomPresent);
    }
    fn go(a: &Type) -> Type {
        match a {
            Type::Var(_) | Type::Atom(_) => neg(a.clone()),
            Type::Arrow(b, c) => Type::arrow(go(b), go(c)),
            Type::Forall(x, b) => Type::forall(x.clone(), go(b)),
        }
    }
    Ok(go(a))
}

/// `G^o = O → G ∧ O`
pub fn circle(g: &Type) -> Type {
    let o = Type::atom(ATOM_O);
    Type::arrow(o.clone(), mk_product(g, &o))
}

/// Number of atomic leaves (variables and constants).
pub fn leaf_count(a: &Type) -> usize {
    match a {
        Type::Var(_) | Type::Atom(_) => 1,
        Type::Arrow(b, c) => leaf_count(b) + leaf_count(c),
        Type::Forall(_, b) => leaf_count(b),
    }
}

/// `p_n = λx₁ ... λxₙ λx.x`
pub fn pn(n: usize) -> Term {
    let mut binders: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    binders.push(String::from("x"));
    Term::abs_many(binders, Term::var("x"))
}

/// Church numeral `λx.λs.(s)ᵏ x`, matching `N = ∀X(X → ((X → X) → X))`.
pub fn church_nat(k: usize) -> Term {
    let body = (0..k).fold(Term::var("x"), |acc, _| Term::app(Term::var("s"), acc));
    Term::abs_many(["x", "s"], body)
}

/// `1 = λx.λy.x`, `0 = λx.λy.y`.
pub fn church_bool(b: bool) -> Term {
    Term::abs_many(["x", "y"], Term::var(if b { "x" } else { "y" }))
}

fn x() -> Type {
    Type::var("X")
}

/// `Id = ∀X(X → X)`
pub fn id_type() -> Type {
    Type::forall("X", Type::arrow(x(), x()))
}

/// `B = ∀X(X → (X → X))`
pub fn bool_type() -> Type {
    Type::forall("X", Type::arrows([x(), x()], x()))
}

/// `N = ∀X(X → ((X → X) → X))`
pub fn nat_type() -> Type {
    Type::forall("X", Type::arrows([x(), Type::arrow(x(), x())], x()))
}

/// `D = ∀X(∀Y(Y → X) → X)`
pub fn d_type() -> Type {
    let inner = Type::forall("Y", Type::arrow(Type::var("Y"), x()));
    Type::forall("X", Type::arrow(inner, x()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_type;

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn polarity_examples() {
        let p = polarity(&Type::var("X"));
        assert!(p.forall_positive && p.forall_negative);
        for t in [id_type(), bool_type(), nat_type()] {
            let p = polarity(&t);
            assert!(p.forall_positive, "{t}");
            assert!(!p.forall_negative, "{t}");
        }
        assert!(!polarity(&d_type()).forall_positive);
        // Vacuous quantifier is not positive.
        assert!(!polarity(&ty("forall X. Y")).forall_positive);
    }

    #[test]
    fn ends_with_examples() {
        assert!(ends_with(&Type::atom("O"), "O"));
        assert!(ends_with(&ty("forall Y. Y -> O"), "O"));
        assert!(!ends_with(&id_type(), "O"));
        assert!(ends_with(&ty("A -> forall Y. B -> X"), "X"));
        // A binder named like the sought variable stops the descent.
        assert!(!ends_with(&ty("forall X. X -> X"), "X"));
    }

    #[test]
    fn lg_examples() {
        assert_eq!(lg(&Type::atom("O")), 0);
        assert_eq!(lg(&bool_type()), 2);
        assert_eq!(lg(&nat_type()), 3);
        assert_eq!(lg(&Type::arrow(nat_type(), nat_type())), 7);
    }

    #[test]
    fn properness_and_closedness() {
        let id = id_type();
        assert!(is_proper(&id) && is_closed(&id));
        assert!(!is_proper(&ty("forall X. Y -> Y")));
        let t = ty("forall Y. Y -> X");
        assert!(is_proper(&t) && !is_closed(&t));
        assert!(is_closed(&Type::atom("O")));
    }

    #[test]
    fn encodings() {
        let id = id_type();
        assert_eq!(
            mk_product(&id, &id),
            Type::forall(
                "X",
                Type::arrow(Type::arrows([id.clone(), id.clone()], x()), x())
            )
        );
        let (a, b) = (Type::var("A"), Type::var("B"));
        assert_eq!(
            mk_sum(&a, &b),
            ty("forall X. (A -> X) -> (B -> X) -> X")
        );
        assert_eq!(mk_list(&a), ty("forall X. X -> (A -> X -> X) -> X"));
        // Fresh binder skips variables free in the components.
        assert_eq!(mk_product(&x(), &Type::atom("O")), ty("forall Y. (X -> O -> Y) -> Y"));
    }

    #[test]
    fn godel_examples() {
        assert_eq!(godel_translate(&x()).unwrap(), ty("X -> Bot"));
        assert_eq!(
            godel_translate(&ty("X -> Y")).unwrap(),
            ty("(X -> Bot) -> (Y -> Bot)")
        );
        let nstar = ty("forall X. (X -> Bot) -> ((X -> Bot) -> (X -> Bot)) -> (X -> Bot)");
        assert_eq!(godel_translate(&nat_type()).unwrap(), nstar);
        assert_eq!(godel_translate(&ty("Bot -> X")), Err(BottomPresent));
    }

    #[test]
    fn circle_examples() {
        let o = Type::atom("O");
        assert_eq!(circle(&id_type()), Type::arrow(o.clone(), mk_product(&id_type(), &o)));
        assert_eq!(circle(&o), Type::arrow(o.clone(), mk_product(&o, &o)));
        assert_eq!(circle(&x()), ty("O -> forall Y. (X -> O -> Y) -> Y"));
    }

    #[test]
    fn church_terms() {
        use crate::parse::parse_term;
        assert!(pn(0).alpha_eq(&parse_term("\\x. x").unwrap()));
        assert!(pn(2).alpha_eq(&parse_term("\\a b c. c").unwrap()));
        assert!(church_bool(true).alpha_eq(&parse_term("\\x y. x").unwrap()));
        assert!(church_nat(0).alpha_eq(&parse_term("\\x s. x").unwrap()));
        assert!(church_nat(2).alpha_eq(&parse_term("\\x s. s (s x)").unwrap()));
    }
}
