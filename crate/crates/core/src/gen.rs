//! Seeded random generators for property tests and the command line, and an
//! exhaustive enumerator of small normal terms.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::context::Context;
use crate::names::{first_unused, fresh_like, TERM_BINDERS};
use crate::term::Term;
use crate::ty::Type;
use crate::typing::{check_f0, Judgment, System};
use crate::ATOM_O;

/// Shape of random types.
#[derive(Clone, Debug)]
pub struct TypeGen {
    /// Free variables to draw from.
    pub free: Vec<String>,
    /// Binder names; overlapping with `free` exercises shadowing.
    pub binders: Vec<String>,
    /// Atoms that may appear as leaves.
    pub atoms: Vec<String>,
    /// Chance, out of 100, that an inner node is a quantifier.
    pub forall_percent: u32,
}

impl Default for TypeGen {
    fn default() -> Self {
        TypeGen {
            free: alloc::vec!["X".into(), "Y".into()],
            binders: alloc::vec!["Y".into(), "Z".into(), "W".into(), "X".into()],
            atoms: Vec::new(),
            forall_percent: 30,
        }
    }
}

impl TypeGen {
    pub fn with_atom_o(mut self) -> TypeGen {
        self.atoms.push(ATOM_O.into());
        self
    }

    /// A proper type with at most `max_size` nodes.
    pub fn proper<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Type {
        let size = rng.gen_range(1..=max_size.max(1));
        self.go(rng, size, &mut Vec::new())
    }

    /// A proper type in which `x` occurs free.
    pub fn proper_with_free<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize, x: &str) -> Type {
        loop {
            let t = self.proper(rng, max_size);
            if t.has_free(x) {
                return t;
            }
        }
    }

    /// A quantifier-free type.
    pub fn simple<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> Type {
        let plain = TypeGen {
            forall_percent: 0,
            ..self.clone()
        };
        plain.proper(rng, max_size)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[String]) -> Type {
        let n_atoms = self.atoms.len();
        let total = self.free.len() + scope.len() + n_atoms;
        let i = rng.gen_range(0..total);
        if i < scope.len() {
            Type::var(scope[scope.len() - 1 - i].clone())
        } else if i < scope.len() + self.free.len() {
            Type::var(self.free[i - scope.len()].clone())
        } else {
            Type::atom(self.atoms[i - scope.len() - self.free.len()].clone())
        }
    }

    fn go<R: Rng + ?Sized>(&self, rng: &mut R, size: usize, scope: &mut Vec<String>) -> Type {
        if size < 3 {
            return self.leaf(rng, scope);
        }
        if size >= 3 && !self.binders.is_empty() && rng.gen_range(0..100) < self.forall_percent {
            let y = self.binders.choose(rng).expect("non-empty").clone();
            scope.push(y.clone());
            let body = self.go(rng, size - 1, scope);
            scope.pop();
            // Only keep the quantifier when its variable occurs.
            return if body.has_free(&y) {
                Type::forall(y, body)
            } else {
                body
            };
        }
        let left = rng.gen_range(1..=size - 2);
        let right = size - 1 - left;
        let a = self.go(rng, left, scope);
        let b = self.go(rng, right, scope);
        Type::arrow(a, b)
    }
}

/// A random normal term with about `size` nodes over the free variables
/// `free`; never produces a redex.
pub fn normal_term<R: Rng + ?Sized>(rng: &mut R, size: usize, free: &[String]) -> Term {
    let mut bound = Vec::new();
    gen_normal(rng, size.max(1), free, &mut bound)
}

fn gen_normal<R: Rng + ?Sized>(rng: &mut R, size: usize, free: &[String], bound: &mut Vec<String>) -> Term {
    let can_abs = size >= 2;
    let have_vars = !free.is_empty() || !bound.is_empty();
    if can_abs && (!have_vars || rng.gen_bool(0.35)) {
        let x = first_unused(&TERM_BINDERS, |n| bound.iter().any(|b| b == n) || free.iter().any(|f| f == n));
        bound.push(x.clone());
        let body = gen_normal(rng, size - 1, free, bound);
        bound.pop();
        return Term::abs(x, body);
    }
    if !have_vars {
        // size 1 with nothing in scope: an identity is the smallest closed term.
        return Term::abs("x", Term::var("x"));
    }
    simple_with(rng, size, free, bound)
}

fn pick_var<R: Rng + ?Sized>(rng: &mut R, free: &[String], bound: &[String]) -> String {
    let i = rng.gen_range(0..free.len() + bound.len());
    if i < bound.len() {
        bound[i].clone()
    } else {
        free[i - bound.len()].clone()
    }
}

fn simple_with<R: Rng + ?Sized>(rng: &mut R, size: usize, free: &[String], bound: &mut Vec<String>) -> Term {
    let head = Term::var(pick_var(rng, free, bound));
    let mut budget = size.saturating_sub(1);
    let mut t = head;
    while budget >= 2 && rng.gen_bool(0.6) {
        let arg_size = rng.gen_range(1..budget);
        budget -= arg_size + 1;
        let arg = gen_normal(rng, arg_size, free, bound);
        t = Term::app(t, arg);
    }
    t
}

/// A simple term `(x)u₁ ... uₙ` with normal arguments; `free` must not be
/// empty.
pub fn simple_term<R: Rng + ?Sized>(rng: &mut R, size: usize, free: &[String]) -> Term {
    assert!(!free.is_empty(), "simple terms need a head variable");
    simple_with(rng, size.max(1), free, &mut Vec::new())
}

/// Random judgments `Γ ⊢ t : A` accepted by the F₀ decision procedure.
///
/// Terms are synthesized goal-first; when no context variable fits, a new
/// one is declared with a suitable arrow type unless that type would mention
/// a generalized variable. Candidates that the decision procedure rejects
/// are discarded.
pub fn f0_judgment<R: Rng + ?Sized>(rng: &mut R, types: &TypeGen, max_type: usize, max_depth: usize) -> Judgment {
    loop {
        let goal = types.proper(rng, max_type);
        let mut synth = Synth {
            ctx: Context::new(),
            declared: 0,
            types,
        };
        let Some(t) = synth.run(rng, &Context::new(), &Vec::new(), &goal, max_depth) else {
            continue;
        };
        if check_f0(&synth.ctx, &t, &goal) == Ok(true) {
            return Judgment::new(synth.ctx, t, goal).in_system(System::F0);
        }
    }
}

struct Synth<'a> {
    ctx: Context,
    declared: usize,
    types: &'a TypeGen,
}

impl Synth<'_> {
    fn declare(&mut self, ty: Type) -> String {
        self.declared += 1;
        let name = alloc::format!("c{}", self.declared);
        self.ctx.insert(name.clone(), ty).expect("fresh declaration");
        name
    }

    /// `locals` extends the global context; `eigen` are the variables
    /// generalized on the way down.
    fn run<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        locals: &Context,
        eigen: &Vec<String>,
        goal: &Type,
        depth: usize,
    ) -> Option<Term> {
        if depth == 0 {
            return None;
        }
        let mut stripped = goal;
        let mut eig = eigen.clone();
        while let Type::Forall(v, b) = stripped {
            eig.push(v.clone());
            stripped = b;
        }
        let in_scope = |n: &str| locals.contains(n) || self.ctx.contains(n);
        if let Type::Arrow(dom, cod) = stripped {
            let clash = |v: &String| self.ctx.has_free_type_var(v) || locals.has_free_type_var(v);
            if !eig[eigen.len()..].iter().any(clash) && rng.gen_bool(0.75) {
                let x = first_unused(&TERM_BINDERS, in_scope);
                let inner = locals.with(x.clone(), (**dom).clone()).ok()?;
                let body = self.run(rng, &inner, &eig, cod, depth - 1)?;
                return Some(Term::abs(x, body));
            }
        }
        // Application spines from variables already in scope.
        let mut candidates = Vec::new();
        for (x, b) in locals.iter().chain(self.ctx.iter()) {
            let mut n = 0;
            while let Some((doms, res)) = b.peel_arrows(n) {
                if res.alpha_eq(goal) {
                    candidates.push((String::from(x), doms.into_iter().cloned().collect::<Vec<_>>()));
                }
                n += 1;
            }
        }
        let mentions_eigen = |t: &Type| eigen.iter().any(|v| t.has_free(v));
        let (head, doms) = match candidates.choose(rng) {
            Some(c) if rng.gen_bool(0.8) || mentions_eigen(goal) => c.clone(),
            _ => {
                if mentions_eigen(goal) {
                    return None;
                }
                let n_args = if depth > 1 { rng.gen_range(0..=2) } else { 0 };
                let doms: Vec<Type> = (0..n_args)
                    .map(|_| self.types.proper(rng, 3))
                    .collect();
                if doms.iter().any(mentions_eigen) {
                    return None;
                }
                let ty = Type::arrows(doms.clone(), goal.clone());
                let name = self.declare(ty);
                (name, doms)
            }
        };
        let mut t = Term::var(head);
        for d in &doms {
            let arg = self.run(rng, locals, eigen, d, depth - 1)?;
            t = Term::app(t, arg);
        }
        Some(t)
    }
}

/// Every normal term with at most `max_size` nodes whose free variables are
/// among `free`, one per α-class. Binders are named by depth (`x`, `y`, ...
/// skipping `free`).
pub fn normal_terms_up_to(max_size: usize, free: &[String]) -> Vec<Term> {
    let avoid: BTreeSet<String> = free.iter().cloned().collect();
    let mut names: Vec<String> = Vec::new();
    for _ in 0..max_size {
        let n = fresh_like(TERM_BINDERS[names.len() % TERM_BINDERS.len()], |c| {
            avoid.contains(c) || names.iter().any(|m| m == c)
        });
        names.push(n);
    }
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(exact(size, free, &names, 0, true));
    }
    out
}

/// Normal terms of exactly `size` nodes; `allow_abs` is false in function
/// position, where an abstraction would form a redex.
fn exact(size: usize, free: &[String], names: &[String], depth: usize, allow_abs: bool) -> Vec<Term> {
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    if size == 1 {
        out.extend(free.iter().map(|x| Term::var(x.clone())));
        out.extend(names[..depth].iter().map(|x| Term::var(x.clone())));
        return out;
    }
    if allow_abs {
        let x = &names[depth];
        for body in exact(size - 1, free, names, depth + 1, true) {
            out.push(Term::abs(x.clone(), body));
        }
    }
    for fs in 1..size - 1 {
        let funs = exact(fs, free, names, depth, false);
        if funs.is_empty() {
            continue;
        }
        let args = exact(size - 1 - fs, free, names, depth, true);
        for f in &funs {
            for a in &args {
                out.push(Term::app(f.clone(), a.clone()));
            }
        }
    }
    out
}
