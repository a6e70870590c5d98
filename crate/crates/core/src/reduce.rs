//! β-reduction: leftmost-outermost normalization and weak head reduction,
//! both with replayable step traces and a fuel bound.

use alloc::vec::Vec;
use core::fmt;

use crate::term::Term;

/// Default step budget for [`normalize`].
pub const DEFAULT_NORMALIZE_FUEL: usize = 10_000;
/// Default step budget for [`weak_head_reduce`].
pub const DEFAULT_WHNF_FUEL: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Full,
    WeakHead,
}

/// One move from a node to a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    /// Function part of an application.
    Left,
    /// Argument part of an application.
    Right,
    /// Body of an abstraction.
    Body,
}

impl Move {
    pub fn letter(self) -> char {
        match self {
            Move::Left => 'L',
            Move::Right => 'R',
            Move::Body => 'B',
        }
    }

    pub fn from_letter(c: char) -> Option<Move> {
        match c {
            'L' => Some(Move::Left),
            'R' => Some(Move::Right),
            'B' => Some(Move::Body),
            _ => None,
        }
    }
}

/// Root-to-node path, printed as a string of `L`, `R`, `B`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Path(pub Vec<Move>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn parse(s: &str) -> Option<Path> {
        s.chars().map(Move::from_letter).collect::<Option<Vec<_>>>().map(Path)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.0 {
            write!(f, "{}", m.letter())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub strategy: Strategy,
    pub path: Path,
    pub result: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Normalized,
    WhnfReached,
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: Term,
    pub steps: Vec<Step>,
    pub status: Status,
}

impl ReductionTrace {
    pub fn final_term(&self) -> &Term {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }

    /// Re-contracts every recorded redex and checks that each step
    /// reproduces the recorded result.
    pub fn replays(&self) -> bool {
        let mut cur = self.initial.clone();
        for step in &self.steps {
            match contract_at(&cur, &step.path) {
                Some(next) if next == step.result => cur = next,
                _ => return false,
            }
        }
        match self.status {
            Status::Normalized => is_normal(&cur),
            Status::WhnfReached => weak_head_step(&cur).is_none(),
            Status::FuelExhausted => true,
        }
    }
}

pub fn is_redex(t: &Term) -> bool {
    matches!(t, Term::App(f, _) if f.is_abs())
}

/// No β-redex anywhere.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Abs(_, body) => is_normal(body),
        Term::App(f, a) => !f.is_abs() && is_normal(f) && is_normal(a),
    }
}

/// A variable applied to zero or more normal arguments.
pub fn is_simple(t: &Term) -> bool {
    let (head, args) = t.spine();
    head.is_var() && args.into_iter().all(is_normal)
}

/// `t = (head) args` with the maximal argument list.
pub fn head_decompose(t: &Term) -> (Term, Vec<Term>) {
    let (head, args) = t.spine();
    (head.clone(), args.into_iter().cloned().collect())
}

fn beta(redex: &Term) -> Option<Term> {
    match redex {
        Term::App(f, a) => match &**f {
            Term::Abs(x, body) => Some(body.subst(x, a)),
            _ => None,
        },
        _ => None,
    }
}

/// Contracts the redex found at `path`.
pub fn contract_at(t: &Term, path: &Path) -> Option<Term> {
    fn go(t: &Term, moves: &[Move]) -> Option<Term> {
        match moves.split_first() {
            None => beta(t),
            Some((m, rest)) => match (m, t) {
                (Move::Left, Term::App(f, a)) => Some(Term::app(go(f, rest)?, (**a).clone())),
                (Move::Right, Term::App(f, a)) => Some(Term::app((**f).clone(), go(a, rest)?)),
                (Move::Body, Term::Abs(x, body)) => Some(Term::abs(x.clone(), go(body, rest)?)),
                _ => None,
            },
        }
    }
    go(t, &path.0)
}

/// Position of the leftmost-outermost redex.
pub fn leftmost_redex(t: &Term) -> Option<Path> {
    fn go(t: &Term, path: &mut Vec<Move>) -> bool {
        match t {
            Term::Var(_) => false,
            Term::Abs(_, body) => {
                path.push(Move::Body);
                if go(body, path) {
                    return true;
                }
                path.pop();
                false
            }
            Term::App(f, a) => {
                if f.is_abs() {
                    return true;
                }
                path.push(Move::Left);
                if go(f, path) {
                    return true;
                }
                path.pop();
                path.push(Move::Right);
                if go(a, path) {
                    return true;
                }
                path.pop();
                false
            }
        }
    }
    let mut path = Vec::new();
    go(t, &mut path).then_some(Path(path))
}

/// Position of the weak head redex: `(λx u) v v₁ ... vₘ` has it at `Lᵐ`.
pub fn weak_head_redex(t: &Term) -> Option<Path> {
    let (head, args) = t.spine();
    if head.is_abs() && !args.is_empty() {
        Some(Path(alloc::vec![Move::Left; args.len() - 1]))
    } else {
        None
    }
}

/// Contracts the weak head redex; `None` when `t` is `(x) v₁ ... vₘ` or an
/// abstraction.
pub fn weak_head_step(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    match head {
        Term::Abs(x, body) if !args.is_empty() => {
            let reduced = body.subst(x, args[0]);
            Some(Term::apps(reduced, args[1..].iter().map(|a| (*a).clone())))
        }
        _ => None,
    }
}

pub fn weak_head_reduce(t: &Term, fuel: usize) -> ReductionTrace {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    loop {
        let Some(path) = weak_head_redex(&cur) else {
            return ReductionTrace {
                initial: t.clone(),
                steps,
                status: Status::WhnfReached,
            };
        };
        if steps.len() == fuel {
            return ReductionTrace {
                initial: t.clone(),
                steps,
                status: Status::FuelExhausted,
            };
        }
        cur = weak_head_step(&cur).expect("head redex present");
        steps.push(Step {
            strategy: Strategy::WeakHead,
            path,
            result: cur.clone(),
        });
    }
}

/// Leftmost-outermost reduction until normal form or fuel exhaustion.
pub fn normalize(t: &Term, fuel: usize) -> ReductionTrace {
    let mut steps = Vec::new();
    let mut cur = t.clone();
    loop {
        let Some(path) = leftmost_redex(&cur) else {
            return ReductionTrace {
                initial: t.clone(),
                steps,
                status: Status::Normalized,
            };
        };
        if steps.len() == fuel {
            return ReductionTrace {
                initial: t.clone(),
                steps,
                status: Status::FuelExhausted,
            };
        }
        cur = contract_at(&cur, &path).expect("redex present at path");
        steps.push(Step {
            strategy: Strategy::Full,
            path,
            result: cur.clone(),
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuelExhausted;

impl fmt::Display for FuelExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("reduction fuel exhausted")
    }
}

impl core::error::Error for FuelExhausted {}

/// Normal form without recording a trace. Contracts the same redexes as
/// [`normalize`] (normal order), so it needs the same amount of fuel.
pub fn normal_form(t: &Term, fuel: usize) -> Result<Term, FuelExhausted> {
    let mut remaining = fuel;
    nf(t.clone(), &mut remaining)
}

/// Like [`normal_form`], also reporting the number of contractions.
pub fn normal_form_counted(t: &Term, fuel: usize) -> Result<(Term, usize), FuelExhausted> {
    let mut remaining = fuel;
    let n = nf(t.clone(), &mut remaining)?;
    Ok((n, fuel - remaining))
}

fn nf(mut t: Term, fuel: &mut usize) -> Result<Term, FuelExhausted> {
    loop {
        match t {
            Term::Abs(x, body) => return Ok(Term::abs(x, nf(*body, fuel)?)),
            _ => {
                if weak_head_redex(&t).is_some() {
                    if *fuel == 0 {
                        return Err(FuelExhausted);
                    }
                    *fuel -= 1;
                    t = weak_head_step(&t).expect("head redex present");
                    continue;
                }
                let (head, args) = head_decompose(&t);
                let mut out = head;
                for a in args {
                    out = Term::app(out, nf(a, fuel)?);
                }
                return Ok(out);
            }
        }
    }
}
