//! Storage operators.
//!
//! `T` stores a datum `t` of type `D` when for every presentation
//! `θ ≃β t` the application `(T)θ f` head-reduces to `(f)σ(τ)`, for one
//! `τ` independent of the presentation, `τ` β-equal to a term typed at `D`.
//!
//! The harness runs each presentation, extracts the argument of `f`, and
//! computes `τ` as the least general generalization of those arguments.
//! The pattern variables of `τ` are what the substitutions `σ` fill in.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::classify::{godel_translate, neg, BottomPresent};
use crate::context::Context;
use crate::names::{fresh_like, first_unused, TERM_BINDERS};
use crate::reduce::{normal_form, weak_head_reduce, ReductionTrace, Status};
use crate::term::Term;
use crate::ty::Type;
use crate::typing::check_f0;

/// Default head-reduction budget per run.
pub const DEFAULT_STORAGE_FUEL: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageValue {
    pub label: String,
    pub canonical: Term,
    /// Terms β-equal to `canonical`.
    pub presentations: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageSpec {
    /// `D`, or the input type `E` of a pair `(E, S)`.
    pub data_type: Type,
    /// `S` for a pair `(E, S)`; `None` means `S = D`.
    pub output_type: Option<Type>,
    pub values: Vec<StorageValue>,
    pub continuation: String,
}

impl StorageSpec {
    pub fn new(data_type: Type, values: Vec<StorageValue>) -> StorageSpec {
        StorageSpec {
            data_type,
            output_type: None,
            values,
            continuation: String::from(crate::DEFAULT_CONTINUATION),
        }
    }

    /// The type stored values must have.
    pub fn target_type(&self) -> &Type {
        self.output_type.as_ref().unwrap_or(&self.data_type)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Head normal form `(f)u`.
    Match { argument: Term },
    /// Head normal form not of the shape `(f)u`.
    HeadMismatch { whnf: Term },
    FuelExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub presentation: Term,
    pub trace: ReductionTrace,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueReport {
    pub label: String,
    pub runs: Vec<Run>,
    /// Common generalization of the arguments of `f`, when every run matched.
    pub tau: Option<Term>,
    /// Per run, the pattern variables of `tau` and their instances.
    pub sigmas: Vec<Vec<(String, Term)>>,
    /// Normal form of `tau`, the candidate `τ'`.
    pub tau_nf: Option<Term>,
    /// `tau` is β-equal to a closed term: no pattern variable survives
    /// normalization.
    pub presentation_insensitive: bool,
    /// `⊢_{F₀} τ' : S`.
    pub typed: bool,
    /// `τ'` is α-equal to the normal form of the canonical datum.
    pub agrees_with_canonical: bool,
}

impl ValueReport {
    pub fn stored(&self) -> bool {
        self.tau.is_some() && self.presentation_insensitive && self.typed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageReport {
    pub values: Vec<ValueReport>,
    /// Every sampled value is stored.
    pub is_storage_operator: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StorageError {
    OperatorNotClosed(BTreeSet<String>),
    ContinuationNotFresh(String),
    InvalidSpec(String),
}

impl fmt::Display for StorageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StorageError::OperatorNotClosed(vs) => {
                f.write_str("operator has free variables:")?;
                for v in vs {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
            StorageError::ContinuationNotFresh(n) => {
                write!(f, "continuation variable `{n}` occurs free in the operator or a presentation")
            }
            StorageError::InvalidSpec(m) => write!(f, "invalid storage spec: {m}"),
        }
    }
}

impl core::error::Error for StorageError {}

/// `D* → ¬¬D`
pub fn omm_type(d: &Type) -> Result<Type, BottomPresent> {
    omm_pair_type(d, d)
}

/// `E* → ¬¬S`
pub fn omm_pair_type(e: &Type, s: &Type) -> Result<Type, BottomPresent> {
    if s.contains_atom(crate::ATOM_BOT) {
        return Err(BottomPresent);
    }
    Ok(Type::arrow(godel_translate(e)?, neg(neg(s.clone()))))
}

/// Runs `T` on every presentation of every value of `spec`.
pub fn run_storage(t: &Term, spec: &StorageSpec, fuel: usize) -> Result<StorageReport, StorageError> {
    validate(t, spec, fuel)?;
    let values = spec
        .values
        .iter()
        .map(|v| run_value(t, v, spec, fuel))
        .collect::<Vec<_>>();
    let is_storage_operator = values.iter().all(ValueReport::stored);
    Ok(StorageReport {
        values,
        is_storage_operator,
    })
}

/// As [`run_storage`] for a pair `(E, S)`: data typed at `E`, results at `S`.
pub fn run_storage_pair(
    t: &Term,
    e: &Type,
    s: &Type,
    spec: &StorageSpec,
    fuel: usize,
) -> Result<StorageReport, StorageError> {
    let mut spec = spec.clone();
    spec.data_type = e.clone();
    spec.output_type = Some(s.clone());
    run_storage(t, &spec, fuel)
}

fn validate(t: &Term, spec: &StorageSpec, fuel: usize) -> Result<(), StorageError> {
    let fv = t.free_vars();
    if !fv.is_empty() {
        return Err(StorageError::OperatorNotClosed(fv));
    }
    let f = &spec.continuation;
    if spec.values.iter().any(|v| v.presentations.iter().any(|p| p.has_free(f))) {
        return Err(StorageError::ContinuationNotFresh(f.clone()));
    }
    let empty = Context::new();
    for v in &spec.values {
        let invalid = |m: String| StorageError::InvalidSpec(format!("value `{}`: {m}", v.label));
        if v.presentations.is_empty() {
            return Err(invalid("no presentations".into()));
        }
        let nf = normal_form(&v.canonical, fuel)
            .map_err(|_| invalid("canonical term does not normalize".into()))?;
        if !check_f0(&empty, &nf, &spec.data_type).expect("normal form") {
            return Err(invalid(format!(
                "canonical term is not typable at {}",
                spec.data_type
            )));
        }
        for p in &v.presentations {
            let pn = normal_form(p, fuel)
                .map_err(|_| invalid(format!("presentation {p} does not normalize")))?;
            if !pn.alpha_eq(&nf) {
                return Err(invalid(format!("presentation {p} is not β-equal to the canonical term")));
            }
        }
    }
    Ok(())
}

fn run_one(t: &Term, theta: &Term, f: &str, fuel: usize) -> Run {
    let subject = Term::apps(t.clone(), [theta.clone(), Term::var(f)]);
    let trace = weak_head_reduce(&subject, fuel);
    let outcome = match trace.status {
        Status::FuelExhausted => Outcome::FuelExhausted,
        _ => {
            let whnf = trace.final_term();
            match whnf {
                Term::App(h, u) if matches!(&**h, Term::Var(x) if x == f) => Outcome::Match {
                    argument: (**u).clone(),
                },
                _ => Outcome::HeadMismatch { whnf: whnf.clone() },
            }
        }
    };
    Run {
        presentation: theta.clone(),
        trace,
        outcome,
    }
}

fn run_value(t: &Term, v: &StorageValue, spec: &StorageSpec, fuel: usize) -> ValueReport {
    let runs: Vec<Run> = v
        .presentations
        .iter()
        .map(|p| run_one(t, p, &spec.continuation, fuel))
        .collect();
    let args: Option<Vec<&Term>> = runs
        .iter()
        .map(|r| match &r.outcome {
            Outcome::Match { argument } => Some(argument),
            _ => None,
        })
        .collect();
    let mut report = ValueReport {
        label: v.label.clone(),
        runs: Vec::new(),
        tau: None,
        sigmas: Vec::new(),
        tau_nf: None,
        presentation_insensitive: false,
        typed: false,
        agrees_with_canonical: false,
    };
    if let Some(args) = args {
        let g = generalize(&args);
        let tau_nf = normal_form(&g.tau, fuel).ok();
        if let Some(nf) = &tau_nf {
            let pattern_free = g.vars.iter().all(|p| !nf.has_free(p));
            report.presentation_insensitive = pattern_free;
            report.typed = pattern_free
                && nf.is_closed()
                && check_f0(&Context::new(), nf, spec.target_type()).expect("normal form");
            report.agrees_with_canonical = normal_form(&v.canonical, fuel)
                .map(|c| c.alpha_eq(nf))
                .unwrap_or(false);
        }
        report.tau = Some(g.tau);
        report.sigmas = g.sigmas;
        report.tau_nf = tau_nf;
    }
    report.runs = runs;
    report
}

/// Least general generalization of a list of terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generalization {
    pub tau: Term,
    /// Pattern variables introduced, in order.
    pub vars: Vec<String>,
    /// For each input term, its instance of every pattern variable.
    pub sigmas: Vec<Vec<(String, Term)>>,
}

/// Anti-unification up to α: binders are first renamed by depth so that
/// α-equivalent subterms coincide syntactically; each distinct tuple of
/// disagreeing subterms becomes one pattern variable.
pub fn generalize(terms: &[&Term]) -> Generalization {
    let mut names = BTreeSet::new();
    for t in terms {
        names.extend(t.all_names());
    }
    let canon: Vec<Term> = terms.iter().map(|t| canonical_binders(t, &names)).collect();
    let mut au = AntiUnifier {
        names: &names,
        table: Vec::new(),
    };
    let refs: Vec<&Term> = canon.iter().collect();
    let tau = match refs.first() {
        Some(_) => au.go(&refs),
        None => Term::var("_"),
    };
    let vars: Vec<String> = au.table.iter().map(|(_, p)| p.clone()).collect();
    let sigmas = (0..terms.len())
        .map(|i| {
            au.table
                .iter()
                .map(|(tuple, p)| (p.clone(), tuple[i].clone()))
                .collect()
        })
        .collect();
    Generalization { tau, vars, sigmas }
}

struct AntiUnifier<'a> {
    names: &'a BTreeSet<String>,
    table: Vec<(Vec<Term>, String)>,
}

impl AntiUnifier<'_> {
    fn go(&mut self, ts: &[&Term]) -> Term {
        let first = ts[0];
        if ts.iter().all(|t| *t == first) {
            return first.clone();
        }
        match first {
            Term::Abs(x, _) => {
                let bodies: Option<Vec<&Term>> = ts
                    .iter()
                    .map(|t| match t {
                        Term::Abs(y, b) if y == x => Some(&**b),
                        _ => None,
                    })
                    .collect();
                if let Some(bodies) = bodies {
                    return Term::abs(x.clone(), self.go(&bodies));
                }
            }
            Term::App(..) => {
                let parts: Option<Vec<(&Term, &Term)>> = ts
                    .iter()
                    .map(|t| match t {
                        Term::App(f, a) => Some((&**f, &**a)),
                        _ => None,
                    })
                    .collect();
                if let Some(parts) = parts {
                    let fs: Vec<&Term> = parts.iter().map(|p| p.0).collect();
                    let args: Vec<&Term> = parts.iter().map(|p| p.1).collect();
                    let f = self.go(&fs);
                    let a = self.go(&args);
                    return Term::app(f, a);
                }
            }
            Term::Var(_) => {}
        }
        let tuple: Vec<Term> = ts.iter().map(|t| (*t).clone()).collect();
        if let Some((_, p)) = self.table.iter().find(|(tu, _)| *tu == tuple) {
            return Term::var(p.clone());
        }
        let taken: BTreeSet<&str> = self.table.iter().map(|(_, p)| p.as_str()).collect();
        let p = fresh_like("p1", |n| self.names.contains(n) || taken.contains(n));
        self.table.push((tuple, p.clone()));
        Term::var(p)
    }
}

/// Renames every binder to the name its depth selects from
/// `x, y, z, u, v, w, x1, ...`, skipping `avoid`.
fn canonical_binders(t: &Term, avoid: &BTreeSet<String>) -> Term {
    fn name_at(depth: usize, avoid: &BTreeSet<String>) -> String {
        let mut k = 0;
        let mut chosen = Vec::<String>::new();
        loop {
            let n = first_unused(&TERM_BINDERS, |c| avoid.contains(c) || chosen.iter().any(|s| s == c));
            if k == depth {
                return n;
            }
            chosen.push(n);
            k += 1;
        }
    }
    fn go(t: &Term, depth: usize, avoid: &BTreeSet<String>) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::Abs(x, body) => {
                let y = name_at(depth, avoid);
                let body = go(body, depth + 1, avoid);
                // Deeper binders use other names, so this renaming cannot capture.
                Term::abs(y.clone(), body.subst(x, &Term::var(y)))
            }
            Term::App(f, a) => Term::app(go(f, depth, avoid), go(a, depth, avoid)),
        }
    }
    go(t, 0, avoid)
}

/// `c`, `(λz.z)c` and `(λz.c)(λz.z)`.
pub fn standard_presentations(c: &Term) -> Vec<Term> {
    let names = c.all_names();
    let z = fresh_like("z", |n| names.contains(n));
    let id = Term::abs(z.clone(), Term::var(z.clone()));
    alloc::vec![
        c.clone(),
        Term::app(id.clone(), c.clone()),
        Term::app(Term::abs(z, c.clone()), id),
    ]
}

/// Wraps `wraps` randomly chosen subterms of `c` as `(λz.z)u`.
pub fn random_presentation<R: Rng + ?Sized>(c: &Term, wraps: usize, rng: &mut R) -> Term {
    let mut t = c.clone();
    for _ in 0..wraps {
        let names = t.all_names();
        let z = fresh_like("z", |n| names.contains(n));
        let target = rng.gen_range(0..t.size());
        t = wrap_at(&t, target, &z);
    }
    t
}

/// Wraps the `target`-th node in preorder.
fn wrap_at(t: &Term, target: usize, z: &str) -> Term {
    fn go(t: &Term, target: usize, counter: &mut usize, z: &str) -> Term {
        let here = *counter;
        *counter += 1;
        let rebuilt = match t {
            Term::Var(_) => t.clone(),
            Term::Abs(x, body) => Term::abs(x.clone(), go(body, target, counter, z)),
            Term::App(f, a) => {
                let f = go(f, target, counter, z);
                Term::app(f, go(a, target, counter, z))
            }
        };
        if here == target {
            Term::app(Term::abs(z, Term::var(z)), rebuilt)
        } else {
            rebuilt
        }
    }
    go(t, target, &mut 0, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{church_nat, id_type, nat_type};
    use crate::parse::parse_term;
    use crate::witness::{nat_storage_operator, remark_operator};
    use rand::SeedableRng;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn nat_spec(k: usize) -> StorageSpec {
        let values = (0..=k)
            .map(|i| {
                let c = church_nat(i);
                StorageValue {
                    label: alloc::format!("{i}"),
                    presentations: standard_presentations(&c),
                    canonical: c,
                }
            })
            .collect();
        StorageSpec::new(nat_type(), values)
    }

    #[test]
    fn constant_operator_for_id() {
        let c = t("\\x. x");
        let spec = StorageSpec::new(
            id_type(),
            alloc::vec![StorageValue {
                label: "id".into(),
                presentations: standard_presentations(&c),
                canonical: c,
            }],
        );
        let r = run_storage(&t("\\n. \\f. f (\\x. x)"), &spec, 100).unwrap();
        assert!(r.is_storage_operator);
        let v = &r.values[0];
        assert!(v.tau.as_ref().unwrap().alpha_eq(&t("\\x. x")));
        assert!(v.sigmas.iter().all(Vec::is_empty));
    }

    #[test]
    fn numerals_are_stored() {
        let r = run_storage(&nat_storage_operator(), &nat_spec(3), DEFAULT_STORAGE_FUEL).unwrap();
        assert!(r.is_storage_operator, "{r:?}");
        for (k, v) in r.values.iter().enumerate() {
            assert!(v.agrees_with_canonical);
            assert!(v.tau_nf.as_ref().unwrap().alpha_eq(&church_nat(k)));
            assert!(v.runs.iter().all(|run| run.trace.replays()));
        }
    }

    #[test]
    fn remark_operator_is_rejected() {
        let r = run_storage(&remark_operator(), &nat_spec(2), DEFAULT_STORAGE_FUEL).unwrap();
        assert!(!r.is_storage_operator);
        assert!(r.values.iter().any(|v| !v.presentation_insensitive));
    }

    #[test]
    fn errors() {
        let spec = nat_spec(0);
        assert!(matches!(
            run_storage(&t("\\x. y"), &spec, 10),
            Err(StorageError::OperatorNotClosed(_))
        ));
        let mut bad = spec.clone();
        bad.values[0].presentations.push(t("(\\z. z) f"));
        assert!(matches!(
            run_storage(&t("\\x. x"), &bad, 10),
            Err(StorageError::ContinuationNotFresh(_))
        ));
        let mut bad = spec;
        bad.values[0].presentations.push(church_nat(1));
        assert!(matches!(
            run_storage(&t("\\x. x"), &bad, 10),
            Err(StorageError::InvalidSpec(_))
        ));
    }

    #[test]
    fn head_mismatch() {
        let r = run_storage(&t("\\n. \\f. n"), &nat_spec(0), 100).unwrap();
        assert!(matches!(r.values[0].runs[0].outcome, Outcome::HeadMismatch { .. }));
        assert!(!r.is_storage_operator);
    }

    #[test]
    fn generalization() {
        let a = t("\\z. z (u v)");
        let b = t("\\w. w ((\\q. q) v)");
        let g = generalize(&[&a, &b]);
        assert_eq!(g.vars.len(), 1);
        let p = Term::var(g.vars[0].clone());
        let expected = Term::abs("x", Term::app(Term::var("x"), Term::app(p, Term::var("v"))));
        assert!(g.tau.alpha_eq(&expected));
        let same = generalize(&[&a, &a]);
        assert!(same.vars.is_empty());
        assert!(same.tau.alpha_eq(&a));
    }

    #[test]
    fn presentations_are_beta_equal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c = church_nat(3);
        for _ in 0..20 {
            let p = random_presentation(&c, 3, &mut rng);
            assert!(normal_form(&p, 1000).unwrap().alpha_eq(&c));
        }
    }

    #[test]
    fn omm_types() {
        let n = nat_type();
        let ty = omm_type(&n).unwrap();
        assert_eq!(ty, Type::arrow(godel_translate(&n).unwrap(), neg(neg(n))));
        assert!(omm_type(&Type::atom("Bot")).is_err());
    }
}
