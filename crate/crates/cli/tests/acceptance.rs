//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sysf::corpus::load_corpus;
use sysf::formats::{DerivationJson, StorageSpecJson};
use sysf_core::classify::{bool_type, church_nat, d_type, ends_with, id_type, lg, nat_type};
use sysf_core::gen::{f0_judgment, normal_terms_up_to, simple_term, TypeGen};
use sysf_core::lab::{
    alpha_classes, check_input_counterexample, enumerate_f0, probe_output, refute_input_via_output,
    SearchBudget,
};
use sysf_core::reduce::{normalize, DEFAULT_NORMALIZE_FUEL};
use sysf_core::storage::{omm_type, run_storage, Outcome, DEFAULT_STORAGE_FUEL};
use sysf_core::transform::{alpha_probe, certify_lemma31, gen_transformers};
use sysf_core::typing::{check_derivation_f, check_f0, check_s, erase_judgment};
use sysf_core::{Context, Derivation, Parser, Status, Term, Type, ATOM_O, DEFAULT_ALPHA};

use common::corpus;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn shipped_derivation(name: &str) -> Result<Derivation, String> {
    let path = corpus(&format!("derivations/{name}.json"));
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let json: DerivationJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    json.to_derivation(&Parser::new()).map_err(|e| e.to_string())
}

fn alpha_ctx() -> Context {
    Context::new().with(DEFAULT_ALPHA, Type::atom(ATOM_O)).unwrap()
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn boolean_inhabitants() -> Verdict {
    let start = Instant::now();
    let found = enumerate_f0(&Context::new(), &bool_type(), SearchBudget::depth(4));
    let elapsed = start.elapsed();
    let p = Parser::new();
    let expected = [p.term("\\x. \\y. x").unwrap(), p.term("\\x. \\y. y").unwrap()];
    ensure(found.complete, || "search truncated".into())?;
    ensure(alpha_classes(&found.terms) == alpha_classes(&expected), || {
        format!("found {:?}", found.terms.iter().map(ToString::to_string).collect::<Vec<_>>())
    })?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("2 inhabitants in {elapsed:?}"))
}

fn d_separation() -> Verdict {
    let d = shipped_derivation("d_separation")?;
    check_derivation_f(&d).map_err(|e| e.to_string())?;
    let j = &d.conclusion;
    ensure(j.ctx.is_empty() && j.ty.alpha_eq(&d_type()), || format!("wrong conclusion {j}"))?;
    let lam = Parser::new().term("\\x. x (\\y. y)").unwrap();
    ensure(j.term.alpha_eq(&lam), || format!("wrong term {}", j.term))?;
    ensure(!check_f0(&j.ctx, &j.term, &j.ty).unwrap(), || "F0 accepts".into())?;
    ensure(check_input_counterexample(&d_type(), &j.term, &d).unwrap(), || {
        "check_input_counterexample returned false".into()
    })?;
    Ok("F derivation valid, F0 rejects".into())
}

fn inputs_are_outputs() -> Verdict {
    let mut total = 0;
    for a in [id_type(), bool_type(), nat_type()] {
        let found = enumerate_f0(&Context::new(), &a, SearchBudget::depth(6));
        for t in &found.terms {
            ensure(check_f0(&Context::new(), t, &a).unwrap(), || format!("{t} : {a} rejected"))?;
        }
        total += found.terms.len();
        let v = probe_output(&a, SearchBudget::depth(6)).map_err(|e| e.to_string())?;
        ensure(!v.is_counterexample(), || format!("{a} has an alpha inhabitant"))?;
    }
    Ok(format!("{total} inhabitants rechecked, no alpha inhabitant"))
}

fn erasure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let types = TypeGen::default().with_atom_o();
    let mut with_quantifiers = 0;
    let n = 1000;
    for _ in 0..n {
        let j = f0_judgment(&mut rng, &types, 8, 5);
        ensure(check_f0(&j.ctx, &j.term, &j.ty).unwrap(), || format!("generator produced {j}"))?;
        if j.ty.has_quantifier() || j.ctx.iter().any(|(_, t)| t.has_quantifier()) {
            with_quantifiers += 1;
        }
        let e = erase_judgment(&j);
        ensure(check_s(&e.ctx, &e.term, &e.ty).unwrap(), || format!("S rejects the erasure {e} of {j}"))?;
    }
    Ok(format!("{n} judgments ({with_quantifiers} with quantifiers), 0 failures"))
}

fn certification() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let g = TypeGen::default();
    let n = 200;
    for _ in 0..n {
        let a = g.proper_with_free(&mut rng, 12, "X");
        let inst = g.proper(&mut rng, 6);
        let pair = gen_transformers(&a, "X", &inst);
        let cert = certify_lemma31(&pair).map_err(|e| format!("{a}, {inst}: {e}"))?;
        for d in [&cert.t_derivation, &cert.t_prime_derivation] {
            check_derivation_f(d).map_err(|e| format!("{a}, {inst}: {e}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("{n} pairs in {elapsed:?}"))
}

fn maybe_quantify(rng: &mut ChaCha8Rng, t: Type) -> Type {
    let z = ["Y", "Z", "W"][rng.gen_range(0..3)];
    if rng.gen_bool(0.4) && t.has_free(z) {
        Type::forall(z, t)
    } else {
        t
    }
}

fn spine(rng: &mut ChaCha8Rng, args: Vec<Type>, tail: Type) -> Type {
    let mut t = maybe_quantify(rng, tail);
    for a in args.into_iter().rev() {
        t = maybe_quantify(rng, Type::arrow(a, t));
    }
    t
}

fn small_types() -> TypeGen {
    TypeGen {
        free: names(&["X", "Y", "Z"]),
        binders: names(&["Y", "Z", "W"]),
        ..TypeGen::default()
    }
}

fn ending_with_x(rng: &mut ChaCha8Rng) -> (Type, usize) {
    let n = rng.gen_range(0..=3);
    let args = (0..n).map(|_| small_types().proper(rng, 5)).collect();
    (spine(rng, args, Type::var("X")), n)
}

/// Runs the probe for argument counts `n - 1`, `n` and `n + 1`.
fn probe_all(rng: &mut ChaCha8Rng, a: &Type, n: usize) -> Result<usize, String> {
    let inst = TypeGen::default().proper(rng, 6);
    let delta = simple_term(rng, 6, &names(&["d", "e"]));
    let mut runs = 0;
    for r in n.saturating_sub(1)..=n + 1 {
        let args: Vec<Term> = (0..r).map(|_| simple_term(rng, 5, &names(&["a", "b"]))).collect();
        let p = alpha_probe(a, "X", &inst, &delta, &args).map_err(|e| format!("{a}: {e}"))?;
        ensure(p.alpha_free, || format!("alpha absent for {a} with {r} args: {}", p.nf))?;
        runs += 1;
    }
    Ok(runs)
}

fn alpha_probes() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let samples = 120;
    let mut runs = 0;
    for _ in 0..samples {
        let (a, n) = ending_with_x(&mut rng);
        ensure(ends_with(&a, "X"), || format!("{a} does not end with X"))?;
        runs += probe_all(&mut rng, &a, n)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..samples {
        let n = rng.gen_range(1..=3);
        let hit = rng.gen_range(0..n);
        let args: Vec<Type> = (0..n)
            .map(|i| if i == hit { ending_with_x(&mut rng).0 } else { small_types().proper(&mut rng, 5) })
            .collect();
        let a = spine(&mut rng, args, Type::var("Y"));
        runs += probe_all(&mut rng, &a, n)?;
    }
    Ok(format!("{samples} samples per family, {runs} probes, all normalized with alpha present"))
}

fn refutation_pipeline() -> Verdict {
    let nn = Type::arrow(nat_type(), nat_type());
    let d = shipped_derivation("nat_fun_output")?;
    let r = refute_input_via_output(&nn, &d.conclusion.term, &d).map_err(|e| e.to_string())?;
    ensure(r.n == lg(&nn) + 1 && r.n == 8, || format!("n = {}", r.n))?;
    ensure(r.f0_rejects, || "F0 accepts the N -> N refutation".into())?;
    let d = shipped_derivation("d_output")?;
    let lam = Parser::new().term("\\x. x alpha").unwrap();
    ensure(d.conclusion.term.alpha_eq(&lam), || format!("witness is {}", d.conclusion.term))?;
    let r2 = refute_input_via_output(&d_type(), &d.conclusion.term, &d).map_err(|e| e.to_string())?;
    ensure(r2.f0_rejects, || "F0 accepts the D refutation".into())?;
    Ok(format!("N -> N: n = {}, D: n = {}, both rejected by F0", r.n, r2.n))
}

fn storage_spec() -> Result<sysf_core::storage::StorageSpec, String> {
    let text = fs::read_to_string(corpus("storage/nat.json")).map_err(|e| e.to_string())?;
    let json: StorageSpecJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    json.to_spec(&Parser::new()).map_err(|e| e.to_string())
}

fn operator(name: &str) -> Result<Term, String> {
    let text = fs::read_to_string(corpus(&format!("operators/{name}.term"))).map_err(|e| e.to_string())?;
    Parser::new().term(text.trim()).map_err(|e| e.to_string())
}

fn storage_positive() -> Verdict {
    let start = Instant::now();
    let op = operator("nat_storage")?;
    let d = shipped_derivation("nat_storage")?;
    check_derivation_f(&d).map_err(|e| e.to_string())?;
    let expected = omm_type(&nat_type()).unwrap();
    ensure(d.conclusion.ctx.is_empty() && d.conclusion.ty.alpha_eq(&expected), || {
        format!("derivation proves {}", d.conclusion)
    })?;
    ensure(d.conclusion.term.alpha_eq(&op), || "derivation is for another term".into())?;
    let spec = storage_spec()?;
    for k in 0..=5 {
        let v = spec.values.iter().find(|v| v.canonical.alpha_eq(&church_nat(k)));
        let v = v.ok_or_else(|| format!("numeral {k} missing"))?;
        ensure(v.presentations.len() >= 3, || format!("{k}: {} presentations", v.presentations.len()))?;
    }
    let fuel = DEFAULT_STORAGE_FUEL;
    ensure(fuel <= 50_000, || "fuel above 50000".into())?;
    let report = run_storage(&op, &spec, fuel).map_err(|e| e.to_string())?;
    for v in &report.values {
        for run in &v.runs {
            ensure(matches!(run.outcome, Outcome::Match { .. }), || {
                format!("{}: {:?} on {}", v.label, run.outcome, run.presentation)
            })?;
        }
        ensure(v.presentation_insensitive && v.stored(), || format!("{} not stored", v.label))?;
    }
    ensure(report.is_storage_operator, || "not a storage operator".into())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    let runs: usize = report.values.iter().map(|v| v.runs.len()).sum();
    Ok(format!("{runs} runs matched in {elapsed:?}"))
}

fn storage_negative() -> Verdict {
    let op = operator("remark")?;
    // λx.λy.(y)t with x free in t
    let Term::Abs(x, body) = &op else { return Err("not an abstraction".into()) };
    let Term::Abs(_, app) = &**body else { return Err("not a double abstraction".into()) };
    let (head, args) = app.spine();
    ensure(
        matches!(head, Term::Var(_)) && args.len() == 1 && args[0].has_free(x),
        || format!("{op} is not of the form \\x.\\y.(y)t with x free in t"),
    )?;
    let report = run_storage(&op, &storage_spec()?, DEFAULT_STORAGE_FUEL).map_err(|e| e.to_string())?;
    let failing = report.values.iter().filter(|v| !v.presentation_insensitive).count();
    ensure(failing >= 1, || "every value was presentation insensitive".into())?;
    Ok(format!("{failing} of {} values presentation sensitive", report.values.len()))
}

fn corpus_normalizes() -> Verdict {
    let entries = load_corpus(&Parser::new(), &corpus("judgments.txt")).map_err(|e| format!("{e:#}"))?;
    let mut accepted = 0;
    for e in &entries {
        let j = &e.judgment;
        if !sysf_core::reduce::is_normal(&j.term) || !check_f0(&j.ctx, &j.term, &j.ty).unwrap() {
            continue;
        }
        accepted += 1;
        let tr = normalize(&j.term, DEFAULT_NORMALIZE_FUEL);
        ensure(tr.status == Status::Normalized, || format!("line {} did not normalize", e.line))?;
    }
    ensure(accepted > 0, || "no accepted corpus terms".into())?;
    Ok(format!("{accepted} of {} corpus terms accepted and normalized", entries.len()))
}

fn oracle_equivalence() -> Verdict {
    let size = 7;
    let empty = Context::new();
    let cases = [
        ("Id", empty.clone(), id_type()),
        ("B", empty, bool_type()),
        ("O under alpha : O", alpha_ctx(), Type::atom(ATOM_O)),
    ];
    let mut counts = Vec::new();
    for (label, ctx, goal) in cases {
        let free: Vec<String> = ctx.names().map(String::from).collect();
        let brute: Vec<Term> = normal_terms_up_to(size, &free)
            .into_iter()
            .filter(|t| check_f0(&ctx, t, &goal).unwrap())
            .collect();
        let found = enumerate_f0(&ctx, &goal, SearchBudget::new(size + 3, 1_000_000).unwrap());
        ensure(found.complete, || format!("{label}: search truncated"))?;
        let small: Vec<&Term> = found.terms.iter().filter(|t| t.size() <= size).collect();
        let (b, s) = (alpha_classes(&brute), alpha_classes(small));
        ensure(b == s, || format!("{label}: brute force {} vs search {}", b.len(), s.len()))?;
        counts.push(format!("{label}: {}", b.len()));
    }
    Ok(counts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("boolean inhabitants", boolean_inhabitants),
        ("D separates F from F0", d_separation),
        ("Id, B, N are output types up to depth 6", inputs_are_outputs),
        ("erasure of F0 judgments types in S", erasure),
        ("transformer typings certify", certification),
        ("alpha survives the transformer probes", alpha_probes),
        ("input refutation through output witnesses", refutation_pipeline),
        ("storage operator for N", storage_positive),
        ("leaking operator is presentation sensitive", storage_negative),
        ("corpus terms normalize", corpus_normalizes),
        ("search agrees with brute force", oracle_equivalence),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let ms = start.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{ms} ms]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{ms} ms]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
