use std::cell::Cell;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser as ClapParser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sysf::corpus::parse_corpus;
use sysf::formats::{
    classify_json, context_json, judgment_json, AlphaProbeJson, CheckJson, DerivationCheckJson,
    DerivationErrorJson, DerivationJson, EnumerationJson, RefuteJson, StorageReportJson,
    StorageSpecJson, TraceJson, TransformerJson, VerdictJson,
};
use sysf_core::classify::{godel_translate, lg};
use sysf_core::lab::{
    check_input_counterexample, enumerate_f0, probe_output_with_witnesses,
    refute_input_via_output_with, SearchBudget,
};
use sysf_core::reduce::{
    normalize, weak_head_reduce, DEFAULT_NORMALIZE_FUEL, DEFAULT_WHNF_FUEL,
};
use sysf_core::storage::{random_presentation, run_storage, DEFAULT_STORAGE_FUEL};
use sysf_core::transform::{
    alpha_probe_with, certify_lemma31, gen_transformers_with, ProbeOptions, Transformer,
};
use sysf_core::typing::{
    check_derivation_f, check_derivation_ff, check_s, derive_f0, erase_context, erase_judgment,
    erase_type, Judgment, System,
};
use sysf_core::{Context, Derivation, Parser, Status, Term, Type, ATOM_O};

/// Curry-style System F toolkit: reduction, typing in F, F0 and S, derivation
/// checking, type classification, transformers, inhabitation probes and a
/// storage-operator harness.
///
/// Exit status: 0 accept, 1 reject or counterexample, 2 usage or input error.
#[derive(ClapParser)]
#[command(name = "sysf", version)]
struct Cli {
    /// Structured JSON output; alpha-probe, probe-output, refute-input and
    /// storage-check always print JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Declare an extra atomic type constant (O and Bot are built in).
    #[arg(long = "atom", value_name = "NAME", global = true)]
    atoms: Vec<String>,
    /// Name of the distinguished free term variable.
    #[arg(long, value_name = "NAME", default_value = sysf_core::DEFAULT_ALPHA, global = true)]
    alpha_var: String,
    /// Seed for every random choice.
    #[arg(long, default_value_t = 2024, global = true)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and pretty-print terms, types, contexts or judgments.
    Parse(ParseArgs),
    /// Leftmost-outermost normalization.
    Normalize(ReduceArgs),
    /// Weak head reduction.
    Whnf(ReduceArgs),
    /// Decide a judgment in F0 (normal terms only).
    #[command(name = "check-f0")]
    CheckF0(JudgeArgs),
    /// Decide a judgment in the simply typed system S.
    #[command(name = "check-s")]
    CheckS(CheckSArgs),
    /// Validate an explicit F derivation.
    #[command(name = "check-deriv")]
    CheckDeriv(DerivArgs),
    /// Validate an explicit derivation under the F_F restriction of forall_e.
    #[command(name = "check-deriv-ff")]
    CheckDerivFf(DerivArgs),
    /// Drop every quantifier from a type or context.
    Erase(EraseArgs),
    /// Syntactic classification of a type.
    Classify(ClassifyArgs),
    /// The transformer T_F for F, X and G.
    #[command(name = "gen-T")]
    GenT(GenArgs),
    /// The transformer T'_F for F, X and G.
    #[command(name = "gen-Tprime")]
    GenTprime(GenArgs),
    /// Normal form of (T'_A) delta t1 ... tr and the alpha occurrences in it.
    #[command(name = "alpha-probe")]
    AlphaProbe(AlphaProbeArgs),
    /// Normal F0 inhabitants of a type, bounded by derivation height.
    Enumerate(EnumerateArgs),
    /// Search for an inhabitant of `alpha : O |- t : S` mentioning alpha.
    #[command(name = "probe-output")]
    ProbeOutput(ProbeOutputArgs),
    /// Show a type is not an input type from an F derivation.
    #[command(name = "refute-input")]
    RefuteInput(RefuteArgs),
    /// Goedel translation A*.
    Godel(TypeOnly),
    /// Run a candidate storage operator on a storage spec.
    #[command(name = "storage-check")]
    StorageCheck(StorageArgs),
}

#[derive(Args, Default)]
struct TermIn {
    /// Term text.
    #[arg(long)]
    term: Option<String>,
    /// File holding the term.
    #[arg(long, value_name = "FILE", conflicts_with = "term")]
    term_file: Option<PathBuf>,
}

#[derive(Args, Default)]
struct TypeIn {
    /// Type text.
    #[arg(long = "type")]
    ty: Option<String>,
    /// File holding the type.
    #[arg(long = "type-file", value_name = "FILE", conflicts_with = "ty")]
    ty_file: Option<PathBuf>,
}

#[derive(Args, Default)]
struct CtxIn {
    /// Context `x : A, y : B`; empty when omitted.
    #[arg(long)]
    ctx: Option<String>,
    #[arg(long, value_name = "FILE", conflicts_with = "ctx")]
    ctx_file: Option<PathBuf>,
}

#[derive(Args)]
struct ParseArgs {
    #[command(flatten)]
    term: TermIn,
    #[command(flatten)]
    ty: TypeIn,
    #[command(flatten)]
    ctx: CtxIn,
    /// A judgment `ctx |- t : A`.
    #[arg(long)]
    judgment: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    term: TermIn,
    /// Step budget.
    #[arg(long)]
    fuel: Option<usize>,
    /// Print every step.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct JudgeArgs {
    #[command(flatten)]
    term: TermIn,
    #[command(flatten)]
    ty: TypeIn,
    #[command(flatten)]
    ctx: CtxIn,
    /// Check every judgment of a corpus file instead.
    #[arg(long, value_name = "FILE")]
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct CheckSArgs {
    #[command(flatten)]
    judge: JudgeArgs,
    /// Erase quantifiers from the context and type first.
    #[arg(long)]
    erase: bool,
}

#[derive(Args)]
struct DerivArgs {
    /// Derivation JSON file; stdin when omitted.
    #[arg(long, value_name = "FILE")]
    deriv: Option<PathBuf>,
}

#[derive(Args)]
struct EraseArgs {
    #[command(flatten)]
    ty: TypeIn,
    #[command(flatten)]
    ctx: CtxIn,
}

#[derive(Args)]
struct TypeOnly {
    #[command(flatten)]
    ty: TypeIn,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    ty: TypeIn,
    /// Also report `ends_with` for this variable or constant.
    #[arg(long = "ends-with", value_name = "NAME")]
    ends_with: Vec<String>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    ty: TypeIn,
    /// The type variable being replaced.
    #[arg(long, default_value = "X")]
    var: String,
    /// The instantiation G.
    #[arg(long)]
    inst: String,
    /// Also emit the certified typing derivation.
    #[arg(long)]
    with_derivation: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    T,
    Tprime,
}

#[derive(Args)]
struct AlphaProbeArgs {
    #[command(flatten)]
    ty: TypeIn,
    #[arg(long, default_value = "X")]
    var: String,
    #[arg(long)]
    inst: String,
    /// A simple term `(y)u1 ... un`.
    #[arg(long)]
    delta: String,
    /// Extra arguments t1 ... tr, in order.
    #[arg(long = "arg", value_name = "TERM")]
    args: Vec<String>,
    #[arg(long, value_enum, default_value = "tprime")]
    transformer: Which,
    #[arg(long)]
    fuel: Option<usize>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    ty: TypeIn,
    #[command(flatten)]
    ctx: CtxIn,
    /// Maximum derivation height.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Keep only terms with at most this many nodes.
    #[arg(long)]
    size_cap: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    max_terms: usize,
}

#[derive(Args)]
struct ProbeOutputArgs {
    #[command(flatten)]
    ty: TypeIn,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, default_value_t = 10_000)]
    max_terms: usize,
    /// F derivation of `alpha : O |- t : S` to try first.
    #[arg(long = "witness", value_name = "FILE")]
    witnesses: Vec<PathBuf>,
}

#[derive(Args)]
struct RefuteArgs {
    #[command(flatten)]
    ty: TypeIn,
    /// F derivation of `|- t : E` or of `alpha : O |- t : E`.
    #[arg(long, value_name = "FILE")]
    deriv: PathBuf,
}

#[derive(Args)]
struct StorageArgs {
    /// File holding the operator term.
    #[arg(long, value_name = "FILE")]
    operator: Option<PathBuf>,
    /// Operator term given inline.
    #[arg(long, conflicts_with = "operator")]
    term: Option<String>,
    /// Storage spec JSON.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STORAGE_FUEL)]
    fuel: usize,
    /// Add this many random presentations per value.
    #[arg(long, default_value_t = 0)]
    random_presentations: usize,
    /// Name of the continuation variable; overrides the spec.
    #[arg(long, value_name = "NAME")]
    continuation: Option<String>,
}

/// Outcome of a subcommand, mapped to the exit status.
enum Verdict {
    Accept,
    Reject,
}

struct Env {
    json: bool,
    parser: Parser,
    alpha: String,
    seed: u64,
    stdin_used: Cell<bool>,
}

impl Env {
    /// Inline text, file contents, or stdin for the first missing input.
    fn text(&self, inline: &Option<String>, file: &Option<PathBuf>, flag: &str) -> Result<String> {
        if let Some(s) = inline {
            return Ok(s.clone());
        }
        if let Some(p) = file {
            return fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
        }
        if self.stdin_used.replace(true) {
            bail!("missing --{flag}");
        }
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading stdin")?;
        Ok(s)
    }

    fn term(&self, t: &TermIn) -> Result<Term> {
        let s = self.text(&t.term, &t.term_file, "term")?;
        self.parse_term(&s)
    }

    fn parse_term(&self, s: &str) -> Result<Term> {
        self.parser
            .term(s.trim())
            .with_context(|| format!("term `{}`", s.trim()))
    }

    fn parse_type(&self, s: &str) -> Result<Type> {
        self.parser
            .ty(s.trim())
            .with_context(|| format!("type `{}`", s.trim()))
    }

    fn ty(&self, t: &TypeIn) -> Result<Type> {
        let s = self.text(&t.ty, &t.ty_file, "type")?;
        self.parse_type(&s)
    }

    fn ctx(&self, c: &CtxIn) -> Result<Context> {
        let s = match (&c.ctx, &c.ctx_file) {
            (Some(s), _) => s.clone(),
            (None, Some(p)) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            (None, None) => return Ok(Context::new()),
        };
        self.parser
            .context(s.trim())
            .with_context(|| format!("context `{}`", s.trim()))
    }

    fn derivation(&self, path: &Option<PathBuf>) -> Result<Derivation> {
        let text = self.text(&None, path, "deriv")?;
        let json: DerivationJson = serde_json::from_str(&text).context("derivation JSON")?;
        Ok(json.to_derivation(&self.parser)?)
    }

    fn emit<T: Serialize>(&self, value: &T, plain: impl FnOnce() -> String) -> Result<()> {
        let text = if self.json {
            serde_json::to_string_pretty(value)?
        } else {
            plain()
        };
        print_out(&text)
    }

    /// For commands whose only output is a JSON record.
    fn emit_json<T: Serialize>(&self, value: &T) -> Result<()> {
        print_out(&serde_json::to_string_pretty(value)?)
    }
}

fn print_out(text: &str) -> Result<()> {
    if text.is_empty() {
        return Ok(());
    }
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut parser = Parser::new();
    for a in &cli.atoms {
        parser = parser.with_atom(a.clone());
    }
    let env = Env {
        json: cli.json,
        parser,
        alpha: cli.alpha_var.clone(),
        seed: cli.seed,
        stdin_used: Cell::new(false),
    };
    match run(&env, &cli.cmd) {
        Ok(Verdict::Accept) => ExitCode::SUCCESS,
        Ok(Verdict::Reject) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(env: &Env, cmd: &Cmd) -> Result<Verdict> {
    match cmd {
        Cmd::Parse(a) => parse(env, a),
        Cmd::Normalize(a) => reduce(env, a, false),
        Cmd::Whnf(a) => reduce(env, a, true),
        Cmd::CheckF0(a) => check_f0_cmd(env, a),
        Cmd::CheckS(a) => check_s_cmd(env, a),
        Cmd::CheckDeriv(a) => check_deriv(env, a, System::F),
        Cmd::CheckDerivFf(a) => check_deriv(env, a, System::FF),
        Cmd::Erase(a) => erase(env, a),
        Cmd::Classify(a) => classify(env, a),
        Cmd::GenT(a) => gen(env, a, Transformer::T),
        Cmd::GenTprime(a) => gen(env, a, Transformer::TPrime),
        Cmd::AlphaProbe(a) => alpha_probe_cmd(env, a),
        Cmd::Enumerate(a) => enumerate(env, a),
        Cmd::ProbeOutput(a) => probe_output_cmd(env, a),
        Cmd::RefuteInput(a) => refute_input(env, a),
        Cmd::Godel(a) => godel(env, a),
        Cmd::StorageCheck(a) => storage_check(env, a),
    }
}

#[derive(Serialize)]
struct ParsedJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    term: Option<String>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ctx: Option<Vec<sysf::formats::BindingJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    judgment: Option<sysf::formats::JudgmentJson>,
}

fn parse(env: &Env, a: &ParseArgs) -> Result<Verdict> {
    let any_flag = a.term.term.is_some()
        || a.term.term_file.is_some()
        || a.ty.ty.is_some()
        || a.ty.ty_file.is_some()
        || a.ctx.ctx.is_some()
        || a.ctx.ctx_file.is_some()
        || a.judgment.is_some();
    let term = if a.term.term.is_some() || a.term.term_file.is_some() || !any_flag {
        Some(env.term(&a.term)?)
    } else {
        None
    };
    let ty = if a.ty.ty.is_some() || a.ty.ty_file.is_some() {
        Some(env.ty(&a.ty)?)
    } else {
        None
    };
    let ctx = if a.ctx.ctx.is_some() || a.ctx.ctx_file.is_some() {
        Some(env.ctx(&a.ctx)?)
    } else {
        None
    };
    let judgment = match &a.judgment {
        Some(s) => Some(env.parser.judgment(s.trim()).with_context(|| format!("judgment `{s}`"))?),
        None => None,
    };
    let out = ParsedJson {
        term: term.as_ref().map(ToString::to_string),
        ty: ty.as_ref().map(ToString::to_string),
        ctx: ctx.as_ref().map(context_json),
        judgment: judgment.as_ref().map(judgment_json),
    };
    env.emit(&out, || {
        let mut lines = Vec::new();
        lines.extend(term.map(|t| t.to_string()));
        lines.extend(ty.map(|t| t.to_string()));
        lines.extend(ctx.map(|c| c.to_string()));
        lines.extend(judgment.map(|j| j.to_string()));
        lines.join("\n")
    })?;
    Ok(Verdict::Accept)
}

fn reduce(env: &Env, a: &ReduceArgs, weak: bool) -> Result<Verdict> {
    let t = env.term(&a.term)?;
    let tr = if weak {
        weak_head_reduce(&t, a.fuel.unwrap_or(DEFAULT_WHNF_FUEL))
    } else {
        normalize(&t, a.fuel.unwrap_or(DEFAULT_NORMALIZE_FUEL))
    };
    env.emit(&TraceJson::from(&tr), || {
        let mut lines = Vec::new();
        if a.trace {
            lines.push(tr.initial.to_string());
            for s in &tr.steps {
                lines.push(format!("  -> [{}] {}", s.path, s.result));
            }
        }
        lines.push(tr.final_term().to_string());
        if tr.status == Status::FuelExhausted {
            lines.push(format!("(fuel exhausted after {} steps)", tr.steps.len()));
        }
        lines.join("\n")
    })?;
    Ok(verdict(tr.status != Status::FuelExhausted))
}

fn judgments(env: &Env, a: &JudgeArgs) -> Result<Vec<(String, Judgment)>> {
    if let Some(p) = &a.corpus {
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        return Ok(parse_corpus(&env.parser, &text)?
            .into_iter()
            .map(|e| (format!("line {}", e.line), e.judgment))
            .collect());
    }
    let term = env.term(&a.term)?;
    let ty = env.ty(&a.ty)?;
    let ctx = env.ctx(&a.ctx)?;
    Ok(vec![(String::new(), Judgment::new(ctx, term, ty))])
}

fn sweep(env: &Env, results: Vec<(String, CheckJson)>) -> Result<Verdict> {
    let all = results.iter().all(|(_, r)| r.accepted);
    if results.len() == 1 && results[0].0.is_empty() {
        let r = &results[0].1;
        env.emit(r, || (if r.accepted { "accepted" } else { "rejected" }).to_string())?;
    } else {
        let list: Vec<&CheckJson> = results.iter().map(|(_, r)| r).collect();
        env.emit(&list, || {
            results
                .iter()
                .map(|(label, r)| {
                    let j = &r.judgment;
                    let verdict = if r.accepted { "accepted" } else { "rejected" };
                    format!("{label}: {verdict}: {}|- {} : {}", ctx_text(j), j.term, j.ty)
                })
                .collect::<Vec<_>>()
                .join("\n")
        })?;
    }
    Ok(verdict(all))
}

fn ctx_text(j: &sysf::formats::JudgmentJson) -> String {
    if j.ctx.is_empty() {
        return String::new();
    }
    let bindings = j
        .ctx
        .iter()
        .map(|b| format!("{} : {}", b.name, b.ty))
        .collect::<Vec<_>>()
        .join(", ");
    format!("{bindings} ")
}

fn check_f0_cmd(env: &Env, a: &JudgeArgs) -> Result<Verdict> {
    let mut results = Vec::new();
    for (label, j) in judgments(env, a)? {
        // In a corpus sweep a redex is a rejection rather than an input error.
        let d = match derive_f0(&j.ctx, &j.term, &j.ty) {
            Ok(d) => d,
            Err(_) if a.corpus.is_some() => None,
            Err(e) => bail!("{e}"),
        };
        results.push((
            label,
            CheckJson {
                accepted: d.is_some(),
                system: System::F0.name(),
                judgment: judgment_json(&j),
                derivation: d.as_ref().map(DerivationJson::from),
            },
        ));
    }
    sweep(env, results)
}

fn check_s_cmd(env: &Env, a: &CheckSArgs) -> Result<Verdict> {
    let mut results = Vec::new();
    for (label, mut j) in judgments(env, &a.judge)? {
        if a.erase {
            j = erase_judgment(&j);
        }
        let ok = check_s(&j.ctx, &j.term, &j.ty).map_err(|e| anyhow!("{label} {e}"))?;
        results.push((
            label,
            CheckJson {
                accepted: ok,
                system: System::S.name(),
                judgment: judgment_json(&j),
                derivation: None,
            },
        ));
    }
    sweep(env, results)
}

fn check_deriv(env: &Env, a: &DerivArgs, system: System) -> Result<Verdict> {
    let d = env.derivation(&a.deriv)?;
    let res = if system == System::FF {
        check_derivation_ff(&d)
    } else {
        check_derivation_f(&d)
    };
    let out = DerivationCheckJson {
        valid: res.is_ok(),
        system: system.name(),
        conclusion: judgment_json(&d.conclusion),
        uses_forall_elim: d.uses_forall_elim(),
        error: res.as_ref().err().map(DerivationErrorJson::from),
    };
    env.emit(&out, || match &res {
        Ok(()) => format!("valid: {}", d.conclusion),
        Err(e) => format!("invalid: {e}"),
    })?;
    Ok(verdict(res.is_ok()))
}

#[derive(Serialize)]
struct ErasedJson {
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ctx: Option<Vec<sysf::formats::BindingJson>>,
}

fn erase(env: &Env, a: &EraseArgs) -> Result<Verdict> {
    let has_ctx = a.ctx.ctx.is_some() || a.ctx.ctx_file.is_some();
    let ty = if a.ty.ty.is_some() || a.ty.ty_file.is_some() || !has_ctx {
        Some(erase_type(&env.ty(&a.ty)?))
    } else {
        None
    };
    let ctx = if has_ctx {
        Some(erase_context(&env.ctx(&a.ctx)?))
    } else {
        None
    };
    let out = ErasedJson {
        ty: ty.as_ref().map(ToString::to_string),
        ctx: ctx.as_ref().map(context_json),
    };
    env.emit(&out, || {
        let mut lines = Vec::new();
        lines.extend(ty.map(|t| t.to_string()));
        lines.extend(ctx.map(|c| c.to_string()));
        lines.join("\n")
    })?;
    Ok(Verdict::Accept)
}

fn classify(env: &Env, a: &ClassifyArgs) -> Result<Verdict> {
    let ty = env.ty(&a.ty)?;
    let c = classify_json(&ty, &a.ends_with);
    env.emit(&c, || {
        let mut lines = vec![
            format!("proper: {}", c.proper),
            format!("closed: {}", c.closed),
            format!("forall_positive: {}", c.forall_positive),
            format!("forall_negative: {}", c.forall_negative),
            format!("lg: {}", c.lg),
        ];
        for (k, v) in &c.ends_with {
            lines.push(format!("ends_with {k}: {v}"));
        }
        lines.join("\n")
    })?;
    Ok(Verdict::Accept)
}

#[derive(Serialize)]
struct GodelJson {
    #[serde(rename = "type")]
    ty: String,
    lg: usize,
}

fn godel(env: &Env, a: &TypeOnly) -> Result<Verdict> {
    let ty = env.ty(&a.ty)?;
    let star = godel_translate(&ty)?;
    let out = GodelJson {
        ty: star.to_string(),
        lg: lg(&star),
    };
    env.emit(&out, || out.ty.clone())?;
    Ok(Verdict::Accept)
}

fn gen(env: &Env, a: &GenArgs, which: Transformer) -> Result<Verdict> {
    let f = env.ty(&a.ty)?;
    let g = env.parse_type(&a.inst)?;
    let pair = gen_transformers_with(&f, &a.var, &g, &env.alpha);
    let derivation = if a.with_derivation {
        let cert = certify_lemma31(&pair)?;
        let d = match which {
            Transformer::T => cert.t_derivation,
            Transformer::TPrime => cert.t_prime_derivation,
        };
        Some(DerivationJson::from(&d))
    } else {
        None
    };
    let out = TransformerJson {
        term: pair.term(which).to_string(),
        for_type: f.to_string(),
        var: a.var.clone(),
        instantiation: g.to_string(),
        ty: pair.expected_type(which).to_string(),
        derivation,
    };
    env.emit(&out, || {
        let mut s = out.term.clone();
        if let Some(d) = &out.derivation {
            s.push('\n');
            s.push_str(&serde_json::to_string_pretty(d).expect("derivation serializes"));
        }
        s
    })?;
    Ok(Verdict::Accept)
}

fn alpha_probe_cmd(env: &Env, a: &AlphaProbeArgs) -> Result<Verdict> {
    let ty = env.ty(&a.ty)?;
    let g = env.parse_type(&a.inst)?;
    let delta = env.parse_term(&a.delta)?;
    let args = a
        .args
        .iter()
        .map(|s| env.parse_term(s))
        .collect::<Result<Vec<_>>>()?;
    let opts = ProbeOptions {
        which: match a.transformer {
            Which::T => Transformer::T,
            Which::Tprime => Transformer::TPrime,
        },
        fuel: a.fuel.unwrap_or(DEFAULT_NORMALIZE_FUEL),
        alpha: env.alpha.clone(),
    };
    let probe = alpha_probe_with(&ty, &a.var, &g, &delta, &args, &opts)?;
    let out = AlphaProbeJson::from(&probe);
    env.emit_json(&out)?;
    Ok(verdict(probe.alpha_free))
}

fn enumerate(env: &Env, a: &EnumerateArgs) -> Result<Verdict> {
    let ty = env.ty(&a.ty)?;
    let ctx = env.ctx(&a.ctx)?;
    let budget = SearchBudget::new(a.depth, a.max_terms)?;
    let found = enumerate_f0(&ctx, &ty, budget);
    let terms: Vec<String> = found
        .terms
        .iter()
        .filter(|t| a.size_cap.is_none_or(|s| t.size() <= s))
        .map(ToString::to_string)
        .collect();
    let out = EnumerationJson {
        terms,
        complete: found.complete,
        max_depth: a.depth,
        max_terms: a.max_terms,
    };
    env.emit(&out, || {
        let mut s = out.terms.join("\n");
        if !out.complete {
            s.push_str("\n(truncated at the term limit)");
        }
        s
    })?;
    Ok(Verdict::Accept)
}

fn probe_output_cmd(env: &Env, a: &ProbeOutputArgs) -> Result<Verdict> {
    let ty = env.ty(&a.ty)?;
    let budget = SearchBudget::new(a.depth, a.max_terms)?;
    let witnesses = a
        .witnesses
        .iter()
        .map(|p| env.derivation(&Some(p.clone())))
        .collect::<Result<Vec<_>>>()?;
    let v = probe_output_with_witnesses(&ty, budget, &env.alpha, &witnesses)?;
    let out = VerdictJson::from(&v);
    env.emit_json(&out)?;
    Ok(verdict(!v.is_counterexample()))
}

fn refute_input(env: &Env, a: &RefuteArgs) -> Result<Verdict> {
    let e = env.ty(&a.ty)?;
    let d = env.derivation(&Some(a.deriv.clone()))?;
    let t = d.conclusion.term.clone();
    let out = if d.conclusion.ctx.is_empty() {
        let f0_rejects = check_input_counterexample(&e, &t, &d)?;
        RefuteJson::Direct {
            term: t.to_string(),
            f0_rejects,
        }
    } else {
        let expected = Context::new().with(env.alpha.clone(), Type::atom(ATOM_O))?;
        if !d.conclusion.ctx.equiv(&expected) {
            bail!("the derivation context must be empty or `{} : {ATOM_O}`", env.alpha);
        }
        RefuteJson::from(&refute_input_via_output_with(&e, &t, &d, &env.alpha)?)
    };
    let refuted = match &out {
        RefuteJson::Direct { f0_rejects, .. } | RefuteJson::ViaOutput { f0_rejects, .. } => *f0_rejects,
    };
    env.emit_json(&out)?;
    Ok(verdict(!refuted))
}

fn storage_check(env: &Env, a: &StorageArgs) -> Result<Verdict> {
    let op_text = match (&a.term, &a.operator) {
        (Some(s), _) => s.clone(),
        (None, Some(p)) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        (None, None) => bail!("missing --operator"),
    };
    let op = env.parse_term(&op_text)?;
    let text = fs::read_to_string(&a.spec).with_context(|| format!("reading {}", a.spec.display()))?;
    let json: StorageSpecJson = serde_json::from_str(&text).context("storage spec JSON")?;
    let mut spec = json.to_spec(&env.parser)?;
    if let Some(f) = &a.continuation {
        spec.continuation = f.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
    for v in &mut spec.values {
        for _ in 0..a.random_presentations {
            let wraps = rng.gen_range(1..=3);
            v.presentations.push(random_presentation(&v.canonical, wraps, &mut rng));
        }
    }
    let report = run_storage(&op, &spec, a.fuel)?;
    let out = StorageReportJson::from(&report);
    env.emit_json(&out)?;
    Ok(verdict(report.is_storage_operator))
}
