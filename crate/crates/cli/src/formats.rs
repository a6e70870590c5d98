//! JSON shapes of derivations, traces, reports and storage specs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use sysf_core::classify::{ends_with, is_closed, is_proper, lg, polarity};
use sysf_core::lab::{ProbeVerdict, Refutation};
use sysf_core::reduce::{Status, Strategy};
use sysf_core::storage::{Outcome, StorageReport, StorageSpec, StorageValue};
use sysf_core::transform::AlphaProbe;
use sysf_core::typing::{DerivationError, Judgment};
use sysf_core::{Context, Derivation, ParseError, Parser, ReductionTrace, Rule, Type};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{what} `{text}`: {source}")]
    Syntax {
        what: &'static str,
        text: String,
        source: ParseError,
    },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule {rule} expects {expected} premise(s), found {found}")]
    Arity {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("rule forall_e needs an `instantiation`")]
    MissingInstantiation,
    #[error("rule forall_i needs a `var` or a quantified conclusion")]
    MissingVar,
    #[error("context lists `{0}` twice")]
    DuplicateBinding(String),
}

fn syntax<'a>(what: &'static str, text: &'a str) -> impl FnOnce(ParseError) -> FormatError + 'a {
    move |source| FormatError::Syntax {
        what,
        text: text.to_string(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingJson {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgmentJson {
    pub ctx: Vec<BindingJson>,
    pub term: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub rule: String,
    pub conclusion: JudgmentJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instantiation: Option<String>,
    /// The generalized variable of a `forall_i` node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(default)]
    pub premises: Vec<DerivationJson>,
}

pub fn context_json(ctx: &Context) -> Vec<BindingJson> {
    ctx.iter()
        .map(|(n, t)| BindingJson {
            name: n.to_string(),
            ty: t.to_string(),
        })
        .collect()
}

pub fn judgment_json(j: &Judgment) -> JudgmentJson {
    JudgmentJson {
        ctx: context_json(&j.ctx),
        term: j.term.to_string(),
        ty: j.ty.to_string(),
    }
}

impl From<&Derivation> for DerivationJson {
    fn from(d: &Derivation) -> Self {
        let (instantiation, var) = match &d.rule {
            Rule::ForallE(g) => (Some(g.to_string()), None),
            Rule::ForallI(x) => (None, Some(x.clone())),
            _ => (None, None),
        };
        DerivationJson {
            rule: d.rule.name().to_string(),
            conclusion: judgment_json(&d.conclusion),
            instantiation,
            var,
            premises: d.premises.iter().map(DerivationJson::from).collect(),
        }
    }
}

pub fn read_context(p: &Parser, bindings: &[BindingJson]) -> Result<Context, FormatError> {
    let mut ctx = Context::new();
    for b in bindings {
        let ty = p.ty(&b.ty).map_err(syntax("type", &b.ty))?;
        ctx.insert(b.name.clone(), ty)
            .map_err(|e| FormatError::DuplicateBinding(e.0))?;
    }
    Ok(ctx)
}

pub fn read_judgment(p: &Parser, j: &JudgmentJson) -> Result<Judgment, FormatError> {
    let ctx = read_context(p, &j.ctx)?;
    let term = p.term(&j.term).map_err(syntax("term", &j.term))?;
    let ty = p.ty(&j.ty).map_err(syntax("type", &j.ty))?;
    Ok(Judgment::new(ctx, term, ty))
}

impl DerivationJson {
    pub fn to_derivation(&self, p: &Parser) -> Result<Derivation, FormatError> {
        let conclusion = read_judgment(p, &self.conclusion)?;
        let rule = match self.rule.as_str() {
            "ax" => Rule::Ax,
            "arrow_i" => Rule::ArrowI,
            "arrow_e" => Rule::ArrowE,
            "forall_i" => match (&self.var, &conclusion.ty) {
                (Some(x), _) => Rule::ForallI(x.clone()),
                (None, Type::Forall(x, _)) => Rule::ForallI(x.clone()),
                (None, _) => return Err(FormatError::MissingVar),
            },
            "forall_e" => {
                let g = self
                    .instantiation
                    .as_deref()
                    .ok_or(FormatError::MissingInstantiation)?;
                Rule::ForallE(p.ty(g).map_err(syntax("type", g))?)
            }
            other => return Err(FormatError::UnknownRule(other.to_string())),
        };
        let expected = match rule {
            Rule::Ax => 0,
            Rule::ArrowE => 2,
            _ => 1,
        };
        if self.premises.len() != expected {
            return Err(FormatError::Arity {
                rule: self.rule.clone(),
                expected,
                found: self.premises.len(),
            });
        }
        let premises = self
            .premises
            .iter()
            .map(|d| d.to_derivation(p))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Derivation::new(rule, conclusion, premises))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub accepted: bool,
    pub system: &'static str,
    pub judgment: JudgmentJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivationCheckJson {
    pub valid: bool,
    pub system: &'static str,
    pub conclusion: JudgmentJson,
    pub uses_forall_elim: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<DerivationErrorJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivationErrorJson {
    pub path: Vec<usize>,
    pub side_condition: bool,
    pub message: String,
}

impl From<&DerivationError> for DerivationErrorJson {
    fn from(e: &DerivationError) -> Self {
        DerivationErrorJson {
            path: e.path.clone(),
            side_condition: e.is_side_condition(),
            message: e.message().to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepJson {
    pub strategy: &'static str,
    pub path: String,
    pub result: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    pub initial: String,
    pub steps: Vec<StepJson>,
    pub status: &'static str,
}

pub fn strategy_name(s: Strategy) -> &'static str {
    match s {
        Strategy::Full => "full",
        Strategy::WeakHead => "weak_head",
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Normalized => "normalized",
        Status::WhnfReached => "whnf_reached",
        Status::FuelExhausted => "fuel_exhausted",
    }
}

impl From<&ReductionTrace> for TraceJson {
    fn from(tr: &ReductionTrace) -> Self {
        TraceJson {
            initial: tr.initial.to_string(),
            steps: tr
                .steps
                .iter()
                .map(|s| StepJson {
                    strategy: strategy_name(s.strategy),
                    path: s.path.to_string(),
                    result: s.result.to_string(),
                })
                .collect(),
            status: status_name(tr.status),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyJson {
    pub proper: bool,
    pub closed: bool,
    pub forall_positive: bool,
    pub forall_negative: bool,
    pub lg: usize,
    pub ends_with: std::collections::BTreeMap<String, bool>,
}

/// `ends_with` is reported for `O`, every name in `extra`, and every
/// variable or atom occurring in `a`.
pub fn classify_json(a: &Type, extra: &[String]) -> ClassifyJson {
    let mut keys: std::collections::BTreeSet<String> = a.free_vars();
    keys.extend(a.atoms());
    keys.insert(sysf_core::ATOM_O.to_string());
    keys.extend(extra.iter().cloned());
    let pol = polarity(a);
    ClassifyJson {
        proper: is_proper(a),
        closed: is_closed(a),
        forall_positive: pol.forall_positive,
        forall_negative: pol.forall_negative,
        lg: lg(a),
        ends_with: keys.into_iter().map(|k| (k.clone(), ends_with(a, &k))).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaPositionJson {
    pub path: String,
    pub argument_of_head: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaProbeJson {
    pub nf: String,
    pub alpha_free_in_nf: bool,
    pub alpha_positions: Vec<AlphaPositionJson>,
    pub alpha_outside_head_args: bool,
}

impl From<&AlphaProbe> for AlphaProbeJson {
    fn from(p: &AlphaProbe) -> Self {
        AlphaProbeJson {
            nf: p.nf.to_string(),
            alpha_free_in_nf: p.alpha_free,
            alpha_positions: p
                .occurrences
                .iter()
                .map(|o| AlphaPositionJson {
                    path: o.path.to_string(),
                    argument_of_head: o.argument_of_head,
                })
                .collect(),
            alpha_outside_head_args: p.has_alpha_outside_head_args(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformerJson {
    pub term: String,
    pub for_type: String,
    pub var: String,
    pub instantiation: String,
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnumerationJson {
    pub terms: Vec<String>,
    pub complete: bool,
    pub max_depth: usize,
    pub max_terms: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VerdictJson {
    NoCounterexample {
        max_depth: usize,
        max_terms: usize,
        complete: bool,
        examined: usize,
    },
    Counterexample {
        term: String,
        evidence: DerivationJson,
    },
}

impl From<&ProbeVerdict> for VerdictJson {
    fn from(v: &ProbeVerdict) -> Self {
        match v {
            ProbeVerdict::NoCounterexampleUpTo {
                budget,
                complete,
                examined,
            } => VerdictJson::NoCounterexample {
                max_depth: budget.max_depth(),
                max_terms: budget.max_terms(),
                complete: *complete,
                examined: *examined,
            },
            ProbeVerdict::Counterexample { term, evidence } => VerdictJson::Counterexample {
                term: term.to_string(),
                evidence: evidence.into(),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum RefuteJson {
    /// `⊢_F t : E` checked by a derivation, rejected by F₀.
    Direct { term: String, f0_rejects: bool },
    /// From `α : O ⊢_F t : E`, the term `t[pₙ/α]`.
    ViaOutput {
        n: usize,
        u: String,
        f0_rejects: bool,
        s_rejects: bool,
    },
}

impl From<&Refutation> for RefuteJson {
    fn from(r: &Refutation) -> Self {
        RefuteJson::ViaOutput {
            n: r.n,
            u: r.u.to_string(),
            f0_rejects: r.f0_rejects,
            s_rejects: r.s_rejects,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorageValueJson {
    pub label: String,
    pub canonical: String,
    pub presentations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorageSpecJson {
    pub data_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuation: Option<String>,
    pub values: Vec<StorageValueJson>,
}

impl StorageSpecJson {
    pub fn to_spec(&self, p: &Parser) -> Result<StorageSpec, FormatError> {
        let data_type = p.ty(&self.data_type).map_err(syntax("type", &self.data_type))?;
        let mut spec = StorageSpec::new(data_type, Vec::new());
        if let Some(s) = &self.output_type {
            spec.output_type = Some(p.ty(s).map_err(syntax("type", s))?);
        }
        if let Some(f) = &self.continuation {
            spec.continuation = f.clone();
        }
        for v in &self.values {
            let canonical = p.term(&v.canonical).map_err(syntax("term", &v.canonical))?;
            let presentations = v
                .presentations
                .iter()
                .map(|s| p.term(s).map_err(syntax("term", s)))
                .collect::<Result<Vec<_>, _>>()?;
            spec.values.push(StorageValue {
                label: v.label.clone(),
                canonical,
                presentations,
            });
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaJson {
    pub var: String,
    pub term: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunJson {
    pub presentation: String,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argument: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub whnf: Option<String>,
    pub steps: usize,
    pub status: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueReportJson {
    pub label: String,
    pub stored: bool,
    pub presentation_insensitive: bool,
    pub typed: bool,
    pub agrees_with_canonical: bool,
    pub tau: Option<String>,
    pub tau_nf: Option<String>,
    pub sigmas: Vec<Vec<SigmaJson>>,
    pub runs: Vec<RunJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StorageReportJson {
    pub is_storage_operator: bool,
    pub values: Vec<ValueReportJson>,
}

impl From<&StorageReport> for StorageReportJson {
    fn from(r: &StorageReport) -> Self {
        let values = r
            .values
            .iter()
            .map(|v| ValueReportJson {
                label: v.label.clone(),
                stored: v.stored(),
                presentation_insensitive: v.presentation_insensitive,
                typed: v.typed,
                agrees_with_canonical: v.agrees_with_canonical,
                tau: v.tau.as_ref().map(ToString::to_string),
                tau_nf: v.tau_nf.as_ref().map(ToString::to_string),
                sigmas: v
                    .sigmas
                    .iter()
                    .map(|s| {
                        s.iter()
                            .map(|(var, t)| SigmaJson {
                                var: var.clone(),
                                term: t.to_string(),
                            })
                            .collect()
                    })
                    .collect(),
                runs: v
                    .runs
                    .iter()
                    .map(|run| {
                        let (outcome, argument, whnf) = match &run.outcome {
                            Outcome::Match { argument } => ("match", Some(argument.to_string()), None),
                            Outcome::HeadMismatch { whnf } => ("head_mismatch", None, Some(whnf.to_string())),
                            Outcome::FuelExhausted => ("fuel_exhausted", None, None),
                        };
                        RunJson {
                            presentation: run.presentation.to_string(),
                            outcome,
                            argument,
                            whnf,
                            steps: run.trace.steps.len(),
                            status: status_name(run.trace.status),
                        }
                    })
                    .collect(),
            })
            .collect();
        StorageReportJson {
            is_storage_operator: r.is_storage_operator,
            values,
        }
    }
}
