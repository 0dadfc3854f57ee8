//! Stochastic Activity Networks: model description and token-game semantics.
//!
//! A [`SanModel`] is plain data, structurally comparable and serializable to
//! the `.san` document format. [`Net`] is its validated, compiled form: place
//! names resolved to indices and parameters folded into constants. All
//! state-space and simulation code works on a `Net`.
//!
//! Firing an activity applies the input effects, then the chosen case's
//! effects, each in declaration order; every assignment sees the marking
//! produced by the previous one. Timed activities are exponential with a
//! (possibly marking-dependent) rate. When several instantaneous activities
//! are enabled together they are selected with equal weight.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::expr::{Compiled, EvalError, Expr, Scope};

/// Tolerance on the sum of case probabilities of one activity.
pub const CASE_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Place {
    pub name: String,
    /// Signed so that a bad document can be reported by [`validate`] rather
    /// than rejected by the type system.
    pub initial_tokens: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectOp {
    Set,
    Add,
    Sub,
}

impl EffectOp {
    pub fn symbol(self) -> &'static str {
        match self {
            EffectOp::Set => "=",
            EffectOp::Add => "+=",
            EffectOp::Sub => "-=",
        }
    }
}

/// One marking assignment, `place op value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    pub place: String,
    pub op: EffectOp,
    pub value: Expr,
}

impl Effect {
    pub fn add(place: &str, n: f64) -> Self {
        Self::new(place, EffectOp::Add, Expr::Num(n))
    }

    pub fn sub(place: &str, n: f64) -> Self {
        Self::new(place, EffectOp::Sub, Expr::Num(n))
    }

    pub fn set(place: &str, value: Expr) -> Self {
        Self::new(place, EffectOp::Set, value)
    }

    pub fn new(place: &str, op: EffectOp, value: Expr) -> Self {
        Self {
            place: place.to_string(),
            op,
            value,
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.place, self.op.symbol(), self.value)
    }
}

/// Input gate: enabling predicate plus effects applied on firing.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub predicate: Expr,
    pub effects: Vec<Effect>,
}

impl Default for InputSpec {
    fn default() -> Self {
        Self {
            predicate: Expr::Num(1.0),
            effects: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSpec {
    /// Must depend on parameters only.
    pub probability: Expr,
    pub effects: Vec<Effect>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActivityKind {
    /// Exponentially distributed delay; rate in h⁻¹.
    Timed { rate: Expr },
    Instantaneous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Activity {
    pub name: String,
    pub kind: ActivityKind,
    pub input: InputSpec,
    pub cases: Vec<CaseSpec>,
}

impl Activity {
    pub fn timed(name: &str, rate: Expr) -> Self {
        Self {
            name: name.to_string(),
            kind: ActivityKind::Timed { rate },
            input: InputSpec::default(),
            cases: Vec::new(),
        }
    }

    pub fn instantaneous(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: ActivityKind::Instantaneous,
            input: InputSpec::default(),
            cases: Vec::new(),
        }
    }

    pub fn with_input(mut self, predicate: Expr, effects: Vec<Effect>) -> Self {
        self.input = InputSpec { predicate, effects };
        self
    }

    pub fn with_case(mut self, probability: Expr, effects: Vec<Effect>) -> Self {
        self.cases.push(CaseSpec {
            probability,
            effects,
        });
        self
    }

    pub fn is_timed(&self) -> bool {
        matches!(self.kind, ActivityKind::Timed { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RewardPredicate {
    pub name: String,
    pub predicate: Expr,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SanModel {
    pub description: String,
    pub places: Vec<Place>,
    pub parameters: Vec<Parameter>,
    pub activities: Vec<Activity>,
    pub rewards: Vec<RewardPredicate>,
}

impl SanModel {
    pub fn new(description: &str) -> Self {
        Self {
            description: description.to_string(),
            ..Self::default()
        }
    }

    pub fn place(&mut self, name: &str, initial_tokens: i64) -> &mut Self {
        self.places.push(Place {
            name: name.to_string(),
            initial_tokens,
        });
        self
    }

    pub fn param(&mut self, name: &str, value: f64) -> &mut Self {
        self.parameters.push(Parameter {
            name: name.to_string(),
            value,
        });
        self
    }

    pub fn activity(&mut self, a: Activity) -> &mut Self {
        self.activities.push(a);
        self
    }

    pub fn reward(&mut self, name: &str, predicate: Expr) -> &mut Self {
        self.rewards.push(RewardPredicate {
            name: name.to_string(),
            predicate,
        });
        self
    }

    pub fn param_value(&self, name: &str) -> Option<f64> {
        self.parameters
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.value)
    }

    /// Overwrite a declared parameter.
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<(), SanError> {
        let p = self
            .parameters
            .iter_mut()
            .find(|p| p.name == name)
            .ok_or_else(|| SanError::UnknownParameter(name.to_string()))?;
        p.value = value;
        Ok(())
    }

    pub fn reward_names(&self) -> impl Iterator<Item = &str> {
        self.rewards.iter().map(|r| r.name.as_str())
    }
}

/// A model well-formedness problem reported by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    DuplicateName { kind: &'static str, name: String },
    NegativeInitialTokens { place: String, tokens: i64 },
    UndeclaredPlace { context: String, place: String },
    UndeclaredParameter { context: String, name: String },
    NoCases { activity: String },
    CaseProbabilitySum { activity: String, sum: f64 },
    CaseProbabilityRange { activity: String, case: usize, value: f64 },
    MarkingDependentProbability { activity: String, case: usize },
    NonPositiveRate { activity: String, value: f64 },
    NonFiniteParameter { name: String },
    ConstantEvaluation { context: String, error: EvalError },
}

/// Short decimal rendering, e.g. `1.1` for `0.9 + 0.2`.
fn short(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::DuplicateName { kind, name } => write!(f, "duplicate {kind} name `{name}`"),
            Diagnostic::NegativeInitialTokens { place, tokens } => {
                write!(f, "place `{place}`: negative initial tokens {tokens}")
            }
            Diagnostic::UndeclaredPlace { context, place } => {
                write!(f, "{context}: undeclared place `{place}`")
            }
            Diagnostic::UndeclaredParameter { context, name } => {
                write!(f, "{context}: undeclared parameter `{name}`")
            }
            Diagnostic::NoCases { activity } => write!(f, "activity `{activity}`: no cases"),
            Diagnostic::CaseProbabilitySum { activity, sum } => write!(
                f,
                "activity `{activity}`: case probabilities sum to {}",
                short(*sum)
            ),
            Diagnostic::CaseProbabilityRange {
                activity,
                case,
                value,
            } => write!(
                f,
                "activity `{activity}`: case {case} probability {value} outside [0, 1]"
            ),
            Diagnostic::MarkingDependentProbability { activity, case } => write!(
                f,
                "activity `{activity}`: case {case} probability depends on the marking"
            ),
            Diagnostic::NonPositiveRate { activity, value } => {
                write!(f, "activity `{activity}`: non-positive rate {value}")
            }
            Diagnostic::NonFiniteParameter { name } => {
                write!(f, "parameter `{name}` is not finite")
            }
            Diagnostic::ConstantEvaluation { context, error } => write!(f, "{context}: {error}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SanError {
    #[error("invalid model:\n  {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n  "))]
    Invalid(Vec<Diagnostic>),
    #[error("unknown activity `{0}`")]
    UnknownActivity(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("unknown reward `{0}`")]
    UnknownReward(String),
    #[error("activity `{0}` is not enabled")]
    NotEnabled(String),
    #[error("activity `{activity}` has no case {case}")]
    NoSuchCase { activity: String, case: usize },
    #[error("activity `{activity}` would drive place `{place}` negative")]
    NegativeTokens { activity: String, place: String },
    #[error("activity `{activity}` would set place `{place}` to non-integral {value}")]
    NonIntegralTokens {
        activity: String,
        place: String,
        value: f64,
    },
    #[error("activity `{activity}`: rate {rate} is not finite and positive")]
    BadRate { activity: String, rate: f64 },
    #[error("{context}: {source}")]
    Eval {
        context: String,
        #[source]
        source: EvalError,
    },
    #[error("marking has {got} places, model has {want}")]
    MarkingSize { got: usize, want: usize },
}

/// Token counts in model place order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking(pub Vec<u32>);

impl Marking {
    pub fn tokens(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&t| u64::from(t)).sum()
    }
}

struct ModelScope<'a> {
    params: &'a HashMap<&'a str, f64>,
    places: &'a HashMap<&'a str, usize>,
}

impl Scope for ModelScope<'_> {
    fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    fn place(&self, name: &str) -> Option<usize> {
        self.places.get(name).copied()
    }
}

/// Check a model and return every problem found; empty means well-formed.
pub fn validate(model: &SanModel) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    let mut dup = |kind: &'static str, names: &mut dyn Iterator<Item = &str>| {
        let mut seen = HashSet::new();
        for n in names {
            if !seen.insert(n) {
                diags.push(Diagnostic::DuplicateName {
                    kind,
                    name: n.to_string(),
                });
            }
        }
    };
    dup("place", &mut model.places.iter().map(|p| p.name.as_str()));
    dup("parameter", &mut model.parameters.iter().map(|p| p.name.as_str()));
    dup("activity", &mut model.activities.iter().map(|a| a.name.as_str()));
    dup("reward", &mut model.rewards.iter().map(|r| r.name.as_str()));

    for p in &model.places {
        if p.initial_tokens < 0 {
            diags.push(Diagnostic::NegativeInitialTokens {
                place: p.name.clone(),
                tokens: p.initial_tokens,
            });
        }
    }
    for p in &model.parameters {
        if !p.value.is_finite() {
            diags.push(Diagnostic::NonFiniteParameter {
                name: p.name.clone(),
            });
        }
    }

    let params: HashMap<&str, f64> = model
        .parameters
        .iter()
        .map(|p| (p.name.as_str(), p.value))
        .collect();
    let places: HashMap<&str, usize> = model
        .places
        .iter()
        .enumerate()
        .map(|(i, p)| (p.name.as_str(), i))
        .collect();

    let mut check_refs = |diags: &mut Vec<Diagnostic>, context: &str, e: &Expr| {
        let mut ok = true;
        for p in e.places() {
            if !places.contains_key(p) {
                ok = false;
                diags.push(Diagnostic::UndeclaredPlace {
                    context: context.to_string(),
                    place: p.to_string(),
                });
            }
        }
        for n in e.params() {
            if !params.contains_key(n) {
                ok = false;
                diags.push(Diagnostic::UndeclaredParameter {
                    context: context.to_string(),
                    name: n.to_string(),
                });
            }
        }
        ok
    };
    let check_effects = |diags: &mut Vec<Diagnostic>,
                         check_refs: &mut dyn FnMut(&mut Vec<Diagnostic>, &str, &Expr) -> bool,
                         context: &str,
                         effects: &[Effect]| {
        for eff in effects {
            if !places.contains_key(eff.place.as_str()) {
                diags.push(Diagnostic::UndeclaredPlace {
                    context: context.to_string(),
                    place: eff.place.clone(),
                });
            }
            check_refs(diags, context, &eff.value);
        }
    };

    let scope = ModelScope {
        params: &params,
        places: &places,
    };

    for a in &model.activities {
        let ctx = format!("activity `{}`", a.name);
        if let ActivityKind::Timed { rate } = &a.kind {
            if check_refs(&mut diags, &format!("{ctx} rate"), rate) {
                if let Ok(Compiled::Const(v)) = rate.compile(&scope) {
                    if !(v > 0.0 && v.is_finite()) {
                        diags.push(Diagnostic::NonPositiveRate {
                            activity: a.name.clone(),
                            value: v,
                        });
                    }
                }
            }
        }
        check_refs(&mut diags, &format!("{ctx} input predicate"), &a.input.predicate);
        check_effects(&mut diags, &mut check_refs, &format!("{ctx} input"), &a.input.effects);

        if a.cases.is_empty() {
            diags.push(Diagnostic::NoCases {
                activity: a.name.clone(),
            });
        }
        let mut sum = 0.0;
        let mut sum_known = true;
        for (i, c) in a.cases.iter().enumerate() {
            let cctx = format!("{ctx} case {i}");
            check_effects(&mut diags, &mut check_refs, &cctx, &c.effects);
            if !c.probability.places().is_empty() {
                sum_known = false;
                diags.push(Diagnostic::MarkingDependentProbability {
                    activity: a.name.clone(),
                    case: i,
                });
                continue;
            }
            if !check_refs(&mut diags, &cctx, &c.probability) {
                sum_known = false;
                continue;
            }
            match c.probability.compile(&scope).and_then(|c| c.eval(&[])) {
                Ok(p) => {
                    if !(0.0..=1.0).contains(&p) {
                        diags.push(Diagnostic::CaseProbabilityRange {
                            activity: a.name.clone(),
                            case: i,
                            value: p,
                        });
                    }
                    sum += p;
                }
                Err(error) => {
                    sum_known = false;
                    diags.push(Diagnostic::ConstantEvaluation {
                        context: cctx,
                        error,
                    });
                }
            }
        }
        if sum_known && !a.cases.is_empty() && (sum - 1.0).abs() > CASE_SUM_TOLERANCE {
            diags.push(Diagnostic::CaseProbabilitySum {
                activity: a.name.clone(),
                sum,
            });
        }
    }

    for r in &model.rewards {
        check_refs(&mut diags, &format!("reward `{}`", r.name), &r.predicate);
    }
    diags
}

#[derive(Debug, Clone)]
struct CEffect {
    place: usize,
    op: EffectOp,
    value: Compiled,
}

#[derive(Debug, Clone)]
struct CActivity {
    name: String,
    rate: Option<Compiled>,
    predicate: Compiled,
    input: Vec<CEffect>,
    cases: Vec<(f64, Vec<CEffect>)>,
}

/// A validated, compiled [`SanModel`]. Immutable and `Sync`.
#[derive(Debug, Clone)]
pub struct Net {
    model: SanModel,
    place_index: HashMap<String, usize>,
    activities: Vec<CActivity>,
    rewards: Vec<(String, Compiled)>,
    initial: Marking,
}

fn compile_ctx(e: &Expr, scope: &ModelScope<'_>, context: String) -> Result<Compiled, SanError> {
    e.compile(scope)
        .map_err(|source| SanError::Eval { context, source })
}

impl Net {
    pub fn new(model: &SanModel) -> Result<Self, SanError> {
        let diags = validate(model);
        if !diags.is_empty() {
            return Err(SanError::Invalid(diags));
        }
        let params: HashMap<&str, f64> = model
            .parameters
            .iter()
            .map(|p| (p.name.as_str(), p.value))
            .collect();
        let places: HashMap<&str, usize> = model
            .places
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.as_str(), i))
            .collect();
        let scope = ModelScope {
            params: &params,
            places: &places,
        };
        let effects = |effs: &[Effect], ctx: &str| -> Result<Vec<CEffect>, SanError> {
            effs.iter()
                .map(|e| {
                    Ok(CEffect {
                        place: places[e.place.as_str()],
                        op: e.op,
                        value: compile_ctx(&e.value, &scope, format!("{ctx}: {e}"))?,
                    })
                })
                .collect()
        };
        let mut activities = Vec::with_capacity(model.activities.len());
        for a in &model.activities {
            let ctx = format!("activity `{}`", a.name);
            let rate = match &a.kind {
                ActivityKind::Timed { rate } => {
                    Some(compile_ctx(rate, &scope, format!("{ctx} rate"))?)
                }
                ActivityKind::Instantaneous => None,
            };
            let mut cases = Vec::with_capacity(a.cases.len());
            for (i, c) in a.cases.iter().enumerate() {
                let p = compile_ctx(&c.probability, &scope, format!("{ctx} case {i}"))?
                    .eval(&[])
                    .map_err(|source| SanError::Eval {
                        context: format!("{ctx} case {i}"),
                        source,
                    })?;
                cases.push((p, effects(&c.effects, &format!("{ctx} case {i}"))?));
            }
            activities.push(CActivity {
                name: a.name.clone(),
                rate,
                predicate: compile_ctx(&a.input.predicate, &scope, format!("{ctx} predicate"))?,
                input: effects(&a.input.effects, &format!("{ctx} input"))?,
                cases,
            });
        }
        let rewards = model
            .rewards
            .iter()
            .map(|r| {
                Ok((
                    r.name.clone(),
                    compile_ctx(&r.predicate, &scope, format!("reward `{}`", r.name))?,
                ))
            })
            .collect::<Result<_, SanError>>()?;
        let initial = Marking(
            model
                .places
                .iter()
                .map(|p| u32::try_from(p.initial_tokens).unwrap_or(u32::MAX))
                .collect(),
        );
        Ok(Self {
            model: model.clone(),
            place_index: places
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            activities,
            rewards,
            initial,
        })
    }

    pub fn model(&self) -> &SanModel {
        &self.model
    }

    pub fn initial_marking(&self) -> Marking {
        self.initial.clone()
    }

    pub fn place_count(&self) -> usize {
        self.model.places.len()
    }

    pub fn place_name(&self, i: usize) -> &str {
        &self.model.places[i].name
    }

    pub fn place_index(&self, name: &str) -> Option<usize> {
        self.place_index.get(name).copied()
    }

    pub fn activity_count(&self) -> usize {
        self.activities.len()
    }

    pub fn activity_name(&self, a: usize) -> &str {
        &self.activities[a].name
    }

    pub fn activity_index(&self, name: &str) -> Option<usize> {
        self.activities.iter().position(|a| a.name == name)
    }

    pub fn is_timed(&self, a: usize) -> bool {
        self.activities[a].rate.is_some()
    }

    /// Case probabilities of activity `a`, in declaration order.
    pub fn case_probabilities(&self, a: usize) -> impl Iterator<Item = f64> + '_ {
        self.activities[a].cases.iter().map(|(p, _)| *p)
    }

    pub fn reward_index(&self, name: &str) -> Result<usize, SanError> {
        self.rewards
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| SanError::UnknownReward(name.to_string()))
    }

    /// Format a marking as `{A=1, B=0}`.
    pub fn describe(&self, m: &Marking) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .map(|(i, t)| format!("{}={}", self.place_name(i), t))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Build a marking from `(place, tokens)` pairs; unlisted places are 0.
    pub fn marking(&self, tokens: &[(&str, u32)]) -> Result<Marking, SanError> {
        let mut m = vec![0; self.place_count()];
        for (p, n) in tokens {
            let i = self.place_index(p).ok_or_else(|| SanError::Eval {
                context: "marking".into(),
                source: EvalError::UnknownPlace(p.to_string()),
            })?;
            m[i] = *n;
        }
        Ok(Marking(m))
    }

    fn check_size(&self, m: &Marking) -> Result<(), SanError> {
        if m.0.len() != self.place_count() {
            return Err(SanError::MarkingSize {
                got: m.0.len(),
                want: self.place_count(),
            });
        }
        Ok(())
    }

    pub fn is_enabled(&self, m: &Marking, a: usize) -> Result<bool, SanError> {
        let act = &self.activities[a];
        act.predicate.holds(&m.0).map_err(|source| SanError::Eval {
            context: format!("activity `{}` predicate at {}", act.name, self.describe(m)),
            source,
        })
    }

    /// Indices of enabled activities, in declaration order.
    pub fn enabled(&self, m: &Marking) -> Result<Vec<usize>, SanError> {
        self.check_size(m)?;
        let mut out = Vec::new();
        for a in 0..self.activities.len() {
            if self.is_enabled(m, a)? {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Enabled instantaneous activities; non-empty means `m` is vanishing.
    pub fn enabled_instantaneous(&self, m: &Marking) -> Result<Vec<usize>, SanError> {
        Ok(self
            .enabled(m)?
            .into_iter()
            .filter(|&a| !self.is_timed(a))
            .collect())
    }

    /// Rate of timed activity `a` in `m`. Errors if it is not finite and
    /// strictly positive.
    pub fn rate(&self, m: &Marking, a: usize) -> Result<f64, SanError> {
        let act = &self.activities[a];
        let Some(rate) = &act.rate else {
            return Ok(f64::INFINITY);
        };
        let r = rate.eval(&m.0).map_err(|source| SanError::Eval {
            context: format!("activity `{}` rate at {}", act.name, self.describe(m)),
            source,
        })?;
        if r > 0.0 && r.is_finite() {
            Ok(r)
        } else {
            Err(SanError::BadRate {
                activity: act.name.clone(),
                rate: r,
            })
        }
    }

    pub fn reward(&self, m: &Marking, reward: usize) -> Result<bool, SanError> {
        let (name, pred) = &self.rewards[reward];
        pred.holds(&m.0).map_err(|source| SanError::Eval {
            context: format!("reward `{name}` at {}", self.describe(m)),
            source,
        })
    }

    /// Fire activity `a` with case `case`; `m` is left untouched.
    pub fn fire(&self, m: &Marking, a: usize, case: usize) -> Result<Marking, SanError> {
        self.check_size(m)?;
        let act = &self.activities[a];
        if !self.is_enabled(m, a)? {
            return Err(SanError::NotEnabled(act.name.clone()));
        }
        let (_, case_effects) = act.cases.get(case).ok_or_else(|| SanError::NoSuchCase {
            activity: act.name.clone(),
            case,
        })?;
        let mut next = m.0.clone();
        for eff in act.input.iter().chain(case_effects) {
            let v = eff.value.eval(&next).map_err(|source| SanError::Eval {
                context: format!("activity `{}` effect at {}", act.name, self.describe(m)),
                source,
            })?;
            let cur = f64::from(next[eff.place]);
            let new = match eff.op {
                EffectOp::Set => v,
                EffectOp::Add => cur + v,
                EffectOp::Sub => cur - v,
            };
            let place = || self.place_name(eff.place).to_string();
            if new < 0.0 {
                return Err(SanError::NegativeTokens {
                    activity: act.name.clone(),
                    place: place(),
                });
            }
            if new.fract() != 0.0 || new > f64::from(u32::MAX) {
                return Err(SanError::NonIntegralTokens {
                    activity: act.name.clone(),
                    place: place(),
                    value: new,
                });
            }
            next[eff.place] = new as u32;
        }
        Ok(Marking(next))
    }
}

/// Names of the activities enabled in `m`.
pub fn enabled_activities(model: &SanModel, m: &Marking) -> Result<Vec<String>, SanError> {
    let net = Net::new(model)?;
    Ok(net
        .enabled(m)?
        .into_iter()
        .map(|a| net.activity_name(a).to_string())
        .collect())
}

/// Fire `activity` with case `case_index` in `m`.
pub fn fire(
    model: &SanModel,
    m: &Marking,
    activity: &str,
    case_index: usize,
) -> Result<Marking, SanError> {
    let net = Net::new(model)?;
    let a = net
        .activity_index(activity)
        .ok_or_else(|| SanError::UnknownActivity(activity.to_string()))?;
    net.fire(m, a, case_index)
}
