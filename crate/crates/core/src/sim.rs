//! Checking that the translation simulates one IPC reduction step.

use serde::{Deserialize, Serialize};

use crate::fat::{typecheck_fat, FatTerm, DEFAULT_FUEL};
use crate::ipc::{is_head_step, step_at, typecheck, Context, IpcTerm};
use crate::rewrite::{guided_reach, join_at_normal_form, reachable, Fat, StepRecord, Trace, DEFAULT_MAX_STEPS, DEFAULT_NODE_CAP};
use crate::rule::{Path, RuleId, RuleSet, SimClass};
use crate::translate::{rp_type, translate, translate_context, TranslationKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SimVerdict {
    /// The two translations are α-equal.
    SyntacticIdentity,
    /// A trace of `steps` steps, all in `class`, joins the translations.
    ReachedIn { steps: usize, class: SimClass },
    /// No trace was found but both translations have the same normal form.
    JoinedAtNormalForm,
    Failed { reason: String },
}

impl SimVerdict {
    pub fn is_failed(&self) -> bool {
        matches!(self, SimVerdict::Failed { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub rule: RuleId,
    pub position: Path,
    pub ipc_before: String,
    pub ipc_after: String,
    pub fat_before: String,
    pub fat_after: String,
    pub verdict: SimVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<StepRecord>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    pub max_steps: usize,
    pub node_cap: usize,
    pub fuel: usize,
}

impl Default for SimOptions {
    fn default() -> SimOptions {
        SimOptions {
            max_steps: DEFAULT_MAX_STEPS,
            node_cap: DEFAULT_NODE_CAP,
            fuel: DEFAULT_FUEL,
        }
    }
}

pub fn check_simulation(t: &IpcTerm, ctx: &Context, pos: &Path, rule: RuleId) -> SimReport {
    check_simulation_with(t, ctx, pos, rule, &SimOptions::default())
}

pub fn check_simulation_with(
    t: &IpcTerm,
    ctx: &Context,
    pos: &Path,
    rule: RuleId,
    opts: &SimOptions,
) -> SimReport {
    let mut report = SimReport {
        rule,
        position: pos.clone(),
        ipc_before: t.to_string(),
        ipc_after: String::new(),
        fat_before: String::new(),
        fat_after: String::new(),
        verdict: SimVerdict::SyntacticIdentity,
        trace: None,
    };
    let fail = |mut report: SimReport, reason: String| {
        report.verdict = SimVerdict::Failed { reason };
        report
    };
    let Some(class) = rule.sim_class() else {
        return fail(report, format!("{rule} is not an IPC rule"));
    };
    let after = match step_at(t, pos, rule) {
        Ok(n) => n,
        Err(e) => return fail(report, e.to_string()),
    };
    report.ipc_after = after.to_string();
    let ty = match typecheck(ctx, t) {
        Ok(ty) => ty,
        Err(e) => return fail(report, format!("source term is ill-typed: {e}")),
    };
    match typecheck(ctx, &after) {
        Ok(ty2) if ty2 == ty => {}
        Ok(ty2) => return fail(report, format!("subject reduction: {ty} became {ty2}")),
        Err(e) => return fail(report, format!("subject reduction: contractum is ill-typed: {e}")),
    }

    let fctx = translate_context(ctx);
    let expected = rp_type(&ty);
    let fb = translate(t, TranslationKind::Optimized);
    let fa = translate(&after, TranslationKind::Optimized);
    report.fat_before = fb.to_string();
    report.fat_after = fa.to_string();
    for (which, term) in [("redex", &fb), ("contractum", &fa)] {
        match typecheck_fat(&fctx, term) {
            Ok(fty) if fty == expected => {}
            Ok(fty) => {
                return fail(report, format!("translation of the {which} has type {fty}, expected {expected}"))
            }
            Err(e) => return fail(report, format!("translation of the {which} is ill-typed: {e}")),
        }
    }

    if fb == fa {
        report.verdict = SimVerdict::SyntacticIdentity;
        return report;
    }
    let rules = match class {
        SimClass::Identity => return fail(report, "translations of a commuting conversion differ".into()),
        SimClass::Beta => RuleSet::fat_beta(),
        SimClass::BetaEta => RuleSet::fat_all(),
    };
    let trace = guided_reach(&fb, &fa, rules, opts.max_steps)
        .or_else(|| reachable::<Fat>(&fb, &fa, rules, opts.max_steps, opts.node_cap).ok());
    if let Some(trace) = trace {
        if let Some(bad) = trace.steps.iter().find(|s| typecheck_fat(&fctx, &s.after).ok().as_ref() != Some(&expected)) {
            return fail(report, format!("subject reduction in F_at fails after {} at {}", bad.rule, bad.position));
        }
        report.verdict = SimVerdict::ReachedIn {
            steps: trace.len(),
            class: trace_class(&trace),
        };
        report.trace = Some(trace.records());
        return report;
    }
    match join_at_normal_form(&fb, &fa, rules, opts.fuel) {
        Ok(true) => report.verdict = SimVerdict::JoinedAtNormalForm,
        Ok(false) => return fail(report, "translations have different normal forms".into()),
        Err(e) => return fail(report, format!("no trace found and normalization gave up: {e}")),
    }
    report
}

/// `Beta` when only β rules were used.
fn trace_class(trace: &Trace<FatTerm>) -> SimClass {
    if trace.rules().all(|r| RuleSet::fat_beta().contains(r)) {
        SimClass::Beta
    } else {
        SimClass::BetaEta
    }
}

/// A report witnesses strict simulation when it carries a non-empty trace
/// between distinct translations.
pub fn is_strict(report: &SimReport) -> bool {
    matches!(report.verdict, SimVerdict::ReachedIn { steps, .. } if steps >= 1)
        && report.fat_before != report.fat_after
}

/// Whether a head β step at `pos` is simulated by at least one step.
/// Returns `false` when the step is not a head β step.
pub fn check_head_strictness(t: &IpcTerm, ctx: &Context, pos: &Path, rule: RuleId) -> bool {
    if !rule.is_ipc_beta() || !is_head_step(t, pos, rule) {
        return false;
    }
    is_strict(&check_simulation(t, ctx, pos, rule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipc::IpcType;

    fn x() -> IpcType {
        IpcType::var("X")
    }

    #[test]
    fn abort_applied_is_identity() {
        let xx = IpcType::imp(x(), x());
        let t = IpcTerm::app(IpcTerm::abort(IpcTerm::var("z"), xx), IpcTerm::var("w"));
        let ctx = Context::new().with("z", IpcType::Bottom).with("w", x());
        let r = check_simulation(&t, &ctx, &Path::root(), RuleId::VarpiImp);
        assert_eq!(r.verdict, SimVerdict::SyntacticIdentity);
    }

    #[test]
    fn beta_at_root_reaches() {
        let t = IpcTerm::app(IpcTerm::lam("x", x(), IpcTerm::var("x")), IpcTerm::var("y"));
        let ctx = Context::new().with("y", x());
        let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaImp);
        assert!(matches!(r.verdict, SimVerdict::ReachedIn { steps, class: SimClass::Beta } if steps >= 1), "{r:?}");
        assert!(check_head_strictness(&t, &ctx, &Path::root(), RuleId::BetaImp));
    }

    #[test]
    fn wrong_rule_is_failed() {
        let t = IpcTerm::var("y");
        let ctx = Context::new().with("y", x());
        let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaImp);
        assert!(r.verdict.is_failed());
        let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaAll);
        assert!(r.verdict.is_failed());
    }

    #[test]
    fn verdict_json_shape() {
        let v = SimVerdict::ReachedIn {
            steps: 2,
            class: SimClass::BetaEta,
        };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"kind":"reached-in","steps":2,"class":"beta-eta"}"#
        );
    }
}
