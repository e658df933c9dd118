use atomic_embed::ipc::{Context, IpcTerm, IpcType};
use atomic_embed::rewrite::{reachable, Fat};
use atomic_embed::sim::{check_head_strictness, check_simulation, is_strict, SimVerdict};
use atomic_embed::syntax::parse_ipc_file;
use atomic_embed::translate::{translate, TranslationKind};
use atomic_embed::{Path, RuleId, RuleSet, SimClass};

fn load(text: &str) -> (Context, IpcTerm) {
    parse_ipc_file(text).unwrap()
}

#[test]
fn abort_applied_collapses() {
    let (ctx, t) = load("z : _|_; w : X; (abort[X -> X] z) w");
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::VarpiImp);
    assert_eq!(r.verdict, SimVerdict::SyntacticIdentity);
    assert_eq!(r.fat_before, r.fat_after);
    assert!(r.trace.is_none());
}

#[test]
fn root_beta_is_strict() {
    let (ctx, t) = load("y : X; (\\x:X. x) y");
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaImp);
    match r.verdict {
        SimVerdict::ReachedIn { steps, class } => {
            assert!(steps >= 1);
            assert_eq!(class, SimClass::Beta);
        }
        other => panic!("{other:?}"),
    }
    assert!(check_head_strictness(&t, &ctx, &Path::root(), RuleId::BetaImp));
}

#[test]
fn case_of_case_collapses() {
    let (ctx, t) = load(
        "d : X \\/ Y; a : X; b : Y;
         case (case d of {x:X => inr[Y|X] x | y:Y => inl[Y|X] y} : Y \\/ X) of {u:Y => a | v:X => v} : X",
    );
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::PiOr);
    assert_eq!(r.verdict, SimVerdict::SyntacticIdentity);
}

#[test]
fn injection_into_case_needs_eta() {
    // case (inl a) of x.f | y.g : X -> X translates to λz.f z on one side and
    // f on the other, so β alone cannot relate them.
    let (ctx, t) = load(
        "a : X; f : X -> X; g : X -> X;
         case inl[X|X] a of {x:X => f | y:X => g} : X -> X",
    );
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaOr);
    assert!(matches!(r.verdict, SimVerdict::ReachedIn { class: SimClass::BetaEta, .. }), "{r:?}");
    let before = translate(&t, TranslationKind::Optimized);
    let after = translate(&IpcTerm::var("f"), TranslationKind::Optimized);
    assert!(reachable::<Fat>(&before, &after, RuleSet::fat_beta(), 12, 20_000).is_err());
    assert!(check_head_strictness(&t, &ctx, &Path::root(), RuleId::BetaOr));
}

#[test]
fn translated_beta_pair_is_reachable() {
    let (ctx, t) = load("a : X; b : Y; <a, b>.1");
    let a = translate(&t, TranslationKind::Optimized);
    let b = translate(&IpcTerm::var("a"), TranslationKind::Optimized);
    let trace = reachable::<Fat>(&a, &b, RuleSet::fat_beta(), 12, 20_000).unwrap();
    assert!(!trace.is_empty());
    assert!(trace.validate::<Fat>());
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaAnd);
    assert!(is_strict(&r));
}

#[test]
fn non_head_beta_is_exempt() {
    let x = IpcType::var("X");
    let ctx = Context::new().with("m", IpcType::Bottom).with("a", x.clone());
    let arg = IpcTerm::app(IpcTerm::lam("u", x.clone(), IpcTerm::var("u")), IpcTerm::var("a"));
    let t = IpcTerm::app(IpcTerm::abort(IpcTerm::var("m"), IpcType::imp(x.clone(), x)), arg);
    let pos = Path(vec![1]);
    assert_eq!(check_simulation(&t, &ctx, &pos, RuleId::BetaImp).verdict, SimVerdict::SyntacticIdentity);
    assert!(!check_head_strictness(&t, &ctx, &pos, RuleId::BetaImp));
}

#[test]
fn identity_is_never_strict() {
    let (ctx, t) = load("y : X; (\\x:X. x) y");
    let mut r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaImp);
    r.verdict = SimVerdict::SyntacticIdentity;
    assert!(!is_strict(&r));
    r.verdict = SimVerdict::ReachedIn { steps: 0, class: SimClass::Beta };
    assert!(!is_strict(&r));
}

#[test]
fn ill_typed_input_fails() {
    let (ctx, t) = load("y : Y; (\\x:X. x) y");
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::BetaImp);
    assert!(r.verdict.is_failed());
}

#[test]
fn report_json_is_stable() {
    let (ctx, t) = load("z : _|_; w : X; (abort[X -> X] z) w");
    let r = check_simulation(&t, &ctx, &Path::root(), RuleId::VarpiImp);
    assert_eq!(
        serde_json::to_string(&r).unwrap(),
        r#"{"rule":"varpi-imp","position":"root","ipc_before":"abort[X -> X] z w","ipc_after":"abort[X] z","fat_before":"z [X]","fat_after":"z [X]","verdict":{"kind":"syntactic-identity"}}"#
    );
}
