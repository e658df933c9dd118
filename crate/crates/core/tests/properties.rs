use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use atomic_embed::fat::{normalize_fat, redexes_fat, root_rewrite_fat, typecheck_fat, FatTerm, FatType};
use atomic_embed::gen::{gen_sample, GenConfig};
use atomic_embed::ipc::{redexes, root_rewrite, step_at, subst, typecheck, IpcTerm};
use atomic_embed::rewrite::{reachable, Fat};
use atomic_embed::syntax::{parse_fat, parse_ipc};
use atomic_embed::translate::{rp_type, translate, translate_context, TranslationKind};
use atomic_embed::{Name, Path, RuleId, RuleSet, Side};

fn sample(seed: u64, index: u64, budget: usize) -> Option<(atomic_embed::ipc::Context, IpcTerm)> {
    let cfg = GenConfig {
        size_budget: budget,
        ..GenConfig::with_seed(seed)
    };
    gen_sample(&cfg, index).ok().map(|(ctx, _, t)| (ctx, t))
}

/// Every (path, subterm) pair in preorder, built from `children` alone.
fn ipc_positions(t: &IpcTerm) -> Vec<(Path, &IpcTerm)> {
    let mut out = vec![(Path::root(), t)];
    for (i, c) in t.children().into_iter().enumerate() {
        for (p, s) in ipc_positions(c) {
            out.push((p.under(&[i]), s));
        }
    }
    out
}

fn fat_positions(t: &FatTerm) -> Vec<(Path, &FatTerm)> {
    let mut out = vec![(Path::root(), t)];
    for (i, c) in t.children().into_iter().enumerate() {
        for (p, s) in fat_positions(c) {
            out.push((p.under(&[i]), s));
        }
    }
    out
}

/// All terms reachable in at most `depth` steps, with their distance.
fn exhaustive(t: &FatTerm, rules: RuleSet, depth: usize) -> HashMap<String, usize> {
    let mut dist = HashMap::from([(t.alpha_key(), 0)]);
    let mut frontier = vec![t.clone()];
    for d in 1..=depth {
        let mut next = Vec::new();
        for u in &frontier {
            for (p, s) in fat_positions(u) {
                for rule in rules.iter() {
                    let Ok(r) = root_rewrite_fat(rule, s) else { continue };
                    let v = u.replace_at(&p, r).unwrap();
                    dist.entry(v.alpha_key()).or_insert_with(|| {
                        next.push(v.clone());
                        d
                    });
                }
            }
        }
        frontier = next;
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_terms_are_well_typed(seed in any::<u64>(), index in 0u64..1000) {
        let cfg = GenConfig::with_seed(seed);
        if let Ok((ctx, goal, t)) = gen_sample(&cfg, index) {
            prop_assert_eq!(typecheck(&ctx, &t), Ok(goal));
        }
    }

    #[test]
    fn subject_reduction(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((ctx, t)) = sample(seed, index, 16) {
            let ty = typecheck(&ctx, &t).unwrap();
            for (pos, rule) in redexes(&t, RuleSet::ipc_all()) {
                let n = step_at(&t, &pos, rule).unwrap();
                prop_assert_eq!(typecheck(&ctx, &n), Ok(ty.clone()), "{} at {}", rule, pos);
            }
        }
    }

    #[test]
    fn redexes_match_brute_force(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((_, t)) = sample(seed, index, 16) {
            let mut expected = Vec::new();
            for (p, s) in ipc_positions(&t) {
                for rule in RuleId::IPC {
                    if root_rewrite(rule, s).is_ok() {
                        expected.push((p.clone(), rule));
                    }
                }
            }
            prop_assert_eq!(redexes(&t, RuleSet::ipc_all()), expected);
        }
    }

    #[test]
    fn fat_redexes_match_brute_force(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((_, t)) = sample(seed, index, 12) {
            let f = translate(&t, TranslationKind::Baseline);
            let mut expected = Vec::new();
            for (p, s) in fat_positions(&f) {
                for rule in RuleId::FAT {
                    if root_rewrite_fat(rule, s).is_ok() {
                        expected.push((p.clone(), rule));
                    }
                }
            }
            prop_assert_eq!(redexes_fat(&f, RuleSet::fat_all()), expected);
        }
    }

    #[test]
    fn alpha_key_agrees_with_equality(s1 in any::<u64>(), s2 in any::<u64>(), i in 0u64..200) {
        let a = sample(s1, i, 10);
        let b = sample(s2, i, 10);
        if let (Some((_, a)), Some((_, b))) = (a, b) {
            prop_assert_eq!(a == b, a.alpha_key() == b.alpha_key());
            let (fa, fb) = (translate(&a, TranslationKind::Optimized), translate(&b, TranslationKind::Optimized));
            prop_assert_eq!(fa == fb, fa.alpha_key() == fb.alpha_key());
        }
    }

    #[test]
    fn renaming_free_variables_apart_is_visible(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((_, t)) = sample(seed, index, 16) {
            let fv: BTreeSet<Name> = t.free_vars();
            if let Some(x) = fv.iter().next() {
                let renamed = subst(&IpcTerm::var("zz_fresh"), x, &t);
                prop_assert!(renamed != t);
                prop_assert_eq!(subst(&IpcTerm::Var(x.clone()), &Name::new("zz_fresh"), &renamed), t);
            }
        }
    }

    #[test]
    fn printer_parser_round_trip(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((_, t)) = sample(seed, index, 20) {
            prop_assert_eq!(parse_ipc(&t.to_string()), Ok(t.clone()));
            for kind in [TranslationKind::Optimized, TranslationKind::Baseline] {
                let f = translate(&t, kind);
                prop_assert_eq!(parse_fat(&f.to_string()), Ok(f));
            }
        }
    }

    #[test]
    fn translation_preserves_types(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((ctx, t)) = sample(seed, index, 16) {
            let ty = typecheck(&ctx, &t).unwrap();
            for kind in [TranslationKind::Optimized, TranslationKind::Baseline] {
                prop_assert_eq!(typecheck_fat(&translate_context(&ctx), &translate(&t, kind)), Ok(rp_type(&ty)));
            }
        }
    }

    #[test]
    fn normal_forms_have_no_redexes(seed in any::<u64>(), index in 0u64..1000) {
        if let Some((ctx, t)) = sample(seed, index, 12) {
            let f = translate(&t, TranslationKind::Baseline);
            let (n, _) = normalize_fat(&f, RuleSet::fat_all(), 10_000).unwrap();
            prop_assert!(redexes_fat(&n, RuleSet::fat_all()).is_empty());
            prop_assert_eq!(typecheck_fat(&translate_context(&ctx), &n), typecheck_fat(&translate_context(&ctx), &f));
        }
    }
}

/// Small untyped F_at terms over a handful of names.
fn small_fat() -> impl Strategy<Value = FatTerm> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("f")].prop_map(FatTerm::var);
    leaf.prop_recursive(4, 10, 2, |inner| {
        let ty = || Just(FatType::var("X"));
        prop_oneof![
            (prop_oneof![Just("x"), Just("y")], ty(), inner.clone()).prop_map(|(v, t, b)| FatTerm::lam(v, t, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FatTerm::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FatTerm::pair(a, b)),
            (any::<bool>(), inner.clone()).prop_map(|(l, m)| FatTerm::proj(if l { Side::Left } else { Side::Right }, m)),
            inner.clone().prop_map(|m| FatTerm::ty_lam("X", m)),
            inner.prop_map(|m| FatTerm::TyApp(Box::new(m), Name::new("Y"))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Breadth-first search agrees with exhaustive enumeration on small
    /// terms: it finds exactly the reachable targets, by shortest paths.
    #[test]
    fn reachable_matches_exhaustive_enumeration(f in small_fat(), pick in any::<prop::sample::Index>()) {
        const DEPTH: usize = 3;
        prop_assume!(f.size() <= 8);
        let rules = RuleSet::fat_all();
        let dist = exhaustive(&f, rules, DEPTH);
        let mut keys: Vec<&String> = dist.keys().collect();
        keys.sort();
        let chosen = pick.get(&keys).to_string();
        let all = exhaustive_terms(&f, rules, DEPTH);
        let target = all.iter().find(|t| t.alpha_key() == chosen).unwrap();
        let trace = reachable::<Fat>(&f, target, rules, DEPTH, 100_000).unwrap();
        prop_assert!(trace.validate::<Fat>());
        prop_assert_eq!(trace.len(), dist[&chosen]);
        // A term outside the enumeration is never reported reachable.
        let stranger = FatTerm::var("nowhere");
        prop_assert!(reachable::<Fat>(&f, &stranger, rules, DEPTH, 100_000).is_err());
    }
}

fn exhaustive_terms(t: &FatTerm, rules: RuleSet, depth: usize) -> Vec<FatTerm> {
    let mut out = vec![t.clone()];
    let mut frontier = vec![t.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in &frontier {
            for (p, s) in fat_positions(u) {
                for rule in rules.iter() {
                    if let Ok(r) = root_rewrite_fat(rule, s) {
                        next.push(u.replace_at(&p, r).unwrap());
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
