//! Goal-directed search for a reduction path between two F_at terms.
//!
//! Rather than exploring every redex, the search compares the two terms
//! structurally. When their outermost constructors agree it solves the
//! children independently; otherwise it either contracts the head redex of
//! the source or, for η, aims the source body at the η-expansion of the
//! target and finishes with one η step at the root. Every answer is replayed
//! and checked, so the search is sound; it is not complete.

use std::collections::HashMap;

use super::{Fat, Trace};
use crate::fat::{is_redex_fat, subst_term, subst_type_in_term, FatTerm};
use crate::name::{fresh, Name};
use crate::rule::{Path, RuleId, RuleSet};
use crate::side::Side;

type Moves = Vec<(Path, RuleId)>;

/// A reduction path from `from` to a term α-equal to `to` using `rules`,
/// at most `max_steps` long, if the guided strategy finds one.
pub fn guided_reach(
    from: &FatTerm,
    to: &FatTerm,
    rules: RuleSet,
    max_steps: usize,
) -> Option<Trace<FatTerm>> {
    let mut search = Search {
        rules,
        failed: HashMap::new(),
        calls: 0,
    };
    let moves = search.reach(from, to, max_steps)?;
    let trace = Trace::replay::<Fat>(from, &moves).ok()?;
    (*trace.end() == *to).then_some(trace)
}

/// Work bound per query, in calls to `reach`.
const CALL_LIMIT: usize = 20_000;

struct Search {
    rules: RuleSet,
    /// Largest budget known to fail for a pair of α-keys.
    failed: HashMap<(String, String), usize>,
    calls: usize,
}

fn prefixed(moves: Moves, prefix: usize) -> impl Iterator<Item = (Path, RuleId)> {
    moves.into_iter().map(move |(p, r)| (p.under(&[prefix]), r))
}

impl Search {
    fn reach(&mut self, a: &FatTerm, b: &FatTerm, budget: usize) -> Option<Moves> {
        if a == b {
            return Some(Vec::new());
        }
        if budget == 0 {
            return None;
        }
        self.calls += 1;
        if self.calls > CALL_LIMIT {
            return None;
        }
        let key = (a.alpha_key(), b.alpha_key());
        if self.failed.get(&key).is_some_and(|&k| k >= budget) {
            return None;
        }
        let found = self
            .decompose(a, b, budget)
            .or_else(|| self.eta_expand_target(a, b, budget))
            .or_else(|| self.head_step(a, b, budget));
        if found.is_none() {
            let entry = self.failed.entry(key).or_insert(0);
            *entry = (*entry).max(budget);
        }
        found
    }

    /// Same outermost constructor: solve the children left to right.
    fn decompose(&mut self, a: &FatTerm, b: &FatTerm, budget: usize) -> Option<Moves> {
        let pairs: Vec<(FatTerm, FatTerm)> = match (a, b) {
            (
                FatTerm::Lam {
                    var: x,
                    ty: s,
                    body: m,
                },
                FatTerm::Lam {
                    var: y,
                    ty: t,
                    body: n,
                },
            ) => {
                if s != t {
                    return None;
                }
                let (m, n) = align_term_binders(x, m, y, n);
                vec![(m, n)]
            }
            (FatTerm::TyLam(x, m), FatTerm::TyLam(y, n)) => {
                let (m, n) = align_type_binders(x, m, y, n);
                vec![(m, n)]
            }
            (FatTerm::App(a1, a2), FatTerm::App(b1, b2))
            | (FatTerm::Pair(a1, a2), FatTerm::Pair(b1, b2)) => {
                vec![((**a1).clone(), (**b1).clone()), ((**a2).clone(), (**b2).clone())]
            }
            (FatTerm::Proj(i, m), FatTerm::Proj(j, n)) if i == j => {
                vec![((**m).clone(), (**n).clone())]
            }
            (FatTerm::TyApp(m, x), FatTerm::TyApp(n, y)) if x == y => {
                vec![((**m).clone(), (**n).clone())]
            }
            _ => return None,
        };
        let mut moves = Vec::new();
        let mut left = budget;
        for (i, (m, n)) in pairs.iter().enumerate() {
            let sub = self.reach(m, n, left)?;
            left -= sub.len();
            moves.extend(prefixed(sub, i));
        }
        Some(moves)
    }

    /// `a` is an introduction form but `b` is not: reduce `a`'s body to the
    /// η-expansion of `b`, then contract the η-redex at the root.
    fn eta_expand_target(&mut self, a: &FatTerm, b: &FatTerm, budget: usize) -> Option<Moves> {
        if budget < 1 {
            return None;
        }
        match a {
            FatTerm::Lam { var, body, .. }
                if self.rules.contains(RuleId::EtaImpF)
                    && !matches!(b, FatTerm::Lam { .. })
                    && !b.occurs_free(var) =>
            {
                let goal = FatTerm::app(b.clone(), FatTerm::Var(var.clone()));
                let mut moves: Moves = prefixed(self.reach(body, &goal, budget - 1)?, 0).collect();
                moves.push((Path::root(), RuleId::EtaImpF));
                Some(moves)
            }
            FatTerm::TyLam(x, body)
                if self.rules.contains(RuleId::EtaAll)
                    && !matches!(b, FatTerm::TyLam(..))
                    && !b.type_occurs_free(x) =>
            {
                let goal = FatTerm::TyApp(Box::new(b.clone()), x.clone());
                let mut moves: Moves = prefixed(self.reach(body, &goal, budget - 1)?, 0).collect();
                moves.push((Path::root(), RuleId::EtaAll));
                Some(moves)
            }
            FatTerm::Pair(a1, a2)
                if self.rules.contains(RuleId::EtaAndF) && !matches!(b, FatTerm::Pair(..)) =>
            {
                let g1 = FatTerm::proj(Side::Left, b.clone());
                let g2 = FatTerm::proj(Side::Right, b.clone());
                let first = self.reach(a1, &g1, budget - 1)?;
                let second = self.reach(a2, &g2, budget - 1 - first.len())?;
                let mut moves: Moves = prefixed(first, 0).chain(prefixed(second, 1)).collect();
                moves.push((Path::root(), RuleId::EtaAndF));
                Some(moves)
            }
            _ => None,
        }
    }

    /// Contract the head redex of `a`, then continue.
    fn head_step(&mut self, a: &FatTerm, b: &FatTerm, budget: usize) -> Option<Moves> {
        let (path, rule) = self.head_redex(a)?;
        let next = crate::fat::step_at_fat(a, &path, rule).ok()?;
        let rest = self.reach(&next, b, budget - 1)?;
        let mut moves = vec![(path, rule)];
        moves.extend(rest);
        Some(moves)
    }

    /// The β-redex reached by descending through λ/Λ bodies and the
    /// eliminated side of applications, projections and instantiations.
    fn head_redex(&self, a: &FatTerm) -> Option<(Path, RuleId)> {
        let mut path = Vec::new();
        let mut cur = a;
        loop {
            for rule in [RuleId::BetaImpF, RuleId::BetaAndF, RuleId::BetaAll] {
                if self.rules.contains(rule) && is_redex_fat(rule, cur) {
                    return Some((Path(path), rule));
                }
            }
            match cur {
                FatTerm::Lam { body, .. } | FatTerm::TyLam(_, body) => cur = body,
                FatTerm::App(f, _) => cur = f,
                FatTerm::Proj(_, m) | FatTerm::TyApp(m, _) => cur = m,
                FatTerm::Var(_) | FatTerm::Pair(..) => return None,
            }
            path.push(0);
        }
    }
}

/// Bodies of `λx.m` and `λy.n` with their binders renamed to a common name.
fn align_term_binders(x: &Name, m: &FatTerm, y: &Name, n: &FatTerm) -> (FatTerm, FatTerm) {
    if x == y {
        return (m.clone(), n.clone());
    }
    if !n.occurs_free(x) {
        return (m.clone(), subst_term(&FatTerm::Var(x.clone()), y, n));
    }
    let v = fresh(x.as_str(), |c| m.occurs_free(c) || n.occurs_free(c));
    (
        subst_term(&FatTerm::Var(v.clone()), x, m),
        subst_term(&FatTerm::Var(v), y, n),
    )
}

fn align_type_binders(x: &Name, m: &FatTerm, y: &Name, n: &FatTerm) -> (FatTerm, FatTerm) {
    if x == y {
        return (m.clone(), n.clone());
    }
    if !n.type_occurs_free(x) {
        return (m.clone(), subst_type_in_term(x, y, n));
    }
    let v = fresh(x.as_str(), |c| m.type_occurs_free(c) || n.type_occurs_free(c));
    (subst_type_in_term(&v, x, m), subst_type_in_term(&v, y, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fat::FatType;

    fn x() -> FatType {
        FatType::var("X")
    }

    #[test]
    fn finds_inner_beta() {
        let id = FatTerm::lam("u", x(), FatTerm::var("u"));
        let a = FatTerm::app(FatTerm::var("f"), FatTerm::app(id, FatTerm::var("y")));
        let b = FatTerm::app(FatTerm::var("f"), FatTerm::var("y"));
        let trace = guided_reach(&a, &b, RuleSet::fat_beta(), 12).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.steps[0].position, Path(vec![1]));
    }

    #[test]
    fn expanded_lambda_collapses_by_eta() {
        // λw.(λx.f x) w  →*  f
        let a = FatTerm::lam(
            "w",
            x(),
            FatTerm::app(
                FatTerm::lam("x", x(), FatTerm::app(FatTerm::var("f"), FatTerm::var("x"))),
                FatTerm::var("w"),
            ),
        );
        let trace = guided_reach(&a, &FatTerm::var("f"), RuleSet::fat_all(), 12).unwrap();
        assert!(trace.validate::<Fat>());
        assert!(trace.len() <= 3);
        assert!(guided_reach(&a, &FatTerm::var("f"), RuleSet::fat_beta(), 12).is_none());
    }

    #[test]
    fn expanded_pair_collapses_by_eta() {
        let p = FatTerm::var("p");
        let a = FatTerm::pair(FatTerm::proj(Side::Left, p.clone()), FatTerm::proj(Side::Right, p.clone()));
        let trace = guided_reach(&a, &p, RuleSet::fat_all(), 12).unwrap();
        assert_eq!(trace.len(), 1);
    }

    #[test]
    fn respects_budget() {
        let id = FatTerm::lam("u", x(), FatTerm::var("u"));
        let a = FatTerm::app(id.clone(), FatTerm::app(id, FatTerm::var("y")));
        assert!(guided_reach(&a, &FatTerm::var("y"), RuleSet::fat_beta(), 1).is_none());
        assert_eq!(
            guided_reach(&a, &FatTerm::var("y"), RuleSet::fat_beta(), 2).map(|t| t.len()),
            Some(2)
        );
    }
}
