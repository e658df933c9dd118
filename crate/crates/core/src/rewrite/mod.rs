//! Calculus-generic reduction machinery: traces, bounded breadth-first
//! reachability and comparison of normal forms.

mod guided;

pub use guided::guided_reach;

use std::collections::{HashMap, VecDeque};
use std::fmt::{Debug, Display};

use serde::{Deserialize, Serialize};

use crate::fat::{self, FatTerm, FuelExhausted};
use crate::ipc::{self, IpcTerm};
use crate::rule::{Path, RewriteError, RuleId, RuleSet};

/// Default depth bound for simulation searches.
pub const DEFAULT_MAX_STEPS: usize = 12;

/// Default bound on the number of distinct terms a breadth-first search
/// may visit before giving up.
pub const DEFAULT_NODE_CAP: usize = 20_000;

/// The operations the engine needs from a calculus.
pub trait Calculus {
    type Term: Clone + Eq + Debug + Display;

    fn redexes(t: &Self::Term, rules: RuleSet) -> Vec<(Path, RuleId)>;

    fn step_at(t: &Self::Term, position: &Path, rule: RuleId) -> Result<Self::Term, RewriteError>;

    /// Equal for exactly the α-equivalent terms.
    fn alpha_key(t: &Self::Term) -> String;
}

pub struct Ipc;

impl Calculus for Ipc {
    type Term = IpcTerm;

    fn redexes(t: &IpcTerm, rules: RuleSet) -> Vec<(Path, RuleId)> {
        ipc::redexes(t, rules)
    }

    fn step_at(t: &IpcTerm, position: &Path, rule: RuleId) -> Result<IpcTerm, RewriteError> {
        ipc::step_at(t, position, rule)
    }

    fn alpha_key(t: &IpcTerm) -> String {
        t.alpha_key()
    }
}

pub struct Fat;

impl Calculus for Fat {
    type Term = FatTerm;

    fn redexes(t: &FatTerm, rules: RuleSet) -> Vec<(Path, RuleId)> {
        fat::redexes_fat(t, rules)
    }

    fn step_at(t: &FatTerm, position: &Path, rule: RuleId) -> Result<FatTerm, RewriteError> {
        fat::step_at_fat(t, position, rule)
    }

    fn alpha_key(t: &FatTerm) -> String {
        t.alpha_key()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep<T> {
    pub rule: RuleId,
    pub position: Path,
    pub before: T,
    pub after: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<T> {
    pub start: T,
    pub steps: Vec<ReductionStep<T>>,
}

/// One step of a trace in printable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub rule: RuleId,
    pub position: Path,
    pub result: String,
}

impl<T: Clone + Eq> Trace<T> {
    pub fn empty(start: T) -> Trace<T> {
        Trace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &T {
        self.steps.last().map_or(&self.start, |s| &s.after)
    }

    /// Build a trace by applying `(position, rule)` pairs from `start`.
    pub fn replay<C: Calculus<Term = T>>(
        start: &T,
        moves: &[(Path, RuleId)],
    ) -> Result<Trace<T>, RewriteError> {
        let mut steps = Vec::with_capacity(moves.len());
        let mut cur = start.clone();
        for (position, rule) in moves {
            let after = C::step_at(&cur, position, *rule)?;
            steps.push(ReductionStep {
                rule: *rule,
                position: position.clone(),
                before: cur,
                after: after.clone(),
            });
            cur = after;
        }
        Ok(Trace {
            start: start.clone(),
            steps,
        })
    }

    /// Steps chain and each `after` is what re-applying the step gives.
    pub fn validate<C: Calculus<Term = T>>(&self) -> bool {
        let mut cur = &self.start;
        for s in &self.steps {
            if s.before != *cur {
                return false;
            }
            match C::step_at(&s.before, &s.position, s.rule) {
                Ok(after) if after == s.after => {}
                _ => return false,
            }
            cur = &s.after;
        }
        true
    }

    pub fn rules(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.steps.iter().map(|s| s.rule)
    }
}

impl<T: Display> Trace<T> {
    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .map(|s| StepRecord {
                rule: s.rule,
                position: s.position.clone(),
                result: s.after.to_string(),
            })
            .collect()
    }
}

/// The search gave up; this says nothing about whether a path exists.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no reduction path found within {max_steps} steps ({explored} terms explored)")]
pub struct NotFound {
    pub max_steps: usize,
    pub explored: usize,
}

/// Breadth-first search for a shortest reduction path from `from` to a term
/// α-equal to `to`, at most `max_steps` long, visiting at most `node_cap`
/// distinct terms.
pub fn reachable<C: Calculus>(
    from: &C::Term,
    to: &C::Term,
    rules: RuleSet,
    max_steps: usize,
    node_cap: usize,
) -> Result<Trace<C::Term>, NotFound> {
    let target = C::alpha_key(to);
    // (term, parent index and the move into this term, depth)
    type Node<T> = (T, Option<(usize, Path, RuleId)>, usize);
    let mut nodes: Vec<Node<C::Term>> = vec![(from.clone(), None, 0)];
    let mut seen: HashMap<String, usize> = HashMap::new();
    seen.insert(C::alpha_key(from), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut found = if C::alpha_key(from) == target { Some(0) } else { None };
    while found.is_none() {
        let Some(i) = queue.pop_front() else { break };
        let depth = nodes[i].2;
        if depth >= max_steps {
            continue;
        }
        for (position, rule) in C::redexes(&nodes[i].0, rules) {
            let Ok(next) = C::step_at(&nodes[i].0, &position, rule) else {
                continue;
            };
            let key = C::alpha_key(&next);
            if seen.contains_key(&key) {
                continue;
            }
            let j = nodes.len();
            seen.insert(key.clone(), j);
            nodes.push((next, Some((i, position, rule)), depth + 1));
            if key == target {
                found = Some(j);
                break;
            }
            queue.push_back(j);
            if nodes.len() >= node_cap {
                return Err(NotFound {
                    max_steps,
                    explored: nodes.len(),
                });
            }
        }
    }
    let Some(mut j) = found else {
        return Err(NotFound {
            max_steps,
            explored: nodes.len(),
        });
    };
    let mut moves = Vec::new();
    while let Some((parent, position, rule)) = nodes[j].1.clone() {
        moves.push((position, rule));
        j = parent;
    }
    moves.reverse();
    Ok(Trace::replay::<C>(from, &moves).expect("moves were taken from the search graph"))
}

/// Leftmost-outermost normalization in any calculus. Returns the normal
/// form and the number of steps taken.
pub fn normalize<C: Calculus>(
    t: &C::Term,
    rules: RuleSet,
    fuel: usize,
) -> Result<(C::Term, usize), FuelExhausted> {
    let mut cur = t.clone();
    for steps in 0..=fuel {
        let Some((position, rule)) = C::redexes(&cur, rules).into_iter().next() else {
            return Ok((cur, steps));
        };
        if steps == fuel {
            break;
        }
        cur = C::step_at(&cur, &position, rule).expect("enumerated redexes contract");
    }
    Err(FuelExhausted { steps: fuel })
}

/// Whether `a` and `b` have α-equal normal forms under `rules`.
pub fn join_at_normal_form(
    a: &FatTerm,
    b: &FatTerm,
    rules: RuleSet,
    fuel: usize,
) -> Result<bool, FuelExhausted> {
    let (na, _) = fat::normalize_fat(a, rules, fuel)?;
    let (nb, _) = fat::normalize_fat(b, rules, fuel)?;
    Ok(na == nb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fat::FatType;

    fn id() -> FatTerm {
        FatTerm::lam("x", FatType::var("X"), FatTerm::var("x"))
    }

    #[test]
    fn reflexive_search_is_empty() {
        let t = FatTerm::var("y");
        let trace = reachable::<Fat>(&t, &t, RuleSet::fat_all(), 5, 100).unwrap();
        assert!(trace.is_empty());
    }

    #[test]
    fn one_beta_step() {
        let t = FatTerm::app(id(), FatTerm::var("y"));
        let trace = reachable::<Fat>(&t, &FatTerm::var("y"), RuleSet::fat_beta(), 5, 100).unwrap();
        assert_eq!(trace.len(), 1);
        assert!(trace.validate::<Fat>());
        assert_eq!(trace.records()[0].result, "y");
    }

    #[test]
    fn unreachable_is_not_found() {
        let t = FatTerm::app(id(), FatTerm::var("y"));
        assert!(reachable::<Fat>(&t, &FatTerm::var("z"), RuleSet::fat_all(), 5, 100).is_err());
    }

    #[test]
    fn tampered_trace_fails_validation() {
        let t = FatTerm::app(id(), FatTerm::var("y"));
        let mut trace = reachable::<Fat>(&t, &FatTerm::var("y"), RuleSet::fat_beta(), 5, 100).unwrap();
        trace.steps[0].after = FatTerm::var("q");
        assert!(!trace.validate::<Fat>());
    }

    #[test]
    fn join_examples() {
        let t = FatTerm::app(id(), FatTerm::var("y"));
        let rules = RuleSet::fat_all();
        assert_eq!(join_at_normal_form(&t, &t, rules, 100), Ok(true));
        assert_eq!(join_at_normal_form(&t, &FatTerm::var("y"), rules, 100), Ok(true));
        assert_eq!(
            join_at_normal_form(&FatTerm::var("x"), &FatTerm::var("y"), rules, 100),
            Ok(false)
        );
    }

    #[test]
    fn generic_normalize_agrees_with_fat_normalizer() {
        let t = FatTerm::app(id(), FatTerm::app(id(), FatTerm::var("y")));
        let rules = RuleSet::fat_all();
        let (n, k) = normalize::<Fat>(&t, rules, 10).unwrap();
        assert_eq!(n, fat::normalize_fat(&t, rules, 10).unwrap().0);
        assert_eq!(k, 2);
        assert!(normalize::<Fat>(&t, rules, 1).is_err());
    }

    #[test]
    fn ipc_search_works_too() {
        use crate::ipc::IpcType;
        let t = IpcTerm::app(
            IpcTerm::lam("x", IpcType::var("X"), IpcTerm::var("x")),
            IpcTerm::var("y"),
        );
        let trace = reachable::<Ipc>(&t, &IpcTerm::var("y"), RuleSet::ipc_all(), 3, 100).unwrap();
        assert_eq!(trace.len(), 1);
    }
}
