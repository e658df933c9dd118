use super::{subst_term, subst_type_in_term, FatTerm};
use crate::rule::{Path, RewriteError, RuleId, RuleSet};
use crate::side::Side;

/// Step bound used when the caller does not supply one.
pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("normalization ran out of fuel after {steps} steps")]
pub struct FuelExhausted {
    pub steps: usize,
}

pub fn root_rewrite_fat(rule: RuleId, t: &FatTerm) -> Result<FatTerm, RewriteError> {
    if !rule.is_fat() {
        return Err(RewriteError::ForeignRule(rule));
    }
    rewrite(rule, t).ok_or(RewriteError::NotARedex(rule))
}

pub fn is_redex_fat(rule: RuleId, t: &FatTerm) -> bool {
    rule.is_fat() && rewrite(rule, t).is_some()
}

fn rewrite(rule: RuleId, t: &FatTerm) -> Option<FatTerm> {
    use FatTerm::*;
    match (rule, t) {
        (RuleId::BetaImpF, App(f, n)) => match &**f {
            Lam { var, body, .. } => Some(subst_term(n, var, body)),
            _ => None,
        },
        (RuleId::BetaAndF, Proj(side, m)) => match &**m {
            Pair(a, b) => Some((**side.pick(a, b)).clone()),
            _ => None,
        },
        (RuleId::BetaAll, TyApp(m, y)) => match &**m {
            TyLam(x, body) => Some(subst_type_in_term(y, x, body)),
            _ => None,
        },
        (RuleId::EtaImpF, Lam { var, body, .. }) => match &**body {
            App(m, a) if matches!(&**a, Var(v) if v == var) && !m.occurs_free(var) => {
                Some((**m).clone())
            }
            _ => None,
        },
        (RuleId::EtaAndF, Pair(a, b)) => match (&**a, &**b) {
            (Proj(Side::Left, m), Proj(Side::Right, n)) if m == n => Some((**m).clone()),
            _ => None,
        },
        (RuleId::EtaAll, TyLam(x, body)) => match &**body {
            TyApp(m, y) if y == x && !m.type_occurs_free(x) => Some((**m).clone()),
            _ => None,
        },
        _ => None,
    }
}

pub fn redexes_fat(t: &FatTerm, rules: RuleSet) -> Vec<(Path, RuleId)> {
    let mut out = Vec::new();
    collect(t, rules, &mut Vec::new(), &mut out);
    out
}

fn collect(t: &FatTerm, rules: RuleSet, path: &mut Vec<usize>, out: &mut Vec<(Path, RuleId)>) {
    for rule in rules.iter() {
        if is_redex_fat(rule, t) {
            out.push((Path(path.clone()), rule));
        }
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect(c, rules, path, out);
        path.pop();
    }
}

fn first_redex(t: &FatTerm, rules: RuleSet, path: &mut Vec<usize>) -> Option<(Path, RuleId)> {
    if let Some(rule) = rules.iter().find(|r| is_redex_fat(*r, t)) {
        return Some((Path(path.clone()), rule));
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        let found = first_redex(c, rules, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn step_at_fat(t: &FatTerm, position: &Path, rule: RuleId) -> Result<FatTerm, RewriteError> {
    let sub = t
        .subterm(position)
        .ok_or_else(|| RewriteError::InvalidPosition(position.clone()))?;
    let contractum = root_rewrite_fat(rule, sub)?;
    Ok(t.replace_at(position, contractum).expect("position checked above"))
}

/// Leftmost-outermost normalization. Returns the normal form and the
/// number of steps taken.
pub fn normalize_fat(
    t: &FatTerm,
    rules: RuleSet,
    fuel: usize,
) -> Result<(FatTerm, usize), FuelExhausted> {
    let mut cur = t.clone();
    for steps in 0..=fuel {
        match first_redex(&cur, rules, &mut Vec::new()) {
            None => return Ok((cur, steps)),
            Some(_) if steps == fuel => break,
            Some((pos, rule)) => {
                cur = step_at_fat(&cur, &pos, rule).expect("enumerated redex applies");
            }
        }
    }
    Err(FuelExhausted { steps: fuel })
}
