use super::{rename, subst, IpcTerm, IpcType};
use crate::name::{fresh, Name};
use crate::rule::{Path, RewriteError, RuleId, RuleSet};
use crate::side::Side;

/// Contract `t` at the root by `rule`.
pub fn root_rewrite(rule: RuleId, t: &IpcTerm) -> Result<IpcTerm, RewriteError> {
    if !rule.is_ipc() {
        return Err(RewriteError::ForeignRule(rule));
    }
    rewrite(rule, t).ok_or(RewriteError::NotARedex(rule))
}

pub fn is_redex(rule: RuleId, t: &IpcTerm) -> bool {
    rule.is_ipc() && rewrite(rule, t).is_some()
}

fn rewrite(rule: RuleId, t: &IpcTerm) -> Option<IpcTerm> {
    use IpcTerm::*;
    match (rule, t) {
        (RuleId::BetaImp, App(f, n)) => match &**f {
            Lam { var, body, .. } => Some(subst(n, var, body)),
            _ => None,
        },
        (RuleId::BetaAnd, Proj(side, m)) => match &**m {
            Pair(a, b) => Some((**side.pick(a, b)).clone()),
            _ => None,
        },
        (
            RuleId::BetaOr,
            Case {
                scrut,
                left_var,
                left,
                right_var,
                right,
                ..
            },
        ) => match &**scrut {
            Inj { side, arg, .. } => {
                let (x, p) = side.pick((left_var, left), (right_var, right));
                Some(subst(arg, x, p))
            }
            _ => None,
        },
        (RuleId::EtaImp, Lam { var, body, .. }) => match &**body {
            App(m, a) if matches!(&**a, Var(v) if v == var) && !m.occurs_free(var) => {
                Some((**m).clone())
            }
            _ => None,
        },
        (RuleId::EtaAnd, Pair(a, b)) => match (&**a, &**b) {
            (Proj(Side::Left, m), Proj(Side::Right, n)) if m == n => Some((**m).clone()),
            _ => None,
        },
        (
            RuleId::EtaOr,
            Case {
                scrut,
                left_var,
                left_ty,
                left,
                right_var,
                right_ty,
                right,
                ty,
            },
        ) => {
            let sum = IpcType::or(left_ty.clone(), right_ty.clone());
            let injects = |branch: &IpcTerm, side: Side, x: &Name| match branch {
                Inj {
                    side: s,
                    arg,
                    left: l,
                    right: r,
                } => {
                    *s == side
                        && l == left_ty
                        && r == right_ty
                        && matches!(&**arg, Var(v) if v == x)
                }
                _ => false,
            };
            (*ty == sum && injects(left, Side::Left, left_var) && injects(right, Side::Right, right_var))
                .then(|| (**scrut).clone())
        }
        (RuleId::PiImp, App(c, n)) => match &**c {
            Case {
                ty: IpcType::Imp(_, d),
                ..
            } => Some(push_into_case(c, d, |p| IpcTerm::app(p, (**n).clone()), &n.free_vars())),
            _ => None,
        },
        (RuleId::PiAnd, Proj(side, c)) => match &**c {
            Case {
                ty: IpcType::And(c1, c2),
                ..
            } => {
                let ci = side.pick(c1, c2);
                Some(push_into_case(c, ci, |p| IpcTerm::proj(*side, p), &Default::default()))
            }
            _ => None,
        },
        (RuleId::PiBot, Abort { arg, ty }) => match &**arg {
            Case {
                ty: IpcType::Bottom,
                ..
            } => Some(push_into_case(
                arg,
                ty,
                |p| IpcTerm::abort(p, ty.clone()),
                &Default::default(),
            )),
            _ => None,
        },
        (
            RuleId::PiOr,
            Case {
                scrut,
                left_var,
                left_ty,
                left,
                right_var,
                right_ty,
                right,
                ty,
            },
        ) => match &**scrut {
            Case {
                ty: IpcType::Or(..),
                ..
            } => {
                let mut outer_fv: std::collections::BTreeSet<Name> = left.free_vars();
                outer_fv.remove(left_var);
                let mut rfv = right.free_vars();
                rfv.remove(right_var);
                outer_fv.extend(rfv);
                let wrap = |p: IpcTerm| IpcTerm::Case {
                    scrut: Box::new(p),
                    left_var: left_var.clone(),
                    left_ty: left_ty.clone(),
                    left: left.clone(),
                    right_var: right_var.clone(),
                    right_ty: right_ty.clone(),
                    right: right.clone(),
                    ty: ty.clone(),
                };
                Some(push_into_case(scrut, ty, wrap, &outer_fv))
            }
            _ => None,
        },
        (RuleId::VarpiImp, App(a, _)) => match &**a {
            Abort {
                arg,
                ty: IpcType::Imp(_, d),
            } => Some(IpcTerm::abort((**arg).clone(), (**d).clone())),
            _ => None,
        },
        (RuleId::VarpiAnd, Proj(side, a)) => match &**a {
            Abort {
                arg,
                ty: IpcType::And(c1, c2),
            } => Some(IpcTerm::abort((**arg).clone(), (**side.pick(c1, c2)).clone())),
            _ => None,
        },
        (RuleId::VarpiOr, Case { scrut, ty, .. }) => match &**scrut {
            Abort {
                arg,
                ty: IpcType::Or(..),
            } => Some(IpcTerm::abort((**arg).clone(), ty.clone())),
            _ => None,
        },
        (RuleId::VarpiBot, Abort { arg, ty }) => match &**arg {
            Abort {
                arg: inner,
                ty: IpcType::Bottom,
            } => Some(IpcTerm::abort((**inner).clone(), ty.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// `case M x.E[P] y.E[Q] : result` from `case M x.P y.Q`, renaming the case
/// binders away from `avoid` (the free variables of the context `E`).
fn push_into_case(
    case: &IpcTerm,
    result: &IpcType,
    wrap: impl Fn(IpcTerm) -> IpcTerm,
    avoid: &std::collections::BTreeSet<Name>,
) -> IpcTerm {
    let IpcTerm::Case {
        scrut,
        left_var,
        left_ty,
        left,
        right_var,
        right_ty,
        right,
        ..
    } = case
    else {
        unreachable!("push_into_case on a non-case term")
    };
    let apart = |x: &Name, body: &IpcTerm| -> (Name, IpcTerm) {
        if avoid.contains(x) {
            let v = fresh(x.as_str(), |c| avoid.contains(c) || body.occurs_free(c));
            (v.clone(), rename(body, x, &v))
        } else {
            (x.clone(), body.clone())
        }
    };
    let (lv, l) = apart(left_var, left);
    let (rv, r) = apart(right_var, right);
    IpcTerm::Case {
        scrut: scrut.clone(),
        left_var: lv,
        left_ty: left_ty.clone(),
        left: Box::new(wrap(l)),
        right_var: rv,
        right_ty: right_ty.clone(),
        right: Box::new(wrap(r)),
        ty: result.clone(),
    }
}

/// Every position where a rule of `rules` fires, outside-in and
/// left-to-right, rules in declaration order at each position.
pub fn redexes(t: &IpcTerm, rules: RuleSet) -> Vec<(Path, RuleId)> {
    let mut out = Vec::new();
    collect(t, rules, &mut Vec::new(), &mut out);
    out
}

fn collect(t: &IpcTerm, rules: RuleSet, path: &mut Vec<usize>, out: &mut Vec<(Path, RuleId)>) {
    for rule in rules.iter() {
        if is_redex(rule, t) {
            out.push((Path(path.clone()), rule));
        }
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect(c, rules, path, out);
        path.pop();
    }
}

pub fn step_at(t: &IpcTerm, position: &Path, rule: RuleId) -> Result<IpcTerm, RewriteError> {
    let sub = t
        .subterm(position)
        .ok_or_else(|| RewriteError::InvalidPosition(position.clone()))?;
    let contractum = root_rewrite(rule, sub)?;
    Ok(t.replace_at(position, contractum).expect("position checked above"))
}

/// Whether `position` is reached from the root only through the head
/// reduction contexts: λ body, function of an application, either pair
/// component, under an injection or abort, and a case scrutinee.
pub fn is_head_step(t: &IpcTerm, position: &Path, rule: RuleId) -> bool {
    if !rule.is_ipc_beta() {
        return false;
    }
    let mut cur = t;
    for &i in &position.0 {
        let allowed = match cur {
            IpcTerm::Lam { .. } | IpcTerm::Inj { .. } | IpcTerm::Abort { .. } => i == 0,
            IpcTerm::App(..) => i == 0,
            IpcTerm::Pair(..) => i <= 1,
            IpcTerm::Case { .. } => i == 0,
            IpcTerm::Var(_) | IpcTerm::Proj(..) => false,
        };
        if !allowed {
            return false;
        }
        cur = cur.children()[i];
    }
    true
}
