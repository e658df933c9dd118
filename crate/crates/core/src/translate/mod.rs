//! The Russell–Prawitz embedding of IPC into atomic System F.
//!
//! Two term translations are provided. The optimized one builds every
//! elimination with `@`, which contracts on the fly when the head is the
//! matching introduction, and uses expanded λ-abstractions and pairs so that
//! source redexes are not contracted by the translation itself. The baseline
//! uses plain eliminators and homomorphic constructors throughout.

pub mod special;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fat::{subst_term, subst_type_in_term, subst_type_in_type, FatContext, FatTerm, FatType};
use crate::ipc::{Context, IpcTerm, IpcType};
use crate::name::{fresh, Name};
use crate::side::Side;

/// An argument of `@`: a term, a projection index or a type variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtArg {
    Term(FatTerm),
    Proj(Side),
    TypeVar(Name),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TranslationKind {
    #[default]
    Optimized,
    Baseline,
}

impl fmt::Display for TranslationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TranslationKind::Optimized => "optimized",
            TranslationKind::Baseline => "baseline",
        })
    }
}

impl FromStr for TranslationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "optimized" => Ok(TranslationKind::Optimized),
            "baseline" => Ok(TranslationKind::Baseline),
            other => Err(format!("unknown translation kind `{other}`")),
        }
    }
}

/// `A ∨̇ B = ∀X.((A⊃X)∧(B⊃X))⊃X` with `X` fresh for both sides.
pub fn or_dot(a: FatType, b: FatType) -> FatType {
    let x = fresh("X", |c| a.occurs_free(c) || b.occurs_free(c));
    let xv = || FatType::Var(x.clone());
    FatType::Forall(
        x.clone(),
        Box::new(FatType::imp(
            FatType::and(FatType::imp(a, xv()), FatType::imp(b, xv())),
            xv(),
        )),
    )
}

/// `⊥̇ = ∀X.X`.
pub fn bottom_dot() -> FatType {
    let x = fresh("X", |_| false);
    FatType::Forall(x.clone(), Box::new(FatType::Var(x)))
}

pub fn rp_type(a: &IpcType) -> FatType {
    match a {
        IpcType::Var(x) => FatType::Var(x.clone()),
        IpcType::Bottom => bottom_dot(),
        IpcType::Imp(a, b) => FatType::imp(rp_type(a), rp_type(b)),
        IpcType::And(a, b) => FatType::and(rp_type(a), rp_type(b)),
        IpcType::Or(a, b) => or_dot(rp_type(a), rp_type(b)),
    }
}

pub fn translate_context(ctx: &Context) -> FatContext {
    let mut out = FatContext::new();
    for (x, a) in ctx.iter() {
        out.declare(x.clone(), rp_type(a))
            .expect("source context has unique declarations");
    }
    out
}

/// `M@U`: contract when the head is the matching introduction, otherwise
/// build the plain eliminator.
pub fn at_apply(m: &FatTerm, u: &AtArg) -> FatTerm {
    match (m, u) {
        (FatTerm::Lam { var, body, .. }, AtArg::Term(n)) => subst_term(n, var, body),
        (FatTerm::Pair(a, b), AtArg::Proj(side)) => (**side.pick(a, b)).clone(),
        (FatTerm::TyLam(x, body), AtArg::TypeVar(y)) => subst_type_in_term(y, x, body),
        _ => plain_apply(m, u),
    }
}

pub fn plain_apply(m: &FatTerm, u: &AtArg) -> FatTerm {
    match u {
        AtArg::Term(n) => FatTerm::app(m.clone(), n.clone()),
        AtArg::Proj(side) => FatTerm::proj(*side, m.clone()),
        AtArg::TypeVar(y) => FatTerm::TyApp(Box::new(m.clone()), y.clone()),
    }
}

fn apply(kind: TranslationKind, m: &FatTerm, u: &AtArg) -> FatTerm {
    match kind {
        TranslationKind::Optimized => at_apply(m, u),
        TranslationKind::Baseline => plain_apply(m, u),
    }
}

/// `λλx.M = λw.(λx.M)w` with `w` fresh.
pub fn exp_lam(x: &Name, annot: &FatType, m: &FatTerm) -> FatTerm {
    let w = fresh("w", |c| c == x || m.occurs_free(c));
    FatTerm::lam_n(
        w.clone(),
        annot.clone(),
        FatTerm::app(
            FatTerm::lam_n(x.clone(), annot.clone(), m.clone()),
            FatTerm::Var(w),
        ),
    )
}

/// `⟨⟨M,N⟩⟩ = ⟨⟨M,N⟩.1, ⟨M,N⟩.2⟩`.
pub fn exp_pair(m: &FatTerm, n: &FatTerm) -> FatTerm {
    let p = FatTerm::pair(m.clone(), n.clone());
    FatTerm::pair(FatTerm::proj(Side::Left, p.clone()), FatTerm::proj(Side::Right, p))
}

/// `inĵ_i(M) = ΛX.λw^{(A⊃X)∧(B⊃X)}.(w.i) M`.
pub fn inj_hat(side: Side, m: &FatTerm, a: &FatType, b: &FatType) -> FatTerm {
    let x = fresh("X", |c| m.type_occurs_free(c) || a.occurs_free(c) || b.occurs_free(c));
    let w = fresh("w", |c| m.occurs_free(c));
    let xv = || FatType::Var(x.clone());
    let w_ty = FatType::and(FatType::imp(a.clone(), xv()), FatType::imp(b.clone(), xv()));
    FatTerm::TyLam(
        x.clone(),
        Box::new(FatTerm::lam_n(
            w.clone(),
            w_ty,
            FatTerm::app(FatTerm::proj(side, FatTerm::Var(w)), m.clone()),
        )),
    )
}

/// `casê(M, x^A.P, y^B.Q, C)` by recursion on `C`.
#[allow(clippy::too_many_arguments)]
pub fn case_opt(
    m: &FatTerm,
    x: &Name,
    x_ty: &FatType,
    p: &FatTerm,
    y: &Name,
    y_ty: &FatType,
    q: &FatTerm,
    c: &FatType,
    kind: TranslationKind,
) -> FatTerm {
    match c {
        FatType::Var(tv) => {
            let branches = FatTerm::pair(
                FatTerm::lam_n(x.clone(), x_ty.clone(), p.clone()),
                FatTerm::lam_n(y.clone(), y_ty.clone(), q.clone()),
            );
            let head = apply(kind, m, &AtArg::TypeVar(tv.clone()));
            apply(kind, &head, &AtArg::Term(branches))
        }
        FatType::And(c1, c2) => {
            let part = |side: Side, ci: &FatType| {
                let u = AtArg::Proj(side);
                case_opt(m, x, x_ty, &apply(kind, p, &u), y, y_ty, &apply(kind, q, &u), ci, kind)
            };
            FatTerm::pair(part(Side::Left, c1), part(Side::Right, c2))
        }
        FatType::Imp(c1, d) => {
            let z = fresh("z", |v| {
                v == x || v == y || m.occurs_free(v) || p.occurs_free(v) || q.occurs_free(v)
            });
            let u = AtArg::Term(FatTerm::Var(z.clone()));
            let body = case_opt(m, x, x_ty, &apply(kind, p, &u), y, y_ty, &apply(kind, q, &u), d, kind);
            FatTerm::lam_n(z, (**c1).clone(), body)
        }
        FatType::Forall(tv, c0) => {
            // Λ must not capture a type variable free anywhere in scope,
            // including binders outside this term, so the binder is always fresh.
            let tv_new = fresh(tv.as_str(), |_| false);
            let c0 = subst_type_in_type(&tv_new, tv, c0);
            let tv = tv_new;
            let u = AtArg::TypeVar(tv.clone());
            let body = case_opt(m, x, x_ty, &apply(kind, p, &u), y, y_ty, &apply(kind, q, &u), &c0, kind);
            FatTerm::TyLam(tv, Box::new(body))
        }
    }
}

/// `abort̂(M, A)` by recursion on `A`.
pub fn abort_opt(m: &FatTerm, a: &FatType, kind: TranslationKind) -> FatTerm {
    match a {
        FatType::Var(tv) => apply(kind, m, &AtArg::TypeVar(tv.clone())),
        FatType::And(a1, a2) => FatTerm::pair(abort_opt(m, a1, kind), abort_opt(m, a2, kind)),
        FatType::Imp(b, c) => {
            let z = fresh("z", |v| m.occurs_free(v));
            FatTerm::lam_n(z, (**b).clone(), abort_opt(m, c, kind))
        }
        FatType::Forall(tv, a0) => {
            let v = fresh(tv.as_str(), |_| false);
            let a0 = subst_type_in_type(&v, tv, a0);
            let tv = v;
            FatTerm::TyLam(tv, Box::new(abort_opt(m, &a0, kind)))
        }
    }
}

/// `⋄M` (optimized) or `⋆M` (baseline).
pub fn translate(t: &IpcTerm, kind: TranslationKind) -> FatTerm {
    let opt = kind == TranslationKind::Optimized;
    match t {
        IpcTerm::Var(x) => FatTerm::Var(x.clone()),
        IpcTerm::Lam { var, ty, body } => {
            let a = rp_type(ty);
            let m = translate(body, kind);
            if opt {
                exp_lam(var, &a, &m)
            } else {
                FatTerm::lam_n(var.clone(), a, m)
            }
        }
        IpcTerm::Pair(a, b) => {
            let (a, b) = (translate(a, kind), translate(b, kind));
            if opt {
                exp_pair(&a, &b)
            } else {
                FatTerm::pair(a, b)
            }
        }
        IpcTerm::Inj {
            side,
            arg,
            left,
            right,
        } => inj_hat(*side, &translate(arg, kind), &rp_type(left), &rp_type(right)),
        IpcTerm::App(m, n) => apply(
            kind,
            &translate(m, kind),
            &AtArg::Term(translate(n, kind)),
        ),
        IpcTerm::Proj(side, m) => apply(kind, &translate(m, kind), &AtArg::Proj(*side)),
        IpcTerm::Case {
            scrut,
            left_var,
            left_ty,
            left,
            right_var,
            right_ty,
            right,
            ty,
        } => case_opt(
            &translate(scrut, kind),
            left_var,
            &rp_type(left_ty),
            &translate(left, kind),
            right_var,
            &rp_type(right_ty),
            &translate(right, kind),
            &rp_type(ty),
            kind,
        ),
        IpcTerm::Abort { arg, ty } => abort_opt(&translate(arg, kind), &rp_type(ty), kind),
    }
}
