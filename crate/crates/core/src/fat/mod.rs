//! Atomic System F: second-order λ-calculus whose type applications take
//! only type variables. Equality on both types and terms is α-equivalence.

mod reduce;
mod typing;

pub use reduce::{is_redex_fat, normalize_fat, redexes_fat, root_rewrite_fat, step_at_fat, FuelExhausted, DEFAULT_FUEL};
pub use typing::{typecheck_fat, FatContext, FatTypeError};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::name::{fresh, Name};
use crate::rule::Path;
use crate::side::Side;

#[derive(Clone, Debug)]
pub enum FatType {
    Var(Name),
    Imp(Box<FatType>, Box<FatType>),
    And(Box<FatType>, Box<FatType>),
    Forall(Name, Box<FatType>),
}

impl FatType {
    pub fn var(name: &str) -> FatType {
        FatType::Var(Name::new(name))
    }

    pub fn imp(a: FatType, b: FatType) -> FatType {
        FatType::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: FatType, b: FatType) -> FatType {
        FatType::And(Box::new(a), Box::new(b))
    }

    pub fn forall(x: &str, body: FatType) -> FatType {
        FatType::Forall(Name::new(x), Box::new(body))
    }

    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            FatType::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            FatType::Imp(a, b) | FatType::And(a, b) => {
                a.collect_ftv(bound, out);
                b.collect_ftv(bound, out);
            }
            FatType::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_ftv(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            FatType::Var(y) => y == x,
            FatType::Imp(a, b) | FatType::And(a, b) => a.occurs_free(x) || b.occurs_free(x),
            FatType::Forall(y, a) => y != x && a.occurs_free(x),
        }
    }

    /// Every type variable name occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            FatType::Var(x) => {
                out.insert(x.clone());
            }
            FatType::Imp(a, b) | FatType::And(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            FatType::Forall(x, a) => {
                out.insert(x.clone());
                a.all_names(out);
            }
        }
    }

    fn write_key(&self, env: &mut Vec<Name>, out: &mut String) {
        match self {
            FatType::Var(x) => match env.iter().rposition(|y| y == x) {
                Some(i) => {
                    let _ = write!(out, "#{i}");
                }
                None => out.push_str(x.as_str()),
            },
            FatType::Imp(a, b) => {
                out.push_str("(>");
                a.write_key(env, out);
                out.push(' ');
                b.write_key(env, out);
                out.push(')');
            }
            FatType::And(a, b) => {
                out.push_str("(&");
                a.write_key(env, out);
                out.push(' ');
                b.write_key(env, out);
                out.push(')');
            }
            FatType::Forall(x, a) => {
                out.push_str("(A ");
                env.push(x.clone());
                a.write_key(env, out);
                env.pop();
                out.push(')');
            }
        }
    }
}

impl PartialEq for FatType {
    fn eq(&self, other: &FatType) -> bool {
        type_alpha_eq(self, other, &mut Vec::new())
    }
}

impl Eq for FatType {}

fn lookup_pair(env: &[(Name, Name)], x: &Name, y: &Name) -> bool {
    for (l, r) in env.iter().rev() {
        if l == x || r == y {
            return l == x && r == y;
        }
    }
    x == y
}

fn type_alpha_eq(a: &FatType, b: &FatType, env: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (FatType::Var(x), FatType::Var(y)) => lookup_pair(env, x, y),
        (FatType::Imp(a1, a2), FatType::Imp(b1, b2)) | (FatType::And(a1, a2), FatType::And(b1, b2)) => {
            type_alpha_eq(a1, b1, env) && type_alpha_eq(a2, b2, env)
        }
        (FatType::Forall(x, a), FatType::Forall(y, b)) => {
            env.push((x.clone(), y.clone()));
            let r = type_alpha_eq(a, b, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// `[y/x]a`, capture-avoiding.
pub fn subst_type_in_type(y: &Name, x: &Name, a: &FatType) -> FatType {
    if !a.occurs_free(x) {
        return a.clone();
    }
    match a {
        FatType::Var(_) => FatType::Var(y.clone()),
        FatType::Imp(l, r) => FatType::imp(subst_type_in_type(y, x, l), subst_type_in_type(y, x, r)),
        FatType::And(l, r) => FatType::and(subst_type_in_type(y, x, l), subst_type_in_type(y, x, r)),
        FatType::Forall(z, body) => {
            if z == y {
                let z2 = fresh(z.as_str(), |c| c == x || c == y || body.occurs_free(c));
                let body = subst_type_in_type(&z2, z, body);
                FatType::Forall(z2, Box::new(subst_type_in_type(y, x, &body)))
            } else {
                FatType::Forall(z.clone(), Box::new(subst_type_in_type(y, x, body)))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum FatTerm {
    Var(Name),
    Lam {
        var: Name,
        ty: FatType,
        body: Box<FatTerm>,
    },
    App(Box<FatTerm>, Box<FatTerm>),
    Pair(Box<FatTerm>, Box<FatTerm>),
    Proj(Side, Box<FatTerm>),
    TyLam(Name, Box<FatTerm>),
    /// Instantiation with a type variable; compound arguments are not representable.
    TyApp(Box<FatTerm>, Name),
}

impl FatTerm {
    pub fn var(name: &str) -> FatTerm {
        FatTerm::Var(Name::new(name))
    }

    pub fn lam(var: &str, ty: FatType, body: FatTerm) -> FatTerm {
        FatTerm::Lam {
            var: Name::new(var),
            ty,
            body: Box::new(body),
        }
    }

    pub fn lam_n(var: Name, ty: FatType, body: FatTerm) -> FatTerm {
        FatTerm::Lam {
            var,
            ty,
            body: Box::new(body),
        }
    }

    pub fn app(f: FatTerm, a: FatTerm) -> FatTerm {
        FatTerm::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: FatTerm, b: FatTerm) -> FatTerm {
        FatTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(side: Side, m: FatTerm) -> FatTerm {
        FatTerm::Proj(side, Box::new(m))
    }

    pub fn ty_lam(x: &str, body: FatTerm) -> FatTerm {
        FatTerm::TyLam(Name::new(x), Box::new(body))
    }

    pub fn ty_app(m: FatTerm, y: &str) -> FatTerm {
        FatTerm::TyApp(Box::new(m), Name::new(y))
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&FatTerm> {
        match self {
            FatTerm::Var(_) => vec![],
            FatTerm::Lam { body, .. } => vec![body],
            FatTerm::App(a, b) | FatTerm::Pair(a, b) => vec![a, b],
            FatTerm::Proj(_, m) | FatTerm::TyLam(_, m) | FatTerm::TyApp(m, _) => vec![m],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut FatTerm> {
        match (self, i) {
            (FatTerm::Lam { body, .. }, 0) => Some(body),
            (FatTerm::App(a, _) | FatTerm::Pair(a, _), 0) => Some(a),
            (FatTerm::App(_, b) | FatTerm::Pair(_, b), 1) => Some(b),
            (FatTerm::Proj(_, m) | FatTerm::TyLam(_, m) | FatTerm::TyApp(m, _), 0) => Some(m),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &Path) -> Option<&FatTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    pub fn replace_at(&self, path: &Path, new: FatTerm) -> Option<FatTerm> {
        let mut out = self.clone();
        let mut slot = &mut out;
        for &i in &path.0 {
            slot = slot.child_mut(i)?;
        }
        *slot = new;
        Some(out)
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            FatTerm::Var(y) => y == x,
            FatTerm::Lam { var, body, .. } => var != x && body.occurs_free(x),
            FatTerm::App(a, b) | FatTerm::Pair(a, b) => a.occurs_free(x) || b.occurs_free(x),
            FatTerm::Proj(_, m) | FatTerm::TyLam(_, m) | FatTerm::TyApp(m, _) => m.occurs_free(x),
        }
    }

    pub fn free_term_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_fv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_fv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            FatTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            FatTerm::Lam { var, body, .. } => {
                bound.push(var.clone());
                body.collect_fv(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_fv(bound, out);
                }
            }
        }
    }

    pub fn type_occurs_free(&self, x: &Name) -> bool {
        match self {
            FatTerm::Var(_) => false,
            FatTerm::Lam { ty, body, .. } => ty.occurs_free(x) || body.type_occurs_free(x),
            FatTerm::App(a, b) | FatTerm::Pair(a, b) => {
                a.type_occurs_free(x) || b.type_occurs_free(x)
            }
            FatTerm::Proj(_, m) => m.type_occurs_free(x),
            FatTerm::TyLam(y, m) => y != x && m.type_occurs_free(x),
            FatTerm::TyApp(m, y) => y == x || m.type_occurs_free(x),
        }
    }

    pub fn free_type_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_ftv(&mut Vec::new(), &mut out);
        out
    }

    fn collect_ftv(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            FatTerm::Var(_) => {}
            FatTerm::Lam { ty, body, .. } => {
                ty.collect_ftv(bound, out);
                body.collect_ftv(bound, out);
            }
            FatTerm::App(a, b) | FatTerm::Pair(a, b) => {
                a.collect_ftv(bound, out);
                b.collect_ftv(bound, out);
            }
            FatTerm::Proj(_, m) => m.collect_ftv(bound, out),
            FatTerm::TyLam(x, m) => {
                bound.push(x.clone());
                m.collect_ftv(bound, out);
                bound.pop();
            }
            FatTerm::TyApp(m, y) => {
                m.collect_ftv(bound, out);
                if !bound.contains(y) {
                    out.insert(y.clone());
                }
            }
        }
    }

    /// Every term and type variable name occurring anywhere.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            FatTerm::Var(x) => {
                out.insert(x.clone());
            }
            FatTerm::Lam { var, ty, .. } => {
                out.insert(var.clone());
                ty.all_names(out);
            }
            FatTerm::TyLam(x, _) | FatTerm::TyApp(_, x) => {
                out.insert(x.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.collect_names(out);
        }
    }

    /// A string identifying the α-equivalence class: bound names are
    /// replaced by binder depth indices.
    pub fn alpha_key(&self) -> String {
        let mut out = String::new();
        self.write_key(&mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    fn write_key(&self, env: &mut Vec<Name>, tenv: &mut Vec<Name>, out: &mut String) {
        match self {
            FatTerm::Var(x) => match env.iter().rposition(|y| y == x) {
                Some(i) => {
                    let _ = write!(out, "#{i}");
                }
                None => out.push_str(x.as_str()),
            },
            FatTerm::Lam { var, ty, body } => {
                out.push_str("(L ");
                ty.write_key(tenv, out);
                out.push(' ');
                env.push(var.clone());
                body.write_key(env, tenv, out);
                env.pop();
                out.push(')');
            }
            FatTerm::App(a, b) => {
                out.push_str("(@ ");
                a.write_key(env, tenv, out);
                out.push(' ');
                b.write_key(env, tenv, out);
                out.push(')');
            }
            FatTerm::Pair(a, b) => {
                out.push_str("(, ");
                a.write_key(env, tenv, out);
                out.push(' ');
                b.write_key(env, tenv, out);
                out.push(')');
            }
            FatTerm::Proj(side, m) => {
                let _ = write!(out, "(.{} ", side.index());
                m.write_key(env, tenv, out);
                out.push(')');
            }
            FatTerm::TyLam(x, m) => {
                out.push_str("(T ");
                tenv.push(x.clone());
                m.write_key(env, tenv, out);
                tenv.pop();
                out.push(')');
            }
            FatTerm::TyApp(m, y) => {
                out.push_str("([] ");
                m.write_key(env, tenv, out);
                out.push(' ');
                FatType::Var(y.clone()).write_key(tenv, out);
                out.push(')');
            }
        }
    }
}

impl PartialEq for FatTerm {
    fn eq(&self, other: &FatTerm) -> bool {
        term_alpha_eq(self, other, &mut Vec::new(), &mut Vec::new())
    }
}

impl Eq for FatTerm {}

fn term_alpha_eq(
    a: &FatTerm,
    b: &FatTerm,
    env: &mut Vec<(Name, Name)>,
    tenv: &mut Vec<(Name, Name)>,
) -> bool {
    use FatTerm::*;
    match (a, b) {
        (Var(x), Var(y)) => lookup_pair(env, x, y),
        (
            Lam {
                var: x,
                ty: s,
                body: m,
            },
            Lam {
                var: y,
                ty: t,
                body: n,
            },
        ) => {
            if !type_alpha_eq(s, t, tenv) {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = term_alpha_eq(m, n, env, tenv);
            env.pop();
            r
        }
        (App(a1, a2), App(b1, b2)) | (Pair(a1, a2), Pair(b1, b2)) => {
            term_alpha_eq(a1, b1, env, tenv) && term_alpha_eq(a2, b2, env, tenv)
        }
        (Proj(i, m), Proj(j, n)) => i == j && term_alpha_eq(m, n, env, tenv),
        (TyLam(x, m), TyLam(y, n)) => {
            tenv.push((x.clone(), y.clone()));
            let r = term_alpha_eq(m, n, env, tenv);
            tenv.pop();
            r
        }
        (TyApp(m, x), TyApp(n, y)) => lookup_pair(tenv, x, y) && term_alpha_eq(m, n, env, tenv),
        _ => false,
    }
}

/// `[n/x]m`, capture-avoiding for both term and type binders.
pub fn subst_term(n: &FatTerm, x: &Name, m: &FatTerm) -> FatTerm {
    if !m.occurs_free(x) {
        return m.clone();
    }
    let fv = n.free_term_vars();
    let ftv = n.free_type_vars();
    TermSubst {
        n,
        x,
        fv: &fv,
        ftv: &ftv,
    }
    .go(m)
}

struct TermSubst<'a> {
    n: &'a FatTerm,
    x: &'a Name,
    fv: &'a BTreeSet<Name>,
    ftv: &'a BTreeSet<Name>,
}

impl TermSubst<'_> {
    fn go(&self, m: &FatTerm) -> FatTerm {
        if !m.occurs_free(self.x) {
            return m.clone();
        }
        match m {
            FatTerm::Var(_) => self.n.clone(),
            FatTerm::Lam { var, ty, body } => {
                if self.fv.contains(var) {
                    let v = fresh(var.as_str(), |c| {
                        self.fv.contains(c) || c == self.x || body.occurs_free(c)
                    });
                    let body = subst_term(&FatTerm::Var(v.clone()), var, body);
                    FatTerm::lam_n(v, ty.clone(), self.go(&body))
                } else {
                    FatTerm::lam_n(var.clone(), ty.clone(), self.go(body))
                }
            }
            FatTerm::App(a, b) => FatTerm::app(self.go(a), self.go(b)),
            FatTerm::Pair(a, b) => FatTerm::pair(self.go(a), self.go(b)),
            FatTerm::Proj(i, a) => FatTerm::proj(*i, self.go(a)),
            FatTerm::TyLam(tv, body) => {
                if self.ftv.contains(tv) {
                    let v = fresh(tv.as_str(), |c| {
                        self.ftv.contains(c) || body.type_occurs_free(c)
                    });
                    let body = subst_type_in_term(&v, tv, body);
                    FatTerm::TyLam(v, Box::new(self.go(&body)))
                } else {
                    FatTerm::TyLam(tv.clone(), Box::new(self.go(body)))
                }
            }
            FatTerm::TyApp(a, y) => FatTerm::TyApp(Box::new(self.go(a)), y.clone()),
        }
    }
}

/// `[y/x]m` on the type variables of a term, capture-avoiding.
pub fn subst_type_in_term(y: &Name, x: &Name, m: &FatTerm) -> FatTerm {
    if !m.type_occurs_free(x) {
        return m.clone();
    }
    match m {
        FatTerm::Var(_) => m.clone(),
        FatTerm::Lam { var, ty, body } => FatTerm::lam_n(
            var.clone(),
            subst_type_in_type(y, x, ty),
            subst_type_in_term(y, x, body),
        ),
        FatTerm::App(a, b) => FatTerm::app(subst_type_in_term(y, x, a), subst_type_in_term(y, x, b)),
        FatTerm::Pair(a, b) => {
            FatTerm::pair(subst_type_in_term(y, x, a), subst_type_in_term(y, x, b))
        }
        FatTerm::Proj(i, a) => FatTerm::proj(*i, subst_type_in_term(y, x, a)),
        FatTerm::TyLam(z, body) => {
            if z == y {
                let z2 = fresh(z.as_str(), |c| c == x || c == y || body.type_occurs_free(c));
                let body = subst_type_in_term(&z2, z, body);
                FatTerm::TyLam(z2, Box::new(subst_type_in_term(y, x, &body)))
            } else {
                FatTerm::TyLam(z.clone(), Box::new(subst_type_in_term(y, x, body)))
            }
        }
        FatTerm::TyApp(a, z) => FatTerm::TyApp(
            Box::new(subst_type_in_term(y, x, a)),
            if z == x { y.clone() } else { z.clone() },
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    #[test]
    fn free_variable_examples() {
        let poly_id = FatTerm::ty_lam("X", FatTerm::lam("x", FatType::var("X"), FatTerm::var("x")));
        assert!(poly_id.free_term_vars().is_empty());
        assert!(poly_id.free_type_vars().is_empty());

        let inst = FatTerm::ty_app(FatTerm::var("f"), "Y");
        assert_eq!(inst.free_type_vars(), BTreeSet::from([n("Y")]));

        let k = FatTerm::lam("x", FatType::var("X"), FatTerm::var("y"));
        assert_eq!(k.free_term_vars(), BTreeSet::from([n("y")]));
        assert_eq!(k.free_type_vars(), BTreeSet::from([n("X")]));
    }

    #[test]
    fn type_substitution_examples() {
        let xx = FatType::imp(FatType::var("X"), FatType::var("X"));
        assert_eq!(
            subst_type_in_type(&n("Y"), &n("X"), &xx),
            FatType::imp(FatType::var("Y"), FatType::var("Y"))
        );
        let shadow = FatType::forall("X", FatType::var("X"));
        assert_eq!(subst_type_in_type(&n("Y"), &n("X"), &shadow), shadow);
        let inner = FatType::forall("Z", FatType::imp(FatType::var("X"), FatType::var("Z")));
        assert_eq!(
            subst_type_in_type(&n("Y"), &n("X"), &inner),
            FatType::forall("Z", FatType::imp(FatType::var("Y"), FatType::var("Z")))
        );
    }

    #[test]
    fn type_substitution_avoids_capture() {
        // [Y/X](∀Y. X ⊃ Y) must not become ∀Y. Y ⊃ Y
        let a = FatType::forall("Y", FatType::imp(FatType::var("X"), FatType::var("Y")));
        let out = subst_type_in_type(&n("Y"), &n("X"), &a);
        assert_ne!(out, FatType::forall("Y", FatType::imp(FatType::var("Y"), FatType::var("Y"))));
        assert_eq!(out.free_type_vars(), BTreeSet::from([n("Y")]));
    }

    #[test]
    fn term_substitution_renames_type_binder() {
        // [λu:Y.u / x](ΛY. x) must rename Y
        let arg = FatTerm::lam("u", FatType::var("Y"), FatTerm::var("u"));
        let m = FatTerm::ty_lam("Y", FatTerm::var("x"));
        let out = subst_term(&arg, &n("x"), &m);
        assert_eq!(out.free_type_vars(), BTreeSet::from([n("Y")]));
    }

    #[test]
    fn alpha_equality_over_both_binders() {
        let a = FatTerm::ty_lam("X", FatTerm::lam("x", FatType::var("X"), FatTerm::var("x")));
        let b = FatTerm::ty_lam("Z", FatTerm::lam("w", FatType::var("Z"), FatTerm::var("w")));
        let c = FatTerm::ty_lam("Z", FatTerm::lam("w", FatType::var("X"), FatTerm::var("w")));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.alpha_key(), b.alpha_key());
        assert_ne!(a.alpha_key(), c.alpha_key());
    }
}
