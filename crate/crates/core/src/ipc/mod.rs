//! Full intuitionistic propositional calculus as a typed λ-calculus.
//!
//! Terms carry the annotations needed for syntax-directed checking: the λ
//! binder, both summands of an injection, the case binders and result, and
//! the result of `abort`. Equality on terms is α-equivalence.

mod reduce;
mod typing;

pub use reduce::{is_head_step, is_redex, redexes, root_rewrite, step_at};
pub use typing::{typecheck, Context, IpcTypeError};

use std::collections::BTreeSet;

use crate::name::{fresh, Name};
use crate::rule::Path;
use crate::side::Side;

/// Formulas: `X | ⊥ | A⊃B | A∧B | A∨B`. No binders, so equality is syntactic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IpcType {
    Var(Name),
    Bottom,
    Imp(Box<IpcType>, Box<IpcType>),
    And(Box<IpcType>, Box<IpcType>),
    Or(Box<IpcType>, Box<IpcType>),
}

impl IpcType {
    pub fn var(name: &str) -> IpcType {
        IpcType::Var(Name::new(name))
    }

    pub fn imp(a: IpcType, b: IpcType) -> IpcType {
        IpcType::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: IpcType, b: IpcType) -> IpcType {
        IpcType::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: IpcType, b: IpcType) -> IpcType {
        IpcType::Or(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            IpcType::Var(_) | IpcType::Bottom => 1,
            IpcType::Imp(a, b) | IpcType::And(a, b) | IpcType::Or(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum IpcTerm {
    Var(Name),
    Lam {
        var: Name,
        ty: IpcType,
        body: Box<IpcTerm>,
    },
    App(Box<IpcTerm>, Box<IpcTerm>),
    Pair(Box<IpcTerm>, Box<IpcTerm>),
    Proj(Side, Box<IpcTerm>),
    Inj {
        side: Side,
        arg: Box<IpcTerm>,
        left: IpcType,
        right: IpcType,
    },
    Case {
        scrut: Box<IpcTerm>,
        left_var: Name,
        left_ty: IpcType,
        left: Box<IpcTerm>,
        right_var: Name,
        right_ty: IpcType,
        right: Box<IpcTerm>,
        ty: IpcType,
    },
    Abort {
        arg: Box<IpcTerm>,
        ty: IpcType,
    },
}

impl IpcTerm {
    pub fn var(name: &str) -> IpcTerm {
        IpcTerm::Var(Name::new(name))
    }

    pub fn lam(var: &str, ty: IpcType, body: IpcTerm) -> IpcTerm {
        IpcTerm::Lam {
            var: Name::new(var),
            ty,
            body: Box::new(body),
        }
    }

    pub fn app(f: IpcTerm, a: IpcTerm) -> IpcTerm {
        IpcTerm::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: IpcTerm, b: IpcTerm) -> IpcTerm {
        IpcTerm::Pair(Box::new(a), Box::new(b))
    }

    pub fn proj(side: Side, m: IpcTerm) -> IpcTerm {
        IpcTerm::Proj(side, Box::new(m))
    }

    pub fn inj(side: Side, arg: IpcTerm, left: IpcType, right: IpcType) -> IpcTerm {
        IpcTerm::Inj {
            side,
            arg: Box::new(arg),
            left,
            right,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn case(
        scrut: IpcTerm,
        left_var: &str,
        left_ty: IpcType,
        left: IpcTerm,
        right_var: &str,
        right_ty: IpcType,
        right: IpcTerm,
        ty: IpcType,
    ) -> IpcTerm {
        IpcTerm::Case {
            scrut: Box::new(scrut),
            left_var: Name::new(left_var),
            left_ty,
            left: Box::new(left),
            right_var: Name::new(right_var),
            right_ty,
            right: Box::new(right),
            ty,
        }
    }

    pub fn abort(arg: IpcTerm, ty: IpcType) -> IpcTerm {
        IpcTerm::Abort {
            arg: Box::new(arg),
            ty,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Immediate subterms in position order.
    pub fn children(&self) -> Vec<&IpcTerm> {
        match self {
            IpcTerm::Var(_) => vec![],
            IpcTerm::Lam { body, .. } => vec![body],
            IpcTerm::App(a, b) | IpcTerm::Pair(a, b) => vec![a, b],
            IpcTerm::Proj(_, m) => vec![m],
            IpcTerm::Inj { arg, .. } | IpcTerm::Abort { arg, .. } => vec![arg],
            IpcTerm::Case {
                scrut, left, right, ..
            } => vec![scrut, left, right],
        }
    }

    fn child_mut(&mut self, i: usize) -> Option<&mut IpcTerm> {
        match (self, i) {
            (IpcTerm::Lam { body, .. }, 0) => Some(body),
            (IpcTerm::App(a, _) | IpcTerm::Pair(a, _), 0) => Some(a),
            (IpcTerm::App(_, b) | IpcTerm::Pair(_, b), 1) => Some(b),
            (IpcTerm::Proj(_, m), 0) => Some(m),
            (IpcTerm::Inj { arg, .. } | IpcTerm::Abort { arg, .. }, 0) => Some(arg),
            (IpcTerm::Case { scrut, .. }, 0) => Some(scrut),
            (IpcTerm::Case { left, .. }, 1) => Some(left),
            (IpcTerm::Case { right, .. }, 2) => Some(right),
            _ => None,
        }
    }

    pub fn subterm(&self, path: &Path) -> Option<&IpcTerm> {
        let mut t = self;
        for &i in &path.0 {
            t = *t.children().get(i)?;
        }
        Some(t)
    }

    /// Replace the subterm at `path`; `None` if the path does not exist.
    pub fn replace_at(&self, path: &Path, new: IpcTerm) -> Option<IpcTerm> {
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
            IpcTerm::Var(y) => y == x,
            IpcTerm::Lam { var, body, .. } => var != x && body.occurs_free(x),
            IpcTerm::App(a, b) | IpcTerm::Pair(a, b) => a.occurs_free(x) || b.occurs_free(x),
            IpcTerm::Proj(_, m) => m.occurs_free(x),
            IpcTerm::Inj { arg, .. } | IpcTerm::Abort { arg, .. } => arg.occurs_free(x),
            IpcTerm::Case {
                scrut,
                left_var,
                left,
                right_var,
                right,
                ..
            } => {
                scrut.occurs_free(x)
                    || (left_var != x && left.occurs_free(x))
                    || (right_var != x && right.occurs_free(x))
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            IpcTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            IpcTerm::Lam { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            IpcTerm::Case {
                scrut,
                left_var,
                left,
                right_var,
                right,
                ..
            } => {
                scrut.collect_free(bound, out);
                bound.push(left_var.clone());
                left.collect_free(bound, out);
                bound.pop();
                bound.push(right_var.clone());
                right.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            IpcTerm::Var(x) => {
                out.insert(x.clone());
            }
            IpcTerm::Lam { var, .. } => {
                out.insert(var.clone());
            }
            IpcTerm::Case {
                left_var,
                right_var,
                ..
            } => {
                out.insert(left_var.clone());
                out.insert(right_var.clone());
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
        self.write_key(&mut Vec::new(), &mut out);
        out
    }

    fn write_key(&self, env: &mut Vec<Name>, out: &mut String) {
        use std::fmt::Write as _;
        match self {
            IpcTerm::Var(x) => match env.iter().rposition(|y| y == x) {
                Some(i) => {
                    let _ = write!(out, "#{i}");
                }
                None => out.push_str(x.as_str()),
            },
            IpcTerm::Lam { var, ty, body } => {
                let _ = write!(out, "(L {ty} ");
                env.push(var.clone());
                body.write_key(env, out);
                env.pop();
                out.push(')');
            }
            IpcTerm::App(a, b) | IpcTerm::Pair(a, b) => {
                out.push_str(if matches!(self, IpcTerm::App(..)) { "(@ " } else { "(, " });
                a.write_key(env, out);
                out.push(' ');
                b.write_key(env, out);
                out.push(')');
            }
            IpcTerm::Proj(side, m) => {
                let _ = write!(out, "(.{} ", side.index());
                m.write_key(env, out);
                out.push(')');
            }
            IpcTerm::Inj {
                side,
                arg,
                left,
                right,
            } => {
                let _ = write!(out, "(in{} {left}|{right} ", side.index());
                arg.write_key(env, out);
                out.push(')');
            }
            IpcTerm::Case {
                scrut,
                left_var,
                left_ty,
                left,
                right_var,
                right_ty,
                right,
                ty,
            } => {
                out.push_str("(case ");
                scrut.write_key(env, out);
                for (x, a, p) in [(left_var, left_ty, left), (right_var, right_ty, right)] {
                    let _ = write!(out, " {a} ");
                    env.push(x.clone());
                    p.write_key(env, out);
                    env.pop();
                }
                let _ = write!(out, " : {ty})");
            }
            IpcTerm::Abort { arg, ty } => {
                let _ = write!(out, "(abort {ty} ");
                arg.write_key(env, out);
                out.push(')');
            }
        }
    }

    /// α-renaming of every binder to a globally fresh name.
    pub fn rename_binders_apart(&self) -> IpcTerm {
        match self {
            IpcTerm::Var(_) => self.clone(),
            IpcTerm::Lam { var, ty, body } => {
                let v = fresh(var.as_str(), |_| false);
                let body = rename(&body.rename_binders_apart(), var, &v);
                IpcTerm::Lam {
                    var: v,
                    ty: ty.clone(),
                    body: Box::new(body),
                }
            }
            IpcTerm::Case {
                scrut,
                left_var,
                left_ty,
                left,
                right_var,
                right_ty,
                right,
                ty,
            } => {
                let lv = fresh(left_var.as_str(), |_| false);
                let rv = fresh(right_var.as_str(), |_| false);
                IpcTerm::Case {
                    scrut: Box::new(scrut.rename_binders_apart()),
                    left_var: lv.clone(),
                    left_ty: left_ty.clone(),
                    left: Box::new(rename(&left.rename_binders_apart(), left_var, &lv)),
                    right_var: rv.clone(),
                    right_ty: right_ty.clone(),
                    right: Box::new(rename(&right.rename_binders_apart(), right_var, &rv)),
                    ty: ty.clone(),
                }
            }
            _ => {
                let mut out = self.clone();
                for i in 0..self.children().len() {
                    let c = self.children()[i].rename_binders_apart();
                    *out.child_mut(i).expect("child exists") = c;
                }
                out
            }
        }
    }
}

/// α-equivalence.
impl PartialEq for IpcTerm {
    fn eq(&self, other: &IpcTerm) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

impl Eq for IpcTerm {}

fn lookup_pair(env: &[(Name, Name)], x: &Name, y: &Name) -> bool {
    for (l, r) in env.iter().rev() {
        if l == x || r == y {
            return l == x && r == y;
        }
    }
    x == y
}

fn alpha_eq(a: &IpcTerm, b: &IpcTerm, env: &mut Vec<(Name, Name)>) -> bool {
    use IpcTerm::*;
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
            if s != t {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let r = alpha_eq(m, n, env);
            env.pop();
            r
        }
        (App(a1, a2), App(b1, b2)) | (Pair(a1, a2), Pair(b1, b2)) => {
            alpha_eq(a1, b1, env) && alpha_eq(a2, b2, env)
        }
        (Proj(i, m), Proj(j, n)) => i == j && alpha_eq(m, n, env),
        (
            Inj {
                side: i,
                arg: m,
                left: a1,
                right: a2,
            },
            Inj {
                side: j,
                arg: n,
                left: b1,
                right: b2,
            },
        ) => i == j && a1 == b1 && a2 == b2 && alpha_eq(m, n, env),
        (
            Case {
                scrut: m,
                left_var: x1,
                left_ty: a1,
                left: p1,
                right_var: y1,
                right_ty: b1,
                right: q1,
                ty: c1,
            },
            Case {
                scrut: n,
                left_var: x2,
                left_ty: a2,
                left: p2,
                right_var: y2,
                right_ty: b2,
                right: q2,
                ty: c2,
            },
        ) => {
            if a1 != a2 || b1 != b2 || c1 != c2 || !alpha_eq(m, n, env) {
                return false;
            }
            env.push((x1.clone(), x2.clone()));
            let left = alpha_eq(p1, p2, env);
            env.pop();
            if !left {
                return false;
            }
            env.push((y1.clone(), y2.clone()));
            let right = alpha_eq(q1, q2, env);
            env.pop();
            right
        }
        (Abort { arg: m, ty: a }, Abort { arg: n, ty: b }) => a == b && alpha_eq(m, n, env),
        _ => false,
    }
}

/// Capture-avoiding substitution `[n/x]m`.
pub fn subst(n: &IpcTerm, x: &Name, m: &IpcTerm) -> IpcTerm {
    if !m.occurs_free(x) {
        return m.clone();
    }
    let fv = n.free_vars();
    Subst { n, fv: &fv, x }.go(m)
}

/// Rename free occurrences of `from` to `to`; `to` must not be captured.
pub(crate) fn rename(m: &IpcTerm, from: &Name, to: &Name) -> IpcTerm {
    subst(&IpcTerm::Var(to.clone()), from, m)
}

struct Subst<'a> {
    n: &'a IpcTerm,
    fv: &'a BTreeSet<Name>,
    x: &'a Name,
}

impl Subst<'_> {
    fn go(&self, m: &IpcTerm) -> IpcTerm {
        use IpcTerm::*;
        if !m.occurs_free(self.x) {
            return m.clone();
        }
        match m {
            Var(_) => self.n.clone(),
            Lam { var, ty, body } => {
                let (var, body) = self.under(var, body);
                Lam {
                    var,
                    ty: ty.clone(),
                    body: Box::new(body),
                }
            }
            App(a, b) => IpcTerm::app(self.go(a), self.go(b)),
            Pair(a, b) => IpcTerm::pair(self.go(a), self.go(b)),
            Proj(i, a) => IpcTerm::proj(*i, self.go(a)),
            Inj {
                side,
                arg,
                left,
                right,
            } => IpcTerm::inj(*side, self.go(arg), left.clone(), right.clone()),
            Case {
                scrut,
                left_var,
                left_ty,
                left,
                right_var,
                right_ty,
                right,
                ty,
            } => {
                let (lv, l) = self.under(left_var, left);
                let (rv, r) = self.under(right_var, right);
                Case {
                    scrut: Box::new(self.go(scrut)),
                    left_var: lv,
                    left_ty: left_ty.clone(),
                    left: Box::new(l),
                    right_var: rv,
                    right_ty: right_ty.clone(),
                    right: Box::new(r),
                    ty: ty.clone(),
                }
            }
            Abort { arg, ty } => IpcTerm::abort(self.go(arg), ty.clone()),
        }
    }

    fn under(&self, var: &Name, body: &IpcTerm) -> (Name, IpcTerm) {
        if var == self.x || !body.occurs_free(self.x) {
            return (var.clone(), body.clone());
        }
        if self.fv.contains(var) {
            let v = fresh(var.as_str(), |c| {
                self.fv.contains(c) || c == self.x || body.occurs_free(c)
            });
            let body = rename(body, var, &v);
            (v, self.go(&body))
        } else {
            (var.clone(), self.go(body))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> IpcType {
        IpcType::var("X")
    }

    #[test]
    fn free_vars_examples() {
        assert_eq!(
            IpcTerm::var("x").free_vars(),
            BTreeSet::from([Name::new("x")])
        );
        assert!(IpcTerm::lam("x", x(), IpcTerm::var("x")).free_vars().is_empty());
        let c = IpcTerm::case(
            IpcTerm::var("m"),
            "x",
            x(),
            IpcTerm::var("x"),
            "y",
            x(),
            IpcTerm::var("q"),
            x(),
        );
        assert_eq!(
            c.free_vars(),
            BTreeSet::from([Name::new("m"), Name::new("q")])
        );
    }

    #[test]
    fn subst_examples() {
        let w = IpcTerm::var("w");
        assert_eq!(subst(&w, &Name::new("x"), &IpcTerm::var("x")), w);

        let lam = IpcTerm::lam("w", x(), IpcTerm::var("x"));
        let out = subst(&w, &Name::new("x"), &lam);
        match &out {
            IpcTerm::Lam { var, body, .. } => {
                assert_ne!(var.as_str(), "w");
                assert_eq!(**body, IpcTerm::var("w"));
            }
            other => panic!("expected λ, got {other:?}"),
        }

        let pair = IpcTerm::pair(IpcTerm::var("a"), IpcTerm::var("b"));
        let out = subst(
            &pair,
            &Name::new("x"),
            &IpcTerm::proj(Side::Left, IpcTerm::var("x")),
        );
        assert_eq!(out, IpcTerm::proj(Side::Left, pair));
    }

    #[test]
    fn subst_avoids_capture_in_case_branches() {
        // [y/m] case m of x => m | y => m
        let c = IpcTerm::case(
            IpcTerm::var("m"),
            "x",
            x(),
            IpcTerm::var("m"),
            "y",
            x(),
            IpcTerm::var("m"),
            x(),
        );
        let out = subst(&IpcTerm::var("y"), &Name::new("m"), &c);
        let expected = IpcTerm::case(
            IpcTerm::var("y"),
            "x",
            x(),
            IpcTerm::var("y"),
            "y2",
            x(),
            IpcTerm::var("y"),
            x(),
        );
        assert_eq!(out, expected);
        assert!(out.free_vars().contains(&Name::new("y")));
    }

    #[test]
    fn alpha_equivalence_respects_shadowing() {
        let a = IpcTerm::lam("x", x(), IpcTerm::lam("x", x(), IpcTerm::var("x")));
        let b = IpcTerm::lam("y", x(), IpcTerm::lam("z", x(), IpcTerm::var("z")));
        let c = IpcTerm::lam("y", x(), IpcTerm::lam("z", x(), IpcTerm::var("y")));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(IpcTerm::var("x"), IpcTerm::var("y"));
    }

    #[test]
    fn replace_and_lookup_positions() {
        let t = IpcTerm::app(IpcTerm::var("f"), IpcTerm::var("a"));
        assert_eq!(t.subterm(&Path(vec![1])), Some(&IpcTerm::var("a")));
        assert!(t.subterm(&Path(vec![2])).is_none());
        let r = t.replace_at(&Path(vec![0]), IpcTerm::var("g")).unwrap();
        assert_eq!(r, IpcTerm::app(IpcTerm::var("g"), IpcTerm::var("a")));
    }

    #[test]
    fn binders_apart_is_alpha_equal() {
        let t = IpcTerm::lam(
            "x",
            x(),
            IpcTerm::app(IpcTerm::lam("x", x(), IpcTerm::var("x")), IpcTerm::var("x")),
        );
        let r = t.rename_binders_apart();
        assert_eq!(r, t);
        assert!(!r.all_names().contains(&Name::new("x")));
    }
}
