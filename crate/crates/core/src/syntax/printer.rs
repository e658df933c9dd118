//! Display impls. Bound names are printed canonically: each binder gets its
//! base name with the smallest `_n` suffix that clashes neither with a free
//! name of the whole term nor with a binder in scope, so α-equal terms
//! print identically.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::fat::{FatTerm, FatType};
use crate::ipc::{IpcTerm, IpcType};
use crate::name::Name;

fn ipc_type(t: &IpcType, level: u8, out: &mut String) {
    let paren = |open: bool, out: &mut String, s: &str| {
        if open {
            out.push_str(s);
        }
    };
    match t {
        IpcType::Var(x) => out.push_str(x.as_str()),
        IpcType::Bottom => out.push_str("_|_"),
        IpcType::Imp(a, b) => {
            paren(level > 0, out, "(");
            ipc_type(a, 1, out);
            out.push_str(" -> ");
            ipc_type(b, 0, out);
            paren(level > 0, out, ")");
        }
        IpcType::Or(a, b) => {
            paren(level > 1, out, "(");
            ipc_type(a, 2, out);
            out.push_str(" \\/ ");
            ipc_type(b, 1, out);
            paren(level > 1, out, ")");
        }
        IpcType::And(a, b) => {
            paren(level > 2, out, "(");
            ipc_type(a, 3, out);
            out.push_str(" /\\ ");
            ipc_type(b, 2, out);
            paren(level > 2, out, ")");
        }
    }
}

impl fmt::Display for IpcType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        ipc_type(self, 0, &mut s);
        f.write_str(&s)
    }
}

/// Canonical binder naming for one namespace.
#[derive(Default)]
struct Names {
    avoid: BTreeSet<String>,
    scope: Vec<(Name, String)>,
}

impl Names {
    fn new(free: impl IntoIterator<Item = Name>) -> Names {
        Names {
            avoid: free.into_iter().map(|n| n.as_str().to_string()).collect(),
            scope: Vec::new(),
        }
    }

    fn bind(&mut self, x: &Name) -> String {
        let base = x.base();
        let taken = |c: &str| self.avoid.contains(c) || self.scope.iter().any(|(_, s)| s == c);
        let mut candidate = base.to_string();
        let mut k = 1;
        while taken(&candidate) {
            candidate = format!("{base}_{k}");
            k += 1;
        }
        self.scope.push((x.clone(), candidate.clone()));
        candidate
    }

    fn unbind(&mut self) {
        self.scope.pop();
    }

    fn get(&self, x: &Name) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| x.as_str().to_string())
    }
}

struct IpcPrinter {
    names: Names,
    out: String,
}

impl IpcPrinter {
    fn ty(&mut self, t: &IpcType) {
        ipc_type(t, 0, &mut self.out);
    }

    fn term(&mut self, t: &IpcTerm, level: u8) {
        let open = |p: &mut IpcPrinter, min: u8| {
            let wrap = level > min;
            if wrap {
                p.out.push('(');
            }
            wrap
        };
        match t {
            IpcTerm::Var(x) => {
                let s = self.names.get(x);
                self.out.push_str(&s);
            }
            IpcTerm::Lam { var, ty, body } => {
                let wrap = open(self, 0);
                let v = self.names.bind(var);
                let _ = write!(self.out, "\\{v}:");
                self.ty(ty);
                self.out.push_str(". ");
                self.term(body, 0);
                self.names.unbind();
                self.close(wrap);
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
                let wrap = open(self, 0);
                self.out.push_str("case ");
                self.term(scrut, 0);
                self.out.push_str(" of {");
                for (k, (x, a, p)) in [(left_var, left_ty, left), (right_var, right_ty, right)]
                    .into_iter()
                    .enumerate()
                {
                    if k > 0 {
                        self.out.push_str(" | ");
                    }
                    let v = self.names.bind(x);
                    let _ = write!(self.out, "{v}:");
                    self.ty(a);
                    self.out.push_str(" => ");
                    self.term(p, 0);
                    self.names.unbind();
                }
                self.out.push_str("} : ");
                self.ty(ty);
                self.close(wrap);
            }
            IpcTerm::App(m, n) => {
                let wrap = open(self, 1);
                self.term(m, 1);
                self.out.push(' ');
                self.term(n, 2);
                self.close(wrap);
            }
            IpcTerm::Inj {
                side,
                arg,
                left,
                right,
            } => {
                let wrap = open(self, 2);
                let _ = write!(self.out, "{}[", side.pick("inl", "inr"));
                self.ty(left);
                self.out.push('|');
                self.ty(right);
                self.out.push_str("] ");
                self.term(arg, 2);
                self.close(wrap);
            }
            IpcTerm::Abort { arg, ty } => {
                let wrap = open(self, 2);
                self.out.push_str("abort[");
                self.ty(ty);
                self.out.push_str("] ");
                self.term(arg, 2);
                self.close(wrap);
            }
            IpcTerm::Proj(side, m) => {
                let wrap = open(self, 3);
                self.term(m, 3);
                let _ = write!(self.out, ".{}", side.index());
                self.close(wrap);
            }
            IpcTerm::Pair(a, b) => {
                self.out.push('<');
                self.term(a, 0);
                self.out.push_str(", ");
                self.term(b, 0);
                self.out.push('>');
            }
        }
    }

    fn close(&mut self, wrap: bool) {
        if wrap {
            self.out.push(')');
        }
    }
}

impl fmt::Display for IpcTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = IpcPrinter {
            names: Names::new(self.free_vars()),
            out: String::new(),
        };
        p.term(self, 0);
        f.write_str(&p.out)
    }
}

fn fat_type(t: &FatType, level: u8, names: &mut Names, out: &mut String) {
    match t {
        FatType::Var(x) => out.push_str(&names.get(x)),
        FatType::Forall(x, a) => {
            if level > 0 {
                out.push('(');
            }
            let v = names.bind(x);
            let _ = write!(out, "forall {v}. ");
            fat_type(a, 0, names, out);
            names.unbind();
            if level > 0 {
                out.push(')');
            }
        }
        FatType::Imp(a, b) => {
            if level > 0 {
                out.push('(');
            }
            fat_type(a, 1, names, out);
            out.push_str(" -> ");
            fat_type(b, 0, names, out);
            if level > 0 {
                out.push(')');
            }
        }
        FatType::And(a, b) => {
            // `/\` sits two levels above `->`, matching the IPC grammar.
            if level > 2 {
                out.push('(');
            }
            fat_type(a, 3, names, out);
            out.push_str(" /\\ ");
            fat_type(b, 2, names, out);
            if level > 2 {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for FatType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Names::new(self.free_type_vars());
        let mut s = String::new();
        fat_type(self, 0, &mut names, &mut s);
        f.write_str(&s)
    }
}

struct FatPrinter {
    names: Names,
    tnames: Names,
    out: String,
}

impl FatPrinter {
    fn term(&mut self, t: &FatTerm, level: u8) {
        let wrap_at = |min: u8| level > min;
        match t {
            FatTerm::Var(x) => {
                let s = self.names.get(x);
                self.out.push_str(&s);
            }
            FatTerm::Lam { var, ty, body } => {
                let wrap = wrap_at(0);
                self.open(wrap);
                let v = self.names.bind(var);
                let _ = write!(self.out, "\\{v}:");
                fat_type(ty, 0, &mut self.tnames, &mut self.out);
                self.out.push_str(". ");
                self.term(body, 0);
                self.names.unbind();
                self.close(wrap);
            }
            FatTerm::TyLam(x, body) => {
                let wrap = wrap_at(0);
                self.open(wrap);
                let v = self.tnames.bind(x);
                let _ = write!(self.out, "/\\{v}. ");
                self.term(body, 0);
                self.tnames.unbind();
                self.close(wrap);
            }
            FatTerm::App(m, n) => {
                let wrap = wrap_at(1);
                self.open(wrap);
                self.term(m, 1);
                self.out.push(' ');
                self.term(n, 2);
                self.close(wrap);
            }
            FatTerm::TyApp(m, y) => {
                let wrap = wrap_at(1);
                self.open(wrap);
                self.term(m, 1);
                let y = self.tnames.get(y);
                let _ = write!(self.out, " [{y}]");
                self.close(wrap);
            }
            FatTerm::Proj(side, m) => {
                let wrap = wrap_at(3);
                self.open(wrap);
                self.term(m, 3);
                let _ = write!(self.out, ".{}", side.index());
                self.close(wrap);
            }
            FatTerm::Pair(a, b) => {
                self.out.push('<');
                self.term(a, 0);
                self.out.push_str(", ");
                self.term(b, 0);
                self.out.push('>');
            }
        }
    }

    fn open(&mut self, wrap: bool) {
        if wrap {
            self.out.push('(');
        }
    }

    fn close(&mut self, wrap: bool) {
        if wrap {
            self.out.push(')');
        }
    }
}

impl fmt::Display for FatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = FatPrinter {
            names: Names::new(self.free_term_vars()),
            tnames: Names::new(self.free_type_vars()),
            out: String::new(),
        };
        p.term(self, 0);
        f.write_str(&p.out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::fresh;

    #[test]
    fn fresh_binders_print_with_base_names() {
        let w = fresh("w", |_| false);
        let t = IpcTerm::Lam {
            var: w.clone(),
            ty: IpcType::var("X"),
            body: Box::new(IpcTerm::Var(w)),
        };
        assert_eq!(t.to_string(), "\\w:X. w");
    }

    #[test]
    fn canonical_names_avoid_free_and_scoped() {
        let t = IpcTerm::lam(
            "x_7",
            IpcType::var("X"),
            IpcTerm::lam(
                "x_9",
                IpcType::var("X"),
                IpcTerm::app(
                    IpcTerm::app(IpcTerm::var("x"), IpcTerm::var("x_7")),
                    IpcTerm::var("x_9"),
                ),
            ),
        );
        assert_eq!(t.to_string(), "\\x_1:X. \\x_2:X. x x_1 x_2");
    }

    #[test]
    fn fat_types_parenthesize_quantifiers() {
        let t = FatType::imp(
            FatType::forall("X", FatType::var("X")),
            FatType::forall("X", FatType::var("X")),
        );
        assert_eq!(t.to_string(), "(forall X. X) -> forall X. X");
    }
}
