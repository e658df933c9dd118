use std::collections::BTreeMap;
use std::fmt;

use super::{IpcTerm, IpcType};
use crate::name::Name;
use crate::rule::Path;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IpcTypeError {
    #[error("unbound variable `{name}` at {position}")]
    UnboundVariable { name: Name, position: Path },
    #[error("type mismatch in rule {rule} at {position}: {detail}")]
    TypeMismatch {
        rule: &'static str,
        position: Path,
        detail: String,
    },
    #[error("variable `{0}` declared twice")]
    DuplicateDeclaration(Name),
}

/// Typing context: each variable is declared at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context(BTreeMap<Name, IpcType>);

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn declare(&mut self, name: Name, ty: IpcType) -> Result<(), IpcTypeError> {
        if self.0.contains_key(&name) {
            return Err(IpcTypeError::DuplicateDeclaration(name));
        }
        self.0.insert(name, ty);
        Ok(())
    }

    /// Builder form of [`Context::declare`]; panics on a duplicate.
    pub fn with(mut self, name: &str, ty: IpcType) -> Context {
        self.declare(Name::new(name), ty)
            .expect("duplicate declaration");
        self
    }

    pub fn get(&self, name: &Name) -> Option<&IpcType> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &IpcType)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (name, ty)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}: {ty}")?;
        }
        f.write_str("}")
    }
}

/// The unique type of `t` under `ctx`, by the syntax-directed rules.
pub fn typecheck(ctx: &Context, t: &IpcTerm) -> Result<IpcType, IpcTypeError> {
    let mut checker = Checker {
        ctx,
        scope: Vec::new(),
        path: Vec::new(),
    };
    checker.infer(t)
}

struct Checker<'a> {
    ctx: &'a Context,
    scope: Vec<(Name, IpcType)>,
    path: Vec<usize>,
}

impl Checker<'_> {
    fn mismatch(&self, rule: &'static str, detail: String) -> IpcTypeError {
        IpcTypeError::TypeMismatch {
            rule,
            position: Path(self.path.clone()),
            detail,
        }
    }

    fn child(&mut self, i: usize, t: &IpcTerm) -> Result<IpcType, IpcTypeError> {
        self.path.push(i);
        let r = self.infer(t);
        self.path.pop();
        r
    }

    fn bound(
        &mut self,
        i: usize,
        x: &Name,
        ty: &IpcType,
        t: &IpcTerm,
    ) -> Result<IpcType, IpcTypeError> {
        self.scope.push((x.clone(), ty.clone()));
        let r = self.child(i, t);
        self.scope.pop();
        r
    }

    fn infer(&mut self, t: &IpcTerm) -> Result<IpcType, IpcTypeError> {
        match t {
            IpcTerm::Var(x) => self
                .scope
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, ty)| ty)
                .or_else(|| self.ctx.get(x))
                .cloned()
                .ok_or_else(|| IpcTypeError::UnboundVariable {
                    name: x.clone(),
                    position: Path(self.path.clone()),
                }),
            IpcTerm::Lam { var, ty, body } => {
                let b = self.bound(0, var, ty, body)?;
                Ok(IpcType::imp(ty.clone(), b))
            }
            IpcTerm::App(f, a) => {
                let ft = self.child(0, f)?;
                let at = self.child(1, a)?;
                match ft {
                    IpcType::Imp(dom, cod) if *dom == at => Ok(*cod),
                    IpcType::Imp(dom, _) => Err(self.mismatch(
                        "⊃E",
                        format!("argument has type {at}, function expects {dom}"),
                    )),
                    other => Err(self.mismatch(
                        "⊃E",
                        format!("applied term has non-implication type {other}"),
                    )),
                }
            }
            IpcTerm::Pair(a, b) => {
                let a = self.child(0, a)?;
                let b = self.child(1, b)?;
                Ok(IpcType::and(a, b))
            }
            IpcTerm::Proj(side, m) => match self.child(0, m)? {
                IpcType::And(a, b) => Ok(*side.pick(a, b)),
                other => Err(self.mismatch(
                    "∧E",
                    format!("projection from non-conjunction type {other}"),
                )),
            },
            IpcTerm::Inj {
                side,
                arg,
                left,
                right,
            } => {
                let at = self.child(0, arg)?;
                let expected = side.pick(left, right);
                if at != *expected {
                    return Err(self.mismatch(
                        "∨I",
                        format!("injected term has type {at}, annotation says {expected}"),
                    ));
                }
                Ok(IpcType::or(left.clone(), right.clone()))
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
                let st = self.child(0, scrut)?;
                let expected = IpcType::or(left_ty.clone(), right_ty.clone());
                if st != expected {
                    return Err(self.mismatch(
                        "∨E",
                        format!("scrutinee has type {st}, binders expect {expected}"),
                    ));
                }
                let lt = self.bound(1, left_var, left_ty, left)?;
                let rt = self.bound(2, right_var, right_ty, right)?;
                for (b, bt) in [(1, &lt), (2, &rt)] {
                    if bt != ty {
                        return Err(self.mismatch(
                            "∨E",
                            format!("branch {b} has type {bt}, case is annotated {ty}"),
                        ));
                    }
                }
                Ok(ty.clone())
            }
            IpcTerm::Abort { arg, ty } => match self.child(0, arg)? {
                IpcType::Bottom => Ok(ty.clone()),
                other => Err(self.mismatch(
                    "⊥E",
                    format!("aborted term has type {other}, expected ⊥"),
                )),
            },
        }
    }
}
