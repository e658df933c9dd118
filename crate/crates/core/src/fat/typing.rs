use std::collections::BTreeMap;

use super::{subst_type_in_type, FatTerm, FatType};
use crate::name::Name;
use crate::rule::Path;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FatTypeError {
    #[error("unbound variable `{name}` at {position}")]
    UnboundVariable { name: Name, position: Path },
    #[error("type mismatch in rule {rule} at {position}: {detail}")]
    TypeMismatch {
        rule: &'static str,
        position: Path,
        detail: String,
    },
    #[error("∀I at {position}: type variable `{var}` occurs free in the context")]
    ForallProvisoViolated { var: Name, position: Path },
    #[error("variable `{0}` declared twice")]
    DuplicateDeclaration(Name),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FatContext(BTreeMap<Name, FatType>);

impl FatContext {
    pub fn new() -> FatContext {
        FatContext::default()
    }

    pub fn declare(&mut self, name: Name, ty: FatType) -> Result<(), FatTypeError> {
        if self.0.contains_key(&name) {
            return Err(FatTypeError::DuplicateDeclaration(name));
        }
        self.0.insert(name, ty);
        Ok(())
    }

    pub fn with(mut self, name: &str, ty: FatType) -> FatContext {
        self.declare(Name::new(name), ty)
            .expect("duplicate declaration");
        self
    }

    pub fn get(&self, name: &Name) -> Option<&FatType> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &FatType)> {
        self.0.iter()
    }

    /// Whether `x` occurs free in some declared type.
    pub fn mentions_type_var(&self, x: &Name) -> bool {
        self.0.values().any(|t| t.occurs_free(x))
    }
}

/// The type of `t` under `ctx`, enforcing the ∀I proviso.
pub fn typecheck_fat(ctx: &FatContext, t: &FatTerm) -> Result<FatType, FatTypeError> {
    let mut checker = Checker {
        ctx,
        scope: Vec::new(),
        path: Vec::new(),
    };
    checker.infer(t)
}

struct Checker<'a> {
    ctx: &'a FatContext,
    scope: Vec<(Name, FatType)>,
    path: Vec<usize>,
}

impl Checker<'_> {
    fn mismatch(&self, rule: &'static str, detail: String) -> FatTypeError {
        FatTypeError::TypeMismatch {
            rule,
            position: Path(self.path.clone()),
            detail,
        }
    }

    fn child(&mut self, i: usize, t: &FatTerm) -> Result<FatType, FatTypeError> {
        self.path.push(i);
        let r = self.infer(t);
        self.path.pop();
        r
    }

    fn lookup(&self, x: &Name) -> Option<&FatType> {
        self.scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, t)| t)
            .or_else(|| self.ctx.get(x))
    }

    /// Γ as seen at the current point: shadowed context entries are hidden.
    fn type_var_in_scope(&self, x: &Name) -> bool {
        let mut seen: Vec<&Name> = Vec::new();
        for (y, t) in self.scope.iter().rev() {
            if seen.contains(&y) {
                continue;
            }
            if t.occurs_free(x) {
                return true;
            }
            seen.push(y);
        }
        self.ctx
            .iter()
            .any(|(y, t)| !seen.contains(&y) && t.occurs_free(x))
    }

    fn infer(&mut self, t: &FatTerm) -> Result<FatType, FatTypeError> {
        match t {
            FatTerm::Var(x) => self.lookup(x).cloned().ok_or_else(|| FatTypeError::UnboundVariable {
                name: x.clone(),
                position: Path(self.path.clone()),
            }),
            FatTerm::Lam { var, ty, body } => {
                self.scope.push((var.clone(), ty.clone()));
                let r = self.child(0, body);
                self.scope.pop();
                Ok(FatType::imp(ty.clone(), r?))
            }
            FatTerm::App(f, a) => {
                let ft = self.child(0, f)?;
                let at = self.child(1, a)?;
                match ft {
                    FatType::Imp(dom, cod) if *dom == at => Ok(*cod),
                    FatType::Imp(dom, _) => Err(self.mismatch(
                        "⊃E",
                        format!("argument has type {at}, function expects {dom}"),
                    )),
                    other => Err(self.mismatch(
                        "⊃E",
                        format!("applied term has non-implication type {other}"),
                    )),
                }
            }
            FatTerm::Pair(a, b) => {
                let a = self.child(0, a)?;
                let b = self.child(1, b)?;
                Ok(FatType::and(a, b))
            }
            FatTerm::Proj(side, m) => match self.child(0, m)? {
                FatType::And(a, b) => Ok(*side.pick(a, b)),
                other => Err(self.mismatch(
                    "∧E",
                    format!("projection from non-conjunction type {other}"),
                )),
            },
            FatTerm::TyLam(x, body) => {
                if self.type_var_in_scope(x) {
                    return Err(FatTypeError::ForallProvisoViolated {
                        var: x.clone(),
                        position: Path(self.path.clone()),
                    });
                }
                let b = self.child(0, body)?;
                Ok(FatType::Forall(x.clone(), Box::new(b)))
            }
            FatTerm::TyApp(m, y) => match self.child(0, m)? {
                FatType::Forall(x, a) => Ok(subst_type_in_type(y, &x, &a)),
                other => Err(self.mismatch(
                    "∀E",
                    format!("instantiated term has non-universal type {other}"),
                )),
            },
        }
    }
}
