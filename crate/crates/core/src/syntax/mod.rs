//! Concrete syntax shared by both calculi.
//!
//! Terms: `\x:A. M`, `M N`, `<M, N>`, `M.1`, `M.2`, `inl[A|B] M`,
//! `inr[A|B] M`, `case M of {x:A => P | y:B => Q} : C`, `abort[A] M`,
//! `/\X. M`, `M [Y]`. Types: `X`, `_|_`, `A -> B`, `A /\ B`, `A \/ B`,
//! `forall X. A`. A file is a list of `name : Type;` declarations followed
//! by one term; `#` starts a line comment.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use crate::fat::{FatContext, FatTerm, FatType};
use crate::ipc::{Context, IpcTerm, IpcType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: type application needs a type variable, found `{found}`")]
    NonAtomicInstantiation { pos: Pos, found: String },
}

impl SyntaxError {
    pub(crate) fn at(pos: Pos, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            SyntaxError::Syntax { pos, .. } | SyntaxError::NonAtomicInstantiation { pos, .. } => {
                *pos
            }
        }
    }
}

pub fn parse_ipc(text: &str) -> Result<IpcTerm, SyntaxError> {
    parser::term(text)?.to_ipc()
}

pub fn parse_fat(text: &str) -> Result<FatTerm, SyntaxError> {
    parser::term(text)?.to_fat()
}

pub fn parse_ipc_type(text: &str) -> Result<IpcType, SyntaxError> {
    parser::ty(text)?.to_ipc()
}

pub fn parse_fat_type(text: &str) -> Result<FatType, SyntaxError> {
    parser::ty(text)?.to_fat()
}

/// Declarations and term of an IPC source file.
pub fn parse_ipc_file(text: &str) -> Result<(Context, IpcTerm), SyntaxError> {
    let file = parser::file(text)?;
    let mut ctx = Context::new();
    for (pos, name, ty) in file.decls {
        ctx.declare(name, ty.to_ipc()?)
            .map_err(|e| SyntaxError::at(pos, e.to_string()))?;
    }
    Ok((ctx, file.term.to_ipc()?))
}

pub fn parse_fat_file(text: &str) -> Result<(FatContext, FatTerm), SyntaxError> {
    let file = parser::file(text)?;
    let mut ctx = FatContext::new();
    for (pos, name, ty) in file.decls {
        ctx.declare(name, ty.to_fat()?)
            .map_err(|e| SyntaxError::at(pos, e.to_string()))?;
    }
    Ok((ctx, file.term.to_fat()?))
}

pub fn print_ipc(t: &IpcTerm) -> String {
    t.to_string()
}

pub fn print_fat(t: &FatTerm) -> String {
    t.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::side::Side;

    fn x() -> IpcType {
        IpcType::var("X")
    }

    #[test]
    fn parses_lambda() {
        assert_eq!(
            parse_ipc("\\x:X. x").unwrap(),
            IpcTerm::lam("x", x(), IpcTerm::var("x"))
        );
    }

    #[test]
    fn parses_case() {
        let t = parse_ipc("case m of {x:X => x | y:Y => y} : X \\/ Y").unwrap();
        assert!(matches!(t, IpcTerm::Case { .. }));
    }

    #[test]
    fn parses_abort_with_bottom() {
        assert_eq!(
            parse_ipc("abort[_|_] m").unwrap(),
            IpcTerm::abort(IpcTerm::var("m"), IpcType::Bottom)
        );
    }

    #[test]
    fn precedence() {
        let t = parse_ipc("f inl[X|Y] a.1 b").unwrap();
        let expected = IpcTerm::app(
            IpcTerm::app(
                IpcTerm::var("f"),
                IpcTerm::inj(
                    Side::Left,
                    IpcTerm::proj(Side::Left, IpcTerm::var("a")),
                    x(),
                    IpcType::var("Y"),
                ),
            ),
            IpcTerm::var("b"),
        );
        assert_eq!(t, expected);
        assert_eq!(
            parse_ipc_type("X -> Y -> X /\\ Y \\/ Y").unwrap(),
            IpcType::imp(
                x(),
                IpcType::imp(
                    IpcType::var("Y"),
                    IpcType::or(IpcType::and(x(), IpcType::var("Y")), IpcType::var("Y"))
                )
            )
        );
    }

    #[test]
    fn fat_syntax() {
        let t = parse_fat("/\\X. \\x:X. x [X]").unwrap();
        assert_eq!(
            t,
            FatTerm::ty_lam(
                "X",
                FatTerm::lam("x", FatType::var("X"), FatTerm::ty_app(FatTerm::var("x"), "X"))
            )
        );
        assert_eq!(
            parse_fat_type("forall X. (X -> X) /\\ X").unwrap(),
            FatType::forall(
                "X",
                FatType::and(FatType::imp(FatType::var("X"), FatType::var("X")), FatType::var("X"))
            )
        );
    }

    #[test]
    fn calculus_mismatches_are_errors() {
        assert!(parse_ipc("/\\X. x").is_err());
        assert!(parse_fat("inl[X|Y] x").is_err());
        assert!(parse_fat_type("X \\/ Y").is_err());
        assert!(matches!(
            parse_fat("f [X -> X]"),
            Err(SyntaxError::NonAtomicInstantiation { .. })
        ));
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_ipc("\\x:X.\n  (x").unwrap_err();
        assert_eq!(err.pos().line, 2);
    }

    #[test]
    fn file_with_declarations() {
        let (ctx, t) = parse_ipc_file("f : X -> Y;\na : X;\n# the body\nf a").unwrap();
        assert_eq!(ctx.len(), 2);
        assert_eq!(t, IpcTerm::app(IpcTerm::var("f"), IpcTerm::var("a")));
        assert!(parse_ipc_file("a : X; a : Y; a").is_err());
    }

    #[test]
    fn printing_round_trips() {
        let src = [
            "\\x:X. \\y:Y. <x, y>",
            "case d of {x:X => inr[Y|X] x | y:Y => inl[Y|X] y} : Y \\/ X",
            "abort[X -> X] e (\\x:X. x) a",
            "f (g a) (p.1).2",
            "(\\x:X. x) a",
        ];
        for s in src {
            let t = parse_ipc(s).unwrap();
            let printed = print_ipc(&t);
            assert_eq!(parse_ipc(&printed).unwrap(), t, "{s} printed as {printed}");
        }
        let f = parse_fat("/\\X. \\w:(X -> X) /\\ (forall Y. Y). (w.1) [X]").unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(parse_fat(&print_fat(&f)).unwrap(), f);
    }
}
