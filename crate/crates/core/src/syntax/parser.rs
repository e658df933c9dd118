use super::lexer::{lex, Tok};
use super::{Pos, SyntaxError};
use crate::fat::{FatTerm, FatType};
use crate::ipc::{IpcTerm, IpcType};
use crate::name::Name;
use crate::side::Side;

const KEYWORDS: [&str; 6] = ["case", "of", "inl", "inr", "abort", "forall"];

#[derive(Debug)]
pub(super) struct SType {
    pos: Pos,
    kind: STypeKind,
}

#[derive(Debug)]
enum STypeKind {
    Var(String),
    Bottom,
    Imp(Box<SType>, Box<SType>),
    And(Box<SType>, Box<SType>),
    Or(Box<SType>, Box<SType>),
    Forall(String, Box<SType>),
}

#[derive(Debug)]
pub(super) struct STerm {
    pos: Pos,
    kind: STermKind,
}

#[derive(Debug)]
enum STermKind {
    Var(String),
    Lam(String, SType, Box<STerm>),
    App(Box<STerm>, Box<STerm>),
    Pair(Box<STerm>, Box<STerm>),
    Proj(Side, Box<STerm>),
    Inj(Side, Box<STerm>, SType, SType),
    Case {
        scrut: Box<STerm>,
        x: String,
        x_ty: SType,
        left: Box<STerm>,
        y: String,
        y_ty: SType,
        right: Box<STerm>,
        ty: SType,
    },
    Abort(Box<STerm>, SType),
    TyLam(String, Box<STerm>),
    TyApp(Box<STerm>, SType),
}

pub(super) struct File {
    pub decls: Vec<(Pos, Name, SType)>,
    pub term: STerm,
}

pub(super) fn term(src: &str) -> Result<STerm, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub(super) fn ty(src: &str) -> Result<SType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub(super) fn file(src: &str) -> Result<File, SyntaxError> {
    let mut p = Parser::new(src)?;
    let mut decls = Vec::new();
    while matches!(p.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
        && p.peek_at(1) == &Tok::Colon
    {
        let pos = p.pos();
        let name = p.ident()?;
        p.expect(Tok::Colon)?;
        let t = p.ty()?;
        p.expect(Tok::Semi)?;
        decls.push((pos, Name::new(&name), t));
    }
    let term = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(File { decls, term })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser {
            toks: lex(src)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError::at(
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    fn ty(&mut self) -> Result<SType, SyntaxError> {
        let pos = self.pos();
        if self.is_keyword("forall") {
            self.bump();
            let x = self.ident()?;
            self.expect(Tok::Dot)?;
            let body = self.ty()?;
            return Ok(SType {
                pos,
                kind: STypeKind::Forall(x, Box::new(body)),
            });
        }
        let left = self.or_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.ty()?;
            return Ok(SType {
                pos,
                kind: STypeKind::Imp(Box::new(left), Box::new(right)),
            });
        }
        Ok(left)
    }

    fn or_ty(&mut self) -> Result<SType, SyntaxError> {
        let pos = self.pos();
        let left = self.and_ty()?;
        if *self.peek() == Tok::BackSlash {
            self.bump();
            let right = self.or_ty()?;
            return Ok(SType {
                pos,
                kind: STypeKind::Or(Box::new(left), Box::new(right)),
            });
        }
        Ok(left)
    }

    fn and_ty(&mut self) -> Result<SType, SyntaxError> {
        let pos = self.pos();
        let left = self.atom_ty()?;
        if *self.peek() == Tok::SlashBack {
            self.bump();
            let right = self.and_ty()?;
            return Ok(SType {
                pos,
                kind: STypeKind::And(Box::new(left), Box::new(right)),
            });
        }
        Ok(left)
    }

    fn atom_ty(&mut self) -> Result<SType, SyntaxError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Bottom => {
                self.bump();
                Ok(SType {
                    pos,
                    kind: STypeKind::Bottom,
                })
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => {
                let x = self.ident().map_err(|_| self.error("a type"))?;
                Ok(SType {
                    pos,
                    kind: STypeKind::Var(x),
                })
            }
        }
    }

    fn term(&mut self) -> Result<STerm, SyntaxError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let a = self.ty()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(STerm {
                    pos,
                    kind: STermKind::Lam(x, a, Box::new(body)),
                })
            }
            Tok::SlashBack => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.term()?;
                Ok(STerm {
                    pos,
                    kind: STermKind::TyLam(x, Box::new(body)),
                })
            }
            _ if self.is_keyword("case") => {
                self.bump();
                let scrut = self.term()?;
                self.keyword("of")?;
                self.expect(Tok::LBrace)?;
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let x_ty = self.ty()?;
                self.expect(Tok::FatArrow)?;
                let left = self.term()?;
                self.expect(Tok::Pipe)?;
                let y = self.ident()?;
                self.expect(Tok::Colon)?;
                let y_ty = self.ty()?;
                self.expect(Tok::FatArrow)?;
                let right = self.term()?;
                self.expect(Tok::RBrace)?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                Ok(STerm {
                    pos,
                    kind: STermKind::Case {
                        scrut: Box::new(scrut),
                        x,
                        x_ty,
                        left: Box::new(left),
                        y,
                        y_ty,
                        right: Box::new(right),
                        ty,
                    },
                })
            }
            _ => self.app(),
        }
    }

    fn starts_unit(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "case" | "of" | "forall"),
            Tok::LParen | Tok::LAngle => true,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<STerm, SyntaxError> {
        let pos = self.pos();
        let mut t = self.unit()?;
        loop {
            if *self.peek() == Tok::LBrack {
                self.bump();
                let a = self.ty()?;
                self.expect(Tok::RBrack)?;
                t = STerm {
                    pos,
                    kind: STermKind::TyApp(Box::new(t), a),
                };
            } else if self.starts_unit() {
                let arg = self.unit()?;
                t = STerm {
                    pos,
                    kind: STermKind::App(Box::new(t), Box::new(arg)),
                };
            } else {
                return Ok(t);
            }
        }
    }

    fn unit(&mut self) -> Result<STerm, SyntaxError> {
        let pos = self.pos();
        let side = if self.is_keyword("inl") {
            Some(Side::Left)
        } else if self.is_keyword("inr") {
            Some(Side::Right)
        } else {
            None
        };
        if let Some(side) = side {
            self.bump();
            self.expect(Tok::LBrack)?;
            let a = self.ty()?;
            self.expect(Tok::Pipe)?;
            let b = self.ty()?;
            self.expect(Tok::RBrack)?;
            let arg = self.unit()?;
            return Ok(STerm {
                pos,
                kind: STermKind::Inj(side, Box::new(arg), a, b),
            });
        }
        if self.is_keyword("abort") {
            self.bump();
            self.expect(Tok::LBrack)?;
            let a = self.ty()?;
            self.expect(Tok::RBrack)?;
            let arg = self.unit()?;
            return Ok(STerm {
                pos,
                kind: STermKind::Abort(Box::new(arg), a),
            });
        }
        self.postfix()
    }

    fn postfix(&mut self) -> Result<STerm, SyntaxError> {
        let pos = self.pos();
        let mut t = self.atom()?;
        while *self.peek() == Tok::Dot {
            let side = match self.peek_at(1) {
                Tok::Num(n) => Side::from_index(u8::try_from(*n).unwrap_or(0)),
                _ => break,
            };
            self.bump();
            let side = side.ok_or_else(|| self.error("projection index 1 or 2"))?;
            self.bump();
            t = STerm {
                pos,
                kind: STermKind::Proj(side, Box::new(t)),
            };
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<STerm, SyntaxError> {
        let pos = self.pos();
        match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RAngle)?;
                Ok(STerm {
                    pos,
                    kind: STermKind::Pair(Box::new(a), Box::new(b)),
                })
            }
            _ => {
                let x = self.ident().map_err(|_| self.error("a term"))?;
                Ok(STerm {
                    pos,
                    kind: STermKind::Var(x),
                })
            }
        }
    }
}

fn not_in(pos: Pos, what: &str, calculus: &str) -> SyntaxError {
    SyntaxError::at(pos, format!("{what} is not part of {calculus}"))
}

impl SType {
    pub(super) fn to_ipc(&self) -> Result<IpcType, SyntaxError> {
        Ok(match &self.kind {
            STypeKind::Var(x) => IpcType::var(x),
            STypeKind::Bottom => IpcType::Bottom,
            STypeKind::Imp(a, b) => IpcType::imp(a.to_ipc()?, b.to_ipc()?),
            STypeKind::And(a, b) => IpcType::and(a.to_ipc()?, b.to_ipc()?),
            STypeKind::Or(a, b) => IpcType::or(a.to_ipc()?, b.to_ipc()?),
            STypeKind::Forall(..) => return Err(not_in(self.pos, "`forall`", "IPC")),
        })
    }

    pub(super) fn to_fat(&self) -> Result<FatType, SyntaxError> {
        Ok(match &self.kind {
            STypeKind::Var(x) => FatType::var(x),
            STypeKind::Bottom => return Err(not_in(self.pos, "`_|_`", "atomic System F")),
            STypeKind::Or(..) => return Err(not_in(self.pos, "disjunction", "atomic System F")),
            STypeKind::Imp(a, b) => FatType::imp(a.to_fat()?, b.to_fat()?),
            STypeKind::And(a, b) => FatType::and(a.to_fat()?, b.to_fat()?),
            STypeKind::Forall(x, a) => FatType::forall(x, a.to_fat()?),
        })
    }
}

impl STerm {
    pub(super) fn to_ipc(&self) -> Result<IpcTerm, SyntaxError> {
        Ok(match &self.kind {
            STermKind::Var(x) => IpcTerm::var(x),
            STermKind::Lam(x, a, m) => IpcTerm::lam(x, a.to_ipc()?, m.to_ipc()?),
            STermKind::App(m, n) => IpcTerm::app(m.to_ipc()?, n.to_ipc()?),
            STermKind::Pair(m, n) => IpcTerm::pair(m.to_ipc()?, n.to_ipc()?),
            STermKind::Proj(i, m) => IpcTerm::proj(*i, m.to_ipc()?),
            STermKind::Inj(i, m, a, b) => IpcTerm::inj(*i, m.to_ipc()?, a.to_ipc()?, b.to_ipc()?),
            STermKind::Case {
                scrut,
                x,
                x_ty,
                left,
                y,
                y_ty,
                right,
                ty,
            } => IpcTerm::case(
                scrut.to_ipc()?,
                x,
                x_ty.to_ipc()?,
                left.to_ipc()?,
                y,
                y_ty.to_ipc()?,
                right.to_ipc()?,
                ty.to_ipc()?,
            ),
            STermKind::Abort(m, a) => IpcTerm::abort(m.to_ipc()?, a.to_ipc()?),
            STermKind::TyLam(..) => return Err(not_in(self.pos, "type abstraction", "IPC")),
            STermKind::TyApp(..) => return Err(not_in(self.pos, "type application", "IPC")),
        })
    }

    pub(super) fn to_fat(&self) -> Result<FatTerm, SyntaxError> {
        Ok(match &self.kind {
            STermKind::Var(x) => FatTerm::var(x),
            STermKind::Lam(x, a, m) => FatTerm::lam(x, a.to_fat()?, m.to_fat()?),
            STermKind::App(m, n) => FatTerm::app(m.to_fat()?, n.to_fat()?),
            STermKind::Pair(m, n) => FatTerm::pair(m.to_fat()?, n.to_fat()?),
            STermKind::Proj(i, m) => FatTerm::proj(*i, m.to_fat()?),
            STermKind::TyLam(x, m) => FatTerm::ty_lam(x, m.to_fat()?),
            STermKind::TyApp(m, a) => match &a.kind {
                STypeKind::Var(y) => FatTerm::ty_app(m.to_fat()?, y),
                _ => {
                    let found = a
                        .to_fat()
                        .map(|t| t.to_string())
                        .or_else(|_| a.to_ipc().map(|t| t.to_string()))
                        .unwrap_or_else(|_| "a compound type".to_string());
                    return Err(SyntaxError::NonAtomicInstantiation { pos: a.pos, found });
                }
            },
            STermKind::Inj(..) => return Err(not_in(self.pos, "injection", "atomic System F")),
            STermKind::Case { .. } => return Err(not_in(self.pos, "case", "atomic System F")),
            STermKind::Abort(..) => return Err(not_in(self.pos, "abort", "atomic System F")),
        })
    }
}
