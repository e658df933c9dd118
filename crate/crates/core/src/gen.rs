//! Seeded, type-directed generation of well-typed IPC terms.
//!
//! Terms are grown from the goal type. Besides plain introductions and
//! eliminations the generator deliberately builds the major premise of an
//! elimination as an introduction, a case or an abort, so that every kind of
//! redex shows up regularly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ipc::{Context, IpcTerm, IpcType};
use crate::name::Name;
use crate::side::Side;

/// Attempts per goal before the generator backtracks.
pub const RETRY_BOUND: usize = 50;

/// Calls to the term builder allowed for one top-level attempt.
const WORK_LIMIT: usize = 5_000;

const TOP_LEVEL_ATTEMPTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Connective {
    Atom,
    Bottom,
    Imp,
    And,
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    pub size_budget: usize,
    pub type_depth: usize,
    pub connective_weights: BTreeMap<Connective, u32>,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            size_budget: 16,
            type_depth: 2,
            connective_weights: BTreeMap::from([
                (Connective::Atom, 4),
                (Connective::Bottom, 1),
                (Connective::Imp, 3),
                (Connective::And, 2),
                (Connective::Or, 2),
            ]),
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.size_budget == 0 {
            return Err(GenError::InvalidConfig("size budget must be at least 1".into()));
        }
        if self.connective_weights.values().all(|w| *w == 0) {
            return Err(GenError::InvalidConfig("connective weights are all zero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("could not generate a term of type {goal} within size {size_budget}")]
    GenerationFailed { goal: String, size_budget: usize },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
}

/// The context fuzzing runs in: `a:X, b:Y, f:X⊃Y, e:⊥, d:X∨Y, p:X∧Y`.
pub fn base_context() -> Context {
    let x = IpcType::var("X");
    let y = IpcType::var("Y");
    Context::new()
        .with("a", x.clone())
        .with("b", y.clone())
        .with("f", IpcType::imp(x.clone(), y.clone()))
        .with("e", IpcType::Bottom)
        .with("d", IpcType::or(x.clone(), y.clone()))
        .with("p", IpcType::and(x, y))
}

/// A term of type `goal` under `ctx`, determined by `cfg`.
pub fn gen_term(cfg: &GenConfig, ctx: &Context, goal: &IpcType) -> Result<IpcTerm, GenError> {
    cfg.validate()?;
    let mut g = Generator::new(cfg, ctx, 0);
    g.top(goal)
}

/// Sample number `index` of a fuzz run: a random goal type and a term of
/// that type under [`base_context`].
pub fn gen_sample(cfg: &GenConfig, index: u64) -> Result<(Context, IpcType, IpcTerm), GenError> {
    cfg.validate()?;
    let ctx = base_context();
    let mut g = Generator::new(cfg, &ctx, index.wrapping_add(1));
    let goal = g.random_type(cfg.type_depth);
    let t = g.top(&goal)?;
    Ok((ctx, goal, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Prod {
    Var,
    Intro,
    Eta,
    App,
    Proj,
    Case,
    Abort,
}

struct Generator<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    env: Vec<(Name, IpcType)>,
    counter: usize,
    work: usize,
}

impl<'a> Generator<'a> {
    fn new(cfg: &'a GenConfig, ctx: &Context, stream: u64) -> Generator<'a> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Generator {
            cfg,
            rng,
            env: ctx.iter().map(|(n, t)| (n.clone(), t.clone())).collect(),
            counter: 0,
            work: 0,
        }
    }

    fn top(&mut self, goal: &IpcType) -> Result<IpcTerm, GenError> {
        for _ in 0..TOP_LEVEL_ATTEMPTS {
            self.work = 0;
            let size = self.cfg.size_budget;
            if let Some(t) = self.term(goal, size) {
                return Ok(t);
            }
        }
        Err(GenError::GenerationFailed {
            goal: goal.to_string(),
            size_budget: self.cfg.size_budget,
        })
    }

    fn fresh_var(&mut self, base: &str) -> Name {
        self.counter += 1;
        Name::new(&format!("{base}{}", self.counter))
    }

    fn random_type(&mut self, depth: usize) -> IpcType {
        let weights = &self.cfg.connective_weights;
        let w = |c: Connective| weights.get(&c).copied().unwrap_or(0);
        let mut options = vec![(Connective::Atom, w(Connective::Atom)), (Connective::Bottom, w(Connective::Bottom))];
        if depth > 0 {
            options.extend([
                (Connective::Imp, w(Connective::Imp)),
                (Connective::And, w(Connective::And)),
                (Connective::Or, w(Connective::Or)),
            ]);
        }
        let pick = options
            .choose_weighted(&mut self.rng, |(_, w)| *w)
            .map(|(c, _)| *c)
            .unwrap_or(Connective::Atom);
        match pick {
            Connective::Atom => IpcType::var(if self.rng.gen_bool(0.5) { "X" } else { "Y" }),
            Connective::Bottom => IpcType::Bottom,
            Connective::Imp => IpcType::imp(self.random_type(depth - 1), self.random_type(depth - 1)),
            Connective::And => IpcType::and(self.random_type(depth - 1), self.random_type(depth - 1)),
            Connective::Or => IpcType::or(self.random_type(depth - 1), self.random_type(depth - 1)),
        }
    }

    /// An auxiliary type: usually small and random, sometimes one already
    /// inhabited by a variable.
    fn side_type(&mut self) -> IpcType {
        if self.rng.gen_bool(0.3) && !self.env.is_empty() {
            let i = self.rng.gen_range(0..self.env.len());
            return self.env[i].1.clone();
        }
        let depth = self.cfg.type_depth.min(1);
        self.random_type(depth)
    }

    fn vars_of(&self, goal: &IpcType) -> Vec<Name> {
        let mut seen: Vec<&Name> = Vec::new();
        let mut out = Vec::new();
        for (n, t) in self.env.iter().rev() {
            if seen.contains(&n) {
                continue;
            }
            seen.push(n);
            if t == goal {
                out.push(n.clone());
            }
        }
        out
    }

    fn productions(&self, goal: &IpcType, size: usize) -> Vec<(Prod, u32)> {
        let has_var = !self.vars_of(goal).is_empty();
        let small = size <= 3;
        let intro = match goal {
            IpcType::Imp(..) => size >= 2,
            IpcType::And(..) => size >= 3,
            IpcType::Or(..) => size >= 2,
            _ => false,
        };
        let eta = match goal {
            IpcType::Imp(..) => size >= 4,
            IpcType::And(..) => size >= 5,
            IpcType::Or(..) => size >= 8,
            _ => false,
        };
        let mut out = Vec::new();
        if has_var {
            out.push((Prod::Var, if small { 12 } else { 3 }));
        }
        if intro {
            out.push((Prod::Intro, 6));
        }
        if eta {
            out.push((Prod::Eta, 1));
        }
        if size >= 3 {
            out.push((Prod::App, 4));
        }
        if size >= 2 {
            out.push((Prod::Proj, 2));
            out.push((Prod::Abort, 2));
        }
        if size >= 4 {
            out.push((Prod::Case, 3));
        }
        out
    }

    fn term(&mut self, goal: &IpcType, size: usize) -> Option<IpcTerm> {
        if size == 0 {
            return None;
        }
        self.work += 1;
        let prods = self.productions(goal, size);
        if self.work <= WORK_LIMIT && !prods.is_empty() {
            for _ in 0..RETRY_BOUND {
                let prod = prods.choose_weighted(&mut self.rng, |(_, w)| *w).ok()?.0;
                if let Some(t) = self.build(prod, goal, size) {
                    return Some(t);
                }
                if self.work > WORK_LIMIT {
                    break;
                }
            }
        }
        // Backtracking failed: settle for a variable if there is one.
        self.build(Prod::Var, goal, size)
    }

    /// Split `total` into two positive parts.
    fn split(&mut self, total: usize) -> Option<(usize, usize)> {
        if total < 2 {
            return None;
        }
        let first = self.rng.gen_range(1..total);
        Some((first, total - first))
    }

    fn with_bound<T>(&mut self, x: &Name, ty: &IpcType, f: impl FnOnce(&mut Self) -> T) -> T {
        self.env.push((x.clone(), ty.clone()));
        let r = f(self);
        self.env.pop();
        r
    }

    fn build(&mut self, prod: Prod, goal: &IpcType, size: usize) -> Option<IpcTerm> {
        match prod {
            Prod::Var => {
                let vars = self.vars_of(goal);
                vars.choose(&mut self.rng).map(|n| IpcTerm::Var(n.clone()))
            }
            Prod::Intro => self.intro(goal, size),
            Prod::Eta => self.eta(goal, size),
            Prod::App => {
                let (fs, xs) = self.split(size - 1)?;
                let a = self.side_type();
                let f = self.major(&IpcType::imp(a.clone(), goal.clone()), fs)?;
                let x = self.term(&a, xs)?;
                Some(IpcTerm::app(f, x))
            }
            Prod::Proj => {
                let other = self.side_type();
                let side = if self.rng.gen_bool(0.5) { Side::Left } else { Side::Right };
                let ty = match side {
                    Side::Left => IpcType::and(goal.clone(), other),
                    Side::Right => IpcType::and(other, goal.clone()),
                };
                let m = self.major(&ty, size - 1)?;
                Some(IpcTerm::proj(side, m))
            }
            Prod::Abort => {
                let m = self.major(&IpcType::Bottom, size - 1)?;
                Some(IpcTerm::abort(m, goal.clone()))
            }
            Prod::Case => {
                let (ms, rest) = self.split(size - 1)?;
                let (ps, qs) = self.split(rest)?;
                let a = self.side_type();
                let b = self.side_type();
                let m = self.major(&IpcType::or(a.clone(), b.clone()), ms)?;
                let x = self.fresh_var("x");
                let y = self.fresh_var("y");
                let p = self.with_bound(&x, &a, |g| g.term(goal, ps))?;
                let q = self.with_bound(&y, &b, |g| g.term(goal, qs))?;
                Some(IpcTerm::Case {
                    scrut: Box::new(m),
                    left_var: x,
                    left_ty: a,
                    left: Box::new(p),
                    right_var: y,
                    right_ty: b,
                    right: Box::new(q),
                    ty: goal.clone(),
                })
            }
        }
    }

    fn intro(&mut self, goal: &IpcType, size: usize) -> Option<IpcTerm> {
        match goal {
            IpcType::Imp(a, b) => {
                let x = self.fresh_var("x");
                let body = self.with_bound(&x, a, |g| g.term(b, size - 1))?;
                Some(IpcTerm::Lam {
                    var: x,
                    ty: (**a).clone(),
                    body: Box::new(body),
                })
            }
            IpcType::And(a, b) => {
                let (l, r) = self.split(size - 1)?;
                let m = self.term(a, l)?;
                let n = self.term(b, r)?;
                Some(IpcTerm::pair(m, n))
            }
            IpcType::Or(a, b) => {
                let side = if self.rng.gen_bool(0.5) { Side::Left } else { Side::Right };
                let m = self.term(side.pick(a, b), size - 1)?;
                Some(IpcTerm::inj(side, m, (**a).clone(), (**b).clone()))
            }
            _ => None,
        }
    }

    /// `λx.M x`, `⟨M.1, M.2⟩` or `case M of inl x | inr y`.
    fn eta(&mut self, goal: &IpcType, size: usize) -> Option<IpcTerm> {
        match goal {
            IpcType::Imp(a, _) => {
                let x = self.fresh_var("x");
                let m = self.term(goal, size - 2)?;
                Some(IpcTerm::Lam {
                    var: x.clone(),
                    ty: (**a).clone(),
                    body: Box::new(IpcTerm::app(m, IpcTerm::Var(x))),
                })
            }
            IpcType::And(..) => {
                let budget = (size - 3) / 2;
                let m = self.term(goal, budget)?;
                Some(IpcTerm::pair(
                    IpcTerm::proj(Side::Left, m.clone()),
                    IpcTerm::proj(Side::Right, m),
                ))
            }
            IpcType::Or(a, b) => {
                let m = self.term(goal, size - 5)?;
                let x = self.fresh_var("x");
                let y = self.fresh_var("y");
                Some(IpcTerm::Case {
                    scrut: Box::new(m),
                    left_var: x.clone(),
                    left_ty: (**a).clone(),
                    left: Box::new(IpcTerm::inj(Side::Left, IpcTerm::Var(x), (**a).clone(), (**b).clone())),
                    right_var: y.clone(),
                    right_ty: (**b).clone(),
                    right: Box::new(IpcTerm::inj(Side::Right, IpcTerm::Var(y), (**a).clone(), (**b).clone())),
                    ty: goal.clone(),
                })
            }
            _ => None,
        }
    }

    /// The major premise of an elimination: biased towards the forms that
    /// make the elimination a redex.
    fn major(&mut self, ty: &IpcType, size: usize) -> Option<IpcTerm> {
        let roll = self.rng.gen_range(0..10);
        let forced = match roll {
            0..=2 => Some(Prod::Intro),
            3..=4 => Some(Prod::Case),
            5 => Some(Prod::Abort),
            _ => None,
        };
        if let Some(prod) = forced {
            if self.productions(ty, size).iter().any(|(p, _)| *p == prod) {
                if let Some(t) = self.build(prod, ty, size) {
                    return Some(t);
                }
            }
        }
        self.term(ty, size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipc::typecheck;

    #[test]
    fn budget_one_gives_the_variable() {
        let cfg = GenConfig {
            size_budget: 1,
            ..GenConfig::default()
        };
        let ctx = Context::new().with("x", IpcType::var("X"));
        assert_eq!(gen_term(&cfg, &ctx, &IpcType::var("X")), Ok(IpcTerm::var("x")));
    }

    #[test]
    fn impossible_goal_fails() {
        let cfg = GenConfig {
            size_budget: 1,
            ..GenConfig::default()
        };
        assert!(matches!(
            gen_term(&cfg, &Context::new(), &IpcType::var("X")),
            Err(GenError::GenerationFailed { .. })
        ));
    }

    #[test]
    fn generated_terms_have_the_goal_type() {
        let goal = IpcType::imp(IpcType::var("A"), IpcType::var("A"));
        for seed in 0..20 {
            let t = gen_term(&GenConfig::with_seed(seed), &Context::new(), &goal).unwrap();
            assert_eq!(typecheck(&Context::new(), &t), Ok(goal.clone()));
        }
    }

    #[test]
    fn samples_are_deterministic() {
        let cfg = GenConfig::with_seed(7);
        for i in 0..10 {
            let a = gen_sample(&cfg, i).map(|(_, _, t)| t.to_string());
            let b = gen_sample(&cfg, i).map(|(_, _, t)| t.to_string());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let cfg = GenConfig {
            size_budget: 0,
            ..GenConfig::default()
        };
        assert!(cfg.validate().is_err());
        let mut cfg = GenConfig::default();
        for w in cfg.connective_weights.values_mut() {
            *w = 0;
        }
        assert!(cfg.validate().is_err());
    }
}
