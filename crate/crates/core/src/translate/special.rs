//! Bounded checks for the z-special, var-special and pair-special
//! predicates. Each predicate quantifies over all argument vectors `U⃗`;
//! here only vectors over a finite pool, up to a fixed length, are tried,
//! so a `true` answer means "no counter-example within the bound".

use super::{at_apply, AtArg};
use crate::fat::{FatTerm, FatType};
use crate::name::{fresh, Name};
use crate::side::Side;

pub const DEFAULT_MAX_LEN: usize = 3;

/// A fresh variable, `λw.w`, both projections and a fresh type variable.
pub fn default_pool() -> Vec<AtArg> {
    let v = fresh("v", |_| false);
    let w = fresh("w", |_| false);
    let tv = fresh("Y", |_| false);
    vec![
        AtArg::Term(FatTerm::Var(v)),
        AtArg::Term(FatTerm::lam_n(w.clone(), FatType::Var(tv.clone()), FatTerm::Var(w))),
        AtArg::Proj(Side::Left),
        AtArg::Proj(Side::Right),
        AtArg::TypeVar(tv),
    ]
}

/// Visit `p@U⃗` for every vector over `pool` of length at most `max_len`,
/// stopping early when `visit` returns `false`.
fn all_applications(
    p: &FatTerm,
    pool: &[AtArg],
    max_len: usize,
    visit: &mut impl FnMut(&FatTerm) -> bool,
) -> bool {
    if !visit(p) {
        return false;
    }
    if max_len == 0 {
        return true;
    }
    pool.iter()
        .all(|u| all_applications(&at_apply(p, u), pool, max_len - 1, visit))
}

pub fn is_z_special_bounded(p: &FatTerm, z: &Name, pool: &[AtArg], max_len: usize) -> bool {
    all_applications(p, pool, max_len, &mut |t| !matches!(t, FatTerm::Var(v) if v == z))
}

pub fn is_var_special_bounded(p: &FatTerm, pool: &[AtArg], max_len: usize) -> bool {
    let fv = p.free_term_vars();
    all_applications(p, pool, max_len, &mut |t| match t {
        FatTerm::Var(v) => fv.contains(v),
        _ => true,
    })
}

pub fn is_pair_special_bounded(p: &FatTerm, pool: &[AtArg], max_len: usize) -> bool {
    all_applications(p, pool, max_len, &mut |t| match t {
        FatTerm::Pair(a, b) => a.free_term_vars() == b.free_term_vars(),
        _ => true,
    })
}
