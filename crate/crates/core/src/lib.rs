//! Proof-term workbench for intuitionistic propositional logic and atomic
//! System F, with the optimized Russell–Prawitz embedding of the former
//! into the latter and machinery to check that it simulates reduction.

pub mod fat;
pub mod fuzz;
pub mod gen;
pub mod ipc;
pub mod name;
pub mod rewrite;
pub mod rule;
pub mod side;
pub mod sim;
pub mod syntax;
pub mod translate;

pub use name::Name;
pub use rule::{Path, RewriteError, RuleId, RuleSet, SimClass};
pub use side::Side;
