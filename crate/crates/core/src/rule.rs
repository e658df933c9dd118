//! Reduction rule identifiers, rule sets and subterm positions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Every named reduction rule of either calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleId {
    BetaImp,
    BetaAnd,
    BetaOr,
    EtaImp,
    EtaAnd,
    EtaOr,
    PiImp,
    PiAnd,
    PiOr,
    PiBot,
    VarpiImp,
    VarpiAnd,
    VarpiOr,
    VarpiBot,
    BetaImpF,
    BetaAndF,
    BetaAll,
    EtaImpF,
    EtaAndF,
    EtaAll,
}

/// How the translations of a redex and of its contractum must be related.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimClass {
    /// Related by β-reduction in the target.
    Beta,
    /// Related by βη-reduction in the target.
    BetaEta,
    /// Translations coincide up to α.
    Identity,
}

impl RuleId {
    pub const ALL: [RuleId; 20] = [
        RuleId::BetaImp,
        RuleId::BetaAnd,
        RuleId::BetaOr,
        RuleId::EtaImp,
        RuleId::EtaAnd,
        RuleId::EtaOr,
        RuleId::PiImp,
        RuleId::PiAnd,
        RuleId::PiOr,
        RuleId::PiBot,
        RuleId::VarpiImp,
        RuleId::VarpiAnd,
        RuleId::VarpiOr,
        RuleId::VarpiBot,
        RuleId::BetaImpF,
        RuleId::BetaAndF,
        RuleId::BetaAll,
        RuleId::EtaImpF,
        RuleId::EtaAndF,
        RuleId::EtaAll,
    ];

    pub const IPC: [RuleId; 14] = [
        RuleId::BetaImp,
        RuleId::BetaAnd,
        RuleId::BetaOr,
        RuleId::EtaImp,
        RuleId::EtaAnd,
        RuleId::EtaOr,
        RuleId::PiImp,
        RuleId::PiAnd,
        RuleId::PiOr,
        RuleId::PiBot,
        RuleId::VarpiImp,
        RuleId::VarpiAnd,
        RuleId::VarpiOr,
        RuleId::VarpiBot,
    ];

    pub const FAT: [RuleId; 6] = [
        RuleId::BetaImpF,
        RuleId::BetaAndF,
        RuleId::BetaAll,
        RuleId::EtaImpF,
        RuleId::EtaAndF,
        RuleId::EtaAll,
    ];

    pub fn is_ipc(self) -> bool {
        (self as u32) < RuleId::BetaImpF as u32
    }

    pub fn is_fat(self) -> bool {
        !self.is_ipc()
    }

    /// The IPC commuting conversions (π and ϖ rules).
    pub fn is_commuting(self) -> bool {
        matches!(
            self,
            RuleId::PiImp
                | RuleId::PiAnd
                | RuleId::PiOr
                | RuleId::PiBot
                | RuleId::VarpiImp
                | RuleId::VarpiAnd
                | RuleId::VarpiOr
                | RuleId::VarpiBot
        )
    }

    /// β rules of IPC, the ones subject to head strictness.
    pub fn is_ipc_beta(self) -> bool {
        matches!(self, RuleId::BetaImp | RuleId::BetaAnd | RuleId::BetaOr)
    }

    /// Which target relation the translation of this IPC rule lands in.
    pub fn sim_class(self) -> Option<SimClass> {
        match self {
            RuleId::BetaImp | RuleId::BetaAnd => Some(SimClass::Beta),
            RuleId::BetaOr | RuleId::EtaImp | RuleId::EtaAnd | RuleId::EtaOr => {
                Some(SimClass::BetaEta)
            }
            r if r.is_commuting() => Some(SimClass::Identity),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RuleId::BetaImp => "beta-imp",
            RuleId::BetaAnd => "beta-and",
            RuleId::BetaOr => "beta-or",
            RuleId::EtaImp => "eta-imp",
            RuleId::EtaAnd => "eta-and",
            RuleId::EtaOr => "eta-or",
            RuleId::PiImp => "pi-imp",
            RuleId::PiAnd => "pi-and",
            RuleId::PiOr => "pi-or",
            RuleId::PiBot => "pi-bot",
            RuleId::VarpiImp => "varpi-imp",
            RuleId::VarpiAnd => "varpi-and",
            RuleId::VarpiOr => "varpi-or",
            RuleId::VarpiBot => "varpi-bot",
            RuleId::BetaImpF => "beta-imp-f",
            RuleId::BetaAndF => "beta-and-f",
            RuleId::BetaAll => "beta-all",
            RuleId::EtaImpF => "eta-imp-f",
            RuleId::EtaAndF => "eta-and-f",
            RuleId::EtaAll => "eta-all",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.label() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

/// Why a rewrite could not be performed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("term is not a {0} redex")]
    NotARedex(RuleId),
    #[error("rule {0} does not belong to this calculus")]
    ForeignRule(RuleId),
    #[error("no subterm at position {0}")]
    InvalidPosition(Path),
}

/// A set of rules, stored as a bit mask over [`RuleId`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RuleSet(u32);

impl RuleSet {
    pub const EMPTY: RuleSet = RuleSet(0);

    pub fn of(rules: &[RuleId]) -> RuleSet {
        rules.iter().copied().collect()
    }

    pub fn single(rule: RuleId) -> RuleSet {
        RuleSet(1 << rule as u32)
    }

    pub fn ipc_all() -> RuleSet {
        RuleSet::of(&RuleId::IPC)
    }

    pub fn fat_all() -> RuleSet {
        RuleSet::of(&RuleId::FAT)
    }

    pub fn fat_beta() -> RuleSet {
        RuleSet::of(&[RuleId::BetaImpF, RuleId::BetaAndF, RuleId::BetaAll])
    }

    pub fn fat_beta_eta() -> RuleSet {
        RuleSet::fat_all()
    }

    pub fn contains(self, rule: RuleId) -> bool {
        self.0 & (1 << rule as u32) != 0
    }

    pub fn insert(&mut self, rule: RuleId) {
        self.0 |= 1 << rule as u32;
    }

    pub fn iter(self) -> impl Iterator<Item = RuleId> {
        RuleId::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl FromIterator<RuleId> for RuleSet {
    fn from_iter<I: IntoIterator<Item = RuleId>>(iter: I) -> Self {
        let mut set = RuleSet::EMPTY;
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl fmt::Debug for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A subterm position: the child indices followed from the root.
///
/// Child numbering: λ/Λ/projection/injection/abort/type application have a
/// single child `0`; application and pair have `0` and `1`; a case has the
/// scrutinee at `0` and the two branches at `1` and `2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Path(pub Vec<usize>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Path {
        let mut v = self.0.clone();
        v.push(i);
        Path(v)
    }

    /// This path placed under `prefix`.
    pub fn under(&self, prefix: &[usize]) -> Path {
        let mut v = prefix.to_vec();
        v.extend_from_slice(&self.0);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl From<Path> for String {
    fn from(p: Path) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed position `{0}`: expected `root` or dot-separated child indices")]
pub struct BadPath(pub String);

impl FromStr for Path {
    type Err = BadPath;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(Path::root());
        }
        s.split('.')
            .map(|part| part.parse::<usize>().map_err(|_| BadPath(s.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Path)
    }
}

impl TryFrom<String> for Path {
    type Error = BadPath;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.label().parse::<RuleId>().unwrap(), r);
        }
        assert!("beta".parse::<RuleId>().is_err());
    }

    #[test]
    fn calculus_partition() {
        assert!(RuleId::IPC.iter().all(|r| r.is_ipc()));
        assert!(RuleId::FAT.iter().all(|r| r.is_fat()));
        assert_eq!(RuleId::IPC.iter().filter(|r| r.is_commuting()).count(), 8);
    }

    #[test]
    fn path_text() {
        assert_eq!(Path::root().to_string(), "root");
        let p: Path = "0.2.1".parse().unwrap();
        assert_eq!(p, Path(vec![0, 2, 1]));
        assert_eq!(p.to_string(), "0.2.1");
        assert!("0.x".parse::<Path>().is_err());
    }

    #[test]
    fn rule_set_membership() {
        let s = RuleSet::fat_beta();
        assert!(s.contains(RuleId::BetaAll));
        assert!(!s.contains(RuleId::EtaAll));
        assert_eq!(s.iter().count(), 3);
    }
}
