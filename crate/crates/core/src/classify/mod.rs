//! Decision procedures for curvature-restricted structures.

mod checks;
mod rank;
mod relation;

use std::fmt;
use std::str::FromStr;

use curvlab_expr::ZeroTestConfig;

pub use checks::{
    classify, compatibility, compatibility_tensor, decomposition, ein, pseudosymmetry, relation_family, ricci_derivative,
    roter, CheckOutcome, CompatibilityOutcome, Decomposition, DecompositionOutcome, EinOutcome, Ingredients,
    PseudoOutcome, RicciDerivativeOutcome, RoterOutcome, StructureReport, TauOutcome,
};
pub use rank::{certified_rank, combinations, quasi_einstein, rank_at, QuasiEinstein, RankCertificate};
pub use relation::{
    solve_relation, verify_relation, RelationError, RelationQuery, RelationResult, RelationSolution, RelationWitness,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub zero: ZeroTestConfig,
    /// Generic points at which linear systems are sampled.
    pub points: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            zero: ZeroTestConfig::default(),
            points: 2,
        }
    }
}

impl ClassifyConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.zero.seed = seed;
        self
    }
}

/// A named classification check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    RicciDerivative,
    QuasiEinstein,
    Ein,
    Decompositions,
    Semisymmetric,
    Pseudosymmetry,
    Roter,
    RelationFamily,
    Compatibility,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::RicciDerivative,
        Check::QuasiEinstein,
        Check::Ein,
        Check::Decompositions,
        Check::Semisymmetric,
        Check::Pseudosymmetry,
        Check::Roter,
        Check::RelationFamily,
        Check::Compatibility,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::RicciDerivative => "ricci_derivative",
            Check::QuasiEinstein => "quasi_einstein",
            Check::Ein => "ein",
            Check::Decompositions => "decompositions",
            Check::Semisymmetric => "semisymmetric",
            Check::Pseudosymmetry => "pseudosymmetry",
            Check::Roter => "roter",
            Check::RelationFamily => "relation_family",
            Check::Compatibility => "compatibility",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown check `{0}` (expected one of: ricci_derivative, quasi_einstein, ein, decompositions, semisymmetric, pseudosymmetry, roter, relation_family, compatibility)")]
pub struct UnknownCheck(pub String);

impl FromStr for Check {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let alias = match s {
            "codazzi" | "cyclic_parallel" => Some(Check::RicciDerivative),
            "roter_type" | "generalized_roter" => Some(Check::Roter),
            _ => None,
        };
        alias
            .or_else(|| Check::ALL.into_iter().find(|c| c.name() == s))
            .ok_or_else(|| UnknownCheck(s.to_string()))
    }
}

