use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra {series}{rank}: {reason}")]
    InvalidAlgebra {
        series: String,
        rank: usize,
        reason: &'static str,
    },
    #[error("weight has {found} labels, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("weight {weight} is not in P+^{level}")]
    NotInLevel { weight: String, level: u32 },
    #[error("level must be a positive integer")]
    ZeroLevel,
    #[error("triple {0} is not in Ω (Λ̇+Λ̈−Λ is not in the root lattice)")]
    NotInOmega(String),
    #[error("S-matrix check failed: {check} deviation {deviation:.3e} exceeds {tolerance:.0e}")]
    NumericCheck {
        check: &'static str,
        deviation: f64,
        tolerance: f64,
    },
    #[error(
        "Verlinde value N[{i}][{j}][{k}] = {value:.9} is {distance:.3e} from an integer (tolerance {tolerance:.0e})"
    )]
    Integrality {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
        distance: f64,
        tolerance: f64,
    },
    #[error("Verlinde value N[{i}][{j}][{k}] rounds to negative integer {value}")]
    NegativeFusion { i: usize, j: usize, k: usize, value: i64 },
    #[error("fusion labels out of range: {0}")]
    OutOfRange(String),
    #[error("classification refused: {0}")]
    Hypothesis(HypothesisViolation),
    #[error("rank {rank} exceeds the character computation guard (rank <= {max})")]
    RankGuard { rank: usize, max: usize },
    #[error("character peeling left negative multiplicity {mult} for weight {weight} at grade {grade}")]
    NegativeMultiplicity {
        weight: String,
        grade: usize,
        mult: i64,
    },
    #[error("branching produced highest weight {weight} outside P+^{level}")]
    LevelOverflow { weight: String, level: u32 },
}

/// Which standing hypothesis of the orbit classification is not met.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisViolation {
    /// Rationality and C2-cofiniteness are only proved for E8 with one level equal to 2.
    RationalityNotAssumed { algebra: String, k: u32, l: u32 },
    /// Some triple in Ω has a nontrivial stabilizer in `P∨/Q∨`.
    FixedPoint {
        triple: String,
        /// The same triple as Dynkin labels, e.g. `(1), (1), (2)`.
        labels: String,
        stabilizer_order: usize,
    },
}

impl fmt::Display for HypothesisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RationalityNotAssumed { algebra, k, l } => write!(
                f,
                "rationality and C2-cofiniteness of the coset for {algebra} at levels ({k}, {l}) \
                 are not established; pass the assumption explicitly"
            ),
            Self::FixedPoint {
                triple,
                labels,
                stabilizer_order,
            } => write!(
                f,
                "the P∨/Q∨ action on Ω is not free: triple {triple} = ({labels}) has stabilizer of order {stabilizer_order}"
            ),
        }
    }
}
