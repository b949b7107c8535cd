use thiserror::Error;

use crate::groups::GroupLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("no element of order {order} in F_{prime} ({order} does not divide p - 1)")]
    UnsupportedOrder { order: u32, prime: u32 },
    #[error("{radical} does not exist in F_{prime}; cannot construct group {group}")]
    MissingRadical {
        group: GroupLabel,
        radical: &'static str,
        prime: u32,
    },
    #[error("closure exceeded cap of {cap} elements")]
    RunawayClosure { cap: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    DependentRows { rank: usize, rows: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("module dimension {dim} outside supported range 1..={max}")]
    ModuleRange { dim: usize, max: usize },
    #[error("element with radicand {radicand} has no F_p action on W_{dim}")]
    NotRealizable { dim: usize, radicand: u32 },
    #[error("torus weights collide for W_{m} x W_{n}: need 2(m+n-2) < p-1 = {bound}")]
    WeightCollision { m: usize, n: usize, bound: u32 },
    #[error(
        "W_{m} x W_{n} is not completely reducible: summands cover {covered} of {total} dimensions"
    )]
    NotCompletelyReducible {
        m: usize,
        n: usize,
        covered: usize,
        total: usize,
    },
    #[error("highest weight {weight} occurs with multiplicity {multiplicity} in W_{m} x W_{n}")]
    Multiplicity {
        m: usize,
        n: usize,
        weight: i64,
        multiplicity: usize,
    },
    #[error(
        "summand generated from highest weight {weight} has dimension {dim} (expected {expected})"
    )]
    SummandMismatch {
        weight: i64,
        dim: usize,
        expected: usize,
    },
    #[error("degree {degree} is not a summand of W_{m} x W_{n}")]
    NotASummand { degree: usize, m: usize, n: usize },
    #[error("characteristic {prime} divides the group order {order}")]
    UnsupportedCharacteristic { prime: u32, order: usize },
    #[error("degree {degree} out of range (max {max})")]
    DegreeRange { degree: usize, max: usize },
    #[error("transvectant order {r} exceeds min degree {max}")]
    TransvectantOrder { r: usize, max: usize },
    #[error("group {group}: no nonzero invariant found in degree {degree}")]
    NoInvariant { group: GroupLabel, degree: usize },
    #[error("group {group}: W_{dim}^G has dimension {found}, expected {expected}")]
    FixedSpaceDimension {
        group: GroupLabel,
        dim: usize,
        found: usize,
        expected: usize,
    },
    #[error("unknown group label {0:?}")]
    UnknownGroup(String),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("check id {0:?} registered twice")]
    DuplicateCheck(String),
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
