use thiserror::Error;

use crate::key::VertexKey;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("enumeration exceeded the member cap of {cap} vertices")]
    ResourceLimit { cap: usize },

    #[error("invalid family spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("invalid vertex key `{text}` for family {family}")]
    InvalidKey { family: String, text: String },

    #[error("base vertex {0} is outside the subgraph")]
    BaseOutsideSubgraph(VertexKey),

    #[error("graph {0} has no declared degree bound")]
    NoDegreeBound(String),

    #[error("turn {turn}: vertex {vertex} is already {state}")]
    ProtectionOverlap {
        turn: usize,
        vertex: VertexKey,
        state: &'static str,
    },

    #[error("turn {turn}: {size} protections exceed the budget {budget}")]
    BudgetExceeded { turn: usize, size: usize, budget: u64 },

    #[error("budget is not non-decreasing at index {index}")]
    NonMonotoneBudget { index: usize },

    #[error("turn {turn}: cannot split {size} protections over budgets {budgets:?}")]
    PartitionInfeasible {
        turn: usize,
        size: usize,
        budgets: Vec<u64>,
    },

    #[error("scan exceeded radius {cap} without satisfying the sphere inequality")]
    ScanCapExceeded { cap: usize },

    #[error("hypothesis violated at index {index}: {reason}")]
    HypothesisViolated { index: usize, reason: String },

    #[error("precondition violated at index {index}: {reason}")]
    PreconditionViolated { index: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("strategy source failed: {0}")]
    SourceFailure(String),

    #[error("transfer broke an invariant at turn {turn}: {reason}")]
    TransferInvariant { turn: usize, reason: String },

    #[error("certificate refused: {0}")]
    Refused(String),

    #[error("malformed {what}: {reason}")]
    Malformed { what: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag, used for structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ResourceLimit { .. } => "resource_limit",
            Error::InvalidSpec { .. } => "invalid_spec",
            Error::InvalidKey { .. } => "invalid_key",
            Error::BaseOutsideSubgraph(_) => "base_outside_subgraph",
            Error::NoDegreeBound(_) => "no_degree_bound",
            Error::ProtectionOverlap { .. } => "protection_overlap",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NonMonotoneBudget { .. } => "non_monotone_budget",
            Error::PartitionInfeasible { .. } => "partition_infeasible",
            Error::ScanCapExceeded { .. } => "scan_cap_exceeded",
            Error::HypothesisViolated { .. } => "hypothesis_violated",
            Error::PreconditionViolated { .. } => "precondition_violated",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::SourceFailure(_) => "source_failure",
            Error::TransferInvariant { .. } => "transfer_invariant",
            Error::Refused(_) => "refused",
            Error::Malformed { .. } => "malformed",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
