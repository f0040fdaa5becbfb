use thiserror::Error;

/// Errors raised by the model, scheduler, oracle and simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwtError {
    /// A parameter violated one of its invariants. `key` names the offending field.
    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParam { key: &'static str, reason: String },

    #[error("interval {interval} s does not fit in an epoch of {epoch} s")]
    IntervalTooLong { interval: f64, epoch: f64 },

    #[error("{n_sessions} sessions exceed the {slots} mini-slots of an epoch")]
    TooManySessions { n_sessions: u32, slots: u32 },

    #[error("rate set is empty")]
    EmptyRateSet,

    #[error("interval {interval} holds {count} stations, capacity is {capacity}")]
    CapacityViolation {
        interval: usize,
        count: usize,
        capacity: usize,
    },

    #[error("assignment covers {got} stations, instance has {expected}")]
    StationCountMismatch { expected: usize, got: usize },

    #[error("instance too large to enumerate: {stations} stations, {choices} choices each")]
    EnumerationBudget { stations: usize, choices: usize },

    #[error("drift bound violated in epoch {epoch}: {lhs} > {rhs}")]
    Lemma1Violation { epoch: usize, lhs: f64, rhs: f64 },

    #[error("queue series has {len} samples, at least {min} required")]
    SeriesTooShort { len: usize, min: usize },
}

impl TwtError {
    pub(crate) fn invalid(key: &'static str, reason: impl Into<String>) -> Self {
        TwtError::InvalidParam {
            key,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, TwtError>;
