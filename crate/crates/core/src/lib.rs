//! Target Wake Time scheduling for 802.11ax power saving.
//!
//! - [`model`]: session, sleep and epoch energy; the fluid queue recursion.
//! - [`traffic`]: Poisson file arrivals and per-epoch random rates.
//! - [`scheduler`]: drift-plus-penalty interval assignment and the random benchmark.
//! - [`oracle`]: exhaustive solver for the per-epoch assignment problem.
//! - [`sim`]: the mini-slot simulator, drift bound checks and run metrics.
//! - [`par`]: order-preserving parallel map used by sweeps.

pub mod error;
pub mod exact;
pub mod model;
pub mod oracle;
pub mod par;
pub mod scheduler;
pub mod sim;
pub mod traffic;

pub use error::{Result, TwtError};
pub use model::{EnergyParams, EpochTiming, QueueState};
pub use scheduler::{EpochAssignment, SchedulerParams, SleepSemantics, Slot, StationSnapshot};
pub use sim::{Algorithm, EpochStats, RunMetrics, RunOptions, SimConfig, Simulator};
pub use traffic::{RateModel, TrafficParams};
