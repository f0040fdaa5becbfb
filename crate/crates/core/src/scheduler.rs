//! Per-epoch TWT interval assignment.
//!
//! [`jtwsa_assign`] ranks stations by `Q·R − V·(E_s − E_sleep)`, keeps the top
//! `L·K`, and hands the `K` best the shortest interval, the next `K` the second
//! shortest, and so on. Stations with a non-positive weight sleep.
//! [`random_assign`] is the benchmark: a uniformly random capacity-feasible
//! filling of all `L·K` places.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Result, TwtError};
use crate::model::EpochTiming;

/// What a scheduler sees of one station at an epoch boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationSnapshot {
    pub station_id: u32,
    /// `Q_m(t)`.
    pub backlog_bits: f64,
    /// Bits one session carries at this epoch's rate.
    pub bits_per_session: f64,
}

/// How stations that are not given an interval spend the epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SleepSemantics {
    /// No session at all for the whole epoch.
    #[default]
    FullSleep,
    /// Interval set to the epoch length: one session at the epoch's last slot.
    SingleSession,
}

impl SleepSemantics {
    pub fn as_str(self) -> &'static str {
        match self {
            SleepSemantics::FullSleep => "full_sleep",
            SleepSemantics::SingleSession => "single_session",
        }
    }
}

impl fmt::Display for SleepSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SleepSemantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full_sleep" => Ok(SleepSemantics::FullSleep),
            "single_session" => Ok(SleepSemantics::SingleSession),
            other => Err(format!(
                "expected full_sleep or single_session, got `{other}`"
            )),
        }
    }
}

/// Per-station decision for one epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    /// Wake every `interval_slots[l]` mini-slots.
    Interval(usize),
    /// Sleep the whole epoch.
    Sleep,
    /// Interval equal to the epoch: a single session at its last mini-slot.
    EpochEnd,
}

/// Interval decision for every station, in snapshot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochAssignment {
    pub slots: Vec<Slot>,
}

impl EpochAssignment {
    pub fn all_sleep(num_stations: usize) -> Self {
        EpochAssignment {
            slots: vec![Slot::Sleep; num_stations],
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of stations holding interval `l`.
    pub fn count(&self, l: usize) -> usize {
        self.slots
            .iter()
            .filter(|s| **s == Slot::Interval(l))
            .count()
    }

    /// Stations per interval.
    pub fn counts(&self, num_intervals: usize) -> Vec<usize> {
        let mut counts = vec![0; num_intervals];
        for s in &self.slots {
            if let Slot::Interval(l) = *s {
                if l < num_intervals {
                    counts[l] += 1;
                } else {
                    counts.resize(l + 1, 0);
                    counts[l] += 1;
                }
            }
        }
        counts
    }

    /// Checks the interval indices and the per-interval capacity `k`.
    pub fn check_capacity(&self, num_intervals: usize, k: usize) -> Result<()> {
        for (l, &count) in self.counts(num_intervals).iter().enumerate() {
            if l >= num_intervals {
                if count > 0 {
                    return Err(TwtError::invalid(
                        "assignment",
                        format!("interval index {l} out of range (L = {num_intervals})"),
                    ));
                }
            } else if count > k {
                return Err(TwtError::CapacityViolation {
                    interval: l,
                    count,
                    capacity: k,
                });
            }
        }
        Ok(())
    }

    /// Sessions station `m` gets over the epoch.
    pub fn n_sessions(&self, m: usize, timing: &EpochTiming) -> u32 {
        match self.slots[m] {
            Slot::Interval(l) => timing.sessions(l),
            Slot::Sleep => 0,
            Slot::EpochEnd => 1,
        }
    }

    /// Wake period in mini-slots, if the station wakes at all.
    pub fn period_slots(&self, m: usize, timing: &EpochTiming) -> Option<u32> {
        match self.slots[m] {
            Slot::Interval(l) => Some(timing.interval_slots()[l]),
            Slot::Sleep => None,
            Slot::EpochEnd => Some(timing.slots_per_epoch()),
        }
    }
}

/// Knobs of the drift-plus-penalty scheduler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchedulerParams {
    /// Energy/queue tradeoff `V`.
    pub v: f64,
    /// Stations per interval, `K`.
    pub k_capacity: usize,
    /// `E_s − E_sleep`, J.
    pub wake_cost: f64,
    pub sleep_semantics: SleepSemantics,
}

impl SchedulerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.v.is_finite() && self.v >= 0.0) {
            return Err(TwtError::invalid("v", "must be >= 0"));
        }
        if self.k_capacity == 0 {
            return Err(TwtError::invalid("k_capacity", "must be >= 1"));
        }
        if !(self.wake_cost.is_finite() && self.wake_cost >= 0.0) {
            return Err(TwtError::invalid(
                "p_sleep_w",
                "session energy must not be below sleep energy",
            ));
        }
        Ok(())
    }
}

/// `Q·R − V·(E_s − E_sleep)`.
pub fn sta_weight(s: &StationSnapshot, p: &SchedulerParams) -> f64 {
    s.backlog_bits * s.bits_per_session - p.v * p.wake_cost
}

/// Station positions sorted by descending weight, ties to the lower station id.
pub fn rank_by_weight(weights: &[f64], ids: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        weights[b]
            .partial_cmp(&weights[a])
            .unwrap_or(Ordering::Equal)
            .then(ids[a].cmp(&ids[b]))
    });
    order
}

/// Greedy assignment from precomputed weights. Exposed so the oracle can
/// run the same fill on synthetic instances.
pub fn assign_by_weight(
    weights: &[f64],
    ids: &[u32],
    num_intervals: usize,
    k: usize,
    sleep: SleepSemantics,
) -> EpochAssignment {
    let idle = match sleep {
        SleepSemantics::FullSleep => Slot::Sleep,
        SleepSemantics::SingleSession => Slot::EpochEnd,
    };
    let mut slots = vec![idle; weights.len()];
    let order = rank_by_weight(weights, ids);
    for (rank, &m) in order.iter().take(num_intervals * k).enumerate() {
        if weights[m] > 0.0 {
            slots[m] = Slot::Interval(rank / k);
        }
    }
    EpochAssignment { slots }
}

/// Drift-plus-penalty assignment for one epoch.
pub fn jtwsa_assign(
    stations: &[StationSnapshot],
    timing: &EpochTiming,
    p: &SchedulerParams,
) -> EpochAssignment {
    let weights: Vec<f64> = stations.iter().map(|s| sta_weight(s, p)).collect();
    let ids: Vec<u32> = stations.iter().map(|s| s.station_id).collect();
    assign_by_weight(
        &weights,
        &ids,
        timing.num_intervals(),
        p.k_capacity,
        p.sleep_semantics,
    )
}

/// Benchmark: `min(M, L·K)` stations chosen uniformly, spread uniformly over
/// the capacity-`K` places; everyone else sleeps.
pub fn random_assign<R: Rng + ?Sized>(
    rng: &mut R,
    stations: &[StationSnapshot],
    timing: &EpochTiming,
    k_capacity: usize,
) -> EpochAssignment {
    let m = stations.len();
    let mut places: Vec<usize> = (0..timing.num_intervals())
        .flat_map(|l| std::iter::repeat_n(l, k_capacity))
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    let chosen = m.min(places.len());
    let (picked, _) = order.partial_shuffle(rng, chosen);
    let (spots, _) = places.partial_shuffle(rng, chosen);
    let mut slots = vec![Slot::Sleep; m];
    for (&st, &l) in picked.iter().zip(spots.iter()) {
        slots[st] = Slot::Interval(l);
    }
    EpochAssignment { slots }
}
