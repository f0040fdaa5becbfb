//! Energy and queue formulas of the TWT system model.
//!
//! Time inside the simulator is counted in integer mini-slots; seconds only
//! appear at the configuration boundary ([`EpochTiming::new`]). Energy is in
//! joules and data in bits.

use crate::error::{Result, TwtError};

/// Relative slack allowed when checking that a duration in seconds is an
/// integer multiple of the mini-slot.
const MULTIPLE_TOL: f64 = 1e-9;

/// Power levels and session-time fractions of a station radio.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyParams {
    /// Downlink power, W.
    pub p_down: f64,
    /// Uplink power, W.
    pub p_up: f64,
    /// Sleep power, W.
    pub p_sleep: f64,
    /// Length of one TWT session, s.
    pub t_up_session: f64,
    /// Fraction of a session spent on downlink.
    pub frac_down: f64,
    /// Fraction of a session spent on uplink.
    pub frac_up: f64,
}

impl EnergyParams {
    /// Uplink-only radio with 1 W transmit power, 0.15 W sleep power and 1 ms sessions.
    pub fn reference() -> Self {
        EnergyParams {
            p_down: 0.0,
            p_up: 1.0,
            p_sleep: 0.15,
            t_up_session: 1e-3,
            frac_down: 0.0,
            frac_up: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (key, p) in [
            ("p_down_w", self.p_down),
            ("p_up_w", self.p_up),
            ("p_sleep_w", self.p_sleep),
        ] {
            if !(p.is_finite() && p >= 0.0) {
                return Err(TwtError::invalid(
                    key,
                    format!("power must be >= 0, got {p}"),
                ));
            }
        }
        if !(self.t_up_session.is_finite() && self.t_up_session > 0.0) {
            return Err(TwtError::invalid(
                "t_up_s",
                format!("session length must be > 0, got {}", self.t_up_session),
            ));
        }
        for (key, f) in [("frac_down", self.frac_down), ("frac_up", self.frac_up)] {
            if !(0.0..=1.0).contains(&f) {
                return Err(TwtError::invalid(
                    key,
                    format!("fraction must lie in [0, 1], got {f}"),
                ));
            }
        }
        if self.frac_down + self.frac_up > 1.0 + MULTIPLE_TOL {
            return Err(TwtError::invalid(
                "frac_up",
                "frac_down + frac_up exceeds 1",
            ));
        }
        Ok(())
    }

    pub fn session_energy(&self) -> f64 {
        session_energy(self)
    }

    pub fn sleep_energy(&self, slot_len: f64) -> f64 {
        sleep_energy(self, slot_len)
    }

    /// Extra energy a station spends on one session compared with sleeping
    /// through the same mini-slot.
    pub fn wake_cost(&self, slot_len: f64) -> f64 {
        self.session_energy() - self.sleep_energy(slot_len)
    }
}

/// Energy of a single TWT session: downlink plus uplink share of `t_up`.
pub fn session_energy(ep: &EnergyParams) -> f64 {
    ep.p_down * ep.frac_down * ep.t_up_session + ep.p_up * ep.frac_up * ep.t_up_session
}

/// Energy of one sleeping mini-slot.
pub fn sleep_energy(ep: &EnergyParams, slot_len: f64) -> f64 {
    ep.p_sleep * slot_len
}

/// Epoch length, mini-slot length and the ordered set of TWT intervals.
///
/// Durations are held as integer mini-slot counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTiming {
    slot_len: f64,
    slots_per_epoch: u32,
    interval_slots: Vec<u32>,
}

fn slots_in(key: &'static str, secs: f64, slot_len: f64) -> Result<u32> {
    if !(secs.is_finite() && secs > 0.0) {
        return Err(TwtError::invalid(
            key,
            format!("duration must be > 0, got {secs}"),
        ));
    }
    let ratio = secs / slot_len;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > MULTIPLE_TOL * ratio.max(1.0) || n > u32::MAX as f64 {
        return Err(TwtError::invalid(
            key,
            format!("{secs} s is not an integer multiple of the {slot_len} s mini-slot"),
        ));
    }
    Ok(n as u32)
}

impl EpochTiming {
    /// Builds the timing from durations in seconds, checking that the epoch
    /// and every interval are integer multiples of the mini-slot, that the
    /// intervals are strictly increasing, and that none exceeds the epoch.
    pub fn new(epoch_len: f64, slot_len: f64, intervals: &[f64]) -> Result<Self> {
        if !(slot_len.is_finite() && slot_len > 0.0) {
            return Err(TwtError::invalid(
                "slot_len_s",
                format!("mini-slot must be > 0, got {slot_len}"),
            ));
        }
        let slots_per_epoch = slots_in("epoch_len_s", epoch_len, slot_len)?;
        let interval_slots = intervals
            .iter()
            .map(|&i| slots_in("intervals_s", i, slot_len))
            .collect::<Result<Vec<_>>>()?;
        Self::from_slots(slot_len, slots_per_epoch, interval_slots)
    }

    /// Builds the timing directly from mini-slot counts.
    pub fn from_slots(
        slot_len: f64,
        slots_per_epoch: u32,
        interval_slots: Vec<u32>,
    ) -> Result<Self> {
        if !(slot_len.is_finite() && slot_len > 0.0) {
            return Err(TwtError::invalid("slot_len_s", "mini-slot must be > 0"));
        }
        if slots_per_epoch == 0 {
            return Err(TwtError::invalid(
                "epoch_len_s",
                "epoch must hold at least one mini-slot",
            ));
        }
        if interval_slots.is_empty() {
            return Err(TwtError::invalid(
                "intervals_s",
                "at least one interval is required",
            ));
        }
        if interval_slots.contains(&0) {
            return Err(TwtError::invalid("intervals_s", "intervals must be > 0"));
        }
        if interval_slots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TwtError::invalid(
                "intervals_s",
                "intervals must be strictly increasing",
            ));
        }
        if let Some(&last) = interval_slots.last() {
            if last > slots_per_epoch {
                return Err(TwtError::IntervalTooLong {
                    interval: last as f64 * slot_len,
                    epoch: slots_per_epoch as f64 * slot_len,
                });
            }
        }
        Ok(EpochTiming {
            slot_len,
            slots_per_epoch,
            interval_slots,
        })
    }

    /// 1 s epochs of 1 ms mini-slots with nine intervals 50, 100, ..., 450 ms.
    pub fn reference() -> Self {
        Self::from_slots(1e-3, 1000, (1..=9).map(|i| 50 * i).collect())
            .expect("reference timing is valid")
    }

    pub fn slot_len(&self) -> f64 {
        self.slot_len
    }

    pub fn slots_per_epoch(&self) -> u32 {
        self.slots_per_epoch
    }

    pub fn epoch_len(&self) -> f64 {
        self.slots_per_epoch as f64 * self.slot_len
    }

    /// Number of intervals, `L`.
    pub fn num_intervals(&self) -> usize {
        self.interval_slots.len()
    }

    pub fn interval_slots(&self) -> &[u32] {
        &self.interval_slots
    }

    /// Interval lengths in seconds.
    pub fn intervals(&self) -> Vec<f64> {
        self.interval_slots
            .iter()
            .map(|&i| i as f64 * self.slot_len)
            .collect()
    }

    /// Sessions per epoch for interval index `l` (0-based).
    pub fn sessions(&self, l: usize) -> u32 {
        self.slots_per_epoch / self.interval_slots[l]
    }

    /// Sessions per epoch for every interval, in interval order (non-increasing).
    pub fn session_counts(&self) -> Vec<u32> {
        (0..self.num_intervals())
            .map(|l| self.sessions(l))
            .collect()
    }

    /// Same timing with a different epoch length, keeping mini-slot and intervals.
    pub fn with_epoch_len(&self, epoch_len: f64) -> Result<Self> {
        let slots = slots_in("epoch_len_s", epoch_len, self.slot_len)?;
        Self::from_slots(self.slot_len, slots, self.interval_slots.clone())
    }
}

/// Number of sessions an interval yields over one epoch: `floor(T / interval)`.
pub fn sessions_per_epoch(epoch_len: f64, interval: f64) -> Result<u32> {
    if interval.is_nan() || interval <= 0.0 {
        return Err(TwtError::invalid(
            "interval",
            format!("must be > 0, got {interval}"),
        ));
    }
    if interval > epoch_len * (1.0 + MULTIPLE_TOL) {
        return Err(TwtError::IntervalTooLong {
            interval,
            epoch: epoch_len,
        });
    }
    // absorb representation error such as 0.3 / 0.1 = 2.9999999999999996
    let ratio = epoch_len / interval;
    Ok((ratio * (1.0 + MULTIPLE_TOL)).floor() as u32)
}

/// Energy a station spends over one epoch with `n_sessions` wake-ups.
pub fn epoch_energy(n_sessions: u32, e_s: f64, e_sleep: f64, slots_per_epoch: u32) -> Result<f64> {
    if n_sessions > slots_per_epoch {
        return Err(TwtError::TooManySessions {
            n_sessions,
            slots: slots_per_epoch,
        });
    }
    Ok(e_s * n_sessions as f64 + (slots_per_epoch - n_sessions) as f64 * e_sleep)
}

/// Backlog of one station queue, in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct QueueState {
    pub backlog_bits: f64,
}

impl QueueState {
    pub fn new(backlog_bits: f64) -> Self {
        QueueState { backlog_bits }
    }

    pub fn update(self, served_bits: f64, arrived_bits: f64) -> Self {
        queue_update(self, served_bits, arrived_bits)
    }
}

/// One mini-slot of the fluid queue recursion: serve, clamp at zero, then add arrivals.
pub fn queue_update(q: QueueState, served_bits: f64, arrived_bits: f64) -> QueueState {
    QueueState {
        backlog_bits: (q.backlog_bits - served_bits).max(0.0) + arrived_bits,
    }
}
