//! Exhaustive maximisation of the per-epoch assignment objective
//! `Σ_m N_m · w_m` over every capacity-feasible map from stations to
//! intervals or sleep. Used as ground truth for the greedy scheduler.

use crate::error::{Result, TwtError};
use crate::scheduler::{EpochAssignment, Slot};

/// Largest station count the oracle will enumerate.
pub const MAX_STATIONS: usize = 12;
/// Largest number of raw maps `(L + 1)^M` the oracle will enumerate.
pub const MAX_MAPS: f64 = 1e7;

/// One instance of the per-epoch assignment problem.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentInstance {
    /// `w_m = Q_m R_m − V (E_s − E_sleep)` per station.
    pub weights: Vec<f64>,
    /// `N_l` per interval, non-increasing.
    pub session_counts: Vec<u32>,
    pub k_capacity: usize,
}

impl AssignmentInstance {
    pub fn validate(&self) -> Result<()> {
        if self.session_counts.contains(&0) {
            return Err(TwtError::invalid("session_counts", "must be > 0"));
        }
        if self.weights.iter().any(|w| !w.is_finite()) {
            return Err(TwtError::invalid("weights", "must be finite"));
        }
        if self.k_capacity == 0 {
            return Err(TwtError::invalid("k_capacity", "must be >= 1"));
        }
        Ok(())
    }

    pub fn num_intervals(&self) -> usize {
        self.session_counts.len()
    }
}

/// `Σ_m N_m w_m`, with zero sessions for sleeping stations and one for
/// stations parked at the epoch end.
pub fn objective_value(instance: &AssignmentInstance, assignment: &EpochAssignment) -> Result<f64> {
    if assignment.len() != instance.weights.len() {
        return Err(TwtError::StationCountMismatch {
            expected: instance.weights.len(),
            got: assignment.len(),
        });
    }
    assignment.check_capacity(instance.num_intervals(), instance.k_capacity)?;
    Ok(assignment
        .slots
        .iter()
        .zip(&instance.weights)
        .map(|(slot, &w)| match *slot {
            Slot::Interval(l) => instance.session_counts[l] as f64 * w,
            Slot::Sleep => 0.0,
            Slot::EpochEnd => w,
        })
        .sum())
}

struct Search<'a> {
    inst: &'a AssignmentInstance,
    load: Vec<usize>,
    current: Vec<Slot>,
    best: Vec<Slot>,
    best_value: f64,
}

impl Search<'_> {
    fn visit(&mut self, m: usize, value: f64) {
        if m == self.inst.weights.len() {
            if value > self.best_value {
                self.best_value = value;
                self.best.clone_from(&self.current);
            }
            return;
        }
        self.current[m] = Slot::Sleep;
        self.visit(m + 1, value);
        for l in 0..self.inst.num_intervals() {
            if self.load[l] == self.inst.k_capacity {
                continue;
            }
            self.load[l] += 1;
            self.current[m] = Slot::Interval(l);
            let gain = self.inst.session_counts[l] as f64 * self.inst.weights[m];
            self.visit(m + 1, value + gain);
            self.load[l] -= 1;
        }
        self.current[m] = Slot::Sleep;
    }
}

/// Best feasible assignment and its objective, found by enumerating every
/// capacity-feasible map. Refuses instances beyond [`MAX_STATIONS`] stations
/// or [`MAX_MAPS`] raw maps.
pub fn brute_force_assign(instance: &AssignmentInstance) -> Result<(EpochAssignment, f64)> {
    instance.validate()?;
    let m = instance.weights.len();
    let choices = instance.num_intervals() + 1;
    if m > MAX_STATIONS || (choices as f64).powi(m as i32) > MAX_MAPS {
        return Err(TwtError::EnumerationBudget {
            stations: m,
            choices,
        });
    }
    let mut search = Search {
        inst: instance,
        load: vec![0; instance.num_intervals()],
        current: vec![Slot::Sleep; m],
        best: vec![Slot::Sleep; m],
        best_value: 0.0,
    };
    search.visit(0, 0.0);
    // re-evaluate so the reported value uses the same summation order as objective_value
    let best = EpochAssignment { slots: search.best };
    let value = objective_value(instance, &best)?;
    Ok((best, value))
}

/// Equality of two objective values up to `1e-9` relative.
pub fn objectives_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}
