//! Randomised comparison of the greedy scheduler against the exhaustive oracle.

use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use twt_core::oracle::{brute_force_assign, objective_value, objectives_match, AssignmentInstance};
use twt_core::par::par_map;
use twt_core::scheduler::assign_by_weight;
use twt_core::traffic::{substream, StreamPurpose};
use twt_core::{EpochAssignment, SleepSemantics, TwtError};

/// Epoch length used to turn random intervals into session counts, in slots.
const EPOCH_SLOTS: u32 = 1000;
/// Intervals are drawn from multiples of this many slots up to the epoch.
const INTERVAL_STEP: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCheckParams {
    pub trials: usize,
    pub max_m: usize,
    pub max_l: usize,
    pub max_k: usize,
    pub seed: u64,
}

impl Default for OracleCheckParams {
    fn default() -> Self {
        OracleCheckParams {
            trials: 200,
            max_m: 8,
            max_l: 3,
            max_k: 2,
            seed: 1,
        }
    }
}

/// An instance on which the checked scheduler fell short of the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub instance: AssignmentInstance,
    pub assignment: EpochAssignment,
    pub greedy_value: f64,
    pub oracle_value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub trials: usize,
    pub passed: usize,
    pub counterexamples: Vec<Counterexample>,
    /// Trials the oracle refused or could not evaluate.
    pub errors: Vec<(usize, String)>,
}

impl OracleReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "oracle-check: {}/{} instances match, {} mismatches, {} errors",
            self.passed,
            self.trials,
            self.counterexamples.len(),
            self.errors.len()
        )?;
        for c in &self.counterexamples {
            writeln!(
                f,
                "counterexample trial={} weights={:?} session_counts={:?} k={} assignment={:?} greedy={} oracle={}",
                c.trial,
                c.instance.weights,
                c.instance.session_counts,
                c.instance.k_capacity,
                c.assignment.slots,
                c.greedy_value,
                c.oracle_value
            )?;
        }
        for (trial, e) in &self.errors {
            writeln!(f, "error trial={trial}: {e}")?;
        }
        Ok(())
    }
}

/// Random instance: `M ≤ max_m` weights uniform in [−10, 10], `L ≤ max_l`
/// distinct intervals drawn from 50, 100, …, 1000 slots and turned into
/// session counts over a 1000-slot epoch, `K ≤ max_k`.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, p: &OracleCheckParams) -> AssignmentInstance {
    let m = rng.random_range(1..=p.max_m.max(1));
    let choices = (EPOCH_SLOTS / INTERVAL_STEP) as usize;
    let l = rng.random_range(1..=p.max_l.clamp(1, choices));
    let k = rng.random_range(1..=p.max_k.max(1));
    let mut intervals: Vec<u32> = sample(rng, choices, l)
        .into_iter()
        .map(|i| (i as u32 + 1) * INTERVAL_STEP)
        .collect();
    intervals.sort_unstable();
    AssignmentInstance {
        weights: (0..m).map(|_| rng.random_range(-10.0..=10.0)).collect(),
        session_counts: intervals.iter().map(|i| EPOCH_SLOTS / i).collect(),
        k_capacity: k,
    }
}

/// The production greedy fill.
pub fn greedy(instance: &AssignmentInstance) -> EpochAssignment {
    let ids: Vec<u32> = (0..instance.weights.len() as u32).collect();
    assign_by_weight(
        &instance.weights,
        &ids,
        instance.num_intervals(),
        instance.k_capacity,
        SleepSemantics::FullSleep,
    )
}

/// Deliberately broken greedy that gives the shortest interval to the
/// weakest positive stations. Used to show the check catches a wrong fill.
pub fn ascending_fill(instance: &AssignmentInstance) -> EpochAssignment {
    let base = greedy(instance);
    let mut awake: Vec<usize> = (0..base.len())
        .filter(|&m| matches!(base.slots[m], twt_core::Slot::Interval(_)))
        .collect();
    awake.sort_by(|&a, &b| instance.weights[a].total_cmp(&instance.weights[b]));
    let mut slots = base.slots.clone();
    for (rank, &m) in awake.iter().enumerate() {
        slots[m] = twt_core::Slot::Interval(rank / instance.k_capacity);
    }
    EpochAssignment { slots }
}

fn check_one<F>(
    trial: usize,
    instance: AssignmentInstance,
    assign: &F,
) -> Result<Option<Counterexample>, TwtError>
where
    F: Fn(&AssignmentInstance) -> EpochAssignment,
{
    let assignment = assign(&instance);
    let greedy_value = objective_value(&instance, &assignment)?;
    let (_, oracle_value) = brute_force_assign(&instance)?;
    if objectives_match(greedy_value, oracle_value) {
        Ok(None)
    } else {
        Ok(Some(Counterexample {
            trial,
            instance,
            assignment,
            greedy_value,
            oracle_value,
        }))
    }
}

/// Compares `assign` with the oracle on `p.trials` seeded random instances.
pub fn oracle_check_with<F>(p: &OracleCheckParams, threads: usize, assign: F) -> OracleReport
where
    F: Fn(&AssignmentInstance) -> EpochAssignment + Sync + Send,
{
    let mut rng = substream(p.seed, 0, StreamPurpose::Benchmark);
    let instances: Vec<(usize, AssignmentInstance)> = (0..p.trials)
        .map(|t| (t, random_instance(&mut rng, p)))
        .collect();
    let outcomes = par_map(&instances, threads, |(t, inst)| {
        check_one(*t, inst.clone(), &assign)
    });
    let mut report = OracleReport {
        trials: p.trials,
        ..OracleReport::default()
    };
    for ((t, _), outcome) in instances.iter().zip(outcomes) {
        match outcome {
            Ok(None) => report.passed += 1,
            Ok(Some(c)) => report.counterexamples.push(c),
            Err(e) => report.errors.push((*t, e.to_string())),
        }
    }
    report
}

pub fn oracle_check(p: &OracleCheckParams, threads: usize) -> OracleReport {
    oracle_check_with(p, threads, greedy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_pass() {
        let r = oracle_check(
            &OracleCheckParams {
                trials: 0,
                ..Default::default()
            },
            0,
        );
        assert!(r.all_passed());
        assert_eq!(r.trials, 0);
    }

    #[test]
    fn instances_respect_bounds() {
        let p = OracleCheckParams::default();
        let mut rng = substream(5, 0, StreamPurpose::Benchmark);
        for _ in 0..500 {
            let i = random_instance(&mut rng, &p);
            assert!((1..=8).contains(&i.weights.len()));
            assert!((1..=3).contains(&i.num_intervals()));
            assert!((1..=2).contains(&i.k_capacity));
            assert!(i.weights.iter().all(|w| (-10.0..=10.0).contains(w)));
            assert!(i.session_counts.windows(2).all(|w| w[0] >= w[1]));
            assert!(i.session_counts.iter().all(|&n| n >= 1));
        }
    }

    #[test]
    fn mutated_greedy_is_caught() {
        let r = oracle_check_with(&OracleCheckParams::default(), 0, ascending_fill);
        assert!(!r.counterexamples.is_empty());
        assert!(r.to_string().contains("counterexample trial="));
    }
}
