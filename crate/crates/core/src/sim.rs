//! Mini-slot simulation of TWT epochs.
//!
//! At every epoch boundary each station draws a rate, the scheduler sees
//! `(Q, R)` and fixes the wake intervals, and then the epoch is played slot
//! by slot: a station with period `p` wakes at slots `p, 2p, …` of the epoch,
//! is served at most one session's worth of bits there, and every station
//! receives fresh arrivals in every slot.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Result, TwtError};
use crate::exact::ExactSum;
use crate::model::{epoch_energy, queue_update, EnergyParams, EpochTiming, QueueState};
use crate::scheduler::{
    jtwsa_assign, random_assign, EpochAssignment, SchedulerParams, SleepSemantics, StationSnapshot,
};
use crate::traffic::{
    draw_rate, service_bits_per_session, substream, RateModel, StreamPurpose, TrafficParams,
};

/// Minimum series length accepted by [`stability_check`].
pub const MIN_STABILITY_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Jtwsa,
    Random,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Jtwsa => "jtwsa",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "jtwsa" => Ok(Algorithm::Jtwsa),
            "random" => Ok(Algorithm::Random),
            other => Err(format!("expected jtwsa or random, got `{other}`")),
        }
    }
}

/// Finite-run surrogate for strong stability: a least-squares slope of the
/// total backlog over the tail of the run, compared with a fraction of the
/// mean offered load per slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityParams {
    pub threshold_frac: f64,
    /// Trailing share of the series the slope is fitted on.
    pub window_frac: f64,
}

impl Default for StabilityParams {
    fn default() -> Self {
        StabilityParams {
            threshold_frac: 0.01,
            window_frac: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub num_stations: usize,
    pub timing: EpochTiming,
    pub energy: EnergyParams,
    pub traffic: TrafficParams,
    pub rates: RateModel,
    pub v: f64,
    pub k_capacity: usize,
    pub algorithm: Algorithm,
    pub num_epochs: usize,
    pub seed: u64,
    pub sleep_semantics: SleepSemantics,
    pub stability: StabilityParams,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self::reference()
    }
}

impl SimConfig {
    /// 50 stations, K = 5, V = 1000, JTWSA, 100 epochs of 1 s.
    pub fn reference() -> Self {
        SimConfig {
            num_stations: 50,
            timing: EpochTiming::reference(),
            energy: EnergyParams::reference(),
            traffic: TrafficParams::reference(),
            rates: RateModel::reference(),
            v: 1000.0,
            k_capacity: 5,
            algorithm: Algorithm::Jtwsa,
            num_epochs: 100,
            seed: 1,
            sleep_semantics: SleepSemantics::FullSleep,
            stability: StabilityParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_stations == 0 {
            return Err(TwtError::invalid("num_stations", "must be >= 1"));
        }
        if self.num_stations > u32::MAX as usize {
            return Err(TwtError::invalid("num_stations", "too many stations"));
        }
        if self.num_epochs == 0 {
            return Err(TwtError::invalid("num_epochs", "must be >= 1"));
        }
        self.energy.validate()?;
        if self.energy.t_up_session > self.timing.slot_len() * (1.0 + 1e-9) {
            return Err(TwtError::invalid(
                "t_up_s",
                "a session must fit in one mini-slot",
            ));
        }
        self.traffic.validate()?;
        self.rates.validate()?;
        self.scheduler_params().validate()?;
        let s = &self.stability;
        if !(s.threshold_frac.is_finite() && s.threshold_frac >= 0.0) {
            return Err(TwtError::invalid(
                "stability_threshold_frac",
                "must be >= 0",
            ));
        }
        if !(s.window_frac > 0.0 && s.window_frac <= 1.0) {
            return Err(TwtError::invalid(
                "stability_window_frac",
                "must lie in (0, 1]",
            ));
        }
        Ok(())
    }

    pub fn session_energy(&self) -> f64 {
        self.energy.session_energy()
    }

    pub fn sleep_energy(&self) -> f64 {
        self.energy.sleep_energy(self.timing.slot_len())
    }

    pub fn scheduler_params(&self) -> SchedulerParams {
        SchedulerParams {
            v: self.v,
            k_capacity: self.k_capacity,
            wake_cost: self.energy.wake_cost(self.timing.slot_len()),
            sleep_semantics: self.sleep_semantics,
        }
    }

    /// Largest per-session service, `R_max`, in bits per slot.
    pub fn max_service_bits(&self) -> f64 {
        service_bits_per_session(self.rates.max_rate(), &self.energy)
    }

    /// Offered load summed over stations, bits per slot.
    pub fn mean_total_arrival_bits(&self) -> f64 {
        self.num_stations as f64 * self.traffic.mean_arrival_bits(self.timing.slot_len())
    }
}

/// Bounding constants of the drift analysis, in slot units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremConstants {
    /// `M T (R_max² + A_max²) / 2`.
    pub b1: f64,
    /// `M T² (R_max² + A_max²) / 2`.
    pub b2: f64,
    /// `M T E_s`.
    pub e_max: f64,
}

impl TheoremConstants {
    /// Upper bound on the epoch-sampled total backlog for arrival slack `eps`.
    pub fn queue_bound(&self, v: f64, eps: f64) -> f64 {
        (self.b2 + v * self.e_max) / eps
    }

    /// Gap between the achieved and optimal average energy allowed by the bound.
    pub fn energy_gap(&self, v: f64) -> f64 {
        self.b2 / v
    }
}

pub fn theorem_constants(cfg: &SimConfig) -> TheoremConstants {
    let m = cfg.num_stations as f64;
    let t = cfg.timing.slots_per_epoch() as f64;
    let r_max = cfg.max_service_bits();
    let a_max = cfg.traffic.max_arrival_bits();
    let sq = r_max * r_max + a_max * a_max;
    TheoremConstants {
        b1: m * t * sq / 2.0,
        b2: m * t * t * sq / 2.0,
        e_max: m * t * cfg.session_energy(),
    }
}

/// Per-slot arrivals, offered service and backlog of every station over one epoch.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpochTrace {
    /// `A_m(τ)`, indexed `[station][slot]`.
    pub arrivals: Vec<Vec<f64>>,
    /// `R_m(τ)`: one session's bits at wake slots, zero elsewhere.
    pub service: Vec<Vec<f64>>,
    /// `Q_m(τ)` at the start of each slot plus the value after the last one.
    pub queue: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch_index: usize,
    pub n_sessions: Vec<u32>,
    /// Closed-form epoch energy per station.
    pub energy: Vec<f64>,
    /// Per-slot energy charges summed per station.
    pub slot_energy: Vec<f64>,
    pub queue_start: Vec<f64>,
    pub queue_end: Vec<f64>,
    /// `Σ_m Q_m(τ)` at the start of every slot.
    pub slot_totals: Vec<f64>,
    /// `Σ_τ Σ_m Q_m(τ) A_m(τ)`.
    pub sum_queue_arrivals: f64,
    /// `Σ_τ Σ_m Q_m(τ) R_m(τ)`.
    pub sum_queue_service: f64,
    pub drift_lhs: f64,
    pub drift_rhs: f64,
    pub trace: Option<EpochTrace>,
}

impl EpochStats {
    pub fn total_energy(&self) -> f64 {
        self.energy.iter().sum()
    }

    pub fn total_queue_start(&self) -> f64 {
        self.queue_start.iter().sum()
    }
}

/// Source of per-slot arrivals for a station.
pub trait ArrivalSource {
    fn arrivals(&mut self, station: usize, slot: u32) -> f64;
}

impl<F: FnMut(usize, u32) -> f64> ArrivalSource for F {
    fn arrivals(&mut self, station: usize, slot: u32) -> f64 {
        self(station, slot)
    }
}

/// Poisson file arrivals generated as a continuous-time process per station.
///
/// Exponential gaps are drawn between files and each mini-slot receives the
/// files whose arrival instants fall inside it, truncated at the per-slot
/// cap. The per-slot counts are i.i.d. Poisson(λτ), the same law as
/// [`crate::traffic::draw_arrivals`], at one draw per file instead of one per slot.
#[derive(Debug, Clone)]
pub struct PoissonArrivals {
    gap: Option<Exp<f64>>,
    file_size_bits: f64,
    cap: u32,
    /// Time from the start of the next slot to the next file, in slots.
    until_next: Vec<f64>,
    streams: Vec<ChaCha8Rng>,
}

impl PoissonArrivals {
    pub fn new(cfg: &SimConfig) -> Self {
        let per_slot = cfg.traffic.lambda_files_per_s * cfg.timing.slot_len();
        let gap = (per_slot > 0.0).then(|| Exp::new(per_slot).expect("finite positive rate"));
        let mut streams: Vec<ChaCha8Rng> = (0..cfg.num_stations as u32)
            .map(|m| substream(cfg.seed, m, StreamPurpose::Arrivals))
            .collect();
        let until_next = streams
            .iter_mut()
            .map(|rng| gap.map_or(f64::INFINITY, |g| g.sample(rng)))
            .collect();
        PoissonArrivals {
            gap,
            file_size_bits: cfg.traffic.file_size_bits,
            cap: cfg.traffic.arrival_cap_files_per_slot,
            until_next,
            streams,
        }
    }
}

impl ArrivalSource for PoissonArrivals {
    fn arrivals(&mut self, station: usize, _slot: u32) -> f64 {
        let Some(gap) = self.gap else {
            return 0.0;
        };
        let next = &mut self.until_next[station];
        let mut files = 0u32;
        while *next < 1.0 {
            files += 1;
            *next += gap.sample(&mut self.streams[station]);
        }
        *next -= 1.0;
        files.min(self.cap) as f64 * self.file_size_bits
    }
}

/// Plays one epoch, updating `queues` in place.
///
/// `bits_per_session[m]` is what station `m` can send in one session this
/// epoch. `epoch_index` is only recorded in the result.
pub fn run_epoch<A: ArrivalSource + ?Sized>(
    queues: &mut [QueueState],
    assignment: &EpochAssignment,
    bits_per_session: &[f64],
    cfg: &SimConfig,
    arrivals: &mut A,
    epoch_index: usize,
    record_trace: bool,
) -> EpochStats {
    let m_count = queues.len();
    let slots = cfg.timing.slots_per_epoch();
    let e_s = cfg.session_energy();
    let e_sleep = cfg.sleep_energy();

    let mut slot_totals = vec![0.0; slots as usize];
    let mut n_sessions = Vec::with_capacity(m_count);
    let mut energy = Vec::with_capacity(m_count);
    let mut slot_energy = Vec::with_capacity(m_count);
    let queue_start: Vec<f64> = queues.iter().map(|q| q.backlog_bits).collect();
    let mut sum_qa = 0.0;
    let mut sum_qr = 0.0;
    let mut trace = record_trace.then(EpochTrace::default);

    for (m, queue) in queues.iter_mut().enumerate() {
        let period = assignment.period_slots(m, &cfg.timing);
        let mut awake_energy = ExactSum::new();
        let mut asleep_energy = ExactSum::new();
        let mut wakes = 0u32;
        let mut q = *queue;
        let mut rec = trace.as_ref().map(|_| {
            (
                Vec::with_capacity(slots as usize),
                Vec::with_capacity(slots as usize),
                Vec::with_capacity(slots as usize + 1),
            )
        });
        for tau in 1..=slots {
            let awake = period.is_some_and(|p| tau % p == 0);
            let service = if awake {
                wakes += 1;
                awake_energy.add(e_s);
                bits_per_session[m]
            } else {
                asleep_energy.add(e_sleep);
                0.0
            };
            let arrived = arrivals.arrivals(m, tau);
            let backlog = q.backlog_bits;
            slot_totals[tau as usize - 1] += backlog;
            sum_qa += backlog * arrived;
            sum_qr += backlog * service;
            if let Some((a, r, qs)) = rec.as_mut() {
                a.push(arrived);
                r.push(service);
                qs.push(backlog);
            }
            q = queue_update(q, service, arrived);
        }
        *queue = q;
        n_sessions.push(wakes);
        energy.push(
            epoch_energy(assignment.n_sessions(m, &cfg.timing), e_s, e_sleep, slots)
                .expect("assignment sessions fit in an epoch"),
        );
        slot_energy.push(awake_energy.total() + asleep_energy.total());
        if let (Some(t), Some((a, r, mut qs))) = (trace.as_mut(), rec) {
            qs.push(q.backlog_bits);
            t.arrivals.push(a);
            t.service.push(r);
            t.queue.push(qs);
        }
    }

    let queue_end: Vec<f64> = queues.iter().map(|q| q.backlog_bits).collect();
    let mut stats = EpochStats {
        epoch_index,
        n_sessions,
        energy,
        slot_energy,
        queue_start,
        queue_end,
        slot_totals,
        sum_queue_arrivals: sum_qa,
        sum_queue_service: sum_qr,
        drift_lhs: 0.0,
        drift_rhs: 0.0,
        trace,
    };
    (stats.drift_lhs, stats.drift_rhs) = drift_terms(&stats, cfg);
    stats
}

/// Both sides of the samplewise drift-plus-penalty bound for one epoch.
fn drift_terms(stats: &EpochStats, cfg: &SimConfig) -> (f64, f64) {
    let half_sq_change = stats
        .queue_start
        .iter()
        .zip(&stats.queue_end)
        .map(|(s, e)| e * e - s * s)
        .sum::<f64>()
        / 2.0;
    let penalty = cfg.v * stats.energy.iter().sum::<f64>();
    let b1 = theorem_constants_for(cfg, stats.queue_start.len()).b1;
    (
        half_sq_change + penalty,
        b1 + stats.sum_queue_arrivals - stats.sum_queue_service + penalty,
    )
}

fn theorem_constants_for(cfg: &SimConfig, stations: usize) -> TheoremConstants {
    if stations == cfg.num_stations {
        theorem_constants(cfg)
    } else {
        theorem_constants(&SimConfig {
            num_stations: stations,
            ..cfg.clone()
        })
    }
}

/// Samplewise drift bound for one epoch:
/// `½ Σ (Q(t+T)² − Q(t)²) + V Σ E ≤ B₁ + Σ Q A − Σ Q R + V Σ E`.
pub fn lemma1_check(stats: &EpochStats, cfg: &SimConfig) -> bool {
    let (lhs, rhs) = drift_terms(stats, cfg);
    lhs <= rhs
}

/// Least-squares slope of the trailing `window_frac` of `series`; stable when
/// the slope does not exceed `threshold` (bits per slot).
pub fn stability_check(series: &[f64], threshold: f64, window_frac: f64) -> Result<(bool, f64)> {
    if series.len() < MIN_STABILITY_SAMPLES {
        return Err(TwtError::SeriesTooShort {
            len: series.len(),
            min: MIN_STABILITY_SAMPLES,
        });
    }
    let keep = ((series.len() as f64 * window_frac).ceil() as usize).clamp(2, series.len());
    let tail = &series[series.len() - keep..];
    let slope = ls_slope(tail);
    Ok((slope <= threshold, slope))
}

fn ls_slope(y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let x_mean = (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &v) in y.iter().enumerate() {
        let dx = i as f64 - x_mean;
        sxy += dx * (v - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    /// Mean over epochs of `Σ_m E_m^t`, J.
    pub avg_energy_per_epoch: f64,
    /// Mean over slots of `Σ_m Q_m(τ)`, bits.
    pub avg_queue_slotwise: f64,
    /// Mean over epochs of `Σ_m Q_m(nT)`, bits.
    pub avg_queue_epoch_sampled: f64,
    /// `None` when the run is too short for the stability test.
    pub stable: Option<bool>,
    pub queue_slope: Option<f64>,
}

/// Options that do not change the simulated trajectory.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub record_traces: bool,
    /// Stop with [`TwtError::Lemma1Violation`] at the first violating epoch.
    pub check_lemma1: bool,
}

/// Stateful driver holding queues and random streams across epochs.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    queues: Vec<QueueState>,
    arrivals: PoissonArrivals,
    rate_streams: Vec<ChaCha8Rng>,
    benchmark: ChaCha8Rng,
    epoch: usize,
    record_traces: bool,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let m = cfg.num_stations;
        Ok(Simulator {
            queues: vec![QueueState::default(); m],
            arrivals: PoissonArrivals::new(&cfg),
            rate_streams: (0..m as u32)
                .map(|i| substream(cfg.seed, i, StreamPurpose::Rates))
                .collect(),
            benchmark: substream(cfg.seed, u32::MAX, StreamPurpose::Benchmark),
            epoch: 0,
            record_traces: false,
            cfg,
        })
    }

    pub fn record_traces(mut self, on: bool) -> Self {
        self.record_traces = on;
        self
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn queues(&self) -> &[QueueState] {
        &self.queues
    }

    /// Draws this epoch's rates and returns what the scheduler sees.
    fn snapshot(&mut self) -> Vec<StationSnapshot> {
        let cfg = &self.cfg;
        self.queues
            .iter()
            .zip(self.rate_streams.iter_mut())
            .enumerate()
            .map(|(m, (q, rng))| {
                let rate = draw_rate(rng, &cfg.rates).expect("validated rate set");
                StationSnapshot {
                    station_id: m as u32,
                    backlog_bits: q.backlog_bits,
                    bits_per_session: service_bits_per_session(rate, &cfg.energy),
                }
            })
            .collect()
    }

    pub fn step(&mut self) -> EpochStats {
        let snaps = self.snapshot();
        let assignment = match self.cfg.algorithm {
            Algorithm::Jtwsa => {
                jtwsa_assign(&snaps, &self.cfg.timing, &self.cfg.scheduler_params())
            }
            Algorithm::Random => random_assign(
                &mut self.benchmark,
                &snaps,
                &self.cfg.timing,
                self.cfg.k_capacity,
            ),
        };
        let bits: Vec<f64> = snaps.iter().map(|s| s.bits_per_session).collect();
        let stats = run_epoch(
            &mut self.queues,
            &assignment,
            &bits,
            &self.cfg,
            &mut self.arrivals,
            self.epoch,
            self.record_traces,
        );
        self.epoch += 1;
        stats
    }
}

/// Runs `cfg.num_epochs` epochs and summarises them.
pub fn run_simulation(cfg: &SimConfig) -> Result<(RunMetrics, Vec<EpochStats>)> {
    run_simulation_with(cfg, RunOptions::default())
}

pub fn run_simulation_with(
    cfg: &SimConfig,
    opts: RunOptions,
) -> Result<(RunMetrics, Vec<EpochStats>)> {
    let mut sim = Simulator::new(cfg.clone())?.record_traces(opts.record_traces);
    let mut epochs = Vec::with_capacity(cfg.num_epochs);
    for _ in 0..cfg.num_epochs {
        let stats = sim.step();
        if opts.check_lemma1 && !lemma1_check(&stats, cfg) {
            return Err(TwtError::Lemma1Violation {
                epoch: stats.epoch_index,
                lhs: stats.drift_lhs,
                rhs: stats.drift_rhs,
            });
        }
        epochs.push(stats);
    }
    let metrics = summarize(cfg, &epochs);
    Ok((metrics, epochs))
}

/// Aggregates per-epoch statistics into run-level metrics.
pub fn summarize(cfg: &SimConfig, epochs: &[EpochStats]) -> RunMetrics {
    let n = epochs.len().max(1) as f64;
    let series: Vec<f64> = epochs
        .iter()
        .flat_map(|e| e.slot_totals.iter().copied())
        .collect();
    let threshold = cfg.stability.threshold_frac * cfg.mean_total_arrival_bits();
    let (stable, slope) = match stability_check(&series, threshold, cfg.stability.window_frac) {
        Ok((s, k)) => (Some(s), Some(k)),
        Err(_) => (None, None),
    };
    RunMetrics {
        avg_energy_per_epoch: epochs.iter().map(EpochStats::total_energy).sum::<f64>() / n,
        avg_queue_slotwise: series.iter().sum::<f64>() / series.len().max(1) as f64,
        avg_queue_epoch_sampled: epochs
            .iter()
            .map(EpochStats::total_queue_start)
            .sum::<f64>()
            / n,
        stable,
        queue_slope: slope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::Slot;

    fn tiny_cfg(slots: u32, intervals: Vec<u32>) -> SimConfig {
        SimConfig {
            num_stations: 1,
            timing: EpochTiming::from_slots(1e-3, slots, intervals).unwrap(),
            k_capacity: 1,
            num_epochs: 3,
            ..SimConfig::reference()
        }
    }

    #[test]
    fn hand_traced_epoch() {
        let cfg = tiny_cfg(4, vec![2]);
        let mut queues = vec![QueueState::new(300.0)];
        let assignment = EpochAssignment {
            slots: vec![Slot::Interval(0)],
        };
        let mut none = |_: usize, _: u32| 0.0;
        let stats = run_epoch(&mut queues, &assignment, &[100.0], &cfg, &mut none, 0, true);
        let trace = stats.trace.as_ref().unwrap();
        assert_eq!(trace.queue[0], vec![300.0, 300.0, 200.0, 200.0, 100.0]);
        assert_eq!(trace.service[0], vec![0.0, 100.0, 0.0, 100.0]);
        assert_eq!(stats.n_sessions, vec![2]);
        assert_eq!(queues[0].backlog_bits, 100.0);
        assert!(lemma1_check(&stats, &cfg));
    }

    #[test]
    fn empty_system_stays_empty() {
        let cfg = SimConfig::reference();
        let mut queues = vec![QueueState::default(); cfg.num_stations];
        let assignment = jtwsa_assign(
            &(0..50)
                .map(|m| StationSnapshot {
                    station_id: m,
                    backlog_bits: 0.0,
                    bits_per_session: 1e5,
                })
                .collect::<Vec<_>>(),
            &cfg.timing,
            &cfg.scheduler_params(),
        );
        let mut none = |_: usize, _: u32| 0.0;
        let stats = run_epoch(
            &mut queues,
            &assignment,
            &[1e5; 50],
            &cfg,
            &mut none,
            0,
            false,
        );
        assert!(stats.slot_totals.iter().all(|&q| q == 0.0));
        let expected = 50.0 * epoch_energy(0, 1e-3, cfg.sleep_energy(), 1000).unwrap();
        assert!((stats.total_energy() - expected).abs() < 1e-12);
        // zero drift: the bound holds with margin B1
        assert_eq!(
            stats.drift_rhs - stats.drift_lhs,
            theorem_constants(&cfg).b1
        );
    }

    #[test]
    fn single_session_wakes_at_epoch_end() {
        let cfg = tiny_cfg(5, vec![2]);
        let mut queues = vec![QueueState::new(50.0)];
        let assignment = EpochAssignment {
            slots: vec![Slot::EpochEnd],
        };
        let mut none = |_: usize, _: u32| 0.0;
        let stats = run_epoch(&mut queues, &assignment, &[10.0], &cfg, &mut none, 0, true);
        assert_eq!(
            stats.trace.unwrap().service[0],
            vec![0.0, 0.0, 0.0, 0.0, 10.0]
        );
        assert_eq!(stats.n_sessions, vec![1]);
    }

    #[test]
    fn stability_examples() {
        let flat = vec![7.0; 2000];
        assert_eq!(stability_check(&flat, 0.0, 0.5).unwrap(), (true, 0.0));
        let line: Vec<f64> = (0..2000).map(|t| 5.0 * t as f64).collect();
        let (stable, slope) = stability_check(&line, 1.0, 0.5).unwrap();
        assert!(!stable);
        assert!((slope - 5.0).abs() < 1e-9);
        assert!(matches!(
            stability_check(&flat[..999], 0.0, 0.5),
            Err(TwtError::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn theorem_constant_examples() {
        let cfg = SimConfig::reference();
        let c = theorem_constants(&cfg);
        let r_max = cfg.max_service_bits();
        assert!((r_max - 200_000.0).abs() < 1e-6);
        assert_eq!(cfg.traffic.max_arrival_bits(), 2_000_000.0);
        let b1 = 50.0 * 1000.0 * (200_000f64.powi(2) + 2_000_000f64.powi(2)) / 2.0;
        assert!((c.b1 - b1).abs() <= 1e-12 * b1);
        assert!((c.e_max - 50.0 * 1000.0 * 1e-3).abs() < 1e-9);

        let zero = theorem_constants(&SimConfig {
            num_stations: 0,
            ..cfg.clone()
        });
        assert_eq!((zero.b1, zero.b2, zero.e_max), (0.0, 0.0, 0.0));

        let doubled = theorem_constants(&SimConfig {
            timing: cfg.timing.with_epoch_len(2.0).unwrap(),
            ..cfg
        });
        assert_eq!(doubled.b2, 4.0 * c.b2);
        assert_eq!(doubled.b1, 2.0 * c.b1);
        assert_eq!(doubled.e_max, 2.0 * c.e_max);
    }

    #[test]
    fn algorithm_parses() {
        assert_eq!("jtwsa".parse::<Algorithm>().unwrap(), Algorithm::Jtwsa);
        assert_eq!("random".parse::<Algorithm>().unwrap(), Algorithm::Random);
        assert!("greedy".parse::<Algorithm>().is_err());
    }
}
