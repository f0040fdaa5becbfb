//! Random file arrivals and per-epoch transmission rates.
//!
//! Every station draws from its own ChaCha stream keyed by
//! `(master seed, station id, purpose)`, so runs are reproducible and the
//! draws of one station never depend on how many draws another one made.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Result, TwtError};
use crate::model::EnergyParams;

/// Poisson file traffic offered to one station.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficParams {
    pub file_size_bits: f64,
    /// Files per second.
    pub lambda_files_per_s: f64,
    /// Per-slot file count is truncated at this value.
    pub arrival_cap_files_per_slot: u32,
}

impl TrafficParams {
    /// 25 KB files, one file per second, at most 10 files per mini-slot.
    pub fn reference() -> Self {
        TrafficParams {
            file_size_bits: 200_000.0,
            lambda_files_per_s: 1.0,
            arrival_cap_files_per_slot: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.file_size_bits.is_finite() && self.file_size_bits > 0.0) {
            return Err(TwtError::invalid("file_size_bits", "must be > 0"));
        }
        if !(self.lambda_files_per_s.is_finite() && self.lambda_files_per_s >= 0.0) {
            return Err(TwtError::invalid("lambda_files_per_s", "must be >= 0"));
        }
        if self.arrival_cap_files_per_slot == 0 {
            return Err(TwtError::invalid(
                "arrival_cap_files_per_slot",
                "must be >= 1",
            ));
        }
        Ok(())
    }

    /// Largest arrival a station can see in one mini-slot, `A_max`.
    pub fn max_arrival_bits(&self) -> f64 {
        self.arrival_cap_files_per_slot as f64 * self.file_size_bits
    }

    /// Expected arrivals per station per mini-slot, ignoring truncation.
    pub fn mean_arrival_bits(&self, slot_len: f64) -> f64 {
        self.lambda_files_per_s * slot_len * self.file_size_bits
    }
}

/// The discrete set of transmission rates a station may get for an epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct RateModel {
    /// Bits per second, strictly increasing.
    pub rates_bps: Vec<f64>,
}

impl RateModel {
    /// 10, 20, 50, 100, 150 and 200 Mbps.
    pub fn reference() -> Self {
        RateModel {
            rates_bps: [10.0, 20.0, 50.0, 100.0, 150.0, 200.0]
                .iter()
                .map(|m| m * 1e6)
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rates_bps.is_empty() {
            return Err(TwtError::invalid("rates_bps", "rate set is empty"));
        }
        if self.rates_bps.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(TwtError::invalid("rates_bps", "rates must be > 0"));
        }
        if self.rates_bps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(TwtError::invalid(
                "rates_bps",
                "rates must be strictly increasing",
            ));
        }
        Ok(())
    }

    pub fn max_rate(&self) -> f64 {
        self.rates_bps.last().copied().unwrap_or(0.0)
    }
}

/// What a random stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamPurpose {
    Arrivals = 0,
    Rates = 1,
    Benchmark = 2,
}

/// Independent stream for `(seed, station, purpose)`.
pub fn substream(seed: u64, station: u32, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((station as u64) << 8) | purpose as u64);
    rng
}

/// Pre-built truncated Poisson sampler for one mini-slot.
#[derive(Debug, Clone)]
pub struct ArrivalSampler {
    poisson: Option<Poisson<f64>>,
    file_size_bits: f64,
    cap: f64,
}

impl ArrivalSampler {
    pub fn new(tp: &TrafficParams, slot_len: f64) -> Self {
        let mean = tp.lambda_files_per_s * slot_len;
        ArrivalSampler {
            poisson: (mean > 0.0).then(|| Poisson::new(mean).expect("finite positive mean")),
            file_size_bits: tp.file_size_bits,
            cap: tp.arrival_cap_files_per_slot as f64,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.poisson {
            None => 0.0,
            Some(p) => p.sample(rng).min(self.cap) * self.file_size_bits,
        }
    }
}

/// Bits arriving at one station in one mini-slot: a truncated Poisson number of files.
pub fn draw_arrivals<R: Rng + ?Sized>(rng: &mut R, tp: &TrafficParams, slot_len: f64) -> f64 {
    ArrivalSampler::new(tp, slot_len).sample(rng)
}

/// Uniform draw from the rate set.
pub fn draw_rate<R: Rng + ?Sized>(rng: &mut R, rm: &RateModel) -> Result<f64> {
    rm.rates_bps
        .choose(rng)
        .copied()
        .ok_or(TwtError::EmptyRateSet)
}

/// Uplink bits one session carries at `rate`.
pub fn service_bits_per_session(rate: f64, ep: &EnergyParams) -> f64 {
    rate * ep.frac_up * ep.t_up_session
}
