//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment; lists are comma separated.
//! Every key is optional and falls back to the reference setup. The same file
//! carries a single-run configuration and, for `sweep`, the grids.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use twt_core::sim::StabilityParams;
use twt_core::{
    Algorithm, EnergyParams, EpochTiming, RateModel, SimConfig, SleepSemantics, TrafficParams,
    TwtError,
};

use crate::error::CliError;

/// Arrival periods of the reference sweep, in seconds.
pub const REFERENCE_PERIODS_S: [f64; 10] = [5.0, 4.5, 4.0, 3.5, 3.0, 2.5, 2.0, 1.5, 1.0, 0.5];

/// Arrival rates of the reference sweep: one file per period.
pub fn reference_lambda_grid() -> Vec<f64> {
    REFERENCE_PERIODS_S.iter().map(|p| 1.0 / p).collect()
}

/// Grids and seeds swept around a base configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub sweep_id: String,
    pub base: SimConfig,
    pub lambda_grid: Vec<f64>,
    pub v_grid: Vec<f64>,
    /// Epoch lengths, seconds.
    pub t_grid: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    /// Upper bound on the number of grid points.
    pub max_points: usize,
}

impl SweepSpec {
    pub fn reference(base: SimConfig) -> Self {
        SweepSpec {
            sweep_id: "reference".to_string(),
            base,
            lambda_grid: reference_lambda_grid(),
            v_grid: vec![1000.0, 5000.0],
            t_grid: vec![1.0, 2.0],
            algorithms: vec![Algorithm::Jtwsa, Algorithm::Random],
            seeds: vec![1],
            max_points: 10_000,
        }
    }

    pub fn num_points(&self) -> usize {
        self.lambda_grid.len()
            * self.v_grid.len()
            * self.t_grid.len()
            * self.algorithms.len()
            * self.seeds.len()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let grids: [(&'static str, usize); 5] = [
            ("lambda_grid", self.lambda_grid.len()),
            ("v_grid", self.v_grid.len()),
            ("t_grid", self.t_grid.len()),
            ("algorithms", self.algorithms.len()),
            ("seeds", self.seeds.len()),
        ];
        for (key, len) in grids {
            if len == 0 {
                return Err(CliError::config(key, "grid must not be empty"));
            }
        }
        if self.num_points() > self.max_points {
            return Err(CliError::config(
                "max_points",
                format!(
                    "sweep has {} points, budget is {}",
                    self.num_points(),
                    self.max_points
                ),
            ));
        }
        if self.sweep_id.contains(',') || self.sweep_id.contains('\n') {
            return Err(CliError::config(
                "sweep_id",
                "must not contain commas or newlines",
            ));
        }
        Ok(())
    }
}

/// Parsed contents of a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub sim: SimConfig,
    pub sweep: SweepSpec,
}

const KEYS: &[&str] = &[
    "num_stations",
    "k_capacity",
    "epoch_len_s",
    "slot_len_s",
    "intervals_s",
    "p_down_w",
    "p_up_w",
    "p_sleep_w",
    "t_up_s",
    "frac_down",
    "frac_up",
    "file_size_bits",
    "lambda_files_per_s",
    "arrival_cap_files_per_slot",
    "rates_bps",
    "v",
    "algorithm",
    "num_epochs",
    "seed",
    "sleep_semantics",
    "stability_threshold_frac",
    "stability_window_frac",
    "sweep_id",
    "lambda_grid",
    "v_grid",
    "t_grid",
    "algorithms",
    "seeds",
    "max_points",
];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Syntax {
                line: n + 1,
                reason: "expected `key = value`".to_string(),
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::UnknownKey(key.to_string()));
            }
            if map
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::config(key_ref(key), "key given more than once"));
            }
        }
        Ok(Entries(map))
    }

    fn scalar<T: FromStr>(&self, key: &'static str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e: T::Err| CliError::config(key, format!("`{v}`: {e}"))),
        }
    }

    fn list<T: FromStr>(&self, key: &'static str, default: Vec<T>) -> Result<Vec<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|item| {
                    item.parse()
                        .map_err(|e: T::Err| CliError::config(key, format!("`{item}`: {e}")))
                })
                .collect(),
        }
    }
}

fn key_ref(key: &str) -> &'static str {
    KEYS.iter().find(|k| **k == key).copied().unwrap_or("?")
}

fn core_err(e: TwtError) -> CliError {
    match e {
        TwtError::InvalidParam { key, reason } => CliError::Config { key, reason },
        TwtError::IntervalTooLong { .. } => CliError::config("intervals_s", e.to_string()),
        TwtError::EmptyRateSet => CliError::config("rates_bps", e.to_string()),
        other => CliError::config("config", other.to_string()),
    }
}

/// Parses configuration text. Omitted keys take their reference value.
pub fn parse_config_str(text: &str) -> Result<ConfigFile, CliError> {
    let e = Entries::parse(text)?;
    let d = SimConfig::reference();

    let slot_len = e.scalar("slot_len_s", d.timing.slot_len())?;
    let timing = EpochTiming::new(
        e.scalar("epoch_len_s", d.timing.epoch_len())?,
        slot_len,
        &e.list("intervals_s", d.timing.intervals())?,
    )
    .map_err(core_err)?;
    let energy = EnergyParams {
        p_down: e.scalar("p_down_w", d.energy.p_down)?,
        p_up: e.scalar("p_up_w", d.energy.p_up)?,
        p_sleep: e.scalar("p_sleep_w", d.energy.p_sleep)?,
        t_up_session: e.scalar("t_up_s", d.energy.t_up_session)?,
        frac_down: e.scalar("frac_down", d.energy.frac_down)?,
        frac_up: e.scalar("frac_up", d.energy.frac_up)?,
    };
    let traffic = TrafficParams {
        file_size_bits: e.scalar("file_size_bits", d.traffic.file_size_bits)?,
        lambda_files_per_s: e.scalar("lambda_files_per_s", d.traffic.lambda_files_per_s)?,
        arrival_cap_files_per_slot: e.scalar(
            "arrival_cap_files_per_slot",
            d.traffic.arrival_cap_files_per_slot,
        )?,
    };
    let sim = SimConfig {
        num_stations: e.scalar("num_stations", d.num_stations)?,
        timing,
        energy,
        traffic,
        rates: RateModel {
            rates_bps: e.list("rates_bps", d.rates.rates_bps.clone())?,
        },
        v: e.scalar("v", d.v)?,
        k_capacity: e.scalar("k_capacity", d.k_capacity)?,
        algorithm: e.scalar("algorithm", d.algorithm)?,
        num_epochs: e.scalar("num_epochs", d.num_epochs)?,
        seed: e.scalar("seed", d.seed)?,
        sleep_semantics: e.scalar::<SleepSemantics>("sleep_semantics", d.sleep_semantics)?,
        stability: StabilityParams {
            threshold_frac: e.scalar("stability_threshold_frac", d.stability.threshold_frac)?,
            window_frac: e.scalar("stability_window_frac", d.stability.window_frac)?,
        },
    };
    sim.validate().map_err(core_err)?;

    let ds = SweepSpec::reference(sim.clone());
    let sweep = SweepSpec {
        sweep_id: e.scalar("sweep_id", ds.sweep_id.clone())?,
        lambda_grid: e.list("lambda_grid", ds.lambda_grid.clone())?,
        v_grid: e.list("v_grid", ds.v_grid.clone())?,
        t_grid: e.list("t_grid", ds.t_grid.clone())?,
        algorithms: e.list("algorithms", ds.algorithms.clone())?,
        seeds: e.list("seeds", ds.seeds.clone())?,
        max_points: e.scalar("max_points", ds.max_points)?,
        base: sim.clone(),
    };
    sweep.validate()?;
    Ok(ConfigFile { sim, sweep })
}

pub fn parse_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

/// Durations rebuilt from slot counts pick up representation noise
/// (`7 * 0.05 = 0.35000000000000003`); print them at 12 decimals.
fn secs(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

/// Writes every key of `cfg` back in the file format.
pub fn serialize_config(cfg: &ConfigFile) -> String {
    let s = &cfg.sim;
    let w = &cfg.sweep;
    let mut out = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    put("num_stations", s.num_stations.to_string());
    put("k_capacity", s.k_capacity.to_string());
    put("epoch_len_s", secs(s.timing.epoch_len()).to_string());
    put("slot_len_s", s.timing.slot_len().to_string());
    put(
        "intervals_s",
        join(
            &s.timing
                .intervals()
                .into_iter()
                .map(secs)
                .collect::<Vec<_>>(),
        ),
    );
    put("p_down_w", s.energy.p_down.to_string());
    put("p_up_w", s.energy.p_up.to_string());
    put("p_sleep_w", s.energy.p_sleep.to_string());
    put("t_up_s", s.energy.t_up_session.to_string());
    put("frac_down", s.energy.frac_down.to_string());
    put("frac_up", s.energy.frac_up.to_string());
    put("file_size_bits", s.traffic.file_size_bits.to_string());
    put(
        "lambda_files_per_s",
        s.traffic.lambda_files_per_s.to_string(),
    );
    put(
        "arrival_cap_files_per_slot",
        s.traffic.arrival_cap_files_per_slot.to_string(),
    );
    put("rates_bps", join(&s.rates.rates_bps));
    put("v", s.v.to_string());
    put("algorithm", s.algorithm.to_string());
    put("num_epochs", s.num_epochs.to_string());
    put("seed", s.seed.to_string());
    put("sleep_semantics", s.sleep_semantics.to_string());
    put(
        "stability_threshold_frac",
        s.stability.threshold_frac.to_string(),
    );
    put("stability_window_frac", s.stability.window_frac.to_string());
    put("sweep_id", w.sweep_id.clone());
    put("lambda_grid", join(&w.lambda_grid));
    put("v_grid", join(&w.v_grid));
    put("t_grid", join(&w.t_grid));
    put("algorithms", join(&w.algorithms));
    put("seeds", join(&w.seeds));
    put("max_points", w.max_points.to_string());
    out
}
