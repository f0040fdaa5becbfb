//! λ × V × T × algorithm × seed sweeps and their CSV rows.

use std::io::Write;

use twt_core::par::par_map;
use twt_core::sim::{run_simulation_with, theorem_constants, TheoremConstants};
use twt_core::{Algorithm, RunMetrics, RunOptions, SimConfig, TwtError};

use crate::config::SweepSpec;
use crate::error::CliError;

/// Column order of every CSV this tool writes.
pub const CSV_HEADER: [&str; 15] = [
    "sweep_id",
    "seed",
    "algorithm",
    "T_s",
    "V",
    "lambda_files_per_s",
    "avg_energy_J_per_epoch",
    "avg_queue_slotwise_bits",
    "avg_queue_epoch_sampled_bits",
    "stable",
    "queue_slope_bits_per_slot",
    "b1",
    "b2",
    "e_max",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub v: f64,
    pub t_s: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_id: String,
    pub point: SweepPoint,
    pub metrics: Option<RunMetrics>,
    pub constants: Option<TheoremConstants>,
    pub error: Option<String>,
    pub lemma1_violated: bool,
}

/// Execution knobs that do not change results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 0 runs points one after another.
    pub threads: usize,
    pub check_lemma1: bool,
}

/// Grid points in row order: λ outermost, then V, T, algorithm, seed.
pub fn grid_points(spec: &SweepSpec) -> Vec<SweepPoint> {
    let mut points = Vec::with_capacity(spec.num_points());
    for &lambda in &spec.lambda_grid {
        for &v in &spec.v_grid {
            for &t_s in &spec.t_grid {
                for &algorithm in &spec.algorithms {
                    for &seed in &spec.seeds {
                        points.push(SweepPoint {
                            lambda,
                            v,
                            t_s,
                            algorithm,
                            seed,
                        });
                    }
                }
            }
        }
    }
    points
}

/// The base configuration specialised to one grid point.
pub fn point_config(base: &SimConfig, p: &SweepPoint) -> Result<SimConfig, TwtError> {
    let mut cfg = base.clone();
    cfg.timing = base.timing.with_epoch_len(p.t_s)?;
    cfg.traffic.lambda_files_per_s = p.lambda;
    cfg.v = p.v;
    cfg.algorithm = p.algorithm;
    cfg.seed = p.seed;
    cfg.validate()?;
    Ok(cfg)
}

/// Runs one configuration and packages the outcome as a row.
pub fn run_row(
    sweep_id: &str,
    point: SweepPoint,
    cfg: Result<SimConfig, TwtError>,
    check_lemma1: bool,
) -> SweepRow {
    let outcome = cfg.and_then(|cfg| {
        let opts = RunOptions {
            record_traces: false,
            check_lemma1,
        };
        let (metrics, _) = run_simulation_with(&cfg, opts)?;
        Ok((metrics, theorem_constants(&cfg)))
    });
    let (metrics, constants, error, lemma1_violated) = match outcome {
        Ok((m, c)) => (Some(m), Some(c), None, false),
        Err(e) => {
            let violated = matches!(e, TwtError::Lemma1Violation { .. });
            (None, None, Some(e.to_string()), violated)
        }
    };
    SweepRow {
        sweep_id: sweep_id.to_string(),
        point,
        metrics,
        constants,
        error,
        lemma1_violated,
    }
}

/// Row for a single configuration, as printed by `run`.
pub fn single_run_row(cfg: &SimConfig, check_lemma1: bool) -> SweepRow {
    let point = SweepPoint {
        lambda: cfg.traffic.lambda_files_per_s,
        v: cfg.v,
        t_s: cfg.timing.epoch_len(),
        algorithm: cfg.algorithm,
        seed: cfg.seed,
    };
    run_row("run", point, Ok(cfg.clone()), check_lemma1)
}

/// Runs every grid point. Failures land in the row's `error` column and the
/// sweep carries on. Rows come back in grid order whatever the thread count.
pub fn run_sweep(spec: &SweepSpec, opts: SweepOptions) -> Vec<SweepRow> {
    let points = grid_points(spec);
    par_map(&points, opts.threads, |p| {
        run_row(
            &spec.sweep_id,
            *p,
            point_config(&spec.base, p),
            opts.check_lemma1,
        )
    })
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SweepRow {
    pub fn record(&self) -> [String; 15] {
        let m = self.metrics.as_ref();
        let c = self.constants.as_ref();
        [
            self.sweep_id.clone(),
            self.point.seed.to_string(),
            self.point.algorithm.to_string(),
            self.point.t_s.to_string(),
            self.point.v.to_string(),
            self.point.lambda.to_string(),
            opt(m.map(|m| m.avg_energy_per_epoch)),
            opt(m.map(|m| m.avg_queue_slotwise)),
            opt(m.map(|m| m.avg_queue_epoch_sampled)),
            opt(m.and_then(|m| m.stable)),
            opt(m.and_then(|m| m.queue_slope)),
            opt(c.map(|c| c.b1)),
            opt(c.map(|c| c.b2)),
            opt(c.map(|c| c.e_max)),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Writes the header and one record per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|source| CliError::Io {
        path: "csv output".to_string(),
        source,
    })?;
    Ok(())
}
