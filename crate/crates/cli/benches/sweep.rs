use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use twt_cli::check::{oracle_check, OracleCheckParams};
use twt_cli::config::parse_config_str;
use twt_cli::sweep::{run_sweep, SweepOptions};

fn threads() -> usize {
    std::thread::available_parallelism().map_or(2, |n| n.get().max(2))
}

fn sweep_seq_vs_par(c: &mut Criterion) {
    let spec = parse_config_str("num_epochs = 20\nt_grid = 1\nv_grid = 1000\n")
        .expect("bench config")
        .sweep;
    let mut group = c.benchmark_group("reference_sweep_20_epochs");
    group.sample_size(10);
    for (name, n) in [("sequential", 0), ("parallel", threads())] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &n, |b, &n| {
            b.iter(|| {
                run_sweep(
                    &spec,
                    SweepOptions {
                        threads: n,
                        check_lemma1: false,
                    },
                )
            })
        });
    }
    group.finish();
}

fn oracle_seq_vs_par(c: &mut Criterion) {
    let params = OracleCheckParams::default();
    let mut group = c.benchmark_group("oracle_check_200");
    group.sample_size(10);
    for (name, n) in [("sequential", 0), ("parallel", threads())] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &n, |b, &n| {
            b.iter(|| oracle_check(&params, n))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep_seq_vs_par, oracle_seq_vs_par);
criterion_main!(benches);
