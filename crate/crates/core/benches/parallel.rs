//! Sequential against data-parallel execution on the workloads that fan out.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ldauth_core::laver::{doubling_mismatches, LaverTable};
use ldauth_core::platform::laws::{law_check, Coverage, Law};
use ldauth_core::platform::search::search_cd_magmas;
use ldauth_core::platform::{LaverPlatform, ShiftedBraid};
use ldauth_core::protocol::{LawMode, ProtocolConfig};
use ldauth_core::{experiment, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn braid_law_check(c: &mut Criterion) {
    let platform = ShiftedBraid::default();
    let mut group = c.benchmark_group("braid_ld_law_200");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                let coverage = Coverage::Random { trials: 200, seed: 1 };
                black_box(law_check(&platform, Law::Ld, coverage, exec).unwrap().passed)
            })
        });
    }
    group.finish();
}

fn laver_law_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("laver_ld_law_exhaustive");
    group.sample_size(10);
    for n in [4u32, 5] {
        let platform = LaverPlatform::new(n).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| black_box(law_check(&platform, Law::Ld, Coverage::Exhaustive, exec).unwrap().passed))
            });
        }
    }
    group.finish();
}

fn sessions(c: &mut Criterion) {
    let config = ProtocolConfig::new(20, LawMode::Ld).unwrap();
    let braid = ShiftedBraid::default();
    let laver = LaverPlatform::new(8).unwrap();
    let mut group = c.benchmark_group("completeness_100_sessions");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, "shifted-braid"), |b| {
            b.iter(|| black_box(experiment::completeness(&braid, &config, 100, 3, exec).unwrap().successes))
        });
        group.bench_function(BenchmarkId::new(name, "laver:8"), |b| {
            b.iter(|| black_box(experiment::completeness(&laver, &config, 100, 3, exec).unwrap().successes))
        });
    }
    group.finish();
}

fn cd_magmas(c: &mut Criterion) {
    let mut group = c.benchmark_group("cd_magmas_size3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(search_cd_magmas(3, exec).unwrap().len())));
    }
    group.finish();
}

fn laver_doubling(c: &mut Criterion) {
    let small = LaverTable::build(9).unwrap();
    let big = LaverTable::build(10).unwrap();
    let mut group = c.benchmark_group("laver_doubling_9_to_10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| black_box(doubling_mismatches(&small, &big, exec).len())));
    }
    group.finish();
}

criterion_group!(benches, braid_law_check, laver_law_check, sessions, cd_magmas, laver_doubling);
criterion_main!(benches);
