use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cobordia::fgl::Fgl;
use cobordia::group::GroupQuotient;
use cobordia::par::Exec;
use cobordia::roots::RootDatum;
use cobordia::schubert::{Theory, TheoryOptions};

fn theory(group: &str, exec: Exec) -> Theory {
    let rd = Arc::new(RootDatum::named(group).unwrap());
    let law = Arc::new(Fgl::universal(rd.n() as u32).unwrap());
    Theory::new(rd, law, &TheoryOptions { exec, ..TheoryOptions::default() }).unwrap()
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure_constants");
    g.sample_size(10);
    for group in ["SP4", "G2"] {
        for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
            g.bench_with_input(BenchmarkId::new(name, group), &exec, |b, &exec| {
                b.iter(|| black_box(theory(group, exec).structure_constants().unwrap()))
            });
        }
    }
    g.finish();
}

fn slices(c: &mut Criterion) {
    let mut g = c.benchmark_group("group_slices");
    g.sample_size(10);
    for (name, exec) in [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)] {
        g.bench_with_input(BenchmarkId::new(name, "G2"), &exec, |b, &exec| {
            b.iter(|| {
                let th = theory("G2", exec);
                black_box(GroupQuotient::new(&th, None).unwrap().slices().unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, tables, slices);
criterion_main!(benches);
