use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ap_extremal::constructions::{staircase, symmetric_interval};
use ap_extremal::search::{enumerate_max, Objective, RunOptions, SearchSpec};
use ap_extremal::rational::int;
use ap_extremal::{count_diff, count_triples, g_exact, EquationSpec, NumSet};

fn counting(c: &mut Criterion) {
    let stair = staircase(40).unwrap();
    c.bench_function("count_diff staircase m=40", |b| b.iter(|| count_diff(black_box(&stair))));

    let interval = symmetric_interval(100).unwrap();
    c.bench_function("count_diff interval m=100", |b| b.iter(|| count_diff(black_box(&interval))));

    let a = NumSet::from_integers((0..200).map(|i| i * i % 401));
    let b = NumSet::from_integers((0..150).map(|i| 3 * i + 1));
    let u = a.union(&b);
    let eq = EquationSpec::ap_sum();
    c.bench_function("count_triples ap_sum 200x150", |bench| {
        bench.iter(|| count_triples(black_box(&a), black_box(&b), black_box(&u), &eq))
    });

    let (x, y, z) = (int(9), int(6), int(7));
    c.bench_function("g_exact", |b| b.iter(|| g_exact(black_box(&x), black_box(&y), black_box(&z))));
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for (name, objective, n, span) in [
        ("max-diff n=6 span=8", Objective::MaxDiff, 6, 8),
        ("max-t-union n=7 span=9", Objective::MaxTUnion, 7, 9),
    ] {
        let spec = SearchSpec::new(objective, objective.default_equation(), n, span);
        group.bench_function(name, |b| b.iter(|| enumerate_max(&spec, RunOptions::default()).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, counting, search);
criterion_main!(benches);
