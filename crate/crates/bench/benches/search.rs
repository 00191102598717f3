use criterion::{criterion_group, criterion_main, Criterion};

use hyperramsey::independence::{alpha_exact, find_independent, SearchView};
use hyperramsey::patterns::embed_search;
use hyperramsey::{make_family, Family};
use hyperramsey_bench::sample;

fn independence(c: &mut Criterion) {
    let (h, w, t) = sample(13);
    let view = SearchView::from_blocks(&h, &w).unwrap();
    c.bench_function("find_independent_q13", |b| {
        b.iter(|| find_independent(&view, t, u64::MAX, 0).unwrap())
    });
    let small = SearchView::from_blocks(&h, &w[..40]).unwrap();
    c.bench_function("alpha_exact_q13_40", |b| b.iter(|| alpha_exact(&small, u64::MAX).unwrap()));
}

fn embedding(c: &mut Criterion) {
    let (h, _, _) = sample(5);
    let f5 = make_family(Family::F5, 3).unwrap();
    let tp3 = make_family(Family::Tp3, 3).unwrap();
    let mut g = c.benchmark_group("embed");
    g.sample_size(10);
    g.bench_function("f5_q5", |b| b.iter(|| embed_search(&f5, &h, None, u64::MAX).unwrap()));
    g.bench_function("tp3_q5", |b| b.iter(|| embed_search(&tp3, &h, None, u64::MAX).unwrap()));
    g.finish();
}

criterion_group!(benches, independence, embedding);
criterion_main!(benches);
