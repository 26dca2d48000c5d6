use criterion::{criterion_group, criterion_main, Criterion};
use squarecat_core::suite::{run_suite, SuiteConfig};

fn suites(c: &mut Criterion) {
    let cfg = SuiteConfig::default();
    let mut g = c.benchmark_group("suite");
    g.sample_size(10);
    for name in ["cube-axioms", "coherence", "mapspace-pi0"] {
        g.bench_function(name, |b| b.iter(|| run_suite(name, &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
