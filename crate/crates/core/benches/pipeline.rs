use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use c960_core::dataset::{build_per_sp, DatasetKind, FeatureTable};
use c960_core::ingest::Corpus;
use c960_core::learn::{evaluate, ModelConfig, ModelKind};
use c960_core::par;
use c960_core::synth::{gen_corpus, LabelRule, SynthConfig};

fn synth_config() -> SynthConfig {
    SynthConfig {
        sps: (0..16).map(|i| i * 60 + 3).collect(),
        games_per_sp: 40,
        label_rule: LabelRule::MaterialAt20,
        seed: 7,
        ..SynthConfig::default()
    }
}

fn corpus() -> Corpus {
    gen_corpus(&synth_config()).expect("valid config").0
}

fn tables(corpus: &Corpus) -> BTreeMap<u16, FeatureTable> {
    build_per_sp(corpus, DatasetKind::Ds2, &[20])
}

fn modes(c: &mut Criterion, name: &str, mut body: impl FnMut() + Send) {
    let mut group = c.benchmark_group(name);
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| par::sequential(&mut body))
    });
    group.bench_function(BenchmarkId::new("parallel", par::num_threads()), |b| b.iter(&mut body));
    group.finish();
}

fn bench(c: &mut Criterion) {
    let cfg = synth_config();
    modes(c, "synth", || {
        std::hint::black_box(gen_corpus(&cfg).unwrap());
    });

    let corpus = corpus();
    modes(c, "ds2_build", || {
        std::hint::black_box(tables(&corpus));
    });

    let tables = tables(&corpus);
    let rf = ModelConfig {
        n_trees: 50,
        ..ModelConfig::new(ModelKind::Rf)
    };
    modes(c, "rf_eval", || {
        std::hint::black_box(evaluate(&tables, &rf, 5).unwrap());
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
