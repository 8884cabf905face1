use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use segmsa::exec::Exec;
use segmsa::neighborhoods::{all_segment_pair_scores, DivergenceMatrix};
use segmsa::pipeline::{run_align, Config};
use segmsa::seq::classify_informative;
use segmsa::synth::{planted_motifs, MotifParams};

fn modes() -> [(&'static str, Exec, usize); 2] {
    [("sequential", Exec::Sequential, 1), ("parallel", Exec::Parallel, 0)]
}

fn segment_scores(c: &mut Criterion) {
    let params = MotifParams {
        sequences: 20,
        length: 500,
        motifs: 5,
        ..MotifParams::default()
    };
    let inst = planted_motifs(&params, 9);
    let config = Config::default();
    let h = config.local_aligner();
    let views: Vec<_> = inst
        .seqs
        .iter()
        .map(|s| classify_informative(s, config.alpha, config.min_seg_len, config.merge_gap))
        .collect();

    let mut group = c.benchmark_group("segment_pair_scores");
    for (name, exec, _) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| black_box(all_segment_pair_scores(&views, &h, exec)))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("divergence");
    for (name, exec, _) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| black_box(DivergenceMatrix::compute(&views, &h, exec)))
        });
    }
    group.finish();
}

fn full_alignment(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_align");
    group.sample_size(10);
    for k in [10, 20] {
        let params = MotifParams {
            sequences: k,
            length: 500,
            motifs: 5,
            ..MotifParams::default()
        };
        let inst = planted_motifs(&params, 9);
        for (name, _, threads) in modes() {
            let config = Config {
                threads,
                ..Config::default()
            };
            group.bench_with_input(BenchmarkId::new(name, k), &inst.seqs, |b, seqs| {
                b.iter(|| black_box(run_align(seqs, &config).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, segment_scores, full_alignment);
criterion_main!(benches);
