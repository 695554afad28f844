use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use varray_core::constructions::{build_vand_vetbr, verify_mds_exhaustive};
use varray_core::{BitVec, Codec, CodewordArray, ErasurePattern, Exec, SyndromeMode};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn stripes(codec: &Codec, count: usize) -> Vec<Vec<BitVec>> {
    let spec = codec.spec();
    let mut g = ChaCha8Rng::seed_from_u64(1);
    (0..count)
        .map(|_| CodewordArray::random(spec.row_size(), spec.data_cols(), &mut g).into_columns())
        .collect()
}

fn batches(c: &mut Criterion) {
    let codec = Codec::new(build_vand_vetbr(11, 1, 4, 8).unwrap());
    let data = stripes(&codec, 512);
    let bytes = (512 * codec.spec().data_cols() * codec.spec().row_size() / 8) as u64;
    let words = codec.encode_batch(&data, Exec::Sequential).unwrap();
    let pattern = ErasurePattern::new(vec![3, 100, 200, 255]);

    let mut g = c.benchmark_group("batch");
    g.throughput(Throughput::Bytes(bytes));
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("encode", name), &exec, |b, &e| {
            b.iter(|| codec.encode_batch(&data, e).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("decode4", name), &exec, |b, &e| {
            b.iter(|| codec.decode_batch(&words, &pattern, e).unwrap())
        });
    }
    g.finish();
}

fn exhaustive(c: &mut Criterion) {
    let spec = build_vand_vetbr(7, 1, 3, 3).unwrap();
    let mut g = c.benchmark_group("verify_mds_exhaustive");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| verify_mds_exhaustive(&spec, 1_000_000, e).unwrap())
        });
    }
    g.finish();
}

fn syndrome(c: &mut Criterion) {
    let codec = Codec::new(build_vand_vetbr(13, 1, 4, 8).unwrap());
    let spec = codec.spec();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = CodewordArray::random(spec.row_size(), spec.total_cols(), &mut rng);
    let mut g = c.benchmark_group("syndrome");
    for (name, mode) in [("naive", SyndromeMode::Naive), ("fast", SyndromeMode::Fast)] {
        g.bench_function(name, |b| b.iter(|| codec.syndrome(&x, mode).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, batches, exhaustive, syndrome);
criterion_main!(benches);
