// Sequential vs rayon execution of the partitionable loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ultraiso::isotree::{random_tree, verify_tree};
use ultraiso::oracle::{census, check_isosceles_exhaustive};
use ultraiso::{Domain, Exec, FieldDescriptor, NormValue, Space, SpaceDescriptor};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn q3(dim: usize) -> Space {
    Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::padic(3, 8, -16, 16), &vec![1; dim])).unwrap()
}

fn verify(c: &mut Criterion) {
    let x = q3(2);
    let radii = [NormValue::new(1, 27), NormValue::new(1, 9), NormValue::new(1, 3), NormValue::ONE];
    let tree = random_tree(&x, &radii, 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let mut group = c.benchmark_group("verify_tree");
    group.sample_size(10);
    for depth in [3, 5] {
        let d = Domain::with_depth(&x, &NormValue::ONE, depth).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, d.size()), &d, |b, d| {
                b.iter(|| black_box(verify_tree(&x, &tree, d, exec).passed()))
            });
        }
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let f3 = Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(3), &[1, 1])).unwrap();
    let f5 = Space::new(SpaceDescriptor::with_int_weights(FieldDescriptor::finite(5), &[1, 1])).unwrap();
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new("census_f3_trivial", name), |b| {
            b.iter(|| black_box(census(&f3, 1_000_000, 0, exec).unwrap().total))
        });
        group.bench_function(BenchmarkId::new("isosceles_f5_trivial", name), |b| {
            b.iter(|| black_box(check_isosceles_exhaustive(&f5, exec).unwrap().triples))
        });
    }
    group.finish();
}

criterion_group!(benches, verify, oracle);
criterion_main!(benches);
