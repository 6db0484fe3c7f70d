use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use crosspatch::{enumerate_pseudotours, Board, CrossTable, EnumOptions, Parallelism, Topology};

fn boards() -> Vec<Board> {
    vec![
        Board::rectangle(8, 8).unwrap(),
        Board::rectangle(10, 8).unwrap(),
        Board::new(Topology::Torus, 5, 6).unwrap(),
        Board::new(Topology::Torus, 6, 6).unwrap(),
    ]
}

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_pseudotours");
    group.sample_size(10);
    for board in boards() {
        let table = CrossTable::new(&board);
        for (name, parallelism) in [
            ("sequential", Parallelism::Sequential),
            ("parallel", Parallelism::Parallel),
        ] {
            let options = EnumOptions {
                parallelism,
                ..EnumOptions::default()
            };
            group.bench_with_input(
                BenchmarkId::new(name, board.descriptor()),
                &options,
                |b, options| {
                    b.iter(|| {
                        enumerate_pseudotours(black_box(&table), options)
                            .unwrap()
                            .raw_count
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, enumerate);
criterion_main!(benches);
