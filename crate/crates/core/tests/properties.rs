use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use crosspatch::oracle::oracle_two_factors;
use crosspatch::symmetry::SymmetryGroup;
use crosspatch::{
    cross_partner, enumerate_pseudotours, realize_graph, Board, CrossTable, EnumOptions,
    KnightMove, Parallelism, RedSet, Square, Topology,
};

fn board_strategy() -> impl Strategy<Value = Board> {
    prop_oneof![
        (1..=7i32, 1..=7i32).prop_map(|(m, n)| Board::rectangle(m, n).unwrap()),
        (5..=7i32, 1..=6i32).prop_map(|(m, n)| Board::new(Topology::CylinderX, m, n).unwrap()),
        (1..=6i32, 5..=7i32).prop_map(|(m, n)| Board::new(Topology::CylinderY, m, n).unwrap()),
        (5..=7i32, 5..=7i32).prop_map(|(m, n)| Board::new(Topology::Torus, m, n).unwrap()),
        (
            3..=6i32,
            3..=6i32,
            proptest::collection::vec((1..=6i32, 1..=6i32), 1..4)
        )
            .prop_filter_map("needs a square left", |(m, n, cut)| {
                let removed = cut
                    .into_iter()
                    .filter(|&(i, j)| i <= m && j <= n)
                    .map(|(i, j)| Square::new(i, j));
                Board::subset(m, n, removed).ok()
            }),
    ]
}

/// A board with a random subset of its colorable edges.
fn red_set_strategy() -> impl Strategy<Value = (CrossTable, RedSet)> {
    (board_strategy(), any::<u64>(), 0.0..1.0f64).prop_map(|(board, seed, p)| {
        let table = CrossTable::new(&board);
        let mut state = seed | 1;
        let ids: Vec<u32> = table
            .colorable_edges()
            .filter(|_| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 1000) as f64 / 1000.0 < p
            })
            .collect();
        let reds = RedSet::from_ids(&table, ids).unwrap();
        (table, reds)
    })
}

proptest! {
    #[test]
    fn edge_ids_are_a_bijection(board in board_strategy()) {
        let table = CrossTable::new(&board);
        let edges = board.edges();
        prop_assert_eq!(table.edges(), &edges[..]);
        for (id, &e) in edges.iter().enumerate() {
            prop_assert_eq!(table.edge_id(e), Some(id as u32));
            let (x, y) = e.midpoint();
            prop_assert_eq!(board.edge_at_midpoint(x, y), Some(e));
        }
        let unique: BTreeSet<_> = edges.iter().map(|e| e.midpoint()).collect();
        prop_assert_eq!(unique.len(), edges.len());
    }

    #[test]
    fn square_ids_are_a_bijection(board in board_strategy()) {
        let table = CrossTable::new(&board);
        for (id, s) in board.squares().into_iter().enumerate() {
            prop_assert_eq!(table.square_id(s), Some(id as u32));
            prop_assert_eq!(table.square(id as u32), s);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn degree_counts_red_edges_around_each_square((table, reds) in red_set_strategy()) {
        let board = table.board();
        let g = realize_graph(&table, &reds);
        let mut degree: HashMap<Square, usize> = HashMap::new();
        for e in reds.edges(&table) {
            let pair = cross_partner(board, e).unwrap().expect("red edges are colorable");
            for s in pair.squares() {
                *degree.entry(s).or_default() += 1;
            }
        }
        for (id, s) in board.squares().into_iter().enumerate() {
            let around = table
                .square_edges(id as u32)
                .iter()
                .filter(|&&e| reds.contains(e))
                .count();
            prop_assert_eq!(g.degree(id as u32), around);
            prop_assert_eq!(g.degree(id as u32), degree.get(&s).copied().unwrap_or(0));
        }
        prop_assert_eq!(g.move_count(), 2 * reds.len());
        prop_assert_eq!(g.red_set(&table), reds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallel_and_sequential_agree(board in board_strategy()) {
        prop_assume!(board.square_count() <= 30);
        let table = CrossTable::new(&board);
        let par = enumerate_pseudotours(&table, &EnumOptions::default()).unwrap();
        let seq = enumerate_pseudotours(&table, &EnumOptions::sequential()).unwrap();
        prop_assert_eq!(&par, &seq);
        let again = enumerate_pseudotours(&table, &EnumOptions::default()).unwrap();
        prop_assert_eq!(par, again);
    }

    #[test]
    fn symmetry_images_are_pseudotours(board in board_strategy()) {
        prop_assume!(board.square_count() <= 30);
        let table = CrossTable::new(&board);
        let all = enumerate_pseudotours(&table, &EnumOptions::default()).unwrap().sets;
        let set: BTreeSet<_> = all.iter().cloned().collect();
        let group = SymmetryGroup::new(&table);
        let mut orbits = 0;
        for r in &all {
            for image in group.images(r) {
                prop_assert!(set.contains(&image));
            }
            orbits += usize::from(group.is_canonical(r));
        }
        let reduced = enumerate_pseudotours(&table, &EnumOptions { symmetry: true, ..EnumOptions::default() })
            .unwrap();
        prop_assert_eq!(reduced.sets.len(), orbits);
        prop_assert_eq!(reduced.raw_count, all.len());
    }
}

fn assert_oracle_agrees(board: &Board) {
    let table = CrossTable::new(board);
    let mut ours: Vec<Vec<KnightMove>> = enumerate_pseudotours(&table, &EnumOptions::default())
        .unwrap()
        .sets
        .iter()
        .map(|r| realize_graph(&table, r).knight_moves(&table))
        .collect();
    ours.sort();
    let oracle = oracle_two_factors(board).unwrap();
    assert_eq!(ours.len(), oracle.len(), "{board}");
    assert!(ours == oracle, "{board}");
}

#[test]
fn oracle_agrees_on_wrapped_boards() {
    let mut boards = Vec::new();
    for (m, n) in [(5, 5), (5, 6), (6, 5), (6, 6), (5, 7), (7, 5)] {
        boards.push(Board::new(Topology::Torus, m, n).unwrap());
    }
    for m in 5..=9 {
        for n in 1..=36 / m {
            boards.push(Board::new(Topology::CylinderX, m, n).unwrap());
            boards.push(Board::new(Topology::CylinderY, n, m).unwrap());
        }
    }
    for b in &boards {
        assert_oracle_agrees(b);
    }
}

#[test]
fn oracle_agrees_on_small_rectangles() {
    for m in 1..=9 {
        for n in 1..=36 / m {
            assert_oracle_agrees(&Board::rectangle(m, n).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_agrees_on_subset_boards(board in board_strategy()) {
        prop_assume!(board.square_count() <= 36);
        assert_oracle_agrees(&board);
    }
}

#[test]
fn sequential_parallelism_is_honoured_without_rayon() {
    let table = CrossTable::new(&Board::rectangle(8, 6).unwrap());
    let options = EnumOptions {
        parallelism: Parallelism::Sequential,
        ..EnumOptions::default()
    };
    assert_eq!(
        enumerate_pseudotours(&table, &options).unwrap().raw_count,
        7
    );
}
