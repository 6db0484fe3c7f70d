//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crosspatch::census::{census_record, CensusOptions};
use crosspatch::hgraph::{quadrant_degree_parity, quadrant_parity_certificate};
use crosspatch::oracle::oracle_two_factors;
use crosspatch::tour::{
    find_lemma1_counterexample, search_closed_tour, search_open_tour_with_stats, verify_witness,
    CounterexampleOutcome, TourKind, TourOutcome, TourQuery,
};
use crosspatch::verify::verify_pseudotour;
use crosspatch::{
    cross_partner, cycle_decomposition, enumerate_pseudotours, move_to_edge, realize_graph, Board,
    BoardEdge, BoardVertex, CrossTable, EdgeDir, EnumOptions, KnightMove, RedSet, Square, Topology,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn all_boards_up_to(max: i32) -> Vec<Board> {
    let mut out = Vec::new();
    for top in [
        Topology::Rectangle,
        Topology::CylinderX,
        Topology::CylinderY,
        Topology::Torus,
    ] {
        for m in 1..=max {
            for n in 1..=max {
                if let Ok(b) = Board::new(top, m, n) {
                    out.push(b);
                }
            }
        }
    }
    out
}

fn rectangles(lo: i32, hi: i32) -> Vec<Board> {
    (lo..=hi)
        .flat_map(|m| (lo..=hi).map(move |n| Board::rectangle(m, n).unwrap()))
        .collect()
}

/// Knight moves grouped by the midpoint of their two centers, computed from
/// raw coordinates.
fn midpoint_groups(board: &Board) -> HashMap<(i32, i32), BTreeSet<KnightMove>> {
    let (w, h) = (2 * board.width(), 2 * board.height());
    let mut groups: HashMap<(i32, i32), BTreeSet<KnightMove>> = HashMap::new();
    for s in board.squares() {
        for (di, dj) in [
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ] {
            let Some(t) = board.square(s.i + di, s.j + dj) else {
                continue;
            };
            let mut x = 2 * s.i - 1 + di;
            let mut y = 2 * s.j - 1 + dj;
            if board.topology().wraps_x() {
                x = x.rem_euclid(w);
            }
            if board.topology().wraps_y() {
                y = y.rem_euclid(h);
            }
            groups
                .entry((x, y))
                .or_default()
                .insert(KnightMove::new(board, s, t).unwrap());
        }
    }
    groups
}

fn criterion_1() -> Outcome {
    let mut mismatches = 0;
    let boards = all_boards_up_to(10);
    for board in &boards {
        let groups = midpoint_groups(board);
        let mut paired = 0;
        for e in board.edges() {
            let group = groups.get(&e.midpoint()).cloned().unwrap_or_default();
            match cross_partner(board, e).unwrap() {
                Some(pair) => {
                    paired += 1;
                    let ours: BTreeSet<_> = pair.moves.into_iter().collect();
                    if ours != group || ours.len() != 2 {
                        mismatches += 1;
                    }
                }
                None => mismatches += usize::from(group.len() >= 2),
            }
        }
        for (mid, group) in &groups {
            mismatches += usize::from(group.len() > 2);
            for &mv in group {
                mismatches += usize::from(move_to_edge(board, mv).midpoint() != *mid);
            }
        }
        mismatches += usize::from(groups.values().filter(|g| g.len() == 2).count() != paired);
    }
    outcome(
        mismatches == 0,
        format!("{} boards, {mismatches} mismatches", boards.len()),
    )
}

fn criterion_2() -> Outcome {
    let mut boards = rectangles(3, 6);
    boards.push(Board::ring3());
    let mut discrepancies = Vec::new();
    let mut total = 0;
    for b in &boards {
        let table = CrossTable::new(b);
        let ours: Vec<Vec<KnightMove>> = enumerate_pseudotours(&table, &EnumOptions::default())
            .unwrap()
            .sets
            .iter()
            .map(|r| realize_graph(&table, r).knight_moves(&table))
            .collect();
        let mut sorted = ours.clone();
        sorted.sort();
        let oracle = oracle_two_factors(b).unwrap();
        total += oracle.len();
        if sorted != oracle {
            discrepancies.push(b.descriptor());
        }
    }
    outcome(
        discrepancies.is_empty(),
        format!(
            "{} boards, {total} pseudotours, discrepancies {discrepancies:?}",
            boards.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let b = Board::rectangle(4, 4).unwrap();
    let table = CrossTable::new(&b);
    let sets = enumerate_pseudotours(&table, &EnumOptions::default())
        .unwrap()
        .sets;
    let oracle = oracle_two_factors(&b).unwrap();
    let lengths = sets.first().map(|r| {
        cycle_decomposition(&table, &realize_graph(&table, r))
            .unwrap()
            .lengths()
    });
    let pass = sets.len() == 1 && oracle.len() == 1 && lengths == Some(vec![4, 4, 4, 4]);
    outcome(
        pass,
        format!(
            "engine {} / oracle {} pseudotours, cycle lengths {lengths:?}",
            sets.len(),
            oracle.len()
        ),
    )
}

/// Every pseudotour of every rectangle up to 10x10 with its report.
fn rectangle_reports() -> Vec<(Board, crosspatch::verify::VerificationReport)> {
    let mut out = Vec::new();
    for b in rectangles(3, 10) {
        let table = CrossTable::new(&b);
        for r in enumerate_pseudotours(&table, &EnumOptions::default())
            .unwrap()
            .sets
        {
            out.push((b.clone(), verify_pseudotour(&table, &r)));
        }
    }
    out
}

fn criterion_4(reports: &[(Board, crosspatch::verify::VerificationReport)]) -> Outcome {
    let bad = reports
        .iter()
        .filter(|(_, r)| {
            !(r.h_degrees_even
                && r.h_degrees_zero_or_two
                && r.h_degree_histogram.keys().all(|&d| d == 0 || d == 2))
        })
        .count();
    outcome(
        bad == 0,
        format!(
            "{} pseudotours on rectangles 3x3..10x10 (8x8 included), {bad} violations",
            reports.len()
        ),
    )
}

fn criterion_5(reports: &[(Board, crosspatch::verify::VerificationReport)]) -> Outcome {
    let bad = reports
        .iter()
        .filter(|(_, r)| !(r.sigma_walks_even && r.errors.is_empty()))
        .count();
    let cycles: usize = reports.iter().map(|(_, r)| r.h_cycles.unwrap_or(0)).sum();
    outcome(
        bad == 0,
        format!("{cycles} H-cycles walked, {bad} violations"),
    )
}

fn criterion_6(reports: &[(Board, crosspatch::verify::VerificationReport)]) -> Outcome {
    let mut bad = 0;
    let mut histogram = BTreeMap::new();
    for (_, r) in reports {
        let g = r.g_cycles.unwrap_or(1);
        *histogram.entry(g).or_insert(0) += 1;
        let per_h: usize = r.braid.iter().map(|e| e.g_cycles).sum();
        let split = r.braid.iter().all(|e| e.g_cycles == e.sigma_cycles);
        if !(r.cycle_parity && g % 2 == 0 && per_h == g && split) {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("G-cycle histogram {histogram:?}, {bad} violations"),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut found = Vec::new();
    let mut inconclusive = Vec::new();
    let mut unobstructed = 0;
    let (mut pairs, mut obstructed, mut candidates) = (0, 0, 0);
    for b in rectangles(3, 6) {
        for kind in [TourKind::Closed, TourKind::Open] {
            let q = TourQuery::new(b.clone(), kind);
            let outcome = match kind {
                TourKind::Closed => search_closed_tour(&q).unwrap(),
                TourKind::Open => {
                    let (o, stats) = search_open_tour_with_stats(&q).unwrap();
                    unobstructed += stats.unobstructed_candidates;
                    pairs += stats.endpoint_pairs;
                    obstructed += stats.obstructed_pairs;
                    candidates += stats.candidates;
                    o
                }
            };
            match outcome {
                TourOutcome::None => {}
                TourOutcome::Found(_) => found.push(format!("{} {kind:?}", b.descriptor())),
                TourOutcome::Inconclusive { .. } => {
                    inconclusive.push(format!("{} {kind:?}", b.descriptor()))
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = found.is_empty()
        && inconclusive.is_empty()
        && unobstructed == 0
        && elapsed < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "16 boards x 2 kinds: found {found:?}, inconclusive {inconclusive:?}; open search: {obstructed}/{pairs} endpoint pairs obstructed, {candidates} candidates, {unobstructed} unobstructed"
        ),
    )
}

fn criterion_8() -> Outcome {
    let q = TourQuery::new(Board::ring3(), TourKind::Closed);
    let table = CrossTable::new(&q.board);
    match search_closed_tour(&q).unwrap() {
        TourOutcome::Found(w) => {
            let ok = verify_witness(&table, &w).is_ok()
                && w.sequence.len() == 8
                && w.cycle_count == 1
                && w.reds.len() == 4;
            let seq: Vec<String> = w.sequence.iter().map(Square::to_string).collect();
            outcome(ok, format!("tour {}", seq.join(" ")))
        }
        other => outcome(false, format!("{other:?}")),
    }
}

/// H-degree of `u` from the edge endpoints directly.
fn h_degree(board: &Board, edges: &[BoardEdge], u: BoardVertex) -> usize {
    let norm = |a: i32, b: i32| board.vertex(a, b);
    edges
        .iter()
        .filter(|e| {
            let (a, b) = (e.anchor.a, e.anchor.b);
            let far = match e.dir {
                EdgeDir::N => norm(a, b + 1),
                EdgeDir::E => norm(a + 1, b),
            };
            norm(a, b) == Some(u) || far == Some(u)
        })
        .count()
}

fn criterion_9() -> Outcome {
    let found = find_lemma1_counterexample(Topology::Torus, 8, &EnumOptions::default()).unwrap();
    let CounterexampleOutcome::Found { witness, .. } = found else {
        return outcome(false, format!("{found:?}"));
    };
    let table = CrossTable::new(&witness.board);
    // Round trip through JSON before re-checking.
    let doc = crosspatch::json::PseudotourJson::new(&table, &witness.reds);
    let text = serde_json::to_string(&doc).unwrap();
    let back: crosspatch::json::PseudotourJson = serde_json::from_str(&text).unwrap();
    let board = back.board().unwrap();
    let table = CrossTable::new(&board);
    let reds = back.red_set(&table).unwrap();
    let g = realize_graph(&table, &reds);
    let degree = h_degree(&board, &reds.edges(&table), witness.vertex);
    let report = verify_pseudotour(&table, &reds);
    let pass = g.is_pseudotour() && degree % 2 == 1 && !report.h_degrees_even;
    outcome(
        pass,
        format!(
            "{}: {} red edges, H-vertex {} of degree {degree}",
            board.descriptor(),
            reds.len(),
            witness.vertex
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let tables: Vec<CrossTable> = (2..=6)
        .flat_map(|m| (2..=6).map(move |n| CrossTable::new(&Board::rectangle(m, n).unwrap())))
        .collect();
    let mut violations = 0;
    let mut checked = 0usize;
    for _ in 0..10_000 {
        let table = &tables[rng.random_range(0..tables.len())];
        let board = table.board();
        let p: f64 = rng.random();
        let ids: Vec<u32> = table
            .colorable_edges()
            .filter(|_| rng.random_bool(p))
            .collect();
        let reds = RedSet::from_ids(table, ids).unwrap();
        let edges = reds.edges(table);
        // Degrees straight from the four squares of each red cross.
        let mut degree: HashMap<Square, u8> = HashMap::new();
        for &e in &edges {
            for s in cross_partner(board, e).unwrap().unwrap().squares() {
                *degree.entry(s).or_default() += 1;
            }
        }
        let degrees: Vec<u8> = board
            .squares()
            .iter()
            .map(|s| degree.get(s).copied().unwrap_or(0))
            .collect();
        for u in board.vertices() {
            let h = (h_degree(board, &edges, u) % 2) as u8;
            let cert = quadrant_parity_certificate(table, &reds, u).unwrap();
            let mut ok = cert.holds() && cert.rhs == h;
            for which in 1..=4u8 {
                let ours = board
                    .squares()
                    .iter()
                    .filter(|s| Board::quadrant_of(u, **s) == which)
                    .map(|s| degree.get(s).copied().unwrap_or(0) as usize)
                    .sum::<usize>()
                    % 2;
                let lib = quadrant_degree_parity(table, &degrees, u, which).unwrap();
                ok &= ours as u8 == h && lib == h;
            }
            violations += usize::from(!ok);
            checked += 1;
        }
    }
    outcome(
        violations == 0,
        format!("10000 random red sets, {checked} vertex checks, {violations} violations"),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_crosspatch"))
        .args(args)
        .output()
        .expect("run crosspatch");
    assert!(out.status.success(), "crosspatch {args:?} failed");
    out.stdout
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    let mut same = true;
    for board in ["8x8", "torus:5x6", "ring"] {
        let a = run_cli(&["enumerate", board]);
        let b = run_cli(&["enumerate", board, "--sequential"]);
        same &= a == b && !a.is_empty();
    }
    let (a, b) = (path("a.ldjson"), path("b.ldjson"));
    for db in [&a, &b] {
        run_cli(&[
            "census",
            "--from",
            "3x3",
            "--to",
            "6x6",
            "--db",
            db,
            "--no-runtime",
        ]);
    }
    let first = std::fs::read(&a).unwrap();
    same &= first == std::fs::read(&b).unwrap();
    run_cli(&["census", "--from", "3x3", "--to", "6x6", "--db", &a]);
    same &= first == std::fs::read(&a).unwrap();
    let r1 = census_record(&Board::rectangle(8, 8).unwrap(), &quiet()).unwrap();
    let r2 = census_record(&Board::rectangle(8, 8).unwrap(), &quiet()).unwrap();
    same &= r1 == r2;
    outcome(
        same,
        "enumerate (parallel vs sequential), fresh census runs, census re-run, 8x8 record",
    )
}

fn quiet() -> CensusOptions {
    CensusOptions {
        record_runtime: false,
        ..CensusOptions::default()
    }
}

fn main() {
    let mut failed = 0;
    let mut report =
        |n: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
            let start = Instant::now();
            let mut o = f();
            let elapsed = start.elapsed();
            if let Some(limit) = limit {
                if elapsed > limit {
                    o.pass = false;
                    o.detail.push_str(&format!("; over the {limit:?} limit"));
                }
            }
            if !o.pass {
                failed += 1;
            }
            println!(
                "criterion {n:>2} {} {name}: {} ({elapsed:.2?})",
                if o.pass { "PASS" } else { "FAIL" },
                o.detail
            );
        };
    report(
        1,
        "cross-pair bijection",
        Some(Duration::from_secs(10)),
        &mut criterion_1,
    );
    report(
        2,
        "oracle equivalence",
        Some(Duration::from_secs(300)),
        &mut criterion_2,
    );
    report(3, "4x4 census", None, &mut criterion_3);
    let reports = rectangle_reports();
    report(4, "H-degrees even, 0 or 2", None, &mut || {
        criterion_4(&reports)
    });
    report(5, "corner permutation walks", None, &mut || {
        criterion_5(&reports)
    });
    report(6, "even G-cycle count", None, &mut || criterion_6(&reports));
    report(
        7,
        "no crosspatch tours on rectangles",
        Some(Duration::from_secs(600)),
        &mut criterion_7,
    );
    report(8, "ring closed tour", None, &mut criterion_8);
    report(9, "torus degree counterexample", None, &mut criterion_9);
    report(10, "quadrant identity", None, &mut criterion_10);
    report(11, "determinism", None, &mut criterion_11);

    let t = CrossTable::new(&Board::rectangle(8, 8).unwrap());
    let e = enumerate_pseudotours(&t, &EnumOptions::default()).unwrap();
    let sym = EnumOptions {
        symmetry: true,
        ..EnumOptions::default()
    };
    let classes = enumerate_pseudotours(&t, &sym).unwrap().sets.len();
    println!(
        "extended: rectangle 8x8 has {} crosspatch pseudotours, {classes} up to symmetry",
        e.raw_count
    );

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria pass");
}
