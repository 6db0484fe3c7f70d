//! Exhaustive crosspatch tour searches and the wrapped-board counterexample
//! sweep.
//!
//! Every search here is complete: it runs the exact-degree enumerator over
//! the whole board, so a `None` outcome proves that no such object exists on
//! that board. Running out of node budget is reported separately as
//! `Inconclusive`.

use serde::Serialize;

use crate::board::{Board, BoardVertex, Square, Topology, MIN_WRAPPED_LEN};
use crate::cross::{CrossTable, SquareId};
use crate::engine::{
    cycle_decomposition, enumerate_exact, enumerate_pseudotours, realize_graph, CrosspatchGraph,
    EnumOptions, Parallelism, RedSet,
};
use crate::error::{Error, Result};
use crate::hgraph::{build_h, quadrant_degree_parity};
pub use crate::json::TourKind;
use crate::json::{squares_json, PseudotourJson, WitnessJson};
use crate::par;

/// Default node budget for a single constraint search.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TourQuery {
    pub board: Board,
    pub kind: TourKind,
    /// Node limit for each constraint search.
    pub budget: u64,
    pub parallelism: Parallelism,
}

impl TourQuery {
    pub fn new(board: Board, kind: TourKind) -> Self {
        TourQuery {
            board,
            kind,
            budget: DEFAULT_BUDGET,
            parallelism: Parallelism::default(),
        }
    }

    fn options(&self) -> EnumOptions {
        EnumOptions {
            budget: Some(self.budget),
            parallelism: self.parallelism,
            ..EnumOptions::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TourWitness {
    pub kind: TourKind,
    /// Visiting order; a closed tour returns from the last square to the
    /// first.
    pub sequence: Vec<Square>,
    pub reds: RedSet,
    pub cycle_count: usize,
    pub endpoints: Option<(Square, Square)>,
}

impl TourWitness {
    pub fn to_json(&self, table: &CrossTable) -> WitnessJson {
        WitnessJson {
            pseudotour: PseudotourJson::new(table, &self.reds),
            kind: self.kind,
            endpoints: self
                .endpoints
                .map(|(p, q)| vec![[p.i, p.j], [q.i, q.j]])
                .unwrap_or_default(),
            sequence: squares_json(&self.sequence),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TourOutcome {
    Found(TourWitness),
    None,
    Inconclusive { nodes: u64 },
}

impl TourOutcome {
    pub fn witness(&self) -> Option<&TourWitness> {
        match self {
            TourOutcome::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Searches for a crosspatch closed tour: a crosspatch pseudotour with a
/// single cycle.
pub fn search_closed_tour(q: &TourQuery) -> Result<TourOutcome> {
    if q.kind != TourKind::Closed {
        return Err(Error::Domain(
            "search_closed_tour needs kind = closed".into(),
        ));
    }
    let table = CrossTable::new(&q.board);
    let sets = match enumerate_pseudotours(&table, &q.options()) {
        Ok(e) => e.sets,
        Err(Error::BudgetExhausted { progress, .. }) => {
            return Ok(TourOutcome::Inconclusive {
                nodes: progress.nodes,
            })
        }
        Err(e) => return Err(e),
    };
    for reds in sets {
        let g = realize_graph(&table, &reds);
        let cycles = cycle_decomposition(&table, &g)?;
        if cycles.count() == 1 {
            let sequence = cycles.squares(&table).remove(0);
            return Ok(TourOutcome::Found(TourWitness {
                kind: TourKind::Closed,
                sequence,
                reds,
                cycle_count: 1,
                endpoints: None,
            }));
        }
    }
    Ok(TourOutcome::None)
}

/// Per-run statistics of the open-tour search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpenSearchStats {
    pub endpoint_pairs: usize,
    /// Pairs ruled out by a quadrant parity obstruction before searching.
    pub obstructed_pairs: usize,
    /// Red sets with the open-tour degree profile, connected or not.
    pub candidates: usize,
    /// Candidates that escaped the quadrant obstruction; must be zero on
    /// rectangles.
    pub unobstructed_candidates: usize,
    pub nodes: u64,
}

/// Searches for a crosspatch open tour. Every pair of endpoint squares is
/// tried with target degree 1 at the endpoints and 2 elsewhere; the
/// resulting red sets are then filtered for connectivity.
pub fn search_open_tour(q: &TourQuery) -> Result<TourOutcome> {
    search_open_tour_with_stats(q).map(|(o, _)| o)
}

pub fn search_open_tour_with_stats(q: &TourQuery) -> Result<(TourOutcome, OpenSearchStats)> {
    if q.kind != TourKind::Open {
        return Err(Error::Domain("search_open_tour needs kind = open".into()));
    }
    let table = CrossTable::new(&q.board);
    let n = table.squares().len() as SquareId;
    let pairs: Vec<(SquareId, SquareId)> = (0..n)
        .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
        .collect();
    let parallel = q.parallelism == Parallelism::Parallel;
    let inner = EnumOptions {
        parallelism: Parallelism::Sequential,
        ..q.options()
    };
    let results = par::map(&pairs, parallel, |&(p, r)| {
        let mut targets = vec![2u8; n as usize];
        targets[p as usize] = 1;
        targets[r as usize] = 1;
        let obstruction = if table.board().is_rectangle() {
            quadrant_obstruction(&table, &targets)
        } else {
            None
        };
        (obstruction, enumerate_exact(&table, &targets, &inner))
    });

    let mut stats = OpenSearchStats {
        endpoint_pairs: pairs.len(),
        ..Default::default()
    };
    let mut inconclusive = false;
    let mut found = None;
    for (&(p, r), (obstruction, result)) in pairs.iter().zip(results) {
        stats.obstructed_pairs += usize::from(obstruction.is_some());
        let sets = match result {
            Ok(e) => {
                stats.nodes += e.nodes;
                e.sets
            }
            Err(Error::BudgetExhausted { progress, .. }) => {
                stats.nodes += progress.nodes;
                inconclusive = true;
                continue;
            }
            Err(e) => return Err(e),
        };
        stats.candidates += sets.len();
        if obstruction.is_none() {
            stats.unobstructed_candidates += sets.len();
        }
        if found.is_some() {
            continue;
        }
        for reds in sets {
            let g = realize_graph(&table, &reds);
            if let Some(path) = hamiltonian_path(&table, &g, p) {
                let (a, b) = (table.square(p), table.square(r));
                found = Some(TourWitness {
                    kind: TourKind::Open,
                    sequence: path,
                    reds,
                    cycle_count: 0,
                    endpoints: Some((a, b)),
                });
                break;
            }
        }
    }
    let outcome = match (found, inconclusive) {
        (Some(w), _) => TourOutcome::Found(w),
        (None, true) => TourOutcome::Inconclusive { nodes: stats.nodes },
        (None, false) => TourOutcome::None,
    };
    Ok((outcome, stats))
}

/// Follows the path from `start` (a degree-1 square); returns it when it
/// visits every square.
fn hamiltonian_path(
    table: &CrossTable,
    g: &CrosspatchGraph,
    start: SquareId,
) -> Option<Vec<Square>> {
    let mut path = vec![start];
    let mut prev_move = None;
    let mut cur = start;
    loop {
        let next = g
            .incident(cur)
            .iter()
            .copied()
            .find(|&mv| Some(mv) != prev_move)?;
        let [a, b] = table.moves()[next as usize].ends;
        cur = if a == cur { b } else { a };
        prev_move = Some(next);
        path.push(cur);
        if g.degree(cur) == 1 {
            break;
        }
        if path.len() > table.squares().len() {
            return None;
        }
    }
    (path.len() == table.squares().len())
        .then(|| path.into_iter().map(|s| table.square(s)).collect())
}

/// A board vertex whose quadrants have degree sums of different parity.
///
/// Summing degrees over any quadrant of `vertex` gives the parity of the
/// vertex's H-degree, so a degree profile with such a vertex cannot be
/// realized by any crosspatch graph on a rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrantObstruction {
    pub vertex: BoardVertex,
    pub odd_quadrant: u8,
    pub even_quadrant: u8,
}

/// Looks for a vertex whose quadrant degree sums disagree in parity.
pub fn quadrant_obstruction(table: &CrossTable, degrees: &[u8]) -> Option<QuadrantObstruction> {
    if !table.board().is_rectangle() {
        return None;
    }
    for u in table.board().vertices() {
        let parities: Vec<u8> = (1..=4)
            .map(|k| quadrant_degree_parity(table, degrees, u, k).expect("rectangle"))
            .collect();
        let odd = parities.iter().position(|&p| p == 1);
        let even = parities.iter().position(|&p| p == 0);
        if let (Some(o), Some(e)) = (odd, even) {
            return Some(QuadrantObstruction {
                vertex: u,
                odd_quadrant: o as u8 + 1,
                even_quadrant: e as u8 + 1,
            });
        }
    }
    None
}

/// Independent re-check of a tour witness: cross closure, degree profile,
/// and that the sequence is a Hamiltonian cycle or path of knight moves
/// present in the graph.
pub fn verify_witness(table: &CrossTable, w: &TourWitness) -> Result<()> {
    let fail = |msg: String| Err(Error::Validation(msg));
    let g = realize_graph(table, &w.reds);
    // Rebuilding from explicit moves re-checks cross closure.
    let rebuilt = CrosspatchGraph::from_knight_moves(table, &g.knight_moves(table))?;
    if rebuilt.red_set(table) != w.reds {
        return fail("red set does not round-trip through its moves".into());
    }
    let squares = table.squares();
    let mut order = w.sequence.clone();
    order.sort();
    if order != squares {
        return fail("sequence does not visit every square exactly once".into());
    }
    let steps = match w.kind {
        TourKind::Closed => w.sequence.len(),
        TourKind::Open => w.sequence.len() - 1,
    };
    let moves = g.knight_moves(table);
    for k in 0..steps {
        let a = w.sequence[k];
        let b = w.sequence[(k + 1) % w.sequence.len()];
        let mv = crate::cross::KnightMove::new(table.board(), a, b)?;
        if moves.binary_search(&mv).is_err() {
            return fail(format!("step {a}-{b} is not a move of the graph"));
        }
    }
    if moves.len() != steps {
        return fail(format!(
            "graph has {} moves but the tour uses {steps}",
            moves.len()
        ));
    }
    match (w.kind, w.endpoints) {
        (TourKind::Closed, None) => {
            if !g.is_pseudotour() {
                return fail("closed tour graph is not 2-regular".into());
            }
        }
        (TourKind::Open, Some((p, q))) => {
            let ends = [w.sequence[0], *w.sequence.last().unwrap()];
            if !(ends == [p, q] || ends == [q, p]) {
                return fail("endpoints do not match the sequence".into());
            }
            for (id, s) in squares.iter().enumerate() {
                let want = if *s == p || *s == q { 1 } else { 2 };
                if g.degree(id as SquareId) != want {
                    return fail(format!("square {s} has the wrong degree"));
                }
            }
        }
        _ => return fail("endpoints do not match the tour kind".into()),
    }
    Ok(())
}

/// A pseudotour on a wrapped board whose H has an odd-degree vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub board: Board,
    pub reds: RedSet,
    pub vertex: BoardVertex,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterexampleOutcome {
    Found {
        witness: Counterexample,
        boards_searched: usize,
    },
    /// No witness on any board with both sides at most `max_size`.
    None {
        max_size: i32,
        boards_searched: usize,
    },
    /// The budget ran out on `board` before a witness was found.
    Inconclusive { board: Board },
}

/// Boards of the given wrapped topology with sides at most `max_size`,
/// ordered by area, then by `(m, n)`.
pub fn sweep_boards(topology: Topology, max_size: i32) -> Vec<Board> {
    let mut out: Vec<Board> = (1..=max_size)
        .flat_map(|m| (1..=max_size).map(move |n| (m, n)))
        .filter_map(|(m, n)| Board::new(topology, m, n).ok())
        .collect();
    out.sort_by_key(|b| (b.width() * b.height(), b.width(), b.height()));
    out
}

/// Finds the smallest wrapped board carrying a crosspatch pseudotour whose
/// H has a vertex of odd degree, and the first such pseudotour in canonical
/// order.
pub fn find_lemma1_counterexample(
    topology: Topology,
    max_size: i32,
    options: &EnumOptions,
) -> Result<CounterexampleOutcome> {
    if !(topology.wraps_x() || topology.wraps_y()) {
        return Err(Error::Domain(format!(
            "counterexamples are only sought on wrapped boards, not {topology}"
        )));
    }
    if max_size < MIN_WRAPPED_LEN {
        return Err(Error::Domain(format!(
            "max size must be at least {MIN_WRAPPED_LEN}, got {max_size}"
        )));
    }
    let boards = sweep_boards(topology, max_size);
    for (k, board) in boards.iter().enumerate() {
        let table = CrossTable::new(board);
        let sets = match enumerate_pseudotours(&table, options) {
            Ok(e) => e.sets,
            Err(Error::BudgetExhausted { .. }) => {
                return Ok(CounterexampleOutcome::Inconclusive {
                    board: board.clone(),
                })
            }
            Err(e) => return Err(e),
        };
        for reds in sets {
            let h = build_h(&table, &reds);
            let odd = (0..h.vertices().len()).find(|&v| h.degree(v) % 2 == 1);
            if let Some(v) = odd {
                return Ok(CounterexampleOutcome::Found {
                    witness: Counterexample {
                        board: board.clone(),
                        vertex: h.vertices()[v],
                        degree: h.degree(v),
                        reds,
                    },
                    boards_searched: k + 1,
                });
            }
        }
    }
    Ok(CounterexampleOutcome::None {
        max_size,
        boards_searched: boards.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_has_a_closed_tour() {
        let q = TourQuery::new(Board::ring3(), TourKind::Closed);
        let TourOutcome::Found(w) = search_closed_tour(&q).unwrap() else {
            panic!("the ring carries a closed crosspatch tour");
        };
        assert_eq!(w.sequence.len(), 8);
        assert_eq!(w.reds.len(), 4);
        let table = CrossTable::new(&q.board);
        verify_witness(&table, &w).unwrap();
    }

    #[test]
    fn ring_has_no_open_tour() {
        let q = TourQuery::new(Board::ring3(), TourKind::Open);
        assert_eq!(search_open_tour(&q).unwrap(), TourOutcome::None);
    }

    #[test]
    fn small_rectangles_have_no_tours() {
        for (m, n) in [(4, 4), (2, 3), (4, 3)] {
            let b = Board::rectangle(m, n).unwrap();
            let closed = TourQuery::new(b.clone(), TourKind::Closed);
            assert_eq!(search_closed_tour(&closed).unwrap(), TourOutcome::None);
            let open = TourQuery::new(b, TourKind::Open);
            assert_eq!(search_open_tour(&open).unwrap(), TourOutcome::None);
        }
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let q = TourQuery::new(Board::ring3(), TourKind::Open);
        assert!(search_closed_tour(&q).is_err());
        let q = TourQuery::new(Board::ring3(), TourKind::Closed);
        assert!(search_open_tour(&q).is_err());
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let mut q = TourQuery::new(Board::rectangle(8, 8).unwrap(), TourKind::Closed);
        q.budget = 3;
        assert!(matches!(
            search_closed_tour(&q).unwrap(),
            TourOutcome::Inconclusive { .. }
        ));
    }

    #[test]
    fn every_endpoint_pair_is_obstructed_on_rectangles() {
        let t = CrossTable::new(&Board::rectangle(5, 4).unwrap());
        let n = t.squares().len();
        for p in 0..n {
            for q in p + 1..n {
                let mut d = vec![2u8; n];
                d[p] = 1;
                d[q] = 1;
                assert!(quadrant_obstruction(&t, &d).is_some());
            }
        }
        assert!(quadrant_obstruction(&t, &vec![2u8; n]).is_none());
    }

    #[test]
    fn rectangle_is_not_a_counterexample_topology() {
        assert!(
            find_lemma1_counterexample(Topology::Rectangle, 8, &EnumOptions::default()).is_err()
        );
        assert!(find_lemma1_counterexample(Topology::Torus, 4, &EnumOptions::default()).is_err());
    }

    #[test]
    fn sweep_order() {
        let boards: Vec<String> = sweep_boards(Topology::Torus, 6)
            .iter()
            .map(Board::descriptor)
            .collect();
        assert_eq!(boards, ["torus:5x5", "torus:5x6", "torus:6x5", "torus:6x6"]);
    }
}
