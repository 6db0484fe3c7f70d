//! Move-level reference enumerator for crosspatch pseudotours.
//!
//! Works directly on knight moves rather than board edges: it backtracks
//! over move subsets looking for 2-regular subgraphs and keeps those in
//! which every move's midpoint partner is also present. Midpoint partners
//! are found by grouping raw move midpoints, without the cross tables the
//! main enumerator uses. Meant for cross-checking on small boards only.

use std::collections::HashMap;

use crate::board::{Board, Square};
use crate::cross::{KnightMove, KNIGHT_OFFSETS};
use crate::error::{Error, Result};

pub const MAX_ORACLE_SQUARES: usize = 36;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pick {
    Open,
    In,
    Out,
}

struct Oracle {
    moves: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
    by_square: Vec<Vec<usize>>,
    pick: Vec<Pick>,
    degree: Vec<u8>,
    trail: Vec<usize>,
}

impl Oracle {
    fn set(&mut self, mv: usize, p: Pick) -> bool {
        match self.pick[mv] {
            Pick::Open => {}
            current => return current == p,
        }
        self.pick[mv] = p;
        self.trail.push(mv);
        if p == Pick::In {
            let (a, b) = self.moves[mv];
            self.degree[a] += 1;
            self.degree[b] += 1;
            if self.degree[a] > 2 || self.degree[b] > 2 {
                return false;
            }
        }
        match (p, self.partner[mv]) {
            (Pick::In, None) => false,
            (_, Some(q)) => self.set(q, p),
            (_, None) => true,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let mv = self.trail.pop().unwrap();
            if self.pick[mv] == Pick::In {
                let (a, b) = self.moves[mv];
                self.degree[a] -= 1;
                self.degree[b] -= 1;
            }
            self.pick[mv] = Pick::Open;
        }
    }

    fn run(&mut self, out: &mut Vec<Vec<usize>>) {
        let Some(s) = (0..self.degree.len()).find(|&s| self.degree[s] < 2) else {
            let chosen = (0..self.moves.len())
                .filter(|&m| self.pick[m] == Pick::In)
                .collect();
            out.push(chosen);
            return;
        };
        let open: Vec<usize> = self.by_square[s]
            .iter()
            .copied()
            .filter(|&m| self.pick[m] == Pick::Open)
            .collect();
        if (self.degree[s] as usize) + open.len() < 2 {
            return;
        }
        let mv = open[0];
        for p in [Pick::In, Pick::Out] {
            let mark = self.trail.len();
            if self.set(mv, p) {
                self.run(out);
            }
            self.undo(mark);
        }
    }
}

/// All 2-regular, cross-closed knight graphs on `board`, each as a sorted
/// move list; the family is sorted.
pub fn oracle_two_factors(board: &Board) -> Result<Vec<Vec<KnightMove>>> {
    let squares = board.squares();
    if squares.len() > MAX_ORACLE_SQUARES {
        return Err(Error::TooLarge {
            squares: squares.len(),
            max: MAX_ORACLE_SQUARES,
        });
    }
    let index: HashMap<Square, usize> = squares.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let top = board.topology();
    let (w, h) = (2 * board.width(), 2 * board.height());

    let mut moves = Vec::new();
    let mut seen = HashMap::new();
    let mut by_midpoint: HashMap<(i32, i32), Vec<usize>> = HashMap::new();
    for (k, &s) in squares.iter().enumerate() {
        for (di, dj) in KNIGHT_OFFSETS {
            let Some(t) = board.square(s.i + di, s.j + dj) else {
                continue;
            };
            let key = (k.min(index[&t]), k.max(index[&t]));
            if seen.contains_key(&key) {
                continue;
            }
            // Midpoint of the two centers, in doubled coordinates.
            let mut x = 2 * s.i - 1 + di;
            let mut y = 2 * s.j - 1 + dj;
            if top.wraps_x() {
                x = x.rem_euclid(w);
            }
            if top.wraps_y() {
                y = y.rem_euclid(h);
            }
            seen.insert(key, moves.len());
            by_midpoint.entry((x, y)).or_default().push(moves.len());
            moves.push(key);
        }
    }
    let mut partner = vec![None; moves.len()];
    for group in by_midpoint.values() {
        assert!(group.len() <= 2, "three knight moves share a midpoint");
        if let [p, q] = group[..] {
            partner[p] = Some(q);
            partner[q] = Some(p);
        }
    }
    let mut by_square = vec![Vec::new(); squares.len()];
    for (m, &(a, b)) in moves.iter().enumerate() {
        by_square[a].push(m);
        by_square[b].push(m);
    }

    let mut oracle = Oracle {
        pick: vec![Pick::Open; moves.len()],
        degree: vec![0; squares.len()],
        moves,
        partner,
        by_square,
        trail: Vec::new(),
    };
    let mut raw = Vec::new();
    oracle.run(&mut raw);

    let mut family: Vec<Vec<KnightMove>> = raw
        .into_iter()
        .map(|chosen| {
            let mut g: Vec<KnightMove> = chosen
                .into_iter()
                .map(|m| {
                    let (a, b) = oracle.moves[m];
                    KnightMove::new(board, squares[a], squares[b]).expect("knight move")
                })
                .collect();
            g.sort();
            g
        })
        .collect();
    family.sort();
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Topology;

    #[test]
    fn small_rectangles() {
        assert!(oracle_two_factors(&Board::rectangle(3, 3).unwrap())
            .unwrap()
            .is_empty());
        let four = oracle_two_factors(&Board::rectangle(4, 4).unwrap()).unwrap();
        assert_eq!(four.len(), 1);
        assert_eq!(four[0].len(), 16);
    }

    #[test]
    fn refuses_large_boards() {
        let big = Board::rectangle(7, 6).unwrap();
        assert!(matches!(
            oracle_two_factors(&big),
            Err(Error::TooLarge { squares: 42, .. })
        ));
        assert!(oracle_two_factors(&Board::new(Topology::Torus, 6, 6).unwrap()).is_ok());
    }
}
