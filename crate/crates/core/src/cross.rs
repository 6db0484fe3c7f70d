//! Knight moves, their midpoints, and the pairing of board edges with
//! crosses.
//!
//! Two knight moves form a cross when their midpoints coincide. Every
//! knight-move midpoint is the midpoint of a unit board edge, and each board
//! edge is the center of at most one cross, so colouring an edge is the same
//! as choosing both moves of its cross.

use std::collections::HashMap;
use std::fmt;

use crate::board::{Board, BoardEdge, EdgeDir, Square};
use crate::error::{Error, Result};

pub type SquareId = u32;
pub type EdgeId = u32;
pub type MoveId = u32;

pub const KNIGHT_OFFSETS: [(i32, i32); 8] = [
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
];

/// An undirected knight move; endpoints are stored in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KnightMove {
    ends: [Square; 2],
}

impl KnightMove {
    /// Builds a move between two on-board squares, checking that they are a
    /// knight's move apart (up to wrap).
    pub fn new(board: &Board, s: Square, t: Square) -> Result<Self> {
        if !board.contains(s) || !board.contains(t) {
            return Err(Error::Domain(format!("move {s}-{t} leaves the board")));
        }
        let (di, dj) = displacement(board, s, t);
        let ok = matches!((di.abs(), dj.abs()), (1, 2) | (2, 1));
        if !ok {
            return Err(Error::Domain(format!("{s}-{t} is not a knight move")));
        }
        Ok(Self::unchecked(s, t))
    }

    fn unchecked(s: Square, t: Square) -> Self {
        if s <= t {
            KnightMove { ends: [s, t] }
        } else {
            KnightMove { ends: [t, s] }
        }
    }

    pub fn ends(&self) -> [Square; 2] {
        self.ends
    }

    pub fn touches(&self, s: Square) -> bool {
        self.ends.contains(&s)
    }

    pub fn other(&self, s: Square) -> Option<Square> {
        match self.ends {
            [a, b] if a == s => Some(b),
            [a, b] if b == s => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for KnightMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.ends[0], self.ends[1])
    }
}

/// Coordinate difference `t - s`, reduced into `-2..=2` on wrapped axes.
pub(crate) fn displacement(board: &Board, s: Square, t: Square) -> (i32, i32) {
    let reduce = |d: i32, len: i32, wraps: bool| {
        if !wraps {
            return d;
        }
        let r = d.rem_euclid(len);
        if r > len / 2 {
            r - len
        } else {
            r
        }
    };
    let top = board.topology();
    (
        reduce(t.i - s.i, board.width(), top.wraps_x()),
        reduce(t.j - s.j, board.height(), top.wraps_y()),
    )
}

/// A board edge with the two knight moves crossing at its midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossPair {
    pub edge: BoardEdge,
    pub moves: [KnightMove; 2],
}

impl CrossPair {
    /// The four distinct endpoint squares.
    pub fn squares(&self) -> [Square; 4] {
        let [a, b] = self.moves[0].ends();
        let [c, d] = self.moves[1].ends();
        [a, b, c, d]
    }
}

/// All on-board knight moves from `s`.
pub fn knight_moves(board: &Board, s: Square) -> Result<Vec<KnightMove>> {
    if !board.contains(s) {
        return Err(Error::Domain(format!("square {s} is not on the board")));
    }
    let mut out: Vec<KnightMove> = KNIGHT_OFFSETS
        .iter()
        .filter_map(|&(di, dj)| board.square(s.i + di, s.j + dj))
        .map(|t| KnightMove::unchecked(s, t))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The cross centered on `e`, or `None` when one of its four squares is off
/// the board (the edge can never be coloured).
pub fn cross_partner(board: &Board, e: BoardEdge) -> Result<Option<CrossPair>> {
    if board.normalize_edge(e) != Some(e) {
        return Err(Error::Domain(format!("edge {e} is not on the board")));
    }
    let (a, b) = (e.anchor.a, e.anchor.b);
    let corners = match e.dir {
        EdgeDir::N => [(a, b), (a + 1, b + 2), (a, b + 2), (a + 1, b)],
        EdgeDir::E => [(a, b), (a + 2, b + 1), (a + 2, b), (a, b + 1)],
    };
    let mut sq = [Square::new(0, 0); 4];
    for (slot, (i, j)) in sq.iter_mut().zip(corners) {
        match board.square(i, j) {
            Some(s) => *slot = s,
            None => return Ok(None),
        }
    }
    Ok(Some(CrossPair {
        edge: e,
        moves: [
            KnightMove::unchecked(sq[0], sq[1]),
            KnightMove::unchecked(sq[2], sq[3]),
        ],
    }))
}

/// The board edge whose midpoint is the midpoint of `mv`.
pub fn move_to_edge(board: &Board, mv: KnightMove) -> BoardEdge {
    let [s, t] = mv.ends();
    let (di, dj) = displacement(board, s, t);
    let (cx, cy) = s.center();
    // Centers differ by (2di, 2dj), so the midpoint is the start center
    // shifted by (di, dj).
    board
        .edge_at_midpoint(cx + di, cy + dj)
        .expect("a knight-move midpoint is always a board-edge midpoint")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableMove {
    pub ends: [SquareId; 2],
    pub edge: EdgeId,
}

/// Integer-indexed tables for one board: squares, edges, moves and crosses.
#[derive(Clone, Debug)]
pub struct CrossTable {
    board: Board,
    squares: Vec<Square>,
    square_grid: Vec<Option<SquareId>>,
    edges: Vec<BoardEdge>,
    edge_lookup: HashMap<BoardEdge, EdgeId>,
    moves: Vec<TableMove>,
    pairs: Vec<Option<[MoveId; 2]>>,
    square_edges: Vec<Vec<EdgeId>>,
}

impl CrossTable {
    pub fn new(board: &Board) -> Self {
        let squares = board.squares();
        let (m, n) = (board.width(), board.height());
        let mut square_grid = vec![None; (m * n) as usize];
        for (id, s) in squares.iter().enumerate() {
            square_grid[((s.i - 1) * n + (s.j - 1)) as usize] = Some(id as SquareId);
        }
        let edges = board.edges();
        let edge_lookup: HashMap<_, _> = edges
            .iter()
            .enumerate()
            .map(|(id, e)| (*e, id as EdgeId))
            .collect();

        let mut table = CrossTable {
            board: board.clone(),
            squares,
            square_grid,
            edges,
            edge_lookup,
            moves: Vec::new(),
            pairs: Vec::new(),
            square_edges: Vec::new(),
        };

        let mut move_lookup = HashMap::new();
        for s in table.squares.clone() {
            for mv in knight_moves(board, s).expect("square exists") {
                if move_lookup.contains_key(&mv) {
                    continue;
                }
                let edge = table.edge_lookup[&move_to_edge(board, mv)];
                let [a, b] = mv.ends();
                let id = table.moves.len() as MoveId;
                table.moves.push(TableMove {
                    ends: [table.square_id(a).unwrap(), table.square_id(b).unwrap()],
                    edge,
                });
                move_lookup.insert(mv, id);
            }
        }
        table.pairs = table
            .edges
            .iter()
            .map(|&e| {
                cross_partner(board, e)
                    .expect("edge exists")
                    .map(|p| p.moves.map(|mv| move_lookup[&mv]))
            })
            .collect();
        let mut square_edges = vec![Vec::new(); table.squares.len()];
        for (e, pair) in table.pairs.iter().enumerate() {
            if let Some(pair) = pair {
                for mv in pair {
                    for s in table.moves[*mv as usize].ends {
                        square_edges[s as usize].push(e as EdgeId);
                    }
                }
            }
        }
        for list in &mut square_edges {
            list.sort_unstable();
        }
        table.square_edges = square_edges;
        table
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn square(&self, id: SquareId) -> Square {
        self.squares[id as usize]
    }

    pub fn square_id(&self, s: Square) -> Option<SquareId> {
        let s = self.board.square(s.i, s.j)?;
        let n = self.board.height();
        self.square_grid[((s.i - 1) * n + (s.j - 1)) as usize]
    }

    pub fn edges(&self) -> &[BoardEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> BoardEdge {
        self.edges[id as usize]
    }

    pub fn edge_id(&self, e: BoardEdge) -> Option<EdgeId> {
        let e = self.board.normalize_edge(e)?;
        self.edge_lookup.get(&e).copied()
    }

    pub fn moves(&self) -> &[TableMove] {
        &self.moves
    }

    pub fn knight_move(&self, id: MoveId) -> KnightMove {
        let [a, b] = self.moves[id as usize].ends;
        KnightMove::unchecked(self.square(a), self.square(b))
    }

    /// Moves of the cross centered on edge `e`, if it is colourable.
    pub fn pair(&self, e: EdgeId) -> Option<[MoveId; 2]> {
        self.pairs[e as usize]
    }

    pub fn is_colorable(&self, e: EdgeId) -> bool {
        self.pairs[e as usize].is_some()
    }

    pub fn colorable_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as EdgeId).filter(|&e| self.is_colorable(e))
    }

    /// The four squares touched by the cross on `e`.
    pub fn cross_squares(&self, e: EdgeId) -> Option<[SquareId; 4]> {
        self.pair(e).map(|[p, q]| {
            let [a, b] = self.moves[p as usize].ends;
            let [c, d] = self.moves[q as usize].ends;
            [a, b, c, d]
        })
    }

    /// Colourable edges among `surround8(s)`, ascending.
    pub fn square_edges(&self, s: SquareId) -> &[EdgeId] {
        &self.square_edges[s as usize]
    }
}
