//! Board symmetries acting on red sets.
//!
//! Rectangles carry their dihedral group (order 8 when square, 4 otherwise);
//! wrapped axes add translations. Subset boards keep only the symmetries
//! that map the removed squares onto themselves. All maps act on
//! doubled coordinates, where they are plain integer affine maps.

use crate::board::{Board, Topology};
use crate::cross::{CrossTable, EdgeId};
use crate::engine::RedSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Transform {
    swap: bool,
    flip_x: bool,
    flip_y: bool,
    shift_x: i32,
    shift_y: i32,
}

impl Transform {
    fn apply(&self, board: &Board, (x, y): (i32, i32)) -> (i32, i32) {
        // Swapping is only used on square boards, so the extents agree.
        let (x, y) = if self.swap { (y, x) } else { (x, y) };
        let (w, h) = (2 * board.width(), 2 * board.height());
        let x = if self.flip_x { w - x } else { x } + 2 * self.shift_x;
        let y = if self.flip_y { h - y } else { y } + 2 * self.shift_y;
        board.reduce_doubled(x, y)
    }
}

/// The symmetry group of a board, as permutations of edge ids.
pub struct SymmetryGroup {
    perms: Vec<Vec<EdgeId>>,
}

impl SymmetryGroup {
    pub fn new(table: &CrossTable) -> Self {
        let board = table.board();
        let top = board.topology();
        let (m, n) = (board.width(), board.height());
        let swaps: &[bool] = if m == n { &[false, true] } else { &[false] };
        let shifts_x = if top.wraps_x() { m } else { 1 };
        let shifts_y = if top.wraps_y() { n } else { 1 };
        let mut perms = Vec::new();
        for &swap in swaps {
            for flip_x in [false, true] {
                for flip_y in [false, true] {
                    for shift_x in 0..shifts_x {
                        for shift_y in 0..shifts_y {
                            let t = Transform {
                                swap,
                                flip_x,
                                flip_y,
                                shift_x,
                                shift_y,
                            };
                            if let Some(p) = edge_permutation(table, &t) {
                                if !perms.contains(&p) {
                                    perms.push(p);
                                }
                            }
                        }
                    }
                }
            }
        }
        SymmetryGroup { perms }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn images<'a>(&'a self, reds: &'a RedSet) -> impl Iterator<Item = RedSet> + 'a {
        self.perms.iter().map(move |p| {
            let mut ids: Vec<EdgeId> = reds.ids().iter().map(|&e| p[e as usize]).collect();
            ids.sort_unstable();
            RedSet::from_sorted_unchecked(ids)
        })
    }

    /// Smallest image of `reds` in canonical order.
    pub fn canonical(&self, reds: &RedSet) -> RedSet {
        self.images(reds).min().unwrap_or_else(|| reds.clone())
    }

    pub fn is_canonical(&self, reds: &RedSet) -> bool {
        self.images(reds).all(|img| &img >= reds)
    }
}

fn edge_permutation(table: &CrossTable, t: &Transform) -> Option<Vec<EdgeId>> {
    let board = table.board();
    if board.topology() == Topology::SquareSubset {
        for s in board.removed() {
            let (x, y) = t.apply(board, s.center());
            let image = crate::board::Square::new((x + 1) / 2, (y + 1) / 2);
            if !board.removed().contains(&image) {
                return None;
            }
        }
    }
    table
        .edges()
        .iter()
        .map(|e| {
            let (x, y) = t.apply(board, e.midpoint());
            let id = table.edge_id(board.edge_at_midpoint(x, y)?)?;
            let e_id = table.edge_id(*e)?;
            (table.is_colorable(id) == table.is_colorable(e_id)).then_some(id)
        })
        .collect()
}
