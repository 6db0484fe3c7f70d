//! The cross graph H: board vertices joined by red board edges.
//!
//! On rectangles, H of a crosspatch pseudotour is a disjoint union of simple
//! cycles and each of them carries a closed braid of crosses. This module
//! builds H, checks its degrees, orients its cycles, follows the four
//! squares around a vertex along a cycle, and relates the cycles of H to
//! the cycles of the knight graph G.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::board::{BoardVertex, Dir4, EdgeDir, Square};
use crate::corner::{step_permutation, Corner, CornerPermutation, Parity};
use crate::cross::{displacement, CrossTable, EdgeId, MoveId, SquareId};
use crate::engine::{cycle_decomposition, CrosspatchGraph, RedSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossGraphH {
    vertices: Vec<BoardVertex>,
    incident: Vec<Vec<EdgeId>>,
}

impl CrossGraphH {
    pub fn vertices(&self) -> &[BoardVertex] {
        &self.vertices
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn incident(&self, v: usize) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn degree_of(&self, table: &CrossTable, v: BoardVertex) -> usize {
        self.degree(table.board().vertex_index(v))
    }

    /// Vertex count per degree.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for inc in &self.incident {
            *h.entry(inc.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn edge_count(&self) -> usize {
        self.incident.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn build_h(table: &CrossTable, reds: &RedSet) -> CrossGraphH {
    let board = table.board();
    let vertices = board.vertices();
    let mut incident = vec![Vec::new(); vertices.len()];
    for &e in reds.ids() {
        let (u, w) = board.edge_endpoints(table.edge(e));
        incident[board.vertex_index(u)].push(e);
        incident[board.vertex_index(w)].push(e);
    }
    for list in &mut incident {
        list.sort_unstable();
    }
    CrossGraphH { vertices, incident }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub histogram: BTreeMap<usize, usize>,
    /// Every degree is even.
    pub even: bool,
    /// Every degree is 0 or 2.
    pub zero_or_two: bool,
    /// First vertex violating the stronger check, with its degree.
    pub witness: Option<(BoardVertex, usize)>,
}

impl DegreeReport {
    pub fn pass(&self) -> bool {
        self.even && self.zero_or_two
    }
}

pub fn verify_degree_lemmas(h: &CrossGraphH) -> DegreeReport {
    let mut witness = None;
    let mut even = true;
    let mut zero_or_two = true;
    for (k, inc) in h.incident.iter().enumerate() {
        let d = inc.len();
        even &= d % 2 == 0;
        if d != 0 && d != 2 {
            zero_or_two = false;
            // Prefer an odd-degree witness.
            let better = match witness {
                None => true,
                Some((_, wd)) => wd % 2 == 0 && d % 2 == 1,
            };
            if better {
                witness = Some((h.vertices[k], d));
            }
        }
    }
    DegreeReport {
        histogram: h.histogram(),
        even,
        zero_or_two,
        witness,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HStep {
    pub edge: EdgeId,
    pub dir: Dir4,
}

/// A cycle of H with a fixed direction of travel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrientedHCycle {
    /// Vertices in travel order; the start is not repeated at the end.
    pub vertices: Vec<BoardVertex>,
    /// `steps[k]` leads from `vertices[k]` to `vertices[k + 1]` (cyclically).
    pub steps: Vec<HStep>,
    /// Net number of times the cycle wraps around each axis.
    pub winding: (i32, i32),
}

impl OrientedHCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn base(&self) -> BoardVertex {
        self.vertices[0]
    }

    /// Step counts in N, E, S, W order.
    pub fn direction_counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for s in &self.steps {
            c[s.dir as usize] += 1;
        }
        c
    }
}

/// Splits H into oriented cycles. Each starts at its smallest vertex and
/// leaves along the incident edge with the smaller id.
pub fn decompose_and_orient(table: &CrossTable, h: &CrossGraphH) -> Result<Vec<OrientedHCycle>> {
    let board = table.board();
    if let Some((k, inc)) = h
        .incident
        .iter()
        .enumerate()
        .find(|(_, inc)| !inc.is_empty() && inc.len() != 2)
    {
        return Err(Error::Structure {
            vertex: h.vertices[k],
            degree: inc.len(),
        });
    }
    let mut seen = vec![false; h.vertices.len()];
    let mut out = Vec::new();
    for start in 0..h.vertices.len() {
        if seen[start] || h.incident[start].is_empty() {
            continue;
        }
        let mut vertices = Vec::new();
        let mut steps = Vec::new();
        let (mut dx, mut dy) = (0, 0);
        let mut cur = start;
        let mut via = h.incident[start][0];
        loop {
            seen[cur] = true;
            let v = h.vertices[cur];
            vertices.push(v);
            let e = table.edge(via);
            let (p, q) = board.edge_endpoints(e);
            let (dir, next) = match (p == v, e.dir) {
                (true, EdgeDir::N) => (Dir4::N, q),
                (true, EdgeDir::E) => (Dir4::E, q),
                (false, EdgeDir::N) => (Dir4::S, p),
                (false, EdgeDir::E) => (Dir4::W, p),
            };
            steps.push(HStep { edge: via, dir });
            let (sx, sy) = dir.delta();
            dx += sx;
            dy += sy;
            cur = board.vertex_index(next);
            if cur == start {
                break;
            }
            let inc = &h.incident[cur];
            via = if inc[0] == via { inc[1] } else { inc[0] };
        }
        let winding = (dx / board.width(), dy / board.height());
        let cycle = OrientedHCycle {
            vertices,
            steps,
            winding,
        };
        if cycle.winding == (0, 0) {
            let [n, e, s, w] = cycle.direction_counts();
            if n != s || e != w || !cycle.len().is_multiple_of(2) {
                return Err(Error::Inconsistent(format!(
                    "contractible H-cycle at {} has unbalanced steps",
                    cycle.base()
                )));
            }
        }
        out.push(cycle);
    }
    Ok(out)
}

/// A knight move of G with the direction induced by its red edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectedMove {
    pub id: MoveId,
    pub from: SquareId,
    pub to: SquareId,
}

/// Orients the two moves of the cross on `edge` so that their projections
/// onto the edge point along `dir`.
pub fn orient_cross(table: &CrossTable, edge: EdgeId, dir: Dir4) -> Result<[DirectedMove; 2]> {
    let pair = table
        .pair(edge)
        .ok_or_else(|| Error::Domain(format!("edge {} carries no cross", table.edge(edge))))?;
    let (ux, uy) = dir.delta();
    let orient = |id: MoveId| {
        let [a, b] = table.moves()[id as usize].ends;
        let (di, dj) = displacement(table.board(), table.square(a), table.square(b));
        let dot = di * ux + dj * uy;
        debug_assert!(dot != 0, "a knight move is never perpendicular to its edge");
        if dot > 0 {
            DirectedMove { id, from: a, to: b }
        } else {
            DirectedMove { id, from: b, to: a }
        }
    };
    Ok(pair.map(orient))
}

/// The squares around `v` by role, found geometrically.
fn corner_squares(table: &CrossTable, v: BoardVertex) -> Result<[SquareId; 4]> {
    let board = table.board();
    let mut out = [None; 4];
    for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let Some(s) = board.square(v.a + di, v.b + dj) else {
            continue;
        };
        let corners = board.corner_vertices(s)?.as_array();
        for (role, c) in corners.iter().enumerate() {
            if *c == v {
                out[role] = table.square_id(s);
            }
        }
    }
    let mut ids = [0; 4];
    for (role, slot) in out.iter().enumerate() {
        ids[role] = slot.ok_or_else(|| {
            Error::Domain(format!(
                "vertex {v} lacks its {} square",
                Corner::from_index(role).letter()
            ))
        })?;
    }
    Ok(ids)
}

/// The role `square` plays at `v`, if `v` is one of its corners.
fn role_at(table: &CrossTable, square: SquareId, v: BoardVertex) -> Option<Corner> {
    let corners = table
        .board()
        .corner_vertices(table.square(square))
        .ok()?
        .as_array();
    corners.iter().position(|&c| c == v).map(Corner::from_index)
}

/// The corner permutation along an oriented H-cycle, computed both by
/// composing step permutations and by tracing the four square-paths in G.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaWalk {
    pub sigma: CornerPermutation,
    /// Permutation after each prefix of `k` steps, `k = 0..=len`.
    pub prefixes: Vec<CornerPermutation>,
    /// Square-paths from the A, B, C, D squares of the base vertex.
    pub paths: [Vec<Square>; 4],
    pub length: usize,
    /// Parity of the full permutation.
    pub parity: Parity,
}

impl SigmaWalk {
    /// For a closed cycle the walk returns every square to its start role
    /// up to an even permutation.
    pub fn full_cycle_even(&self) -> bool {
        self.parity == Parity::Even
    }
}

/// Follows the cycle from its base vertex. Errors when the traced paths
/// disagree with the composed step permutations, share a move, miss one of
/// the cycle's moves, or move against the edge orientation.
pub fn walk_sigma(
    table: &CrossTable,
    cycle: &OrientedHCycle,
    g: &CrosspatchGraph,
) -> Result<SigmaWalk> {
    let len = cycle.len();
    let mut prefixes = Vec::with_capacity(len + 1);
    prefixes.push(CornerPermutation::IDENTITY);
    for step in &cycle.steps {
        let last = *prefixes.last().unwrap();
        prefixes.push(last.then(&step_permutation(step.dir)));
    }

    let base = cycle.base();
    let mut cur = corner_squares(table, base)?;
    let mut paths: [Vec<SquareId>; 4] = cur.map(|s| vec![s]);
    let mut used: Vec<MoveId> = Vec::with_capacity(2 * len);
    for (k, step) in cycle.steps.iter().enumerate() {
        let directed = orient_cross(table, step.edge, step.dir)?;
        for role in 0..4 {
            let here = cur[role];
            let mut along = g
                .incident(here)
                .iter()
                .filter(|&&mv| table.moves()[mv as usize].edge == step.edge);
            let Some(&mv) = along.next() else {
                continue;
            };
            if along.next().is_some() {
                return Err(Error::Inconsistent(format!(
                    "square {} has two moves on edge {}",
                    table.square(here),
                    table.edge(step.edge)
                )));
            }
            let dm = directed.iter().find(|d| d.id == mv).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "move {} is not in the cross",
                    table.knight_move(mv)
                ))
            })?;
            if dm.from != here {
                return Err(Error::Inconsistent(format!(
                    "path at {} would travel move {} backwards",
                    table.square(here),
                    table.knight_move(mv)
                )));
            }
            used.push(mv);
            cur[role] = dm.to;
            paths[role].push(dm.to);
        }
        let next = cycle.vertices[(k + 1) % len];
        let expected = prefixes[k + 1];
        for role in Corner::ALL {
            let got = role_at(table, cur[role.index()], next);
            if got != Some(expected.apply(role)) {
                return Err(Error::Inconsistent(format!(
                    "after {} steps the {} path sits at {} with role {:?} at {next}, \
                     but the composed permutation {expected} predicts {:?}",
                    k + 1,
                    role.letter(),
                    table.square(cur[role.index()]),
                    got,
                    expected.apply(role)
                )));
            }
        }
        if expected.parity() != Parity::of(k + 1) {
            return Err(Error::Inconsistent(format!(
                "prefix of length {} has parity {:?}",
                k + 1,
                expected.parity()
            )));
        }
    }

    let mut sorted = used.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != used.len() {
        return Err(Error::Inconsistent(
            "the four traced paths share a move".into(),
        ));
    }
    let mut expected_moves: Vec<MoveId> = cycle
        .steps
        .iter()
        .flat_map(|s| table.pair(s.edge).expect("red edge"))
        .collect();
    expected_moves.sort_unstable();
    if sorted != expected_moves {
        return Err(Error::Inconsistent(
            "the traced paths do not cover exactly the cycle's moves".into(),
        ));
    }
    for (role, path) in paths.iter().enumerate() {
        let interior = if path.len() > 1 && path[0] == path[path.len() - 1] {
            &path[..path.len() - 1]
        } else {
            &path[..]
        };
        let mut seen = interior.to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != interior.len() {
            return Err(Error::Inconsistent(format!(
                "the {} path is not simple",
                Corner::from_index(role).letter()
            )));
        }
    }

    let sigma = prefixes[len];
    Ok(SigmaWalk {
        sigma,
        parity: sigma.parity(),
        prefixes,
        paths: paths.map(|p| p.into_iter().map(|s| table.square(s)).collect()),
        length: len,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidEntry {
    pub base: BoardVertex,
    pub length: usize,
    pub sigma: CornerPermutation,
    pub sigma_cycles: usize,
    pub g_cycles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BraidReport {
    pub entries: Vec<BraidEntry>,
    pub g_cycles: usize,
    /// Every G-cycle lies on the crosses of a single H-cycle.
    pub total: bool,
    /// Per H-cycle, the G-cycle count equals the cycle count of sigma.
    pub counts_match: bool,
    /// Every per-H-cycle count is even.
    pub each_even: bool,
    pub total_even: bool,
}

impl BraidReport {
    pub fn pass(&self) -> bool {
        self.total && self.counts_match && self.each_even && self.total_even
    }
}

/// Relates the cycles of G to the cycles of H.
pub fn braid_correspondence(
    table: &CrossTable,
    g: &CrosspatchGraph,
    h_cycles: &[OrientedHCycle],
    walks: &[SigmaWalk],
) -> Result<BraidReport> {
    let decomposition = cycle_decomposition(table, g)?;
    let mut owner = vec![usize::MAX; table.edges().len()];
    for (k, c) in h_cycles.iter().enumerate() {
        for s in &c.steps {
            owner[s.edge as usize] = k;
        }
    }
    let mut counts = vec![0usize; h_cycles.len()];
    let mut total = true;
    for cycle in &decomposition.cycles {
        let mut owners: Vec<usize> = cycle
            .iter()
            .zip(cycle.iter().cycle().skip(1))
            .map(|(&a, &b)| {
                let mv = g
                    .incident(a)
                    .iter()
                    .copied()
                    .find(|&mv| {
                        let ends = table.moves()[mv as usize].ends;
                        ends == [a, b] || ends == [b, a]
                    })
                    .expect("consecutive cycle squares share a move");
                owner[table.moves()[mv as usize].edge as usize]
            })
            .collect();
        owners.sort_unstable();
        owners.dedup();
        match owners[..] {
            [k] if k != usize::MAX => counts[k] += 1,
            _ => total = false,
        }
    }
    let entries: Vec<BraidEntry> = h_cycles
        .iter()
        .zip(walks)
        .zip(&counts)
        .map(|((c, w), &n)| BraidEntry {
            base: c.base(),
            length: c.len(),
            sigma: w.sigma,
            sigma_cycles: w.sigma.cycle_count(),
            g_cycles: n,
        })
        .collect();
    let g_cycles = decomposition.count();
    Ok(BraidReport {
        counts_match: entries.iter().all(|e| e.g_cycles == e.sigma_cycles),
        each_even: entries.iter().all(|e| e.g_cycles % 2 == 0),
        total_even: g_cycles % 2 == 0,
        total,
        g_cycles,
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadrantCertificate {
    /// Parity of the total G-degree over the lower-left quadrant of `u`.
    pub lhs: u8,
    /// Parity of the H-degree of `u`.
    pub rhs: u8,
}

impl QuadrantCertificate {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Parity of the summed degrees over one quadrant of `u`.
pub fn quadrant_degree_parity(
    table: &CrossTable,
    degrees: &[u8],
    u: BoardVertex,
    which: u8,
) -> Result<u8> {
    let sum: usize = table
        .board()
        .quadrant(u, which)?
        .into_iter()
        .map(|s| degrees[table.square_id(s).expect("rectangle square") as usize] as usize)
        .sum();
    Ok((sum % 2) as u8)
}

/// Compares the parity of the G-degree sum over the lower-left quadrant of
/// `u` with the parity of `u`'s degree in H. `reds` may be any red set; the
/// graph need not be a pseudotour.
pub fn quadrant_parity_certificate(
    table: &CrossTable,
    reds: &RedSet,
    u: BoardVertex,
) -> Result<QuadrantCertificate> {
    let board = table.board();
    if !board.is_rectangle() {
        return Err(Error::UnsupportedTopology {
            op: "quadrant_parity_certificate",
            topology: board.topology(),
        });
    }
    let g = crate::engine::realize_graph(table, reds);
    let lhs = quadrant_degree_parity(table, g.degrees(), u, 1)?;
    let h_degree = Dir4::ALL
        .iter()
        .filter_map(|&d| board.edge_from(u, d))
        .filter(|&e| reds.contains(table.edge_id(e).expect("edge exists")))
        .count();
    Ok(QuadrantCertificate {
        lhs,
        rhs: (h_degree % 2) as u8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Board, BoardEdge};
    use crate::engine::realize_graph;

    fn ring4x4(t: &CrossTable) -> RedSet {
        let edges = [
            BoardEdge::vertical(1, 1),
            BoardEdge::vertical(1, 2),
            BoardEdge::vertical(3, 1),
            BoardEdge::vertical(3, 2),
            BoardEdge::horizontal(1, 1),
            BoardEdge::horizontal(2, 1),
            BoardEdge::horizontal(1, 3),
            BoardEdge::horizontal(2, 3),
        ];
        RedSet::from_edges(t, &edges).unwrap()
    }

    fn v(a: i32, b: i32) -> BoardVertex {
        BoardVertex::new(a, b)
    }

    #[test]
    fn h_of_the_4x4_pseudotour_is_the_center_ring() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let h = build_h(&t, &ring4x4(&t));
        let ring = [
            v(1, 1),
            v(1, 2),
            v(1, 3),
            v(2, 3),
            v(3, 3),
            v(3, 2),
            v(3, 1),
            v(2, 1),
        ];
        for (k, &u) in h.vertices().iter().enumerate() {
            let expected = if ring.contains(&u) { 2 } else { 0 };
            assert_eq!(h.degree(k), expected, "{u}");
        }
        assert!(verify_degree_lemmas(&h).pass());
        let cycles = decompose_and_orient(&t, &h).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 8);
        assert_eq!(cycles[0].base(), v(1, 1));
        let mut visited = cycles[0].vertices.clone();
        visited.sort();
        let mut expected = ring.to_vec();
        expected.sort();
        assert_eq!(visited, expected);
    }

    #[test]
    fn empty_and_single_edge_h() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let h = build_h(&t, &RedSet::empty());
        assert!(h.histogram().keys().all(|&d| d == 0));
        assert!(decompose_and_orient(&t, &h).unwrap().is_empty());

        let one = RedSet::from_edges(&t, &[BoardEdge::horizontal(1, 2)]).unwrap();
        let h = build_h(&t, &one);
        assert_eq!(h.histogram().get(&1), Some(&2));
        let report = verify_degree_lemmas(&h);
        assert!(!report.even);
        assert_eq!(report.witness.map(|w| w.1), Some(1));
        assert!(matches!(
            decompose_and_orient(&t, &h),
            Err(Error::Structure { degree: 1, .. })
        ));
    }

    #[test]
    fn sigma_on_the_4x4_ring_is_identity() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let reds = ring4x4(&t);
        let g = realize_graph(&t, &reds);
        let cycles = decompose_and_orient(&t, &build_h(&t, &reds)).unwrap();
        let walk = walk_sigma(&t, &cycles[0], &g).unwrap();
        assert!(walk.sigma.is_identity());
        assert_eq!(walk.sigma.cycle_count(), 4);
        for (k, p) in walk.prefixes.iter().enumerate() {
            assert_eq!(p.parity(), Parity::of(k));
        }
        let braid = braid_correspondence(&t, &g, &cycles, &[walk]).unwrap();
        assert!(braid.pass());
        assert_eq!(braid.g_cycles, 4);
        assert_eq!(braid.entries[0].g_cycles, 4);
    }

    #[test]
    fn single_east_step_matches_the_step_table() {
        // A one-edge prefix of the 4x4 ring starting with an E step.
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let reds = ring4x4(&t);
        let g = realize_graph(&t, &reds);
        let cycles = decompose_and_orient(&t, &build_h(&t, &reds)).unwrap();
        let c = &cycles[0];
        let k = c.steps.iter().position(|s| s.dir == Dir4::E).unwrap();
        let rotated = OrientedHCycle {
            vertices: c.vertices[k..]
                .iter()
                .chain(&c.vertices[..k])
                .copied()
                .collect(),
            steps: c.steps[k..].iter().chain(&c.steps[..k]).copied().collect(),
            winding: c.winding,
        };
        let walk = walk_sigma(&t, &rotated, &g).unwrap();
        assert_eq!(walk.prefixes[1], step_permutation(Dir4::E));
        assert_eq!(walk.prefixes[1].parity(), Parity::Odd);
    }

    #[test]
    fn orientation_has_positive_projection() {
        let t = CrossTable::new(&Board::rectangle(5, 5).unwrap());
        for e in t.colorable_edges() {
            for dir in Dir4::ALL {
                let edge = t.edge(e);
                let along = match edge.dir {
                    EdgeDir::N => matches!(dir, Dir4::N | Dir4::S),
                    EdgeDir::E => matches!(dir, Dir4::E | Dir4::W),
                };
                if !along {
                    continue;
                }
                for dm in orient_cross(&t, e, dir).unwrap() {
                    let (di, dj) = displacement(t.board(), t.square(dm.from), t.square(dm.to));
                    let (ux, uy) = dir.delta();
                    assert!(di * ux + dj * uy > 0);
                }
            }
        }
    }

    #[test]
    fn quadrant_certificate_examples() {
        let t = CrossTable::new(&Board::rectangle(4, 4).unwrap());
        let reds = ring4x4(&t);
        for u in t.board().vertices() {
            let c = quadrant_parity_certificate(&t, &reds, u).unwrap();
            assert_eq!((c.lhs, c.rhs), (0, 0));
        }
        let one = RedSet::from_edges(&t, &[BoardEdge::vertical(1, 1)]).unwrap();
        let c = quadrant_parity_certificate(&t, &one, v(1, 1)).unwrap();
        assert_eq!((c.lhs, c.rhs), (1, 1));
        let c = quadrant_parity_certificate(&t, &one, v(0, 0)).unwrap();
        assert_eq!((c.lhs, c.rhs), (0, 0));

        let torus = CrossTable::new(&Board::new(crate::board::Topology::Torus, 5, 5).unwrap());
        assert!(quadrant_parity_certificate(&torus, &RedSet::empty(), v(1, 1)).is_err());
    }
}
