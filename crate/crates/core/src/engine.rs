//! Crosspatch pseudotours: red-edge sets, the knight graphs they generate,
//! and their decomposition into cycles.

use serde::{Deserialize, Serialize};

use crate::board::{BoardEdge, Square};
use crate::cross::{CrossTable, EdgeId, KnightMove, MoveId, SquareId};
use crate::error::{Error, Result};
use crate::search::{self, Decision};
use crate::symmetry::SymmetryGroup;

/// A set of red board edges, stored as sorted canonical edge ids. It is the
/// canonical encoding of a crosspatch graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RedSet {
    reds: Vec<EdgeId>,
}

impl RedSet {
    pub fn empty() -> Self {
        RedSet::default()
    }

    /// Builds a red set from edge ids, rejecting unknown or uncolourable
    /// edges.
    pub fn from_ids(table: &CrossTable, ids: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let mut reds: Vec<EdgeId> = ids.into_iter().collect();
        reds.sort_unstable();
        reds.dedup();
        for &e in &reds {
            if e as usize >= table.edges().len() {
                return Err(Error::Domain(format!("edge id {e} out of range")));
            }
            if !table.is_colorable(e) {
                return Err(Error::Domain(format!(
                    "edge {} has no cross on this board",
                    table.edge(e)
                )));
            }
        }
        Ok(RedSet { reds })
    }

    pub fn from_edges(table: &CrossTable, edges: &[BoardEdge]) -> Result<Self> {
        let ids = edges
            .iter()
            .map(|&e| {
                table
                    .edge_id(e)
                    .ok_or_else(|| Error::Domain(format!("edge {e} is not on the board")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ids(table, ids)
    }

    pub(crate) fn from_sorted_unchecked(reds: Vec<EdgeId>) -> Self {
        RedSet { reds }
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.reds
    }

    pub fn len(&self) -> usize {
        self.reds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reds.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.reds.binary_search(&e).is_ok()
    }

    pub fn edges(&self, table: &CrossTable) -> Vec<BoardEdge> {
        self.reds.iter().map(|&e| table.edge(e)).collect()
    }
}

/// A knight graph that is a union of complete crosses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosspatchGraph {
    moves: Vec<MoveId>,
    degree: Vec<u8>,
    incident: Vec<Vec<MoveId>>,
}

impl CrosspatchGraph {
    fn from_move_ids(table: &CrossTable, mut moves: Vec<MoveId>) -> Self {
        moves.sort_unstable();
        moves.dedup();
        let mut incident = vec![Vec::new(); table.squares().len()];
        for &mv in &moves {
            for s in table.moves()[mv as usize].ends {
                incident[s as usize].push(mv);
            }
        }
        let degree = incident.iter().map(|v| v.len() as u8).collect();
        CrosspatchGraph {
            moves,
            degree,
            incident,
        }
    }

    /// Builds the graph from explicit knight moves, checking that every move
    /// has its cross partner present.
    pub fn from_knight_moves(table: &CrossTable, moves: &[KnightMove]) -> Result<Self> {
        let mut ids = Vec::with_capacity(moves.len());
        for mv in moves {
            let [a, b] = mv.ends();
            let (Some(a), Some(b)) = (table.square_id(a), table.square_id(b)) else {
                return Err(Error::Domain(format!("move {mv} leaves the board")));
            };
            let id = table
                .moves()
                .iter()
                .position(|m| m.ends == [a, b] || m.ends == [b, a])
                .ok_or_else(|| Error::Domain(format!("{mv} is not a knight move")))?;
            ids.push(id as MoveId);
        }
        let graph = Self::from_move_ids(table, ids);
        for &mv in &graph.moves {
            let e = table.moves()[mv as usize].edge;
            let closed = table
                .pair(e)
                .is_some_and(|pair| pair.iter().all(|p| graph.moves.binary_search(p).is_ok()));
            if !closed {
                return Err(Error::Validation(format!(
                    "move {} is not part of a cross",
                    table.knight_move(mv)
                )));
            }
        }
        Ok(graph)
    }

    pub fn move_ids(&self) -> &[MoveId] {
        &self.moves
    }

    pub fn move_count(&self) -> usize {
        self.moves.len()
    }

    /// Moves as sorted knight-move values.
    pub fn knight_moves(&self, table: &CrossTable) -> Vec<KnightMove> {
        let mut out: Vec<_> = self.moves.iter().map(|&m| table.knight_move(m)).collect();
        out.sort();
        out
    }

    pub fn degree(&self, s: SquareId) -> usize {
        self.degree[s as usize] as usize
    }

    pub fn degrees(&self) -> &[u8] {
        &self.degree
    }

    pub fn incident(&self, s: SquareId) -> &[MoveId] {
        &self.incident[s as usize]
    }

    pub fn is_pseudotour(&self) -> bool {
        self.degree.iter().all(|&d| d == 2)
    }

    /// Red set generating this graph.
    pub fn red_set(&self, table: &CrossTable) -> RedSet {
        let mut reds: Vec<EdgeId> = self
            .moves
            .iter()
            .map(|&m| table.moves()[m as usize].edge)
            .collect();
        reds.sort_unstable();
        reds.dedup();
        RedSet::from_sorted_unchecked(reds)
    }
}

/// The union of both moves of every red edge's cross.
pub fn realize_graph(table: &CrossTable, reds: &RedSet) -> CrosspatchGraph {
    let moves = reds
        .ids()
        .iter()
        .flat_map(|&e| table.pair(e).expect("red edges are colourable"))
        .collect();
    CrosspatchGraph::from_move_ids(table, moves)
}

/// Partition of a 2-regular graph into simple cycles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<SquareId>>,
}

impl CycleDecomposition {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn squares(&self, table: &CrossTable) -> Vec<Vec<Square>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&s| table.square(s)).collect())
            .collect()
    }
}

/// Splits the graph into cycles. Squares of degree 0 are skipped, so the
/// empty graph has no cycles; any other degree than 0 or 2 is an error.
///
/// Each cycle starts at its lowest square id and first steps to the
/// lower-id neighbour.
pub fn cycle_decomposition(table: &CrossTable, g: &CrosspatchGraph) -> Result<CycleDecomposition> {
    if let Some((s, &d)) = g.degree.iter().enumerate().find(|(_, &d)| d != 0 && d != 2) {
        return Err(Error::NotAPseudotour {
            square: table.square(s as SquareId).to_string(),
            degree: d as usize,
        });
    }
    let other = |mv: MoveId, s: SquareId| {
        let [a, b] = table.moves()[mv as usize].ends;
        if a == s {
            b
        } else {
            a
        }
    };
    let mut seen = vec![false; g.degree.len()];
    let mut cycles = Vec::new();
    for start in 0..g.degree.len() as SquareId {
        if seen[start as usize] || g.degree[start as usize] == 0 {
            continue;
        }
        let [m1, m2] = [g.incident[start as usize][0], g.incident[start as usize][1]];
        let (n1, n2) = (other(m1, start), other(m2, start));
        let mut via = if n1 <= n2 { m1 } else { m2 };
        let mut cycle = vec![start];
        seen[start as usize] = true;
        let mut cur = other(via, start);
        while cur != start {
            seen[cur as usize] = true;
            cycle.push(cur);
            let inc = &g.incident[cur as usize];
            via = if inc[0] == via { inc[1] } else { inc[0] };
            cur = other(via, cur);
        }
        cycles.push(cycle);
    }
    Ok(CycleDecomposition { cycles })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Keep only the canonical representative of each symmetry class.
    pub symmetry: bool,
    /// Maximum number of search nodes; `None` means unlimited.
    pub budget: Option<u64>,
    pub parallelism: Parallelism,
    /// Depth at which the search tree is split into independent subtrees.
    pub split_depth: usize,
    /// Resume at this subtree prefix (from a previous [`Progress::cursor`]).
    pub resume: Option<Vec<Decision>>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            symmetry: false,
            budget: None,
            parallelism: Parallelism::default(),
            split_depth: 8,
            resume: None,
        }
    }
}

impl EnumOptions {
    pub fn sequential() -> Self {
        EnumOptions {
            parallelism: Parallelism::Sequential,
            ..Self::default()
        }
    }
}

/// State of an interrupted enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    /// Subtrees fully explored in this run.
    pub completed: usize,
    pub nodes: u64,
    /// Red sets found in the completed subtrees, as edge-id lists.
    pub found: Vec<Vec<EdgeId>>,
    /// Prefix of the first unexplored subtree; pass it back as
    /// [`EnumOptions::resume`] with the same split depth.
    pub cursor: Vec<Decision>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Red sets in canonical order.
    pub sets: Vec<RedSet>,
    /// Number of sets before symmetry reduction.
    pub raw_count: usize,
    pub nodes: u64,
}

/// Enumerates every red set in which each square has exactly `targets[s]`
/// red edges around it.
pub fn enumerate_exact(
    table: &CrossTable,
    targets: &[u8],
    options: &EnumOptions,
) -> Result<Enumeration> {
    let parallel = options.parallelism == Parallelism::Parallel;
    let outcome = search::search(
        table,
        targets,
        options.split_depth,
        options.resume.as_deref(),
        options.budget,
        parallel,
    )?;
    if let Some(cursor) = outcome.cursor {
        return Err(Error::BudgetExhausted {
            budget: options.budget.unwrap_or(0),
            progress: Box::new(Progress {
                completed: outcome.completed,
                nodes: outcome.nodes,
                found: outcome.solutions,
                cursor,
            }),
        });
    }
    let raw_count = outcome.solutions.len();
    let mut sets: Vec<RedSet> = outcome
        .solutions
        .into_iter()
        .map(RedSet::from_sorted_unchecked)
        .collect();
    if options.symmetry {
        let group = SymmetryGroup::new(table);
        sets.retain(|r| group.is_canonical(r));
    }
    Ok(Enumeration {
        sets,
        raw_count,
        nodes: outcome.nodes,
    })
}

/// Every crosspatch pseudotour of the board, as red sets in canonical
/// order.
pub fn enumerate_pseudotours(table: &CrossTable, options: &EnumOptions) -> Result<Enumeration> {
    let targets = vec![2u8; table.squares().len()];
    enumerate_exact(table, &targets, options)
}
